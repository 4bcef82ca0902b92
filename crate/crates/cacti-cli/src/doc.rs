//! The textual cactus document: a small JSON dialect with exact rationals
//! stored as strings. Printing is canonical, so `print` after `parse` returns
//! the input byte for byte on documents this module produced.
//!
//! Layout: `tree` nests the planted structure, where an intersection point is
//! a list of the lobes leaving it and a lobe is a pair `[label, [points...]]`.
//! `lengths` lists every arc in perimeter order, `spines` (spined varieties
//! only) and the optional redundant `radii` are in label order.

use std::collections::BTreeMap;
use std::fmt;

use cacti_core::cactus::{Cactus, Lobe, Site, Variety};
use cacti_core::rational::{fmt_q, parse_q, Q};
use num_traits::Zero;
use serde_json::{Map, Value};

pub const FORMAT_VERSION: u64 = 1;

/// A schema or validation failure, pointing at the offending field.
#[derive(Debug, Clone)]
pub struct DocError {
    pub path: String,
    pub message: String,
}

impl fmt::Display for DocError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

impl std::error::Error for DocError {}

fn err<T>(path: impl Into<String>, message: impl Into<String>) -> Result<T, DocError> {
    Err(DocError { path: path.into(), message: message.into() })
}

fn rational_at(v: &Value, path: &str) -> Result<Q, DocError> {
    let Value::String(s) = v else {
        return err(path, "expected a rational written as a string \"p/q\"");
    };
    parse_q(s).map_or_else(|| err(path, format!("cannot read `{s}` as a rational")), Ok)
}

fn rationals_at(v: &Value, path: &str) -> Result<Vec<Q>, DocError> {
    let Value::Array(items) = v else {
        return err(path, "expected an array of rationals");
    };
    items
        .iter()
        .enumerate()
        .map(|(k, item)| rational_at(item, &format!("{path}[{k}]")))
        .collect()
}

fn decode_site(v: &Value, path: &str) -> Result<Site, DocError> {
    let Value::Array(items) = v else {
        return err(path, "expected an intersection point: a list of lobes");
    };
    let mut lobes = Vec::with_capacity(items.len());
    for (k, item) in items.iter().enumerate() {
        lobes.push(decode_lobe(item, &format!("{path}[{k}]"))?);
    }
    Ok(Site { lobes })
}

fn decode_lobe(v: &Value, path: &str) -> Result<Lobe, DocError> {
    let Value::Array(pair) = v else {
        return err(path, "expected a lobe: a pair [label, [points...]]");
    };
    if pair.len() != 2 {
        return err(path, format!("expected a pair [label, [points...]], got {} items", pair.len()));
    }
    let label = match pair[0].as_u64() {
        Some(l) if l >= 1 => l as usize,
        _ => return err(format!("{path}[0]"), "expected a positive integer label"),
    };
    let Value::Array(subs) = &pair[1] else {
        return err(format!("{path}[1]"), "expected a list of intersection points");
    };
    let mut sites = Vec::with_capacity(subs.len());
    for (k, sub) in subs.iter().enumerate() {
        sites.push(decode_site(sub, &format!("{path}[1][{k}]"))?);
    }
    // Arcs are filled in from `lengths` afterwards.
    Ok(Lobe { label, sites, arcs: Vec::new() })
}

fn fill_arcs(site: &mut Site, lengths: &[Q], cursor: &mut usize) -> Result<(), DocError> {
    for lobe in &mut site.lobes {
        for k in 0..=lobe.sites.len() {
            match lengths.get(*cursor) {
                Some(l) => lobe.arcs.push(l.clone()),
                None => return err("lengths", "fewer entries than arcs in the tree"),
            }
            *cursor += 1;
            if k < lobe.sites.len() {
                fill_arcs(&mut lobe.sites[k], lengths, cursor)?;
            }
        }
    }
    Ok(())
}

fn count_lobes(site: &Site) -> usize {
    site.lobes.iter().map(|l| 1 + l.sites.iter().map(count_lobes).sum::<usize>()).sum()
}

/// Reads a document back into a cactus, reporting the first violation with
/// the path of the field that carries it.
pub fn parse(text: &str) -> Result<Cactus, DocError> {
    let value: Value =
        serde_json::from_str(text).map_err(|e| DocError { path: "syntax".into(), message: e.to_string() })?;
    let Value::Object(fields) = value else {
        return err("", "expected a JSON object at the top level");
    };

    for key in fields.keys() {
        if !matches!(key.as_str(), "format_version" | "lengths" | "n" | "radii" | "spines" | "tree" | "variety") {
            return err(key.clone(), "unknown field");
        }
    }
    let get = |key: &str| -> Result<&Value, DocError> {
        fields.get(key).map_or_else(|| err(key, "missing field"), Ok)
    };

    match get("format_version")?.as_u64() {
        Some(v) if v == FORMAT_VERSION => {}
        Some(v) => return err("format_version", format!("unsupported version {v}, expected {FORMAT_VERSION}")),
        None => return err("format_version", "expected an integer"),
    }

    let variety = match get("variety")? {
        Value::String(s) => match Variety::from_name(s) {
            Some(v) => v,
            None => return err("variety", format!("unknown variety `{s}`; expected cact1, cact, cacti1 or cacti")),
        },
        _ => return err("variety", "expected a string"),
    };

    let mut root = decode_site(get("tree")?, "tree")?;
    let lengths = rationals_at(get("lengths")?, "lengths")?;
    let mut cursor = 0usize;
    fill_arcs(&mut root, &lengths, &mut cursor)?;
    if cursor != lengths.len() {
        return err("lengths", format!("{} entries but the tree has {} arcs", lengths.len(), cursor));
    }

    let n = count_lobes(&root);
    match get("n")?.as_u64() {
        Some(v) if v as usize == n => {}
        Some(v) => return err("n", format!("states {v} lobes but the tree has {n}")),
        None => return err("n", "expected an integer"),
    }

    let mut spines = BTreeMap::new();
    if variety.spined() {
        let vals = rationals_at(get("spines")?, "spines")?;
        if vals.len() != n {
            return err("spines", format!("{} entries for {} lobes", vals.len(), n));
        }
        for (k, s) in vals.into_iter().enumerate() {
            spines.insert(k + 1, s);
        }
    } else if fields.contains_key("spines") {
        return err("spines", format!("variety {} carries no spines", variety.name()));
    }

    let cactus = Cactus::from_parts(variety, root, spines)
        .map_err(|e| DocError { path: "tree".into(), message: e.to_string() })?;

    if let Some(v) = fields.get("radii") {
        let given = rationals_at(v, "radii")?;
        if given.len() != n {
            return err("radii", format!("{} entries for {} lobes", given.len(), n));
        }
        for (k, (stated, actual)) in given.iter().zip(cactus.radii()).enumerate() {
            if *stated != actual {
                return err(
                    format!("radii[{k}]"),
                    format!("lobe {} has arcs summing to {}, not {}", k + 1, fmt_q(&actual), fmt_q(stated)),
                );
            }
        }
    }

    Ok(cactus)
}

fn encode_site(site: &Site) -> Value {
    Value::Array(site.lobes.iter().map(encode_lobe).collect())
}

fn encode_lobe(lobe: &Lobe) -> Value {
    Value::Array(vec![
        Value::from(lobe.label as u64),
        Value::Array(lobe.sites.iter().map(encode_site).collect()),
    ])
}

/// Renders the canonical document for a cactus. Keys are sorted, rationals
/// are exact strings and the text ends with one newline.
pub fn print(c: &Cactus) -> String {
    let mut fields = Map::new();
    fields.insert("format_version".into(), Value::from(FORMAT_VERSION));
    let lengths: Vec<Value> =
        c.word().iter().map(|(_, l)| Value::String(fmt_q(l))).collect();
    fields.insert("lengths".into(), Value::Array(lengths));
    fields.insert("n".into(), Value::from(c.n() as u64));
    let radii: Vec<Value> = c.radii().iter().map(|r| Value::String(fmt_q(r))).collect();
    fields.insert("radii".into(), Value::Array(radii));
    if c.variety.spined() {
        let zero = Q::zero();
        let spines: Vec<Value> = (1..=c.n())
            .map(|l| Value::String(fmt_q(c.spines.get(&l).unwrap_or(&zero))))
            .collect();
        fields.insert("spines".into(), Value::Array(spines));
    }
    fields.insert("tree".into(), encode_site(&c.root));
    fields.insert("variety".into(), Value::String(c.variety.name().into()));
    let mut text = serde_json::to_string_pretty(&Value::Object(fields))
        .expect("documents contain no non-serializable values");
    text.push('\n');
    text
}
