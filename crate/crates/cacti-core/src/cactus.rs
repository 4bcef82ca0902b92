//! Canonical representation of cacti: labelled circles glued along a planted
//! tree, with exact rational arc lengths.
//!
//! The central device is the perimeter word: walking the outside circle from
//! the global zero counterclockwise visits every arc exactly once, so a cactus
//! is equivalently a sequence of `(lobe label, arc length)` segments. The word
//! determines the tree and vice versa; gluing, rotation and degeneration all
//! reduce to list surgery on words followed by a re-parse.

use crate::rational::{rem_euclid, Q};
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CactusError {
    #[error("the perimeter word is empty")]
    EmptyWord,
    #[error("arc length of lobe {0} must be positive")]
    NonPositiveArc(usize),
    #[error("lobe {0} appears in disconnected runs of the perimeter")]
    NonContiguous(usize),
    #[error("lobe {0} has two consecutive arcs with no intersection between them")]
    EmptySite(usize),
    #[error("lobe labels must be exactly 1..=n, got {0:?}")]
    BadLabels(Vec<usize>),
    #[error("position {0} lies outside [0, {1})")]
    OutOfRange(String, String),
    #[error("spine data mismatch: {0}")]
    SpineMismatch(String),
    #[error("lobe {0} is not present")]
    NoSuchLobe(usize),
    #[error("invalid operation: {0}")]
    Invalid(String),
}

/// Which of the four flavours a cactus lives in.
///
/// Normalized varieties pin every lobe radius to 1; spined varieties carry a
/// marked local zero on each lobe in addition to the global zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Variety {
    /// Normalized spineless cacti.
    Cact1,
    /// Spineless cacti with arbitrary radii.
    Cact,
    /// Normalized cacti with spines.
    Cacti1,
    /// Cacti with spines and arbitrary radii.
    Cacti,
}

impl Variety {
    pub fn spined(self) -> bool {
        matches!(self, Variety::Cacti1 | Variety::Cacti)
    }

    pub fn normalized(self) -> bool {
        matches!(self, Variety::Cact1 | Variety::Cacti1)
    }

    /// The variety with the same radii but no spines.
    pub fn spineless_counterpart(self) -> Variety {
        match self {
            Variety::Cacti1 => Variety::Cact1,
            Variety::Cacti => Variety::Cact,
            v => v,
        }
    }

    /// The variety with the same radii and spines added.
    pub fn spined_counterpart(self) -> Variety {
        match self {
            Variety::Cact1 => Variety::Cacti1,
            Variety::Cact => Variety::Cacti,
            v => v,
        }
    }

    /// The normalized variety with the same spine flavour.
    pub fn normalized_counterpart(self) -> Variety {
        match self {
            Variety::Cact => Variety::Cact1,
            Variety::Cacti => Variety::Cacti1,
            v => v,
        }
    }

    /// The free-radius variety with the same spine flavour.
    pub fn unnormalized_counterpart(self) -> Variety {
        match self {
            Variety::Cact1 => Variety::Cact,
            Variety::Cacti1 => Variety::Cacti,
            v => v,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Variety::Cact1 => "cact1",
            Variety::Cact => "cact",
            Variety::Cacti1 => "cacti1",
            Variety::Cacti => "cacti",
        }
    }

    pub fn from_name(s: &str) -> Option<Variety> {
        match s {
            "cact1" => Some(Variety::Cact1),
            "cact" => Some(Variety::Cact),
            "cacti1" => Some(Variety::Cacti1),
            "cacti" => Some(Variety::Cacti),
            _ => None,
        }
    }
}

/// One circle of a cactus. `arcs` always has one more entry than `sites`:
/// `arcs[t]` is the arc ending at `sites[t]`, the final arc closes the circle
/// back to the entry point. All arcs are strictly positive in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Lobe {
    pub label: usize,
    pub sites: Vec<Site>,
    pub arcs: Vec<Q>,
}

/// An attachment point carrying the lobes that sprout from it, in the order
/// the perimeter descends into them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Site {
    pub lobes: Vec<Lobe>,
}

impl Lobe {
    pub fn radius(&self) -> Q {
        self.arcs.iter().sum()
    }
}

/// A cactus in canonical form. The root site is the global zero; its lobes are
/// the circles through the global zero in counterclockwise order, the first of
/// them being the marked (root) circle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cactus {
    pub variety: Variety,
    pub root: Site,
    /// For spined varieties: per label, the arc length from the lobe's entry
    /// point counterclockwise to its local zero, in `[0, radius)`.
    pub spines: BTreeMap<usize, Q>,
}

/// One arc as met along the outside circle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerimeterArc {
    pub label: usize,
    /// Index of the arc within its lobe, in entry-first counterclockwise order.
    pub arc: usize,
    pub len: Q,
}

// ---------------------------------------------------------------------------
// Word parsing
// ---------------------------------------------------------------------------

struct Frame {
    label: usize,
    arcs: Vec<Q>,
    sites: Vec<Site>,
    pending: Vec<Lobe>,
    seen: usize,
    total: usize,
}

impl Frame {
    fn finish(mut self) -> Lobe {
        debug_assert!(self.pending.is_empty());
        debug_assert_eq!(self.seen, self.total);
        self.sites.shrink_to_fit();
        Lobe { label: self.label, sites: self.sites, arcs: self.arcs }
    }
}

/// Parses a strict perimeter word (positive lengths, no same-label adjacency)
/// into the planted tree it traces out.
pub fn parse_word(word: &[(usize, Q)]) -> Result<Site, CactusError> {
    if word.is_empty() {
        return Err(CactusError::EmptyWord);
    }
    let mut count: BTreeMap<usize, usize> = BTreeMap::new();
    for (label, len) in word {
        if !len.is_positive() {
            return Err(CactusError::NonPositiveArc(*label));
        }
        *count.entry(*label).or_insert(0) += 1;
    }
    let mut stack: Vec<Frame> = Vec::new();
    let mut root_pending: Vec<Lobe> = Vec::new();
    let mut opened: BTreeSet<usize> = BTreeSet::new();

    let pop_finished = |stack: &mut Vec<Frame>, root_pending: &mut Vec<Lobe>| {
        while let Some(top) = stack.last() {
            if top.seen < top.total {
                break;
            }
            let done = stack.pop().unwrap().finish();
            match stack.last_mut() {
                Some(parent) => parent.pending.push(done),
                None => root_pending.push(done),
            }
        }
    };

    for (label, len) in word {
        pop_finished(&mut stack, &mut root_pending);
        match stack.last_mut() {
            Some(top) if top.label == *label => {
                if top.pending.is_empty() {
                    return Err(CactusError::EmptySite(*label));
                }
                top.sites.push(Site { lobes: std::mem::take(&mut top.pending) });
                top.arcs.push(len.clone());
                top.seen += 1;
            }
            _ => {
                if !opened.insert(*label) {
                    return Err(CactusError::NonContiguous(*label));
                }
                stack.push(Frame {
                    label: *label,
                    arcs: vec![len.clone()],
                    sites: Vec::new(),
                    pending: Vec::new(),
                    seen: 1,
                    total: count[label],
                });
            }
        }
    }
    pop_finished(&mut stack, &mut root_pending);
    debug_assert!(stack.is_empty());
    Ok(Site { lobes: root_pending })
}

/// Drops zero-length segments and merges same-label neighbours; the result is
/// a strict word. This is exactly the geometric degeneration: a collapsing arc
/// slides its endpoints together, merging attachment points and transferring
/// the root when the collapse swallows the first arc of the outside circle.
pub fn canonicalize_word(word: &[(usize, Q)]) -> Result<Vec<(usize, Q)>, CactusError> {
    let mut out: Vec<(usize, Q)> = Vec::with_capacity(word.len());
    for (label, len) in word {
        if len.is_negative() {
            return Err(CactusError::NonPositiveArc(*label));
        }
        if len.is_zero() {
            continue;
        }
        match out.last_mut() {
            Some((l, acc)) if l == label => *acc += len,
            _ => out.push((*label, len.clone())),
        }
    }
    if out.is_empty() {
        return Err(CactusError::EmptyWord);
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Cactus
// ---------------------------------------------------------------------------

impl Cactus {
    /// Builds and validates a cactus from its parts.
    pub fn from_parts(
        variety: Variety,
        root: Site,
        spines: BTreeMap<usize, Q>,
    ) -> Result<Cactus, CactusError> {
        let c = Cactus { variety, root, spines };
        match c.validate().into_iter().next() {
            None => Ok(c),
            Some(v) => Err(CactusError::Invalid(v)),
        }
    }

    /// Builds a cactus from a perimeter word. Spines are given per label and
    /// reduced modulo the lobe radius.
    pub fn from_word(
        variety: Variety,
        word: &[(usize, Q)],
        spines: &BTreeMap<usize, Q>,
    ) -> Result<Cactus, CactusError> {
        let root = parse_word(word)?;
        let mut c = Cactus { variety, root, spines: BTreeMap::new() };
        if variety.spined() {
            let mut reduced = BTreeMap::new();
            for label in c.labels() {
                let r = c.radius(label)?;
                let raw = spines.get(&label).cloned().unwrap_or_else(Q::zero);
                reduced.insert(label, rem_euclid(&raw, &r));
            }
            c.spines = reduced;
        } else if !spines.is_empty() {
            return Err(CactusError::SpineMismatch(
                "spineless variety given spine offsets".into(),
            ));
        }
        match c.validate().into_iter().next() {
            None => Ok(c),
            Some(v) => Err(CactusError::Invalid(v)),
        }
    }

    /// A single lobe labelled 1.
    pub fn single(variety: Variety, radius: Q, spine: Option<Q>) -> Result<Cactus, CactusError> {
        let mut spines = BTreeMap::new();
        if variety.spined() {
            spines.insert(1, spine.unwrap_or_else(Q::zero));
        } else if spine.is_some() {
            return Err(CactusError::SpineMismatch("spine on spineless variety".into()));
        }
        Cactus::from_word(variety, &[(1, radius)], &spines)
    }

    /// All lobes attached at the global zero, labelled 1..=n in perimeter order.
    pub fn corolla(variety: Variety, radii: &[Q]) -> Result<Cactus, CactusError> {
        let word: Vec<(usize, Q)> =
            radii.iter().cloned().enumerate().map(|(k, r)| (k + 1, r)).collect();
        Cactus::from_word(variety, &word, &BTreeMap::new())
    }

    /// Number of lobes.
    pub fn n(&self) -> usize {
        fn count(site: &Site) -> usize {
            site.lobes.iter().map(|l| 1 + l.sites.iter().map(count).sum::<usize>()).sum()
        }
        count(&self.root)
    }

    /// Sorted list of lobe labels.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = Vec::new();
        fn walk(site: &Site, out: &mut Vec<usize>) {
            for lobe in &site.lobes {
                out.push(lobe.label);
                for s in &lobe.sites {
                    walk(s, out);
                }
            }
        }
        walk(&self.root, &mut out);
        out.sort_unstable();
        out
    }

    fn lobe(&self, label: usize) -> Option<&Lobe> {
        fn find<'a>(site: &'a Site, label: usize) -> Option<&'a Lobe> {
            for lobe in &site.lobes {
                if lobe.label == label {
                    return Some(lobe);
                }
                for s in &lobe.sites {
                    if let Some(hit) = find(s, label) {
                        return Some(hit);
                    }
                }
            }
            None
        }
        find(&self.root, label)
    }

    pub fn radius(&self, label: usize) -> Result<Q, CactusError> {
        self.lobe(label).map(Lobe::radius).ok_or(CactusError::NoSuchLobe(label))
    }

    /// Radii indexed by label 1..=n.
    pub fn radii(&self) -> Vec<Q> {
        (1..=self.n()).map(|l| self.radius(l).expect("canonical labels")).collect()
    }

    /// Total length of the outside circle.
    pub fn total_length(&self) -> Q {
        fn walk(site: &Site) -> Q {
            site.lobes
                .iter()
                .map(|l| l.radius() + l.sites.iter().map(walk).sum::<Q>())
                .sum()
        }
        walk(&self.root)
    }

    /// The outside circle as ordered arcs, starting at the global zero.
    pub fn perimeter(&self) -> Vec<PerimeterArc> {
        let mut out = Vec::new();
        fn walk_site(site: &Site, out: &mut Vec<PerimeterArc>) {
            for lobe in &site.lobes {
                walk_lobe(lobe, out);
            }
        }
        fn walk_lobe(lobe: &Lobe, out: &mut Vec<PerimeterArc>) {
            for (t, site) in lobe.sites.iter().enumerate() {
                out.push(PerimeterArc {
                    label: lobe.label,
                    arc: t,
                    len: lobe.arcs[t].clone(),
                });
                walk_site(site, out);
            }
            out.push(PerimeterArc {
                label: lobe.label,
                arc: lobe.sites.len(),
                len: lobe.arcs[lobe.sites.len()].clone(),
            });
        }
        walk_site(&self.root, &mut out);
        out
    }

    /// The perimeter word.
    pub fn word(&self) -> Vec<(usize, Q)> {
        self.perimeter().into_iter().map(|a| (a.label, a.len)).collect()
    }

    /// Maps a perimeter position `s` in `[0, R)` to the lobe it lies on and
    /// the counterclockwise offset from that lobe's entry point. A position
    /// exactly at an attachment point belongs to the arc it begins.
    pub fn locate(&self, s: &Q) -> Result<(usize, Q), CactusError> {
        let total = self.total_length();
        if s.is_negative() || *s >= total {
            return Err(CactusError::OutOfRange(s.to_string(), total.to_string()));
        }
        let mut pos = Q::zero();
        let mut offsets: BTreeMap<usize, Q> = BTreeMap::new();
        for arc in self.perimeter() {
            let entry = offsets.entry(arc.label).or_insert_with(Q::zero);
            let end = pos.clone() + &arc.len;
            if *s < end {
                return Ok((arc.label, entry.clone() + (s - &pos)));
            }
            *entry += &arc.len;
            pos = end;
        }
        unreachable!("position checked against total length")
    }

    /// Canonical-form and variety checks; empty means valid.
    pub fn validate(&self) -> Vec<String> {
        let mut out = Vec::new();
        let labels = {
            let mut all = Vec::new();
            fn walk(site: &Site, out: &mut Vec<usize>) {
                for lobe in &site.lobes {
                    out.push(lobe.label);
                    for s in &lobe.sites {
                        walk(s, out);
                    }
                }
            }
            walk(&self.root, &mut all);
            all
        };
        if labels.is_empty() {
            out.push("cactus has no lobes".into());
            return out;
        }
        let mut sorted = labels.clone();
        sorted.sort_unstable();
        if sorted != (1..=labels.len()).collect::<Vec<_>>() {
            out.push(format!("labels are not 1..={}: {:?}", labels.len(), sorted));
        }
        fn walk_structure(site: &Site, root: bool, out: &mut Vec<String>) {
            if site.lobes.is_empty() {
                out.push(if root {
                    "root site has no lobes".into()
                } else {
                    "interior site has no lobes".into()
                });
            }
            for lobe in &site.lobes {
                if lobe.arcs.len() != lobe.sites.len() + 1 {
                    out.push(format!(
                        "lobe {}: {} arcs for {} sites",
                        lobe.label,
                        lobe.arcs.len(),
                        lobe.sites.len()
                    ));
                }
                for a in &lobe.arcs {
                    if !a.is_positive() {
                        out.push(format!("lobe {}: non-positive arc {}", lobe.label, a));
                    }
                }
                for s in &lobe.sites {
                    walk_structure(s, false, out);
                }
            }
        }
        walk_structure(&self.root, true, &mut out);
        if !out.is_empty() {
            return out;
        }
        if self.variety.normalized() {
            for lobe in self.labels() {
                let r = self.radius(lobe).unwrap();
                if !r.is_one() {
                    out.push(format!("lobe {lobe}: radius {r} in a normalized variety"));
                }
            }
        }
        if self.variety.spined() {
            for lobe in self.labels() {
                match self.spines.get(&lobe) {
                    None => out.push(format!("lobe {lobe}: missing spine offset")),
                    Some(s) => {
                        let r = self.radius(lobe).unwrap();
                        if s.is_negative() || *s >= r {
                            out.push(format!("lobe {lobe}: spine {s} outside [0, {r})"));
                        }
                    }
                }
            }
            for label in self.spines.keys() {
                if self.lobe(*label).is_none() {
                    out.push(format!("spine offset for absent lobe {label}"));
                }
            }
        } else if !self.spines.is_empty() {
            out.push("spine offsets on a spineless variety".into());
        }
        out
    }

    /// Applies a bijective relabelling `f` to all lobe labels.
    pub fn relabel_with(&self, f: impl Fn(usize) -> usize) -> Result<Cactus, CactusError> {
        fn map_site(site: &Site, f: &impl Fn(usize) -> usize) -> Site {
            Site {
                lobes: site
                    .lobes
                    .iter()
                    .map(|l| Lobe {
                        label: f(l.label),
                        sites: l.sites.iter().map(|s| map_site(s, f)).collect(),
                        arcs: l.arcs.clone(),
                    })
                    .collect(),
            }
        }
        let root = map_site(&self.root, &f);
        let spines = self.spines.iter().map(|(l, s)| (f(*l), s.clone())).collect();
        Cactus::from_parts(self.variety, root, spines)
    }

    /// The underlying combinatorial type.
    pub fn toptype(&self) -> TopType {
        fn map_site(site: &Site) -> TtSite {
            TtSite {
                lobes: site
                    .lobes
                    .iter()
                    .map(|l| TtLobe {
                        label: l.label,
                        sites: l.sites.iter().map(map_site).collect(),
                    })
                    .collect(),
            }
        }
        TopType { root: map_site(&self.root) }
    }

    /// Drops the local zeros (Cacti -> Cact, Cacti1 -> Cact1).
    pub fn forget_spines(&self) -> Cactus {
        Cactus {
            variety: self.variety.spineless_counterpart(),
            root: self.root.clone(),
            spines: BTreeMap::new(),
        }
    }

    /// Embeds a spineless cactus as the spined cactus whose local zeros all
    /// sit at the entry points (Cact -> Cacti, Cact1 -> Cacti1).
    pub fn embed_spineless(&self) -> Cactus {
        if self.variety.spined() {
            return self.clone();
        }
        let spines = self.labels().into_iter().map(|l| (l, Q::zero())).collect();
        Cactus {
            variety: self.variety.spined_counterpart(),
            root: self.root.clone(),
            spines,
        }
    }

    /// Splits into per-label radii and the lobewise-normalized cactus.
    pub fn normalize(&self) -> (Vec<Q>, Cactus) {
        let radii = self.radii();
        fn map_site(site: &Site) -> Site {
            Site {
                lobes: site
                    .lobes
                    .iter()
                    .map(|l| {
                        let r = l.radius();
                        Lobe {
                            label: l.label,
                            sites: l.sites.iter().map(map_site).collect(),
                            arcs: l.arcs.iter().map(|a| a / &r).collect(),
                        }
                    })
                    .collect(),
            }
        }
        let root = map_site(&self.root);
        let spines = self
            .spines
            .iter()
            .map(|(l, s)| (*l, s / self.radius(*l).unwrap()))
            .collect();
        let norm = Cactus {
            variety: self.variety.normalized_counterpart(),
            root,
            spines,
        };
        (radii, norm)
    }

    /// Rescales a normalized cactus back to the given per-label radii.
    pub fn with_radii(&self, radii: &[Q], variety: Variety) -> Result<Cactus, CactusError> {
        if radii.len() != self.n() {
            return Err(CactusError::Invalid(format!(
                "{} radii for {} lobes",
                radii.len(),
                self.n()
            )));
        }
        if radii.iter().any(|r| !r.is_positive()) {
            return Err(CactusError::Invalid("radii must be positive".into()));
        }
        fn map_site(site: &Site, radii: &[Q]) -> Site {
            Site {
                lobes: site
                    .lobes
                    .iter()
                    .map(|l| {
                        let r = l.radius();
                        let target = &radii[l.label - 1];
                        Lobe {
                            label: l.label,
                            sites: l.sites.iter().map(|s| map_site(s, radii)).collect(),
                            arcs: l.arcs.iter().map(|a| a / &r * target).collect(),
                        }
                    })
                    .collect(),
            }
        }
        let root = map_site(&self.root, radii);
        let spines = self
            .spines
            .iter()
            .map(|(l, s)| {
                let r = self.radius(*l).unwrap();
                (*l, s / r * &radii[*l - 1])
            })
            .collect();
        Cactus::from_parts(variety, root, spines)
    }

    /// Moves the global zero to perimeter position `pos` (taken modulo the
    /// total length). The old zero ceases to be special unless it is an
    /// intersection point; the lobe whose arc begins at the new zero becomes
    /// the root lobe. Spine offsets follow their lobes as material points.
    pub fn rotate_zero_to(&self, pos: &Q) -> Cactus {
        let total = self.total_length();
        let pos = rem_euclid(pos, &total);
        if pos.is_zero() {
            return self.clone();
        }
        let word = self.word();

        // Start position of each segment along the perimeter.
        let mut starts = Vec::with_capacity(word.len());
        let mut acc = Q::zero();
        for (_, len) in &word {
            starts.push(acc.clone());
            acc += len;
        }

        // Split the segment containing pos if it falls strictly inside one.
        let mut cut_index = word.len();
        let mut rotated: Vec<(usize, Q)> = Vec::with_capacity(word.len() + 1);
        for (k, (label, len)) in word.iter().enumerate() {
            let start = &starts[k];
            let end = start.clone() + len;
            if *start < pos && pos < end {
                rotated.push((*label, pos.clone() - start));
                rotated.push((*label, end - &pos));
                cut_index = k + 1;
            } else {
                if *start == pos {
                    cut_index = k;
                }
                rotated.push((*label, len.clone()));
            }
        }
        rotated.rotate_left(cut_index);

        // The seam where the old zero now sits is interior; merge across it
        // when the old zero was not an intersection point.
        let mut merged: Vec<(usize, Q)> = Vec::with_capacity(rotated.len());
        for (label, len) in rotated {
            match merged.last_mut() {
                Some((l, acc)) if *l == label => *acc += len,
                _ => merged.push((label, len)),
            }
        }

        let mut spines = BTreeMap::new();
        if self.variety.spined() {
            for (label, sigma) in &self.spines {
                let r = self.radius(*label).unwrap();
                // Material of this lobe swept before the cut moves the entry
                // point that far counterclockwise around the lobe.
                let mut swept = Q::zero();
                for (k, (l, len)) in word.iter().enumerate() {
                    if l != label {
                        continue;
                    }
                    let start = &starts[k];
                    if *start >= pos {
                        break;
                    }
                    let end = start.clone() + len;
                    let upper = if end < pos { end } else { pos.clone() };
                    swept += upper - start;
                }
                spines.insert(*label, rem_euclid(&(sigma - swept), &r));
            }
        }

        let root = parse_word(&merged).expect("rotation of a valid word is valid");
        Cactus { variety: self.variety, root, spines }
    }
}

// ---------------------------------------------------------------------------
// TopType
// ---------------------------------------------------------------------------

/// A lobe of a combinatorial type: label plus attachment sites.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TtLobe {
    pub label: usize,
    pub sites: Vec<TtSite>,
}

/// An attachment point of a combinatorial type.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TtSite {
    pub lobes: Vec<TtLobe>,
}

/// The combinatorial type of a cactus: the planted tree of lobes and
/// attachment points, with all metric data forgotten.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TopType {
    pub root: TtSite,
}

impl TopType {
    pub fn n(&self) -> usize {
        fn count(site: &TtSite) -> usize {
            site.lobes.iter().map(|l| 1 + l.sites.iter().map(count).sum::<usize>()).sum()
        }
        count(&self.root)
    }

    /// Cell dimension: the total number of attachment sites.
    pub fn dim(&self) -> usize {
        fn count(site: &TtSite) -> usize {
            site.lobes
                .iter()
                .map(|l| l.sites.len() + l.sites.iter().map(count).sum::<usize>())
                .sum()
        }
        count(&self.root)
    }

    /// Label sequence of the perimeter: one entry per arc.
    pub fn label_word(&self) -> Vec<usize> {
        fn walk_site(site: &TtSite, out: &mut Vec<usize>) {
            for lobe in &site.lobes {
                for s in &lobe.sites {
                    out.push(lobe.label);
                    walk_site(s, out);
                }
                out.push(lobe.label);
            }
        }
        let mut out = Vec::new();
        walk_site(&self.root, &mut out);
        out
    }

    /// Rebuilds a type from its label word.
    pub fn from_label_word(word: &[usize]) -> Result<TopType, CactusError> {
        let q_word: Vec<(usize, Q)> = word.iter().map(|l| (*l, Q::one())).collect();
        let site = parse_word(&q_word)?;
        fn strip(site: &Site) -> TtSite {
            TtSite {
                lobes: site
                    .lobes
                    .iter()
                    .map(|l| TtLobe {
                        label: l.label,
                        sites: l.sites.iter().map(strip).collect(),
                    })
                    .collect(),
            }
        }
        Ok(TopType { root: strip(&site) })
    }

    /// Deterministic text key used for ordering and deduplication.
    pub fn key(&self) -> String {
        let parts: Vec<String> = self.label_word().iter().map(|l| l.to_string()).collect();
        parts.join(".")
    }

    pub fn relabel_with(&self, f: impl Fn(usize) -> usize) -> TopType {
        fn map_site(site: &TtSite, f: &impl Fn(usize) -> usize) -> TtSite {
            TtSite {
                lobes: site
                    .lobes
                    .iter()
                    .map(|l| TtLobe {
                        label: f(l.label),
                        sites: l.sites.iter().map(|s| map_site(s, f)).collect(),
                    })
                    .collect(),
            }
        }
        TopType { root: map_site(&self.root, &f) }
    }

    /// Site counts per label 1..=n; lobe `l` spans a simplex of this dimension.
    pub fn lobe_dims(&self) -> Vec<usize> {
        let mut dims = vec![0; self.n()];
        fn walk(site: &TtSite, dims: &mut Vec<usize>) {
            for lobe in &site.lobes {
                dims[lobe.label - 1] = lobe.sites.len();
                for s in &lobe.sites {
                    walk(s, dims);
                }
            }
        }
        walk(&self.root, &mut dims);
        dims
    }

    /// The cactus of this type whose lobe radii are 1 and whose arcs within
    /// each lobe are proportional to 1, 2, ..., q+1. Deterministic; used to
    /// instantiate types as geometric objects.
    pub fn standard_cactus(&self, variety: Variety) -> Cactus {
        fn build(site: &TtSite) -> Site {
            Site {
                lobes: site
                    .lobes
                    .iter()
                    .map(|l| {
                        let k = l.sites.len() + 1;
                        let denom = Q::from_integer(((k * (k + 1)) / 2).into());
                        Lobe {
                            label: l.label,
                            sites: l.sites.iter().map(build).collect(),
                            arcs: (1..=k)
                                .map(|t| Q::from_integer(t.into()) / &denom)
                                .collect(),
                        }
                    })
                    .collect(),
            }
        }
        let root = build(&self.root);
        let mut spines = BTreeMap::new();
        if variety.spined() {
            for l in 1..=self.n() {
                spines.insert(l, Q::zero());
            }
        }
        let c = Cactus { variety: variety.normalized_counterpart(), root, spines };
        if variety.normalized() {
            let mut out = c;
            out.variety = variety;
            out
        } else {
            let radii = vec![Q::one(); c.n()];
            c.with_radii(&radii, variety).expect("standard cactus is valid")
        }
    }
}
