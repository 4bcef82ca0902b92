//! Gluing of cacti.
//!
//! `compose` inserts one cactus into a lobe of another: the lobe and the
//! inserted boundary are brought to a common length (how depends on the
//! variety), spined varieties align the lobe's local zero with the guest's
//! global zero, and the guest's outside circle replaces the lobe's circle
//! while the host's subtrees keep their attachment positions. On top of the
//! four variety-specific wrappers this module provides the circle action and
//! its companion diagonal, the twisted and perturbed compositions that relate
//! the varieties to one another, lobe contraction and its one-sided inverse,
//! and the corolla suboperad with its component permutations.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::angle::Angle;
use crate::cactus::{canonicalize_word, Cactus, CactusError, TopType, Variety};
use crate::operad::{check_associativity, Perm, QuasiOperad};
use crate::rational::{q, rem_euclid, Q};

// ---------------------------------------------------------------------------
// The gluing engine
// ---------------------------------------------------------------------------

/// Rescales every lobe by one factor; spines follow their material.
fn scale_all(c: &Cactus, factor: &Q) -> Cactus {
    let word: Vec<(usize, Q)> = c.word().into_iter().map(|(l, a)| (l, a * factor)).collect();
    let spines: BTreeMap<usize, Q> = c.spines.iter().map(|(l, s)| (*l, s * factor)).collect();
    Cactus::from_word(c.variety, &word, &spines).expect("uniform rescale keeps the word valid")
}

/// Rescales a single lobe so its radius becomes `target`, keeping attachment
/// positions at the same fractions of the circle.
fn scale_lobe(c: &Cactus, label: usize, target: &Q) -> Cactus {
    let factor = target / c.radius(label).expect("label present");
    let word: Vec<(usize, Q)> = c
        .word()
        .into_iter()
        .map(|(l, a)| if l == label { (l, a * &factor) } else { (l, a) })
        .collect();
    let mut spines = c.spines.clone();
    if let Some(s) = spines.get_mut(&label) {
        *s *= &factor;
    }
    Cactus::from_word(c.variety, &word, &spines).expect("per-lobe rescale keeps the word valid")
}

/// Replaces lobe `i` of `host` by the outside circle of `guest`.
///
/// Requires `guest.total_length() == host.radius(i)` and `guest` already
/// rotated so its global zero sits where lobe `i`'s walk begins. The arcs of
/// lobe `i` consume the guest's perimeter word in order, so each subtree of
/// the host keeps its position, now measured along the guest's boundary.
/// Guest labels move up by `i - 1`, host labels above `i` make room.
fn splice(host: &Cactus, i: usize, guest: &Cactus) -> Result<Cactus, CactusError> {
    let m = guest.n();
    let up = |l: usize| if l < i { l } else { l + m - 1 };
    let shift = |l: usize| l + i - 1;

    let guest_word = guest.word();
    let host_word = host.word();
    let mut out: Vec<(usize, Q)> = Vec::with_capacity(host_word.len() + guest_word.len());
    let mut cursor = 0usize;
    let mut eaten = Q::zero();
    for (label, len) in host_word {
        if label != i {
            out.push((up(label), len));
            continue;
        }
        let mut need = len;
        while need.is_positive() {
            let (gl, glen) = &guest_word[cursor];
            let avail = glen - &eaten;
            if avail <= need {
                out.push((shift(*gl), avail.clone()));
                need -= avail;
                cursor += 1;
                eaten = Q::zero();
            } else {
                out.push((shift(*gl), need.clone()));
                eaten += &need;
                need = Q::zero();
            }
        }
    }
    debug_assert_eq!(cursor, guest_word.len());
    debug_assert!(eaten.is_zero());

    let mut spines = BTreeMap::new();
    if host.variety.spined() {
        for (l, s) in &host.spines {
            if *l != i {
                spines.insert(up(*l), s.clone());
            }
        }
        for (l, s) in &guest.spines {
            spines.insert(shift(*l), s.clone());
        }
    }
    Cactus::from_word(host.variety, &out, &spines)
}

/// Glues `c2` into lobe `i` of `c`. Both must live in the same variety.
///
/// Normalized varieties stretch lobe `i` to the guest's total length and keep
/// the guest as is; free-radius varieties shrink the whole guest so its total
/// length matches the lobe's radius. Spined varieties then rotate the guest
/// so its global zero lands on the lobe's local zero.
pub fn compose(c: &Cactus, i: usize, c2: &Cactus) -> Result<Cactus, CactusError> {
    if c.variety != c2.variety {
        return Err(CactusError::Invalid(format!(
            "cannot glue a {} cactus into a {} cactus",
            c2.variety.name(),
            c.variety.name()
        )));
    }
    if i < 1 || i > c.n() {
        return Err(CactusError::NoSuchLobe(i));
    }
    let variety = c.variety;
    // The stretched host momentarily leaves the normalized variety, so the
    // assembly runs with free radii and the result is tagged back at the end.
    let free = variety.unnormalized_counterpart();
    let retag = |x: &Cactus| Cactus {
        variety: free,
        root: x.root.clone(),
        spines: x.spines.clone(),
    };
    let (host, guest) = if variety.normalized() {
        (scale_lobe(&retag(c), i, &c2.total_length()), retag(c2))
    } else {
        let factor = c.radius(i)? / c2.total_length();
        (c.clone(), scale_all(c2, &factor))
    };
    let guest = if variety.spined() {
        let sigma = host.spines.get(&i).cloned().unwrap_or_else(Q::zero);
        guest.rotate_zero_to(&-sigma)
    } else {
        guest
    };
    let glued = splice(&host, i, &guest)?;
    if variety.normalized() {
        Cactus::from_parts(variety, glued.root, glued.spines)
    } else {
        Ok(glued)
    }
}

fn expect_variety(v: Variety, c: &Cactus, c2: &Cactus) -> Result<(), CactusError> {
    for side in [c, c2] {
        if side.variety != v {
            return Err(CactusError::Invalid(format!(
                "expected a {} cactus, got {}",
                v.name(),
                side.variety.name()
            )));
        }
    }
    Ok(())
}

pub fn compose_cact1(c: &Cactus, i: usize, c2: &Cactus) -> Result<Cactus, CactusError> {
    expect_variety(Variety::Cact1, c, c2)?;
    compose(c, i, c2)
}

pub fn compose_cact(c: &Cactus, i: usize, c2: &Cactus) -> Result<Cactus, CactusError> {
    expect_variety(Variety::Cact, c, c2)?;
    compose(c, i, c2)
}

pub fn compose_cacti1(c: &Cactus, i: usize, c2: &Cactus) -> Result<Cactus, CactusError> {
    expect_variety(Variety::Cacti1, c, c2)?;
    compose(c, i, c2)
}

pub fn compose_cacti(c: &Cactus, i: usize, c2: &Cactus) -> Result<Cactus, CactusError> {
    expect_variety(Variety::Cacti, c, c2)?;
    compose(c, i, c2)
}

// ---------------------------------------------------------------------------
// Circle action and the angle bookkeeping of spined gluing
// ---------------------------------------------------------------------------

/// Rotates the global zero clockwise by the fraction `theta` of the total
/// length: the new zero sits at position `(1 - theta) * total` of the old
/// walk. Spines ride along with their lobes.
pub fn s1_action(theta: &Angle, c: &Cactus) -> Cactus {
    let pos = (Q::one() - theta.as_q()) * c.total_length();
    c.rotate_zero_to(&pos)
}

/// Per lobe, the fraction of that lobe's circle the clockwise rotation by
/// `theta` sweeps across, i.e. the lobe's share of the perimeter between the
/// new zero and the old one. Every coordinate starts at zero and winds around
/// exactly once as `theta` does.
pub fn homotopy_diagonal(c: &Cactus, theta: &Angle) -> Vec<Angle> {
    let total = c.total_length();
    let pos = rem_euclid(&((Q::one() - theta.as_q()) * &total), &total);
    let radii = c.radii();
    let mut crossed = vec![Q::zero(); c.n()];
    let mut acc = Q::zero();
    for arc in c.perimeter() {
        let start = acc.clone();
        acc += &arc.len;
        let lo = if start > pos { start } else { pos.clone() };
        if acc > lo {
            crossed[arc.label - 1] += &acc - lo;
        }
    }
    crossed.into_iter().zip(radii).map(|(d, r)| Angle::new(d / r)).collect()
}

/// Spine offsets as fractions of their lobes, in label order. Spineless
/// cacti read as all zeros.
pub fn spine_angles(c: &Cactus) -> Vec<Angle> {
    let radii = c.radii();
    (1..=c.n())
        .map(|l| {
            let s = c.spines.get(&l).cloned().unwrap_or_else(Q::zero);
            Angle::new(s / &radii[l - 1])
        })
        .collect()
}

/// Pairs a spineless cactus with per-lobe angles to produce its spined
/// counterpart, placing each local zero the given fraction around its lobe.
pub fn with_spine_angles(
    c: &Cactus,
    angles: &[Angle],
    variety: Variety,
) -> Result<Cactus, CactusError> {
    if !variety.spined() {
        return Err(CactusError::SpineMismatch("target variety has no spines".into()));
    }
    if angles.len() != c.n() {
        return Err(CactusError::Invalid(format!(
            "{} angles for {} lobes",
            angles.len(),
            c.n()
        )));
    }
    let radii = c.radii();
    let spines: BTreeMap<usize, Q> = angles
        .iter()
        .enumerate()
        .map(|(k, a)| (k + 1, a.as_q() * &radii[k]))
        .collect();
    Cactus::from_parts(variety, c.root.clone(), spines)
}

/// Spineless gluing twisted by a rotation of the guest: the angle plays the
/// role the glued lobe's spine would have played.
pub fn twisted_compose(
    c: &Cactus,
    i: usize,
    theta: &Angle,
    c2: &Cactus,
) -> Result<Cactus, CactusError> {
    compose(c, i, &s1_action(theta, c2))
}

/// How angle tuples compose when spined gluing is split into its spineless
/// part and its spine part: the guest's angles are shifted by the sweep that
/// aligning its zero with the spine of slot `i` causes on each of its lobes.
pub fn angles_compose(theta: &[Angle], i: usize, c2: &Cactus, theta2: &[Angle]) -> Vec<Angle> {
    assert!(1 <= i && i <= theta.len(), "slot out of range");
    assert_eq!(theta2.len(), c2.n(), "angle tuple must match the arity");
    let delta = homotopy_diagonal(c2, &theta[i - 1]);
    let mut out = Vec::with_capacity(theta.len() + theta2.len() - 1);
    out.extend_from_slice(&theta[..i - 1]);
    out.extend(delta.into_iter().zip(theta2.iter()).map(|(d, t)| d + t.clone()));
    out.extend_from_slice(&theta[i..]);
    out
}

/// Normalized gluing twisted by radii: glues as if the guest's lobes had the
/// given radii and renormalizes. The detour through free radii moves the
/// host's attachment positions exactly as the radii dictate, which is what
/// distinguishes this from the plain normalized gluing.
pub fn perturbed_compose(
    c: &Cactus,
    i: usize,
    radii2: &[Q],
    c2: &Cactus,
) -> Result<Cactus, CactusError> {
    if !c.variety.normalized() {
        return Err(CactusError::Invalid("perturbed gluing starts from normalized cacti".into()));
    }
    expect_variety(c.variety, c, c2)?;
    if radii2.len() != c2.n() {
        return Err(CactusError::Invalid(format!(
            "{} radii for {} lobes",
            radii2.len(),
            c2.n()
        )));
    }
    if i < 1 || i > c.n() {
        return Err(CactusError::NoSuchLobe(i));
    }
    let free = c.variety.unnormalized_counterpart();
    let mut host_radii = vec![Q::one(); c.n()];
    host_radii[i - 1] = radii2.iter().sum();
    let host = c.with_radii(&host_radii, free)?;
    let guest = c2.with_radii(radii2, free)?;
    Ok(compose(&host, i, &guest)?.normalize().1)
}

// ---------------------------------------------------------------------------
// Contraction and its section
// ---------------------------------------------------------------------------

/// Collapses lobe `k` to a point. Lobes attached along it slide to its entry
/// point and join whatever site (or the root) it occupied; remaining labels
/// close the gap. The last lobe cannot be contracted away.
pub fn contract_lobe(c: &Cactus, k: usize) -> Result<Cactus, CactusError> {
    c.radius(k)?;
    if c.n() == 1 {
        return Err(CactusError::Invalid("cannot contract the only lobe".into()));
    }
    let kept: Vec<(usize, Q)> = c
        .word()
        .into_iter()
        .filter(|(l, _)| *l != k)
        .map(|(l, a)| (if l > k { l - 1 } else { l }, a))
        .collect();
    let word = canonicalize_word(&kept)?;
    let mut spines = BTreeMap::new();
    if c.variety.spined() {
        for (l, s) in &c.spines {
            if *l != k {
                spines.insert(if *l > k { l - 1 } else { *l }, s.clone());
            }
        }
    }
    Cactus::from_word(c.variety, &word, &spines)
}

/// Contraction of the highest label, on combinatorial types.
pub fn toptype_contract(t: &TopType) -> Result<TopType, CactusError> {
    Ok(contract_lobe(&t.standard_cactus(Variety::Cact1), t.n())?.toptype())
}

/// Adds a fresh lobe of radius 1 at the global zero, before everything else,
/// carrying the new highest label. Contracting that label recovers the input
/// exactly, so this is a section of `contract_lobe`.
pub fn section_attach(c: &Cactus) -> Cactus {
    let fresh = c.n() + 1;
    let mut word = vec![(fresh, Q::one())];
    word.extend(c.word());
    Cactus::from_word(c.variety, &word, &c.spines)
        .expect("a fresh root lobe keeps the word valid")
}

// ---------------------------------------------------------------------------
// The corolla suboperad
// ---------------------------------------------------------------------------

/// A spineless corolla: every lobe passes through the global zero and carries
/// no interior attachment points.
pub fn is_scc(c: &Cactus) -> bool {
    !c.variety.spined()
        && c.root.lobes.len() == c.n()
        && c.root.lobes.iter().all(|l| l.sites.is_empty())
}

/// The order in which a corolla's lobes leave the global zero, as a
/// permutation sending position to label.
pub fn scc_component_word(c: &Cactus) -> Result<Perm, CactusError> {
    if !is_scc(c) {
        return Err(CactusError::Invalid("not a spineless corolla".into()));
    }
    let images: Vec<usize> = c.root.lobes.iter().map(|l| l.label).collect();
    Perm::from_images(&images).map_err(|e| CactusError::Invalid(e.to_string()))
}

// ---------------------------------------------------------------------------
// The quasi-operad instances
// ---------------------------------------------------------------------------

/// The gluing quasi-operad of one variety. Relabelling acts so that per-lobe
/// data read off in label order (radii, spine angles) pulls back along the
/// permutation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CactusOperad(pub Variety);

impl QuasiOperad for CactusOperad {
    type El = Cactus;

    fn arity(&self, c: &Cactus) -> usize {
        c.n()
    }

    fn compose(&self, x: &Cactus, i: usize, y: &Cactus) -> Cactus {
        compose(x, i, y).expect("gluing of valid cacti")
    }

    fn act(&self, sigma: &Perm, x: &Cactus) -> Cactus {
        let inv = sigma.inverse();
        x.relabel_with(|l| inv.apply(l)).expect("permutations relabel bijectively")
    }

    fn unit(&self) -> Option<Cactus> {
        if self.0.normalized() {
            let spine = if self.0.spined() { Some(Q::zero()) } else { None };
            Some(Cactus::single(self.0, Q::one(), spine).unwrap())
        } else {
            None
        }
    }
}

// ---------------------------------------------------------------------------
// Associativity counterexamples for the normalized varieties
// ---------------------------------------------------------------------------

fn counterexample_family(variety: Variety) -> Vec<Cactus> {
    let no_spines = BTreeMap::new();
    let mut family = vec![
        Cactus::corolla(variety, &[Q::one(), Q::one()]).unwrap(),
        Cactus::from_word(variety, &[(2, Q::one()), (1, Q::one())], &no_spines).unwrap(),
    ];
    for at in [q(1, 4), q(1, 3), q(1, 2), q(2, 3)] {
        for (bottom, top) in [(1usize, 2usize), (2, 1)] {
            let word = [(bottom, at.clone()), (top, Q::one()), (bottom, Q::one() - &at)];
            family.push(Cactus::from_word(variety, &word, &no_spines).unwrap());
        }
    }
    if variety.spined() {
        // A marked point away from the entry exercises the wrap alignment.
        for (label, spine) in [(1usize, q(1, 4)), (2, q(1, 3))] {
            let word = [(1, q(1, 2)), (2, Q::one()), (1, q(1, 2))];
            let mut spines = BTreeMap::new();
            spines.insert(label, spine);
            family.push(Cactus::from_word(variety, &word, &spines).unwrap());
        }
    }
    family
}

/// Searches a fixed family of small cacti, smallest triples first, for an
/// exact failure of the associativity case law in a normalized variety, and
/// returns the first failing `(x, i, y, j, z)`. Stretching the glued lobe to
/// an integer length moves interior attachment points by different amounts
/// along the two bracketings, so witnesses exist; the free-radius varieties
/// reassociate exactly and are rejected.
pub fn associativity_counterexample(
    variety: Variety,
) -> Option<(Cactus, usize, Cactus, usize, Cactus)> {
    assert!(variety.normalized(), "free-radius gluing reassociates exactly");
    let family = counterexample_family(variety);
    let mut samples = Vec::new();
    for x in &family {
        for y in &family {
            for z in &family {
                for i in 1..=x.n() {
                    for j in 1..=(x.n() + y.n() - 1) {
                        samples.push((x.clone(), i, y.clone(), j, z.clone()));
                    }
                }
            }
        }
    }
    samples.sort_by_key(|(x, _, y, _, z)| x.n() + y.n() + z.n());
    let report = check_associativity(&CactusOperad(variety), &samples);
    report.violations.first().map(|v| samples[v.sample].clone())
}

// ---------------------------------------------------------------------------
// Piecewise-linear paths through cells
// ---------------------------------------------------------------------------

/// One straight segment inside the cell of a combinatorial type, recorded by
/// the arc lengths at both ends (in the order of the type's label word).
/// Endpoints may put arcs to zero, which degenerates onto a boundary cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSegment {
    pub cell: TopType,
    pub start: Vec<Q>,
    pub end: Vec<Q>,
}

/// A path through the cell complex: consecutive segments must describe the
/// same cactus where they meet, once vanished arcs are dropped and labels
/// reread in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CactusPath {
    pub segments: Vec<PathSegment>,
}

/// The cactus word a coordinate tuple describes inside a cell: zero arcs are
/// dropped, the surviving labels are compressed, adjacent runs merge.
fn word_at(cell: &TopType, coords: &[Q]) -> Result<Vec<(usize, Q)>, CactusError> {
    let labels = cell.label_word();
    if labels.len() != coords.len() {
        return Err(CactusError::Invalid(format!(
            "{} arc lengths for a word of {}",
            coords.len(),
            labels.len()
        )));
    }
    if coords.iter().any(|a| a.is_negative()) {
        return Err(CactusError::Invalid("negative arc length".into()));
    }
    let kept: Vec<(usize, Q)> = labels
        .into_iter()
        .zip(coords.iter().cloned())
        .filter(|(_, a)| a.is_positive())
        .collect();
    let mut survivors: Vec<usize> = kept.iter().map(|(l, _)| *l).collect();
    survivors.sort_unstable();
    survivors.dedup();
    let dense: Vec<(usize, Q)> = kept
        .into_iter()
        .map(|(l, a)| (survivors.binary_search(&l).unwrap() + 1, a))
        .collect();
    canonicalize_word(&dense)
}

impl CactusPath {
    /// Shape problems: wrong coordinate counts, negative arcs, or consecutive
    /// segments whose meeting points describe different cacti.
    pub fn validate(&self) -> Vec<String> {
        let mut problems = Vec::new();
        for (k, seg) in self.segments.iter().enumerate() {
            let want = seg.cell.label_word().len();
            for (name, coords) in [("start", &seg.start), ("end", &seg.end)] {
                if coords.len() != want {
                    problems.push(format!(
                        "segment {k} {name}: {} arc lengths for a word of {want}",
                        coords.len()
                    ));
                } else if coords.iter().any(|a| a.is_negative()) {
                    problems.push(format!("segment {k} {name}: negative arc length"));
                }
            }
        }
        for k in 1..self.segments.len() {
            let prev = &self.segments[k - 1];
            let next = &self.segments[k];
            match (word_at(&prev.cell, &prev.end), word_at(&next.cell, &next.start)) {
                (Ok(a), Ok(b)) if a == b => {}
                (Ok(_), Ok(_)) => {
                    problems.push(format!("segments {} and {k} do not meet", k - 1))
                }
                (Err(e), _) | (_, Err(e)) => problems.push(format!("joint {k}: {e}")),
            }
        }
        problems
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operad::{
        block_permutation, check_equivariance, check_units, scaling_compose,
    };
    use crate::rational::qi;
    use crate::sample::Sampler;

    fn no_spines() -> BTreeMap<usize, Q> {
        BTreeMap::new()
    }

    fn chain(variety: Variety, at: Q) -> Cactus {
        let word = [(1, at.clone()), (2, Q::one()), (1, Q::one() - at)];
        Cactus::from_word(variety, &word, &no_spines()).unwrap()
    }

    fn corolla2(variety: Variety) -> Cactus {
        Cactus::corolla(variety, &[Q::one(), Q::one()]).unwrap()
    }

    fn assoc_samples(
        variety: Variety,
        count: usize,
        seed: u64,
    ) -> Vec<(Cactus, usize, Cactus, usize, Cactus)> {
        let mut s = Sampler::new(seed);
        (0..count)
            .map(|_| {
                let n = s.slot(4);
                let l = s.slot(4);
                let k = s.slot(4);
                let x = s.cactus(variety, n);
                let y = s.cactus(variety, l);
                let z = s.cactus(variety, k);
                let i = s.slot(n);
                let j = s.slot(n + l - 1);
                (x, i, y, j, z)
            })
            .collect()
    }

    fn equiv_samples(
        variety: Variety,
        count: usize,
        seed: u64,
    ) -> Vec<(Perm, Cactus, usize, Perm, Cactus)> {
        let mut s = Sampler::new(seed);
        (0..count)
            .map(|_| {
                let n = s.slot(4);
                let m = s.slot(4);
                let x = s.cactus(variety, n);
                let y = s.cactus(variety, m);
                let sigma = s.perm(n);
                let i = s.slot(n);
                let tau = s.perm(m);
                (sigma, x, i, tau, y)
            })
            .collect()
    }

    #[test]
    fn corolla_gluings_match_hand_computations() {
        let glued = compose_cact1(&corolla2(Variety::Cact1), 1, &corolla2(Variety::Cact1)).unwrap();
        assert_eq!(glued, Cactus::corolla(Variety::Cact1, &[qi(1), qi(1), qi(1)]).unwrap());

        let glued = compose_cact(&corolla2(Variety::Cact), 1, &corolla2(Variety::Cact)).unwrap();
        assert_eq!(glued.word(), vec![(1, q(1, 2)), (2, q(1, 2)), (3, qi(1))]);
        assert_eq!(glued.radii(), vec![q(1, 2), q(1, 2), qi(1)]);
    }

    #[test]
    fn gluing_into_an_interior_site() {
        let host = chain(Variety::Cact1, q(1, 2));
        let glued = compose_cact1(&host, 2, &corolla2(Variety::Cact1)).unwrap();
        assert_eq!(
            glued.word(),
            vec![(1, q(1, 2)), (2, qi(1)), (3, qi(1)), (1, q(1, 2))]
        );
        assert!(glued.validate().is_empty());
    }

    #[test]
    fn variety_and_slot_errors_are_reported() {
        let a = corolla2(Variety::Cact1);
        let b = corolla2(Variety::Cact);
        assert!(compose(&a, 1, &b).is_err());
        assert!(compose(&a, 0, &a).is_err());
        assert!(compose(&a, 3, &a).is_err());
        assert!(compose_cact(&a, 1, &a).is_err());
    }

    #[test]
    fn spined_gluing_aligns_the_local_zero_with_the_guests_global_zero() {
        let host = Cactus::single(Variety::Cacti1, Q::one(), Some(q(1, 4))).unwrap();
        let guest = corolla2(Variety::Cacti1);
        let glued = compose_cacti1(&host, 1, &guest).unwrap();
        assert_eq!(glued.word(), vec![(2, q(1, 2)), (1, qi(1)), (2, q(1, 2))]);
        assert_eq!(glued.spines.get(&1), Some(&Q::zero()));
        assert_eq!(glued.spines.get(&2), Some(&q(1, 2)));
    }

    #[test]
    fn single_lobes_are_right_units_in_cact_but_not_left_units() {
        let mut s = Sampler::new(0x0417);
        let c = s.cactus(Variety::Cact, 3);
        let e = Cactus::single(Variety::Cact, q(5, 2), None).unwrap();
        for i in 1..=3 {
            assert_eq!(compose_cact(&c, i, &e).unwrap(), c);
        }
        let c = Cactus::corolla(Variety::Cact, &[qi(1), qi(1), qi(1)]).unwrap();
        let scaled = compose_cact(&e, 1, &c).unwrap();
        assert_ne!(scaled, c);
        assert_eq!(scaled.radii(), vec![q(5, 6), q(5, 6), q(5, 6)]);
    }

    #[test]
    fn normalized_varieties_have_two_sided_units() {
        for (variety, seed) in [(Variety::Cact1, 0x0418u64), (Variety::Cacti1, 0x0419)] {
            let op = CactusOperad(variety);
            let mut s = Sampler::new(seed);
            let samples: Vec<Cactus> = (0..40)
                .map(|_| {
                    let n = s.slot(4);
                    s.cactus(variety, n)
                })
                .collect();
            let report = check_units(&op, &samples);
            assert!(report.ok(), "{:?}", report.violations.first());
            assert!(report.checked > 0);
        }
        assert!(CactusOperad(Variety::Cact).unit().is_none());
        assert!(CactusOperad(Variety::Cacti).unit().is_none());
    }

    #[test]
    fn free_radius_gluing_reassociates_exactly() {
        for (variety, seed) in [(Variety::Cact, 1u64), (Variety::Cacti, 2)] {
            let samples = assoc_samples(variety, 150, seed);
            let report = check_associativity(&CactusOperad(variety), &samples);
            assert!(report.ok(), "{:?}", report.violations.first());
            assert_eq!(report.checked, 150);
        }
    }

    #[test]
    fn all_varieties_are_equivariant() {
        let cases = [
            (Variety::Cact, 3u64),
            (Variety::Cacti, 4),
            (Variety::Cact1, 5),
            (Variety::Cacti1, 6),
        ];
        for (variety, seed) in cases {
            let samples = equiv_samples(variety, 150, seed);
            let report = check_equivariance(&CactusOperad(variety), &samples);
            assert!(report.ok(), "{:?}", report.violations.first());
        }
    }

    #[test]
    fn relabelling_pulls_per_lobe_data_back_along_the_permutation() {
        let mut s = Sampler::new(0xAC7);
        let op = CactusOperad(Variety::Cacti);
        for _ in 0..40 {
            let n = s.slot(5);
            let c = s.cactus(Variety::Cacti, n);
            let sigma = s.perm(n);
            let moved = op.act(&sigma, &c);
            assert_eq!(moved.radii(), sigma.pull(&c.radii()));
            assert_eq!(spine_angles(&moved), sigma.pull(&spine_angles(&c)));
        }
    }

    #[test]
    fn normalized_gluing_fails_associativity_with_a_frozen_witness() {
        for variety in [Variety::Cact1, Variety::Cacti1] {
            let (x, i, y, j, z) =
                associativity_counterexample(variety).expect("the family contains a witness");
            assert_eq!(x.word(), vec![(1, q(1, 4)), (2, qi(1)), (1, q(3, 4))]);
            assert_eq!(y, corolla2(variety));
            assert_eq!(z, corolla2(variety));
            assert_eq!((i, j), (1, 1));

            let lhs = compose(&compose(&x, i, &y).unwrap(), j, &z).unwrap();
            let rhs = compose(&x, i, &compose(&y, j - i + 1, &z).unwrap()).unwrap();
            assert_eq!(lhs.word(), vec![(1, qi(1)), (4, qi(1)), (2, qi(1)), (3, qi(1))]);
            assert_eq!(
                rhs.word(),
                vec![(1, q(3, 4)), (4, qi(1)), (1, q(1, 4)), (2, qi(1)), (3, qi(1))]
            );
            assert_ne!(lhs, rhs);
            assert!(lhs.validate().is_empty());
            assert!(rhs.validate().is_empty());
        }
    }

    #[test]
    fn rotation_is_a_circle_action() {
        let c = corolla2(Variety::Cact1);
        let half = s1_action(&Angle::new(q(1, 2)), &c);
        assert_eq!(half, c.relabel_with(|l| 3 - l).unwrap());

        let mut s = Sampler::new(0xC1AC);
        for variety in [Variety::Cact, Variety::Cacti] {
            for _ in 0..30 {
                let n = s.slot(4);
                let c = s.cactus(variety, n);
                assert_eq!(s1_action(&Angle::zero(), &c), c);
                let a = s.angle();
                let b = s.angle();
                let two_steps = s1_action(&a, &s1_action(&b, &c));
                assert_eq!(two_steps, s1_action(&(a + b), &c));
            }
        }
    }

    #[test]
    fn diagonal_fractions_match_the_rotation() {
        let single = Cactus::single(Variety::Cact, q(3, 2), None).unwrap();
        assert_eq!(homotopy_diagonal(&single, &Angle::zero()), vec![Angle::zero()]);
        let th = Angle::new(q(2, 5));
        assert_eq!(homotopy_diagonal(&single, &th), vec![th]);

        let c = corolla2(Variety::Cact1);
        assert_eq!(
            homotopy_diagonal(&c, &Angle::new(q(1, 4))),
            vec![Angle::zero(), Angle::new(q(1, 2))]
        );
        assert_eq!(
            homotopy_diagonal(&c, &Angle::zero()),
            vec![Angle::zero(), Angle::zero()]
        );
    }

    #[test]
    fn spined_gluing_splits_into_twisted_and_angle_parts() {
        for (variety, seed) in [(Variety::Cacti, 0xB1C0u64), (Variety::Cacti1, 0xB1C1)] {
            let mut s = Sampler::new(seed);
            for _ in 0..100 {
                let n = s.slot(4);
                let m = s.slot(4);
                let a = s.cactus(variety, n);
                let b = s.cactus(variety, m);
                let i = s.slot(n);
                let glued = compose(&a, i, &b).unwrap();
                let (ca, ta) = (a.forget_spines(), spine_angles(&a));
                let (cb, tb) = (b.forget_spines(), spine_angles(&b));
                let c_part = twisted_compose(&ca, i, &ta[i - 1], &cb).unwrap();
                assert_eq!(glued.forget_spines(), c_part);
                assert_eq!(spine_angles(&glued), angles_compose(&ta, i, &cb, &tb));
            }
        }
    }

    #[test]
    fn free_gluing_splits_into_scaling_and_perturbed_parts() {
        for (variety, seed) in [(Variety::Cact, 0x5D10u64), (Variety::Cacti, 0x5D11)] {
            let mut s = Sampler::new(seed);
            for _ in 0..100 {
                let n = s.slot(4);
                let m = s.slot(4);
                let a = s.cactus(variety, n);
                let b = s.cactus(variety, m);
                let i = s.slot(n);
                let glued = compose(&a, i, &b).unwrap();
                assert_eq!(glued.radii(), scaling_compose(&a.radii(), i, &b.radii()));
                let expected =
                    perturbed_compose(&a.normalize().1, i, &b.radii(), &b.normalize().1).unwrap();
                assert_eq!(glued.normalize().1, expected);
            }
        }
    }

    #[test]
    fn perturbed_gluing_moves_attachment_points() {
        let host = chain(Variety::Cact1, q(1, 2));
        let guest = corolla2(Variety::Cact1);
        let plain = compose_cact1(&host, 1, &guest).unwrap();
        assert_eq!(plain.word(), vec![(1, qi(1)), (3, qi(1)), (2, qi(1))]);
        assert_eq!(
            perturbed_compose(&host, 1, &[Q::one(), Q::one()], &guest).unwrap(),
            plain
        );
        let skewed = perturbed_compose(&host, 1, &[q(1, 2), q(3, 2)], &guest).unwrap();
        assert_eq!(
            skewed.word(),
            vec![(1, qi(1)), (2, q(1, 3)), (3, qi(1)), (2, q(2, 3))]
        );

        let single = Cactus::single(Variety::Cact1, Q::one(), None).unwrap();
        assert_eq!(perturbed_compose(&host, 2, &[q(7, 3)], &single).unwrap(), host);
        assert!(perturbed_compose(&host, 1, &[qi(1)], &guest).is_err());
    }

    #[test]
    fn embedding_preserves_gluing_but_forgetting_does_not() {
        let mut s = Sampler::new(0xE3BED);
        for _ in 0..60 {
            let n = s.slot(4);
            let m = s.slot(4);
            let a = s.cactus(Variety::Cact, n);
            let b = s.cactus(Variety::Cact, m);
            let i = s.slot(n);
            let glued = compose_cact(&a, i, &b).unwrap().embed_spineless();
            let embedded = compose_cacti(&a.embed_spineless(), i, &b.embed_spineless()).unwrap();
            assert_eq!(glued, embedded);
        }

        let host = Cactus::single(Variety::Cacti1, Q::one(), Some(q(1, 4))).unwrap();
        let guest = corolla2(Variety::Cacti1);
        let spined = compose_cacti1(&host, 1, &guest).unwrap();
        let spineless =
            compose_cact1(&host.forget_spines(), 1, &guest.forget_spines()).unwrap();
        assert_ne!(spined.forget_spines(), spineless);
    }

    #[test]
    fn contraction_merges_arcs_and_closes_label_gaps() {
        let c = chain(Variety::Cact1, q(1, 3));
        assert_eq!(
            contract_lobe(&c, 2).unwrap(),
            Cactus::single(Variety::Cact1, Q::one(), None).unwrap()
        );
        assert_eq!(
            contract_lobe(&c, 1).unwrap(),
            Cactus::single(Variety::Cact1, Q::one(), None).unwrap()
        );

        let deep = Cactus::from_word(
            Variety::Cact1,
            &[(1, q(1, 4)), (2, q(1, 2)), (3, qi(1)), (2, q(1, 2)), (1, q(3, 4))],
            &no_spines(),
        )
        .unwrap();
        let down = contract_lobe(&deep, 2).unwrap();
        assert_eq!(down.word(), vec![(1, q(1, 4)), (2, qi(1)), (1, q(3, 4))]);

        let rooted = Cactus::from_word(
            Variety::Cact,
            &[(2, q(1, 2)), (1, qi(1)), (2, q(1, 2))],
            &no_spines(),
        )
        .unwrap();
        assert_eq!(
            contract_lobe(&rooted, 2).unwrap(),
            Cactus::single(Variety::Cact, Q::one(), None).unwrap()
        );

        let single = Cactus::single(Variety::Cact1, Q::one(), None).unwrap();
        assert!(contract_lobe(&single, 1).is_err());
        assert!(contract_lobe(&c, 9).is_err());
    }

    #[test]
    fn section_then_contract_is_the_identity() {
        let mut s = Sampler::new(0x5EC7);
        for variety in [Variety::Cact1, Variety::Cacti1, Variety::Cact, Variety::Cacti] {
            for _ in 0..40 {
                let n = s.slot(4);
                let c = s.cactus(variety, n);
                let up = section_attach(&c);
                assert_eq!(up.n(), n + 1);
                assert!(up.validate().is_empty());
                assert_eq!(up.root.lobes[0].label, n + 1);
                assert_eq!(contract_lobe(&up, n + 1).unwrap(), c);
            }
        }
    }

    #[test]
    fn type_level_contraction_matches_contraction_of_representatives() {
        let t = Cactus::corolla(Variety::Cact1, &[qi(1), qi(1), qi(1)]).unwrap().toptype();
        assert_eq!(toptype_contract(&t).unwrap().label_word(), vec![1, 2]);

        let mut s = Sampler::new(0x7093);
        for _ in 0..60 {
            let n = s.slot(3) + 1;
            let c = s.cactus(Variety::Cact1, n);
            let via_types = toptype_contract(&c.toptype()).unwrap();
            let via_cactus = contract_lobe(&c, n).unwrap().toptype();
            assert_eq!(via_types, via_cactus);
        }
    }

    #[test]
    fn corolla_gluing_is_closed_with_block_insertion_words() {
        let single = Cactus::single(Variety::Cact, q(2, 3), None).unwrap();
        assert!(is_scc(&single));
        assert!(is_scc(&corolla2(Variety::Cact)));
        assert!(!is_scc(&chain(Variety::Cact, q(1, 2))));
        assert!(!is_scc(&corolla2(Variety::Cacti)));
        assert!(scc_component_word(&chain(Variety::Cact, q(1, 2))).is_err());

        let mut s = Sampler::new(0x5CC);
        let scc_from_perm = |p: &Perm, s: &mut Sampler| -> Cactus {
            let word: Vec<(usize, Q)> =
                p.images().into_iter().map(|l| (l, s.radius())).collect();
            Cactus::from_word(Variety::Cact, &word, &BTreeMap::new()).unwrap()
        };
        for _ in 0..80 {
            let n = s.slot(4);
            let m = s.slot(4);
            let pa = s.perm(n);
            let pb = s.perm(m);
            let a = scc_from_perm(&pa, &mut s);
            let b = scc_from_perm(&pb, &mut s);
            let i = s.slot(n);
            let glued = compose_cact(&a, i, &b).unwrap();
            assert!(is_scc(&glued));
            let wa = scc_component_word(&a).unwrap();
            let wb = scc_component_word(&b).unwrap();
            let expected = block_permutation(&wa, wa.inverse().apply(i), &wb).unwrap();
            assert_eq!(scc_component_word(&glued).unwrap(), expected);
        }
    }

    #[test]
    fn paths_validate_their_joints() {
        let chain_cell = TopType::from_label_word(&[1, 2, 1]).unwrap();
        let corolla_cell = TopType::from_label_word(&[2, 1]).unwrap();
        let good = CactusPath {
            segments: vec![
                PathSegment {
                    cell: chain_cell.clone(),
                    start: vec![q(1, 2), qi(1), q(1, 2)],
                    end: vec![Q::zero(), qi(1), qi(1)],
                },
                PathSegment {
                    cell: corolla_cell.clone(),
                    start: vec![qi(1), qi(1)],
                    end: vec![qi(2), qi(1)],
                },
            ],
        };
        assert!(good.validate().is_empty());

        let broken = CactusPath {
            segments: vec![
                PathSegment {
                    cell: chain_cell,
                    start: vec![q(1, 2), qi(1), q(1, 2)],
                    end: vec![Q::zero(), qi(1), qi(1)],
                },
                PathSegment {
                    cell: corolla_cell.clone(),
                    start: vec![qi(1), qi(2)],
                    end: vec![qi(1), qi(1)],
                },
            ],
        };
        assert_eq!(broken.validate().len(), 1);

        let malformed = CactusPath {
            segments: vec![PathSegment {
                cell: corolla_cell,
                start: vec![qi(1)],
                end: vec![qi(1), -qi(1)],
            }],
        };
        assert_eq!(malformed.validate().len(), 2);
    }
}
