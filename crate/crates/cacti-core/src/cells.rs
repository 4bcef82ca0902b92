//! The cell-level combinatorics of normalized spineless cacti: enumeration of
//! topological types by dimension, the face maps that collapse one arc, the
//! integral cellular chain complex these assemble into, and its homology.

use crate::cactus::{CactusError, TopType, TtLobe, TtSite};
use crate::compose::toptype_contract;
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};

/// All nonempty submasks of `mask`, in a deterministic order.
fn submasks(mask: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut sub = mask;
    while sub != 0 {
        out.push(sub);
        sub = (sub - 1) & mask;
    }
    out.sort_unstable();
    out
}

/// Ordered partitions of `mask` into nonempty disjoint parts.
fn partitions(mask: u32, memo: &mut HashMap<u32, Vec<Vec<u32>>>) -> Vec<Vec<u32>> {
    if let Some(v) = memo.get(&mask) {
        return v.clone();
    }
    let mut out = Vec::new();
    for first in submasks(mask) {
        let rest = mask & !first;
        if rest == 0 {
            out.push(vec![first]);
        } else {
            for tail in partitions(rest, memo) {
                let mut seq = Vec::with_capacity(tail.len() + 1);
                seq.push(first);
                seq.extend(tail);
                out.push(seq);
            }
        }
    }
    memo.insert(mask, out.clone());
    out
}

struct Enumerator {
    trees: HashMap<u32, Vec<TtLobe>>,
    forests: HashMap<u32, Vec<Vec<TtLobe>>>,
    parts: HashMap<u32, Vec<Vec<u32>>>,
}

impl Enumerator {
    fn new() -> Enumerator {
        Enumerator { trees: HashMap::new(), forests: HashMap::new(), parts: HashMap::new() }
    }

    /// All planted trees whose white labels are exactly the bits of `mask`.
    fn trees(&mut self, mask: u32) -> Vec<TtLobe> {
        if let Some(v) = self.trees.get(&mask) {
            return v.clone();
        }
        let mut out = Vec::new();
        for bit in 0..32 {
            if mask & (1 << bit) == 0 {
                continue;
            }
            let label = bit + 1;
            let rest = mask & !(1 << bit);
            if rest == 0 {
                out.push(TtLobe { label, sites: Vec::new() });
                continue;
            }
            for seq in partitions(rest, &mut self.parts) {
                // Each part of the partition becomes one attachment site
                // holding a forest, in planar order along the lobe.
                let site_choices: Vec<Vec<Vec<TtLobe>>> =
                    seq.iter().map(|part| self.forests(*part)).collect();
                let mut stack: Vec<(usize, Vec<TtSite>)> = vec![(0, Vec::new())];
                while let Some((k, sites)) = stack.pop() {
                    if k == site_choices.len() {
                        out.push(TtLobe { label, sites });
                        continue;
                    }
                    for forest in &site_choices[k] {
                        let mut next = sites.clone();
                        next.push(TtSite { lobes: forest.clone() });
                        stack.push((k + 1, next));
                    }
                }
            }
        }
        self.trees.insert(mask, out.clone());
        out
    }

    /// All ordered nonempty sequences of trees covering `mask`.
    fn forests(&mut self, mask: u32) -> Vec<Vec<TtLobe>> {
        if let Some(v) = self.forests.get(&mask) {
            return v.clone();
        }
        let mut out = Vec::new();
        for first in submasks(mask) {
            let rest = mask & !first;
            let heads = self.trees(first);
            if rest == 0 {
                for h in heads {
                    out.push(vec![h]);
                }
            } else {
                let tails = self.forests(rest);
                for h in heads {
                    for t in &tails {
                        let mut seq = Vec::with_capacity(t.len() + 1);
                        seq.push(h.clone());
                        seq.extend(t.iter().cloned());
                        out.push(seq);
                    }
                }
            }
        }
        self.forests.insert(mask, out.clone());
        out
    }
}

/// Every topological type on lobes `1..=n`, sorted by dimension and then by
/// label word. Complete and duplicate-free.
pub fn enumerate_toptypes(n: usize) -> Vec<TopType> {
    assert!(n >= 1 && n <= 16, "enumeration bound");
    let mask = (1u32 << n) - 1;
    let mut e = Enumerator::new();
    let mut out: Vec<TopType> = e
        .forests(mask)
        .into_iter()
        .map(|lobes| TopType { root: TtSite { lobes } })
        .collect();
    out.sort_by_key(|t| (t.dim(), t.label_word()));
    out
}

/// Types grouped by cell dimension; index = dimension.
pub fn toptypes_by_dim(n: usize) -> Vec<Vec<TopType>> {
    let all = enumerate_toptypes(n);
    let max_dim = all.iter().map(|t| t.dim()).max().unwrap_or(0);
    let mut out = vec![Vec::new(); max_dim + 1];
    for t in all {
        let d = t.dim();
        out[d].push(t);
    }
    out
}

// ---------------------------------------------------------------------------
// Face maps
// ---------------------------------------------------------------------------

/// Collapses the `vertex`-th arc of lobe `label` (arcs are numbered `0..=q`
/// along the lobe, the last one closing the circle). The two points the arc
/// joined become one: an interior arc fuses two neighbouring sites of the
/// lobe; the first or last arc fuses a site with the lobe's entry point, and
/// that site's branches move up to the parent keeping their order,
/// immediately before the lobe (first arc) or after it (last arc).
pub fn degenerate(t: &TopType, label: usize, vertex: usize) -> Result<TopType, CactusError> {
    fn walk(
        site: &TtSite,
        label: usize,
        vertex: usize,
        hit: &mut bool,
    ) -> Result<TtSite, CactusError> {
        let mut lobes = Vec::with_capacity(site.lobes.len());
        for lobe in &site.lobes {
            if lobe.label == label {
                *hit = true;
                let q = lobe.sites.len();
                if q == 0 {
                    return Err(CactusError::Invalid(format!(
                        "lobe {label} spans a point cell and has no faces"
                    )));
                }
                if vertex > q {
                    return Err(CactusError::Invalid(format!(
                        "lobe {label} has arcs 0..={q}, not {vertex}"
                    )));
                }
                let mut sites = lobe.sites.clone();
                if vertex == 0 {
                    let moved = sites.remove(0);
                    lobes.extend(moved.lobes);
                    lobes.push(TtLobe { label, sites });
                } else if vertex == q {
                    let moved = sites.pop().expect("q >= 1");
                    lobes.push(TtLobe { label, sites });
                    lobes.extend(moved.lobes);
                } else {
                    let moved = sites.remove(vertex);
                    sites[vertex - 1].lobes.extend(moved.lobes);
                    lobes.push(TtLobe { label, sites });
                }
            } else {
                let sites = lobe
                    .sites
                    .iter()
                    .map(|s| walk(s, label, vertex, hit))
                    .collect::<Result<Vec<_>, _>>()?;
                lobes.push(TtLobe { label: lobe.label, sites });
            }
        }
        Ok(TtSite { lobes })
    }
    let mut hit = false;
    let root = walk(&t.root, label, vertex, &mut hit)?;
    if !hit {
        return Err(CactusError::NoSuchLobe(label));
    }
    Ok(TopType { root })
}

// ---------------------------------------------------------------------------
// The chain complex
// ---------------------------------------------------------------------------

/// The integral cellular chain complex of the space of normalized spineless
/// cacti on `n` lobes. The cell of a type is a product of one simplex per
/// lobe, coordinatized by that lobe's arc lengths; cells are oriented by
/// ordering the factors by label and each factor's vertices by arc number,
/// and boundaries carry the standard product signs.
#[derive(Debug, Clone)]
pub struct ChainComplex {
    pub n: usize,
    /// Cells by dimension, each list sorted by label word.
    pub cells: Vec<Vec<TopType>>,
    /// `boundaries[k]` maps dimension-`k` chains down one dimension: rows
    /// index `cells[k-1]`, columns index `cells[k]`. Entry `[i][j]` is the
    /// signed number of faces of cell `j` attached onto cell `i`.
    pub boundaries: Vec<Vec<Vec<BigInt>>>,
}

/// Builds the complex and verifies that the boundary squares to zero. Kept to
/// desk scale; `build_complex_unbounded` lifts the cap.
pub fn build_complex(n: usize) -> ChainComplex {
    assert!(n <= 5, "complex bound; use build_complex_unbounded to override");
    build_complex_unbounded(n)
}

pub fn build_complex_unbounded(n: usize) -> ChainComplex {
    assert!(n >= 1);
    let cells = toptypes_by_dim(n);
    let index: Vec<HashMap<TopType, usize>> = cells
        .iter()
        .map(|list| list.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect())
        .collect();
    let mut boundaries: Vec<Vec<Vec<BigInt>>> = vec![Vec::new()];
    for k in 1..cells.len() {
        let rows = cells[k - 1].len();
        let mut matrix = vec![vec![BigInt::zero(); cells[k].len()]; rows];
        for (j, tau) in cells[k].iter().enumerate() {
            let dims = tau.lobe_dims();
            let mut koszul = 0usize;
            for (label, q) in dims.iter().enumerate().map(|(z, q)| (z + 1, *q)) {
                if q == 0 {
                    continue;
                }
                for v in 0..=q {
                    let target = degenerate(tau, label, v).expect("faces of a positive cell");
                    let i = index[k - 1][&target];
                    if (koszul + v) % 2 == 0 {
                        matrix[i][j] += 1;
                    } else {
                        matrix[i][j] -= 1;
                    }
                }
                koszul += q;
            }
        }
        boundaries.push(matrix);
    }
    let complex = ChainComplex { n, cells, boundaries };
    complex.assert_boundary_squares_to_zero();
    complex
}

/// Integral homology: free ranks and the nontrivial invariant factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homology {
    pub betti: Vec<usize>,
    /// `torsion[k]` lists the invariant factors (> 1) of the degree-k group.
    pub torsion: Vec<Vec<BigInt>>,
}

/// Finds a composite `∂∘∂` entry that fails to vanish: returns the top
/// dimension, the column (top cell) and the row (bottom cell) of the first
/// offender. Works on any boundary stack shaped like `ChainComplex`.
pub(crate) fn square_offender(
    boundaries: &[Vec<Vec<BigInt>>],
) -> Option<(usize, usize, usize)> {
    for k in 2..boundaries.len() {
        let down = &boundaries[k];
        let down_again = &boundaries[k - 1];
        let mids = down.len();
        let mut sparse_cols: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); mids];
        for (r, row) in down_again.iter().enumerate() {
            for (c, val) in row.iter().enumerate() {
                if !val.is_zero() {
                    sparse_cols[c].push((r, val.clone()));
                }
            }
        }
        let cols = down.first().map_or(0, |row| row.len());
        for j in 0..cols {
            let mut acc: BTreeMap<usize, BigInt> = BTreeMap::new();
            for (mid, sparse) in sparse_cols.iter().enumerate() {
                let e = &down[mid][j];
                if e.is_zero() {
                    continue;
                }
                for (r, v) in sparse {
                    *acc.entry(*r).or_insert_with(BigInt::zero) += v * e;
                }
            }
            if let Some((r, _)) = acc.iter().find(|(_, x)| !x.is_zero()) {
                return Some((k, j, *r));
            }
        }
    }
    None
}

/// Homology of a finite complex from per-dimension cell counts and the
/// boundary stack (`boundaries[k]`: rows index dimension k-1, columns k).
pub fn homology_of(counts: &[usize], boundaries: &[Vec<Vec<BigInt>>]) -> Homology {
    let top = counts.len();
    let mut ranks = vec![0usize; top + 1];
    let mut invariants: Vec<Vec<BigInt>> = vec![Vec::new(); top + 1];
    for (k, matrix) in boundaries.iter().enumerate().take(top).skip(1) {
        let f = smith_invariant_factors(matrix.clone());
        ranks[k] = f.len();
        invariants[k] = f;
    }
    let mut betti = Vec::with_capacity(top);
    let mut torsion = Vec::with_capacity(top);
    for (k, count) in counts.iter().enumerate() {
        betti.push(count - ranks[k] - ranks[k + 1]);
        torsion.push(
            invariants[k + 1].iter().filter(|d| **d > BigInt::one()).cloned().collect(),
        );
    }
    Homology { betti, torsion }
}

impl ChainComplex {
    pub fn assert_boundary_squares_to_zero(&self) {
        if let Some((k, j, r)) = square_offender(&self.boundaries) {
            panic!(
                "boundary fails to square to zero: cell {} reaches cell {}",
                self.cells[k][j].key(),
                self.cells[k - 2][r].key()
            );
        }
    }

    /// Alternating sum of cell counts.
    pub fn euler_char(&self) -> i64 {
        self.cells
            .iter()
            .enumerate()
            .map(|(k, cs)| if k % 2 == 0 { cs.len() as i64 } else { -(cs.len() as i64) })
            .sum()
    }

    pub fn homology(&self) -> Homology {
        let counts: Vec<usize> = self.cells.iter().map(|g| g.len()).collect();
        homology_of(&counts, &self.boundaries)
    }
}

pub fn homology(n: usize) -> Homology {
    build_complex(n).homology()
}

pub fn euler_char(n: usize) -> i64 {
    build_complex(n).euler_char()
}

/// Invariant factors (each positive, each dividing the next) of an integer
/// matrix, by row and column reduction. The number of factors is the rank.
pub fn smith_invariant_factors(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut factors: Vec<BigInt> = Vec::new();
    let mut t = 0usize;
    'outer: while t < rows && t < cols {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for r in t..rows {
            for c in t..cols {
                if m[r][c].is_zero() {
                    continue;
                }
                let a = m[r][c].abs();
                if best.as_ref().map_or(true, |(_, _, b)| a < *b) {
                    best = Some((r, c, a));
                }
            }
        }
        let Some((pr, pc, _)) = best else { break 'outer };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        let mut redo = false;
        for r in t + 1..rows {
            if m[r][t].is_zero() {
                continue;
            }
            let q = &m[r][t] / &m[t][t];
            if !q.is_zero() {
                for c in t..cols {
                    let sub = &q * &m[t][c];
                    m[r][c] -= sub;
                }
            }
            if !m[r][t].is_zero() {
                redo = true;
            }
        }
        if redo {
            continue 'outer;
        }
        for c in t + 1..cols {
            if m[t][c].is_zero() {
                continue;
            }
            let q = &m[t][c] / &m[t][t];
            if !q.is_zero() {
                for r in t..rows {
                    let sub = &q * &m[r][t];
                    m[r][c] -= sub;
                }
            }
            if !m[t][c].is_zero() {
                redo = true;
            }
        }
        if redo {
            continue 'outer;
        }
        // Row and column are clear; fold in any entry the pivot misses so the
        // divisibility chain holds.
        for r in t + 1..rows {
            for c in t + 1..cols {
                if !(&m[r][c] % &m[t][t]).is_zero() {
                    for cc in t..cols {
                        let add = m[r][cc].clone();
                        m[t][cc] += add;
                    }
                    continue 'outer;
                }
            }
        }
        factors.push(m[t][t].abs());
        t += 1;
    }
    factors
}

// ---------------------------------------------------------------------------
// Fibers of forgetting the added lobe
// ---------------------------------------------------------------------------

/// All types on one more lobe whose contraction of the highest label gives
/// `t`, grouped by dimension.
pub fn fiber_types(t: &TopType) -> Vec<Vec<TopType>> {
    let n = t.n();
    let mut out: Vec<Vec<TopType>> = Vec::new();
    for candidate in enumerate_toptypes(n + 1) {
        if toptype_contract(&candidate).expect("two or more lobes") == *t {
            let d = candidate.dim();
            if out.len() <= d {
                out.resize(d + 1, Vec::new());
            }
            out[d].push(candidate);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Generator cells on two lobes
// ---------------------------------------------------------------------------

/// The generating cells of the two-lobe complex: the two composition points,
/// the edge connecting them, and the odd commutator the edge induces.
#[derive(Debug, Clone)]
pub struct GerstenhaberCells {
    pub dot12: TopType,
    pub dot21: TopType,
    pub star: TopType,
    /// Signed boundary of `star` as (coefficient, cell) pairs.
    pub boundary: Vec<(i64, TopType)>,
    /// The bracket the edge represents, written symbolically.
    pub odd_commutator: String,
}

/// Identifies the generator cells in the built two-lobe complex and checks
/// that the edge's boundary is the difference of the two points.
pub fn gerstenhaber_cells() -> GerstenhaberCells {
    let complex = build_complex(2);
    let dot12 = TopType::from_label_word(&[1, 2]).unwrap();
    let dot21 = TopType::from_label_word(&[2, 1]).unwrap();
    let star = TopType::from_label_word(&[1, 2, 1]).unwrap();
    let j = complex.cells[1].iter().position(|t| *t == star).expect("edge present");
    let boundary: Vec<(i64, TopType)> = complex.cells[0]
        .iter()
        .enumerate()
        .filter_map(|(i, t)| {
            let e = &complex.boundaries[1][i][j];
            if e.is_zero() {
                None
            } else {
                Some((i64::try_from(e).expect("small entry"), t.clone()))
            }
        })
        .collect();
    let coeff = |t: &TopType| -> i64 {
        boundary.iter().find(|(_, c)| c == t).map(|(e, _)| *e).unwrap_or(0)
    };
    assert_eq!(boundary.len(), 2, "the edge has two endpoints");
    assert_eq!(coeff(&dot21), -coeff(&dot12), "the edge runs between the two points");
    assert_eq!(coeff(&dot21).abs(), 1);
    GerstenhaberCells {
        dot12,
        dot21,
        star,
        boundary,
        odd_commutator: "{a,b} = a*b - (-1)^((|a|+1)(|b|+1)) b*a".to_string(),
    }
}
