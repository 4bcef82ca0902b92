//! Quasi-operad plumbing: permutations and the induced block permutation,
//! the generic composition interface, exact axiom checkers, product
//! constructions (direct, semidirect in both directions, bicrossed), and the
//! small concrete operads on vectors: scaling, monoid-valued, and plain
//! splicing of spaces.
//!
//! Conventions, fixed once: a permutation acts on a vector by pulling,
//! `act(s, x)[p] = x[s(p)]`. The block permutation is the unique one making
//! the equivariance identity
//! `act(s, x) o_i act(s', y) = act(block(s, i, s'), x o_{s(i)} y)`
//! hold for the splice operads; its one-line form is the case split
//! implemented in [`block_permutation`].

use crate::angle::Angle;
use crate::rational::Q;
use std::fmt::Debug;
use std::marker::PhantomData;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OperadError {
    #[error("images {0:?} are not a permutation of 1..=n")]
    BadPermutation(Vec<usize>),
    #[error("index {0} out of range 1..={1}")]
    BadIndex(usize, usize),
}

/// A permutation of `{1, ..., n}`, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    map: Vec<usize>,
}

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm { map: (0..n).collect() }
    }

    /// Builds from 1-based images: `images[j-1]` is the image of `j`.
    pub fn from_images(images: &[usize]) -> Result<Perm, OperadError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for v in images {
            if *v < 1 || *v > n || seen[*v - 1] {
                return Err(OperadError::BadPermutation(images.to_vec()));
            }
            seen[*v - 1] = true;
        }
        Ok(Perm { map: images.iter().map(|v| v - 1).collect() })
    }

    pub fn transposition(n: usize, a: usize, b: usize) -> Result<Perm, OperadError> {
        if a < 1 || a > n {
            return Err(OperadError::BadIndex(a, n));
        }
        if b < 1 || b > n {
            return Err(OperadError::BadIndex(b, n));
        }
        let mut map: Vec<usize> = (0..n).collect();
        map.swap(a - 1, b - 1);
        Ok(Perm { map })
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    /// Image of `j`, 1-based.
    pub fn apply(&self, j: usize) -> usize {
        self.map[j - 1] + 1
    }

    pub fn is_identity(&self) -> bool {
        self.map.iter().enumerate().all(|(k, v)| k == *v)
    }

    pub fn inverse(&self) -> Perm {
        let mut map = vec![0; self.map.len()];
        for (j, v) in self.map.iter().enumerate() {
            map[*v] = j;
        }
        Perm { map }
    }

    /// Function composition: `(self.compose(other))(j) = self(other(j))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.n(), other.n(), "size mismatch");
        Perm { map: other.map.iter().map(|v| self.map[*v]).collect() }
    }

    /// Pull: `result[p] = xs[self(p)]`.
    pub fn pull<T: Clone>(&self, xs: &[T]) -> Vec<T> {
        assert_eq!(self.n(), xs.len(), "size mismatch");
        self.map.iter().map(|v| xs[*v].clone()).collect()
    }

    /// Push: `result[self(p)] = xs[p]`.
    pub fn push<T: Clone>(&self, xs: &[T]) -> Vec<T> {
        assert_eq!(self.n(), xs.len(), "size mismatch");
        let mut out: Vec<Option<T>> = vec![None; xs.len()];
        for (p, v) in self.map.iter().enumerate() {
            out[*v] = Some(xs[p].clone());
        }
        out.into_iter().map(|t| t.unwrap()).collect()
    }

    /// All permutations of `{1..n}` in a deterministic order.
    pub fn all(n: usize) -> Vec<Perm> {
        fn rec(prefix: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Perm>) {
            if rest.is_empty() {
                out.push(Perm { map: prefix.clone() });
                return;
            }
            for k in 0..rest.len() {
                let v = rest.remove(k);
                prefix.push(v);
                rec(prefix, rest, out);
                prefix.pop();
                rest.insert(k, v);
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut (0..n).collect(), &mut out);
        out
    }

    /// 1-based images.
    pub fn images(&self) -> Vec<usize> {
        self.map.iter().map(|v| v + 1).collect()
    }
}

/// The permutation induced on `m + n - 1` inputs when a block of `n` replaces
/// input `i` of `m`: positions below the block keep their (shifted) images,
/// the block lands at the image of `i`, and positions above shift past it.
pub fn block_permutation(
    sigma: &Perm,
    i: usize,
    sigma2: &Perm,
) -> Result<Perm, OperadError> {
    let m = sigma.n();
    let n = sigma2.n();
    if i < 1 || i > m {
        return Err(OperadError::BadIndex(i, m));
    }
    let si = sigma.apply(i);
    let adjust = |v: usize| if v < si { v } else { v + n - 1 };
    let mut images = Vec::with_capacity(m + n - 1);
    for p in 1..=(m + n - 1) {
        let img = if p < i {
            adjust(sigma.apply(p))
        } else if p < i + n {
            si - 1 + sigma2.apply(p - i + 1)
        } else {
            adjust(sigma.apply(p - n + 1))
        };
        images.push(img);
    }
    Perm::from_images(&images)
}

// ---------------------------------------------------------------------------
// The quasi-operad interface and axiom checkers
// ---------------------------------------------------------------------------

/// A collection of elements with arities, partial compositions and a
/// symmetric-group action. Associativity is not assumed; the checkers below
/// test it.
pub trait QuasiOperad {
    type El: Clone + Eq + Debug;

    fn arity(&self, x: &Self::El) -> usize;

    /// Partial composition at slot `i`, 1-based; `1 <= i <= arity(x)`.
    fn compose(&self, x: &Self::El, i: usize, y: &Self::El) -> Self::El;

    /// Group action; `sigma.n() == arity(x)`.
    fn act(&self, sigma: &Perm, x: &Self::El) -> Self::El;

    fn unit(&self) -> Option<Self::El> {
        None
    }
}

/// Which clause of the associativity case split failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AssocCase {
    /// `j < i`: the two insertions happen in disjoint slots, second first.
    Below,
    /// `i <= j < i + l`: the second insertion lands inside the first block.
    Inside,
    /// `j >= i + l`: disjoint slots, second past the block.
    Above,
}

#[derive(Debug, Clone)]
pub struct Violation {
    pub sample: usize,
    pub case: Option<AssocCase>,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Verifies, per sample `(x, i, y, j, z)`, that composing in either order
/// agrees, using the case split on how slot `j` relates to the block of `y`.
pub fn check_associativity<O: QuasiOperad>(
    op: &O,
    samples: &[(O::El, usize, O::El, usize, O::El)],
) -> CheckReport {
    let mut violations = Vec::new();
    for (idx, (x, i, y, j, z)) in samples.iter().enumerate() {
        let (i, j) = (*i, *j);
        let n = op.arity(x);
        let l = op.arity(y);
        assert!(i >= 1 && i <= n, "sample {idx}: slot i out of range");
        assert!(j >= 1 && j <= n + l - 1, "sample {idx}: slot j out of range");
        let lhs = op.compose(&op.compose(x, i, y), j, z);
        let (case, rhs) = if j < i {
            let k = op.arity(z);
            (AssocCase::Below, op.compose(&op.compose(x, j, z), i + k - 1, y))
        } else if j < i + l {
            (AssocCase::Inside, op.compose(x, i, &op.compose(y, j - i + 1, z)))
        } else {
            (AssocCase::Above, op.compose(&op.compose(x, j - l + 1, z), i, y))
        };
        if lhs != rhs {
            violations.push(Violation {
                sample: idx,
                case: Some(case),
                detail: format!(
                    "(x {i} y) {j} z: lhs {lhs:?} != rhs {rhs:?} with x={x:?} y={y:?} z={z:?}"
                ),
            });
        }
    }
    CheckReport { checked: samples.len(), violations }
}

/// Verifies, per sample `(sigma, x, i, sigma', y)`, the compatibility of the
/// action with composition via the block permutation.
pub fn check_equivariance<O: QuasiOperad>(
    op: &O,
    samples: &[(Perm, O::El, usize, Perm, O::El)],
) -> CheckReport {
    let mut violations = Vec::new();
    for (idx, (sigma, x, i, sigma2, y)) in samples.iter().enumerate() {
        let i = *i;
        assert_eq!(sigma.n(), op.arity(x), "sample {idx}: sigma size");
        assert_eq!(sigma2.n(), op.arity(y), "sample {idx}: sigma' size");
        assert!(i >= 1 && i <= sigma.n(), "sample {idx}: slot out of range");
        let lhs = op.compose(&op.act(sigma, x), i, &op.act(sigma2, y));
        let tau = block_permutation(sigma, i, sigma2).expect("valid index");
        let rhs = op.act(&tau, &op.compose(x, sigma.apply(i), y));
        if lhs != rhs {
            violations.push(Violation {
                sample: idx,
                case: None,
                detail: format!(
                    "sigma={:?} i={i} sigma'={:?}: lhs {lhs:?} != rhs {rhs:?} with x={x:?} y={y:?}",
                    sigma.images(),
                    sigma2.images()
                ),
            });
        }
    }
    CheckReport { checked: samples.len(), violations }
}

/// Verifies both unit laws on each sample, when the operad has a unit.
pub fn check_units<O: QuasiOperad>(op: &O, samples: &[O::El]) -> CheckReport {
    let Some(unit) = op.unit() else {
        return CheckReport { checked: 0, violations: Vec::new() };
    };
    let mut violations = Vec::new();
    for (idx, x) in samples.iter().enumerate() {
        for i in 1..=op.arity(x) {
            let r = op.compose(x, i, &unit);
            if r != *x {
                violations.push(Violation {
                    sample: idx,
                    case: None,
                    detail: format!("x {i} unit != x for x={x:?}: got {r:?}"),
                });
            }
        }
        let l = op.compose(&unit, 1, x);
        if l != *x {
            violations.push(Violation {
                sample: idx,
                case: None,
                detail: format!("unit 1 x != x for x={x:?}: got {l:?}"),
            });
        }
    }
    CheckReport { checked: samples.len(), violations }
}

// ---------------------------------------------------------------------------
// Concrete vector operads
// ---------------------------------------------------------------------------

/// `(r_1..r_n) o_i (r'_1..r'_m)`: the inserted block is `r'` rescaled so its
/// total becomes `r_i`.
pub fn scaling_compose(x: &[Q], i: usize, y: &[Q]) -> Vec<Q> {
    assert!(i >= 1 && i <= x.len(), "slot out of range");
    let total: Q = y.iter().sum();
    let factor = &x[i - 1] / total;
    let mut out = Vec::with_capacity(x.len() + y.len() - 1);
    out.extend_from_slice(&x[..i - 1]);
    out.extend(y.iter().map(|v| &factor * v));
    out.extend_from_slice(&x[i..]);
    out
}

/// `(s_1..s_n) o_i (s'_1..s'_m)`: slot `i` is replaced by `s_i * s'_t`.
pub fn monoid_compose<T: Clone>(
    mul: impl Fn(&T, &T) -> T,
    x: &[T],
    i: usize,
    y: &[T],
) -> Vec<T> {
    assert!(i >= 1 && i <= x.len(), "slot out of range");
    let mut out = Vec::with_capacity(x.len() + y.len() - 1);
    out.extend_from_slice(&x[..i - 1]);
    out.extend(y.iter().map(|v| mul(&x[i - 1], v)));
    out.extend_from_slice(&x[i..]);
    out
}

/// Plain splice: slot `i` is replaced by the entries of `y`.
pub fn spaces_compose<T: Clone>(x: &[T], i: usize, y: &[T]) -> Vec<T> {
    assert!(i >= 1 && i <= x.len(), "slot out of range");
    let mut out = Vec::with_capacity(x.len() + y.len() - 1);
    out.extend_from_slice(&x[..i - 1]);
    out.extend_from_slice(y);
    out.extend_from_slice(&x[i..]);
    out
}

/// Tuples of positive rationals under rescaling insertion. No two-sided unit:
/// any single tuple is a right unit but not a left one.
#[derive(Debug, Clone, Copy, Default)]
pub struct ScalingOperad;

impl QuasiOperad for ScalingOperad {
    type El = Vec<Q>;

    fn arity(&self, x: &Vec<Q>) -> usize {
        x.len()
    }

    fn compose(&self, x: &Vec<Q>, i: usize, y: &Vec<Q>) -> Vec<Q> {
        scaling_compose(x, i, y)
    }

    fn act(&self, sigma: &Perm, x: &Vec<Q>) -> Vec<Q> {
        sigma.pull(x)
    }
}

/// Tuples of angles under additive insertion; the circle-monoid instance.
#[derive(Debug, Clone, Copy, Default)]
pub struct AngleOperad;

impl QuasiOperad for AngleOperad {
    type El = Vec<Angle>;

    fn arity(&self, x: &Vec<Angle>) -> usize {
        x.len()
    }

    fn compose(&self, x: &Vec<Angle>, i: usize, y: &Vec<Angle>) -> Vec<Angle> {
        monoid_compose(|a: &Angle, b: &Angle| a.clone() + b.clone(), x, i, y)
    }

    fn act(&self, sigma: &Perm, x: &Vec<Angle>) -> Vec<Angle> {
        sigma.pull(x)
    }

    fn unit(&self) -> Option<Vec<Angle>> {
        Some(vec![Angle::zero()])
    }
}

/// Tuples over an arbitrary carrier under plain splicing.
#[derive(Debug, Clone, Copy, Default)]
pub struct SpacesOperad<T>(PhantomData<T>);

impl<T> SpacesOperad<T> {
    pub fn new() -> SpacesOperad<T> {
        SpacesOperad(PhantomData)
    }
}

impl<T: Clone + Eq + Debug> QuasiOperad for SpacesOperad<T> {
    type El = Vec<T>;

    fn arity(&self, x: &Vec<T>) -> usize {
        x.len()
    }

    fn compose(&self, x: &Vec<T>, i: usize, y: &Vec<T>) -> Vec<T> {
        spaces_compose(x, i, y)
    }

    fn act(&self, sigma: &Perm, x: &Vec<T>) -> Vec<T> {
        sigma.pull(x)
    }
}

// ---------------------------------------------------------------------------
// Products
// ---------------------------------------------------------------------------

pub type TwistLeft<A, B> = Box<
    dyn Fn(
        &<A as QuasiOperad>::El,
        usize,
        &<B as QuasiOperad>::El,
        &<A as QuasiOperad>::El,
    ) -> <A as QuasiOperad>::El,
>;

pub type TwistRight<A, B> = Box<
    dyn Fn(
        &<B as QuasiOperad>::El,
        usize,
        &<A as QuasiOperad>::El,
        &<B as QuasiOperad>::El,
    ) -> <B as QuasiOperad>::El,
>;

/// Product of two quasi-operads on pairs, with the diagonal action. Optional
/// twists perturb either component's composition using the other component's
/// data: the left twist sees the left element's partner `d`, the right twist
/// sees the incoming partner `c'`. Both twists absent is the direct product;
/// one twist gives the semidirect products; both give the bicrossed product.
pub struct ProductOperad<A: QuasiOperad, B: QuasiOperad> {
    pub left: A,
    pub right: B,
    twist_left: Option<TwistLeft<A, B>>,
    twist_right: Option<TwistRight<A, B>>,
}

impl<A: QuasiOperad, B: QuasiOperad> ProductOperad<A, B> {
    pub fn direct(left: A, right: B) -> Self {
        ProductOperad { left, right, twist_left: None, twist_right: None }
    }

    /// `(c, d) o_i (c', d') = (twist(c, i, d, c'), d o_i d')`.
    pub fn semidirect(left: A, right: B, twist: TwistLeft<A, B>) -> Self {
        ProductOperad { left, right, twist_left: Some(twist), twist_right: None }
    }

    /// `(c, d) o_i (c', d') = (c o_i c', twist(d, i, c', d'))`.
    pub fn right_semidirect(left: A, right: B, twist: TwistRight<A, B>) -> Self {
        ProductOperad { left, right, twist_left: None, twist_right: Some(twist) }
    }

    /// `(c, d) o_i (c', d') = (twistL(c, i, d, c'), twistR(d, i, c', d'))`.
    pub fn bicrossed(
        left: A,
        right: B,
        twist_left: TwistLeft<A, B>,
        twist_right: TwistRight<A, B>,
    ) -> Self {
        ProductOperad { left, right, twist_left: Some(twist_left), twist_right: Some(twist_right) }
    }
}

impl<A: QuasiOperad, B: QuasiOperad> QuasiOperad for ProductOperad<A, B> {
    type El = (A::El, B::El);

    fn arity(&self, x: &Self::El) -> usize {
        let n = self.left.arity(&x.0);
        debug_assert_eq!(n, self.right.arity(&x.1), "component arity mismatch");
        n
    }

    fn compose(&self, x: &Self::El, i: usize, y: &Self::El) -> Self::El {
        let a = match &self.twist_left {
            Some(t) => t(&x.0, i, &x.1, &y.0),
            None => self.left.compose(&x.0, i, &y.0),
        };
        let b = match &self.twist_right {
            Some(t) => t(&x.1, i, &y.0, &y.1),
            None => self.right.compose(&x.1, i, &y.1),
        };
        (a, b)
    }

    fn act(&self, sigma: &Perm, x: &Self::El) -> Self::El {
        (self.left.act(sigma, &x.0), self.right.act(sigma, &x.1))
    }

    fn unit(&self) -> Option<Self::El> {
        Some((self.left.unit()?, self.right.unit()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qi};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn perm_basics() {
        let p = Perm::from_images(&[2, 3, 1]).unwrap();
        assert_eq!(p.apply(1), 2);
        assert_eq!(p.inverse().apply(2), 1);
        assert!(p.compose(&p.inverse()).is_identity());
        assert_eq!(p.pull(&[10, 20, 30]), vec![20, 30, 10]);
        assert_eq!(p.push(&[10, 20, 30]), vec![30, 10, 20]);
        assert_eq!(Perm::all(3).len(), 6);
        assert!(Perm::from_images(&[1, 1]).is_err());
        assert!(Perm::from_images(&[0, 1]).is_err());
    }

    #[test]
    fn block_permutation_identity_and_example() {
        let id2 = Perm::identity(2);
        let id3 = Perm::identity(3);
        assert!(block_permutation(&id3, 2, &id2).unwrap().is_identity());

        // Swapping two slots where slot 1 holds a block of 2 moves the block
        // past the singleton: (1,2,3) -> (3,1,2).
        let swap = Perm::transposition(2, 1, 2).unwrap();
        let tau = block_permutation(&swap, 1, &id2).unwrap();
        assert_eq!(tau.push(&[1, 2, 3]), vec![3, 1, 2]);

        assert!(block_permutation(&swap, 3, &id2).is_err());
    }

    #[test]
    fn block_permutation_matches_the_equivariance_oracle() {
        // The defining property on the splice operad, exhaustively for small
        // sizes: both evaluation orders of labelled symbols must agree.
        let op = SpacesOperad::<(char, usize)>::new();
        for m in 1..=4usize {
            for n in 1..=4usize {
                let x: Vec<(char, usize)> = (1..=m).map(|k| ('x', k)).collect();
                let y: Vec<(char, usize)> = (1..=n).map(|k| ('y', k)).collect();
                for sigma in Perm::all(m) {
                    for sigma2 in Perm::all(n) {
                        for i in 1..=m {
                            let lhs =
                                op.compose(&op.act(&sigma, &x), i, &op.act(&sigma2, &y));
                            let tau = block_permutation(&sigma, i, &sigma2).unwrap();
                            let rhs =
                                op.act(&tau, &op.compose(&x, sigma.apply(i), &y));
                            assert_eq!(lhs, rhs, "m={m} n={n} i={i}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn block_of_blocks_is_associative() {
        // Nested blocks must flatten consistently: insert sigma2 into sigma,
        // then sigma3, both ways.
        for sigma in Perm::all(3) {
            for sigma2 in Perm::all(2) {
                for sigma3 in Perm::all(2) {
                    for i in 1..=3usize {
                        for j in 1..=2usize {
                            // tau = (sigma o_i sigma2), then insert sigma3 at
                            // the slot inside the block.
                            let tau = block_permutation(&sigma, i, &sigma2).unwrap();
                            let lhs =
                                block_permutation(&tau, i + j - 1, &sigma3).unwrap();
                            let inner = block_permutation(&sigma2, j, &sigma3).unwrap();
                            let rhs = block_permutation(&sigma, i, &inner).unwrap();
                            assert_eq!(lhs, rhs, "i={i} j={j}");
                        }
                    }
                }
            }
        }
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(0x5eed)
    }

    fn random_scaling(rng: &mut ChaCha8Rng, n: usize) -> Vec<Q> {
        (0..n).map(|_| q(rng.gen_range(1..=9), rng.gen_range(1..=4))).collect()
    }

    fn random_angles(rng: &mut ChaCha8Rng, n: usize) -> Vec<Angle> {
        (0..n)
            .map(|_| Angle::new(q(rng.gen_range(0..=23), 24)))
            .collect()
    }

    #[test]
    fn scaling_compose_examples() {
        let r = scaling_compose(&[qi(1), qi(2)], 1, &[qi(3), qi(1)]);
        assert_eq!(r, vec![q(3, 4), q(1, 4), qi(2)]);
        // Any single tuple acts as a right unit.
        let x = vec![q(7, 2)];
        assert_eq!(scaling_compose(&x, 1, &[qi(1)]), x);
        assert_eq!(scaling_compose(&[qi(2), qi(5)], 2, &[q(1, 3)]), vec![qi(2), qi(5)]);
    }

    #[test]
    fn monoid_compose_example_on_angles() {
        let op = AngleOperad;
        let x = vec![Angle::new(q(1, 4)), Angle::new(q(1, 2))];
        let y = vec![Angle::new(q(1, 3))];
        let r = op.compose(&x, 2, &y);
        assert_eq!(r, vec![Angle::new(q(1, 4)), Angle::new(q(5, 6))]);
    }

    #[test]
    fn spaces_compose_example() {
        let r = spaces_compose(&['a', 'b'], 1, &['c', 'd']);
        assert_eq!(r, vec!['c', 'd', 'b']);
        let r = spaces_compose(&['a', 'b'], 1, &['y']);
        assert_eq!(r, vec!['y', 'b']);
    }

    fn assoc_samples_scaling(count: usize) -> Vec<(Vec<Q>, usize, Vec<Q>, usize, Vec<Q>)> {
        let mut rng = rng();
        (0..count)
            .map(|_| {
                let n = rng.gen_range(1..=4);
                let l = rng.gen_range(1..=4);
                let k = rng.gen_range(1..=4);
                let x = random_scaling(&mut rng, n);
                let y = random_scaling(&mut rng, l);
                let z = random_scaling(&mut rng, k);
                let i = rng.gen_range(1..=n);
                let j = rng.gen_range(1..=(n + l - 1));
                (x, i, y, j, z)
            })
            .collect()
    }

    #[test]
    fn scaling_operad_passes_axioms() {
        let op = ScalingOperad;
        let report = check_associativity(&op, &assoc_samples_scaling(300));
        assert!(report.ok(), "{:?}", report.violations.first());
        assert_eq!(report.checked, 300);

        let mut rng = rng();
        let eq_samples: Vec<_> = (0..300)
            .map(|_| {
                let m = rng.gen_range(1..=4);
                let n = rng.gen_range(1..=4);
                let perms_m = Perm::all(m);
                let perms_n = Perm::all(n);
                let sigma = perms_m[rng.gen_range(0..perms_m.len())].clone();
                let sigma2 = perms_n[rng.gen_range(0..perms_n.len())].clone();
                let x = random_scaling(&mut rng, m);
                let y = random_scaling(&mut rng, n);
                let i = rng.gen_range(1..=m);
                (sigma, x, i, sigma2, y)
            })
            .collect();
        let report = check_equivariance(&op, &eq_samples);
        assert!(report.ok(), "{:?}", report.violations.first());
    }

    #[test]
    fn angle_operad_passes_axioms_and_units() {
        let op = AngleOperad;
        let mut rng = rng();
        let samples: Vec<_> = (0..300)
            .map(|_| {
                let n = rng.gen_range(1..=4);
                let l = rng.gen_range(1..=4);
                let k = rng.gen_range(1..=4);
                let x = random_angles(&mut rng, n);
                let y = random_angles(&mut rng, l);
                let z = random_angles(&mut rng, k);
                let i = rng.gen_range(1..=n);
                let j = rng.gen_range(1..=(n + l - 1));
                (x, i, y, j, z)
            })
            .collect();
        assert!(check_associativity(&op, &samples).ok());

        let unit_samples: Vec<_> = (0..50).map(|_| random_angles(&mut rng, 3)).collect();
        assert!(check_units(&op, &unit_samples).ok());
    }

    #[test]
    fn spaces_operad_passes_associativity() {
        let op = SpacesOperad::<u32>::new();
        let mut rng = rng();
        let samples: Vec<_> = (0..300)
            .map(|_| {
                let n = rng.gen_range(1..=4);
                let l = rng.gen_range(1..=4);
                let k = rng.gen_range(1..=4);
                let x: Vec<u32> = (0..n).map(|_| rng.gen_range(0..100)).collect();
                let y: Vec<u32> = (0..l).map(|_| rng.gen_range(0..100)).collect();
                let z: Vec<u32> = (0..k).map(|_| rng.gen_range(0..100)).collect();
                let i = rng.gen_range(1..=n);
                let j = rng.gen_range(1..=(n + l - 1));
                (x, i, y, j, z)
            })
            .collect();
        let report = check_associativity(&op, &samples);
        assert!(report.ok());
    }

    #[test]
    fn checker_reports_each_case() {
        // A deliberately broken action (identity instead of pulling) breaks
        // equivariance and the report says where.
        struct Broken;
        impl QuasiOperad for Broken {
            type El = Vec<u32>;
            fn arity(&self, x: &Vec<u32>) -> usize {
                x.len()
            }
            fn compose(&self, x: &Vec<u32>, i: usize, y: &Vec<u32>) -> Vec<u32> {
                spaces_compose(x, i, y)
            }
            fn act(&self, _sigma: &Perm, x: &Vec<u32>) -> Vec<u32> {
                x.clone()
            }
        }
        let swap = Perm::transposition(2, 1, 2).unwrap();
        let samples = vec![(swap, vec![1, 2], 1, Perm::identity(1), vec![7])];
        let report = check_equivariance(&Broken, &samples);
        assert_eq!(report.violations.len(), 1);
        assert!(report.violations[0].case.is_none());

        // A compose that ignores the slot index fails associativity in the
        // disjoint-slot cases with the case recorded. (It cannot fail the
        // inside case: both orders there collapse to the same concatenation.)
        struct Sloppy;
        impl QuasiOperad for Sloppy {
            type El = Vec<u32>;
            fn arity(&self, x: &Vec<u32>) -> usize {
                x.len()
            }
            fn compose(&self, x: &Vec<u32>, _i: usize, y: &Vec<u32>) -> Vec<u32> {
                spaces_compose(x, 1, y)
            }
            fn act(&self, sigma: &Perm, x: &Vec<u32>) -> Vec<u32> {
                sigma.pull(x)
            }
        }
        let samples = vec![
            (vec![1, 2], 2, vec![3], 1, vec![4]),
            (vec![1, 2], 1, vec![3], 2, vec![4]),
        ];
        let report = check_associativity(&Sloppy, &samples);
        assert_eq!(report.violations.len(), 2);
        assert_eq!(report.violations[0].case, Some(AssocCase::Below));
        assert_eq!(report.violations[1].case, Some(AssocCase::Above));

        // A compose that reverses the inserted block fails the inside case.
        struct Reversy;
        impl QuasiOperad for Reversy {
            type El = Vec<u32>;
            fn arity(&self, x: &Vec<u32>) -> usize {
                x.len()
            }
            fn compose(&self, x: &Vec<u32>, i: usize, y: &Vec<u32>) -> Vec<u32> {
                let mut rev = y.clone();
                rev.reverse();
                spaces_compose(x, i, &rev)
            }
            fn act(&self, sigma: &Perm, x: &Vec<u32>) -> Vec<u32> {
                sigma.pull(x)
            }
        }
        let samples = vec![(vec![1, 2], 1, vec![3, 4], 1, vec![5, 6])];
        let report = check_associativity(&Reversy, &samples);
        assert_eq!(report.violations.len(), 1);
        assert_eq!(report.violations[0].case, Some(AssocCase::Inside));
    }

    #[test]
    fn direct_product_is_an_operad() {
        let op = ProductOperad::direct(ScalingOperad, AngleOperad);
        let mut rng = rng();
        let samples: Vec<_> = (0..200)
            .map(|_| {
                let n = rng.gen_range(1..=3);
                let l = rng.gen_range(1..=3);
                let k = rng.gen_range(1..=3);
                let x = (random_scaling(&mut rng, n), random_angles(&mut rng, n));
                let y = (random_scaling(&mut rng, l), random_angles(&mut rng, l));
                let z = (random_scaling(&mut rng, k), random_angles(&mut rng, k));
                let i = rng.gen_range(1..=n);
                let j = rng.gen_range(1..=(n + l - 1));
                (x, i, y, j, z)
            })
            .collect();
        assert!(check_associativity(&op, &samples).ok());
    }

    #[test]
    fn trivial_twists_recover_the_direct_product() {
        let direct = ProductOperad::direct(ScalingOperad, AngleOperad);
        let semi = ProductOperad::semidirect(
            ScalingOperad,
            AngleOperad,
            Box::new(|c: &Vec<Q>, i, _d: &Vec<Angle>, c2: &Vec<Q>| scaling_compose(c, i, c2)),
        );
        let bi = ProductOperad::bicrossed(
            ScalingOperad,
            AngleOperad,
            Box::new(|c: &Vec<Q>, i, _d: &Vec<Angle>, c2: &Vec<Q>| scaling_compose(c, i, c2)),
            Box::new(|d: &Vec<Angle>, i, _c2: &Vec<Q>, d2: &Vec<Angle>| {
                AngleOperad.compose(d, i, d2)
            }),
        );
        let mut rng = rng();
        for _ in 0..100 {
            let n = rng.gen_range(1..=3);
            let l = rng.gen_range(1..=3);
            let x = (random_scaling(&mut rng, n), random_angles(&mut rng, n));
            let y = (random_scaling(&mut rng, l), random_angles(&mut rng, l));
            let i = rng.gen_range(1..=n);
            let d = direct.compose(&x, i, &y);
            assert_eq!(semi.compose(&x, i, &y), d);
            assert_eq!(bi.compose(&x, i, &y), d);
        }
    }
}
