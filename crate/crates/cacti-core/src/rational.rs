//! Shared exact-rational scalar type and small construction helpers.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// The scalar used everywhere: an arbitrary-precision rational, always reduced.
pub type Q = BigRational;

/// `p/q` as a rational. Panics when `q == 0`.
pub fn q(p: i64, den: i64) -> Q {
    BigRational::new(BigInt::from(p), BigInt::from(den))
}

/// An integer as a rational.
pub fn qi(p: i64) -> Q {
    BigRational::from_integer(BigInt::from(p))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// True Euclidean remainder of `a` modulo positive `m`, in `[0, m)`.
pub fn rem_euclid(a: &Q, m: &Q) -> Q {
    debug_assert!(m.is_positive());
    let mut r = a - (a / m).floor() * m;
    if r.is_negative() {
        r += m;
    }
    if &r >= m {
        r -= m;
    }
    r
}

/// Renders a rational as `p` or `p/q`, the form accepted back by the parsers.
pub fn fmt_q(x: &Q) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parses `p` or `p/q` (reduced on construction). Rejects zero denominators.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    match s.split_once('/') {
        None => s.parse::<BigInt>().ok().map(BigRational::from_integer),
        Some((p, den)) => {
            let p = p.trim().parse::<BigInt>().ok()?;
            let den = den.trim().parse::<BigInt>().ok()?;
            if den.is_zero() {
                None
            } else {
                Some(BigRational::new(p, den))
            }
        }
    }
}
