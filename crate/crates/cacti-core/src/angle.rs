//! Points on the unit circle as exact rationals in `[0, 1)`.

use crate::rational::{rem_euclid, Q};
use num_traits::{One, Zero};
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// A rational angle, i.e. an element of the circle group `Q/Z`,
/// stored by its unique representative in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Angle(Q);

impl Angle {
    /// Wraps an arbitrary rational into `[0, 1)`.
    pub fn new(v: Q) -> Self {
        Angle(rem_euclid(&v, &Q::one()))
    }

    pub fn zero() -> Self {
        Angle(Q::zero())
    }

    pub fn as_q(&self) -> &Q {
        &self.0
    }

    pub fn into_q(self) -> Q {
        self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle::new(self.0 + rhs.0)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle::new(self.0 - rhs.0)
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle::new(-self.0)
    }
}

impl fmt::Debug for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Angle({})", self.0)
    }
}
