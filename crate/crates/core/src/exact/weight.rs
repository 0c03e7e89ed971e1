use serde::{Deserialize, Serialize};
use std::fmt;
use std::ops::{Add, Neg, Sub};

/// Integer 3-vector `w`, read multiplicatively as the character
/// `t^w = t1^{w1} t2^{w2} t3^{w3}` and additively as the linear form
/// `w1*s1 + w2*s2 + w3*s3`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Weight(pub [i64; 3]);

impl Weight {
    pub const ZERO: Weight = Weight([0, 0, 0]);

    pub fn new(a: i64, b: i64, c: i64) -> Self {
        Weight([a, b, c])
    }

    pub fn is_zero(&self) -> bool {
        self.0 == [0, 0, 0]
    }

    /// Scalar multiple `k*w`.
    pub fn scale(&self, k: i64) -> Self {
        Weight([self.0[0] * k, self.0[1] * k, self.0[2] * k])
    }

    /// Value of the linear functional `phi` on this weight.
    pub fn dot(&self, phi: &[i64; 3]) -> i64 {
        self.0[0] * phi[0] + self.0[1] * phi[1] + self.0[2] * phi[2]
    }

    /// True when `self = k * other` for some rational k (and both nonzero).
    pub fn parallel_to(&self, other: &Weight) -> bool {
        let a = self.0;
        let b = other.0;
        a[0] * b[1] == a[1] * b[0] && a[0] * b[2] == a[2] * b[0] && a[1] * b[2] == a[2] * b[1]
    }

    /// Integer k with `self = k * dir`, if one exists and `dir != 0`.
    pub fn ratio_over(&self, dir: &Weight) -> Option<i64> {
        if dir.is_zero() || !self.parallel_to(dir) {
            return None;
        }
        if self.is_zero() {
            return Some(0);
        }
        let idx = (0..3).find(|&i| dir.0[i] != 0)?;
        if self.0[idx] % dir.0[idx] != 0 {
            return None;
        }
        let k = self.0[idx] / dir.0[idx];
        if self == &dir.scale(k) {
            Some(k)
        } else {
            None
        }
    }

    pub fn permuted(&self, perm: &[usize; 3]) -> Self {
        Weight([self.0[perm[0]], self.0[perm[1]], self.0[perm[2]]])
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        Weight([
            self.0[0] + rhs.0[0],
            self.0[1] + rhs.0[1],
            self.0[2] + rhs.0[2],
        ])
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        Weight([
            self.0[0] - rhs.0[0],
            self.0[1] - rhs.0[1],
            self.0[2] - rhs.0[2],
        ])
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight([-self.0[0], -self.0[1], -self.0[2]])
    }
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}
