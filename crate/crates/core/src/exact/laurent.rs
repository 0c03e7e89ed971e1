use super::{Rat, Weight};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// Finite Laurent polynomial in the three torus characters: a map
/// `Weight -> Rat` with no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Weight, Rat>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(Weight::ZERO, super::rat_int(1))
    }

    pub fn monomial(w: Weight, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(w, c);
        }
        LaurentPoly { terms }
    }

    /// The character `t^w`.
    pub fn character(w: Weight) -> Self {
        Self::monomial(w, super::rat_int(1))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, w: &Weight) -> Rat {
        self.terms.get(w).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Weight, &Rat)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Weight> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, w: Weight, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(w).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&w);
        }
    }

    /// Sum of all coefficients: the rank of the virtual representation.
    pub fn rank(&self) -> Rat {
        let mut r = Rat::zero();
        for c in self.terms.values() {
            r += c;
        }
        r
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(w, v)| (*w, v * c)).collect(),
        }
    }

    /// Multiply every term by `t^w`.
    pub fn shifted(&self, w: Weight) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(u, c)| (*u + w, c.clone())).collect(),
        }
    }

    /// Substitute `t_i -> t_{perm(i)}` on every exponent.
    pub fn permuted(&self, perm: &[usize; 3]) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.permuted(perm), c.clone()))
                .collect(),
        }
    }

    /// Dual character: `t^w -> t^{-w}`.
    pub fn bar(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(w, c)| (-*w, c.clone())).collect(),
        }
    }

    /// Exact division by the binomial `1 - t^v`; `None` when not divisible.
    ///
    /// Runs graded elimination along the functional `w -> w.v`, which is
    /// strictly positive on `v`; the quotient terms at each minimal level
    /// are forced, so failure to clear the remainder is a proof of
    /// non-divisibility.
    pub fn div_binomial(&self, v: &Weight) -> Option<LaurentPoly> {
        assert!(!v.is_zero(), "division by 1 - t^0 = 0");
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        let phi = v.0;
        let step = v.dot(&phi);
        debug_assert!(step > 0);
        let max_level = self.support().map(|w| w.dot(&phi)).max().unwrap();
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        while !rem.is_zero() {
            let level = rem.support().map(|w| w.dot(&phi)).min().unwrap();
            if level + step > max_level {
                return None;
            }
            let batch: Vec<(Weight, Rat)> = rem
                .iter()
                .filter(|(w, _)| w.dot(&phi) == level)
                .map(|(w, c)| (*w, c.clone()))
                .collect();
            for (w, c) in batch {
                quot.add_term(w, &c);
                rem.add_term(w, &(-c.clone()));
                rem.add_term(w + *v, &c);
            }
        }
        Some(quot)
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (w, c) in rhs.terms.iter() {
            out.add_term(*w, c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (w, c) in rhs.terms.iter() {
            out.add_term(*w, &(-c.clone()));
        }
        out
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.into_iter().map(|(w, c)| (w, -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (w1, c1) in self.terms.iter() {
            for (w2, c2) in rhs.terms.iter() {
                out.add_term(*w1 + *w2, &(c1 * c2));
            }
        }
        out
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in self.terms.iter() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if w.is_zero() {
                write!(f, "{}", super::rat_to_string(c))?;
            } else {
                write!(f, "{}*t^{}", super::rat_to_string(c), w)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
