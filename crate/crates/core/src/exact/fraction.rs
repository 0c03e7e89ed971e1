use super::{ExactError, LaurentPoly, Weight};

/// A value `num / prod_v (1 - t^v)` in the character function field.
///
/// Denominator weights are kept as a sorted multiset; every weight must be
/// nonzero. These fractions arise from two-point Euler characteristics on
/// invariant curves before cancellation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CharFraction {
    pub num: LaurentPoly,
    den: Vec<Weight>,
}

impl CharFraction {
    pub fn new(num: LaurentPoly, mut den: Vec<Weight>) -> Self {
        assert!(den.iter().all(|v| !v.is_zero()), "denominator weight is zero");
        den.sort();
        CharFraction { num, den }
    }

    pub fn zero() -> Self {
        CharFraction {
            num: LaurentPoly::zero(),
            den: Vec::new(),
        }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        CharFraction {
            num: p,
            den: Vec::new(),
        }
    }

    /// `t^w / (1 - t^v)`.
    pub fn geometric(w: Weight, v: Weight) -> Self {
        CharFraction::new(LaurentPoly::character(w), vec![v])
    }

    pub fn den(&self) -> &[Weight] {
        &self.den
    }

    pub fn negated(self) -> Self {
        CharFraction {
            num: -self.num,
            den: self.den,
        }
    }

    /// Sum over a common denominator (the multiset max of the two
    /// denominators); no cancellation is attempted.
    pub fn combine(&self, other: &CharFraction) -> CharFraction {
        let common = multiset_max(&self.den, &other.den);
        let lift_a = multiset_diff(&common, &self.den);
        let lift_b = multiset_diff(&common, &other.den);
        let num_a = &self.num * &den_product(&lift_a);
        let num_b = &other.num * &den_product(&lift_b);
        CharFraction {
            num: &num_a + &num_b,
            den: common,
        }
    }

    /// Exact quotient as a Laurent polynomial, when the numerator is
    /// divisible by the denominator product.
    pub fn normalize(&self) -> Result<LaurentPoly, ExactError> {
        let mut p = self.num.clone();
        for v in &self.den {
            p = p.div_binomial(v).ok_or(ExactError::NotPolynomial)?;
        }
        Ok(p)
    }
}

/// Combine any number of fractions; the empty sum is zero.
pub fn combine_all<I: IntoIterator<Item = CharFraction>>(fractions: I) -> CharFraction {
    let mut acc = CharFraction::zero();
    for f in fractions {
        acc = acc.combine(&f);
    }
    acc
}

fn den_product(weights: &[Weight]) -> LaurentPoly {
    let mut p = LaurentPoly::one();
    for v in weights {
        let factor = &LaurentPoly::one() - &LaurentPoly::character(*v);
        p = &p * &factor;
    }
    p
}

fn multiset_max(a: &[Weight], b: &[Weight]) -> Vec<Weight> {
    let mut counts: std::collections::BTreeMap<Weight, (usize, usize)> =
        std::collections::BTreeMap::new();
    for w in a {
        counts.entry(*w).or_insert((0, 0)).0 += 1;
    }
    for w in b {
        counts.entry(*w).or_insert((0, 0)).1 += 1;
    }
    let mut out = Vec::new();
    for (w, (na, nb)) in counts {
        for _ in 0..na.max(nb) {
            out.push(w);
        }
    }
    out
}

fn multiset_diff(big: &[Weight], small: &[Weight]) -> Vec<Weight> {
    let mut out = big.to_vec();
    for w in small {
        let pos = out
            .iter()
            .position(|x| x == w)
            .expect("multiset_diff underflow");
        out.remove(pos);
    }
    out
}

/// Expand `f` as a formal character series and keep the terms whose value
/// under the integer functional `phi` lies in `window` (inclusive).
///
/// Factors `1/(1 - t^v)` with `phi(v) > 0` expand as `sum_{k>=0} t^{kv}`;
/// when `phi(v) < 0` the factor is first rewritten as
/// `-t^{-v} / (1 - t^{-v})`. This is an implementation-independent oracle
/// for [`CharFraction::normalize`].
pub fn series_oracle(
    f: &CharFraction,
    phi: &[i64; 3],
    window: (i64, i64),
) -> Result<LaurentPoly, ExactError> {
    let (lo, hi) = window;
    let mut dirs = Vec::with_capacity(f.den.len());
    let mut shift = Weight::ZERO;
    let mut negate = false;
    for v in &f.den {
        let d = v.dot(phi);
        if d == 0 {
            return Err(ExactError::DegenerateFunctional(*v));
        }
        if d > 0 {
            dirs.push(*v);
        } else {
            dirs.push(-*v);
            shift = shift + -*v;
            negate = !negate;
        }
    }
    let mut acc = f.num.shifted(shift);
    if negate {
        acc = -acc;
    }
    // every remaining factor only raises phi, so terms above `hi` can be
    // dropped as soon as they appear
    for dir in dirs {
        let step = dir.dot(phi);
        let mut next = LaurentPoly::zero();
        for (w, c) in acc.iter() {
            let mut k = 0i64;
            while w.dot(phi) + k * step <= hi {
                next.add_term(*w + dir.scale(k), c);
                k += 1;
            }
        }
        acc = next;
    }
    let mut out = LaurentPoly::zero();
    for (w, c) in acc.iter() {
        let v = w.dot(phi);
        if v >= lo && v <= hi {
            out.add_term(*w, c);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::rat_int;
    use super::*;

    fn tch(w: [i64; 3]) -> LaurentPoly {
        LaurentPoly::character(Weight(w))
    }

    #[test]
    fn combine_additive_identity() {
        let a = CharFraction::geometric(Weight::new(1, 2, 0), Weight::new(1, 0, 0));
        let z = CharFraction::zero();
        assert_eq!(a.combine(&z), a);
    }

    #[test]
    fn combine_disjoint_denominators() {
        let a = CharFraction::geometric(Weight::ZERO, Weight::new(1, 0, 0));
        let b = CharFraction::geometric(Weight::ZERO, Weight::new(0, 1, 0));
        let s = a.combine(&b);
        assert_eq!(s.den(), &[Weight::new(0, 1, 0), Weight::new(1, 0, 0)]);
    }

    #[test]
    fn geometric_pair_sums_to_character() {
        // t^w/(1-t^u) + t^w/(1-t^{-u}) = t^w
        let w = Weight::new(0, 2, -1);
        let u = Weight::new(1, -1, 0);
        let s = CharFraction::geometric(w, u).combine(&CharFraction::geometric(w, -u));
        assert_eq!(s.normalize().unwrap(), LaurentPoly::character(w));
    }

    #[test]
    fn normalize_detects_infinite_expansion() {
        let f = CharFraction::geometric(Weight::ZERO, Weight::new(1, 0, 0));
        assert_eq!(f.normalize(), Err(ExactError::NotPolynomial));
    }

    #[test]
    fn normalize_cancels_matching_factor() {
        let v = Weight::new(2, -1, 3);
        let num = &LaurentPoly::one() - &tch(v.0);
        let f = CharFraction::new(num, vec![v]);
        assert_eq!(f.normalize().unwrap(), LaurentPoly::one());
    }

    #[test]
    fn oracle_geometric_series() {
        let u = Weight::new(1, 0, 0);
        let f = CharFraction::geometric(Weight::ZERO, u);
        let phi = [1, 0, 0];
        let s = series_oracle(&f, &phi, (0, 2)).unwrap();
        let expected = &(&LaurentPoly::one() + &tch([1, 0, 0])) + &tch([2, 0, 0]);
        assert_eq!(s, expected);
    }

    #[test]
    fn oracle_flip_rule() {
        // 1/(1-t^{-u}) with phi(u) > 0 expands as -t^u - t^{2u} - ...
        let u = Weight::new(1, 0, 0);
        let f = CharFraction::geometric(Weight::ZERO, -u);
        let phi = [1, 0, 0];
        let s = series_oracle(&f, &phi, (0, 2)).unwrap();
        let expected = &LaurentPoly::zero() - &(&tch([1, 0, 0]) + &tch([2, 0, 0]));
        assert_eq!(s, expected);
    }

    #[test]
    fn oracle_degenerate_functional() {
        let f = CharFraction::geometric(Weight::ZERO, Weight::new(0, 0, 1));
        assert!(matches!(
            series_oracle(&f, &[1, 0, 0], (0, 4)),
            Err(ExactError::DegenerateFunctional(_))
        ));
    }

    #[test]
    fn oracle_matches_normalize_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let phi = [1, 17, 289];
        for _ in 0..100 {
            let mut q = LaurentPoly::zero();
            for _ in 0..4 {
                let w = Weight::new(
                    rng.gen_range(-2..=2),
                    rng.gen_range(-2..=2),
                    rng.gen_range(-2..=2),
                );
                q.add_term(w, &rat_int(rng.gen_range(-4..=4)));
            }
            let mut den = Vec::new();
            let mut num = q.clone();
            for _ in 0..rng.gen_range(1..=3) {
                let v = loop {
                    let v = Weight::new(
                        rng.gen_range(-2..=2),
                        rng.gen_range(-2..=2),
                        rng.gen_range(-2..=2),
                    );
                    if !v.is_zero() && v.dot(&phi) != 0 {
                        break v;
                    }
                };
                den.push(v);
                num = &num * &(&LaurentPoly::one() - &LaurentPoly::character(v));
            }
            let f = CharFraction::new(num, den);
            let normalized = f.normalize().unwrap();
            assert_eq!(normalized, q);
            let lo = q.support().map(|w| w.dot(&phi)).min().unwrap_or(1);
            let hi = q.support().map(|w| w.dot(&phi)).max().unwrap_or(-1);
            let s = series_oracle(&f, &phi, (lo, hi)).unwrap();
            assert_eq!(s, q);
        }
    }
}
