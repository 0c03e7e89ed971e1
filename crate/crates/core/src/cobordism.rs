//! Cobordism classes over a point in the Chern-number basis: inverse Todd
//! operator expansions, the change of basis between Conner-Floyd classes
//! and monomial Chern numbers, and Bott-localization smoke tests on the
//! catalog geometries.
//!
//! The expansion is organized through power sums: for a K-theory class
//! with Chern roots `x_r` (with multiplicities),
//!
//! ```text
//! Td_t^{-1}(E) = prod_r sum_i x_r^i t_i = exp( sum_m p_m(E) Phi_m(t) )
//! ```
//!
//! where `Phi_m` is the degree-m part of `log(1 + x t_1 + x^2 t_2 + ...)`
//! in a single root `x`. Power sums are additive in K-theory, so virtual
//! summands cost nothing extra.

use crate::exact::{rat_int, rat_to_string, Rat};
use crate::localize::{
    chern_indices, chern_numbers_for_index_set, ChernIndex, EngineOpts, LocalizeError,
};
use crate::toric::ToricThreefold;
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CobordismError {
    #[error("basis change matrix is singular (expansion bug)")]
    SingularMatrix,
    #[error("Chern vector is missing index {0}")]
    IncompleteVector(String),
    #[error("localized Chern number {0} is not an integer")]
    NonIntegral(String),
    #[error(transparent)]
    Localize(#[from] LocalizeError),
}

// ---------------------------------------------------------------------------
// Coefficient ring: polynomials in the formal Chern classes c_1, c_2, ...

/// Exponent vector over the generators `c_1, c_2, ...` (trailing zeros
/// trimmed); the graded degree of `c^E` is `sum k E_k`.
pub type CExp = Vec<u32>;

fn exp_degree(e: &[u32]) -> u32 {
    e.iter()
        .enumerate()
        .map(|(k, v)| (k as u32 + 1) * v)
        .sum()
}

fn exp_mul(a: &[u32], b: &[u32]) -> CExp {
    let n = a.len().max(b.len());
    let mut out = vec![0u32; n];
    for (i, o) in out.iter_mut().enumerate() {
        *o = a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0);
    }
    while out.last() == Some(&0) {
        out.pop();
    }
    out
}

/// Polynomial in the Chern generators, truncated above graded degree
/// `trunc`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernPoly {
    pub trunc: u32,
    terms: BTreeMap<CExp, Rat>,
}

impl ChernPoly {
    pub fn zero(trunc: u32) -> Self {
        ChernPoly {
            trunc,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(trunc: u32, c: Rat) -> Self {
        let mut p = Self::zero(trunc);
        p.add_term(vec![], &c);
        p
    }

    /// The generator `c_k` (k >= 1).
    pub fn generator(trunc: u32, k: u32) -> Self {
        let mut e = vec![0u32; k as usize];
        e[k as usize - 1] = 1;
        let mut p = Self::zero(trunc);
        p.add_term(e, &Rat::one());
        p
    }

    pub fn add_term(&mut self, e: CExp, c: &Rat) {
        if c.is_zero() || exp_degree(&e) > self.trunc {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CExp, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Rat {
        self.terms.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn add(&self, other: &ChernPoly) -> ChernPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn scaled(&self, c: &Rat) -> ChernPoly {
        let mut out = ChernPoly::zero(self.trunc);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), &(v * c));
        }
        out
    }

    pub fn mul(&self, other: &ChernPoly) -> ChernPoly {
        let mut out = ChernPoly::zero(self.trunc);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                out.add_term(exp_mul(e1, e2), &(c1 * c2));
            }
        }
        out
    }

    /// Substitute rational values for the generators.
    pub fn eval(&self, values: &dyn Fn(u32) -> Rat) -> Rat {
        let mut total = Rat::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for (k, &v) in e.iter().enumerate() {
                for _ in 0..v {
                    term *= values(k as u32 + 1);
                }
            }
            total += term;
        }
        total
    }
}

// ---------------------------------------------------------------------------
// t-polynomials

/// Exponent vector over `t_1, t_2, ...`; `t^I` has degree `sum k I_k`.
pub type TExp = Vec<u32>;

/// Polynomial in the graded variables `t_i` over `Rat`: a cobordism class
/// over a point in the Chern-number basis.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TPolynomial {
    pub coeffs: BTreeMap<TExp, Rat>,
}

impl TPolynomial {
    pub fn coeff(&self, e: &[u32]) -> Rat {
        self.coeffs.get(e).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn to_display(&self) -> String {
        if self.coeffs.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (e, c) in &self.coeffs {
            let mut term = rat_to_string(c);
            for (k, &v) in e.iter().enumerate() {
                if v == 1 {
                    term.push_str(&format!(" t{}", k + 1));
                } else if v > 1 {
                    term.push_str(&format!(" t{}^{}", k + 1, v));
                }
            }
            parts.push(term);
        }
        parts.join(" + ")
    }
}

/// Symbolic inverse Todd expansion: map `t^I -> ChernPoly`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TdExpansion {
    pub trunc: u32,
    pub coeffs: BTreeMap<TExp, ChernPoly>,
}

impl TdExpansion {
    fn one(trunc: u32) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(vec![], ChernPoly::constant(trunc, Rat::one()));
        TdExpansion { trunc, coeffs }
    }

    fn zero(trunc: u32) -> Self {
        TdExpansion {
            trunc,
            coeffs: BTreeMap::new(),
        }
    }

    fn add_term(&mut self, e: TExp, p: &ChernPoly) {
        if p.is_zero() || exp_degree(&e) > self.trunc {
            return;
        }
        let entry = self
            .coeffs
            .entry(e)
            .or_insert_with(|| ChernPoly::zero(self.trunc));
        *entry = entry.add(p);
        self.coeffs.retain(|_, v| !v.is_zero());
    }

    fn add(&self, other: &TdExpansion) -> TdExpansion {
        let mut out = self.clone();
        for (e, p) in &other.coeffs {
            out.add_term(e.clone(), p);
        }
        out
    }

    fn mul(&self, other: &TdExpansion) -> TdExpansion {
        let mut out = TdExpansion::zero(self.trunc);
        for (e1, p1) in &self.coeffs {
            for (e2, p2) in &other.coeffs {
                out.add_term(exp_mul(e1, e2), &p1.mul(p2));
            }
        }
        out
    }

    fn scaled(&self, c: &Rat) -> TdExpansion {
        let mut out = TdExpansion::zero(self.trunc);
        for (e, p) in &self.coeffs {
            out.add_term(e.clone(), &p.scaled(c));
        }
        out
    }

    pub fn coeff(&self, e: &[u32]) -> ChernPoly {
        self.coeffs
            .get(e)
            .cloned()
            .unwrap_or_else(|| ChernPoly::zero(self.trunc))
    }

    /// Evaluate every Chern generator, producing a numeric t-polynomial.
    pub fn eval(&self, values: &dyn Fn(u32) -> Rat) -> TPolynomial {
        let mut coeffs = BTreeMap::new();
        for (e, p) in &self.coeffs {
            let v = p.eval(values);
            if !v.is_zero() {
                coeffs.insert(e.clone(), v);
            }
        }
        TPolynomial { coeffs }
    }
}

// ---------------------------------------------------------------------------
// The inverse Todd operator

/// One K-theory summand: a bundle described by its total Chern class
/// (`classes[k-1]` holds `c_k`), taken with an integer multiplicity.
#[derive(Clone, Debug)]
pub struct BundleSummand {
    pub classes: Vec<ChernPoly>,
    pub mult: i64,
}

impl BundleSummand {
    /// The universal bundle with formal generators `c_1 .. c_trunc`.
    pub fn universal(trunc: u32, mult: i64) -> Self {
        BundleSummand {
            classes: (1..=trunc).map(|k| ChernPoly::generator(trunc, k)).collect(),
            mult,
        }
    }

    /// A line bundle with the given first Chern class.
    pub fn line(c1: ChernPoly, mult: i64) -> Self {
        BundleSummand {
            classes: vec![c1],
            mult,
        }
    }

    /// A split bundle with concrete rational Chern roots.
    pub fn from_roots(trunc: u32, roots: &[Rat], mult: i64) -> Self {
        let mut classes = vec![ChernPoly::constant(trunc, Rat::zero()); roots.len()];
        // elementary symmetric polynomials by incremental products
        let mut elem = vec![Rat::zero(); roots.len() + 1];
        elem[0] = Rat::one();
        for (i, r) in roots.iter().enumerate() {
            for k in (1..=i + 1).rev() {
                let bump = &elem[k - 1] * r;
                elem[k] += bump;
            }
        }
        for k in 1..=roots.len() {
            classes[k - 1] = ChernPoly::constant(trunc, elem[k].clone());
        }
        BundleSummand { classes, mult }
    }

    /// Power sums of the Chern roots via the Newton identities.
    fn power_sums(&self, trunc: u32) -> Vec<ChernPoly> {
        let e = |k: usize| -> ChernPoly {
            self.classes
                .get(k - 1)
                .cloned()
                .unwrap_or_else(|| ChernPoly::zero(trunc))
        };
        let mut p: Vec<ChernPoly> = Vec::new();
        for m in 1..=trunc as usize {
            // p_m = sum_{i=1}^{m-1} (-1)^{i-1} e_i p_{m-i} + (-1)^{m-1} m e_m
            let mut total = ChernPoly::zero(trunc);
            for i in 1..m {
                let sign = if i % 2 == 1 { Rat::one() } else { -Rat::one() };
                total = total.add(&e(i).mul(&p[m - i - 1]).scaled(&sign));
            }
            let sign = if m % 2 == 1 { Rat::one() } else { -Rat::one() };
            total = total.add(&e(m).scaled(&(sign * rat_int(m as i64))));
            p.push(total);
        }
        p
    }
}

/// `Phi_m(t)` for `m = 1..=trunc`: the `x^m` coefficients of
/// `log(1 + x t_1 + x^2 t_2 + ...)`.
fn phi_polys(trunc: u32) -> Vec<BTreeMap<TExp, Rat>> {
    let d = trunc as usize;
    // elements of Q[t][x]/(x^{d+1}) as vectors over the x-degree
    type Series = Vec<BTreeMap<TExp, Rat>>;
    let zero_series = || vec![BTreeMap::new(); d + 1];
    let mul = |a: &Series, b: &Series| -> Series {
        let mut out = zero_series();
        for (i, ai) in a.iter().enumerate() {
            for (j, bj) in b.iter().enumerate() {
                if i + j > d {
                    continue;
                }
                for (e1, c1) in ai {
                    for (e2, c2) in bj {
                        let e = exp_mul(e1, e2);
                        let entry = out[i + j].entry(e).or_insert_with(Rat::zero);
                        *entry += c1 * c2;
                    }
                }
            }
        }
        for level in &mut out {
            level.retain(|_, v| !v.is_zero());
        }
        out
    };
    let mut u = zero_series();
    for i in 1..=d {
        let mut e = vec![0u32; i];
        e[i - 1] = 1;
        u[i].insert(e, Rat::one());
    }
    let mut log = zero_series();
    let mut u_pow = u.clone();
    for k in 1..=d {
        let sign = if k % 2 == 1 { Rat::one() } else { -Rat::one() };
        let coeff = sign / rat_int(k as i64);
        for (lvl, terms) in u_pow.iter().enumerate() {
            for (e, c) in terms {
                let entry = log[lvl].entry(e.clone()).or_insert_with(Rat::zero);
                *entry += c * &coeff;
            }
        }
        if k < d {
            u_pow = mul(&u_pow, &u);
        }
    }
    for level in &mut log {
        level.retain(|_, v| !v.is_zero());
    }
    log.drain(1..).collect()
}

/// The inverse Todd operator expansion of a K-theory class, truncated at
/// graded degree `trunc`. The coefficient of `t^I` is the Conner-Floyd
/// class `c_I` of the input, a polynomial in its Chern classes.
pub fn todd_inverse_expansion(summands: &[BundleSummand], trunc: u32) -> TdExpansion {
    let phis = phi_polys(trunc);
    // argument of the exponential: sum_m p_m Phi_m
    let mut arg = TdExpansion::zero(trunc);
    for s in summands {
        let p = s.power_sums(trunc);
        for m in 1..=trunc as usize {
            let pm = p[m - 1].scaled(&rat_int(s.mult));
            for (e, c) in &phis[m - 1] {
                arg.add_term(e.clone(), &pm.scaled(c));
            }
        }
    }
    let mut out = TdExpansion::one(trunc);
    let mut pow = TdExpansion::one(trunc);
    let mut factorial = Rat::one();
    for k in 1..=trunc as usize {
        pow = pow.mul(&arg);
        factorial *= rat_int(k as i64);
        out = out.add(&pow.scaled(&(Rat::one() / &factorial)));
    }
    out
}

// ---------------------------------------------------------------------------
// Basis conversion

/// Exact dense matrix over `Rat`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix(pub Vec<Vec<Rat>>);

impl QMatrix {
    pub fn identity(n: usize) -> QMatrix {
        QMatrix(
            (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { Rat::one() } else { Rat::zero() })
                        .collect()
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        let n = self.0.len();
        let m = other.0[0].len();
        let k = other.0.len();
        let mut out = vec![vec![Rat::zero(); m]; n];
        for i in 0..n {
            for l in 0..k {
                if self.0[i][l].is_zero() {
                    continue;
                }
                for j in 0..m {
                    let prod = &self.0[i][l] * &other.0[l][j];
                    out[i][j] += prod;
                }
            }
        }
        QMatrix(out)
    }

    pub fn apply(&self, v: &[Rat]) -> Vec<Rat> {
        self.0
            .iter()
            .map(|row| {
                let mut acc = Rat::zero();
                for (a, b) in row.iter().zip(v) {
                    acc += a * b;
                }
                acc
            })
            .collect()
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        let n = self.0.len();
        let mut a = self.0.clone();
        let mut inv = QMatrix::identity(n).0;
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
            a.swap(col, pivot);
            inv.swap(col, pivot);
            let scale = Rat::one() / &a[col][col];
            for j in 0..n {
                a[col][j] = &a[col][j] * &scale;
                inv[col][j] = &inv[col][j] * &scale;
            }
            for r in 0..n {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col].clone();
                    for j in 0..n {
                        let s = &a[col][j] * &f;
                        a[r][j] -= s;
                        let s = &inv[col][j] * &f;
                        inv[r][j] -= s;
                    }
                }
            }
        }
        Some(QMatrix(inv))
    }
}

/// Map `ChernIndex` exponents to the monomial `prod c_k^{i_k}` exponent
/// vector (they coincide).
fn index_to_cexp(i: &ChernIndex) -> CExp {
    i.0.clone()
}

/// Change-of-basis matrix from monomial Chern numbers of `V` to the
/// Conner-Floyd coefficients of `-V`: row `I`, column `J` holds the
/// coefficient of the monomial `c^J` in the `t^I` coefficient of
/// `Td_t^{-1}(-V)`.
pub fn cf_basis_matrix(d: u32) -> Result<QMatrix, CobordismError> {
    assert!(d >= 1);
    let expansion = todd_inverse_expansion(&[BundleSummand::universal(d, -1)], d);
    let indices = chern_indices(d as i64);
    let mut rows = Vec::new();
    for i in &indices {
        let poly = expansion.coeff(&index_to_cexp(i));
        let row: Vec<Rat> = indices
            .iter()
            .map(|j| poly.coeff(&index_to_cexp(j)))
            .collect();
        rows.push(row);
    }
    let m = QMatrix(rows);
    if m.inverse().is_none() {
        return Err(CobordismError::SingularMatrix);
    }
    Ok(m)
}

/// Map of monomial Chern numbers at a fixed degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernVector {
    pub d: i64,
    pub values: BTreeMap<ChernIndex, Rat>,
}

impl ChernVector {
    pub fn new(d: i64) -> Self {
        ChernVector {
            d,
            values: BTreeMap::new(),
        }
    }

    fn ordered(&self) -> Result<Vec<Rat>, CobordismError> {
        let mut out = Vec::new();
        for i in chern_indices(self.d) {
            match self.values.get(&i) {
                Some(v) => out.push(v.clone()),
                None => return Err(CobordismError::IncompleteVector(i.to_string())),
            }
        }
        Ok(out)
    }
}

/// The cobordism class over a point with the given monomial Chern numbers
/// of the virtual tangent bundle, written in the t-basis.
pub fn cobordism_class_point(v: &ChernVector) -> Result<TPolynomial, CobordismError> {
    let indices = chern_indices(v.d);
    let vals = v.ordered()?;
    if v.d == 0 {
        let mut coeffs = BTreeMap::new();
        if !vals[0].is_zero() {
            coeffs.insert(vec![], vals[0].clone());
        }
        return Ok(TPolynomial { coeffs });
    }
    let m = cf_basis_matrix(v.d as u32)?;
    let out = m.apply(&vals);
    let mut coeffs = BTreeMap::new();
    for (i, c) in indices.iter().zip(out) {
        if !c.is_zero() {
            coeffs.insert(index_to_cexp(i), c);
        }
    }
    Ok(TPolynomial { coeffs })
}

/// Inverse of [`cobordism_class_point`]: recover the monomial Chern
/// numbers from a t-polynomial of pure degree `d`.
pub fn chern_vector_from_class(tp: &TPolynomial, d: i64) -> Result<ChernVector, CobordismError> {
    let indices = chern_indices(d);
    if d == 0 {
        let mut v = ChernVector::new(0);
        v.values.insert(ChernIndex(vec![]), tp.coeff(&[]));
        return Ok(v);
    }
    let m = cf_basis_matrix(d as u32)?;
    let inv = m.inverse().ok_or(CobordismError::SingularMatrix)?;
    let coeffs: Vec<Rat> = indices.iter().map(|i| tp.coeff(&index_to_cexp(i))).collect();
    let vals = inv.apply(&coeffs);
    let mut v = ChernVector::new(d);
    for (i, c) in indices.iter().zip(vals) {
        v.values.insert(i.clone(), c);
    }
    Ok(v)
}

// ---------------------------------------------------------------------------
// Smooth-variety classes via Bott localization

/// Monomial Chern numbers of the (smooth) 3-fold itself by localization
/// over its fixed points, checked across specializations and for
/// integrality.
pub fn smooth_chern_numbers(
    x: &ToricThreefold,
    opts: &EngineOpts,
) -> Result<ChernVector, CobordismError> {
    let indices = chern_indices(3);
    let chars: Vec<crate::exact::LaurentPoly> = x
        .points
        .iter()
        .map(|p| {
            let mut c = crate::exact::LaurentPoly::zero();
            for w in &p.tangent_weights {
                c.add_term(*w, &Rat::one());
            }
            c
        })
        .collect();
    let context = format!("{} smooth tangent class", x.id);
    let values = chern_numbers_for_index_set(&chars, 3, &indices, opts, &context)?;
    let mut v = ChernVector::new(3);
    for (i, c) in indices.iter().zip(values) {
        if !c.is_integer() {
            return Err(CobordismError::NonIntegral(rat_to_string(&c)));
        }
        v.values.insert(i.clone(), c);
    }
    Ok(v)
}

/// The class `[X -> pt]` in the t-basis, through the Conner-Floyd
/// conversion at degree three.
pub fn smooth_variety_class(
    x: &ToricThreefold,
    opts: &EngineOpts,
) -> Result<TPolynomial, CobordismError> {
    let v = smooth_chern_numbers(x, opts)?;
    cobordism_class_point(&v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::catalog;

    fn c(k: u32, trunc: u32) -> ChernPoly {
        ChernPoly::generator(trunc, k)
    }

    #[test]
    fn line_bundle_expansion_is_geometric_in_c1() {
        let trunc = 3;
        let line = BundleSummand::line(c(1, trunc), 1);
        let e = todd_inverse_expansion(&[line], trunc);
        let c1 = c(1, trunc);
        assert_eq!(e.coeff(&[]), ChernPoly::constant(trunc, Rat::one()));
        assert_eq!(e.coeff(&[1]), c1);
        assert_eq!(e.coeff(&[0, 1]), c1.mul(&c1));
        assert_eq!(e.coeff(&[0, 0, 1]), c1.mul(&c1).mul(&c1));
        // cross terms like t1^2 vanish for a single line bundle minus ...
        assert_eq!(e.coeff(&[2]), ChernPoly::zero(trunc));
    }

    #[test]
    fn universal_low_degree_coefficients() {
        let trunc = 2;
        let e = todd_inverse_expansion(&[BundleSummand::universal(trunc, 1)], trunc);
        // t1 -> c1, t2 -> p2 = c1^2 - 2 c2, t1^2 -> c2
        assert_eq!(e.coeff(&[1]), c(1, trunc));
        let p2 = c(1, trunc).mul(&c(1, trunc)).add(&c(2, trunc).scaled(&rat_int(-2)));
        assert_eq!(e.coeff(&[0, 1]), p2);
        assert_eq!(e.coeff(&[2]), c(2, trunc));
    }

    #[test]
    fn negative_line_bundle_degree_one() {
        let trunc = 1;
        let line = BundleSummand::line(c(1, trunc), -1);
        let e = todd_inverse_expansion(&[line], trunc);
        assert_eq!(e.coeff(&[1]), c(1, trunc).scaled(&rat_int(-1)));
    }

    #[test]
    fn expansion_multiplicative_on_random_roots() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let trunc = 4;
        for _ in 0..10 {
            let roots_v: Vec<Rat> = (0..2).map(|_| rat_int(rng.gen_range(-5..=5))).collect();
            let roots_w: Vec<Rat> = (0..3).map(|_| rat_int(rng.gen_range(-5..=5))).collect();
            let v = BundleSummand::from_roots(trunc, &roots_v, 1);
            let w = BundleSummand::from_roots(trunc, &roots_w, 1);
            let both: Vec<Rat> = roots_v.iter().chain(&roots_w).cloned().collect();
            let vw = BundleSummand::from_roots(trunc, &both, 1);
            let lhs = todd_inverse_expansion(&[vw], trunc);
            let rhs =
                todd_inverse_expansion(std::slice::from_ref(&v), trunc).mul(&todd_inverse_expansion(&[w], trunc));
            assert_eq!(lhs, rhs);
            // V + (-V) is the zero class: expansion is 1
            let minus_v = BundleSummand {
                mult: -1,
                ..v.clone()
            };
            let unit = todd_inverse_expansion(&[v, minus_v], trunc);
            assert_eq!(unit, TdExpansion::one(trunc));
        }
    }

    #[test]
    fn basis_matrix_low_degrees() {
        let m1 = cf_basis_matrix(1).unwrap();
        assert_eq!(m1.0, vec![vec![rat_int(-1)]]);
        let m2 = cf_basis_matrix(2).unwrap();
        // rows (2), (0,1) over columns c1^2, c2
        assert_eq!(
            m2.0,
            vec![
                vec![rat_int(1), rat_int(-1)],
                vec![rat_int(-1), rat_int(2)],
            ]
        );
    }

    #[test]
    fn basis_matrix_invertible_up_to_six() {
        for d in 1..=6u32 {
            let m = cf_basis_matrix(d).unwrap();
            let inv = m.inverse().expect("invertible");
            let n = m.0.len();
            assert_eq!(m.mul(&inv), QMatrix::identity(n), "d = {d}");
        }
    }

    #[test]
    fn class_point_roundtrip() {
        let mut v = ChernVector::new(2);
        v.values.insert(ChernIndex(vec![2]), rat_int(9));
        v.values.insert(ChernIndex(vec![0, 1]), rat_int(3));
        let tp = cobordism_class_point(&v).unwrap();
        let back = chern_vector_from_class(&tp, 2).unwrap();
        assert_eq!(back, v);

        let mut v0 = ChernVector::new(0);
        v0.values.insert(ChernIndex(vec![]), rat_int(5));
        let tp0 = cobordism_class_point(&v0).unwrap();
        assert_eq!(tp0.coeff(&[]), rat_int(5));
    }

    #[test]
    fn incomplete_vector_rejected() {
        let mut v = ChernVector::new(2);
        v.values.insert(ChernIndex(vec![2]), rat_int(9));
        assert!(matches!(
            cobordism_class_point(&v),
            Err(CobordismError::IncompleteVector(_))
        ));
    }

    #[test]
    fn smooth_classes_of_catalog() {
        let opts = EngineOpts::default();
        let p3 = catalog("p3").unwrap();
        let v = smooth_chern_numbers(&p3, &opts).unwrap();
        assert_eq!(v.values[&ChernIndex(vec![3])], rat_int(64));
        assert_eq!(v.values[&ChernIndex(vec![1, 1])], rat_int(24));
        assert_eq!(v.values[&ChernIndex(vec![0, 0, 1])], rat_int(4));

        let x = catalog("p1xp2").unwrap();
        let v = smooth_chern_numbers(&x, &opts).unwrap();
        assert_eq!(v.values[&ChernIndex(vec![3])], rat_int(54));
        assert_eq!(v.values[&ChernIndex(vec![1, 1])], rat_int(24));
        assert_eq!(v.values[&ChernIndex(vec![0, 0, 1])], rat_int(6));

        let y = catalog("p1p1p1").unwrap();
        let v = smooth_chern_numbers(&y, &opts).unwrap();
        assert_eq!(v.values[&ChernIndex(vec![0, 0, 1])], rat_int(8));
        // the degree-zero-cycle count equals the fixed-point count
        assert_eq!(v.values[&ChernIndex(vec![0, 0, 1])], rat_int(y.points.len() as i64));
    }
}
