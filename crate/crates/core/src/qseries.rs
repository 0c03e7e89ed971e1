//! Partition-function assembly, rational-function reconstruction from
//! series coefficients, and the symmetry/pole checks on the fitted
//! functions.

use crate::exact::{rat_int, rat_to_string, Rat};
use crate::localize::{
    chern_numbers_for_index_set, collect_characters, ChernIndex, EngineOpts, LocalizeError,
};
use crate::toric::{CurveClass, ToricThreefold};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FitError {
    #[error("no rational function within the degree bounds reproduces the series and holdout")]
    NoFit,
    #[error("series too short: need at least {need} coefficients, have {have}")]
    SeriesTooShort { need: usize, have: usize },
    #[error(transparent)]
    Localize(#[from] LocalizeError),
}

// ---------------------------------------------------------------------------
// Univariate polynomials over Rat

/// Dense polynomial in `q` with exact rational coefficients; no trailing
/// zero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QPoly(Vec<Rat>);

impl QPoly {
    pub fn zero() -> Self {
        QPoly(Vec::new())
    }

    pub fn from_coeffs(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        QPoly(coeffs)
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| rat_int(c)).collect())
    }

    pub fn one() -> Self {
        QPoly(vec![Rat::one()])
    }

    pub fn monomial(deg: usize, c: Rat) -> Self {
        let mut v = vec![Rat::zero(); deg + 1];
        v[deg] = c;
        Self::from_coeffs(v)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports -1.
    pub fn degree(&self) -> i64 {
        self.0.len() as i64 - 1
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.0.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.0
    }

    pub fn add(&self, other: &QPoly) -> QPoly {
        let n = self.0.len().max(other.0.len());
        let mut out = vec![Rat::zero(); n];
        for (i, o) in out.iter_mut().enumerate() {
            *o = self.coeff(i) + other.coeff(i);
        }
        QPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &QPoly) -> QPoly {
        self.add(&other.scaled(&-Rat::one()))
    }

    pub fn scaled(&self, c: &Rat) -> QPoly {
        QPoly::from_coeffs(self.0.iter().map(|a| a * c).collect())
    }

    pub fn mul(&self, other: &QPoly) -> QPoly {
        if self.is_zero() || other.is_zero() {
            return QPoly::zero();
        }
        let mut out = vec![Rat::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                let prod = a * b;
                out[i + j] += prod;
            }
        }
        QPoly::from_coeffs(out)
    }

    pub fn pow(&self, k: u32) -> QPoly {
        let mut out = QPoly::one();
        for _ in 0..k {
            out = out.mul(self);
        }
        out
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut total = Rat::zero();
        for c in self.0.iter().rev() {
            total = total * x + c;
        }
        total
    }

    /// `q^{deg} P(1/q)`.
    pub fn reversed(&self) -> QPoly {
        QPoly::from_coeffs(self.0.iter().rev().cloned().collect())
    }

    pub fn derivative(&self) -> QPoly {
        if self.0.len() <= 1 {
            return QPoly::zero();
        }
        QPoly::from_coeffs(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * rat_int(i as i64))
                .collect(),
        )
    }

    /// Euclidean division, returning `(quotient, remainder)`.
    pub fn div_rem(&self, den: &QPoly) -> (QPoly, QPoly) {
        assert!(!den.is_zero(), "division by the zero polynomial");
        let mut rem = self.clone();
        let mut quot = QPoly::zero();
        let dlead = den.0.last().unwrap().clone();
        while !rem.is_zero() && rem.degree() >= den.degree() {
            let shift = (rem.degree() - den.degree()) as usize;
            let c = rem.0.last().unwrap() / &dlead;
            let term = QPoly::monomial(shift, c);
            quot = quot.add(&term);
            rem = rem.sub(&den.mul(&term));
        }
        (quot, rem)
    }

    pub fn gcd(&self, other: &QPoly) -> QPoly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> QPoly {
        match self.0.last() {
            None => QPoly::zero(),
            Some(lead) => self.scaled(&(Rat::one() / lead)),
        }
    }

    /// Integer-coefficient form with content one and positive leading
    /// coefficient.
    pub fn primitive_integer(&self) -> QPoly {
        if self.is_zero() {
            return QPoly::zero();
        }
        let mut denom_lcm = BigInt::one();
        for c in &self.0 {
            denom_lcm = num_integer::lcm(denom_lcm, c.denom().clone());
        }
        let ints: Vec<BigInt> = self
            .0
            .iter()
            .map(|c| c.numer() * (&denom_lcm / c.denom()))
            .collect();
        let mut g = BigInt::zero();
        for c in &ints {
            g = num_integer::gcd(g, c.clone());
        }
        let sign = if ints.last().unwrap().is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let g = g * sign;
        QPoly::from_coeffs(
            ints.into_iter()
                .map(|c| Rat::from_integer(c / &g))
                .collect(),
        )
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.0.iter().map(rat_to_string).collect()
    }
}

// ---------------------------------------------------------------------------
// Rational functions

/// Rational function in canonical form: numerator and denominator
/// coprime, denominator normalized to constant term one when regular at
/// the origin (monic otherwise).
#[derive(Clone, Debug)]
pub struct RationalFn {
    pub num: QPoly,
    pub den: QPoly,
}

impl RationalFn {
    pub fn new(num: QPoly, den: QPoly) -> RationalFn {
        assert!(!den.is_zero(), "zero denominator");
        let g = num.gcd(&den);
        let (num, den) = if g.degree() > 0 {
            (num.div_rem(&g).0, den.div_rem(&g).0)
        } else {
            (num, den)
        };
        let c0 = den.coeff(0);
        let scale = if !c0.is_zero() {
            c0
        } else {
            den.0.last().unwrap().clone()
        };
        let inv = Rat::one() / scale;
        RationalFn {
            num: num.scaled(&inv),
            den: den.scaled(&inv),
        }
    }

    pub fn from_int_coeffs(num: &[i64], den: &[i64]) -> RationalFn {
        RationalFn::new(QPoly::from_ints(num), QPoly::from_ints(den))
    }

    pub fn zero() -> RationalFn {
        RationalFn {
            num: QPoly::zero(),
            den: QPoly::one(),
        }
    }

    /// Taylor coefficients of `q^0 .. q^{n_max}`; requires a denominator
    /// that does not vanish at the origin.
    pub fn expand(&self, n_max: i64) -> Vec<Rat> {
        if n_max < 0 {
            return Vec::new();
        }
        let d0 = self.den.coeff(0);
        assert!(!d0.is_zero(), "expansion at a pole");
        let mut out: Vec<Rat> = Vec::with_capacity(n_max as usize + 1);
        for n in 0..=n_max as usize {
            let mut c = self.num.coeff(n);
            for j in 1..=n.min(self.den.0.len().saturating_sub(1)) {
                c -= self.den.coeff(j) * &out[n - j];
            }
            out.push(c / &d0);
        }
        out
    }
}

impl PartialEq for RationalFn {
    fn eq(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl Eq for RationalFn {}

// ---------------------------------------------------------------------------
// Coefficient series

/// Contiguous run of exact Chern numbers `c_n^I` with its provenance.
#[derive(Clone, Debug)]
pub struct CoeffSeries {
    pub geometry: String,
    pub beta: Vec<i64>,
    pub index: ChernIndex,
    pub d: i64,
    pub n_min: i64,
    pub coeffs: Vec<Rat>,
}

impl CoeffSeries {
    /// Coefficient at `n`, zero-extended below `n_min`.
    pub fn coeff(&self, n: i64) -> Rat {
        if n < self.n_min {
            return Rat::zero();
        }
        let k = (n - self.n_min) as usize;
        self.coeffs.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn n_max(&self) -> i64 {
        self.n_min + self.coeffs.len() as i64 - 1
    }
}

/// One series per index, sharing the fixed-point enumeration per `n`.
pub fn assemble_all(
    x: &ToricThreefold,
    beta: &CurveClass,
    indices: &[ChernIndex],
    n_max: i64,
    opts: &EngineOpts,
) -> Result<Vec<CoeffSeries>, LocalizeError> {
    let d = x
        .virtual_dimension(beta)
        .map_err(crate::deg1::Deg1Error::from)?;
    let mut columns: Vec<Vec<Rat>> = vec![Vec::new(); indices.len()];
    for n in 1..=n_max {
        let chars = collect_characters(x, beta, n, opts)?;
        let context = format!("{} beta={:?} n={}", x.id, beta.0, n);
        let values = chern_numbers_for_index_set(&chars, d, indices, opts, &context)?;
        for (col, v) in columns.iter_mut().zip(values) {
            col.push(v);
        }
    }
    Ok(indices
        .iter()
        .zip(columns)
        .map(|(index, coeffs)| CoeffSeries {
            geometry: x.id.clone(),
            beta: beta.0.clone(),
            index: index.clone(),
            d,
            n_min: 1,
            coeffs,
        })
        .collect())
}

/// The series `c_n^I` for `1 <= n <= n_max`.
pub fn assemble(
    x: &ToricThreefold,
    beta: &CurveClass,
    index: &ChernIndex,
    n_max: i64,
    opts: &EngineOpts,
) -> Result<CoeffSeries, LocalizeError> {
    Ok(assemble_all(x, beta, std::slice::from_ref(index), n_max, opts)?.remove(0))
}

// ---------------------------------------------------------------------------
// Rational reconstruction

/// Fitting strategy: a denominator ansatz `(1+q)^a (1-q)^g`, or a general
/// Pade search over denominator/numerator degrees.
#[derive(Clone, Debug)]
pub enum FitMode {
    Ansatz { max_plus: u32, max_minus: u32 },
    Pade { max_den: usize, max_num: usize },
}

/// Reconstruct the minimal-degree rational function whose expansion
/// matches every series coefficient; the last `holdout` coefficients are
/// excluded from the linear solve and verified exactly afterwards.
pub fn fit_rational(
    series: &CoeffSeries,
    mode: &FitMode,
    holdout: usize,
) -> Result<RationalFn, FitError> {
    assert!(
        holdout >= 2,
        "holdout verification needs at least 2 coefficients"
    );
    // coefficients of q^0 .. q^{n_top}, zero-extended below n_min
    let n_top = series.n_max();
    if n_top < series.n_min {
        return Err(FitError::SeriesTooShort { need: 1, have: 0 });
    }
    let full: Vec<Rat> = (0..=n_top).map(|n| series.coeff(n)).collect();
    let train_top = full.len() as i64 - 1 - holdout as i64;
    if train_top < 0 {
        return Err(FitError::SeriesTooShort {
            need: holdout + 1,
            have: full.len(),
        });
    }
    match mode {
        FitMode::Ansatz { max_plus, max_minus } => {
            fit_ansatz(&full, train_top as usize, *max_plus, *max_minus)
        }
        FitMode::Pade { max_den, max_num } => {
            fit_pade(&full, train_top as usize, *max_den, *max_num)
        }
    }
}

fn verify_candidate(full: &[Rat], num: &QPoly, den: &QPoly) -> bool {
    // den * f - num must vanish through every provided coefficient
    for n in 0..full.len() {
        let mut acc = Rat::zero();
        for j in 0..=n.min(den.0.len().saturating_sub(1)) {
            let dj = den.coeff(j);
            if !dj.is_zero() {
                acc += dj * &full[n - j];
            }
        }
        if acc != num.coeff(n) {
            return false;
        }
    }
    true
}

fn fit_ansatz(
    full: &[Rat],
    train_top: usize,
    max_plus: u32,
    max_minus: u32,
) -> Result<RationalFn, FitError> {
    let n_top = full.len() - 1;
    for total in 0..=(max_plus + max_minus) {
        let mut best: Option<(i64, RationalFn)> = None;
        for alpha in 0..=total.min(max_plus) {
            let gamma = total - alpha;
            if gamma > max_minus {
                continue;
            }
            let den = QPoly::from_ints(&[1, 1])
                .pow(alpha)
                .mul(&QPoly::from_ints(&[1, -1]).pow(gamma));
            // numerator = den * f, which must terminate early enough that
            // the holdout coefficients confirm the vanishing tail
            let mut prod = vec![Rat::zero(); n_top + 1];
            for n in 0..=n_top {
                let mut acc = Rat::zero();
                for j in 0..=n.min(den.0.len() - 1) {
                    let dj = den.coeff(j);
                    if !dj.is_zero() {
                        acc += dj * &full[n - j];
                    }
                }
                prod[n] = acc;
            }
            let num = QPoly::from_coeffs(prod);
            if num.degree() > train_top as i64 {
                continue;
            }
            if !verify_candidate(full, &num, &den) {
                continue;
            }
            let r = RationalFn::new(num, den);
            let key = r.num.degree();
            if best.as_ref().map(|(k, _)| key < *k).unwrap_or(true) {
                best = Some((key, r));
            }
        }
        if let Some((_, r)) = best {
            return Ok(r);
        }
    }
    Err(FitError::NoFit)
}

fn fit_pade(
    full: &[Rat],
    train_top: usize,
    max_den: usize,
    max_num: usize,
) -> Result<RationalFn, FitError> {
    for deg_den in 0..=max_den {
        for deg_num in 0..=max_num {
            // unknown denominator coefficients b_1..b_{deg_den}; equations
            // come from the train coefficients above the numerator degree,
            // and the numerator may never reach into the holdout window
            if deg_num > train_top || (train_top <= deg_num && deg_den > 0) {
                continue;
            }
            let eqs: Vec<usize> = ((deg_num + 1)..=train_top).collect();
            if eqs.len() < deg_den {
                continue;
            }
            let mut matrix: Vec<Vec<Rat>> = Vec::new();
            let mut rhs: Vec<Rat> = Vec::new();
            for &n in &eqs {
                let mut row = Vec::with_capacity(deg_den);
                for j in 1..=deg_den {
                    row.push(if n >= j {
                        full[n - j].clone()
                    } else {
                        Rat::zero()
                    });
                }
                matrix.push(row);
                rhs.push(-full[n].clone());
            }
            let Some(b) = solve_linear_system(matrix, rhs, deg_den) else {
                continue;
            };
            let mut den_coeffs = vec![Rat::one()];
            den_coeffs.extend(b);
            let den = QPoly::from_coeffs(den_coeffs);
            let mut num_coeffs = vec![Rat::zero(); deg_num + 1];
            for (n, c) in num_coeffs.iter_mut().enumerate() {
                let mut acc = Rat::zero();
                for j in 0..=n.min(den.0.len() - 1) {
                    let dj = den.coeff(j);
                    if !dj.is_zero() {
                        acc += dj * &full[n - j];
                    }
                }
                *c = acc;
            }
            let num = QPoly::from_coeffs(num_coeffs);
            if !verify_candidate(full, &num, &den) {
                continue;
            }
            return Ok(RationalFn::new(num, den));
        }
    }
    Err(FitError::NoFit)
}

/// Exact Gaussian elimination; returns a particular solution when the
/// system is consistent (free variables set to zero), `None` otherwise.
fn solve_linear_system(
    mut matrix: Vec<Vec<Rat>>,
    mut rhs: Vec<Rat>,
    unknowns: usize,
) -> Option<Vec<Rat>> {
    let rows = matrix.len();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..unknowns {
        let Some(p) = (row..rows).find(|&r| !matrix[r][col].is_zero()) else {
            continue;
        };
        matrix.swap(row, p);
        rhs.swap(row, p);
        let inv = Rat::one() / &matrix[row][col];
        for c in col..unknowns {
            matrix[row][c] = &matrix[row][c] * &inv;
        }
        rhs[row] = &rhs[row] * &inv;
        for r in 0..rows {
            if r != row && !matrix[r][col].is_zero() {
                let factor = matrix[r][col].clone();
                for c in col..unknowns {
                    let sub = &matrix[row][c] * &factor;
                    matrix[r][c] -= sub;
                }
                let sub = &rhs[row] * &factor;
                rhs[r] -= sub;
            }
        }
        pivots.push((row, col));
        row += 1;
        if row == rows {
            break;
        }
    }
    for r in row..rows {
        if !rhs[r].is_zero() {
            return None;
        }
    }
    let mut solution = vec![Rat::zero(); unknowns];
    for (r, c) in pivots {
        solution[c] = rhs[r].clone();
    }
    Some(solution)
}

// ---------------------------------------------------------------------------
// Symmetry and pole checks

/// Decide the exact identity `R(1/q) = q^{-d} R(q)`; the residual
/// polynomial is the certificate on failure.
pub fn check_functional_equation(r: &RationalFn, d: i64) -> (bool, QPoly) {
    if r.num.is_zero() {
        return (true, QPoly::zero());
    }
    let dn = r.num.degree();
    let dd = r.den.degree();
    // q^{dd - dn + d} rev(N) D == N rev(D)
    let lhs = r.num.reversed().mul(&r.den);
    let rhs = r.num.mul(&r.den.reversed());
    let shift = dd - dn + d;
    let (lhs, rhs) = if shift >= 0 {
        (lhs.mul(&QPoly::monomial(shift as usize, Rat::one())), rhs)
    } else {
        (lhs, rhs.mul(&QPoly::monomial((-shift) as usize, Rat::one())))
    };
    let residual = lhs.sub(&rhs);
    (residual.is_zero(), residual)
}

/// Pole data of one rational function: a denominator factor with its
/// multiplicity, from square-free decomposition plus rational-root
/// extraction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PoleFactor {
    /// Primitive integer coefficients of the factor, constant term first.
    pub factor: Vec<String>,
    pub multiplicity: u32,
    /// The pole location when the factor is linear.
    pub root: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct PoleReport {
    pub same_support: bool,
    pub same_multiplicities: bool,
    pub per_function: Vec<Vec<PoleFactor>>,
}

/// Compare the pole supports (and multiplicities) of a family of rational
/// functions.
pub fn check_common_poles(fns: &[RationalFn]) -> PoleReport {
    assert!(!fns.is_empty());
    let per_function: Vec<Vec<PoleFactor>> = fns.iter().map(|r| pole_factors(&r.den)).collect();
    let support = |f: &Vec<PoleFactor>| -> Vec<Vec<String>> {
        let mut s: Vec<Vec<String>> = f.iter().map(|p| p.factor.clone()).collect();
        s.sort();
        s.dedup();
        s
    };
    let with_mult = |f: &Vec<PoleFactor>| -> Vec<(Vec<String>, u32)> {
        let mut s: Vec<(Vec<String>, u32)> = f
            .iter()
            .map(|p| (p.factor.clone(), p.multiplicity))
            .collect();
        s.sort();
        s
    };
    let first = support(&per_function[0]);
    let same_support = per_function.iter().all(|f| support(f) == first);
    let first_m = with_mult(&per_function[0]);
    let same_multiplicities = per_function.iter().all(|f| with_mult(f) == first_m);
    PoleReport {
        same_support,
        same_multiplicities,
        per_function,
    }
}

pub fn pole_factors(den: &QPoly) -> Vec<PoleFactor> {
    let mut out = Vec::new();
    for (part, mult) in square_free_decomposition(den) {
        if part.degree() <= 0 {
            continue;
        }
        let (linears, residual) = extract_rational_roots(&part);
        for root in linears {
            let factor = QPoly::from_coeffs(vec![-root.clone(), Rat::one()]).primitive_integer();
            out.push(PoleFactor {
                factor: factor.to_strings(),
                multiplicity: mult,
                root: Some(rat_to_string(&root)),
            });
        }
        if residual.degree() > 0 {
            out.push(PoleFactor {
                factor: residual.primitive_integer().to_strings(),
                multiplicity: mult,
                root: None,
            });
        }
    }
    out.sort_by(|a, b| {
        a.factor
            .cmp(&b.factor)
            .then(a.multiplicity.cmp(&b.multiplicity))
    });
    out
}

/// Yun square-free decomposition: pairwise-coprime square-free parts with
/// their multiplicities.
pub fn square_free_decomposition(f: &QPoly) -> Vec<(QPoly, u32)> {
    if f.degree() <= 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    let df = f.derivative();
    let a0 = f.gcd(&df);
    let mut b = f.div_rem(&a0).0;
    let mut c = df.div_rem(&a0).0;
    let mut i = 1u32;
    loop {
        let d = c.sub(&b.derivative());
        let p = b.gcd(&d);
        if p.degree() > 0 {
            out.push((p.monic(), i));
        }
        b = b.div_rem(&p).0;
        c = d.div_rem(&p).0;
        i += 1;
        if b.degree() <= 0 {
            break;
        }
    }
    out
}

/// Pull out rational roots of a square-free polynomial; returns the roots
/// and the root-free residual factor.
fn extract_rational_roots(f: &QPoly) -> (Vec<Rat>, QPoly) {
    let mut roots = Vec::new();
    let mut rest = f.primitive_integer();
    while rest.degree() > 0 && rest.coeff(0).is_zero() {
        roots.push(Rat::zero());
        rest = rest.div_rem(&QPoly::from_ints(&[0, 1])).0;
    }
    'outer: loop {
        if rest.degree() <= 0 {
            break;
        }
        let c0 = rest.coeff(0).numer().clone();
        let lead = rest.0.last().unwrap().numer().clone();
        for p in divisors(&c0) {
            for q in divisors(&lead) {
                for sign in [1i64, -1] {
                    let cand = Rat::new(p.clone() * BigInt::from(sign), q.clone());
                    if rest.eval(&cand).is_zero() {
                        roots.push(cand.clone());
                        let lin = QPoly::from_coeffs(vec![-cand, Rat::one()]);
                        rest = rest.div_rem(&lin).0;
                        continue 'outer;
                    }
                }
            }
        }
        break;
    }
    (roots, rest)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    // exhaustive only for small magnitudes; larger constants keep their
    // factor unsplit, which is still a sound support comparison
    if let Ok(small) = i64::try_from(&n) {
        let mut out = Vec::new();
        let mut d = 1i64;
        while (d as i128) * (d as i128) <= small as i128 && d <= 1_000_000 {
            if small % d == 0 {
                out.push(BigInt::from(d));
                out.push(BigInt::from(small / d));
            }
            d += 1;
        }
        out.sort();
        out.dedup();
        out
    } else {
        vec![BigInt::one()]
    }
}

// ---------------------------------------------------------------------------
// Machine-readable records

#[derive(Serialize)]
pub struct FitFns {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

/// The canonical JSON record for one index: series, fit, and checks.
#[derive(Serialize)]
pub struct FitRecord {
    pub geometry: String,
    pub beta: Vec<i64>,
    #[serde(rename = "I")]
    pub index: Vec<u32>,
    pub d: i64,
    pub n_min: i64,
    pub coefficients: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fit: Option<FitFns>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functional_equation: Option<bool>,
    pub holdout: usize,
    /// Basis of the degree-d cobordism group the coefficients refer to.
    pub basis: String,
}

impl FitRecord {
    pub fn new(series: &CoeffSeries, fit: Option<&RationalFn>, holdout: usize) -> FitRecord {
        FitRecord {
            geometry: series.geometry.clone(),
            beta: series.beta.clone(),
            index: series.index.0.clone(),
            d: series.d,
            n_min: series.n_min,
            coefficients: series.coeffs.iter().map(rat_to_string).collect(),
            fit: fit.map(|r| FitFns {
                num: r.num.to_strings(),
                den: r.den.to_strings(),
            }),
            functional_equation: None,
            holdout,
            basis: "dual-to-monomial-chern-numbers".into(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::toric::catalog;

    fn series_from(coeffs: &[i64]) -> CoeffSeries {
        CoeffSeries {
            geometry: "test".into(),
            beta: vec![1],
            index: ChernIndex(vec![2]),
            d: 2,
            n_min: 1,
            coeffs: coeffs.iter().map(|&c| rat_int(c)).collect(),
        }
    }

    #[test]
    fn expand_matches_geometric_series() {
        let r = RationalFn::from_int_coeffs(&[1], &[1, -1]);
        let c = r.expand(4);
        assert!(c.iter().all(|x| *x == rat_int(1)));
    }

    #[test]
    fn fit_recovers_geometric_series() {
        // constant series starting at n = 1 is q/(1-q)
        let s = series_from(&[1, 1, 1, 1, 1, 1, 1, 1]);
        let r = fit_rational(&s, &FitMode::Pade { max_den: 3, max_num: 3 }, 2).unwrap();
        assert_eq!(r, RationalFn::from_int_coeffs(&[0, 1], &[1, -1]));
    }

    #[test]
    fn fit_recovers_table_function() {
        // 9q(1+4q+30q^2+4q^3+q^4)/(1+q)^4
        let expected = RationalFn::new(
            QPoly::from_ints(&[0, 9, 36, 270, 36, 9]),
            QPoly::from_ints(&[1, 1]).pow(4),
        );
        let coeffs = expected.expand(12);
        let ints: Vec<i64> = coeffs[1..]
            .iter()
            .map(|c| {
                assert!(c.is_integer());
                i64::try_from(c.numer()).unwrap()
            })
            .collect();
        let s = series_from(&ints);
        for mode in [
            FitMode::Pade { max_den: 6, max_num: 8 },
            FitMode::Ansatz { max_plus: 6, max_minus: 6 },
        ] {
            let r = fit_rational(&s, &mode, 2).unwrap();
            assert_eq!(r, expected, "{mode:?}");
        }
    }

    #[test]
    fn fit_rejects_non_rational_sequence() {
        // factorials grow too fast for any low-degree rational function
        let s = series_from(&[
            1, 2, 6, 24, 120, 720, 5040, 40320, 362880, 3628800, 39916800, 479001600,
        ]);
        assert!(matches!(
            fit_rational(&s, &FitMode::Pade { max_den: 3, max_num: 3 }, 2),
            Err(FitError::NoFit)
        ));
    }

    #[test]
    fn fit_roundtrip_randomized() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let mut done = 0;
        while done < 25 {
            let dn = rng.gen_range(1..=4);
            let dd = rng.gen_range(1..=3);
            let num = QPoly::from_coeffs(
                (0..=dn)
                    .map(|i| rat_int(if i == 0 { 0 } else { rng.gen_range(-9..=9) }))
                    .collect(),
            );
            let mut den_c = vec![rat_int(1)];
            for _ in 0..dd {
                den_c.push(rat_int(rng.gen_range(-4..=4)));
            }
            let den = QPoly::from_coeffs(den_c);
            if num.is_zero() {
                continue;
            }
            done += 1;
            let r = RationalFn::new(num, den);
            let coeffs = r.expand(16);
            let s = CoeffSeries {
                geometry: "rand".into(),
                beta: vec![1],
                index: ChernIndex(vec![1]),
                d: 1,
                n_min: 0,
                coeffs,
            };
            let back = fit_rational(&s, &FitMode::Pade { max_den: 4, max_num: 5 }, 2).unwrap();
            assert_eq!(back, r);
        }
    }

    #[test]
    fn functional_equation_examples() {
        let r = RationalFn::new(
            QPoly::from_ints(&[0, 9, 36, 270, 36, 9]),
            QPoly::from_ints(&[1, 1]).pow(4),
        );
        assert!(check_functional_equation(&r, 2).0);
        let palindromic = RationalFn::from_int_coeffs(&[0, 1], &[1, 2, 1]);
        assert!(check_functional_equation(&palindromic, 0).0);
        let bad = RationalFn::from_int_coeffs(&[0, 1], &[1, -2]);
        let (ok, residual) = check_functional_equation(&bad, 0);
        assert!(!ok);
        assert!(!residual.is_zero());
    }

    #[test]
    fn common_poles_examples() {
        let f1 = RationalFn::new(
            QPoly::from_ints(&[0, 9, 36, 270, 36, 9]),
            QPoly::from_ints(&[1, 1]).pow(4),
        );
        let f2 = RationalFn::new(
            QPoly::from_ints(&[0, 3, 12, 126, 12, 3]),
            QPoly::from_ints(&[1, 1]).pow(4),
        );
        let report = check_common_poles(&[f1, f2]);
        assert!(report.same_support);
        assert!(report.same_multiplicities);
        assert_eq!(report.per_function[0].len(), 1);
        assert_eq!(report.per_function[0][0].multiplicity, 4);
        assert_eq!(report.per_function[0][0].root.as_deref(), Some("-1"));

        let g1 = RationalFn::from_int_coeffs(&[1], &[1, 1]);
        let g2 = RationalFn::from_int_coeffs(&[1], &[1, -1]);
        let report = check_common_poles(&[g1, g2]);
        assert!(!report.same_support);
    }

    #[test]
    fn mixed_denominator_factoring() {
        // (1+q)^2 (1-q)^3: supports {-1, 1} with multiplicities 2 and 3
        let den = QPoly::from_ints(&[1, 1])
            .pow(2)
            .mul(&QPoly::from_ints(&[1, -1]).pow(3));
        let factors = pole_factors(&den);
        assert_eq!(factors.len(), 2);
        let mult_of = |root: &str| {
            factors
                .iter()
                .find(|f| f.root.as_deref() == Some(root))
                .unwrap()
                .multiplicity
        };
        assert_eq!(mult_of("-1"), 2);
        assert_eq!(mult_of("1"), 3);
    }

    #[test]
    fn assemble_fiber_series_matches_table() {
        let x = catalog("p1xp2").unwrap();
        let fiber = CurveClass(vec![1, 0]);
        let opts = EngineOpts::default();
        let s = assemble(&x, &fiber, &ChernIndex(vec![2]), 5, &opts).unwrap();
        let expected: Vec<Rat> = [9, 0, 216, -864, 2160]
            .iter()
            .map(|&c| rat_int(c))
            .collect();
        assert_eq!(s.coeffs, expected);
        let s = assemble(&x, &fiber, &ChernIndex(vec![0, 1]), 4, &opts).unwrap();
        let expected: Vec<Rat> = [3, 0, 108, -432].iter().map(|&c| rat_int(c)).collect();
        assert_eq!(s.coeffs, expected);
        let empty = assemble(&x, &fiber, &ChernIndex(vec![2]), 0, &opts).unwrap();
        assert!(empty.coeffs.is_empty());
    }
}
