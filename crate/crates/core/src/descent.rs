//! Symbolic descendent layer for products of projective spaces: Kunneth
//! diagonal decompositions, Todd classes, the expansion of
//! `ch_k(-T_vir)` into generalized descendents, and the reduction of
//! generalized descendents to products of single descendents.
//!
//! Everything here is formal: expressions are emitted and manipulated,
//! never numerically integrated.

use crate::exact::{rat_int, rat_to_string, Rat};
use num_traits::{One, Zero};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DescentError {
    #[error("unsupported space {0:?}: expected a product of projective spaces from the catalog")]
    UnsupportedSpace(String),
}

/// A product of projective spaces, by the list of factor dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProjProduct(pub Vec<u32>);

impl ProjProduct {
    pub fn from_geometry_id(id: &str) -> Result<ProjProduct, DescentError> {
        match id {
            "p3" => Ok(ProjProduct(vec![3])),
            "p1xp2" => Ok(ProjProduct(vec![1, 2])),
            "p1p1p1" => Ok(ProjProduct(vec![1, 1, 1])),
            other => Err(DescentError::UnsupportedSpace(other.to_string())),
        }
    }

    pub fn dim(&self) -> u32 {
        self.0.iter().sum()
    }
}

/// Monomial in the hyperplane classes, one exponent per factor.
pub type HMono = Vec<u32>;

fn mono_degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

fn mono_text(m: &[u32]) -> String {
    let mut parts = Vec::new();
    for (i, &e) in m.iter().enumerate() {
        if e == 1 {
            parts.push(format!("h{}", i + 1));
        } else if e > 1 {
            parts.push(format!("h{}^{}", i + 1, e));
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join(" ")
    }
}

/// Element of the rational cohomology of a product of projective spaces
/// in the hyperplane-monomial basis; exponents are capped by the factor
/// dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohClass {
    pub space: ProjProduct,
    terms: BTreeMap<HMono, Rat>,
}

impl CohClass {
    pub fn zero(space: &ProjProduct) -> Self {
        CohClass {
            space: space.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(space: &ProjProduct) -> Self {
        Self::monomial(space, vec![0; space.0.len()], Rat::one())
    }

    pub fn monomial(space: &ProjProduct, m: HMono, c: Rat) -> Self {
        let mut out = Self::zero(space);
        out.add_term(m, &c);
        out
    }

    pub fn add_term(&mut self, m: HMono, c: &Rat) {
        if c.is_zero() {
            return;
        }
        for (e, cap) in m.iter().zip(&self.space.0) {
            if e > cap {
                return; // beyond the fundamental class of a factor
            }
        }
        let entry = self.terms.entry(m).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HMono, &Rat)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &CohClass) -> CohClass {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c);
        }
        out
    }

    pub fn mul(&self, other: &CohClass) -> CohClass {
        let mut out = CohClass::zero(&self.space);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                let m: HMono = m1.iter().zip(m2).map(|(a, b)| a + b).collect();
                out.add_term(m, &(c1 * c2));
            }
        }
        out
    }

    /// Homogeneous piece of complex degree `k`.
    pub fn graded_part(&self, k: u32) -> CohClass {
        let mut out = CohClass::zero(&self.space);
        for (m, c) in &self.terms {
            if mono_degree(m) == k {
                out.add_term(m.clone(), c);
            }
        }
        out
    }

    /// The complex degree when homogeneous.
    pub fn degree(&self) -> Option<u32> {
        let mut degs: Vec<u32> = self.terms.keys().map(|m| mono_degree(m)).collect();
        degs.sort();
        degs.dedup();
        match degs.as_slice() {
            [d] => Some(*d),
            _ => None,
        }
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if mono_degree(m) == 0 {
                    rat_to_string(c)
                } else if c.is_one() {
                    mono_text(m)
                } else {
                    format!("{} {}", rat_to_string(c), mono_text(m))
                }
            })
            .collect();
        parts.join(" + ")
    }
}

// ---------------------------------------------------------------------------
// Kunneth diagonal

/// The diagonal class of `X` in `X x X`, as pairs `(u_i, v_i)` with
/// `delta_* 1 = sum_i u_i (x) v_i`. For a factor `P^n` the pairs are
/// `(h^i, h^{n-i})`; products multiply termwise.
pub fn kunneth_diagonal(space: &ProjProduct) -> Vec<(CohClass, CohClass)> {
    let mut pairs: Vec<(HMono, HMono)> = vec![(vec![], vec![])];
    for &n in &space.0 {
        let mut next = Vec::new();
        for (u, v) in &pairs {
            for i in 0..=n {
                let mut u2 = u.clone();
                let mut v2 = v.clone();
                u2.push(i);
                v2.push(n - i);
                next.push((u2, v2));
            }
        }
        pairs = next;
    }
    pairs
        .into_iter()
        .map(|(u, v)| {
            (
                CohClass::monomial(space, u, Rat::one()),
                CohClass::monomial(space, v, Rat::one()),
            )
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Todd classes

/// Coefficients of `(h / (1 - e^{-h}))^{n+1}` modulo `h^{n+1}`.
fn todd_pn_series(n: u32) -> Vec<Rat> {
    let len = n as usize + 1;
    // b = (1 - e^{-h})/h = sum_k (-1)^k h^k/(k+1)!
    let mut b = vec![Rat::zero(); len];
    let mut fact = Rat::one();
    for (k, bk) in b.iter_mut().enumerate() {
        fact *= rat_int(k as i64 + 1);
        let sign = if k % 2 == 0 { Rat::one() } else { -Rat::one() };
        *bk = sign / &fact;
    }
    // t = 1/b by power-series inversion
    let mut t = vec![Rat::zero(); len];
    t[0] = Rat::one();
    for k in 1..len {
        let mut acc = Rat::zero();
        for j in 1..=k {
            acc += &b[j] * &t[k - j];
        }
        t[k] = -acc;
    }
    // t^{n+1}
    let mut out = vec![Rat::zero(); len];
    out[0] = Rat::one();
    for _ in 0..=n {
        let mut next = vec![Rat::zero(); len];
        for i in 0..len {
            if out[i].is_zero() {
                continue;
            }
            for j in 0..len - i {
                let prod = &out[i] * &t[j];
                next[i + j] += prod;
            }
        }
        out = next;
    }
    out
}

/// `Td(T_X)` in the hyperplane basis.
pub fn todd_class(space: &ProjProduct) -> CohClass {
    let mut total = CohClass::one(space);
    for (fi, &n) in space.0.iter().enumerate() {
        let series = todd_pn_series(n);
        let mut factor = CohClass::zero(space);
        for (k, c) in series.iter().enumerate() {
            let mut m = vec![0u32; space.0.len()];
            m[fi] = k as u32;
            factor.add_term(m, c);
        }
        total = total.mul(&factor);
    }
    total
}

// ---------------------------------------------------------------------------
// Descendent expressions

/// A term in a descendent expression. Indices are descendent indices:
/// `tau[i]` pairs with `ch_{2+i}` of the universal sheaf.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TermKind {
    /// `tau[i](gamma)`
    Single { i: u32, gamma: HMono },
    /// generalized `tau[i,j](gamma)`
    Gen { i: u32, j: u32, gamma: HMono },
    /// `tau[i](g1) * tau[j](g2)`
    Prod { i: u32, g1: HMono, j: u32, g2: HMono },
}

impl TermKind {
    /// Sum `2 ch_i + 2 ch_j + deg gamma` in real degrees, with the
    /// convention that the missing slot of a single descendent counts as
    /// zero.
    pub fn grr_degree(&self) -> u32 {
        match self {
            TermKind::Single { i, gamma } => 2 * (i + 2) + 2 * mono_degree(gamma),
            TermKind::Gen { i, j, gamma } => 2 * (i + 2) + 2 * (j + 2) + 2 * mono_degree(gamma),
            TermKind::Prod { i, g1, j, g2 } => {
                2 * (i + 2) + 2 * (j + 2) + 2 * (mono_degree(g1) + mono_degree(g2))
            }
        }
    }

    pub fn is_generalized(&self) -> bool {
        matches!(self, TermKind::Gen { .. })
    }

    fn to_text(&self) -> String {
        match self {
            TermKind::Single { i, gamma } => format!("tau[{}]({})", i, mono_text(gamma)),
            TermKind::Gen { i, j, gamma } => format!("tau[{},{}]({})", i, j, mono_text(gamma)),
            TermKind::Prod { i, g1, j, g2 } => format!(
                "tau[{}]({}) * tau[{}]({})",
                i,
                mono_text(g1),
                j,
                mono_text(g2)
            ),
        }
    }
}

/// Formal Q-linear combination of descendent terms over a fixed space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DescendentExpr {
    pub space: ProjProduct,
    terms: BTreeMap<TermKind, Rat>,
}

impl DescendentExpr {
    pub fn zero(space: &ProjProduct) -> Self {
        DescendentExpr {
            space: space.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn add_term(&mut self, kind: TermKind, c: &Rat) {
        if c.is_zero() {
            return;
        }
        // generalized and product terms commute in their two slots
        let kind = match kind {
            TermKind::Gen { i, j, gamma } if j < i => TermKind::Gen { i: j, j: i, gamma },
            TermKind::Prod { i, g1, j, g2 } if (j, &g2) < (i, &g1) => TermKind::Prod {
                i: j,
                g1: g2.clone(),
                j: i,
                g2: g1,
            },
            other => other,
        };
        let entry = self.terms.entry(kind).or_insert_with(Rat::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TermKind, &Rat)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scaled(&self, c: &Rat) -> DescendentExpr {
        let mut out = DescendentExpr::zero(&self.space);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), &(v * c));
        }
        out
    }

    pub fn add(&self, other: &DescendentExpr) -> DescendentExpr {
        let mut out = self.clone();
        for (k, v) in &other.terms {
            out.add_term(k.clone(), v);
        }
        out
    }

    pub fn has_generalized(&self) -> bool {
        self.terms.keys().any(|k| k.is_generalized())
    }

    /// Plain-text form: `a * tau[i](mono)`, `a * tau[i,j](mono)` and
    /// `a * tau[i](mono) * tau[j](mono)` terms joined by ` + `.
    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| format!("{} * {}", rat_to_string(c), k.to_text()))
            .collect();
        parts.join(" + ")
    }
}

// ---------------------------------------------------------------------------
// GRR expansion and reduction

/// Expansion of `ch_k(-T_vir)` into descendents: the degree-`k`
/// pushforward part of `(-ch F - ch F^dual + ch F ch F^dual) Td(T_X)`,
/// using `ch_i(F^dual) = (-1)^i ch_i(F)` and `ch_0(F) = ch_1(F) = 0`.
/// The `ch_k` of the pushforward of the structure sheaf vanishes for
/// `k > 0` and is dropped.
pub fn grr_expansion(space: &ProjProduct, k: u32) -> DescendentExpr {
    assert!(k >= 1, "expansion defined for k >= 1");
    let td = todd_class(space);
    let mut out = DescendentExpr::zero(space);
    let target = k + 3; // complex degree on the product before pushforward
    // single-ch terms: -(1 + (-1)^i) ch_i(F) Td_l, l = target - i
    for i in 2..=target {
        if i % 2 != 0 {
            continue;
        }
        let l = target - i;
        if l > space.dim() {
            continue;
        }
        let piece = td.graded_part(l);
        for (m, c) in piece.iter() {
            out.add_term(
                TermKind::Single {
                    i: i - 2,
                    gamma: m.clone(),
                },
                &(c * rat_int(-2)),
            );
        }
    }
    // double-ch terms: (-1)^j ch_i(F) ch_j(F) Td_l
    for i in 2..=target {
        for j in 2..=target.saturating_sub(i) {
            let l = target - i - j;
            if l > space.dim() {
                continue;
            }
            let sign = if j % 2 == 0 { Rat::one() } else { -Rat::one() };
            let piece = td.graded_part(l);
            for (m, c) in piece.iter() {
                out.add_term(
                    TermKind::Gen {
                        i: i - 2,
                        j: j - 2,
                        gamma: m.clone(),
                    },
                    &(c * &sign),
                );
            }
        }
    }
    out
}

/// Rewrite every generalized descendent through the Kunneth diagonal:
/// `tau[i,j](gamma) = sum_m tau[i](gamma u_m) tau[j](v_m)`.
pub fn reduce_generalized(expr: &DescendentExpr) -> DescendentExpr {
    let diagonal = kunneth_diagonal(&expr.space);
    let mut out = DescendentExpr::zero(&expr.space);
    for (kind, coeff) in expr.iter() {
        match kind {
            TermKind::Gen { i, j, gamma } => {
                let g = CohClass::monomial(&expr.space, gamma.clone(), Rat::one());
                for (u, v) in &diagonal {
                    let gu = g.mul(u);
                    for (mu, cu) in gu.iter() {
                        for (mv, cv) in v.iter() {
                            out.add_term(
                                TermKind::Prod {
                                    i: *i,
                                    g1: mu.clone(),
                                    j: *j,
                                    g2: mv.clone(),
                                },
                                &(coeff * cu * cv),
                            );
                        }
                    }
                }
            }
            other => out.add_term(other.clone(), coeff),
        }
    }
    out
}
