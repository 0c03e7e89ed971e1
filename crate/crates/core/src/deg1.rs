//! Torus-fixed stable pairs supported with multiplicity one on a single
//! invariant curve, and the exact torus character of the virtual tangent
//! space at each of them.
//!
//! A fixed pair on the curve `C` of an edge is the sheaf
//! `O_C(a p + b p')` together with its canonical section; the cokernel
//! lengths `(a, b)` at the two endpoints determine the holomorphic Euler
//! characteristic `n = 1 + a + b`. The character of the virtual tangent
//! space is assembled from two-point Euler characteristics of equivariant
//! line bundles on `C`: with `L = O_C(a p + b p')` and normal bundle
//! `N = N1 + N2`,
//!
//! ```text
//! ch T_vir = chi(L) + chi(L* det N) - chi(O_C)
//!          + chi(N1) + chi(N2) - chi(N1 N2)
//! ```
//!
//! which is the two-term Ext expansion of the pair deformation complex for
//! a curve of codimension two.

use crate::exact::{combine_all, CharFraction, ExactError, LaurentPoly, Weight};
use crate::toric::{CurveClass, Edge, EdgeId, ToricThreefold};
use std::collections::HashMap;
use std::sync::Mutex;
use thiserror::Error;

/// A torus-fixed stable pair on a multiplicity-one edge.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FixedPairDeg1 {
    pub edge: EdgeId,
    /// Cokernel length at `p`.
    pub a: u32,
    /// Cokernel length at `p'`.
    pub b: u32,
}

impl FixedPairDeg1 {
    pub fn chi(&self) -> i64 {
        1 + self.a as i64 + self.b as i64
    }
}

#[derive(Debug, Error)]
pub enum Deg1Error {
    #[error("class admits a decomposition of total multiplicity >= 2 or with >= 2 edges")]
    NotDegreeOne,
    #[error("zero-weight coefficient {0} in the virtual tangent character: fixed point is not isolated")]
    NonIsolatedFixedPoint(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Toric(#[from] crate::toric::ToricError),
}

/// All fixed pairs of class `beta` and Euler characteristic `n`; empty for
/// `n <= 0`. Fails with `NotDegreeOne` unless every decomposition of
/// `beta` is a single edge with multiplicity one.
pub fn enumerate_deg1(
    x: &ToricThreefold,
    beta: &CurveClass,
    n: i64,
) -> Result<Vec<FixedPairDeg1>, Deg1Error> {
    let decs = x.decompose_class(beta)?;
    let mut edges = Vec::new();
    for d in &decs {
        if d.len() != 1 || d[0].1 != 1 {
            return Err(Deg1Error::NotDegreeOne);
        }
        edges.push(d[0].0);
    }
    let mut out = Vec::new();
    if n <= 0 {
        return Ok(out);
    }
    for e in edges {
        for a in 0..n as u32 {
            let b = (n - 1) as u32 - a;
            out.push(FixedPairDeg1 { edge: e, a, b });
        }
    }
    Ok(out)
}

/// Two-point Euler characteristic of the degree-`m` equivariant line
/// bundle on the edge curve whose fiber weight at `p` is `w0`:
///
/// `t^{w0}/(1 - t^{u0}) + t^{w0 + m u0}/(1 - t^{-u0})`.
///
/// For `m >= 0` this normalizes to `sum_{k=0..m} t^{w0 + k u0}`; the
/// fraction is a valid virtual character for every `m`.
pub fn equivariant_chi(edge: &Edge, w0: Weight, m: i64) -> CharFraction {
    let at_p = CharFraction::geometric(w0, edge.u0);
    let at_pp = CharFraction::geometric(w0 + edge.u0.scale(m), -edge.u0);
    at_p.combine(&at_pp)
}

/// The six-term Euler-characteristic sum for a pair `(a, b)` on an edge,
/// before normalization.
pub fn tvir_fraction_deg1(edge: &Edge, a: u32, b: u32) -> CharFraction {
    let (a, b) = (a as i64, b as i64);
    let u0 = edge.u0;
    let nu_sum = edge.nu[0] + edge.nu[1];
    let m_sum = edge.m[0] + edge.m[1];
    let terms = vec![
        // chi(L), L = O_C(a p + b p') with the weight-zero section lift
        equivariant_chi(edge, u0.scale(-a), a + b),
        // chi(L* det N)
        equivariant_chi(edge, u0.scale(a) + nu_sum, m_sum - a - b),
        // -chi(O_C)
        equivariant_chi(edge, Weight::ZERO, 0).negated(),
        // chi(N1) + chi(N2)
        equivariant_chi(edge, edge.nu[0], edge.m[0]),
        equivariant_chi(edge, edge.nu[1], edge.m[1]),
        // -chi(N1 N2)
        equivariant_chi(edge, nu_sum, m_sum).negated(),
    ];
    combine_all(terms)
}

/// Normalized character of the virtual tangent space at a fixed pair.
pub fn tvir_character_deg1(
    x: &ToricThreefold,
    pair: &FixedPairDeg1,
) -> Result<LaurentPoly, Deg1Error> {
    let edge = &x.edges[pair.edge];
    let chi = tvir_fraction_deg1(edge, pair.a, pair.b).normalize()?;
    let zero = chi.coeff(&Weight::ZERO);
    if !num_traits::Zero::is_zero(&zero) {
        return Err(Deg1Error::NonIsolatedFixedPoint(format!(
            "edge {} with (a,b) = ({},{})",
            x.edge_name(pair.edge),
            pair.a,
            pair.b
        )));
    }
    Ok(chi)
}

/// Write-once cache of normalized characters, keyed per pair.
#[derive(Default)]
pub struct CharCache {
    map: Mutex<HashMap<FixedPairDeg1, LaurentPoly>>,
}

impl CharCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn character(
        &self,
        x: &ToricThreefold,
        pair: &FixedPairDeg1,
    ) -> Result<LaurentPoly, Deg1Error> {
        if let Some(c) = self.map.lock().unwrap().get(pair) {
            return Ok(c.clone());
        }
        let c = tvir_character_deg1(x, pair)?;
        self.map
            .lock()
            .unwrap()
            .entry(pair.clone())
            .or_insert_with(|| c.clone());
        Ok(c)
    }
}
