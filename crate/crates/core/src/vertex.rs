//! Torus-fixed stable pairs for general effective classes: edges with
//! multiplicity two, nodal two-edge supports, and disjoint unions of
//! those with multiplicity-one edges.
//!
//! Every supported fixed pair decomposes in K-theory into "sheets" (line
//! bundles pushed forward from the smooth component curves) plus a
//! skyscraper correction at a node. All Euler characteristics then reduce
//! to two-point sums on the component curves together with finite Koszul
//! terms at the node, so the character assembly stays exact and
//! self-contained:
//!
//! * a multiplicity-two edge thickened into the normal direction `N_a`
//!   carries an inner sheet `O_C(d0 p + d0' p')` and an outer sheet
//!   `N_a^* (d1 p + d1' p')` with `d0 <= d1` at each end;
//! * two multiplicity-one edges through a node carry either the glued
//!   structure sheaf (node fiber one-dimensional, "thin") or the full
//!   direct sum ("full"), with independent cokernel lengths at the node
//!   and the far vertices.
//!
//! Weight spaces of the limit module are one-dimensional whenever the
//! tangent weights at each fixed point are pairwise independent, so every
//! enumerated configuration is an isolated fixed point; this is checked
//! at run time and violations are reported, never dropped.

use crate::deg1::equivariant_chi;
use crate::exact::{combine_all, CharFraction, ExactError, LaurentPoly, Rat, Weight};
use crate::toric::{CurveClass, Edge, EdgeId, PointId, ToricThreefold};
use num_traits::Zero;
use std::collections::HashMap;
use std::sync::Mutex;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum VertexError {
    #[error("fixed locus is not isolated: {0}")]
    NonIsolatedFixedLocus(String),
    #[error("unsupported support configuration: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error(transparent)]
    Toric(#[from] crate::toric::ToricError),
}

/// Connected piece of a support configuration.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Component {
    Single { edge: EdgeId },
    Double { edge: EdgeId },
    NodePair { e1: EdgeId, e2: EdgeId, node: PointId },
}

/// One isolated fixed pair on a connected component.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ComponentConfig {
    /// Multiplicity-one edge with cokernel lengths at the two ends.
    Deg1 { edge: EdgeId, a: u32, b: u32 },
    /// Multiplicity-two edge thickened into normal direction `dir`;
    /// inner/outer cokernel lengths at `p` and at `p'`.
    Fat {
        edge: EdgeId,
        dir: usize,
        inner_p: u32,
        outer_p: u32,
        inner_pp: u32,
        outer_pp: u32,
    },
    /// Two multiplicity-one edges through `node`. `full` selects the
    /// two-dimensional node fiber; `d1`, `d2` are cokernel lengths at the
    /// node (zero when thin) and `b1`, `b2` at the far vertices.
    Node {
        e1: EdgeId,
        e2: EdgeId,
        node: PointId,
        full: bool,
        d1: u32,
        d2: u32,
        b1: u32,
        b2: u32,
    },
}

impl ComponentConfig {
    pub fn chi(&self, x: &ToricThreefold) -> i64 {
        match self {
            ComponentConfig::Deg1 { a, b, .. } => 1 + *a as i64 + *b as i64,
            ComponentConfig::Fat {
                edge,
                dir,
                inner_p,
                outer_p,
                inner_pp,
                outer_pp,
            } => {
                let m = x.edges[*edge].m[*dir];
                (*inner_p as i64 + *inner_pp as i64 + 1)
                    + (*outer_p as i64 + *outer_pp as i64 + 1 - m)
            }
            ComponentConfig::Node {
                full,
                d1,
                d2,
                b1,
                b2,
                ..
            } => {
                let base = if *full { 2 } else { 1 };
                base + *d1 as i64 + *d2 as i64 + *b1 as i64 + *b2 as i64
            }
        }
    }
}

/// An isolated torus-fixed stable pair with general support.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GeneralFixedPair {
    pub components: Vec<ComponentConfig>,
    pub n: i64,
}

impl GeneralFixedPair {
    /// Edge multiplicities of the underlying Cohen-Macaulay support.
    pub fn edge_assignment(&self) -> Vec<(EdgeId, u32)> {
        let mut out = Vec::new();
        for c in &self.components {
            match c {
                ComponentConfig::Deg1 { edge, .. } => out.push((*edge, 1)),
                ComponentConfig::Fat { edge, .. } => out.push((*edge, 2)),
                ComponentConfig::Node { e1, e2, .. } => {
                    out.push((*e1, 1));
                    out.push((*e2, 1));
                }
            }
        }
        out.sort();
        out
    }
}

/// Enumeration plus character assembly with a write-once per-component
/// cache.
pub struct VertexEngine<'a> {
    x: &'a ToricThreefold,
    cache: Mutex<HashMap<ComponentConfig, LaurentPoly>>,
}

impl<'a> VertexEngine<'a> {
    pub fn new(x: &'a ToricThreefold) -> Self {
        VertexEngine {
            x,
            cache: Mutex::new(HashMap::new()),
        }
    }

    /// All isolated fixed pairs with class `beta` and `chi = n`.
    pub fn enumerate(&self, beta: &CurveClass, n: i64) -> Result<Vec<GeneralFixedPair>, VertexError> {
        let decs = self.x.decompose_class(beta)?;
        let mut out = Vec::new();
        for dec in decs {
            let comps = self.split_components(&dec)?;
            let mins: Vec<i64> = comps.iter().map(|c| self.min_chi(c)).collect();
            let mut assignment = vec![0i64; comps.len()];
            self.enumerate_compositions(&comps, &mins, n, 0, &mut assignment, &mut out)?;
        }
        Ok(out)
    }

    fn enumerate_compositions(
        &self,
        comps: &[Component],
        mins: &[i64],
        remaining: i64,
        idx: usize,
        assignment: &mut Vec<i64>,
        out: &mut Vec<GeneralFixedPair>,
    ) -> Result<(), VertexError> {
        if idx == comps.len() {
            if remaining == 0 {
                let mut lists: Vec<Vec<ComponentConfig>> = Vec::new();
                for (c, &ni) in comps.iter().zip(assignment.iter()) {
                    lists.push(self.component_configs(c, ni)?);
                }
                let mut current = Vec::new();
                cartesian(&lists, &mut current, out, assignment.iter().sum());
            }
            return Ok(());
        }
        let rest_min: i64 = mins[idx + 1..].iter().sum();
        let mut ni = mins[idx];
        while ni <= remaining - rest_min {
            assignment[idx] = ni;
            self.enumerate_compositions(comps, mins, remaining - ni, idx + 1, assignment, out)?;
            ni += 1;
        }
        Ok(())
    }

    fn split_components(&self, dec: &[(EdgeId, u32)]) -> Result<Vec<Component>, VertexError> {
        for (_, k) in dec {
            if *k > 2 {
                return Err(VertexError::Unsupported(
                    "edge multiplicity above two".into(),
                ));
            }
        }
        // union-find over shared endpoints
        let n = dec.len();
        let mut parent: Vec<usize> = (0..n).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let up = parent[i];
                let r = find(parent, up);
                parent[i] = r;
            }
            parent[i]
        }
        for i in 0..n {
            for j in (i + 1)..n {
                let (ei, ej) = (&self.x.edges[dec[i].0], &self.x.edges[dec[j].0]);
                let shared = [ei.p, ei.p_prime]
                    .iter()
                    .filter(|v| [ej.p, ej.p_prime].contains(v))
                    .count();
                if shared > 0 {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    if ri != rj {
                        parent[ri] = rj;
                    }
                }
            }
        }
        let mut groups: HashMap<usize, Vec<usize>> = HashMap::new();
        for i in 0..n {
            let r = find(&mut parent, i);
            groups.entry(r).or_default().push(i);
        }
        let mut comps = Vec::new();
        let mut keys: Vec<usize> = groups.keys().copied().collect();
        keys.sort();
        for k in keys {
            let members = &groups[&k];
            match members.as_slice() {
                [i] => {
                    let (edge, mult) = dec[*i];
                    comps.push(if mult == 1 {
                        Component::Single { edge }
                    } else {
                        Component::Double { edge }
                    });
                }
                [i, j] => {
                    let (ea, ma) = dec[*i];
                    let (eb, mb) = dec[*j];
                    if ma != 1 || mb != 1 {
                        return Err(VertexError::Unsupported(
                            "thick edge meeting another edge".into(),
                        ));
                    }
                    let (x1, x2) = (&self.x.edges[ea], &self.x.edges[eb]);
                    let shared: Vec<PointId> = [x1.p, x1.p_prime]
                        .into_iter()
                        .filter(|v| [x2.p, x2.p_prime].contains(v))
                        .collect();
                    if shared.len() != 1 {
                        return Err(VertexError::Unsupported(
                            "edges sharing more than one vertex".into(),
                        ));
                    }
                    comps.push(Component::NodePair {
                        e1: ea,
                        e2: eb,
                        node: shared[0],
                    });
                }
                _ => {
                    return Err(VertexError::Unsupported(format!(
                        "connected support with {} edges",
                        members.len()
                    )));
                }
            }
        }
        Ok(comps)
    }

    fn min_chi(&self, c: &Component) -> i64 {
        match c {
            Component::Single { .. } => 1,
            Component::Double { edge } => {
                let m = &self.x.edges[*edge].m;
                2 - m[0].max(m[1])
            }
            Component::NodePair { .. } => 1,
        }
    }

    fn component_configs(
        &self,
        c: &Component,
        ni: i64,
    ) -> Result<Vec<ComponentConfig>, VertexError> {
        let mut out = Vec::new();
        match c {
            Component::Single { edge } => {
                if ni >= 1 {
                    for a in 0..ni as u32 {
                        out.push(ComponentConfig::Deg1 {
                            edge: *edge,
                            a,
                            b: (ni - 1) as u32 - a,
                        });
                    }
                }
            }
            Component::Double { edge } => {
                let e = &self.x.edges[*edge];
                for dir in 0..2 {
                    if e.nu[dir].parallel_to(&e.u0) {
                        return Err(VertexError::NonIsolatedFixedLocus(format!(
                            "normal weight parallel to edge direction on {}",
                            self.x.edge_name(*edge)
                        )));
                    }
                    let total = ni - 2 + e.m[dir];
                    if total < 0 {
                        continue;
                    }
                    // inner <= outer at each end, summing to `total`
                    for inner_p in 0..=total {
                        for outer_p in inner_p..=total {
                            for inner_pp in 0..=(total - inner_p - outer_p).max(0) {
                                let outer_pp = total - inner_p - outer_p - inner_pp;
                                if outer_pp >= inner_pp {
                                    out.push(ComponentConfig::Fat {
                                        edge: *edge,
                                        dir,
                                        inner_p: inner_p as u32,
                                        outer_p: outer_p as u32,
                                        inner_pp: inner_pp as u32,
                                        outer_pp: outer_pp as u32,
                                    });
                                }
                            }
                        }
                    }
                }
            }
            Component::NodePair { e1, e2, node } => {
                let v1 = node_view(&self.x.edges[*e1], *node);
                let v2 = node_view(&self.x.edges[*e2], *node);
                if v1.u0.parallel_to(&v2.u0) {
                    return Err(VertexError::NonIsolatedFixedLocus(format!(
                        "edge directions parallel at node {}",
                        self.x.points[*node].id
                    )));
                }
                // thin node: chi = 1 + b1 + b2
                if ni >= 1 {
                    for b1 in 0..=(ni - 1) as u32 {
                        out.push(ComponentConfig::Node {
                            e1: *e1,
                            e2: *e2,
                            node: *node,
                            full: false,
                            d1: 0,
                            d2: 0,
                            b1,
                            b2: (ni - 1) as u32 - b1,
                        });
                    }
                }
                // full node: chi = 2 + d1 + d2 + b1 + b2
                if ni >= 2 {
                    let s = (ni - 2) as u32;
                    for d1 in 0..=s {
                        for d2 in 0..=(s - d1) {
                            for b1 in 0..=(s - d1 - d2) {
                                out.push(ComponentConfig::Node {
                                    e1: *e1,
                                    e2: *e2,
                                    node: *node,
                                    full: true,
                                    d1,
                                    d2,
                                    b1,
                                    b2: s - d1 - d2 - b1,
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Normalized character of the virtual tangent space at `pair`.
    pub fn character(&self, pair: &GeneralFixedPair) -> Result<LaurentPoly, VertexError> {
        let mut total = LaurentPoly::zero();
        for c in &pair.components {
            let chi = self.component_character(c)?;
            total = &total + &chi;
        }
        let zero = total.coeff(&Weight::ZERO);
        if !zero.is_zero() {
            return Err(VertexError::NonIsolatedFixedLocus(format!(
                "zero-weight multiplicity {} in the virtual tangent character",
                crate::exact::rat_to_string(&zero)
            )));
        }
        Ok(total)
    }

    fn component_character(&self, c: &ComponentConfig) -> Result<LaurentPoly, VertexError> {
        if let Some(chi) = self.cache.lock().unwrap().get(c) {
            return Ok(chi.clone());
        }
        let fraction = self.component_fraction(c)?;
        let chi = fraction.normalize()?;
        self.cache
            .lock()
            .unwrap()
            .entry(c.clone())
            .or_insert_with(|| chi.clone());
        Ok(chi)
    }

    fn component_fraction(&self, c: &ComponentConfig) -> Result<CharFraction, VertexError> {
        match c {
            ComponentConfig::Deg1 { edge, a, b } => {
                let e = &self.x.edges[*edge];
                let sheet = Sheet {
                    edge: e.clone(),
                    w0: e.u0.scale(-(*a as i64)),
                    m: *a as i64 + *b as i64,
                };
                Ok(combine_all(vec![
                    sheet.chi(),
                    sheet.chi_dual_det(),
                    sheet.chi_pair(&sheet).negated(),
                ]))
            }
            ComponentConfig::Fat {
                edge,
                dir,
                inner_p,
                outer_p,
                inner_pp,
                outer_pp,
            } => {
                let e = &self.x.edges[*edge];
                let inner = Sheet {
                    edge: e.clone(),
                    w0: e.u0.scale(-(*inner_p as i64)),
                    m: *inner_p as i64 + *inner_pp as i64,
                };
                let outer = Sheet {
                    edge: e.clone(),
                    w0: -e.nu[*dir] + e.u0.scale(-(*outer_p as i64)),
                    m: *outer_p as i64 + *outer_pp as i64 - e.m[*dir],
                };
                Ok(combine_all(vec![
                    inner.chi(),
                    outer.chi(),
                    inner.chi_dual_det(),
                    outer.chi_dual_det(),
                    inner.chi_pair(&inner).negated(),
                    inner.chi_pair(&outer).negated(),
                    outer.chi_pair(&inner).negated(),
                    outer.chi_pair(&outer).negated(),
                ]))
            }
            ComponentConfig::Node {
                e1,
                e2,
                node,
                full,
                d1,
                d2,
                b1,
                b2,
            } => {
                let v1 = node_view(&self.x.edges[*e1], *node);
                let v2 = node_view(&self.x.edges[*e2], *node);
                let u_a = v1.u0;
                let u_b = v2.u0;
                let u_t = self.transverse_weight(*node, &u_a, &u_b)?;
                let sheet1 = Sheet {
                    edge: v1,
                    w0: u_a.scale(-(*d1 as i64)),
                    m: *d1 as i64 + *b1 as i64,
                };
                let sheet2 = Sheet {
                    edge: v2,
                    w0: u_b.scale(-(*d2 as i64)),
                    m: *d2 as i64 + *b2 as i64,
                };
                let phi1 = u_a.scale(-(*d1 as i64));
                let phi2 = u_b.scale(-(*d2 as i64));
                let mut terms = vec![
                    sheet1.chi(),
                    sheet2.chi(),
                    sheet1.chi_dual_det(),
                    sheet2.chi_dual_det(),
                    sheet1.chi_pair(&sheet1).negated(),
                    sheet2.chi_pair(&sheet2).negated(),
                    // transverse cross-Ext at the node
                    CharFraction::from_poly(cross_ext(phi2 - phi1, u_b, u_t)).negated(),
                    CharFraction::from_poly(cross_ext(phi1 - phi2, u_a, u_t)).negated(),
                ];
                if !*full {
                    // K-class correction [F] = [A] + [B] - [O_node]
                    let sky = node_skyscraper_terms(u_a, u_b, u_t);
                    terms.extend(sky);
                }
                Ok(combine_all(terms))
            }
        }
    }

    fn transverse_weight(
        &self,
        node: PointId,
        u_a: &Weight,
        u_b: &Weight,
    ) -> Result<Weight, VertexError> {
        let mut rest: Vec<Weight> = self.x.points[node].tangent_weights.to_vec();
        for u in [u_a, u_b] {
            match rest.iter().position(|w| *w == -*u) {
                Some(i) => {
                    rest.remove(i);
                }
                None => {
                    return Err(VertexError::Unsupported(format!(
                        "edge direction is not tangent at node {}",
                        self.x.points[node].id
                    )));
                }
            }
        }
        debug_assert_eq!(rest.len(), 1);
        Ok(-rest[0])
    }
}

/// `chi_X(i_* A, i_* B)` for line bundles on two transverse curves through
/// a node, as a finite Koszul term: `t^{phiB - phiA} (-t^{-uB} + t^{-uB-uT})`.
fn cross_ext(phi_diff: Weight, u_b: Weight, u_t: Weight) -> LaurentPoly {
    let mut p = LaurentPoly::zero();
    p.add_term(phi_diff - u_b, &-rat_one());
    p.add_term(phi_diff - u_b - u_t, &rat_one());
    p
}

fn rat_one() -> Rat {
    crate::exact::rat_int(1)
}

fn one_minus_inv(u: Weight) -> LaurentPoly {
    &LaurentPoly::one() - &LaurentPoly::character(-u)
}

/// Finite terms induced by the `-[O_node]` correction of a thin node,
/// entering `chi(O,F) + chi(F,O) - chi(F,F)` with their signs. Both node
/// sheets have fiber weight zero there.
fn node_skyscraper_terms(u_a: Weight, u_b: Weight, u_t: Weight) -> Vec<CharFraction> {
    let mut terms = Vec::new();
    // chi(O, F) gains -chi(O_X, O_x) = -1
    terms.push(CharFraction::from_poly(LaurentPoly::one()).negated());
    // chi(F, O) gains -chi(O_x, O_X) = +t^{-(uA+uB+uT)}
    terms.push(CharFraction::from_poly(LaurentPoly::character(
        -(u_a + u_b + u_t),
    )));
    // -chi(F,F) gains +chi(A, O_x) + chi(B, O_x) + chi(O_x, A) + chi(O_x, B)
    //                 -chi(O_x, O_x)
    let chi_a_ox = &one_minus_inv(u_b) * &one_minus_inv(u_t);
    let chi_b_ox = &one_minus_inv(u_a) * &one_minus_inv(u_t);
    terms.push(CharFraction::from_poly(chi_a_ox.clone()));
    terms.push(CharFraction::from_poly(chi_b_ox.clone()));
    let m_ua = LaurentPoly::character(-u_a);
    let m_ub = LaurentPoly::character(-u_b);
    terms.push(CharFraction::from_poly(&chi_a_ox * &m_ua).negated());
    terms.push(CharFraction::from_poly(&chi_b_ox * &m_ub).negated());
    let chi_ox_ox = &(&one_minus_inv(u_a) * &one_minus_inv(u_b)) * &one_minus_inv(u_t);
    terms.push(CharFraction::from_poly(chi_ox_ox).negated());
    terms
}

/// The edge reoriented so that `node` is the `p` end.
fn node_view(e: &Edge, node: PointId) -> Edge {
    if e.p == node {
        e.clone()
    } else {
        e.reversed()
    }
}

/// A line bundle on an edge curve, pushed forward to the 3-fold: fiber
/// weight `w0` at `p`, degree `m`.
struct Sheet {
    edge: Edge,
    w0: Weight,
    m: i64,
}

impl Sheet {
    /// `chi(X, F)` for the pushed-forward line bundle.
    fn chi(&self) -> CharFraction {
        equivariant_chi(&self.edge, self.w0, self.m)
    }

    /// `chi(F, O_X) = chi(C, F^* det N)` for the codimension-two
    /// embedding.
    fn chi_dual_det(&self) -> CharFraction {
        let e = &self.edge;
        equivariant_chi(
            e,
            -self.w0 + e.nu[0] + e.nu[1],
            -self.m + e.m[0] + e.m[1],
        )
    }

    /// `chi(F, G)` for two line bundles on the same curve:
    /// `sum_j (-1)^j chi(F^* G Lambda^j N)`.
    fn chi_pair(&self, other: &Sheet) -> CharFraction {
        let e = &self.edge;
        let w = other.w0 - self.w0;
        let dm = other.m - self.m;
        combine_all(vec![
            equivariant_chi(e, w, dm),
            equivariant_chi(e, w + e.nu[0], dm + e.m[0]).negated(),
            equivariant_chi(e, w + e.nu[1], dm + e.m[1]).negated(),
            equivariant_chi(e, w + e.nu[0] + e.nu[1], dm + e.m[0] + e.m[1]),
        ])
    }
}

fn cartesian(
    lists: &[Vec<ComponentConfig>],
    current: &mut Vec<ComponentConfig>,
    out: &mut Vec<GeneralFixedPair>,
    n: i64,
) {
    if current.len() == lists.len() {
        out.push(GeneralFixedPair {
            components: current.clone(),
            n,
        });
        return;
    }
    for cfg in &lists[current.len()] {
        current.push(cfg.clone());
        cartesian(lists, current, out, n);
        current.pop();
    }
}

/// All isolated torus-fixed pairs with class `beta` and `chi = n`.
pub fn enumerate_general(
    x: &ToricThreefold,
    beta: &CurveClass,
    n: i64,
) -> Result<Vec<GeneralFixedPair>, VertexError> {
    VertexEngine::new(x).enumerate(beta, n)
}

/// Normalized virtual tangent character of a general fixed pair.
pub fn general_character(
    x: &ToricThreefold,
    pair: &GeneralFixedPair,
) -> Result<LaurentPoly, VertexError> {
    VertexEngine::new(x).character(pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::deg1::{enumerate_deg1, tvir_character_deg1};
    use crate::exact::rat_int;
    use crate::toric::catalog;

    #[test]
    fn degree_one_bijection_with_deg1_engine() {
        for (id, beta) in [
            ("p3", CurveClass(vec![1])),
            ("p1xp2", CurveClass(vec![1, 0])),
            ("p1xp2", CurveClass(vec![0, 1])),
            ("p1p1p1", CurveClass(vec![0, 0, 1])),
        ] {
            let x = catalog(id).unwrap();
            let engine = VertexEngine::new(&x);
            for n in 1..=10 {
                let general = engine.enumerate(&beta, n).unwrap();
                let simple = enumerate_deg1(&x, &beta, n).unwrap();
                assert_eq!(general.len(), simple.len(), "{id} n={n}");
                for pair in &general {
                    assert_eq!(pair.components.len(), 1);
                    let chi = engine.character(pair).unwrap();
                    match &pair.components[0] {
                        ComponentConfig::Deg1 { edge, a, b } => {
                            let p = crate::deg1::FixedPairDeg1 {
                                edge: *edge,
                                a: *a,
                                b: *b,
                            };
                            assert_eq!(chi, tvir_character_deg1(&x, &p).unwrap());
                        }
                        other => panic!("unexpected component {other:?}"),
                    }
                }
            }
        }
    }

    #[test]
    fn disjoint_pairs_add_characters() {
        let x = catalog("p1p1p1").unwrap();
        let beta = CurveClass(vec![1, 1, 0]);
        let engine = VertexEngine::new(&x);
        let pairs = engine.enumerate(&beta, 2).unwrap();
        // 8 disjoint pairs contribute exactly one configuration each at n=2
        // (n_i = 1 per edge); shared-vertex pairs contribute thin b=0 at
        // n=1, so at n=2 they carry their own configurations as well.
        let disjoint: Vec<_> = pairs
            .iter()
            .filter(|p| p.components.len() == 2)
            .collect();
        assert_eq!(disjoint.len(), 8);
        for p in disjoint {
            let chi = engine.character(p).unwrap();
            let mut expected = LaurentPoly::zero();
            for c in &p.components {
                if let ComponentConfig::Deg1 { edge, a, b } = c {
                    let q = crate::deg1::FixedPairDeg1 {
                        edge: *edge,
                        a: *a,
                        b: *b,
                    };
                    expected = &expected + &tvir_character_deg1(&x, &q).unwrap();
                }
            }
            assert_eq!(chi, expected);
            assert_eq!(chi.rank(), rat_int(4));
        }
    }

    #[test]
    fn node_pairs_at_n1_are_thin() {
        let x = catalog("p1p1p1").unwrap();
        let beta = CurveClass(vec![1, 1, 0]);
        let engine = VertexEngine::new(&x);
        let pairs = engine.enumerate(&beta, 1).unwrap();
        assert_eq!(pairs.len(), 8);
        for p in &pairs {
            assert_eq!(p.components.len(), 1);
            match &p.components[0] {
                ComponentConfig::Node { full, b1, b2, .. } => {
                    assert!(!full);
                    assert_eq!(*b1 + *b2, 0);
                }
                other => panic!("unexpected {other:?}"),
            }
            let chi = engine.character(p).unwrap();
            assert_eq!(chi.rank(), rat_int(4));
            assert!(chi.coeff(&Weight::ZERO).is_zero());
        }
    }

    #[test]
    fn fat_edges_at_minimal_chi() {
        let x = catalog("p1xp2").unwrap();
        let beta = CurveClass(vec![2, 0]);
        let engine = VertexEngine::new(&x);
        assert!(engine.enumerate(&beta, 1).unwrap().is_empty());
        let pairs = engine.enumerate(&beta, 2).unwrap();
        // 3 disjoint fiber pairs + 3 edges x 2 thickening directions
        let fat = pairs
            .iter()
            .filter(|p| matches!(p.components[0], ComponentConfig::Fat { .. }))
            .count();
        assert_eq!(fat, 6);
        assert_eq!(pairs.len(), 9);
        for p in &pairs {
            let chi = engine.character(p).unwrap();
            assert_eq!(chi.rank(), rat_int(4), "{p:?}");
            assert!(chi.coeff(&Weight::ZERO).is_zero());
        }
    }

    #[test]
    fn degenerate_thickening_direction_reported() {
        // a normal weight parallel to the edge direction collapses the
        // weight-space grading of the thickened module
        let mut x = catalog("p1xp2").unwrap();
        let fiber = x
            .edges
            .iter()
            .position(|e| e.class == CurveClass(vec![1, 0]))
            .unwrap();
        let u0 = x.edges[fiber].u0;
        x.edges[fiber].nu[0] = u0.scale(2);
        x.edges[fiber].nu_prime[0] = u0.scale(2);
        let engine = VertexEngine::new(&x);
        let result = engine.enumerate(&CurveClass(vec![2, 0]), 2);
        assert!(matches!(result, Err(VertexError::NonIsolatedFixedLocus(_))));
    }

    #[test]
    fn triple_multiplicity_unsupported() {
        let x = catalog("p1xp2").unwrap();
        let engine = VertexEngine::new(&x);
        let result = engine.enumerate(&CurveClass(vec![3, 0]), 3);
        assert!(matches!(result, Err(VertexError::Unsupported(_))));
    }

    #[test]
    fn rank_matches_virtual_dimension_across_supports() {
        let x = catalog("p1p1p1").unwrap();
        let beta = CurveClass(vec![1, 1, 0]);
        let d = x.virtual_dimension(&beta).unwrap();
        let engine = VertexEngine::new(&x);
        for n in 1..=5 {
            for p in engine.enumerate(&beta, n).unwrap() {
                let chi = engine.character(&p).unwrap();
                assert_eq!(chi.rank(), rat_int(d));
            }
        }
    }
}
