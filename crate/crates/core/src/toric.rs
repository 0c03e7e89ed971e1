//! Nonsingular projective toric 3-folds as fixed-point/edge data with
//! equivariant weights, curve classes, and validation. Ships a built-in
//! catalog (`p3`, `p1xp2`, `p1p1p1`) and a JSON ingestion path.

use crate::exact::Weight;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Index into `ToricThreefold::points`.
pub type PointId = usize;
/// Index into `ToricThreefold::edges`.
pub type EdgeId = usize;

/// A torus-fixed point with the three tangent weights of the 3-fold.
#[derive(Clone, Debug)]
pub struct FixedPoint {
    pub id: String,
    pub tangent_weights: [Weight; 3],
}

/// A torus-invariant curve joining two fixed points.
///
/// `u0` is the weight of the local coordinate function along the curve at
/// `p` (the negative of the tangent weight along the curve). The normal
/// bundle splits equivariantly with fiber weights `nu` at `p` and the
/// matched `nu_prime` at `p_prime`; the degrees `m = (m1, m2)` satisfy
/// `nu_prime[i] - nu[i] = m[i] * u0`.
#[derive(Clone, Debug)]
pub struct Edge {
    pub p: PointId,
    pub p_prime: PointId,
    pub u0: Weight,
    pub nu: [Weight; 2],
    pub nu_prime: [Weight; 2],
    pub m: [i64; 2],
    pub class: CurveClass,
}

impl Edge {
    /// The same curve seen from the other endpoint.
    pub fn reversed(&self) -> Edge {
        Edge {
            p: self.p_prime,
            p_prime: self.p,
            u0: -self.u0,
            nu: self.nu_prime,
            nu_prime: self.nu,
            m: self.m,
            class: self.class.clone(),
        }
    }
}

/// Element of H_2(X, Z) in the fixed basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CurveClass(pub Vec<i64>);

impl CurveClass {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn scaled(&self, k: i64) -> CurveClass {
        CurveClass(self.0.iter().map(|c| c * k).collect())
    }

    fn sub_checked(&self, other: &CurveClass, k: i64) -> Option<CurveClass> {
        let out: Vec<i64> = self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a - b * k)
            .collect();
        if out.iter().all(|&c| c >= 0) {
            Some(CurveClass(out))
        } else {
            None
        }
    }
}

/// Validated toric geometry.
#[derive(Clone, Debug)]
pub struct ToricThreefold {
    pub id: String,
    pub h2_rank: usize,
    /// Degree of c1(X) on each basis class of H_2.
    pub c1_degrees: Vec<i64>,
    pub points: Vec<FixedPoint>,
    pub edges: Vec<Edge>,
}

#[derive(Debug, Error)]
pub enum ToricError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("validation failed on edge {edge}: {rule}")]
    Validation { edge: String, rule: String },
    #[error("unknown catalog geometry {0:?} (expected p3, p1xp2 or p1p1p1)")]
    UnknownCatalog(String),
    #[error("curve class is zero")]
    ZeroClass,
}

// ---------------------------------------------------------------------------
// JSON schema

#[derive(Serialize, Deserialize)]
struct JsonGeometry {
    h2_rank: usize,
    c1_degrees: Vec<i64>,
    fixed_points: Vec<JsonPoint>,
    edges: Vec<JsonEdge>,
}

#[derive(Serialize, Deserialize)]
struct JsonPoint {
    id: String,
    tangent_weights: [[i64; 3]; 3],
}

#[derive(Serialize, Deserialize)]
struct JsonEdge {
    p: String,
    pprime: String,
    u0: [i64; 3],
    nu: [[i64; 3]; 2],
    nuprime: [[i64; 3]; 2],
    class: Vec<i64>,
}

impl ToricThreefold {
    /// Load a geometry from a catalog id or a JSON document and run the
    /// full validation pass.
    pub fn load_and_validate(source: &str) -> Result<ToricThreefold, ToricError> {
        let x = match source.trim_start().starts_with('{') {
            true => Self::from_json(source, "json")?,
            false => catalog(source)?,
        };
        x.validate()?;
        Ok(x)
    }

    pub fn from_json(text: &str, id: &str) -> Result<ToricThreefold, ToricError> {
        let g: JsonGeometry =
            serde_json::from_str(text).map_err(|e| ToricError::Parse(e.to_string()))?;
        let mut points = Vec::new();
        for p in &g.fixed_points {
            points.push(FixedPoint {
                id: p.id.clone(),
                tangent_weights: [
                    Weight(p.tangent_weights[0]),
                    Weight(p.tangent_weights[1]),
                    Weight(p.tangent_weights[2]),
                ],
            });
        }
        let find = |name: &str| -> Result<PointId, ToricError> {
            points
                .iter()
                .position(|p| p.id == name)
                .ok_or_else(|| ToricError::Parse(format!("unknown fixed point id {name:?}")))
        };
        let mut edges = Vec::new();
        for e in &g.edges {
            if e.class.len() != g.h2_rank {
                return Err(ToricError::Parse(format!(
                    "edge class length {} does not match h2_rank {}",
                    e.class.len(),
                    g.h2_rank
                )));
            }
            let u0 = Weight(e.u0);
            let nu = [Weight(e.nu[0]), Weight(e.nu[1])];
            let nu_prime = [Weight(e.nuprime[0]), Weight(e.nuprime[1])];
            let mut m = [0i64; 2];
            for i in 0..2 {
                m[i] = (nu_prime[i] - nu[i]).ratio_over(&u0).unwrap_or(0);
            }
            edges.push(Edge {
                p: find(&e.p)?,
                p_prime: find(&e.pprime)?,
                u0,
                nu,
                nu_prime,
                m,
                class: CurveClass(e.class.clone()),
            });
        }
        if g.c1_degrees.len() != g.h2_rank {
            return Err(ToricError::Parse(
                "c1_degrees length does not match h2_rank".into(),
            ));
        }
        Ok(ToricThreefold {
            id: id.to_string(),
            h2_rank: g.h2_rank,
            c1_degrees: g.c1_degrees,
            points,
            edges,
        })
    }

    pub fn to_json(&self) -> String {
        let g = JsonGeometry {
            h2_rank: self.h2_rank,
            c1_degrees: self.c1_degrees.clone(),
            fixed_points: self
                .points
                .iter()
                .map(|p| JsonPoint {
                    id: p.id.clone(),
                    tangent_weights: [
                        p.tangent_weights[0].0,
                        p.tangent_weights[1].0,
                        p.tangent_weights[2].0,
                    ],
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| JsonEdge {
                    p: self.points[e.p].id.clone(),
                    pprime: self.points[e.p_prime].id.clone(),
                    u0: e.u0.0,
                    nu: [e.nu[0].0, e.nu[1].0],
                    nuprime: [e.nu_prime[0].0, e.nu_prime[1].0],
                    class: e.class.0.clone(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&g).expect("geometry serializes")
    }

    pub fn validate(&self) -> Result<(), ToricError> {
        for p in &self.points {
            let w = &p.tangent_weights;
            for i in 0..3 {
                if w[i].is_zero() {
                    return Err(ToricError::Validation {
                        edge: p.id.clone(),
                        rule: "tangent weight is zero".into(),
                    });
                }
                for j in (i + 1)..3 {
                    if w[i].parallel_to(&w[j]) {
                        return Err(ToricError::Validation {
                            edge: p.id.clone(),
                            rule: "tangent weights not pairwise independent".into(),
                        });
                    }
                }
            }
        }
        for (idx, e) in self.edges.iter().enumerate() {
            let name = self.edge_name(idx);
            if e.p >= self.points.len() || e.p_prime >= self.points.len() {
                return Err(ToricError::Validation {
                    edge: name,
                    rule: "endpoint does not exist".into(),
                });
            }
            if e.u0.is_zero() {
                return Err(ToricError::Validation {
                    edge: name,
                    rule: "u0 is zero".into(),
                });
            }
            // nu_prime[i] - nu[i] must be an integer multiple of u0
            for i in 0..2 {
                match (e.nu_prime[i] - e.nu[i]).ratio_over(&e.u0) {
                    Some(k) if k == e.m[i] => {}
                    _ => {
                        return Err(ToricError::Validation {
                            edge: name,
                            rule: format!("nu'[{i}] - nu[{i}] is not m*u0"),
                        });
                    }
                }
            }
            // -u0 is a tangent weight at p, u0 at p'
            let tw_p = &self.points[e.p].tangent_weights;
            if !tw_p.contains(&-e.u0) {
                return Err(ToricError::Validation {
                    edge: name,
                    rule: "-u0 is not a tangent weight at p".into(),
                });
            }
            let tw_pp = &self.points[e.p_prime].tangent_weights;
            if !tw_pp.contains(&e.u0) {
                return Err(ToricError::Validation {
                    edge: name,
                    rule: "u0 is not a tangent weight at p'".into(),
                });
            }
            // the normal fibers are the remaining tangent directions
            let mut rest_p: Vec<Weight> =
                tw_p.iter().copied().filter(|w| *w != -e.u0).collect();
            let mut nus = e.nu.to_vec();
            rest_p.sort();
            nus.sort();
            if rest_p != nus {
                return Err(ToricError::Validation {
                    edge: name,
                    rule: "nu does not match the normal tangent weights at p".into(),
                });
            }
            let mut rest_pp: Vec<Weight> =
                tw_pp.iter().copied().filter(|w| *w != e.u0).collect();
            let mut nups = e.nu_prime.to_vec();
            rest_pp.sort();
            nups.sort();
            if rest_pp != nups {
                return Err(ToricError::Validation {
                    edge: name,
                    rule: "nu' does not match the normal tangent weights at p'".into(),
                });
            }
            // degree pairing: int_{[C_e]} c1(X) = m1 + m2 + 2
            let deg = self.pair_c1(&e.class);
            if deg != e.m[0] + e.m[1] + 2 {
                return Err(ToricError::Validation {
                    edge: name,
                    rule: format!("c1-degree {} != m1 + m2 + 2 = {}", deg, e.m[0] + e.m[1] + 2),
                });
            }
        }
        Ok(())
    }

    pub fn edge_name(&self, idx: EdgeId) -> String {
        let e = &self.edges[idx];
        format!(
            "{}--{}",
            self.points
                .get(e.p)
                .map(|p| p.id.as_str())
                .unwrap_or("?"),
            self.points
                .get(e.p_prime)
                .map(|p| p.id.as_str())
                .unwrap_or("?")
        )
    }

    fn pair_c1(&self, beta: &CurveClass) -> i64 {
        beta.0
            .iter()
            .zip(&self.c1_degrees)
            .map(|(b, d)| b * d)
            .sum()
    }

    /// Virtual dimension `d = int_beta c1(X)`.
    pub fn virtual_dimension(&self, beta: &CurveClass) -> Result<i64, ToricError> {
        if beta.is_zero() {
            return Err(ToricError::ZeroClass);
        }
        Ok(self.pair_c1(beta))
    }

    /// All ways to write `beta = sum k_e [C_e]` with `k_e >= 1` over
    /// subsets of edges. Each decomposition is a sorted list of
    /// `(edge, multiplicity)` with distinct edges.
    pub fn decompose_class(&self, beta: &CurveClass) -> Result<Vec<Vec<(EdgeId, u32)>>, ToricError> {
        if beta.is_zero() {
            return Err(ToricError::ZeroClass);
        }
        let mut out = Vec::new();
        let mut current = Vec::new();
        self.decompose_rec(beta.clone(), 0, &mut current, &mut out);
        Ok(out)
    }

    fn decompose_rec(
        &self,
        remaining: CurveClass,
        from: EdgeId,
        current: &mut Vec<(EdgeId, u32)>,
        out: &mut Vec<Vec<(EdgeId, u32)>>,
    ) {
        if remaining.is_zero() {
            out.push(current.clone());
            return;
        }
        for e in from..self.edges.len() {
            let class = &self.edges[e].class;
            if class.is_zero() {
                continue;
            }
            let mut k = 1i64;
            while let Some(rest) = remaining.sub_checked(class, k) {
                current.push((e, k as u32));
                self.decompose_rec(rest, e + 1, current, out);
                current.pop();
                k += 1;
            }
        }
    }

    /// Geometry with all torus parameters relabeled by `perm`.
    pub fn permuted(&self, perm: &[usize; 3]) -> ToricThreefold {
        let mut x = self.clone();
        for p in &mut x.points {
            for w in &mut p.tangent_weights {
                *w = w.permuted(perm);
            }
        }
        for e in &mut x.edges {
            e.u0 = e.u0.permuted(perm);
            for w in &mut e.nu {
                *w = w.permuted(perm);
            }
            for w in &mut e.nu_prime {
                *w = w.permuted(perm);
            }
        }
        x
    }

    /// Named curve classes accepted on the command line.
    pub fn class_aliases(&self) -> Vec<(&'static str, CurveClass)> {
        match self.id.as_str() {
            "p3" => vec![("line", CurveClass(vec![1]))],
            "p1xp2" => vec![
                ("fiber", CurveClass(vec![1, 0])),
                ("line", CurveClass(vec![0, 1])),
            ],
            "p1p1p1" => vec![
                ("e1", CurveClass(vec![1, 0, 0])),
                ("e2", CurveClass(vec![0, 1, 0])),
                ("e3", CurveClass(vec![0, 0, 1])),
            ],
            _ => Vec::new(),
        }
    }
}

// ---------------------------------------------------------------------------
// Built-in catalog

/// A catalog geometry by id: `p3`, `p1xp2` or `p1p1p1`.
pub fn catalog(id: &str) -> Result<ToricThreefold, ToricError> {
    match id {
        "p3" => Ok(build_p3()),
        "p1xp2" => Ok(build_p1xp2()),
        "p1p1p1" => Ok(build_p1p1p1()),
        other => Err(ToricError::UnknownCatalog(other.to_string())),
    }
}

pub const CATALOG_IDS: [&str; 3] = ["p3", "p1xp2", "p1p1p1"];

fn basis(i: usize) -> Weight {
    let mut w = [0i64; 3];
    w[i] = 1;
    Weight(w)
}

/// Product of projective spaces: each factor is a list of vertex
/// characters; fixed points are tuples of vertices, invariant curves
/// change one vertex in one factor.
fn product_geometry(
    id: &str,
    factors: &[Vec<Weight>],
    c1_degrees: Vec<i64>,
) -> ToricThreefold {
    let mut tuples: Vec<Vec<usize>> = vec![vec![]];
    for f in factors {
        let mut next = Vec::new();
        for t in &tuples {
            for v in 0..f.len() {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        tuples = next;
    }
    let mut points = Vec::new();
    for t in &tuples {
        let mut tw = Vec::new();
        for (fi, f) in factors.iter().enumerate() {
            for v in 0..f.len() {
                if v != t[fi] {
                    tw.push(f[v] - f[t[fi]]);
                }
            }
        }
        assert_eq!(tw.len(), 3);
        points.push(FixedPoint {
            id: format!("v{}", t.iter().map(|v| v.to_string()).collect::<String>()),
            tangent_weights: [tw[0], tw[1], tw[2]],
        });
    }
    let index_of = |t: &[usize]| -> usize {
        tuples.iter().position(|u| u == t).unwrap()
    };
    let mut edges = Vec::new();
    for (pi, t) in tuples.iter().enumerate() {
        for (fi, f) in factors.iter().enumerate() {
            for v in (t[fi] + 1)..f.len() {
                let mut t2 = t.clone();
                t2[fi] = v;
                let pj = index_of(&t2);
                // coordinate weight along the curve at p: a_p - a_p'
                let u0 = f[t[fi]] - f[v];
                // normal fibers: tangent weights in the other directions
                let mut nu = Vec::new();
                let mut nu_prime = Vec::new();
                for (gi, g) in factors.iter().enumerate() {
                    for w in 0..g.len() {
                        if gi == fi {
                            if w != t[fi] && w != v {
                                nu.push(g[w] - g[t[fi]]);
                                nu_prime.push(g[w] - g[v]);
                            }
                        } else if w != t[gi] {
                            nu.push(g[w] - g[t[gi]]);
                            nu_prime.push(g[w] - g[t[gi]]);
                        }
                    }
                }
                assert_eq!(nu.len(), 2);
                let mut m = [0i64; 2];
                for i in 0..2 {
                    m[i] = (nu_prime[i] - nu[i]).ratio_over(&u0).expect("integer degree");
                }
                let mut class = vec![0i64; c1_degrees.len()];
                class[fi] = 1;
                edges.push(Edge {
                    p: pi,
                    p_prime: pj,
                    u0,
                    nu: [nu[0], nu[1]],
                    nu_prime: [nu_prime[0], nu_prime[1]],
                    m,
                    class: CurveClass(class),
                });
            }
        }
    }
    ToricThreefold {
        id: id.to_string(),
        h2_rank: c1_degrees.len(),
        c1_degrees,
        points,
        edges,
    }
}

fn build_p3() -> ToricThreefold {
    let verts = vec![Weight::ZERO, basis(0), basis(1), basis(2)];
    product_geometry("p3", &[verts], vec![4])
}

fn build_p1xp2() -> ToricThreefold {
    let p1 = vec![Weight::ZERO, basis(0)];
    let p2 = vec![Weight::ZERO, basis(1), basis(2)];
    product_geometry("p1xp2", &[p1, p2], vec![2, 3])
}

fn build_p1p1p1() -> ToricThreefold {
    let f = |i| vec![Weight::ZERO, basis(i)];
    product_geometry("p1p1p1", &[f(0), f(1), f(2)], vec![2, 2, 2])
}
