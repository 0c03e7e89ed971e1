//! Exact-arithmetic engine for Chern-number invariants of stable-pair
//! moduli spaces on nonsingular projective toric 3-folds.
//!
//! The pipeline: model a toric 3-fold as fixed-point/edge data
//! ([`toric`]), enumerate torus-fixed stable pairs and their virtual
//! tangent characters ([`deg1`], [`vertex`]), localize to exact rational
//! Chern numbers ([`localize`]), assemble partition functions and fit
//! rational functions ([`qseries`]), and convert Chern-number vectors to
//! cobordism classes over a point ([`cobordism`]). The [`descent`] module
//! is a symbolic layer expressing Chern characters of the virtual tangent
//! bundle in descendent operators.
//!
//! All computation is exact: arbitrary-precision rationals throughout,
//! no floating point anywhere.

pub mod cobordism;
pub mod deg1;
pub mod descent;
pub mod exact;
pub mod localize;
pub mod qseries;
pub mod toric;
pub mod vertex;

mod par;

pub use par::{map_ordered, map_ordered_seq};
