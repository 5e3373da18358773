//! Numerical toolkit for conformal invariants of explicit four-dimensional
//! metrics.
//!
//! The pipeline runs from a coordinate chart presentation of a metric to
//! pointwise curvature, its self-dual/anti-self-dual splitting, integrated
//! invariants (volume, Euler characteristic, Weyl energies, normalized
//! quotients), a projected-gradient minimizer for the modified conformal
//! functional, and connected-sum constructions with neck profiles.
//!
//! All pointwise computation is generic over the scalar type through
//! [`scalar::Real`]; `f64` is the working precision and the type aliases at
//! the crate root fix it for the common structs.

pub mod chart;
pub mod curvature;
pub mod decomp;
pub mod error;
pub mod expr;
pub mod gluing;
pub mod grid;
pub mod jet;
pub mod linalg;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod yamabe;

pub use error::{Error, Result};

/// Metric jet at working precision.
pub type Jet = jet::MetricJet<f64>;
/// Pointwise curvature at working precision.
pub type Curvature = curvature::CurvaturePoint<f64>;
/// Two-form splitting at working precision.
pub type Blocks = decomp::CurvatureBlocks<f64>;
