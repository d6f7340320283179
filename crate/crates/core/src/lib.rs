//! Walk-on-spheres and deterministic quadrature solvers for the fractional
//! Poisson problem (−Δ)ˢu = f in Ω, u = g on ℝⁿ∖Ω.

pub mod error;
pub mod fields;
pub mod geometry;
pub mod integrate;
pub mod kernels;
pub mod quadrature;
pub mod sampling;
pub mod specfun;
pub mod summation;
pub mod theory;
pub mod wos;

pub use error::{Error, Result};
pub use fields::{Field, FieldSpec, ScalarField};
pub use geometry::{Domain, Point};
pub use sampling::RngStream;
pub use wos::{estimate, run_walk, EstimatorSummary, ProblemSpec, WalkResult};
