//! Symbolic exterior calculus on time-extended space, applied to the
//! invariants of incompressible flows: symplectic structures carried by
//! frozen-in fields, the symmetry hierarchy they generate, helicity
//! densities, and Jacobi structures.
//!
//! Everything is exact symbolic differentiation followed by residual
//! sampling on a grid; numeric code is generic over [`Real`].

pub mod error;
pub mod expr;
pub mod fluid;
pub mod forms;
pub mod harness;
pub mod helicity;
pub mod jacobi;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::Real;

pub type Point = expr::Point4<f64>;
pub type Grid = forms::SampleGrid<f64>;
pub type Points = forms::PointSet<f64>;
pub type Residual = forms::ResidualNorm<f64>;
pub type Scenario = fluid::FlowScenario<f64>;
