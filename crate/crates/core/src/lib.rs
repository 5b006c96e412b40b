//! Rigorous numerics for scalar-curvature rigidity thresholds on geodesic
//! balls in the round sphere.
//!
//! The crate computes the dimension-dependent threshold constants governing
//! when a geodesic ball B(δ) ⊂ Sⁿ is rigid under scalar-curvature and
//! mean-curvature comparison, certifies the key inequalities with interval
//! arithmetic, and numerically verifies the integral identities the
//! estimates rest on. Everything is generic over the scalar type through
//! [`Real`] (implemented for `f64` and `f32`); concrete aliases for the
//! common `f64` instantiations live at the crate root.

pub mod certify;
pub mod cli;
pub mod eigen;
pub mod error;
pub mod geometry;
pub mod interval;
mod ode;
pub mod quadrature;
pub mod real;
pub mod roots;
pub mod thresholds;
pub mod verify;

pub use error::{Error, Result};
pub use geometry::Dimension;
pub use real::Real;

/// `f64` interval.
pub type Interval64 = interval::Interval<f64>;
/// `f32` interval.
pub type Interval32 = interval::Interval<f32>;
/// `f64` ball geometry.
pub type BallGeometry64 = geometry::BallGeometry<f64>;
/// `f64` eigenvalue result.
pub type EigenResult64 = eigen::EigenResult<f64>;
/// `f64` threshold table row.
pub type ThresholdRecord64 = thresholds::ThresholdRecord<f64>;
/// `f64` positivity certificate.
pub type CertificateReport64 = certify::CertificateReport<f64>;
