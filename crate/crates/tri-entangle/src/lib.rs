//! Triangle relations, Heron-area measures, and LOCC diagnostics for genuine
//! tripartite entanglement.
//!
//! The analytic layer (measure catalogue, triangle geometry, convexity
//! machinery) is generic over the scalar type through [`scalar::Real`]; the
//! state layer (complex amplitudes, eigen-solves, covariance matrices) is
//! fixed at `f64`. The aliases below pin the common `f64` instantiations.

// `!(x > 0)` guards are deliberate: they reject NaN along with the
// out-of-range values, which `x <= 0` would silently accept.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod convexity;
pub mod error;
pub mod gaussian;
pub mod geometry;
pub mod hybrid;
pub mod locc;
pub mod measures;
pub mod random;
pub mod roof;
pub mod scalar;
pub mod states;
pub mod suites;

pub use error::{Error, Result};

/// `f64` instantiations of the generic analytic types.
pub type MeasureKind = measures::MeasureKind<f64>;
pub type MeasureSpec = measures::MeasureSpec<f64>;
pub type BipartitionVector = measures::BipartitionVector<f64>;
pub type TriangleReport = geometry::TriangleReport<f64>;
pub type TriangleCheck = geometry::TriangleCheck<f64>;
pub type HessianReport = geometry::HessianReport<f64>;
pub type ConvexityInterval = convexity::ConvexityInterval<f64>;
pub type ViolationProbe = convexity::ViolationProbe<f64>;
pub type Case2Profile = convexity::Case2Profile<f64>;

pub use gaussian::{GaussianCovariance, GaussianRelationsReport};
pub use geometry::{HessianCoordinates, TriangleClass};
pub use hybrid::HybridState;
pub use locc::{Case2Violation, Case3Search, LocalMeasurement, LoccOutcome, MeasurementParams, StandardFormState};
pub use states::{DensityOperator, PureState, SchmidtProfile};
pub use suites::{SuiteName, SuiteReport};
