//! Scalar abstraction for the analytic layer.
//!
//! Everything that is plain real arithmetic — the measure functions of the
//! Schmidt parameter, triangle geometry, convexity diagnostics — is generic
//! over [`Real`] so it runs at `f32` or `f64`. The linear-algebra state layer
//! (complex amplitudes, eigen-solves) is fixed at `f64`; see the type aliases
//! at the crate root.

use num_traits::{Float, FloatConst, NumAssignOps};
use std::fmt::{Debug, Display};

pub trait Real: Float + FloatConst + NumAssignOps + Debug + Display + 'static {
    /// Lossy conversion from an `f64` literal.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from(x).expect("f64 literal must convert into the scalar type")
    }

    #[inline]
    fn two() -> Self {
        Self::of(2.0)
    }

    #[inline]
    fn half() -> Self {
        Self::of(0.5)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl<T> Real for T where T: Float + FloatConst + NumAssignOps + Debug + Display + 'static {}
