//! Scalar abstraction for the numerical kernels.
//!
//! The linear-algebra and finite-difference layers are generic over any
//! floating-point field implementing [`Scalar`]; the geometric pipeline uses
//! the `f64` aliases exported at the crate root. Exact computations on
//! tabulated data use [`crate::surd::Surd`] instead, which is a field but not
//! a `Scalar`.

use num_traits::FromPrimitive;

/// Floating-point field with the operations the numerical kernels need.
pub trait Scalar: nalgebra::RealField + FromPrimitive + Copy {
    /// Lossy conversion from `f64`, used to inject step sizes and tolerances.
    fn from_f64_lossy(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 converts into any Scalar")
    }

    /// Lossy conversion to `f64`, used for norms and diagnostics.
    fn to_f64_lossy(self) -> f64;
}

impl Scalar for f32 {
    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

impl Scalar for f64 {
    fn to_f64_lossy(self) -> f64 {
        self
    }
}
