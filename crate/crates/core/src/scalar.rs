//! Scalar abstraction shared by the simulation and estimator code.
//!
//! Everything that touches measured intensities is generic over [`Scalar`],
//! so the same pipeline runs in `f32` for quick sweeps and in `f64` for the
//! reference results. Accumulators only need ring arithmetic ([`Field`]),
//! which lets the exhaustive oracle tests run them over exact rationals.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Exact or floating arithmetic sufficient for running sums and moments.
pub trait Field: Num + Copy + FromPrimitive + Debug + PartialOrd + Send + Sync + 'static {}

impl<T> Field for T where T: Num + Copy + FromPrimitive + Debug + PartialOrd + Send + Sync + 'static {}

/// Floating point scalar: `f32` or `f64`.
pub trait Scalar: Field + Float + ToPrimitive + Display + Default + Sum {
    /// Lossless-enough conversion from an `f64` configuration value.
    fn of(value: f64) -> Self {
        Self::from_f64(value).expect("f64 is representable in every float scalar")
    }

    fn of_usize(value: usize) -> Self {
        Self::from_usize(value).expect("usize is representable in every float scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("float scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
