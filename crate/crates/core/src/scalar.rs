//! Numeric abstraction shared by every measure in the crate.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive};

/// Floating-point type the rate model and the measures are generic over.
///
/// Implemented for `f32` and `f64`. The corrected Gini coefficient is looser
/// and also accepts exact rationals, see [`crate::metrics::gini`].
pub trait Scalar:
    Float
    + FromPrimitive
    + FromStr
    + Display
    + Debug
    + Default
    + Send
    + Sync
    + serde::Serialize
    + 'static
{
    #[inline]
    fn lit(v: f64) -> Self {
        Self::from_f64(v).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl<T> Scalar for T where
    T: Float
        + FromPrimitive
        + FromStr
        + Display
        + Debug
        + Default
        + Send
        + Sync
        + serde::Serialize
        + 'static
{
}
