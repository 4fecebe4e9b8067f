//! Scalar abstraction: the whole crate is generic over the working float type.
//!
//! Everything numeric is written against [`Float`], which is implemented for
//! `f32` and `f64`. The acceptance tolerances in this crate assume `f64`; the
//! `f32` instantiation exists for callers that trade accuracy for footprint.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{FloatConst, FromPrimitive, NumAssign, Signed};

/// Float scalar usable throughout the crate: `f32` or `f64`.
pub trait Float:
    num_traits::Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Signed
    + Sum
    + rustfft::FftNum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Shorthand for lossy conversion from an `f64` literal.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal convertible to scalar")
    }

    /// Lossy conversion from a usize (grid sizes, wavenumbers).
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize convertible to scalar")
    }
}

impl Float for f32 {}
impl Float for f64 {}
