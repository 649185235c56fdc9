//! Scalar abstractions shared by every numeric module.
//!
//! [`Scalar`] is the minimal field-like interface: enough for Bernstein
//! arithmetic, the dual coefficient recurrence and the band solver. It is
//! implemented for `f32`, `f64` and the exact [`BigRational`] type.
//! [`Real`] adds the transcendental operations needed by quadrature,
//! expression evaluation and the iteration itself.

use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone + Debug + PartialOrd + Num + Signed + FromPrimitive + ToPrimitive + Send + Sync + 'static
{
    /// Pivots whose magnitude is at or below this fraction of the matrix
    /// scale are treated as zero by the band solver.
    fn pivot_tolerance() -> Self;

    fn is_finite_value(&self) -> bool;

    /// Best-effort conversion for diagnostics; never fails.
    fn to_f64_lossy(&self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn pivot_tolerance() -> Self {
        1e-13
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for f32 {
    fn pivot_tolerance() -> Self {
        1e-6
    }

    fn is_finite_value(&self) -> bool {
        self.is_finite()
    }
}

impl Scalar for BigRational {
    fn pivot_tolerance() -> Self {
        BigRational::zero()
    }

    fn is_finite_value(&self) -> bool {
        true
    }
}

/// Floating-point scalars usable by the full solver.
pub trait Real: Scalar + Float {}

impl<T: Scalar + Float> Real for T {}

/// Converts a small integer into the scalar type.
pub(crate) fn int<T: Scalar>(v: i64) -> T {
    T::from_i64(v).expect("integer not representable in scalar type")
}

pub(crate) fn from_f64<T: Scalar>(v: f64) -> T {
    T::from_f64(v).expect("value not representable in scalar type")
}

/// Exact rational from an `f64`, for callers building rational inputs.
pub fn rational_from_f64(v: f64) -> Option<BigRational> {
    BigRational::from_float(v)
}

pub fn rational(numer: i64, denom: i64) -> BigRational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}
