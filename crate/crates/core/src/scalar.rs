//! Real scalar abstraction shared by every numeric routine in the crate.
//!
//! Everything is written against [`Scalar`] so the same code runs in `f64`
//! (the reference precision, where the structural tolerances are `1e-12`)
//! and in `f32` (useful for smoke tests, with tolerances scaled to match).

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// A real floating-point scalar, `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute max-norm tolerance for structural checks (Hermiticity,
    /// positivity, completeness, unit trace).
    const STRUCTURAL_TOL: f64;
    /// Tolerance for spectral reconstructions (eigendecomposition, square root).
    const SPECTRAL_TOL: f64;
    /// Outcome probabilities at or below this are treated as impossible.
    const ZERO_PROBABILITY: f64;

    /// Converts an `f64` literal. Panics only if the value is not representable,
    /// which cannot happen for the finite constants used in this crate.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn structural_tol() -> Self {
        Self::lit(Self::STRUCTURAL_TOL)
    }

    #[inline]
    fn spectral_tol() -> Self {
        Self::lit(Self::SPECTRAL_TOL)
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Square root of a quantity that is non-negative up to rounding.
    #[inline]
    fn sqrt_clamped(self) -> Self {
        self.max(Self::zero()).sqrt()
    }
}

impl Scalar for f64 {
    const STRUCTURAL_TOL: f64 = 1e-12;
    const SPECTRAL_TOL: f64 = 1e-10;
    const ZERO_PROBABILITY: f64 = 1e-15;
}

impl Scalar for f32 {
    const STRUCTURAL_TOL: f64 = 1e-5;
    const SPECTRAL_TOL: f64 = 1e-4;
    const ZERO_PROBABILITY: f64 = 1e-7;
}

/// Complex number over a [`Scalar`].
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn re<T: Scalar>(x: T) -> C<T> {
    Complex::new(x, T::zero())
}
