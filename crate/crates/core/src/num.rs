//! Scalar abstraction shared by every solver.
//!
//! All of the physics and optimization code is written against [`Real`], so
//! the same routines run in `f32` or `f64`. Tolerance-sensitive paths (the
//! acceptance checks, the harness) use `f64`.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar used throughout the crate: `f32` or `f64`.
pub trait Real:
    Float + FloatConst + FromPrimitive + ToPrimitive + NumAssign + Sum + Default + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    /// Lossy conversion to `f64`, used for random draws and reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// Converts a count into this scalar type.
    #[inline]
    fn count(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Complex amplitude over the crate scalar.
pub type Cx<T> = Complex<T>;

/// Euclidean norm of a complex vector.
pub fn norm<T: Real>(v: &[Cx<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Unconjugated bilinear product `Σ a_n b_n`, the received amplitude of a
/// row channel `a` driven by weights `b`.
pub fn dot<T: Real>(a: &[Cx<T>], b: &[Cx<T>]) -> Cx<T> {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .fold(Cx::new(T::zero(), T::zero()), |acc, (x, y)| acc + *x * *y)
}

/// Shannon rate `log2(1 + snr)` in bits/s/Hz.
#[inline]
pub fn rate<T: Real>(snr: T) -> T {
    snr.ln_1p() / T::LN_2()
}

/// dBm → W.
#[inline]
pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

/// dB → linear ratio.
#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
