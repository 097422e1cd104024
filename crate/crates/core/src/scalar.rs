//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Real field the linear algebra is generic over (`f32` or `f64`).
///
/// The tolerances scale with the precision of the type: `f64` uses the
/// `1e-9` threshold for normalization, orthogonality and Schmidt rank, and
/// `1e-12` for pruning vanishing protocol branches.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + Serialize
    + DeserializeOwned
    + 'static
{
    /// Threshold for normalization, orthogonality, Hermiticity and rank.
    fn tolerance() -> Self;
    /// Branch probability below which a protocol branch is dropped.
    fn prune_threshold() -> Self;
    /// Convergence threshold for the Jacobi sweeps.
    fn jacobi_epsilon() -> Self;

    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }

    #[inline]
    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("count representable in scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f64 {
    fn tolerance() -> Self {
        1e-9
    }
    fn prune_threshold() -> Self {
        1e-12
    }
    fn jacobi_epsilon() -> Self {
        1e-15
    }
}

impl Real for f32 {
    fn tolerance() -> Self {
        1e-4
    }
    fn prune_threshold() -> Self {
        1e-6
    }
    fn jacobi_epsilon() -> Self {
        1e-7
    }
}

/// Complex amplitude over a [`Real`] field.
pub type C<T> = Complex<T>;

#[inline]
pub(crate) fn c<T: Real>(re: T, im: T) -> C<T> {
    Complex::new(re, im)
}

#[inline]
pub(crate) fn cr<T: Real>(re: T) -> C<T> {
    Complex::new(re, T::zero())
}

#[inline]
pub(crate) fn czero<T: Real>() -> C<T> {
    Complex::new(T::zero(), T::zero())
}

#[inline]
pub(crate) fn cone<T: Real>() -> C<T> {
    Complex::new(T::one(), T::zero())
}
