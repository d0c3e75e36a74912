//! Floating-point scalar abstraction for the data path and model weights.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Scalar type feature vectors, model weights and decision values are
/// computed in. Hyperparameters and reported statistics stay `f64`.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Convert an `f64` constant or hyperparameter into the scalar type.
    #[inline]
    fn cast(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 must convert into the scalar type")
    }

    /// Widen to `f64` for statistics and reporting.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar must widen to f64")
    }
}

impl<T> Scalar for T where
    T: Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
}

/// `x·y` over two equally sized slices.
pub(crate) fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(S::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Squared Euclidean distance between two equally sized slices.
pub(crate) fn squared_distance<S: Scalar>(a: &[S], b: &[S]) -> S {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(S::zero(), |acc, (&x, &y)| {
        let d = x - y;
        acc + d * d
    })
}

/// Numerically stable logistic sigmoid.
pub(crate) fn sigmoid<S: Scalar>(z: S) -> S {
    if z >= S::zero() {
        S::one() / (S::one() + (-z).exp())
    } else {
        let e = z.exp();
        e / (S::one() + e)
    }
}

/// Numerically stable `ln(1 + e^t)`.
pub(crate) fn softplus<S: Scalar>(t: S) -> S {
    let cap = S::cast(30.0);
    if t > cap {
        t
    } else if t < -cap {
        t.exp()
    } else {
        (S::one() + t.exp()).ln()
    }
}
