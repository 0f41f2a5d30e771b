//! Scalar abstraction so the whole pipeline runs over `f32` or `f64`.

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating scalar used throughout the crate.
pub trait Scalar:
    Float
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + std::iter::Sum<Self>
    + std::fmt::Debug
    + std::fmt::Display
    + Default
    + Send
    + Sync
    + 'static
{
}

impl<T> Scalar for T where
    T: Float
        + NumAssign
        + FromPrimitive
        + ToPrimitive
        + std::iter::Sum<Self>
        + std::fmt::Debug
        + std::fmt::Display
        + Default
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` constant into `T`, saturating denormals to zero for
/// narrower types.
pub fn cast<T: Scalar>(x: f64) -> T {
    T::from_f64(x).unwrap_or_else(T::zero)
}

/// Dot product accumulated in `f64` regardless of `T`, fixed
/// left-to-right order.
pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    let mut acc = 0.0f64;
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x.to_f64().unwrap_or(f64::NAN) * y.to_f64().unwrap_or(f64::NAN);
    }
    cast(acc)
}

/// Max-magnitude entry of a vector.
pub fn inf_norm<T: Scalar>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, &x| m.max(x.abs()))
}
