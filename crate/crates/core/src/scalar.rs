//! Scalar abstraction and error-free floating point building blocks.
//!
//! Everything numeric in the crate is generic over [`Scalar`], which is
//! implemented for `f32` and `f64`. Accumulations go through [`Compensated`]
//! (a double-word accumulator) so that results do not depend on how a sum was
//! split into chunks beyond the documented reduction order.

use std::fmt::{Debug, Display};
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating point types the statistics can be evaluated in.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Debug + Display + FromStr + Default + Send + Sync + 'static
{
    /// Short type name written into report metadata.
    const NAME: &'static str;

    /// Converts an `f64` literal, rounding to nearest.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("f64 is representable in every Scalar")
    }

    /// Converts a count. Counts above the mantissa width round to nearest.
    fn of_count(n: u64) -> Self {
        Self::from_u64(n).expect("u64 is representable in every Scalar")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("Scalar always converts to f64")
    }

    fn half() -> Self {
        Self::of(0.5)
    }
}

impl Scalar for f32 {
    const NAME: &'static str = "f32";
}

impl Scalar for f64 {
    const NAME: &'static str = "f64";
}

/// Reduces a real value onto the circle `[0, 1)` by subtracting its floor.
///
/// A result that rounds up to exactly `1` is the same circle point as `0`
/// and is returned as `0`.
pub fn wrap_unit<T: Scalar>(v: T) -> T {
    let r = v - v.floor();
    if r >= T::one() {
        T::zero()
    } else {
        r
    }
}

#[inline]
pub(crate) fn two_sum<T: Scalar>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let bb = s - a;
    let e = (a - (s - bb)) + (b - bb);
    (s, e)
}

#[inline]
fn fast_two_sum<T: Scalar>(a: T, b: T) -> (T, T) {
    let s = a + b;
    let e = b - (s - a);
    (s, e)
}

#[inline]
pub(crate) fn two_prod<T: Scalar>(a: T, b: T) -> (T, T) {
    let p = a * b;
    let e = a.mul_add(b, -p);
    (p, e)
}

/// Double-word accumulator: the value is `hi + lo` with `|lo| <= ulp(hi)/2`.
///
/// Addition of plain values and of other accumulators is compensated, so a
/// long sum of same-signed terms is accurate to a few units in the last place
/// of the result regardless of its length.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Compensated<T> {
    hi: T,
    lo: T,
}

impl<T: Scalar> Compensated<T> {
    pub fn zero() -> Self {
        Self {
            hi: T::zero(),
            lo: T::zero(),
        }
    }

    pub fn new(v: T) -> Self {
        Self {
            hi: v,
            lo: T::zero(),
        }
    }

    /// Exact product of two scalars as a double word.
    pub fn product(a: T, b: T) -> Self {
        let (hi, lo) = two_prod(a, b);
        Self { hi, lo }
    }

    pub fn value(self) -> T {
        self.hi + self.lo
    }

    pub fn add_value(&mut self, v: T) {
        let (s, e) = two_sum(self.hi, v);
        let (hi, lo) = fast_two_sum(s, e + self.lo);
        self.hi = hi;
        self.lo = lo;
    }
}

impl<T: Scalar> Neg for Compensated<T> {
    type Output = Self;

    fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl<T: Scalar> Add for Compensated<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        let (s, e) = two_sum(self.hi, rhs.hi);
        let (t, f) = two_sum(self.lo, rhs.lo);
        let (s, e) = fast_two_sum(s, e + t);
        let (hi, lo) = fast_two_sum(s, e + f);
        Self { hi, lo }
    }
}

impl<T: Scalar> Sub for Compensated<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + -rhs
    }
}

impl<T: Scalar> AddAssign<T> for Compensated<T> {
    fn add_assign(&mut self, rhs: T) {
        self.add_value(rhs);
    }
}

impl<T: Scalar> AddAssign for Compensated<T> {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

/// Compensated sum of an iterator of scalars.
pub fn compensated_sum<T: Scalar, I: IntoIterator<Item = T>>(items: I) -> T {
    let mut acc = Compensated::zero();
    for v in items {
        acc += v;
    }
    acc.value()
}

/// Combines per-chunk partial results as a balanced binary tree, left to right.
///
/// The shape of the tree depends only on `parts.len()`, so the result is
/// independent of how the parts were produced.
pub(crate) fn pairwise_reduce<A: Copy>(
    parts: &[A],
    zero: A,
    combine: impl Fn(A, A) -> A + Copy,
) -> A {
    match parts.len() {
        0 => zero,
        1 => parts[0],
        n => {
            let mid = n / 2;
            combine(
                pairwise_reduce(&parts[..mid], zero, combine),
                pairwise_reduce(&parts[mid..], zero, combine),
            )
        }
    }
}
