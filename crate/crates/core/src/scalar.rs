//! Scalar abstraction shared by the kernels, the GP solver and the filter.
//!
//! `f64` is the fast path. [`Exact`] (arbitrary-precision rationals) is used
//! wherever the large-offset Wiener Gram matrices lose every significant digit
//! in floating point.

use std::fmt::Debug;
use std::ops::{AddAssign, DivAssign, MulAssign, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, Num, One, Signed, ToPrimitive, Zero};

pub use crate::double_double::DoubleDouble;

/// Exact rational scalar.
pub type Exact = BigRational;

pub trait Real:
    nalgebra::Scalar
    + Num
    + Signed
    + FromPrimitive
    + ToPrimitive
    + PartialOrd
    + AddAssign
    + SubAssign
    + MulAssign
    + DivAssign
    + Send
    + Sync
    + Debug
{
    /// True when arithmetic never rounds.
    const EXACT: bool;

    /// Converts an `f64` without rounding.
    fn from_f64_exact(x: f64) -> Self;

    fn to_f64_lossy(&self) -> f64;

    fn ratio(n: i64, d: i64) -> Self {
        Self::from_i64(n).expect("i64 fits") / Self::from_i64(d).expect("i64 fits")
    }

    fn int(n: i64) -> Self {
        Self::from_i64(n).expect("i64 fits")
    }

    /// Power of two closest to `1 / sqrt(|x|)`; one for exact types or zero input.
    fn balancing_scale(x: &Self) -> Self;

    fn powi(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = acc * self.clone();
        }
        acc
    }

    /// `sum_i a_i b_i`; inexact types use compensated summation.
    fn dot(a: &[Self], b: &[Self]) -> Self {
        a.iter().zip(b).fold(Self::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
    }

    fn max_of(a: Self, b: Self) -> Self {
        if a >= b {
            a
        } else {
            b
        }
    }

    fn min_of(a: Self, b: Self) -> Self {
        if a <= b {
            a
        } else {
            b
        }
    }
}

impl Real for f64 {
    const EXACT: bool = false;

    fn from_f64_exact(x: f64) -> Self {
        x
    }

    fn to_f64_lossy(&self) -> f64 {
        *self
    }

    fn balancing_scale(x: &Self) -> Self {
        let a = x.abs();
        if a == 0.0 || !a.is_finite() {
            return 1.0;
        }
        let e = (-0.5 * a.log2()).round() as i32;
        2f64.powi(e.clamp(-500, 500))
    }

    fn powi(&self, n: u32) -> Self {
        f64::powi(*self, n as i32)
    }

    /// Twice-working-precision dot product (Ogita, Rump and Oishi).
    fn dot(a: &[Self], b: &[Self]) -> Self {
        let mut s = 0.0f64;
        let mut c = 0.0f64;
        for (x, y) in a.iter().zip(b) {
            let p = x * y;
            let pe = x.mul_add(*y, -p);
            let t = s + p;
            let z = t - s;
            let se = (s - (t - z)) + (p - z);
            s = t;
            c += pe + se;
        }
        s + c
    }
}

impl Real for Exact {
    const EXACT: bool = true;

    fn from_f64_exact(x: f64) -> Self {
        assert!(x.is_finite(), "cannot represent {x} exactly");
        BigRational::from_float(x).expect("finite float")
    }

    fn to_f64_lossy(&self) -> f64 {
        // Scale into range first so huge numerators/denominators do not overflow.
        let n = self.numer();
        let d = self.denom();
        if n.is_zero() {
            return 0.0;
        }
        let shift = n.bits() as i64 - d.bits() as i64;
        let (n2, d2): (BigInt, BigInt) = if shift > 0 {
            (n.clone(), d.clone() << (shift as usize))
        } else {
            (n.clone() << ((-shift) as usize), d.clone())
        };
        // n2/d2 now lies in (1/2, 2); use 64 extra bits of precision.
        let q: BigInt = (n2 << 64usize) / d2;
        let mant = q.to_f64().unwrap_or(f64::NAN) / 2f64.powi(64);
        mant * 2f64.powf(shift as f64)
    }

    fn balancing_scale(_x: &Self) -> Self {
        Self::one()
    }
}

/// Converts a slice of `f64` into the scalar type without rounding.
pub fn lift<T: Real>(xs: &[f64]) -> Vec<T> {
    xs.iter().map(|&x| T::from_f64_exact(x)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_round_trip() {
        for x in [0.0, 1.0, -3.25, 1e-300, 7.123456789e200, 0.1] {
            let e = Exact::from_f64_exact(x);
            assert_eq!(e.to_f64_lossy(), x);
        }
    }

    #[test]
    fn compensated_dot_survives_cancellation() {
        let a = [1e16, 1.0, -1e16];
        let b = [1.0, 1.0, 1.0];
        assert_eq!(<f64 as Real>::dot(&a, &b), 1.0);
    }

    #[test]
    fn balancing_scale_is_power_of_two() {
        let s = f64::balancing_scale(&1e6);
        assert_eq!(s.log2().fract(), 0.0);
        assert!((s * s * 1e6 - 1.0).abs() < 1.0);
        assert_eq!(Exact::balancing_scale(&Exact::int(5)), Exact::one());
    }
}
