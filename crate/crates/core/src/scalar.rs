//! Minimal numeric abstraction so the same energy code runs on `f64` and on
//! exact rationals.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::ops::{Add, Div, Mul, Sub};

pub trait Scalar:
    Clone
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + std::fmt::Debug
{
    fn frac(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    fn powi(base: Self, exp: usize) -> Self {
        let mut acc = Self::one();
        for _ in 0..exp {
            acc = acc * base.clone();
        }
        acc
    }
}

impl Scalar for f64 {
    fn frac(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn powi(base: Self, exp: usize) -> Self {
        base.powi(exp as i32)
    }
}

impl Scalar for BigRational {
    fn frac(num: i64, den: i64) -> Self {
        BigRational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        num_traits::ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::frac(num, den)
}
