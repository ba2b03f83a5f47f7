//! A minimal field abstraction so rational-function evaluations (master
//! function, Bethe residuals, weight-function coefficients) run both over
//! exact Gaussian rationals and over fixed-precision complex floats.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::dyadic::CDyadic;
use crate::scalar::ExactScalar;

pub trait CoeffField:
    Clone
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_i64(n: i64) -> Self;

    fn pow_i64(&self, e: i64) -> Self {
        if e == 0 {
            return Self::one();
        }
        let base = if e < 0 {
            Self::one() / self.clone()
        } else {
            self.clone()
        };
        let mut acc = Self::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * b.clone();
            }
            b = b.clone() * b.clone();
            k >>= 1;
        }
        acc
    }
}

impl CoeffField for ExactScalar {
    fn from_i64(n: i64) -> Self {
        ExactScalar::from_int(n)
    }
}

impl Zero for CDyadic {
    fn zero() -> Self {
        CDyadic::zero()
    }
    fn is_zero(&self) -> bool {
        CDyadic::is_zero(self)
    }
}

impl One for CDyadic {
    fn one() -> Self {
        CDyadic::one()
    }
}

impl CoeffField for CDyadic {
    fn from_i64(n: i64) -> Self {
        CDyadic::from_int(n)
    }
}
