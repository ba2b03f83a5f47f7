//! Exact scalars: rationals and Gaussian rationals with big-integer parts.
//!
//! A single type covers both tiers of the tower. A scalar with zero
//! imaginary part behaves as a plain rational; arithmetic never rounds.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as DeError;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// An element of the Gaussian rationals Q(i), stored in lowest terms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    re: BigRational,
    im: BigRational,
}

impl ExactScalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        ExactScalar { re, im }
    }

    pub fn from_rational(re: BigRational) -> Self {
        ExactScalar {
            re,
            im: BigRational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// p/q as a real rational.
    pub fn ratio(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Self::from_rational(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        ExactScalar {
            re: BigRational::zero(),
            im: BigRational::one(),
        }
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ExactScalar {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// |z|^2 as an exact rational.
    pub fn abs_sq(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero scalar");
        let n = self.abs_sq();
        ExactScalar {
            re: &self.re / &n,
            im: -&self.im / &n,
        }
    }

    pub fn pow(&self, e: i64) -> Self {
        if e == 0 {
            return Self::one();
        }
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut acc = Self::one();
        let mut b = base;
        let mut k = e.unsigned_abs();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc * b.clone();
            }
            b = b.clone() * b;
            k >>= 1;
        }
        acc
    }

    /// An exact square root inside Q(i), when one exists.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(Self::zero());
        }
        if self.im.is_zero() {
            return if self.re.is_positive() {
                rational_sqrt(&self.re).map(Self::from_rational)
            } else {
                rational_sqrt(&(-self.re.clone())).map(|r| ExactScalar {
                    re: BigRational::zero(),
                    im: r,
                })
            };
        }
        // (u+vi)^2 = re+im*i forces u^2 = (re + |z|)/2 and v = im/(2u).
        let r = rational_sqrt(&self.abs_sq())?;
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        let u_sq = (&self.re + &r) * &half;
        let u = rational_sqrt(&u_sq)?;
        if u.is_zero() {
            return None;
        }
        let v = &self.im / (&u * BigRational::from_integer(BigInt::from(2)));
        Some(ExactScalar { re: u, im: v })
    }

    /// Canonical "p/q" form; complex values print as re+im*i.
    pub fn to_exact_string(&self) -> String {
        if self.is_real() {
            format!("{}/{}", self.re.numer(), self.re.denom())
        } else {
            format!(
                "{}/{}{}{}/{}i",
                self.re.numer(),
                self.re.denom(),
                if self.im.is_negative() { "-" } else { "+" },
                self.im.numer().abs(),
                self.im.denom()
            )
        }
    }

    pub fn parse_rational(s: &str) -> Result<BigRational, Error> {
        let s = s.trim();
        let (num, den) = match s.split_once('/') {
            Some((p, q)) => (p, q),
            None => (s, "1"),
        };
        let p = BigInt::from_str(num.trim()).map_err(|_| Error::ScalarParse(s.to_string()))?;
        let q = BigInt::from_str(den.trim()).map_err(|_| Error::ScalarParse(s.to_string()))?;
        if q.is_zero() {
            return Err(Error::ScalarParse(s.to_string()));
        }
        Ok(BigRational::new(p, q))
    }
}

/// Exact square root of a non-negative rational, when it is rational.
pub fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let ns = r.numer().sqrt();
    let ds = r.denom().sqrt();
    if &(&ns * &ns) == r.numer() && &(&ds * &ds) == r.denom() {
        Some(BigRational::new(ns, ds))
    } else {
        None
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_real() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Zero for ExactScalar {
    fn zero() -> Self {
        ExactScalar {
            re: BigRational::zero(),
            im: BigRational::zero(),
        }
    }
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for ExactScalar {
    fn one() -> Self {
        ExactScalar {
            re: BigRational::one(),
            im: BigRational::zero(),
        }
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        ExactScalar {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: ExactScalar) -> ExactScalar {
        ExactScalar {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl<'a> Add<&'a ExactScalar> for ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &'a ExactScalar) -> ExactScalar {
        ExactScalar {
            re: self.re + &rhs.re,
            im: self.im + &rhs.im,
        }
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: ExactScalar) -> ExactScalar {
        ExactScalar {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl<'a> Sub<&'a ExactScalar> for ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &'a ExactScalar) -> ExactScalar {
        ExactScalar {
            re: self.re - &rhs.re,
            im: self.im - &rhs.im,
        }
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: ExactScalar) -> ExactScalar {
        #[allow(clippy::suspicious_arithmetic_impl)]
        ExactScalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'a> Mul<&'a ExactScalar> for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &'a ExactScalar) -> ExactScalar {
        #[allow(clippy::suspicious_arithmetic_impl)]
        ExactScalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl<'a, 'b> Mul<&'b ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &'b ExactScalar) -> ExactScalar {
        #[allow(clippy::suspicious_arithmetic_impl)]
        ExactScalar {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Div for ExactScalar {
    type Output = ExactScalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: ExactScalar) -> ExactScalar {
        self * rhs.inv()
    }
}

impl AddAssign for ExactScalar {
    fn add_assign(&mut self, rhs: ExactScalar) {
        self.re += rhs.re;
        self.im += rhs.im;
    }
}

impl SubAssign for ExactScalar {
    fn sub_assign(&mut self, rhs: ExactScalar) {
        self.re -= rhs.re;
        self.im -= rhs.im;
    }
}

impl MulAssign for ExactScalar {
    fn mul_assign(&mut self, rhs: ExactScalar) {
        *self = self.clone() * rhs;
    }
}

impl FromStr for ExactScalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        Ok(ExactScalar::from_rational(Self::parse_rational(s)?))
    }
}

/// Wire format: real values as "p/q", complex ones as {"re": "p/q", "im": "r/s"}.
impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if self.is_real() {
            serializer.serialize_str(&format!("{}/{}", self.re.numer(), self.re.denom()))
        } else {
            use serde::ser::SerializeStruct;
            let mut st = serializer.serialize_struct("ExactScalar", 2)?;
            st.serialize_field("re", &format!("{}/{}", self.re.numer(), self.re.denom()))?;
            st.serialize_field("im", &format!("{}/{}", self.im.numer(), self.im.denom()))?;
            st.end()
        }
    }
}

impl<'de> Deserialize<'de> for ExactScalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Complex { re: String, im: String },
        }
        match Repr::deserialize(deserializer)? {
            Repr::Str(s) => ExactScalar::from_str(&s).map_err(D::Error::custom),
            Repr::Complex { re, im } => Ok(ExactScalar::new(
                ExactScalar::parse_rational(&re).map_err(D::Error::custom)?,
                ExactScalar::parse_rational(&im).map_err(D::Error::custom)?,
            )),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_is_exact() {
        let a = ExactScalar::ratio(1, 3);
        let b = ExactScalar::ratio(1, 6);
        assert_eq!(a.clone() + b.clone(), ExactScalar::ratio(1, 2));
        assert_eq!(a.clone() * b, ExactScalar::ratio(1, 18));
        assert_eq!(a.clone() / a, ExactScalar::one());
    }

    #[test]
    fn complex_inverse() {
        let z = ExactScalar::new(
            BigRational::new(BigInt::from(-2), BigInt::from(5)),
            BigRational::new(BigInt::from(1), BigInt::from(5)),
        );
        let w = z.clone() * z.inv();
        assert_eq!(w, ExactScalar::one());
    }

    #[test]
    fn sqrt_in_gaussian_rationals() {
        // sqrt(-4/25) = (2/5) i
        let d = ExactScalar::ratio(-4, 25);
        let s = d.sqrt_exact().unwrap();
        assert_eq!(s.clone() * s.clone(), d);
        assert!(s.re().is_zero());
        // 2 has no rational square root
        assert!(ExactScalar::from_int(2).sqrt_exact().is_none());
        // sqrt(-3+4i) = 1+2i
        let z = ExactScalar::new(
            BigRational::from_integer(BigInt::from(-3)),
            BigRational::from_integer(BigInt::from(4)),
        );
        let s = z.sqrt_exact().unwrap();
        assert_eq!(s.clone() * s, z);
    }

    #[test]
    fn json_round_trip() {
        let z = ExactScalar::ratio(-1, 5);
        assert_eq!(serde_json::to_string(&z).unwrap(), "\"-1/5\"");
        let back: ExactScalar = serde_json::from_str("\"-1/5\"").unwrap();
        assert_eq!(back, z);
        let c = ExactScalar::new(
            BigRational::new(BigInt::from(-2), BigInt::from(5)),
            BigRational::new(BigInt::from(1), BigInt::from(5)),
        );
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, "{\"re\":\"-2/5\",\"im\":\"1/5\"}");
        let back: ExactScalar = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn integer_strings_keep_explicit_denominator() {
        assert_eq!(
            serde_json::to_string(&ExactScalar::from_int(5)).unwrap(),
            "\"5/1\""
        );
    }
}
