//! Fixed-precision binary floats on big integers, with complex arithmetic
//! and a Weierstrass/Durand-Kerner polynomial root finder.
//!
//! A value is mant * 2^exp. Each value carries the precision it was rounded
//! to; operations round to the coarsest precision among their operands.
//! Integer-valued inputs are exact and never rounded on their own.

use std::cmp::Ordering;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::poly::Polynomial;
use crate::scalar::ExactScalar;

pub const DEFAULT_PREC: u32 = 256;
const EXACT: u32 = u32::MAX;

/// x / 2^shift, rounded half away from zero.
fn shr_round(x: &BigInt, shift: u64) -> BigInt {
    if shift == 0 {
        return x.clone();
    }
    let half = BigInt::one() << (shift - 1);
    let mag = (x.abs() + half) >> shift;
    if x.is_negative() {
        -mag
    } else {
        mag
    }
}

#[derive(Clone, Debug)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

impl Dyadic {
    pub fn zero() -> Self {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
            prec: EXACT,
        }
    }

    pub fn from_int(n: i64) -> Self {
        Dyadic {
            mant: BigInt::from(n),
            exp: 0,
            prec: EXACT,
        }
    }

    pub fn from_rational(r: &BigRational, prec: u32) -> Self {
        if r.is_zero() {
            return Dyadic::zero();
        }
        let pb = r.numer().bits() as i64;
        let qb = r.denom().bits() as i64;
        let s = prec as i64 + 2 + (qb - pb).max(0);
        let scaled = (r.numer() << s) / r.denom();
        Dyadic {
            mant: scaled,
            exp: -s,
            prec,
        }
        .rounded()
    }

    /// 10^e at the given precision.
    pub fn pow10(e: i32, prec: u32) -> Self {
        let ten = BigInt::from(10);
        let p = ten.pow(e.unsigned_abs());
        let r = if e >= 0 {
            BigRational::from_integer(p)
        } else {
            BigRational::new(BigInt::one(), p)
        };
        Dyadic::from_rational(&r, prec)
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    fn rounded(mut self) -> Self {
        if self.prec == EXACT {
            return self;
        }
        let bits = self.mant.bits();
        if bits > self.prec as u64 {
            let shift = bits - self.prec as u64;
            self.mant = shr_round(&self.mant, shift);
            self.exp += shift as i64;
        }
        if self.mant.is_zero() {
            self.exp = 0;
        }
        self
    }

    fn with_prec(mut self, prec: u32) -> Self {
        self.prec = prec;
        self.rounded()
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic {
            mant: self.mant.abs(),
            exp: self.exp,
            prec: self.prec,
        }
    }

    /// Total order on values.
    pub fn cmp_value(&self, other: &Dyadic) -> Ordering {
        let sa = self.mant.sign();
        let sb = other.mant.sign();
        match (sa, sb) {
            (Sign::Minus, Sign::Minus) => {}
            (Sign::Minus, _) => return Ordering::Less,
            (_, Sign::Minus) => return Ordering::Greater,
            (Sign::NoSign, Sign::NoSign) => return Ordering::Equal,
            (Sign::NoSign, Sign::Plus) => return Ordering::Less,
            (Sign::Plus, Sign::NoSign) => return Ordering::Greater,
            (Sign::Plus, Sign::Plus) => {}
        }
        // same nonzero sign: compare magnitude orders first
        let oa = self.mant.bits() as i64 + self.exp;
        let ob = other.mant.bits() as i64 + other.exp;
        if oa != ob {
            let mag = oa.cmp(&ob);
            return if sa == Sign::Minus { mag.reverse() } else { mag };
        }
        let shift = (self.exp - other.exp).unsigned_abs();
        let (a, b) = if self.exp >= other.exp {
            (self.mant.clone() << shift, other.mant.clone())
        } else {
            (self.mant.clone(), other.mant.clone() << shift)
        };
        a.cmp(&b)
    }

    pub fn to_f64(&self) -> f64 {
        let m = self.mant.to_f64().unwrap_or(f64::NAN);
        m * 2f64.powi(self.exp.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
    }

    /// Decimal rendering with the given number of fractional digits.
    pub fn to_decimal_string(&self, frac_digits: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let ten_k = BigInt::from(10).pow(frac_digits as u32);
        let scaled = if self.exp >= 0 {
            (&self.mant << self.exp as u64) * &ten_k
        } else {
            let shift = (-self.exp) as u64;
            shr_round(&(&self.mant * &ten_k), shift)
        };
        let neg = scaled.is_negative();
        let digits = scaled.abs().to_string();
        let (int_part, frac_part) = if digits.len() > frac_digits {
            let split = digits.len() - frac_digits;
            (digits[..split].to_string(), digits[split..].to_string())
        } else {
            (
                "0".to_string(),
                format!("{:0>width$}", digits, width = frac_digits),
            )
        };
        let frac_trimmed = frac_part.trim_end_matches('0');
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&int_part);
        if !frac_trimmed.is_empty() {
            out.push('.');
            out.push_str(frac_trimmed);
        }
        out
    }
}

fn join_prec(a: u32, b: u32) -> u32 {
    a.min(b)
}

impl Add for Dyadic {
    type Output = Dyadic;
    fn add(self, rhs: Dyadic) -> Dyadic {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let prec = join_prec(self.prec, rhs.prec);
        // drop the smaller operand when it is far below the rounding grain
        if prec != EXACT {
            let oa = self.mant.bits() as i64 + self.exp;
            let ob = rhs.mant.bits() as i64 + rhs.exp;
            let guard = prec as i64 + 4;
            if oa - ob > guard {
                return self.with_prec(prec);
            }
            if ob - oa > guard {
                return rhs.with_prec(prec);
            }
        }
        let exp = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - exp) as u64;
        let b = &rhs.mant << (rhs.exp - exp) as u64;
        Dyadic {
            mant: a + b,
            exp,
            prec,
        }
        .rounded()
    }
}

impl Sub for Dyadic {
    type Output = Dyadic;
    fn sub(self, rhs: Dyadic) -> Dyadic {
        self + (-rhs)
    }
}

impl Neg for Dyadic {
    type Output = Dyadic;
    fn neg(self) -> Dyadic {
        Dyadic {
            mant: -self.mant,
            exp: self.exp,
            prec: self.prec,
        }
    }
}

impl Mul for Dyadic {
    type Output = Dyadic;
    fn mul(self, rhs: Dyadic) -> Dyadic {
        let prec = join_prec(self.prec, rhs.prec);
        Dyadic {
            mant: &self.mant * &rhs.mant,
            exp: self.exp + rhs.exp,
            prec,
        }
        .rounded()
    }
}

impl Div for Dyadic {
    type Output = Dyadic;
    fn div(self, rhs: Dyadic) -> Dyadic {
        assert!(!rhs.is_zero(), "dyadic division by zero");
        if self.is_zero() {
            return Dyadic::zero();
        }
        let mut prec = join_prec(self.prec, rhs.prec);
        if prec == EXACT {
            prec = DEFAULT_PREC;
        }
        let s = prec as u64 + 2 + rhs.mant.bits();
        let num = &self.mant << s;
        Dyadic {
            mant: num / &rhs.mant,
            exp: self.exp - rhs.exp - s as i64,
            prec,
        }
        .rounded()
    }
}

/// Complex dyadic value.
#[derive(Clone, Debug)]
pub struct CDyadic {
    pub re: Dyadic,
    pub im: Dyadic,
}

impl CDyadic {
    pub fn new(re: Dyadic, im: Dyadic) -> Self {
        CDyadic { re, im }
    }

    pub fn zero() -> Self {
        CDyadic {
            re: Dyadic::zero(),
            im: Dyadic::zero(),
        }
    }

    pub fn one() -> Self {
        CDyadic {
            re: Dyadic::from_int(1),
            im: Dyadic::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        CDyadic {
            re: Dyadic::from_int(n),
            im: Dyadic::zero(),
        }
    }

    pub fn from_exact(z: &ExactScalar, prec: u32) -> Self {
        CDyadic {
            re: Dyadic::from_rational(z.re(), prec),
            im: Dyadic::from_rational(z.im(), prec),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        CDyadic {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn abs_sq(&self) -> Dyadic {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }
}

impl Add for CDyadic {
    type Output = CDyadic;
    fn add(self, rhs: CDyadic) -> CDyadic {
        CDyadic {
            re: self.re + rhs.re,
            im: self.im + rhs.im,
        }
    }
}

impl Sub for CDyadic {
    type Output = CDyadic;
    fn sub(self, rhs: CDyadic) -> CDyadic {
        CDyadic {
            re: self.re - rhs.re,
            im: self.im - rhs.im,
        }
    }
}

impl Neg for CDyadic {
    type Output = CDyadic;
    fn neg(self) -> CDyadic {
        CDyadic {
            re: -self.re,
            im: -self.im,
        }
    }
}

impl Mul for CDyadic {
    type Output = CDyadic;
    fn mul(self, rhs: CDyadic) -> CDyadic {
        CDyadic {
            re: self.re.clone() * rhs.re.clone() - self.im.clone() * rhs.im.clone(),
            im: self.re * rhs.im + self.im * rhs.re,
        }
    }
}

impl Div for CDyadic {
    type Output = CDyadic;
    fn div(self, rhs: CDyadic) -> CDyadic {
        let n = rhs.abs_sq();
        let w = self * rhs.conj();
        CDyadic {
            re: w.re / n.clone(),
            im: w.im / n,
        }
    }
}

fn eval_cpoly(coeffs: &[CDyadic], z: &CDyadic) -> CDyadic {
    let mut acc = CDyadic::zero();
    for c in coeffs.iter().rev() {
        acc = acc * z.clone() + c.clone();
    }
    acc
}

/// All roots of a squarefree polynomial, by simultaneous Weierstrass
/// iteration followed by Newton polishing.
pub fn roots_squarefree(f: &Polynomial, prec: u32) -> Result<Vec<CDyadic>> {
    let n = f.degree().ok_or(Error::ZeroPolynomial)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let monic = f.monic();
    let coeffs: Vec<CDyadic> = monic
        .coeffs()
        .iter()
        .map(|c| CDyadic::from_exact(c, prec))
        .collect();
    let dcoeffs: Vec<CDyadic> = monic
        .derivative()
        .coeffs()
        .iter()
        .map(|c| CDyadic::from_exact(c, prec))
        .collect();

    // Cauchy-style radius: 1 + max |coeff|, bounded via |re| + |im|.
    let mut radius = Dyadic::from_int(1);
    for c in monic.coeffs().iter().take(n) {
        let bound = Dyadic::from_rational(&(c.re().abs() + c.im().abs()), prec)
            + Dyadic::from_int(1);
        if bound.cmp_value(&radius) == Ordering::Greater {
            radius = bound;
        }
    }

    // spiral of distinct starting points
    let seed = CDyadic {
        re: Dyadic::from_rational(&BigRational::new(BigInt::from(2), BigInt::from(5)), prec),
        im: Dyadic::from_rational(&BigRational::new(BigInt::from(9), BigInt::from(10)), prec),
    };
    let mut zs = Vec::with_capacity(n);
    let mut cur = seed.clone();
    for _ in 0..n {
        zs.push(CDyadic {
            re: cur.re.clone() * radius.clone(),
            im: cur.im.clone() * radius.clone(),
        });
        cur = cur * seed.clone();
    }

    let step_tol = {
        let t = prec.saturating_sub(16);
        Dyadic {
            mant: BigInt::one(),
            exp: -(2 * t as i64),
            prec: EXACT,
        }
    };

    let mut converged = false;
    for _ in 0..400 {
        let mut max_step = Dyadic::zero();
        for k in 0..n {
            let num = eval_cpoly(&coeffs, &zs[k]);
            let mut den = CDyadic::one();
            for (j, zj) in zs.iter().enumerate() {
                if j != k {
                    den = den * (zs[k].clone() - zj.clone());
                }
            }
            if den.is_zero() {
                // nudge collided points apart
                zs[k] = zs[k].clone() + seed.clone();
                max_step = Dyadic::from_int(1);
                continue;
            }
            let delta = num / den;
            let step = delta.abs_sq();
            if step.cmp_value(&max_step) == Ordering::Greater {
                max_step = step;
            }
            zs[k] = zs[k].clone() - delta;
        }
        if max_step.cmp_value(&step_tol) != Ordering::Greater {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::RootsDidNotConverge);
    }

    // Newton polish
    for z in zs.iter_mut() {
        for _ in 0..4 {
            let d = eval_cpoly(&dcoeffs, z);
            if d.is_zero() {
                break;
            }
            let v = eval_cpoly(&coeffs, z);
            *z = z.clone() - v / d;
        }
    }

    // residual acceptance
    let tol = {
        let t = prec.saturating_sub(40).min(130);
        Dyadic {
            mant: BigInt::one(),
            exp: -(2 * t as i64),
            prec: EXACT,
        }
    };
    for z in &zs {
        let scale = {
            let a = z.abs_sq() + Dyadic::from_int(1);
            let mut acc = Dyadic::from_int(1);
            for _ in 0..n {
                acc = acc * a.clone();
            }
            acc
        };
        let resid = eval_cpoly(&coeffs, z).abs_sq();
        if resid.cmp_value(&(tol.clone() * scale)) == Ordering::Greater {
            return Err(Error::RootsDidNotConverge);
        }
    }
    Ok(zs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &Dyadic, b: f64) -> bool {
        (a.to_f64() - b).abs() < 1e-12
    }

    #[test]
    fn basic_arithmetic() {
        let a = Dyadic::from_rational(&BigRational::new(BigInt::from(1), BigInt::from(3)), 128);
        let b = Dyadic::from_rational(&BigRational::new(BigInt::from(1), BigInt::from(6)), 128);
        let s = a.clone() + b.clone();
        assert!(close(&s, 0.5));
        let p = a.clone() * b;
        assert!(close(&p, 1.0 / 18.0));
        let q = a.clone() / a;
        assert!(close(&q, 1.0));
    }

    #[test]
    fn rounding_keeps_precision_bits() {
        let third = BigRational::new(BigInt::from(1), BigInt::from(3));
        let x = Dyadic::from_rational(&third, 64);
        let y = x.clone() * x;
        assert!(y.mant.bits() <= 64);
        assert!((y.to_f64() - 1.0 / 9.0).abs() < 1e-15);
    }

    #[test]
    fn decimal_rendering() {
        let x = Dyadic::from_rational(&BigRational::new(BigInt::from(-1), BigInt::from(5)), 128);
        assert_eq!(x.to_decimal_string(6), "-0.2");
    }

    #[test]
    fn cubic_roots_match_known_values() {
        // 4x^3 + 6x^2 + 4x + 1: one real root and a conjugate pair
        let f = Polynomial::from_ints(&[1, 4, 6, 4]);
        let roots = roots_squarefree(&f, 256).unwrap();
        assert_eq!(roots.len(), 3);
        let mut real_count = 0;
        for r in &roots {
            // residual around 2^-200 or better at this precision
            let resid = {
                let c: Vec<CDyadic> = f
                    .monic()
                    .coeffs()
                    .iter()
                    .map(|c| CDyadic::from_exact(c, 256))
                    .collect();
                eval_cpoly(&c, r).abs_sq()
            };
            assert!(resid.to_f64() < 1e-60);
            if r.im.abs().to_f64() < 1e-30 {
                real_count += 1;
            }
        }
        assert_eq!(real_count, 1);
    }

    #[test]
    fn quadratic_roots_exactly_representable() {
        // x^2 + (4/5)x + 1/5 has roots (-2 +- i)/5
        let f = Polynomial::from_coeffs(vec![
            ExactScalar::ratio(1, 5),
            ExactScalar::ratio(4, 5),
            ExactScalar::from_int(1),
        ]);
        let roots = roots_squarefree(&f, 256).unwrap();
        for r in roots {
            assert!((r.re.to_f64() + 0.4).abs() < 1e-30);
            assert!((r.im.abs().to_f64() - 0.2).abs() < 1e-30);
        }
    }
}
