//! Dense univariate polynomials over [`ExactScalar`].
//!
//! Coefficients are stored ascending by exponent with trailing zeros
//! trimmed; the zero polynomial has an empty coefficient list. Orders at
//! finite points and at infinity, Wronskians, resultants and discriminants
//! are all computed without any rounding.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

/// A point of the Riemann sphere at which orders and cells are taken.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Point {
    Finite(ExactScalar),
    Infinity,
}

impl Point {
    pub fn zero() -> Self {
        Point::Finite(ExactScalar::zero())
    }

    pub fn minus_one() -> Self {
        Point::Finite(ExactScalar::from_int(-1))
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Finite(z) => write!(f, "{z}"),
            Point::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Polynomial {
    coeffs: Vec<ExactScalar>,
}

impl Polynomial {
    pub fn from_coeffs(mut coeffs: Vec<ExactScalar>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial {
            coeffs: vec![ExactScalar::one()],
        }
    }

    pub fn x() -> Self {
        Polynomial::monomial(1, ExactScalar::one())
    }

    pub fn constant(c: ExactScalar) -> Self {
        Polynomial::from_coeffs(vec![c])
    }

    pub fn monomial(exp: usize, c: ExactScalar) -> Self {
        if c.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![ExactScalar::zero(); exp + 1];
        coeffs[exp] = c;
        Polynomial { coeffs }
    }

    pub fn from_ints(cs: &[i64]) -> Self {
        Polynomial::from_coeffs(cs.iter().map(|&c| ExactScalar::from_int(c)).collect())
    }

    /// x + c, handy for building products of linear factors.
    pub fn linear(c: ExactScalar) -> Self {
        Polynomial::from_coeffs(vec![c, ExactScalar::one()])
    }

    pub fn coeffs(&self) -> &[ExactScalar] {
        &self.coeffs
    }

    pub fn coeff(&self, exp: usize) -> ExactScalar {
        self.coeffs.get(exp).cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn leading_coeff(&self) -> ExactScalar {
        self.coeffs.last().cloned().unwrap_or_else(ExactScalar::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn monic(&self) -> Polynomial {
        if self.is_zero() {
            return Polynomial::zero();
        }
        let lc = self.leading_coeff().inv();
        self.scale(&lc)
    }

    pub fn scale(&self, c: &ExactScalar) -> Polynomial {
        Polynomial::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn eval(&self, x: &ExactScalar) -> ExactScalar {
        let mut acc = ExactScalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| ExactScalar::from_int(k as i64) * c)
            .collect();
        Polynomial::from_coeffs(coeffs)
    }

    pub fn pow(&self, e: usize) -> Polynomial {
        let mut acc = Polynomial::one();
        let mut base = self.clone();
        let mut k = e;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Quotient and remainder with respect to a nonzero divisor.
    pub fn div_rem(&self, divisor: &Polynomial) -> (Polynomial, Polynomial) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let dd = divisor.coeffs.len();
        if self.coeffs.len() < dd {
            return (Polynomial::zero(), self.clone());
        }
        let lc_inv = divisor.leading_coeff().inv();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![ExactScalar::zero(); rem.len() - dd + 1];
        for k in (0..quot.len()).rev() {
            let q = rem[k + dd - 1].clone() * &lc_inv;
            if q.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                let t = q.clone() * dc;
                rem[k + j] -= t;
            }
            quot[k] = q;
        }
        (Polynomial::from_coeffs(quot), Polynomial::from_coeffs(rem))
    }

    /// Exact quotient, or `None` when the division leaves a remainder.
    pub fn exact_div(&self, divisor: &Polynomial) -> Option<Polynomial> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Polynomial) -> Polynomial {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Coefficients of f in powers of (x - xi), lowest first.
    pub fn shifted_coeffs(&self, xi: &ExactScalar) -> Vec<ExactScalar> {
        let mut c = self.coeffs.clone();
        let n = c.len();
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            // synthetic division by (x - xi)
            let mut q = Vec::with_capacity(c.len().saturating_sub(1));
            let mut carry = ExactScalar::zero();
            for coeff in c.iter().rev() {
                carry = carry * xi + coeff;
                q.push(carry.clone());
            }
            let rem = q.pop().unwrap_or_else(ExactScalar::zero);
            out.push(rem);
            q.reverse();
            c = q;
        }
        out
    }

    /// Multiplicity of xi as a root; at infinity the order is d - deg f.
    pub fn order_at(&self, xi: &Point, ambient_degree: usize) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::UndefinedOrder);
        }
        let deg = self.degree().unwrap();
        match xi {
            Point::Infinity => {
                if deg > ambient_degree {
                    Err(Error::AmbientDegreeExceeded {
                        deg,
                        ambient: ambient_degree,
                    })
                } else {
                    Ok(ambient_degree - deg)
                }
            }
            Point::Finite(z) => {
                let shifted = self.shifted_coeffs(z);
                Ok(shifted
                    .iter()
                    .position(|c| !c.is_zero())
                    .expect("nonzero polynomial has a nonzero shifted coefficient"))
            }
        }
    }

    /// Squarefree part together with the multiplicity-tagged factor list
    /// obtained by repeated gcd with the derivative.
    pub fn squarefree_decomposition(&self) -> Vec<(Polynomial, usize)> {
        // Yun-style splitting; characteristic zero keeps it simple.
        if self.is_constant() {
            return Vec::new();
        }
        let mut out = Vec::new();
        let f = self.monic();
        let df = f.derivative();
        let a0 = f.gcd(&df);
        let mut b = f.exact_div(&a0).expect("gcd divides");
        let mut c = df.exact_div(&a0).expect("gcd divides");
        let mut i = 1usize;
        loop {
            let d = c - b.derivative();
            let a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a).expect("gcd divides");
            if b.is_constant() {
                break;
            }
            c = d.exact_div(&a).expect("gcd divides");
            i += 1;
        }
        out
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "({c})")?,
                1 => write!(f, "({c})x")?,
                _ => write!(f, "({c})x^{k}")?,
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<'a, 'b> Add<&'b Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &'b Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) + rhs.coeff(k));
        }
        Polynomial::from_coeffs(coeffs)
    }
}

impl Add for Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: Polynomial) -> Polynomial {
        &self + &rhs
    }
}

impl<'a, 'b> Sub<&'b Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &'b Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for k in 0..n {
            coeffs.push(self.coeff(k) - &rhs.coeff(k));
        }
        Polynomial::from_coeffs(coeffs)
    }
}

impl Sub for Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: Polynomial) -> Polynomial {
        &self - &rhs
    }
}

impl<'a, 'b> Mul<&'b Polynomial> for &'a Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &'b Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut coeffs = vec![ExactScalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] += a * b;
            }
        }
        Polynomial::from_coeffs(coeffs)
    }
}

impl Mul for Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: Polynomial) -> Polynomial {
        &self * &rhs
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::from_coeffs(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

/// Bareiss fraction-free determinant of a square polynomial matrix.
///
/// Every interior division is exact because each entry is a minor of the
/// original matrix.
fn poly_det_bareiss(mut m: Vec<Vec<Polynomial>>) -> Polynomial {
    let n = m.len();
    if n == 0 {
        return Polynomial::one();
    }
    let mut sign_flip = false;
    let mut prev = Polynomial::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return Polynomial::zero();
            };
            m.swap(k, swap);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = num
                    .exact_div(&prev)
                    .expect("Bareiss division is exact on minors");
            }
        }
        prev = m[k][k].clone();
        for row in m.iter_mut().take(n).skip(k + 1) {
            row[k] = Polynomial::zero();
        }
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

/// Raw Wronski determinant det(d^j f_i / dx^j), 0 <= j < k.
///
/// The result is the plain determinant of the derivative matrix; callers
/// wanting the monic normalization divide by the leading coefficient.
pub fn wronskian(fs: &[Polynomial]) -> Result<Polynomial> {
    if fs.is_empty() {
        return Err(Error::EmptyFamily);
    }
    let k = fs.len();
    let mut rows = Vec::with_capacity(k);
    for f in fs {
        let mut row = Vec::with_capacity(k);
        let mut cur = f.clone();
        for _ in 0..k {
            row.push(cur.clone());
            cur = cur.derivative();
        }
        rows.push(row);
    }
    Ok(poly_det_bareiss(rows))
}

/// Bareiss determinant of a square scalar matrix.
pub(crate) fn scalar_det_bareiss(mut m: Vec<Vec<ExactScalar>>) -> ExactScalar {
    let n = m.len();
    if n == 0 {
        return ExactScalar::one();
    }
    let mut sign_flip = false;
    let mut prev = ExactScalar::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let Some(swap) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return ExactScalar::zero();
            };
            m.swap(k, swap);
            sign_flip = !sign_flip;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                m[i][j] = num / prev.clone();
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign_flip {
        -det
    } else {
        det
    }
}

/// Sylvester-matrix resultant. For monic inputs this is the product of all
/// root differences, first argument's roots minus the second's.
pub fn resultant(f: &Polynomial, g: &Polynomial) -> Result<ExactScalar> {
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let m = f.degree().unwrap();
    let n = g.degree().unwrap();
    if m == 0 {
        return Ok(f.leading_coeff().pow(n as i64));
    }
    if n == 0 {
        return Ok(g.leading_coeff().pow(m as i64));
    }
    let size = m + n;
    let mut rows = vec![vec![ExactScalar::zero(); size]; size];
    // n rows of f's coefficients (descending), then m rows of g's.
    for i in 0..n {
        for (j, c) in f.coeffs().iter().rev().enumerate() {
            rows[i][i + j] = c.clone();
        }
    }
    for i in 0..m {
        for (j, c) in g.coeffs().iter().rev().enumerate() {
            rows[n + i][i + j] = c.clone();
        }
    }
    Ok(scalar_det_bareiss(rows))
}

/// Discriminant with the sign convention
/// (-1)^(n(n-1)/2) Res(f, f') / lc(f).
pub fn discriminant(f: &Polynomial) -> Result<ExactScalar> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let n = f.degree().unwrap();
    if n == 0 {
        return Err(Error::ConstantPolynomial);
    }
    if n == 1 {
        return Ok(ExactScalar::one());
    }
    let res = resultant(f, &f.derivative())?;
    let sign = if (n * (n - 1) / 2) % 2 == 0 {
        ExactScalar::one()
    } else {
        ExactScalar::from_int(-1)
    };
    Ok(sign * res / f.leading_coeff())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x_poly() -> Polynomial {
        Polynomial::x()
    }

    #[test]
    fn order_at_finite_points() {
        // x^3 (x+1)^2 has order 3 at 0
        let f = x_poly().pow(3) * Polynomial::from_ints(&[1, 1]).pow(2);
        assert_eq!(f.order_at(&Point::zero(), 5).unwrap(), 3);
        assert_eq!(f.order_at(&Point::minus_one(), 5).unwrap(), 2);
        // 1 + 5x vanishes to first order at -1/5
        let g = Polynomial::from_ints(&[1, 5]);
        assert_eq!(
            g.order_at(&Point::Finite(ExactScalar::ratio(-1, 5)), 5).unwrap(),
            1
        );
    }

    #[test]
    fn order_at_infinity_is_codegree() {
        let f = Polynomial::from_ints(&[1, 0, 1]); // x^2 + 1
        assert_eq!(f.order_at(&Point::Infinity, 5).unwrap(), 3);
        assert!(Polynomial::zero().order_at(&Point::zero(), 3).is_err());
    }

    #[test]
    fn wronskian_of_monomials() {
        let fs = vec![Polynomial::one(), x_poly(), x_poly().pow(2)];
        assert_eq!(wronskian(&fs).unwrap(), Polynomial::from_ints(&[2]));
    }

    #[test]
    fn wronskian_detects_dependence() {
        let f = Polynomial::from_ints(&[3, 1, 4]);
        let fs = vec![f.clone(), f.scale(&ExactScalar::from_int(2))];
        assert!(wronskian(&fs).unwrap().is_zero());
        assert!(wronskian(&[]).is_err());
    }

    #[test]
    fn wronskian_of_truncated_binomial_plane() {
        // basis 1+5x, 10x^2+10x^3, 5x^4+x^5 has Wronskian c x^3 (x+1)^3
        let fs = vec![
            Polynomial::from_ints(&[1, 5]),
            Polynomial::from_ints(&[0, 0, 10, 10]),
            Polynomial::from_ints(&[0, 0, 0, 0, 5, 1]),
        ];
        let w = wronskian(&fs).unwrap();
        let expected = (x_poly().pow(3) * Polynomial::from_ints(&[1, 1]).pow(3)).monic();
        assert_eq!(w.monic(), expected);
    }

    #[test]
    fn wronskian_is_alternating() {
        let a = Polynomial::from_ints(&[1, 2]);
        let b = Polynomial::from_ints(&[0, 1, 7]);
        let c = Polynomial::from_ints(&[3, 0, 0, 1]);
        let w1 = wronskian(&[a.clone(), b.clone(), c.clone()]).unwrap();
        let w2 = wronskian(&[b.clone(), a.clone(), c.clone()]).unwrap();
        assert_eq!(w1, -w2);
        // adding a multiple of one row to another leaves it unchanged
        let a2 = &a + &b.scale(&ExactScalar::from_int(5));
        let w3 = wronskian(&[a2, b, c]).unwrap();
        assert_eq!(w1, w3);
    }

    #[test]
    fn resultant_of_linear_pair() {
        let f = Polynomial::from_ints(&[-1, 1]);
        let g = Polynomial::from_ints(&[1, 1]);
        assert_eq!(resultant(&f, &g).unwrap(), ExactScalar::from_int(2));
    }

    #[test]
    fn resultant_detects_common_root() {
        let f = x_poly().pow(2);
        let g = x_poly();
        assert!(resultant(&f, &g).unwrap().is_zero());
    }

    #[test]
    fn resultant_of_truncated_binomials() {
        // Independent oracle: 3x3 Sylvester determinant of 1+5x and 1+5x+10x^2,
        // expanded by hand:
        // | 5  1  0 |
        // | 0  5  1 |  -> 5*(5*1 - 1*5) - 1*(0*1 - 1*10) + 0 = 10
        // |10  5  1 |
        let f = Polynomial::from_ints(&[1, 5]);
        let g = Polynomial::from_ints(&[1, 5, 10]);
        assert_eq!(resultant(&f, &g).unwrap(), ExactScalar::from_int(10));
    }

    #[test]
    fn resultant_swap_sign() {
        let f = Polynomial::from_ints(&[1, 5]);
        let g = Polynomial::from_ints(&[1, 5, 10]);
        let fg = resultant(&f, &g).unwrap();
        let gf = resultant(&g, &f).unwrap();
        // (-1)^(deg f * deg g) = (-1)^2 = 1
        assert_eq!(fg, gf);
        let h = Polynomial::from_ints(&[2, 0, 0, 1]);
        let fh = resultant(&f, &h).unwrap();
        let hf = resultant(&h, &f).unwrap();
        assert_eq!(fh, -hf);
    }

    #[test]
    fn discriminants_match_quadratic_oracle() {
        // b^2 - 4ac
        let f = Polynomial::from_ints(&[1, 0, 1]);
        assert_eq!(discriminant(&f).unwrap(), ExactScalar::from_int(-4));
        let g = Polynomial::from_ints(&[1, 5, 10]);
        assert_eq!(discriminant(&g).unwrap(), ExactScalar::from_int(-15));
        let h = Polynomial::from_ints(&[1, -2, 1]); // (x-1)^2
        assert!(discriminant(&h).unwrap().is_zero());
        assert!(discriminant(&Polynomial::one()).is_err());
    }

    #[test]
    fn division_and_gcd() {
        let f = Polynomial::from_ints(&[-1, 0, 1]); // (x-1)(x+1)
        let g = Polynomial::from_ints(&[1, 1]);
        let (q, r) = f.div_rem(&g);
        assert!(r.is_zero());
        assert_eq!(q, Polynomial::from_ints(&[-1, 1]));
        assert_eq!(f.gcd(&g), g.monic());
        assert!(f.exact_div(&Polynomial::from_ints(&[1, 2])).is_none());
    }

    #[test]
    fn squarefree_decomposition_reads_multiplicities() {
        let f = x_poly().pow(3) * Polynomial::from_ints(&[1, 1]).pow(2);
        let parts = f.squarefree_decomposition();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0], (Polynomial::from_ints(&[1, 1]), 2));
        assert_eq!(parts[1], (x_poly(), 3));
    }

    #[test]
    fn shifted_coeffs_recenter() {
        let f = Polynomial::from_ints(&[0, 0, 1]); // x^2
        let s = f.shifted_coeffs(&ExactScalar::from_int(1));
        // x^2 = 1 + 2(x-1) + (x-1)^2
        assert_eq!(s[0], ExactScalar::from_int(1));
        assert_eq!(s[1], ExactScalar::from_int(2));
        assert_eq!(s[2], ExactScalar::from_int(1));
    }

    #[test]
    fn json_polynomial_encoding() {
        let f = Polynomial::from_ints(&[1, 5]);
        assert_eq!(
            serde_json::to_string(&f).unwrap(),
            "{\"coeffs\":[\"1/1\",\"5/1\"]}"
        );
        let back: Polynomial = serde_json::from_str("{\"coeffs\":[\"1/1\",\"5/1\"]}").unwrap();
        assert_eq!(back, f);
    }
}
