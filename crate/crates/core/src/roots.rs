//! Root extraction for exact polynomials: linear and quadratic factors stay
//! in Q(i) whenever the needed square root exists there, rational roots are
//! peeled off by divisor search, and whatever remains goes to the numeric
//! finder at a chosen precision.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::dyadic::{roots_squarefree, CDyadic};
use crate::error::Result;
use crate::poly::Polynomial;
use crate::scalar::ExactScalar;

/// A root either exactly in Q(i) or as a complex float.
#[derive(Clone, Debug)]
pub enum RootValue {
    Exact(ExactScalar),
    Numeric(CDyadic),
}

impl RootValue {
    pub fn is_exact(&self) -> bool {
        matches!(self, RootValue::Exact(_))
    }

    pub fn to_cdyadic(&self, prec: u32) -> CDyadic {
        match self {
            RootValue::Exact(z) => CDyadic::from_exact(z, prec),
            RootValue::Numeric(z) => z.clone(),
        }
    }
}

impl Serialize for RootValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            RootValue::Exact(z) => z.serialize(serializer),
            RootValue::Numeric(z) => {
                use serde::ser::SerializeStruct;
                let mut st = serializer.serialize_struct("NumericRoot", 2)?;
                st.serialize_field("re", &z.re.to_decimal_string(40))?;
                st.serialize_field("im", &z.im.to_decimal_string(40))?;
                st.end()
            }
        }
    }
}

/// Both roots of a quadratic, when its discriminant has a square root in Q(i).
pub fn quadratic_roots_exact(f: &Polynomial) -> Option<(ExactScalar, ExactScalar)> {
    if f.degree() != Some(2) {
        return None;
    }
    let a = f.coeff(2);
    let b = f.coeff(1);
    let c = f.coeff(0);
    let four = ExactScalar::from_int(4);
    let disc = b.clone() * b.clone() - four * a.clone() * c;
    let s = disc.sqrt_exact()?;
    let two_a = ExactScalar::from_int(2) * a;
    let r1 = (-b.clone() + &s) / two_a.clone();
    let r2 = (-b - &s) / two_a;
    Some((r1, r2))
}

fn divisors_up_to_u64(n: &BigInt) -> Option<Vec<u64>> {
    let n = n.abs().to_u64()?;
    if n == 0 || n > 1_000_000_000_000 {
        return None;
    }
    let mut divs = Vec::new();
    let mut k = 1u64;
    while k.checked_mul(k).is_some_and(|sq| sq <= n) {
        if n % k == 0 {
            divs.push(k);
            if k != n / k {
                divs.push(n / k);
            }
        }
        k += 1;
    }
    Some(divs)
}

/// Peel off rational roots found by divisor search over cleared denominators.
fn rational_roots(f: &Polynomial) -> (Vec<ExactScalar>, Polynomial) {
    let mut found = Vec::new();
    let mut rest = f.clone();
    if rest.coeffs().iter().any(|c| !c.is_real()) {
        return (found, rest);
    }
    loop {
        let Some(deg) = rest.degree() else { break };
        if deg == 0 {
            break;
        }
        if rest.coeff(0).is_zero() {
            found.push(ExactScalar::zero());
            rest = rest.exact_div(&Polynomial::x()).expect("x divides");
            continue;
        }
        // integer coefficients after clearing denominators
        let mut lcm = BigInt::one();
        for c in rest.coeffs() {
            let d = c.re().denom();
            let g = num_integer::gcd(lcm.clone(), d.clone());
            lcm = lcm / g * d;
        }
        let ints: Vec<BigInt> = rest
            .coeffs()
            .iter()
            .map(|c| (c.re() * BigRational::from_integer(lcm.clone())).to_integer())
            .collect();
        let Some(ps) = divisors_up_to_u64(&ints[0]) else { break };
        let Some(qs) = divisors_up_to_u64(&ints[deg]) else { break };
        let mut hit = None;
        'search: for p in &ps {
            for q in &qs {
                for sign in [1i64, -1] {
                    let cand = ExactScalar::from_rational(BigRational::new(
                        BigInt::from(sign) * BigInt::from(*p),
                        BigInt::from(*q),
                    ));
                    if rest.eval(&cand).is_zero() {
                        hit = Some(cand);
                        break 'search;
                    }
                }
            }
        }
        match hit {
            Some(r) => {
                let lin = Polynomial::linear(-r.clone());
                rest = rest.exact_div(&lin).expect("root divides");
                found.push(r);
            }
            None => break,
        }
    }
    (found, rest)
}

/// All roots of a squarefree polynomial, exact ones first.
pub fn roots_of_squarefree(f: &Polynomial, prec: u32) -> Result<Vec<RootValue>> {
    let mut out = Vec::new();
    let mut rest = f.monic();
    match rest.degree() {
        None | Some(0) => return Ok(out),
        _ => {}
    }
    let (ratroots, remaining) = rational_roots(&rest);
    out.extend(ratroots.into_iter().map(RootValue::Exact));
    rest = remaining;
    match rest.degree() {
        None | Some(0) => return Ok(out),
        Some(1) => {
            out.push(RootValue::Exact(-rest.coeff(0) / rest.coeff(1)));
            return Ok(out);
        }
        Some(2) => {
            if let Some((r1, r2)) = quadratic_roots_exact(&rest) {
                out.push(RootValue::Exact(r1));
                out.push(RootValue::Exact(r2));
                return Ok(out);
            }
        }
        _ => {}
    }
    for z in roots_squarefree(&rest, prec)? {
        out.push(RootValue::Numeric(z));
    }
    Ok(out)
}
