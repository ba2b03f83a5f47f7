//! Recover a plane from its intermediate Wronskians.
//!
//! The plane is the polynomial kernel of the order-(N+1) operator
//!   d/dx . (W_N^2 / (W_{N-1} W_{N+1})) . d/dx . ... . (W_1^2 / (W_2 W_0))
//!   . d/dx . (1/W_1)
//! applied over Poly_d. Instead of composing rational functions, the
//! numerator of the value after each differentiation step is tracked
//! directly: with C_1 = W_1, H_1 = Wr(C_1, u), the chain
//!   J_{r+1} = J_r^2 W_{r-1},  C_{r+1} = J_{r+1} W_{r+1},
//!   H_{r+1} = Wr(C_{r+1}, H_r)
//! keeps everything polynomial, and the final H_{N+1} vanishes exactly on
//! the kernel of the composed operator.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::poly::Polynomial;
use crate::scalar::ExactScalar;
use crate::schubert::PlaneBasis;

/// Monic intermediate Wronskians W_1, ..., W_{N+1} (W_0 = 1 implicit).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WronskianTuple {
    w: Vec<Polynomial>,
}

impl WronskianTuple {
    pub fn new(w: Vec<Polynomial>) -> Result<Self> {
        if w.is_empty() {
            return Err(Error::EmptyFamily);
        }
        if w.iter().any(|f| f.is_zero()) {
            return Err(Error::ZeroPolynomial);
        }
        // deg W_{l+1} - deg W_l = d_{l+1} - l >= 0, so weakly increasing
        let degs: Vec<usize> = w.iter().map(|f| f.degree().unwrap()).collect();
        if degs.windows(2).any(|p| p[0] > p[1]) {
            return Err(Error::InconsistentWronskians);
        }
        Ok(WronskianTuple {
            w: w.into_iter().map(|f| f.monic()).collect(),
        })
    }

    pub fn from_ladder(monic: &[Polynomial]) -> Result<Self> {
        WronskianTuple::new(monic.to_vec())
    }

    pub fn wronskians(&self) -> &[Polynomial] {
        &self.w
    }

    fn rank_n(&self) -> usize {
        self.w.len() - 1
    }
}

/// Image of u under the numerator chain; linear in u.
fn operator_numerator(wt: &WronskianTuple, u: &Polynomial) -> Polynomial {
    let n = wt.rank_n();
    let w = |r: usize| -> Polynomial {
        if r == 0 {
            Polynomial::one()
        } else {
            wt.w[r - 1].clone()
        }
    };
    let wr = |c: &Polynomial, h: &Polynomial| -> Polynomial {
        &(c * &h.derivative()) - &(&c.derivative() * h)
    };
    let mut companion = w(1);
    let mut junk = Polynomial::one();
    let mut h = wr(&companion, u);
    for r in 1..=n {
        junk = &(&junk * &junk) * &w(r - 1);
        companion = &junk * &w(r + 1);
        h = wr(&companion, &h);
    }
    h
}

/// The (N+1)-dimensional space of polynomial solutions of degree <= d,
/// found by exact nullspace of the operator on the monomial basis.
pub fn plane_from_wronskians(wt: &WronskianTuple, d: usize) -> Result<PlaneBasis> {
    let n = wt.rank_n();
    let mut max_len = 0usize;
    let mut images = Vec::with_capacity(d + 1);
    for j in 0..=d {
        let img = operator_numerator(wt, &Polynomial::monomial(j, ExactScalar::from_int(1)));
        max_len = max_len.max(img.coeffs().len());
        images.push(img);
    }
    // rows: coefficient positions; columns: monomial exponents
    let mut rows = vec![vec![ExactScalar::from_int(0); d + 1]; max_len.max(1)];
    for (j, img) in images.iter().enumerate() {
        for (pos, c) in img.coeffs().iter().enumerate() {
            rows[pos][j] = c.clone();
        }
    }
    let kernel = Mat::from_rows(rows).nullspace();
    if kernel.len() != n + 1 {
        return Err(Error::InconsistentWronskians);
    }
    let mut basis: Vec<Polynomial> = kernel
        .into_iter()
        .map(Polynomial::from_coeffs)
        .collect();
    basis.sort_by_key(|f| f.degree().unwrap_or(0));
    PlaneBasis::new(basis, n, d).map_err(|_| Error::InconsistentWronskians)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratfun::RationalFunction;
    use crate::schubert::intermediate_wronskians;

    fn example1_plane() -> PlaneBasis {
        PlaneBasis::new(
            vec![
                Polynomial::from_ints(&[1, 5]),
                Polynomial::from_ints(&[0, 0, 10, 10]),
                Polynomial::from_ints(&[0, 0, 0, 0, 5, 1]),
            ],
            2,
            5,
        )
        .unwrap()
    }

    #[test]
    fn round_trip_example_one() {
        let plane = example1_plane();
        let ladder = intermediate_wronskians(&plane).unwrap();
        let wt = WronskianTuple::from_ladder(&ladder.monic).unwrap();
        let recovered = plane_from_wronskians(&wt, 5).unwrap();
        assert!(recovered.same_subspace(&plane));
    }

    #[test]
    fn monomial_plane_from_trivial_tuple() {
        // W_l of (1, x, x^2) are constants
        let wt = WronskianTuple::new(vec![
            Polynomial::one(),
            Polynomial::one(),
            Polynomial::one(),
        ])
        .unwrap();
        let plane = plane_from_wronskians(&wt, 2).unwrap();
        let expect = PlaneBasis::new(
            vec![
                Polynomial::one(),
                Polynomial::x(),
                Polynomial::from_ints(&[0, 0, 1]),
            ],
            2,
            2,
        )
        .unwrap();
        assert!(plane.same_subspace(&expect));
    }

    #[test]
    fn tampered_tuple_is_rejected() {
        let plane = example1_plane();
        let ladder = intermediate_wronskians(&plane).unwrap();
        let mut monic = ladder.monic.clone();
        // random degree-3 polynomial in place of W_2
        monic[1] = Polynomial::from_ints(&[7, 3, 1, 1]).monic();
        let wt = WronskianTuple::new(monic).unwrap();
        assert!(matches!(
            plane_from_wronskians(&wt, 5),
            Err(Error::InconsistentWronskians)
        ));
    }

    #[test]
    fn recovered_basis_annihilated_by_composed_operator() {
        // apply the factored operator with genuine rational-function
        // arithmetic to every recovered basis member
        let plane = example1_plane();
        let ladder = intermediate_wronskians(&plane).unwrap();
        let wt = WronskianTuple::from_ladder(&ladder.monic).unwrap();
        let recovered = plane_from_wronskians(&wt, 5).unwrap();
        let n = 2usize;
        let w = |r: usize| -> Polynomial {
            if r == 0 {
                Polynomial::one()
            } else {
                wt.wronskians()[r - 1].clone()
            }
        };
        for u in &recovered.basis {
            let mut v = RationalFunction::new(u.clone(), w(1));
            v = v.derivative();
            for r in 1..=n {
                let g = RationalFunction::new(&(&w(r) * &w(r)) * &Polynomial::one(), &w(r + 1) * &w(r - 1));
                v = v * g;
                v = v.derivative();
            }
            assert!(v.is_zero(), "operator does not annihilate {u}");
        }
    }
}
