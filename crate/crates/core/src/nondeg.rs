//! Additional-root extraction (T-polynomials), non-degeneracy certification,
//! relative discriminants and resultants, the generating function of a
//! Schubert intersection, the master function in root coordinates, and
//! Bethe-equation residuals.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::partition::Partition;
use crate::poly::{discriminant, resultant, Point, Polynomial};
use crate::scalar::ExactScalar;
use crate::schubert::{schubert_frame, SchubertProblem, WronskianLadder};

/// f = lc(f) * T * Z with T monic not vanishing at any marked point and Z
/// monic with roots only at marked points.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TZSplit {
    pub t: Polynomial,
    pub z: Polynomial,
}

pub fn split_tz(f: &Polynomial, marked: &[ExactScalar]) -> Result<TZSplit> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut z = Polynomial::one();
    for zj in marked {
        let ord = f.order_at(&Point::Finite(zj.clone()), f.degree().unwrap())?;
        z = z * Polynomial::linear(-zj.clone()).pow(ord);
    }
    let t = f
        .monic()
        .exact_div(&z)
        .expect("the product of root factors divides");
    Ok(TZSplit { t, z })
}

/// Discriminant of a polynomial of degree <= 1 is taken to be 1, so the
/// products below stay well-formed for small additional-root counts.
fn disc_or_one(f: &Polynomial) -> Result<ExactScalar> {
    if f.degree().unwrap_or(0) <= 1 {
        Ok(ExactScalar::from_int(1))
    } else {
        discriminant(f)
    }
}

/// Delta_z(f) = Delta(T) * Res(Z, T)^2.
pub fn relative_discriminant(f: &Polynomial, marked: &[ExactScalar]) -> Result<ExactScalar> {
    let split = split_tz(f, marked)?;
    let d = disc_or_one(&split.t)?;
    let r = if split.z.is_constant() || split.t.is_constant() {
        ExactScalar::from_int(1)
    } else {
        resultant(&split.z, &split.t)?
    };
    Ok(d * r.clone() * r)
}

/// Res_z(f1, f2) = Res(T1, T2) * Res(T1, Z2) * Res(T2, Z1).
pub fn relative_resultant(
    f1: &Polynomial,
    f2: &Polynomial,
    marked: &[ExactScalar],
) -> Result<ExactScalar> {
    let s1 = split_tz(f1, marked)?;
    let s2 = split_tz(f2, marked)?;
    let mut acc = ExactScalar::from_int(1);
    for (a, b) in [(&s1.t, &s2.t), (&s1.t, &s2.z), (&s2.t, &s1.z)] {
        if a.is_constant() && b.is_constant() {
            continue;
        }
        acc = acc * resultant(a, b)?;
    }
    Ok(acc)
}

/// The monic additional-root polynomials T_1, ..., T_N, with
/// T_{N+1-i} = W_i / Z_i. Degrees are checked against the frame.
pub fn t_polynomials(
    ladder: &WronskianLadder,
    problem: &SchubertProblem,
) -> Result<Vec<Polynomial>> {
    let frame = schubert_frame(problem)?;
    let n = problem.rank_n;
    let mut ts = vec![Polynomial::one(); n];
    for i in 1..=n {
        let quotient = ladder.monic[i - 1]
            .exact_div(&frame.z_polys[i - 1])
            .ok_or_else(|| {
                Error::FrameMismatch(format!(
                    "W_{i} is not divisible by its forced-root polynomial"
                ))
            })?;
        let idx = n + 1 - i; // T index
        let expected = frame.t_degrees.get(idx);
        if quotient.degree().unwrap_or(0) != expected {
            return Err(Error::FrameMismatch(format!(
                "deg(W_{i}/Z_{i}) = {} but the frame expects k_{idx} = {expected}",
                quotient.degree().unwrap_or(0)
            )));
        }
        ts[idx - 1] = quotient;
    }
    Ok(ts)
}

/// One boolean per polynomial/pair, gathered by family.
#[derive(Clone, Debug, Serialize)]
pub struct NondegeneracyReport {
    pub nondegenerate: bool,
    pub no_vanish_at_marked: Vec<bool>,
    pub squarefree: Vec<bool>,
    pub coprime_neighbors: Vec<bool>,
}

/// Definition check: the T-polynomials must avoid the marked points, be
/// squarefree, and neighboring ones must share no root.
pub fn certify_nondegenerate(ts: &[Polynomial], marked: &[ExactScalar]) -> Result<NondegeneracyReport> {
    let mut no_vanish = Vec::with_capacity(ts.len());
    let mut squarefree = Vec::with_capacity(ts.len());
    for t in ts {
        no_vanish.push(marked.iter().all(|z| !t.eval(z).is_zero()));
        let d = disc_or_one(t)?;
        squarefree.push(!d.is_zero());
    }
    let mut coprime = Vec::new();
    for pair in ts.windows(2) {
        let r = if pair[0].is_constant() || pair[1].is_constant() {
            ExactScalar::from_int(1)
        } else {
            resultant(&pair[0], &pair[1])?
        };
        coprime.push(!r.is_zero());
    }
    let nondegenerate = no_vanish.iter().all(|&b| b)
        && squarefree.iter().all(|&b| b)
        && coprime.iter().all(|&b| b);
    Ok(NondegeneracyReport {
        nondegenerate,
        no_vanish_at_marked: no_vanish,
        squarefree,
        coprime_neighbors: coprime,
    })
}

/// Full certification for a plane claimed to lie in the intersection.
pub fn is_nondegenerate(
    ladder: &WronskianLadder,
    problem: &SchubertProblem,
) -> Result<(NondegeneracyReport, Vec<Polynomial>)> {
    let ts = t_polynomials(ladder, problem)?;
    let marked = [ExactScalar::zero(), ExactScalar::from_int(-1)];
    let report = certify_nondegenerate(&ts, &marked)?;
    Ok((report, ts))
}

/// Auxiliary-variable values grouped by simple root, with the marked points
/// and the two finite partitions.
#[derive(Clone, Debug)]
pub struct BetheCoordinates<S> {
    pub blocks: Vec<Vec<S>>,
    pub z: (S, S),
    pub weights: (Partition, Partition),
}

impl<S: CoeffField> BetheCoordinates<S> {
    /// Standard coordinates at the marked points (0, -1).
    pub fn new(blocks: Vec<Vec<S>>, weights: (Partition, Partition)) -> Self {
        BetheCoordinates {
            blocks,
            z: (S::zero(), -S::one()),
            weights,
        }
    }

    pub fn rank(&self) -> usize {
        self.blocks.len()
    }

    /// (alpha_i, Lambda at z_j), j = 0 or 1.
    fn pairing(&self, i: usize, j: usize) -> i64 {
        let w = if j == 0 { &self.weights.0 } else { &self.weights.1 };
        w.part(i) as i64 - w.part(i + 1) as i64
    }

    fn marked(&self, j: usize) -> &S {
        if j == 0 {
            &self.z.0
        } else {
            &self.z.1
        }
    }

    /// Coordinates must be distinct inside each block and across adjacent
    /// blocks; the master function has poles otherwise.
    pub fn check_distinct(&self) -> Result<()> {
        for block in &self.blocks {
            for (l, a) in block.iter().enumerate() {
                for b in block.iter().skip(l + 1) {
                    if (a.clone() - b.clone()).is_zero() {
                        return Err(Error::CoincidentCoordinates);
                    }
                }
            }
        }
        for pair in self.blocks.windows(2) {
            for a in &pair[0] {
                for b in &pair[1] {
                    if (a.clone() - b.clone()).is_zero() {
                        return Err(Error::CoincidentCoordinates);
                    }
                }
            }
        }
        Ok(())
    }
}

/// Master function
///   Psi(t) = prod (t_l(i)-z_j)^{-(alpha_i, Lambda_j)}
///          * prod_{l<s} (t_l(i)-t_s(i))^2
///          * prod (t_l(i)-t_s(i+1))^{-1}.
pub fn master_function_value<S: CoeffField>(bc: &BetheCoordinates<S>) -> Result<S> {
    bc.check_distinct()?;
    let n = bc.rank();
    let mut value = S::one();
    for i in 1..=n {
        for t in &bc.blocks[i - 1] {
            for j in 0..2 {
                let p = bc.pairing(i, j);
                if p == 0 {
                    continue;
                }
                let base = t.clone() - bc.marked(j).clone();
                if base.is_zero() {
                    return Err(Error::CoincidentCoordinates);
                }
                value = value * base.pow_i64(-p);
            }
        }
        let block = &bc.blocks[i - 1];
        for (l, a) in block.iter().enumerate() {
            for b in block.iter().skip(l + 1) {
                let d = a.clone() - b.clone();
                value = value * d.clone() * d;
            }
        }
        if i < n {
            for a in &bc.blocks[i - 1] {
                for b in &bc.blocks[i] {
                    let d = a.clone() - b.clone();
                    value = value * d.pow_i64(-1);
                }
            }
        }
    }
    Ok(value)
}

/// Left-hand sides of the Bethe equations, one entry per coordinate
/// (block-major order). All zero exactly at the critical points of the
/// master function.
pub fn bethe_residuals<S: CoeffField>(bc: &BetheCoordinates<S>) -> Result<Vec<S>> {
    bc.check_distinct()?;
    let n = bc.rank();
    let mut out = Vec::new();
    for i in 1..=n {
        let block = &bc.blocks[i - 1];
        for (l, t) in block.iter().enumerate() {
            let mut r = S::zero();
            for j in 0..2 {
                let p = bc.pairing(i, j);
                if p == 0 {
                    continue;
                }
                let den = t.clone() - bc.marked(j).clone();
                if den.is_zero() {
                    return Err(Error::CoincidentCoordinates);
                }
                r = r - S::from_i64(p) / den;
            }
            for (s, u) in block.iter().enumerate() {
                if s != l {
                    r = r + S::from_i64(2) / (t.clone() - u.clone());
                }
            }
            if i >= 2 {
                for u in &bc.blocks[i - 2] {
                    r = r - S::one() / (t.clone() - u.clone());
                }
            }
            if i < n {
                for u in &bc.blocks[i] {
                    r = r - S::one() / (t.clone() - u.clone());
                }
            }
            out.push(r);
        }
    }
    Ok(out)
}

/// Generating function of the intersection, evaluated through relative
/// discriminants and resultants of the intermediate Wronskians
/// W_i = T_{N+1-i} Z_i:
///
///   Phi = prod_i Delta_z(W_i) / prod_i Res_z(W_{i+1}, W_i).
///
/// The resultant arguments are ordered so that the root-coordinate
/// expansion of Phi coincides exactly with the master function, with no
/// leftover sign.
pub fn generating_function_value(ts: &[Polynomial], p: &SchubertProblem) -> Result<ExactScalar> {
    let frame = schubert_frame(p)?;
    let n = p.rank_n;
    if ts.len() != n {
        return Err(Error::FrameMismatch(format!(
            "need {n} T-polynomials, got {}",
            ts.len()
        )));
    }
    for (idx, t) in ts.iter().enumerate() {
        let expected = frame.t_degrees.get(idx + 1);
        if t.degree().unwrap_or(0) != expected {
            return Err(Error::FrameMismatch(format!(
                "deg T_{} = {} but the frame expects {expected}",
                idx + 1,
                t.degree().unwrap_or(0)
            )));
        }
    }
    let marked = [ExactScalar::zero(), ExactScalar::from_int(-1)];
    // W_i for i = 1..N+1, with T_0 = 1
    let w_at = |i: usize| -> Polynomial {
        let t = if i <= n {
            ts[n - i].clone()
        } else {
            Polynomial::one()
        };
        t * frame.z_polys[i - 1].clone()
    };
    let mut numer = ExactScalar::from_int(1);
    for i in 1..=n {
        numer = numer * relative_discriminant(&w_at(i), &marked)?;
    }
    let mut denom = ExactScalar::from_int(1);
    for i in 1..=n {
        denom = denom * relative_resultant(&w_at(i + 1), &w_at(i), &marked)?;
    }
    if denom.is_zero() {
        return Err(Error::CoincidentCoordinates);
    }
    Ok(numer / denom)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::KVector;
    use crate::schubert::intermediate_wronskians;
    use crate::special::construct_special_basis;

    fn marked() -> [ExactScalar; 2] {
        [ExactScalar::zero(), ExactScalar::from_int(-1)]
    }

    fn part(e: &[usize]) -> Partition {
        Partition::new(e.to_vec()).unwrap()
    }

    fn example1_coordinates() -> BetheCoordinates<ExactScalar> {
        let i = ExactScalar::i();
        let t11 = (ExactScalar::from_int(-2) + &i) / ExactScalar::from_int(5);
        let t12 = (ExactScalar::from_int(-2) - &i) / ExactScalar::from_int(5);
        BetheCoordinates::new(
            vec![vec![t11, t12], vec![ExactScalar::ratio(-1, 5)]],
            (part(&[2, 1]), part(&[3, 0])),
        )
    }

    #[test]
    fn tz_split_of_fixture_wronskian() {
        // x(10x^2+8x+2) splits as Z = x, T = x^2 + (4/5)x + 1/5
        let f = Polynomial::x() * Polynomial::from_ints(&[2, 8, 10]);
        let s = split_tz(&f, &marked()).unwrap();
        assert_eq!(s.z, Polynomial::x());
        assert_eq!(
            s.t,
            Polynomial::from_coeffs(vec![
                ExactScalar::ratio(1, 5),
                ExactScalar::ratio(4, 5),
                ExactScalar::from_int(1),
            ])
        );
        // no marked roots: T = monic f, Z = 1
        let g = Polynomial::from_ints(&[1, 5]);
        let s = split_tz(&g, &marked()).unwrap();
        assert_eq!(s.z, Polynomial::one());
        assert_eq!(s.t, g.monic());
        // pure marked factor
        let h = Polynomial::x().pow(3) * Polynomial::from_ints(&[1, 1]).pow(3);
        let s = split_tz(&h, &marked()).unwrap();
        assert_eq!(s.t, Polynomial::one());
        assert_eq!(s.z, h);
    }

    #[test]
    fn relative_discriminant_values() {
        // T-only input: Delta_z = Delta(f)
        let f = Polynomial::from_coeffs(vec![
            ExactScalar::ratio(1, 5),
            ExactScalar::ratio(4, 5),
            ExactScalar::from_int(1),
        ]);
        assert_eq!(
            relative_discriminant(&f, &marked()).unwrap(),
            ExactScalar::ratio(-4, 25)
        );
        // with a marked factor x: Delta_z(xT) = Delta(T) Res(x, T)^2
        let g = Polynomial::x() * f.clone();
        let t0 = f.eval(&ExactScalar::zero());
        let expect = ExactScalar::ratio(-4, 25) * t0.clone() * t0;
        assert_eq!(relative_discriminant(&g, &marked()).unwrap(), expect);
        // and it agrees with Delta(f)/Delta(Z) on a monic product (Z = x
        // is linear, so Delta(Z) = 1)
        let dg = discriminant(&g).unwrap();
        assert_eq!(dg, relative_discriminant(&g, &marked()).unwrap());
        // pure Z input
        let h = Polynomial::x() * Polynomial::from_ints(&[1, 1]);
        assert_eq!(
            relative_discriminant(&h, &marked()).unwrap(),
            ExactScalar::from_int(1)
        );
    }

    #[test]
    fn relative_resultant_values() {
        // both pure Z
        let f1 = Polynomial::x();
        let f2 = Polynomial::from_ints(&[1, 1]);
        assert_eq!(
            relative_resultant(&f1, &f2, &marked()).unwrap(),
            ExactScalar::from_int(1)
        );
        // T-only against mixed
        let g1 = Polynomial::from_ints(&[1, 5]).monic();
        let t2 = Polynomial::from_coeffs(vec![
            ExactScalar::ratio(1, 5),
            ExactScalar::ratio(4, 5),
            ExactScalar::from_int(1),
        ]);
        let g2 = Polynomial::x() * t2.clone();
        let expect = resultant(&g1, &t2).unwrap() * resultant(&g1, &Polynomial::x()).unwrap();
        assert_eq!(relative_resultant(&g1, &g2, &marked()).unwrap(), expect);
        // shared T root
        let h = Polynomial::from_ints(&[3, 1]);
        assert!(relative_resultant(&h, &h, &marked()).unwrap().is_zero());
    }

    #[test]
    fn example1_residuals_vanish_exactly() {
        let bc = example1_coordinates();
        let res = bethe_residuals(&bc).unwrap();
        assert_eq!(res.len(), 3);
        for r in res {
            assert!(r.is_zero());
        }
    }

    #[test]
    fn sl2_closed_form_critical_point() {
        // N=1, pairings (p, q) at z=(0,-1): t = -p/(p+q)
        for (p, q) in [(1i64, 1i64), (2, 3), (5, 1)] {
            let t = ExactScalar::from_rational(num_rational::BigRational::new(
                num_bigint::BigInt::from(-p),
                num_bigint::BigInt::from(p + q),
            ));
            let bc = BetheCoordinates::new(
                vec![vec![t]],
                (part(&[p as usize]), part(&[q as usize])),
            );
            let res = bethe_residuals(&bc).unwrap();
            assert!(res[0].is_zero(), "p={p}, q={q}");
            let v = master_function_value(&bc).unwrap();
            assert!(!v.is_zero());
        }
    }

    #[test]
    fn perturbed_coordinates_fail() {
        let mut bc = example1_coordinates();
        bc.blocks[1][0] = bc.blocks[1][0].clone() + ExactScalar::from_int(1);
        let res = bethe_residuals(&bc).unwrap();
        assert!(res.iter().any(|r| !r.is_zero()));
    }

    #[test]
    fn residuals_error_on_coincident_coordinates() {
        let t = ExactScalar::ratio(1, 3);
        let bc = BetheCoordinates::new(
            vec![vec![t.clone(), t]],
            (part(&[2]), part(&[2])),
        );
        assert!(matches!(
            bethe_residuals(&bc),
            Err(Error::CoincidentCoordinates)
        ));
    }

    #[test]
    fn master_function_is_block_symmetric() {
        let i = ExactScalar::i();
        let a = ExactScalar::ratio(1, 3) + &i;
        let b = ExactScalar::ratio(-2, 7);
        let c = ExactScalar::ratio(5, 4);
        let bc1 = BetheCoordinates::new(
            vec![vec![a.clone(), b.clone()], vec![c.clone()]],
            (part(&[2, 1]), part(&[3, 0])),
        );
        let bc2 = BetheCoordinates::new(
            vec![vec![b, a], vec![c]],
            (part(&[2, 1]), part(&[3, 0])),
        );
        assert_eq!(
            master_function_value(&bc1).unwrap(),
            master_function_value(&bc2).unwrap()
        );
    }

    #[test]
    fn master_function_single_variable_closed_form() {
        // N=1, k=1: Psi = t^{-p} (t+1)^{-q}
        let p = 2usize;
        let q = 3usize;
        let t = ExactScalar::ratio(-2, 5);
        let bc = BetheCoordinates::new(vec![vec![t.clone()]], (part(&[p]), part(&[q])));
        let v = master_function_value(&bc).unwrap();
        let expect = t.pow(-(p as i64)) * (t + &ExactScalar::from_int(1)).pow(-(q as i64));
        assert_eq!(v, expect);
    }

    #[test]
    fn phi_equals_psi_on_example_one() {
        let problem = SchubertProblem::new(2, 5, part(&[2, 1]), part(&[2, 1]), 3).unwrap();
        let r = construct_special_basis(&problem).unwrap();
        let ladder = intermediate_wronskians(&r.plane).unwrap();
        let ts = t_polynomials(&ladder, &problem).unwrap();
        assert_eq!(ts[1], Polynomial::from_coeffs(vec![
            ExactScalar::ratio(1, 5),
            ExactScalar::from_int(1),
        ]));
        let phi = generating_function_value(&ts, &problem).unwrap();
        let psi = master_function_value(&example1_coordinates()).unwrap();
        assert_eq!(phi, psi);
        assert!(!phi.is_zero());
    }

    #[test]
    fn phi_equals_psi_on_random_t_polynomials() {
        // same frame, arbitrary admissible roots: the identity is algebraic
        let problem = SchubertProblem::new(2, 5, part(&[2, 1]), part(&[2, 1]), 3).unwrap();
        let roots1 = [ExactScalar::ratio(1, 2), ExactScalar::ratio(-3, 7)];
        let roots2 = [ExactScalar::ratio(2, 9)];
        let t1 = Polynomial::linear(-roots1[0].clone()) * Polynomial::linear(-roots1[1].clone());
        let t2 = Polynomial::linear(-roots2[0].clone());
        let phi = generating_function_value(&[t1, t2], &problem).unwrap();
        let bc = BetheCoordinates::new(
            vec![roots1.to_vec(), roots2.to_vec()],
            (part(&[2, 1]), part(&[3, 0])),
        );
        let psi = master_function_value(&bc).unwrap();
        assert_eq!(phi, psi);
    }

    #[test]
    fn nondegeneracy_of_example_one() {
        let problem = SchubertProblem::new(2, 5, part(&[2, 1]), part(&[2, 1]), 3).unwrap();
        let r = construct_special_basis(&problem).unwrap();
        let ladder = intermediate_wronskians(&r.plane).unwrap();
        let (report, ts) = is_nondegenerate(&ladder, &problem).unwrap();
        assert!(report.nondegenerate);
        assert_eq!(ts.len(), 2);
        let frame = schubert_frame(&problem).unwrap();
        assert_eq!(frame.t_degrees, KVector::new(vec![2, 1]));
    }

    #[test]
    fn artificial_double_root_is_degenerate() {
        // T with a double root fails the squarefree check
        let t_bad = Polynomial::from_ints(&[1, 1]).pow(0)
            * Polynomial::linear(ExactScalar::ratio(-1, 3)).pow(2);
        let report = certify_nondegenerate(
            &[t_bad, Polynomial::linear(ExactScalar::ratio(1, 2))],
            &marked(),
        )
        .unwrap();
        assert!(!report.nondegenerate);
        assert_eq!(report.squarefree, vec![false, true]);
        assert_eq!(report.no_vanish_at_marked, vec![true, true]);
    }
}
