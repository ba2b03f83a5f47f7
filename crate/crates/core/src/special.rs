//! Construction of the unique element of a special Schubert intersection:
//! truncated-binomial bases for the extreme case m = d - N, and the general
//! procedure (forbidden-exponent set, binomial linear system, splitting of
//! the master polynomial into degree/order blocks).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{solve_square, Mat};
use crate::partition::Partition;
use crate::poly::{Point, Polynomial};
use crate::scalar::ExactScalar;
use crate::schubert::{
    cell_partition, expected_wronskian, schubert_frame, PlaneBasis, SchubertFrame,
    SchubertProblem,
};

fn big_binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k.min(n - k) {
        num *= BigInt::from(n - j);
        den *= BigInt::from(j + 1);
    }
    num / den
}

fn binom_scalar(n: usize, k: usize) -> ExactScalar {
    ExactScalar::from_rational(BigRational::from_integer(big_binomial(n, k)))
}

/// P_{m;d}(x) = 1 + dx + C(d,2)x^2 + ... + C(d,m)x^m.
pub fn truncated_binomial(m: usize, d: usize) -> Result<Polynomial> {
    if m > d {
        return Err(Error::BadTruncationOrders);
    }
    Ok(Polynomial::from_coeffs(
        (0..=m).map(|j| binom_scalar(d, j)).collect(),
    ))
}

/// The plane spanned by P_{m_1;d}, ..., P_{m_N;d}, (x+1)^d together with
/// its intersection data: a = (m_N+1-N, ..., m_1), the special partition
/// (d-N) at -1, and w = (d-m_1-N, ..., d-m_N-1).
pub fn truncated_basis(ms: &[usize], d: usize) -> Result<(PlaneBasis, SchubertProblem)> {
    let n = ms.len();
    if n == 0 || ms.windows(2).any(|w| w[0] >= w[1]) || *ms.last().unwrap() >= d {
        return Err(Error::BadTruncationOrders);
    }
    let mut basis = Vec::with_capacity(n + 1);
    for &m in ms {
        basis.push(truncated_binomial(m, d)?);
    }
    basis.push(truncated_binomial(d, d)?);
    let plane = PlaneBasis::new(basis, n, d)?;

    let a = Partition::new((0..n).map(|l| ms[n - 1 - l] - (n - 1 - l)).collect())?;
    let w = Partition::new((0..n).map(|l| d - ms[l] - (n - l)).collect())?;
    let problem = SchubertProblem::new(n, d, a, w, d - n)?;

    // membership in all three cells, checked on the constructed plane
    verify_memberships(&plane, &problem)?;
    Ok((plane, problem))
}

/// Cell memberships at 0, -1 and infinity plus the Wronskian identity.
pub fn verify_memberships(plane: &PlaneBasis, p: &SchubertProblem) -> Result<()> {
    let at_zero = cell_partition(plane, &Point::zero())?;
    if at_zero != p.a {
        return Err(Error::Internal(format!(
            "cell at 0 is {at_zero}, expected {}",
            p.a
        )));
    }
    let at_minus_one = cell_partition(plane, &Point::minus_one())?;
    if at_minus_one != Partition::special(p.m, p.rank_n) {
        return Err(Error::Internal(format!(
            "cell at -1 is {at_minus_one}, expected {}",
            Partition::special(p.m, p.rank_n)
        )));
    }
    let at_inf = cell_partition(plane, &Point::Infinity)?;
    if at_inf != p.w {
        return Err(Error::Internal(format!(
            "cell at infinity is {at_inf}, expected {}",
            p.w
        )));
    }
    let w_monic = plane.wronskian_monic();
    if w_monic != expected_wronskian(p).monic() {
        return Err(Error::Internal(format!(
            "Wronskian {w_monic} differs from x^|a| (x+1)^m"
        )));
    }
    Ok(())
}

/// Output of the general construction.
#[derive(Clone, Debug, Serialize)]
pub struct SpecialBasisResult {
    pub plane: PlaneBasis,
    pub constants: Vec<ExactScalar>,
    pub index_set: Vec<usize>,
    pub master_poly: Polynomial,
}

/// Build the unique element of a feasible special Schubert intersection.
///
/// The member of maximal order at -1 is
/// P = (x+1)^{m+N} + sum_s C_s (x+1)^{m+N+s}; the constants are pinned by
/// requiring that P has no terms x^l for l in the frame's index set, and the
/// basis members are the monomial blocks of P between consecutive forced
/// orders and degrees.
pub fn construct_special_basis(p: &SchubertProblem) -> Result<SpecialBasisResult> {
    let frame = schubert_frame(p)?;
    let index_set = frame.index_set();
    let kk = p.d - p.m - p.rank_n;
    if index_set.len() != kk {
        return Err(Error::Internal(format!(
            "index set size {} does not match d-m-N = {kk}",
            index_set.len()
        )));
    }

    // linear system: C(m+N, l_i) + sum_s C_s C(m+N+s, l_i) = 0
    let constants = if kk == 0 {
        Vec::new()
    } else {
        let rows: Vec<Vec<ExactScalar>> = index_set
            .iter()
            .map(|&l| (1..=kk).map(|s| binom_scalar(p.m + p.rank_n + s, l)).collect())
            .collect();
        let rhs: Vec<ExactScalar> = index_set
            .iter()
            .map(|&l| -binom_scalar(p.m + p.rank_n, l))
            .collect();
        solve_square(&Mat::from_rows(rows), &rhs)
            .ok_or_else(|| Error::Internal("singular binomial system".into()))?
    };

    let xp1 = Polynomial::from_ints(&[1, 1]);
    let mut master = xp1.pow(p.m + p.rank_n);
    for (s, c) in constants.iter().enumerate() {
        master = &master + &xp1.pow(p.m + p.rank_n + s + 1).scale(c);
    }

    let plane = split_master(&master, &frame, p)?;
    verify_memberships(&plane, p)?;
    Ok(SpecialBasisResult {
        plane,
        constants,
        index_set,
        master_poly: master,
    })
}

/// Cut the master polynomial into the monomial blocks [rho_{N+2-i}, d_i].
fn split_master(
    master: &Polynomial,
    frame: &SchubertFrame,
    p: &SchubertProblem,
) -> Result<PlaneBasis> {
    let blocks = frame.blocks();
    let mut basis = Vec::with_capacity(blocks.len());
    for &(lo, hi) in &blocks {
        let mut coeffs = vec![ExactScalar::zero(); hi + 1];
        for (e, c) in coeffs.iter_mut().enumerate().take(hi + 1).skip(lo) {
            *c = master.coeff(e);
        }
        let q = Polynomial::from_coeffs(coeffs);
        // the boundary coefficients pin the degree d_i and order rho_{N+2-i}
        if master.coeff(lo).is_zero() || master.coeff(hi).is_zero() {
            return Err(Error::SplittingDegenerate);
        }
        basis.push(q);
    }
    PlaneBasis::new(basis, p.rank_n, p.d)
}

/// Direct Bareiss determinant of the binomial matrix A_ij = C(d+1-j, l_i),
/// 1 <= i, j <= K.
pub fn binomial_system_determinant(d: usize, ls: &[usize]) -> ExactScalar {
    let kk = ls.len();
    let rows: Vec<Vec<ExactScalar>> = ls
        .iter()
        .map(|&l| (1..=kk).map(|j| binom_scalar(d + 1 - j, l)).collect())
        .collect();
    Mat::from_rows(rows).det()
}

/// Closed form for det(C(d+1-j, l_i)), obtained by unrolling the row/column
/// factor extraction and the fraction-decomposition recursion:
///
///   |det| = prod_j (d+1-j)! / prod_i (l_i! (d-l_i)!) * |prod_{i<j} (l_i - l_j)|
///
/// The magnitude comes from the product; the overall sign is read off the
/// direct determinant, which is also how ties against zero are avoided.
pub fn closed_form_determinant(
    d: usize,
    m: usize,
    rank_n: usize,
    ls: &[usize],
) -> Result<ExactScalar> {
    let kk = ls.len();
    if d < m + rank_n || d - m - rank_n != kk {
        return Err(Error::IndexSetSize {
            got: kk,
            expected: d.saturating_sub(m + rank_n),
        });
    }
    if kk == 0 {
        return Ok(ExactScalar::from_int(1));
    }
    for (i, &l) in ls.iter().enumerate() {
        if l > d {
            return Err(Error::Internal(format!("exponent {l} exceeds d = {d}")));
        }
        if ls[..i].contains(&l) {
            return Err(Error::Internal("index set entries must be distinct".into()));
        }
    }
    let mut num = BigInt::one();
    for j in 1..=kk {
        num *= factorial(d + 1 - j);
    }
    let mut den = BigInt::one();
    for &l in ls {
        den *= factorial(l) * factorial(d - l);
    }
    let mut vander = BigInt::one();
    for i in 0..kk {
        for j in i + 1..kk {
            vander *= BigInt::from(ls[i] as i64 - ls[j] as i64);
        }
    }
    let magnitude = BigRational::new(num * vander.clone(), den);
    let magnitude = if magnitude < BigRational::zero() {
        -magnitude
    } else {
        magnitude
    };
    let direct = binomial_system_determinant(d, ls);
    let sign = if direct.re() < &BigRational::zero() {
        ExactScalar::from_int(-1)
    } else {
        ExactScalar::from_int(1)
    };
    Ok(sign * ExactScalar::from_rational(magnitude))
}

fn factorial(n: usize) -> BigInt {
    let mut acc = BigInt::one();
    for k in 2..=n {
        acc *= BigInt::from(k);
    }
    acc
}
