//! Schubert cells with respect to osculating flags of the rational normal
//! curve, the derived frame of a special intersection (degrees, orders,
//! forced root polynomials, additional-root counts) and intermediate
//! Wronskians of a plane of polynomials.

use std::cmp::Ordering;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::dyadic::{CDyadic, Dyadic};
use crate::error::{Error, Result};
use crate::matrix::Mat;
use crate::partition::{KVector, Partition};
use crate::poly::{wronskian, Point, Polynomial};
use crate::roots::{roots_of_squarefree, RootValue};
use crate::scalar::ExactScalar;

/// The data of a special Schubert intersection: partitions a at 0 and w at
/// infinity, and the special partition (m) at -1, inside Gr_{N+1}(Poly_d).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ProblemRepr", into = "ProblemRepr")]
pub struct SchubertProblem {
    pub rank_n: usize,
    pub d: usize,
    pub a: Partition,
    pub w: Partition,
    pub m: usize,
}

#[derive(Serialize, Deserialize)]
struct ProblemRepr {
    #[serde(rename = "N")]
    n: usize,
    d: usize,
    a: Vec<usize>,
    w: Vec<usize>,
    m: usize,
}

impl TryFrom<ProblemRepr> for SchubertProblem {
    type Error = Error;
    fn try_from(r: ProblemRepr) -> Result<Self> {
        SchubertProblem::new(r.n, r.d, Partition::new(r.a)?, Partition::new(r.w)?, r.m)
    }
}

impl From<SchubertProblem> for ProblemRepr {
    fn from(p: SchubertProblem) -> ProblemRepr {
        ProblemRepr {
            n: p.rank_n,
            d: p.d,
            a: p.a.entries().to_vec(),
            w: p.w.entries().to_vec(),
            m: p.m,
        }
    }
}

impl SchubertProblem {
    pub fn new(rank_n: usize, d: usize, a: Partition, w: Partition, m: usize) -> Result<Self> {
        if rank_n == 0 || d < rank_n {
            return Err(Error::InvalidProblem(format!(
                "need 1 <= N <= d, got N={rank_n}, d={d}"
            )));
        }
        if a.rank() != rank_n || w.rank() != rank_n {
            return Err(Error::InvalidProblem(format!(
                "partitions must have rank {rank_n}"
            )));
        }
        let c = d - rank_n;
        if a.part(1) > c || w.part(1) > c {
            return Err(Error::InvalidProblem(format!(
                "partition entries must not exceed d - N = {c}"
            )));
        }
        let dim = (rank_n + 1) * c;
        let sum = a.codimension() + w.codimension() + m;
        if sum != dim {
            return Err(Error::InvalidProblem(format!(
                "codimensions |a| + |w| + m = {sum} must equal (N+1)(d-N) = {dim}"
            )));
        }
        Ok(SchubertProblem { rank_n, d, a, w, m })
    }

    /// Fill in m from the dimension condition.
    pub fn with_inferred_m(rank_n: usize, d: usize, a: Partition, w: Partition) -> Result<Self> {
        if rank_n == 0 || d < rank_n {
            return Err(Error::InvalidProblem(format!(
                "need 1 <= N <= d, got N={rank_n}, d={d}"
            )));
        }
        let dim = (rank_n + 1) * (d - rank_n);
        let used = a.codimension() + w.codimension();
        if used > dim {
            return Err(Error::InvalidProblem(format!(
                "codimensions |a| + |w| = {used} exceed (N+1)(d-N) = {dim}"
            )));
        }
        SchubertProblem::new(rank_n, d, a, w, dim - used)
    }

    pub fn grassmannian_dim(&self) -> usize {
        (self.rank_n + 1) * (self.d - self.rank_n)
    }
}

/// x^{|a|} (x+1)^m, the Wronskian every member of the intersection must have.
pub fn expected_wronskian(p: &SchubertProblem) -> Polynomial {
    let x = Polynomial::x();
    let xp1 = Polynomial::from_ints(&[1, 1]);
    x.pow(p.a.codimension()) * xp1.pow(p.m)
}

/// A basis of an (N+1)-dimensional plane of polynomials of degree <= d with
/// no base point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneBasis {
    pub basis: Vec<Polynomial>,
    pub rank_n: usize,
    pub d: usize,
}

impl PlaneBasis {
    pub fn new(basis: Vec<Polynomial>, rank_n: usize, d: usize) -> Result<Self> {
        if basis.len() != rank_n + 1 {
            return Err(Error::InvalidProblem(format!(
                "plane basis needs N+1 = {} polynomials, got {}",
                rank_n + 1,
                basis.len()
            )));
        }
        if basis.iter().any(|f| f.is_zero()) {
            return Err(Error::DegenerateBasis);
        }
        let max_deg = basis.iter().map(|f| f.degree().unwrap()).max().unwrap();
        if max_deg > d {
            return Err(Error::InvalidProblem(format!(
                "basis degree {max_deg} exceeds ambient degree {d}"
            )));
        }
        let plane = PlaneBasis { basis, rank_n, d };
        if plane.coeff_matrix().rank() != rank_n + 1 {
            return Err(Error::DegenerateBasis);
        }
        // no base point: no common finite root, and degree d is attained
        if max_deg < d {
            return Err(Error::BasePoint);
        }
        let mut gcd = plane.basis[0].clone();
        for f in &plane.basis[1..] {
            gcd = gcd.gcd(f);
        }
        if gcd.degree().unwrap_or(0) > 0 {
            return Err(Error::BasePoint);
        }
        Ok(plane)
    }

    /// Rows of coefficients, ascending exponents, padded to d+1 columns.
    pub fn coeff_matrix(&self) -> Mat {
        let rows = self
            .basis
            .iter()
            .map(|f| {
                let mut row = f.coeffs().to_vec();
                row.resize(self.d + 1, ExactScalar::zero());
                row
            })
            .collect();
        Mat::from_rows(rows)
    }

    /// Canonical reduced-echelon coefficient rows; equal for equal subspaces.
    pub fn canonical_rows(&self) -> Vec<Vec<ExactScalar>> {
        crate::matrix::row_span_canonical(self.coeff_matrix().rows)
    }

    pub fn same_subspace(&self, other: &PlaneBasis) -> bool {
        self.d == other.d && self.canonical_rows() == other.canonical_rows()
    }

    pub fn wronskian_raw(&self) -> Polynomial {
        wronskian(&self.basis).expect("nonempty basis")
    }

    pub fn wronskian_monic(&self) -> Polynomial {
        self.wronskian_raw().monic()
    }

    /// Basis triangular with respect to degree: one member per degree,
    /// strictly increasing. Input rows are recombined but never rescaled,
    /// so a basis that is already degree-distinct comes back unchanged.
    pub fn degree_flag_basis(&self) -> Result<Vec<Polynomial>> {
        let mut polys = self.basis.clone();
        polys.sort_by_key(|f| f.degree().unwrap());
        loop {
            let mut changed = false;
            for i in 0..polys.len() {
                for j in 0..i {
                    let (di, dj) = (polys[i].degree(), polys[j].degree());
                    if di.is_some() && di == dj {
                        let ratio = polys[i].leading_coeff() / polys[j].leading_coeff();
                        polys[i] = &polys[i] - &polys[j].scale(&ratio);
                        changed = true;
                    }
                }
            }
            if polys.iter().any(|f| f.is_zero()) {
                return Err(Error::DegenerateBasis);
            }
            polys.sort_by_key(|f| f.degree().unwrap());
            if !changed {
                break;
            }
        }
        Ok(polys)
    }

    /// The strictly increasing degrees d_1 < ... < d_{N+1} of the plane.
    pub fn degrees(&self) -> Result<Vec<usize>> {
        Ok(self
            .degree_flag_basis()?
            .iter()
            .map(|f| f.degree().unwrap())
            .collect())
    }
}

/// The set of N+1 distinct orders of the plane at a point, ascending.
fn order_spectrum(plane: &PlaneBasis, xi: &Point) -> Result<Vec<usize>> {
    let k = plane.rank_n + 1;
    let rows: Vec<Vec<ExactScalar>> = match xi {
        Point::Finite(z) => plane
            .basis
            .iter()
            .map(|f| {
                let mut row = f.shifted_coeffs(z);
                row.resize(plane.d + 1, ExactScalar::zero());
                row
            })
            .collect(),
        Point::Infinity => plane
            .basis
            .iter()
            .map(|f| {
                let mut row = f.coeffs().to_vec();
                row.resize(plane.d + 1, ExactScalar::zero());
                row.reverse();
                row
            })
            .collect(),
    };
    let mut m = Mat::from_rows(rows);
    let pivots = m.rref();
    if pivots.len() != k {
        return Err(Error::DegenerateBasis);
    }
    Ok(pivots)
}

fn partition_from_spectrum(spectrum: &[usize], rank_n: usize) -> Result<Partition> {
    let k = rank_n + 1;
    debug_assert_eq!(spectrum.len(), k);
    if spectrum[0] != 0 {
        return Err(Error::BasePoint);
    }
    let mut entries = Vec::with_capacity(rank_n);
    for i in 1..=rank_n {
        entries.push(spectrum[k - i] - (k - i));
    }
    Partition::new(entries)
}

/// The unique partition with the plane in the open cell at xi, read off the
/// order spectrum: w_i = o_{N+2-i} - (N+1-i).
pub fn cell_partition(plane: &PlaneBasis, xi: &Point) -> Result<Partition> {
    let spectrum = order_spectrum(plane, xi)?;
    partition_from_spectrum(&spectrum, plane.rank_n)
}

/// Derived data of a special intersection.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchubertFrame {
    /// d_1 < ... < d_N < d_{N+1} = d.
    pub degrees: Vec<usize>,
    /// rho_1 > ... > rho_N > rho_{N+1} = 0.
    pub orders_at_zero: Vec<usize>,
    /// Z_1 = 1, ..., Z_{N+1} = the expected Wronskian.
    pub z_polys: Vec<Polynomial>,
    /// Additional-root counts (k_1, ..., k_N).
    pub t_degrees: KVector,
}

impl SchubertFrame {
    /// Exponents l with d_l < l < rho_{N+1-l}, where the master polynomial
    /// has no terms. Ascending.
    pub fn index_set(&self) -> Vec<usize> {
        let n = self.degrees.len() - 1;
        let mut out = Vec::new();
        for l in 1..=n {
            let lo = self.degrees[l - 1] + 1;
            let hi = self.orders_at_zero[n - l];
            for e in lo..hi {
                out.push(e);
            }
        }
        out
    }

    /// Monomial exponent blocks [rho_{N+2-i}, d_i] of the basis members.
    pub fn blocks(&self) -> Vec<(usize, usize)> {
        let n = self.degrees.len() - 1;
        (1..=n + 1)
            .map(|i| {
                let lo = if i == 1 {
                    0
                } else {
                    self.orders_at_zero[n + 1 - i]
                };
                (lo, self.degrees[i - 1])
            })
            .collect()
    }
}

/// Degrees d_l = d - w_l + l - N - 1, orders rho_l = a_l + N + 1 - l, the
/// forced-root polynomials and the additional-root counts. Fails with
/// `EmptyIntersection` when the degree/order interlacing is violated.
pub fn schubert_frame(p: &SchubertProblem) -> Result<SchubertFrame> {
    let n = p.rank_n;
    let d = p.d;
    let mut degrees = Vec::with_capacity(n + 1);
    for l in 1..=n {
        let dl = d as i64 - p.w.part(l) as i64 + l as i64 - n as i64 - 1;
        if dl < 0 {
            return Err(Error::EmptyIntersection);
        }
        degrees.push(dl as usize);
    }
    degrees.push(d);
    let mut orders = Vec::with_capacity(n + 1);
    for l in 1..=n {
        orders.push(p.a.part(l) + n + 1 - l);
    }
    orders.push(0);

    // interlacing d_l < rho_{N+1-l} <= d_{l+1}
    for l in 1..=n {
        let rho = orders[n - l];
        if !(degrees[l - 1] < rho && rho <= degrees[l]) {
            return Err(Error::EmptyIntersection);
        }
    }

    let x = Polynomial::x();
    let xp1 = Polynomial::from_ints(&[1, 1]);
    let mut z_polys = Vec::with_capacity(n + 1);
    for i in 1..=n + 1 {
        // multiplicity at 0 is the tail sum a_{N+2-i} + ... + a_N; the
        // factor (x+1)^m enters only in the last step
        let tail: usize = (n + 2 - i..=n).map(|l| p.a.part(l)).sum();
        let at_minus_one = if i == n + 1 { p.m } else { 0 };
        z_polys.push(x.pow(tail) * xp1.pow(at_minus_one));
    }

    let c = d - n;
    let mut k = vec![0usize; n];
    for i in 1..=n {
        let w_head: usize = (1..=i).map(|l| p.w.part(l)).sum();
        let a_tail: usize = (n + 2 - i..=n).map(|l| p.a.part(l)).sum();
        let deg = i as i64 * c as i64 - w_head as i64 - a_tail as i64;
        if deg < 0 {
            return Err(Error::EmptyIntersection);
        }
        k[n - i] = deg as usize;
    }

    Ok(SchubertFrame {
        degrees,
        orders_at_zero: orders,
        z_polys,
        t_degrees: KVector::new(k),
    })
}

/// Intermediate Wronskians W_1, ..., W_{N+1} of the degree flag.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WronskianLadder {
    pub raw: Vec<Polynomial>,
    pub monic: Vec<Polynomial>,
}

pub fn intermediate_wronskians(plane: &PlaneBasis) -> Result<WronskianLadder> {
    let flag = plane.degree_flag_basis()?;
    let mut raw = Vec::with_capacity(flag.len());
    for l in 1..=flag.len() {
        let w = wronskian(&flag[..l])?;
        if w.is_zero() {
            return Err(Error::DegenerateBasis);
        }
        raw.push(w);
    }
    let monic = raw.iter().map(|w| w.monic()).collect();
    Ok(WronskianLadder { raw, monic })
}

/// A singular point of a plane together with its cell partition.
#[derive(Clone, Debug, Serialize)]
pub struct SingularPoint {
    pub point: RootValue,
    pub partition: Partition,
}

#[derive(Clone, Debug, Serialize)]
pub struct SingularPoints {
    pub finite: Vec<SingularPoint>,
    pub infinity: Partition,
}

impl SingularPoints {
    /// Sum of codimensions over all singular points including infinity.
    pub fn total_codimension(&self) -> usize {
        self.finite
            .iter()
            .map(|s| s.partition.codimension())
            .sum::<usize>()
            + self.infinity.codimension()
    }
}

/// Order spectrum at a numeric point: ranks decided against a squared
/// magnitude threshold.
fn numeric_order_spectrum(
    plane: &PlaneBasis,
    xi: &CDyadic,
    prec: u32,
    tol_sq: &Dyadic,
) -> Result<Vec<usize>> {
    let k = plane.rank_n + 1;
    // rows of scaled derivatives f^(j)(xi)/j!
    let mut rows: Vec<Vec<CDyadic>> = Vec::with_capacity(k);
    for f in &plane.basis {
        let mut row = Vec::with_capacity(plane.d + 1);
        let mut cur = f.clone();
        let mut fact = ExactScalar::from_int(1);
        for j in 0..=plane.d {
            if j > 0 {
                fact = fact * ExactScalar::from_int(j as i64);
            }
            let coeffs: Vec<CDyadic> = cur
                .coeffs()
                .iter()
                .map(|c| CDyadic::from_exact(c, prec))
                .collect();
            let mut acc = CDyadic::zero();
            for c in coeffs.iter().rev() {
                acc = acc * xi.clone() + c.clone();
            }
            let scale = CDyadic::from_exact(&fact.inv(), prec);
            row.push(acc * scale);
            cur = cur.derivative();
        }
        rows.push(row);
    }
    let mut spectrum = Vec::new();
    let mut row = 0usize;
    for col in 0..=plane.d {
        if row >= k {
            break;
        }
        let pivot = (row..k).max_by(|&r1, &r2| {
            rows[r1][col]
                .abs_sq()
                .cmp_value(&rows[r2][col].abs_sq())
        });
        let Some(p) = pivot else { break };
        if rows[p][col].abs_sq().cmp_value(tol_sq) != Ordering::Greater {
            continue;
        }
        rows.swap(row, p);
        for r in row + 1..k {
            let factor = rows[r][col].clone() / rows[row][col].clone();
            for c in col..=plane.d {
                let t = factor.clone() * rows[row][c].clone();
                rows[r][c] = rows[r][c].clone() - t;
            }
        }
        spectrum.push(col);
        row += 1;
    }
    if spectrum.len() != k {
        return Err(Error::DegenerateBasis);
    }
    Ok(spectrum)
}

/// All finite singular points of the plane with their cell partitions, plus
/// the partition at infinity. Exactly representable Wronskian roots come
/// back exact; the rest are located numerically at the given precision.
pub fn singular_points(plane: &PlaneBasis, prec: u32) -> Result<SingularPoints> {
    let w = plane.wronskian_monic();
    let mut finite = Vec::new();
    for (factor, _mult) in w.squarefree_decomposition() {
        for root in roots_of_squarefree(&factor, prec)? {
            let partition = match &root {
                RootValue::Exact(z) => cell_partition(plane, &Point::Finite(z.clone()))?,
                RootValue::Numeric(z) => {
                    let tol_sq = Dyadic::pow10(-60, prec);
                    let spectrum = numeric_order_spectrum(plane, z, prec, &tol_sq)?;
                    partition_from_spectrum(&spectrum, plane.rank_n)?
                }
            };
            finite.push(SingularPoint { point: root, partition });
        }
    }
    let infinity = cell_partition(plane, &Point::Infinity)?;
    Ok(SingularPoints { finite, infinity })
}

#[cfg(test)]
mod tests {
    use super::*;

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

    fn example1_problem() -> SchubertProblem {
        SchubertProblem::new(
            2,
            5,
            Partition::new(vec![2, 1]).unwrap(),
            Partition::new(vec![2, 1]).unwrap(),
            3,
        )
        .unwrap()
    }

    #[test]
    fn cell_partitions_of_example_plane() {
        let v = example1_plane();
        assert_eq!(
            cell_partition(&v, &Point::zero()).unwrap(),
            Partition::new(vec![2, 1]).unwrap()
        );
        assert_eq!(
            cell_partition(&v, &Point::Infinity).unwrap(),
            Partition::new(vec![2, 1]).unwrap()
        );
        assert_eq!(
            cell_partition(&v, &Point::minus_one()).unwrap(),
            Partition::new(vec![3, 0]).unwrap()
        );
        // a regular point
        assert_eq!(
            cell_partition(&v, &Point::Finite(ExactScalar::from_int(7))).unwrap(),
            Partition::zero(2)
        );
    }

    #[test]
    fn expected_wronskian_of_fixtures() {
        let p = example1_problem();
        let expect = Polynomial::x().pow(3) * Polynomial::from_ints(&[1, 1]).pow(3);
        assert_eq!(expected_wronskian(&p), expect);
        assert_eq!(example1_plane().wronskian_monic(), expect.monic());
    }

    #[test]
    fn frame_of_example_one() {
        let frame = schubert_frame(&example1_problem()).unwrap();
        assert_eq!(frame.degrees, vec![1, 3, 5]);
        assert_eq!(frame.orders_at_zero, vec![4, 2, 0]);
        assert_eq!(frame.z_polys[0], Polynomial::one());
        assert_eq!(frame.z_polys[1], Polynomial::x());
        assert_eq!(
            frame.z_polys[2],
            Polynomial::x().pow(3) * Polynomial::from_ints(&[1, 1]).pow(3)
        );
        assert_eq!(frame.t_degrees, KVector::new(vec![2, 1]));
        // d - m - N = 0: the master polynomial is (x+1)^5 on the nose
        assert!(frame.index_set().is_empty());
    }

    #[test]
    fn frame_of_example_four() {
        let p = SchubertProblem::new(
            2,
            5,
            Partition::new(vec![2, 1]).unwrap(),
            Partition::new(vec![2, 2]).unwrap(),
            2,
        )
        .unwrap();
        let frame = schubert_frame(&p).unwrap();
        assert_eq!(frame.degrees, vec![1, 2, 5]);
        assert_eq!(frame.orders_at_zero, vec![4, 2, 0]);
        assert_eq!(frame.index_set(), vec![3usize]);
        assert_eq!(frame.blocks(), vec![(0, 1), (2, 2), (4, 5)]);
    }

    #[test]
    fn infeasible_interlacing_is_empty() {
        // rho_2 = a_2 + 1 = 4 exceeds d_2 = d - w_2 + 2 - N - 1 = 3
        let r = SchubertProblem::new(
            2,
            5,
            Partition::new(vec![3, 3]).unwrap(),
            Partition::new(vec![2, 1]).unwrap(),
            0,
        )
        .unwrap();
        assert!(matches!(schubert_frame(&r), Err(Error::EmptyIntersection)));
    }

    #[test]
    fn intermediate_wronskians_of_example_one() {
        let v = example1_plane();
        let ladder = intermediate_wronskians(&v).unwrap();
        assert_eq!(ladder.raw[0], Polynomial::from_ints(&[1, 5]));
        // raw second Wronskian is 10x(10x^2+8x+2) = 20x + 80x^2 + 100x^3
        assert_eq!(ladder.raw[1], Polynomial::from_ints(&[0, 20, 80, 100]));
        assert_eq!(
            ladder.monic[2],
            (Polynomial::x().pow(3) * Polynomial::from_ints(&[1, 1]).pow(3)).monic()
        );
    }

    #[test]
    fn monomial_plane_wronskians() {
        let v = PlaneBasis::new(
            vec![
                Polynomial::one(),
                Polynomial::x(),
                Polynomial::from_ints(&[0, 0, 1]),
            ],
            2,
            2,
        )
        .unwrap();
        let ladder = intermediate_wronskians(&v).unwrap();
        assert_eq!(ladder.monic[0], Polynomial::one());
        assert_eq!(ladder.monic[1], Polynomial::one());
        assert_eq!(ladder.monic[2], Polynomial::one());
    }

    #[test]
    fn singular_points_of_example_one() {
        let v = example1_plane();
        let sp = singular_points(&v, 128).unwrap();
        assert_eq!(sp.infinity, Partition::new(vec![2, 1]).unwrap());
        assert_eq!(sp.finite.len(), 2);
        for s in &sp.finite {
            match &s.point {
                RootValue::Exact(z) if z.is_zero() => {
                    assert_eq!(s.partition, Partition::new(vec![2, 1]).unwrap())
                }
                RootValue::Exact(z) => {
                    assert_eq!(*z, ExactScalar::from_int(-1));
                    assert_eq!(s.partition, Partition::new(vec![3, 0]).unwrap());
                }
                RootValue::Numeric(_) => panic!("fixture roots are exact"),
            }
        }
        assert_eq!(sp.total_codimension(), 9);
    }

    #[test]
    fn base_point_is_rejected() {
        // every member divisible by x
        let err = PlaneBasis::new(
            vec![Polynomial::x(), Polynomial::from_ints(&[0, 0, 1])],
            1,
            2,
        );
        assert!(matches!(err, Err(Error::BasePoint)));
        // degree d never attained
        let err = PlaneBasis::new(vec![Polynomial::one(), Polynomial::x()], 1, 2);
        assert!(matches!(err, Err(Error::BasePoint)));
    }

    #[test]
    fn problem_json_round_trip() {
        let p = example1_problem();
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(s, "{\"N\":2,\"d\":5,\"a\":[2,1],\"w\":[2,1],\"m\":3}");
        let back: SchubertProblem = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
        // dimension condition enforced
        assert!(serde_json::from_str::<SchubertProblem>(
            "{\"N\":2,\"d\":5,\"a\":[2,1],\"w\":[2,1],\"m\":4}"
        )
        .is_err());
    }
}
