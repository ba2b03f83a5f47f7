//! Concrete finite-dimensional irreducible sl_{N+1}-modules with exact
//! generator matrices, Casimir/Gaudin operators on a two-factor tensor
//! product, the universal weight function, Bethe-vector evaluation, and
//! singular-subspace dimensions.
//!
//! A module L_w is realized as the cyclic span of the top vector inside a
//! tensor product of exterior powers of the standard module, generated by
//! repeated application of the lowering operators with exact row reduction.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::CoeffField;
use crate::matrix::Mat;
use crate::nondeg::BetheCoordinates;
use crate::partition::{KVector, Partition, Weight};
use crate::scalar::ExactScalar;

pub const DEFAULT_DIM_CAP: usize = 5000;

type SparseVec = BTreeMap<usize, ExactScalar>;

fn vec_add_scaled(dst: &mut SparseVec, src: &SparseVec, c: &ExactScalar) {
    if c.is_zero() {
        return;
    }
    for (idx, v) in src {
        let t = v * c;
        let entry = dst.entry(*idx).or_insert_with(ExactScalar::zero);
        *entry += t;
        if entry.is_zero() {
            dst.remove(idx);
        }
    }
}

/// Square sparse matrix with sorted, duplicate-free rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMat {
    pub n: usize,
    rows: Vec<Vec<(usize, ExactScalar)>>,
}

impl SparseMat {
    pub fn zeros(n: usize) -> Self {
        SparseMat {
            n,
            rows: vec![Vec::new(); n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = SparseMat::zeros(n);
        for r in 0..n {
            m.rows[r].push((r, ExactScalar::one()));
        }
        m
    }

    pub fn from_diagonal(diag: Vec<ExactScalar>) -> Self {
        let n = diag.len();
        let mut m = SparseMat::zeros(n);
        for (r, v) in diag.into_iter().enumerate() {
            if !v.is_zero() {
                m.rows[r].push((r, v));
            }
        }
        m
    }

    pub fn set(&mut self, r: usize, c: usize, v: ExactScalar) {
        let row = &mut self.rows[r];
        match row.binary_search_by_key(&c, |&(col, _)| col) {
            Ok(pos) => {
                if v.is_zero() {
                    row.remove(pos);
                } else {
                    row[pos].1 = v;
                }
            }
            Err(pos) => {
                if !v.is_zero() {
                    row.insert(pos, (c, v));
                }
            }
        }
    }

    pub fn rows(&self) -> &[Vec<(usize, ExactScalar)>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    pub fn add(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.n, other.n);
        let mut out = SparseMat::zeros(self.n);
        for r in 0..self.n {
            let mut acc: BTreeMap<usize, ExactScalar> = BTreeMap::new();
            for (c, v) in &self.rows[r] {
                acc.insert(*c, v.clone());
            }
            for (c, v) in &other.rows[r] {
                let e = acc.entry(*c).or_insert_with(ExactScalar::zero);
                *e += v.clone();
            }
            out.rows[r] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        out
    }

    pub fn sub(&self, other: &SparseMat) -> SparseMat {
        self.add(&other.scale(&ExactScalar::from_int(-1)))
    }

    pub fn scale(&self, c: &ExactScalar) -> SparseMat {
        if c.is_zero() {
            return SparseMat::zeros(self.n);
        }
        let mut out = self.clone();
        for row in out.rows.iter_mut() {
            for (_, v) in row.iter_mut() {
                *v = v.clone() * c;
            }
        }
        out
    }

    pub fn mul(&self, other: &SparseMat) -> SparseMat {
        assert_eq!(self.n, other.n);
        let mut out = SparseMat::zeros(self.n);
        for r in 0..self.n {
            let mut acc: BTreeMap<usize, ExactScalar> = BTreeMap::new();
            for (k, v) in &self.rows[r] {
                for (c, w) in &other.rows[*k] {
                    let e = acc.entry(*c).or_insert_with(ExactScalar::zero);
                    *e += v * w;
                }
            }
            out.rows[r] = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
        }
        out
    }

    pub fn commutator(&self, other: &SparseMat) -> SparseMat {
        self.mul(other).sub(&other.mul(self))
    }

    /// Kronecker product acting on the pair space, index a*dim_b + b.
    pub fn kron(&self, other: &SparseMat) -> SparseMat {
        let n = self.n * other.n;
        let mut out = SparseMat::zeros(n);
        for (ra, row_a) in self.rows.iter().enumerate() {
            for (ca, va) in row_a {
                for (rb, row_b) in other.rows.iter().enumerate() {
                    let r = ra * other.n + rb;
                    for (cb, vb) in row_b {
                        out.set(r, ca * other.n + cb, va * vb);
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut out = SparseVec::new();
        for (r, row) in self.rows.iter().enumerate() {
            let mut acc = ExactScalar::zero();
            for (c, m) in row {
                if let Some(x) = v.get(c) {
                    acc += m * x;
                }
            }
            if !acc.is_zero() {
                out.insert(r, acc);
            }
        }
        out
    }
}

/// Subsets of {1..N+1} of size r as bitmasks, in increasing mask order.
fn subsets(n_plus_1: usize, r: usize) -> Vec<u32> {
    let mut out = Vec::new();
    for mask in 0u32..(1 << n_plus_1) {
        if mask.count_ones() as usize == r {
            out.push(mask);
        }
    }
    out
}

/// Action tables of the Chevalley generators on an exterior power.
struct FundamentalFactor {
    masks: Vec<u32>,
    index_of: BTreeMap<u32, usize>,
    top: usize,
}

impl FundamentalFactor {
    fn new(n_plus_1: usize, r: usize) -> Self {
        let masks = subsets(n_plus_1, r);
        let index_of = masks.iter().enumerate().map(|(i, &m)| (m, i)).collect();
        let top_mask = (1u32 << r) - 1;
        let top = masks.iter().position(|&m| m == top_mask).unwrap();
        FundamentalFactor {
            masks,
            index_of,
            top,
        }
    }

    fn dim(&self) -> usize {
        self.masks.len()
    }

    /// f_i replaces basis index i by i+1 (1-based letters).
    fn lower(&self, i: usize, local: usize) -> Option<usize> {
        let m = self.masks[local];
        let bi = 1u32 << (i - 1);
        let bj = 1u32 << i;
        if m & bi != 0 && m & bj == 0 {
            Some(self.index_of[&((m & !bi) | bj)])
        } else {
            None
        }
    }

    fn raise(&self, i: usize, local: usize) -> Option<usize> {
        let m = self.masks[local];
        let bi = 1u32 << (i - 1);
        let bj = 1u32 << i;
        if m & bj != 0 && m & bi == 0 {
            Some(self.index_of[&((m & !bj) | bi)])
        } else {
            None
        }
    }

    /// lambda-coefficient vector of a basis subset.
    fn weight_coeffs(&self, n_plus_1: usize, local: usize) -> Vec<i64> {
        let m = self.masks[local];
        (0..n_plus_1).map(|b| ((m >> b) & 1) as i64).collect()
    }
}

/// Weyl dimension of L_w for sl_{N+1}.
pub fn weyl_dimension(rank_n: usize, w: &Partition) -> usize {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 1..=rank_n {
        for j in i + 1..=rank_n + 1 {
            let wi = w.part(i) as i64;
            let wj = w.part(j) as i64;
            num *= BigInt::from(wi - wj + j as i64 - i as i64);
            den *= BigInt::from(j as i64 - i as i64);
        }
    }
    let q = BigRational::new(num, den);
    assert!(q.is_integer());
    let v = q.to_integer();
    use num_traits::ToPrimitive;
    v.to_usize().expect("dimension fits in usize")
}

/// A weight-graded basis with explicit exact generator matrices.
pub struct RepresentationModule {
    pub rank_n: usize,
    pub partition: Partition,
    pub dim: usize,
    pub e: Vec<SparseMat>,
    pub f: Vec<SparseMat>,
    pub h: Vec<SparseMat>,
    pub weights: Vec<Weight>,
    pub highest: usize,
}

struct AmbientSpace {
    factors: Vec<FundamentalFactor>,
    strides: Vec<usize>,
    n_plus_1: usize,
}

impl AmbientSpace {
    fn new(rank_n: usize, w: &Partition) -> Self {
        let n_plus_1 = rank_n + 1;
        let mut factors = Vec::new();
        for r in 1..=rank_n {
            let count = w.part(r) - w.part(r + 1);
            for _ in 0..count {
                factors.push(FundamentalFactor::new(n_plus_1, r));
            }
        }
        let mut strides = vec![1usize; factors.len()];
        for t in (0..factors.len().saturating_sub(1)).rev() {
            strides[t] = strides[t + 1] * factors[t + 1].dim();
        }
        AmbientSpace {
            factors,
            strides,
            n_plus_1,
        }
    }

    fn locals_of(&self, mut idx: usize) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.factors.len());
        for t in 0..self.factors.len() {
            out.push(idx / self.strides[t]);
            idx %= self.strides[t];
        }
        out
    }

    fn top_index(&self) -> usize {
        self.factors
            .iter()
            .zip(&self.strides)
            .map(|(f, s)| f.top * s)
            .sum()
    }

    fn apply_lower(&self, i: usize, v: &SparseVec) -> SparseVec {
        self.apply_leibniz(v, |f, local| f.lower(i, local))
    }

    fn apply_raise(&self, i: usize, v: &SparseVec) -> SparseVec {
        self.apply_leibniz(v, |f, local| f.raise(i, local))
    }

    fn apply_leibniz(
        &self,
        v: &SparseVec,
        step: impl Fn(&FundamentalFactor, usize) -> Option<usize>,
    ) -> SparseVec {
        let mut out = SparseVec::new();
        for (idx, c) in v {
            let locals = self.locals_of(*idx);
            for (t, f) in self.factors.iter().enumerate() {
                if let Some(new_local) = step(f, locals[t]) {
                    let new_idx = idx + new_local * self.strides[t] - locals[t] * self.strides[t];
                    let e = out.entry(new_idx).or_insert_with(ExactScalar::zero);
                    *e += c.clone();
                    if e.is_zero() {
                        out.remove(&new_idx);
                    }
                }
            }
        }
        out
    }

    fn weight_of_index(&self, idx: usize) -> Weight {
        let locals = self.locals_of(idx);
        let mut coeffs = vec![0i64; self.n_plus_1];
        for (t, f) in self.factors.iter().enumerate() {
            for (b, c) in f.weight_coeffs(self.n_plus_1, locals[t]).iter().enumerate() {
                coeffs[b] += c;
            }
        }
        Weight::new(coeffs)
    }
}

/// Reduce-and-express helper over a growing echelon of sparse vectors.
struct SpanSolver {
    // (pivot index, reduced vector, expression of the reduced vector in
    // terms of the stored basis vectors)
    rows: Vec<(usize, SparseVec, SparseVec)>,
}

impl SpanSolver {
    fn new() -> Self {
        SpanSolver { rows: Vec::new() }
    }

    /// Reduce v against the echelon. Returns the remainder and the basis
    /// combination accounting for the eliminated part.
    fn reduce(&self, v: &SparseVec) -> (SparseVec, SparseVec) {
        let mut rem = v.clone();
        let mut combo = SparseVec::new();
        for (pivot, reduced, expr) in &self.rows {
            let Some(c) = rem.get(pivot).cloned() else {
                continue;
            };
            let factor = c / reduced[pivot].clone();
            let neg = -factor.clone();
            vec_add_scaled(&mut rem, reduced, &neg);
            vec_add_scaled(&mut combo, expr, &factor);
        }
        (rem, combo)
    }

    /// Install a new basis vector (index `basis_idx`) whose reduced
    /// remainder is `rem` and eliminated part is `combo`.
    fn push(&mut self, basis_idx: usize, rem: SparseVec, combo: SparseVec) {
        let pivot = *rem.keys().next().expect("nonzero remainder");
        let mut expr = SparseVec::new();
        expr.insert(basis_idx, ExactScalar::one());
        vec_add_scaled(&mut expr, &combo, &ExactScalar::from_int(-1));
        self.rows.push((pivot, rem, expr));
    }
}

/// Build L_w as the cyclic closure of the top vector under the lowering
/// operators, with exact matrices for all Chevalley generators.
pub fn build_irrep(rank_n: usize, w: &Partition, cap: Option<usize>) -> Result<RepresentationModule> {
    assert_eq!(w.rank(), rank_n, "partition rank must match N");
    let cap = cap.unwrap_or(DEFAULT_DIM_CAP);
    let dim_expected = weyl_dimension(rank_n, w);
    if dim_expected > cap {
        return Err(Error::DimensionCap {
            dim: dim_expected,
            cap,
        });
    }

    let ambient = AmbientSpace::new(rank_n, w);
    let mut top = SparseVec::new();
    top.insert(ambient.top_index(), ExactScalar::one());

    let mut basis: Vec<SparseVec> = vec![top.clone()];
    let mut weights: Vec<Weight> = vec![ambient.weight_of_index(ambient.top_index())];
    let mut solver = SpanSolver::new();
    solver.push(0, top, SparseVec::new());

    // columns of the lowering matrices, filled during the closure walk
    let mut f_columns: Vec<Vec<Option<SparseVec>>> = vec![vec![None; 1]; rank_n];

    let mut next = 0usize;
    while next < basis.len() {
        for i in 1..=rank_n {
            let image = ambient.apply_lower(i, &basis[next]);
            if image.is_empty() {
                f_columns[i - 1][next] = Some(SparseVec::new());
                continue;
            }
            let (rem, combo) = solver.reduce(&image);
            if rem.is_empty() {
                f_columns[i - 1][next] = Some(combo);
            } else {
                let new_idx = basis.len();
                basis.push(image.clone());
                weights.push(weights[next].sub_alpha(i));
                solver.push(new_idx, rem, combo);
                for cols in f_columns.iter_mut() {
                    cols.push(None);
                }
                let mut col = SparseVec::new();
                col.insert(new_idx, ExactScalar::one());
                f_columns[i - 1][next] = Some(col);
            }
        }
        next += 1;
    }

    let dim = basis.len();
    if dim != dim_expected {
        return Err(Error::Internal(format!(
            "cyclic closure produced dimension {dim}, expected {dim_expected}"
        )));
    }

    let mut f_mats = Vec::with_capacity(rank_n);
    for cols in f_columns.iter() {
        let mut m = SparseMat::zeros(dim);
        for (k, col) in cols.iter().enumerate() {
            let col = col.as_ref().expect("filled during closure");
            for (r, v) in col {
                m.set(*r, k, v.clone());
            }
        }
        f_mats.push(m);
    }

    let mut e_mats = Vec::with_capacity(rank_n);
    for i in 1..=rank_n {
        let mut m = SparseMat::zeros(dim);
        for (k, b) in basis.iter().enumerate() {
            let image = ambient.apply_raise(i, b);
            let (rem, combo) = solver.reduce(&image);
            if !rem.is_empty() {
                return Err(Error::Internal(
                    "raising operator leaves the cyclic span".into(),
                ));
            }
            for (r, v) in combo {
                m.set(r, k, v);
            }
        }
        e_mats.push(m);
    }

    let mut h_mats = Vec::with_capacity(rank_n);
    for i in 1..=rank_n {
        let diag = weights
            .iter()
            .map(|wt| ExactScalar::from_int(wt.alpha_pairing(i)))
            .collect();
        h_mats.push(SparseMat::from_diagonal(diag));
    }

    // highest vector sanity: annihilated by every raising operator
    for m in &e_mats {
        let mut v = SparseVec::new();
        v.insert(0, ExactScalar::one());
        if !m.apply(&v).is_empty() {
            return Err(Error::Internal("top vector is not singular".into()));
        }
    }

    Ok(RepresentationModule {
        rank_n,
        partition: w.clone(),
        dim,
        e: e_mats,
        f: f_mats,
        h: h_mats,
        weights,
        highest: 0,
    })
}

impl RepresentationModule {
    /// Matrices of all gl elementary operators E_{ab} (1-based), derived
    /// from the Chevalley generators by bracket recursion, with the
    /// diagonal fixed by h_i and the total-degree scalar |w|.
    pub fn elementary_matrices(&self) -> Vec<Vec<SparseMat>> {
        let n1 = self.rank_n + 1;
        let mut e_mat: Vec<Vec<Option<SparseMat>>> = vec![vec![None; n1 + 1]; n1 + 1];
        for i in 1..=self.rank_n {
            e_mat[i][i + 1] = Some(self.e[i - 1].clone());
            e_mat[i + 1][i] = Some(self.f[i - 1].clone());
        }
        for dist in 2..n1 {
            for a in 1..=n1 - dist {
                let b = a + dist;
                let up = e_mat[a][b - 1]
                    .as_ref()
                    .unwrap()
                    .commutator(e_mat[b - 1][b].as_ref().unwrap());
                e_mat[a][b] = Some(up);
                let down = e_mat[b][b - 1]
                    .as_ref()
                    .unwrap()
                    .commutator(e_mat[b - 1][a].as_ref().unwrap());
                e_mat[b][a] = Some(down);
            }
        }
        // E_11 = (|w| Id + sum_i (N+1-i) h_i) / (N+1)
        let boxes = self.partition.codimension() as i64;
        let mut acc = SparseMat::identity(self.dim).scale(&ExactScalar::from_int(boxes));
        for i in 1..=self.rank_n {
            acc = acc.add(&self.h[i - 1].scale(&ExactScalar::from_int((n1 - i) as i64)));
        }
        let e11 = acc.scale(&ExactScalar::ratio(1, n1 as i64));
        e_mat[1][1] = Some(e11.clone());
        let mut prev = e11;
        for j in 2..=n1 {
            let next = prev.sub(&self.h[j - 2]);
            e_mat[j][j] = Some(next.clone());
            prev = next;
        }
        (1..=n1)
            .map(|a| (1..=n1).map(|b| e_mat[a][b].take().unwrap()).collect())
            .collect()
    }
}

/// The invariant pairing operator sum_{a,b} E_ab x E_ba minus the trace
/// correction, acting on the pair space of the two modules.
pub fn casimir_pair(mod_a: &RepresentationModule, mod_b: &RepresentationModule) -> SparseMat {
    assert_eq!(mod_a.rank_n, mod_b.rank_n);
    let n1 = mod_a.rank_n + 1;
    let ea = mod_a.elementary_matrices();
    let eb = mod_b.elementary_matrices();
    let mut acc = SparseMat::zeros(mod_a.dim * mod_b.dim);
    for a in 0..n1 {
        for b in 0..n1 {
            acc = acc.add(&ea[a][b].kron(&eb[b][a]));
        }
    }
    let correction = (mod_a.partition.codimension() * mod_b.partition.codimension()) as i64;
    let id = SparseMat::identity(mod_a.dim * mod_b.dim);
    acc.sub(&id.scale(&ExactScalar::ratio(correction, n1 as i64)))
}

/// H_j = C / (z_j - z_other) for the two-point model.
pub fn gaudin_hamiltonian(
    mod_a: &RepresentationModule,
    mod_b: &RepresentationModule,
    z: (&ExactScalar, &ExactScalar),
    j: usize,
) -> Result<SparseMat> {
    assert!(j == 1 || j == 2);
    let diff = if j == 1 {
        z.0.clone() - z.1
    } else {
        z.1.clone() - z.0
    };
    if diff.is_zero() {
        return Err(Error::EqualMarkedPoints);
    }
    Ok(casimir_pair(mod_a, mod_b).scale(&diff.inv()))
}

/// Operator x (x) 1 + 1 (x) y on the pair space.
pub fn diagonal_action(
    op_a: &SparseMat,
    op_b: &SparseMat,
    dim_a: usize,
    dim_b: usize,
) -> SparseMat {
    op_a.kron(&SparseMat::identity(dim_b))
        .add(&SparseMat::identity(dim_a).kron(op_b))
}

/// A pair of lowering words, one per tensor factor. Letters are simple-root
/// indices 1..=N.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WordTuple {
    pub words: [Vec<usize>; 2],
}

impl WordTuple {
    fn letter_counts(&self, rank_n: usize) -> Vec<usize> {
        let mut counts = vec![0usize; rank_n];
        for word in &self.words {
            for &l in word {
                counts[l - 1] += 1;
            }
        }
        counts
    }
}

/// Distinct arrangements of the multiset with `counts[i]` copies of letter
/// i+1, lexicographic.
fn arrangements(counts: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = counts.iter().sum();
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(total);
    let mut counts = counts.to_vec();
    fn rec(counts: &mut [usize], cur: &mut Vec<usize>, total: usize, out: &mut Vec<Vec<usize>>) {
        if cur.len() == total {
            out.push(cur.clone());
            return;
        }
        for l in 0..counts.len() {
            if counts[l] > 0 {
                counts[l] -= 1;
                cur.push(l + 1);
                rec(counts, cur, total, out);
                cur.pop();
                counts[l] += 1;
            }
        }
    }
    rec(&mut counts, &mut cur, total, &mut out);
    out
}

/// All pairs of words with total letter content given by k.
pub fn enumerate_word_tuples(k: &KVector) -> Vec<WordTuple> {
    let rank_n = k.rank();
    let mut splits: Vec<Vec<usize>> = vec![Vec::new()];
    for i in 1..=rank_n {
        let mut next = Vec::new();
        for s in &splits {
            for j in 0..=k.get(i) {
                let mut s2 = s.clone();
                s2.push(j);
                next.push(s2);
            }
        }
        splits = next;
    }
    let mut out = Vec::new();
    for split in splits {
        let counts1: Vec<usize> = split.clone();
        let counts2: Vec<usize> = (0..rank_n).map(|i| k.get(i + 1) - split[i]).collect();
        for w1 in arrangements(&counts1) {
            for w2 in arrangements(&counts2) {
                out.push(WordTuple {
                    words: [w1.clone(), w2],
                });
            }
        }
    }
    out
}

/// The expansion of the universal weight function: one symmetrized rational
/// coefficient per word tuple, evaluated at the given coordinates.
pub struct WeightFunctionExpansion<S> {
    pub k: KVector,
    pub terms: Vec<(WordTuple, S)>,
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    fn heap(k: usize, items: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if k == 1 {
            out.push(items.clone());
            return;
        }
        for i in 0..k {
            heap(k - 1, items, out);
            if k % 2 == 0 {
                items.swap(i, k - 1);
            } else {
                items.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut items, &mut out);
    out
}

/// The product of fractions attached to one word tuple under one
/// assignment of coordinates to occurrence slots.
///
/// Occurrence slots are numbered left to right through the concatenated
/// word; the permutations reshuffle which coordinate of a block lands in
/// which slot, and the symmetrized coefficient sums over all of them.
fn word_tuple_coefficient<S: CoeffField>(
    tuple: &WordTuple,
    bc: &BetheCoordinates<S>,
) -> Result<S> {
    let rank_n = bc.rank();
    // slot lists per word: (letter, occurrence number)
    let mut occ_counter = vec![0usize; rank_n];
    let mut slots: [Vec<(usize, usize)>; 2] = [Vec::new(), Vec::new()];
    for (widx, word) in tuple.words.iter().enumerate() {
        for &letter in word {
            slots[widx].push((letter, occ_counter[letter - 1]));
            occ_counter[letter - 1] += 1;
        }
    }
    let per_block_perms: Vec<Vec<Vec<usize>>> = (0..rank_n)
        .map(|i| permutations(bc.blocks[i].len()))
        .collect();
    // iterate the product group
    let mut indices = vec![0usize; rank_n];
    let mut total = S::zero();
    loop {
        let assignment: Vec<&Vec<usize>> = (0..rank_n)
            .map(|i| &per_block_perms[i][indices[i]])
            .collect();
        let mut term = S::one();
        let mut ok = true;
        for (widx, seg) in slots.iter().enumerate() {
            let zj = if widx == 0 { &bc.z.0 } else { &bc.z.1 };
            if seg.is_empty() {
                continue;
            }
            let value = |&(letter, occ): &(usize, usize)| -> S {
                bc.blocks[letter - 1][assignment[letter - 1][occ]].clone()
            };
            for pair in seg.windows(2) {
                let diff = value(&pair[0]) - value(&pair[1]);
                if diff.is_zero() {
                    ok = false;
                    break;
                }
                term = term / diff;
            }
            if !ok {
                break;
            }
            let last = value(seg.last().unwrap());
            let diff = last - zj.clone();
            if diff.is_zero() {
                ok = false;
                break;
            }
            term = term / diff;
        }
        if !ok {
            return Err(Error::CoincidentCoordinates);
        }
        total = total + term;
        // advance mixed-radix counter
        let mut pos = 0;
        loop {
            if pos == rank_n {
                return Ok(total);
            }
            indices[pos] += 1;
            if indices[pos] < per_block_perms[pos].len() {
                break;
            }
            indices[pos] = 0;
            pos += 1;
        }
    }
}

/// Steps I-IV: enumerate word tuples and compute each symmetrized
/// coefficient at the given coordinates.
pub fn universal_weight_function<S: CoeffField>(
    bc: &BetheCoordinates<S>,
) -> Result<WeightFunctionExpansion<S>> {
    bc.check_distinct()?;
    let k = KVector::new(bc.blocks.iter().map(|b| b.len()).collect());
    let tuples = enumerate_word_tuples(&k);
    let mut terms = Vec::with_capacity(tuples.len());
    for tuple in tuples {
        debug_assert_eq!(tuple.letter_counts(k.rank()), k.entries());
        let c = word_tuple_coefficient(&tuple, bc)?;
        terms.push((tuple, c));
    }
    Ok(WeightFunctionExpansion { k, terms })
}

/// A sparse vector in the tensor product of two modules.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorVec<S> {
    pub entries: BTreeMap<(usize, usize), S>,
}

impl<S: CoeffField> TensorVec<S> {
    pub fn new() -> Self {
        TensorVec {
            entries: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn add_term(&mut self, key: (usize, usize), v: S) {
        if v.is_zero() {
            return;
        }
        match self.entries.get_mut(&key) {
            Some(e) => {
                let sum = e.clone() + v;
                if sum.is_zero() {
                    self.entries.remove(&key);
                } else {
                    *e = sum;
                }
            }
            None => {
                self.entries.insert(key, v);
            }
        }
    }
}

impl<S: CoeffField> Default for TensorVec<S> {
    fn default() -> Self {
        Self::new()
    }
}

/// Apply a lowering word (letters act left to right, so the rightmost
/// letter acts first) to the highest vector, over any coefficient field.
fn apply_word<S: CoeffField>(
    module: &RepresentationModule,
    word: &[usize],
    conv: &impl Fn(&ExactScalar) -> S,
) -> BTreeMap<usize, S> {
    let mut v: BTreeMap<usize, S> = BTreeMap::new();
    v.insert(module.highest, S::one());
    for &letter in word.iter().rev() {
        let m = &module.f[letter - 1];
        let mut out: BTreeMap<usize, S> = BTreeMap::new();
        for (r, row) in m.rows().iter().enumerate() {
            let mut acc = S::zero();
            let mut any = false;
            for (c, coeff) in row {
                if let Some(x) = v.get(c) {
                    acc = acc + conv(coeff) * x.clone();
                    any = true;
                }
            }
            if any && !acc.is_zero() {
                out.insert(r, acc);
            }
        }
        v = out;
    }
    v
}

/// Sum of coefficient * (F_1 v_1) (x) (F_2 v_2) over the expansion.
pub fn evaluate_bethe_vector<S: CoeffField>(
    expansion: &WeightFunctionExpansion<S>,
    mod_a: &RepresentationModule,
    mod_b: &RepresentationModule,
    conv: &impl Fn(&ExactScalar) -> S,
) -> TensorVec<S> {
    let mut out = TensorVec::new();
    for (tuple, omega) in &expansion.terms {
        if omega.is_zero() {
            continue;
        }
        let va = apply_word(mod_a, &tuple.words[0], conv);
        if va.is_empty() {
            continue;
        }
        let vb = apply_word(mod_b, &tuple.words[1], conv);
        if vb.is_empty() {
            continue;
        }
        for (a, ca) in &va {
            for (b, cb) in &vb {
                out.add_term((*a, *b), omega.clone() * ca.clone() * cb.clone());
            }
        }
    }
    out
}

/// Apply x (x) 1 + 1 (x) y to a tensor vector without forming the big
/// matrix.
pub fn apply_diagonal<S: CoeffField>(
    op_a: &SparseMat,
    op_b: &SparseMat,
    v: &TensorVec<S>,
    conv: &impl Fn(&ExactScalar) -> S,
) -> TensorVec<S> {
    let mut out = TensorVec::new();
    // column access: transpose-style loop over entries
    for ((a, b), c) in &v.entries {
        for (r, row) in op_a.rows().iter().enumerate() {
            for (col, m) in row {
                if col == a {
                    out.add_term((r, *b), conv(m) * c.clone());
                }
            }
        }
        for (r, row) in op_b.rows().iter().enumerate() {
            for (col, m) in row {
                if col == b {
                    out.add_term((*a, r), conv(m) * c.clone());
                }
            }
        }
    }
    out
}

/// True when every raising operator annihilates the vector; the witness
/// lists the violating generator indices.
pub fn highest_weight_check(
    v: &TensorVec<ExactScalar>,
    mod_a: &RepresentationModule,
    mod_b: &RepresentationModule,
) -> Result<(bool, Vec<usize>)> {
    if v.is_zero() {
        return Err(Error::ZeroVector);
    }
    let conv = |s: &ExactScalar| s.clone();
    let mut violations = Vec::new();
    for i in 1..=mod_a.rank_n {
        let image = apply_diagonal(&mod_a.e[i - 1], &mod_b.e[i - 1], v, &conv);
        if !image.is_zero() {
            violations.push(i);
        }
    }
    Ok((violations.is_empty(), violations))
}

/// Dimension of the space of singular vectors of the target weight in the
/// tensor product, by exact nullspace of the stacked raising operators
/// restricted to the weight subspace.
pub fn singular_subspace_dimension(
    mod_a: &RepresentationModule,
    mod_b: &RepresentationModule,
    target: &Partition,
) -> usize {
    let target_weight = target.to_weight();
    let mut subset = Vec::new();
    for a in 0..mod_a.dim {
        for b in 0..mod_b.dim {
            if mod_a.weights[a].add(&mod_b.weights[b]) == target_weight {
                subset.push((a, b));
            }
        }
    }
    if subset.is_empty() {
        return 0;
    }
    let col_of: BTreeMap<(usize, usize), usize> = subset
        .iter()
        .enumerate()
        .map(|(c, &p)| (p, c))
        .collect();
    // rows: one per (i, image coordinate); columns: subset members
    let mut row_index: BTreeMap<(usize, usize, usize), usize> = BTreeMap::new();
    let mut triplets: Vec<(usize, usize, ExactScalar)> = Vec::new();
    for (&(a, b), &col) in &col_of {
        for i in 1..=mod_a.rank_n {
            let mut v = TensorVec::new();
            v.add_term((a, b), ExactScalar::one());
            let image = apply_diagonal(&mod_a.e[i - 1], &mod_b.e[i - 1], &v, &|s| s.clone());
            for ((ra, rb), coeff) in image.entries {
                let next = row_index.len();
                let r = *row_index.entry((i, ra, rb)).or_insert(next);
                triplets.push((r, col, coeff));
            }
        }
    }
    let mut mat = Mat::zeros(row_index.len(), subset.len());
    for (r, c, v) in triplets {
        let cur = mat.rows[r][c].clone();
        mat.rows[r][c] = cur + v;
    }
    subset.len() - mat.rank()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(e: &[usize]) -> Partition {
        Partition::new(e.to_vec()).unwrap()
    }

    #[test]
    fn weyl_dimensions() {
        assert_eq!(weyl_dimension(2, &part(&[1, 0])), 3);
        assert_eq!(weyl_dimension(1, &part(&[4])), 5);
        assert_eq!(weyl_dimension(2, &part(&[2, 1])), 8);
        assert_eq!(weyl_dimension(2, &part(&[3, 0])), 10);
        assert_eq!(weyl_dimension(3, &part(&[2, 1, 0])), 20);
        assert_eq!(weyl_dimension(2, &part(&[0, 0])), 1);
    }

    fn check_relations(m: &RepresentationModule) {
        for i in 0..m.rank_n {
            let he = m.h[i].commutator(&m.e[i]);
            assert_eq!(he, m.e[i].scale(&ExactScalar::from_int(2)), "[h,e] = 2e");
            let hf = m.h[i].commutator(&m.f[i]);
            assert_eq!(hf, m.f[i].scale(&ExactScalar::from_int(-2)), "[h,f] = -2f");
            let ef = m.e[i].commutator(&m.f[i]);
            assert_eq!(ef, m.h[i], "[e,f] = h");
            for j in 0..m.rank_n {
                if i != j {
                    assert!(m.e[i].commutator(&m.f[j]).is_zero(), "[e_i, f_j] = 0");
                    assert!(m.h[i].commutator(&m.h[j]).is_zero(), "[h_i, h_j] = 0");
                }
            }
        }
    }

    #[test]
    fn standard_module_sl3() {
        let m = build_irrep(2, &part(&[1, 0]), None).unwrap();
        assert_eq!(m.dim, 3);
        check_relations(&m);
    }

    #[test]
    fn sl2_string_modules() {
        for mm in 0..=5usize {
            let m = build_irrep(1, &part(&[mm]), None).unwrap();
            assert_eq!(m.dim, mm + 1);
            check_relations(&m);
        }
    }

    #[test]
    fn adjoint_module_sl3() {
        let m = build_irrep(2, &part(&[2, 1]), None).unwrap();
        assert_eq!(m.dim, 8);
        check_relations(&m);
        // highest weight pairing
        assert_eq!(m.weights[m.highest].alpha_pairing(1), 1);
        assert_eq!(m.weights[m.highest].alpha_pairing(2), 1);
    }

    #[test]
    fn symmetric_cube_sl3() {
        let m = build_irrep(2, &part(&[3, 0]), None).unwrap();
        assert_eq!(m.dim, 10);
        check_relations(&m);
    }

    #[test]
    fn dimension_cap_is_enforced() {
        let err = build_irrep(3, &part(&[9, 6, 3]), Some(100));
        assert!(matches!(err, Err(Error::DimensionCap { .. })));
    }

    #[test]
    fn casimir_on_pair_of_sl2_standards() {
        let a = build_irrep(1, &part(&[1]), None).unwrap();
        let b = build_irrep(1, &part(&[1]), None).unwrap();
        let c = casimir_pair(&a, &b);
        // symmetric vector: eigenvalue 1/2; antisymmetric: -3/2
        let mut sym = TensorVec::<ExactScalar>::new();
        sym.add_term((0, 1), ExactScalar::one());
        sym.add_term((1, 0), ExactScalar::one());
        let mut anti = TensorVec::<ExactScalar>::new();
        anti.add_term((0, 1), ExactScalar::one());
        anti.add_term((1, 0), ExactScalar::from_int(-1));
        let apply = |m: &SparseMat, v: &TensorVec<ExactScalar>| -> TensorVec<ExactScalar> {
            let mut out = TensorVec::new();
            let dim_b = 2;
            let mut dense: SparseVec = SparseVec::new();
            for ((x, y), c) in &v.entries {
                dense.insert(x * dim_b + y, c.clone());
            }
            for (idx, c) in m.apply(&dense) {
                out.add_term((idx / dim_b, idx % dim_b), c);
            }
            out
        };
        let cs = apply(&c, &sym);
        let expected: Vec<_> = sym
            .entries
            .iter()
            .map(|(k, v)| (*k, v.clone() * ExactScalar::ratio(1, 2)))
            .collect();
        assert_eq!(cs.entries.into_iter().collect::<Vec<_>>(), expected);
        let ca = apply(&c, &anti);
        let expected: Vec<_> = anti
            .entries
            .iter()
            .map(|(k, v)| (*k, v.clone() * ExactScalar::ratio(-3, 2)))
            .collect();
        assert_eq!(ca.entries.into_iter().collect::<Vec<_>>(), expected);
    }

    #[test]
    fn hamiltonians_at_standard_points() {
        let a = build_irrep(1, &part(&[1]), None).unwrap();
        let b = build_irrep(1, &part(&[2]), None).unwrap();
        let z0 = ExactScalar::zero();
        let z1 = ExactScalar::from_int(1);
        let h1 = gaudin_hamiltonian(&a, &b, (&z0, &z1), 1).unwrap();
        let h2 = gaudin_hamiltonian(&a, &b, (&z0, &z1), 2).unwrap();
        let c = casimir_pair(&a, &b);
        assert_eq!(h2, c);
        assert_eq!(h1, c.scale(&ExactScalar::from_int(-1)));
        assert!(h1.add(&h2).is_zero());
        assert!(matches!(
            gaudin_hamiltonian(&a, &b, (&z0, &z0), 1),
            Err(Error::EqualMarkedPoints)
        ));
    }

    #[test]
    fn casimir_commutes_with_diagonal_action() {
        let a = build_irrep(2, &part(&[1, 0]), None).unwrap();
        let b = build_irrep(2, &part(&[1, 1]), None).unwrap();
        let c = casimir_pair(&a, &b);
        for i in 0..2 {
            for (xa, xb) in [
                (&a.e[i], &b.e[i]),
                (&a.f[i], &b.f[i]),
                (&a.h[i], &b.h[i]),
            ] {
                let d = diagonal_action(xa, xb, a.dim, b.dim);
                assert!(c.commutator(&d).is_zero());
            }
        }
    }

    #[test]
    fn word_tuple_counts() {
        // N=2, k=(2,1): 12 tuples
        let k = KVector::new(vec![2, 1]);
        assert_eq!(enumerate_word_tuples(&k).len(), 12);
        // k = 0: single empty tuple
        let k0 = KVector::new(vec![0, 0]);
        let tuples = enumerate_word_tuples(&k0);
        assert_eq!(tuples.len(), 1);
        assert!(tuples[0].words[0].is_empty() && tuples[0].words[1].is_empty());
        // N=1, k=(1): two tuples
        let k1 = KVector::new(vec![1]);
        assert_eq!(enumerate_word_tuples(&k1).len(), 2);
    }

    #[test]
    fn sl2_weight_function_coefficients() {
        // k=(1): coefficients 1/(t-z1) and 1/(t-z2)
        let t = ExactScalar::ratio(1, 3);
        let bc = BetheCoordinates::new(vec![vec![t.clone()]], (part(&[1]), part(&[1])));
        let exp = universal_weight_function(&bc).unwrap();
        assert_eq!(exp.terms.len(), 2);
        for (tuple, coeff) in &exp.terms {
            if !tuple.words[0].is_empty() {
                assert_eq!(*coeff, (t.clone() - ExactScalar::zero()).pow(-1));
            } else {
                assert_eq!(*coeff, (t.clone() + ExactScalar::from_int(1)).pow(-1));
            }
        }
    }

    #[test]
    fn sl2_bethe_vector_is_singular_at_critical_point() {
        // pairings (p, q) = (1, 2): t = -1/3
        let a = build_irrep(1, &part(&[1]), None).unwrap();
        let b = build_irrep(1, &part(&[2]), None).unwrap();
        let t = ExactScalar::ratio(-1, 3);
        let bc = BetheCoordinates::new(vec![vec![t]], (part(&[1]), part(&[2])));
        let exp = universal_weight_function(&bc).unwrap();
        let v = evaluate_bethe_vector(&exp, &a, &b, &|s| s.clone());
        assert!(!v.is_zero());
        let (ok, witness) = highest_weight_check(&v, &a, &b).unwrap();
        assert!(ok, "witness: {witness:?}");
    }

    #[test]
    fn singular_dimensions_clebsch_gordan() {
        let a = build_irrep(1, &part(&[1]), None).unwrap();
        let b = build_irrep(1, &part(&[1]), None).unwrap();
        assert_eq!(singular_subspace_dimension(&a, &b, &part(&[2])), 1);
        assert_eq!(singular_subspace_dimension(&a, &b, &part(&[0])), 1);
        assert_eq!(singular_subspace_dimension(&a, &b, &part(&[1])), 0);
    }

    #[test]
    fn singular_dimension_matches_pieri_count() {
        let a = build_irrep(2, &part(&[2, 1]), None).unwrap();
        let b = build_irrep(2, &part(&[3, 0]), None).unwrap();
        assert_eq!(singular_subspace_dimension(&a, &b, &part(&[2, 1])), 1);
    }

    #[test]
    fn lowered_top_vector_is_not_singular() {
        let a = build_irrep(2, &part(&[1, 0]), None).unwrap();
        let b = build_irrep(2, &part(&[1, 0]), None).unwrap();
        let mut v = TensorVec::<ExactScalar>::new();
        // f_1 (v1 (x) v2) has a nonzero e_1 image
        let fa = a.f[0].apply(&{
            let mut top = SparseVec::new();
            top.insert(a.highest, ExactScalar::one());
            top
        });
        for (idx, c) in fa {
            v.add_term((idx, b.highest), c);
        }
        let mut top = SparseVec::new();
        top.insert(a.highest, ExactScalar::one());
        for (idx, c) in b.f[0].apply(&top) {
            v.add_term((a.highest, idx), c);
        }
        let (ok, witness) = highest_weight_check(&v, &a, &b).unwrap();
        assert!(!ok);
        assert_eq!(witness, vec![1]);
        assert!(highest_weight_check(&TensorVec::new(), &a, &b).is_err());
    }
}
