//! Partitions, dominant weights and the k-vector bookkeeping that ties
//! Schubert data to highest weights.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Weakly decreasing sequence of N non-negative integers.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PartitionRepr", into = "PartitionRepr")]
pub struct Partition {
    entries: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct PartitionRepr {
    #[serde(rename = "N")]
    n: usize,
    entries: Vec<usize>,
}

impl TryFrom<PartitionRepr> for Partition {
    type Error = Error;
    fn try_from(r: PartitionRepr) -> Result<Self> {
        if r.entries.len() != r.n {
            return Err(Error::InvalidPartition(format!(
                "{} entries for rank {}",
                r.entries.len(),
                r.n
            )));
        }
        Partition::new(r.entries)
    }
}

impl From<Partition> for PartitionRepr {
    fn from(p: Partition) -> PartitionRepr {
        PartitionRepr {
            n: p.entries.len(),
            entries: p.entries,
        }
    }
}

impl Partition {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{entries:?} not weakly decreasing")));
        }
        Ok(Partition { entries })
    }

    /// The special partition (m, 0, ..., 0) of the given rank.
    pub fn special(m: usize, rank: usize) -> Self {
        let mut entries = vec![0; rank];
        if rank > 0 {
            entries[0] = m;
        }
        Partition { entries }
    }

    pub fn zero(rank: usize) -> Self {
        Partition {
            entries: vec![0; rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    /// Entry with the convention w_{N+1} = 0.
    pub fn part(&self, i: usize) -> usize {
        assert!(i >= 1);
        self.entries.get(i - 1).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    /// |w| = w_1 + ... + w_N, the codimension of the Schubert variety.
    pub fn codimension(&self) -> usize {
        self.entries.iter().sum()
    }

    /// w* = (w_1, w_1 - w_N, w_1 - w_{N-1}, ..., w_1 - w_2).
    pub fn dual(&self) -> Partition {
        if self.entries.is_empty() {
            return self.clone();
        }
        let w1 = self.entries[0];
        let mut entries = Vec::with_capacity(self.entries.len());
        entries.push(w1);
        for i in (1..self.entries.len()).rev() {
            entries.push(w1 - self.entries[i]);
        }
        Partition { entries }
    }

    /// (alpha_i, Lambda_w) = w_i - w_{i+1}.
    pub fn alpha_pairing(&self, i: usize) -> Result<i64> {
        if i < 1 || i > self.rank() {
            return Err(Error::RootIndexOutOfRange {
                index: i,
                rank: self.rank(),
            });
        }
        Ok(self.part(i) as i64 - self.part(i + 1) as i64)
    }

    pub fn to_weight(&self) -> Weight {
        let mut coeffs: Vec<i64> = self.entries.iter().map(|&e| e as i64).collect();
        coeffs.push(0);
        Weight::new(coeffs)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A weight written in the lambda basis, normalized so the last
/// coefficient vanishes. Equality is then structural.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct Weight {
    coeffs: Vec<i64>,
}

impl Weight {
    /// Coefficients of lambda_1..lambda_{N+1}; reduced modulo
    /// lambda_1 + ... + lambda_{N+1} = 0.
    pub fn new(mut coeffs: Vec<i64>) -> Self {
        assert!(!coeffs.is_empty());
        let last = *coeffs.last().unwrap();
        if last != 0 {
            for c in coeffs.iter_mut() {
                *c -= last;
            }
        }
        Weight { coeffs }
    }

    pub fn zero(rank: usize) -> Self {
        Weight {
            coeffs: vec![0; rank + 1],
        }
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn add(&self, other: &Weight) -> Weight {
        assert_eq!(self.coeffs.len(), other.coeffs.len());
        Weight::new(
            self.coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Subtract the simple root alpha_i = lambda_i - lambda_{i+1}.
    pub fn sub_alpha(&self, i: usize) -> Weight {
        let mut coeffs = self.coeffs.clone();
        coeffs[i - 1] -= 1;
        coeffs[i] += 1;
        Weight::new(coeffs)
    }

    /// (alpha_i, mu) in the normalization where (alpha_i, alpha_i) = 2.
    pub fn alpha_pairing(&self, i: usize) -> i64 {
        self.coeffs[i - 1] - self.coeffs[i]
    }

    pub fn is_dominant(&self) -> bool {
        self.coeffs.windows(2).all(|w| w[0] >= w[1]) && *self.coeffs.last().unwrap() == 0
    }

    pub fn try_to_partition(&self) -> Result<Partition> {
        if !self.is_dominant() {
            return Err(Error::InvalidPartition(format!(
                "weight {:?} is not dominant",
                self.coeffs
            )));
        }
        Partition::new(
            self.coeffs[..self.coeffs.len() - 1]
                .iter()
                .map(|&c| c as usize)
                .collect(),
        )
    }
}

/// Numbers of simple-root subtractions (k_1, ..., k_N), with the implicit
/// convention k_0 = k_{N+1} = 0.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct KVector {
    k: Vec<usize>,
}

impl KVector {
    pub fn new(k: Vec<usize>) -> Self {
        KVector { k }
    }

    pub fn rank(&self) -> usize {
        self.k.len()
    }

    pub fn entries(&self) -> &[usize] {
        &self.k
    }

    /// k_i with k_0 = k_{N+1} = 0.
    pub fn get(&self, i: usize) -> usize {
        if i == 0 || i > self.k.len() {
            0
        } else {
            self.k[i - 1]
        }
    }

    pub fn total(&self) -> usize {
        self.k.iter().sum()
    }
}

/// The partition w(k) with w_i(k) = sum_j w_i(j) - k_i + k_{i-1} - k_N.
///
/// Errors when the result fails to be a partition, i.e. the weight
/// Lambda(k) is not dominant.
pub fn partition_of_k(ws: &[Partition], k: &KVector) -> Result<Partition> {
    assert!(!ws.is_empty());
    let rank = ws[0].rank();
    assert!(ws.iter().all(|w| w.rank() == rank));
    assert_eq!(k.rank(), rank);
    let mut entries = Vec::with_capacity(rank);
    for i in 1..=rank {
        let total: i64 = ws.iter().map(|w| w.part(i) as i64).sum();
        let v = total - k.get(i) as i64 + k.get(i - 1) as i64 - k.get(rank) as i64;
        if v < 0 {
            return Err(Error::InadmissibleK);
        }
        entries.push(v as usize);
    }
    if entries.windows(2).any(|w| w[0] < w[1]) {
        return Err(Error::InadmissibleK);
    }
    Ok(Partition { entries })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(entries: &[usize]) -> Partition {
        Partition::new(entries.to_vec()).unwrap()
    }

    #[test]
    fn codimension_sums_entries() {
        assert_eq!(p(&[2, 1]).codimension(), 3);
        assert_eq!(p(&[0, 0]).codimension(), 0);
        assert_eq!(p(&[3, 0]).codimension(), 3);
    }

    #[test]
    fn duals_of_worked_cases() {
        assert_eq!(p(&[3, 0]).dual(), p(&[3, 3]));
        assert_eq!(p(&[2, 1, 0]).dual(), p(&[2, 2, 1]));
        assert_eq!(p(&[0, 0, 0]).dual(), p(&[0, 0, 0]));
    }

    #[test]
    fn alpha_pairings() {
        assert_eq!(p(&[2, 1]).alpha_pairing(1).unwrap(), 1);
        assert_eq!(p(&[2, 1]).alpha_pairing(2).unwrap(), 1);
        assert_eq!(p(&[7, 0, 0]).alpha_pairing(1).unwrap(), 7);
        assert!(p(&[2, 1]).alpha_pairing(3).is_err());
    }

    #[test]
    fn partition_of_k_on_fixture_data() {
        let ws = [p(&[2, 1]), p(&[3, 0])];
        let k = KVector::new(vec![2, 1]);
        assert_eq!(partition_of_k(&ws, &k).unwrap(), p(&[2, 1]));

        let ws = [p(&[3, 0]), p(&[3, 0])];
        let k = KVector::new(vec![3, 0]);
        assert_eq!(partition_of_k(&ws, &k).unwrap(), p(&[3, 3]));

        // k = 0 adds the weights entrywise
        let ws = [p(&[2, 2]), p(&[1, 0])];
        let k = KVector::new(vec![0, 0]);
        assert_eq!(partition_of_k(&ws, &k).unwrap(), p(&[3, 2]));
    }

    #[test]
    fn inadmissible_k_is_rejected() {
        let ws = [p(&[1, 0]), p(&[1, 0])];
        let k = KVector::new(vec![5, 0]);
        assert!(partition_of_k(&ws, &k).is_err());
    }

    #[test]
    fn weight_round_trip() {
        for entries in [[2usize, 1].as_slice(), &[3, 0], &[0, 0], &[5, 5]] {
            let part = p(entries);
            assert_eq!(part.to_weight().try_to_partition().unwrap(), part);
        }
    }

    #[test]
    fn weight_normalization() {
        let w = Weight::new(vec![3, 2, 1]);
        assert_eq!(w.coeffs(), &[2, 1, 0]);
        assert!(w.is_dominant());
        assert_eq!(w.alpha_pairing(1), 1);
    }

    #[test]
    fn partition_json() {
        let part = p(&[2, 1]);
        assert_eq!(
            serde_json::to_string(&part).unwrap(),
            "{\"N\":2,\"entries\":[2,1]}"
        );
        let back: Partition = serde_json::from_str("{\"N\":2,\"entries\":[2,1]}").unwrap();
        assert_eq!(back, part);
        assert!(serde_json::from_str::<Partition>("{\"N\":2,\"entries\":[1,2]}").is_err());
    }
}
