//! Exact computation of special Schubert intersections in Grassmannians of
//! polynomial spaces, with certification of non-degeneracy and evaluation of
//! the matching Bethe vectors of the two-point Gaudin model.
//!
//! Everything that can be computed over the rationals or the Gaussian
//! rationals is computed exactly; only polynomial roots that leave Q(i) fall
//! back to fixed-precision binary floats.

pub mod analysis;
pub mod dyadic;
pub mod error;
pub mod field;
pub mod gaudin;
pub mod matrix;
pub mod nondeg;
pub mod partition;
pub mod poly;
pub mod ratfun;
pub mod reconstruct;
pub mod roots;
pub mod scalar;
pub mod schubert;
pub mod special;

pub use error::{Error, Result};
pub use partition::{partition_of_k, KVector, Partition, Weight};
pub use poly::{discriminant, resultant, wronskian, Point, Polynomial};
pub use scalar::ExactScalar;
pub use schubert::{
    cell_partition, expected_wronskian, intermediate_wronskians, schubert_frame, singular_points,
    PlaneBasis, SchubertFrame, SchubertProblem,
};
