//! Integral monodromy of superelliptic curves and the twisted homology of
//! braid groups.

pub mod coxeter;
pub mod engine;
pub mod fixtures;
pub mod linalg;
pub mod scalar;
pub mod series;
pub mod surface;

pub use linalg::{AbelianGroup, LinalgError, Matrix, SmithForm, SnfConfig};
pub use scalar::{Overflow, Scalar};

/// Matrices with arbitrary-precision entries.
pub type IntMatrix = Matrix<num_bigint::BigInt>;
/// Machine-word matrices for the checked fast path.
pub type SmallMatrix = Matrix<i64>;
