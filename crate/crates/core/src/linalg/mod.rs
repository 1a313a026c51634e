//! Exact integer and modular linear algebra.

mod abelian;
mod elim;
mod homology;
mod matrix;
pub mod modular;
mod snf;

pub use abelian::{AbelianGroup, ParseGroupError, PrimePower};
pub use homology::{
    betti_mod_p, boundary_factors, homology_from_factors, homology_pair, homology_pair_with, Route,
};
pub use matrix::{Matrix, MatrixJson};
pub use modular::{is_prime, local_valuations, rank_mod_p, rational_rank};
pub use snf::{
    invariant_factors, is_divisibility_chain, is_unimodular, normalize_diagonal, snf, snf_dense,
    SmithForm, SnfConfig,
};

use crate::scalar::Overflow;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum LinalgError {
    #[error(transparent)]
    Overflow(#[from] Overflow),
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("boundary composite is nonzero")]
    NonzeroComposite,
    #[error("dimension mismatch: {left:?} after {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
}
