//! Constructive sparse domination: building a sparse family for a
//! sublinear operator, checking its sparsity, and measuring how well the
//! sparse operator dominates.

mod build;
mod family;
mod operator;

pub use build::{build_sparse_family, SparseConfig};
pub use family::{greedy_sparsity, verify_sparsity, BuildMetadata, SparseCube, SparseFamily, SparsityReport};
pub use operator::{domination_ratio, sparse_operator, SparseAveraging};

#[cfg(test)]
mod tests;
