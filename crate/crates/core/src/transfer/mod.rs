//! The weighted transfer operator, its Galerkin matrices and truncation-stable
//! eigenvalues.

mod matrix;
mod op;

pub use matrix::{
    assemble_matrix, assembly_grid, eigenvalues, stable_eigenvalues, Complex64Repr,
    FourierMatrix, StableEigenvalue, StableOptions, StableSpectrum,
};
pub use op::{apply, apply_fn, duality_residual, Applied, GridOperator, TransferOp, DEGRADATION_THRESHOLD};

