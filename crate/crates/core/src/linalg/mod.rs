//! Exact integer and rational linear algebra.

mod diophantine;
mod lattice;
mod matrix;
mod normal_form;

pub use diophantine::{extended_gcd, solve_diophantine};
pub use lattice::{integer_kernel, saturate_columns, solve_full_column_rank, LatticeBasis};
pub use matrix::{content, is_primitive, lcm_of_denominators, IntegerMatrix, RationalMatrix};
pub use normal_form::{
    hermite_normal_form, smith_normal_form, AbelianGroup, HermiteDecomposition,
    SmithDecomposition,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("rows have different lengths")]
    Ragged,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("no integer solution")]
    NoSolution,
}
