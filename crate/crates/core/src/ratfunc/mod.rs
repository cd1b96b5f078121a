//! Polynomials, rational functions and matrices over GF(p)(t).

mod degree;
mod matrix;
mod poly;
mod ratfn;

pub use degree::Degree;
pub use matrix::{biproper_inverse, leading_coeff_matrix, mat_degdet, mat_rank, BiproperFlag, RationalMatrix};
pub use poly::Poly;
pub use ratfn::RatFn;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RatFuncError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("matrix is {0}x{1}, expected square")]
    NotSquare(usize, usize),
    #[error("entry ({0}, {1}) has positive degree after shifting")]
    InfeasibleShift(usize, usize),
    #[error("matrix is not biproper")]
    NotBiproper,
    #[error("shape mismatch")]
    ShapeMismatch,
}

/// Degree of a matrix entry-wise: `deg(p/q)` convenience wrapper.
pub fn deg(r: &RatFn) -> Degree {
    r.deg()
}

pub fn mindeg(r: &RatFn) -> Degree {
    r.mindeg()
}
