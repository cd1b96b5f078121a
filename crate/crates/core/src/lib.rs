//! Noncommutative rank, Dieudonne-determinant degrees and weighted
//! matching-type problems for linear symbolic matrices over finite fields.

pub mod apps;
pub mod cli;
pub mod degdet;
pub mod mvsp;
pub mod ratfunc;
pub mod scalar;
pub mod symbolic;
