//! Fortin-Reutenauer witnesses for the nc-rank: exhaustive and structured
//! MVSP solvers, Bruhat decomposition and block-diagonal normalization.

mod bipartite;
mod blockdiag;
mod bruhat;
mod exhaustive;
mod matroid;
mod solver;

pub use bipartite::{max_bipartite_matching, mvsp_bipartite};
pub use blockdiag::block_diagonalize_witness;
pub use bruhat::{bruhat, BruhatTriple};
pub use exhaustive::{all_subspaces, count_subspaces, mvsp_exhaustive, ExhaustiveResult, DEFAULT_SUBSPACE_CAP};
pub use matroid::{matroid_intersection, mvsp_matroid_intersection, MatroidResult};
pub use solver::{Solver, SolverKind};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::{Fp, Mat};
use crate::symbolic::{nc_rank_randomized, SymbolicMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MvspError {
    #[error("subspace enumeration needs {needed} subspaces, cap is {cap}")]
    EnumerationCapExceeded { needed: u128, cap: usize },
    #[error("matrix is singular")]
    Singular,
    #[error("partition sizes do not match the matrix")]
    PartitionMismatch,
    #[error("no solver can produce a witness for this matrix: {0}")]
    WitnessUnavailable(String),
    #[error("matrix does not have the structure required by the {0} solver")]
    NotStructured(&'static str),
}

/// Partition of `0..n` into consecutive blocks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedPartition {
    blocks: Vec<std::ops::Range<usize>>,
}

impl OrderedPartition {
    pub fn trivial(n: usize) -> OrderedPartition {
        OrderedPartition { blocks: if n == 0 { vec![] } else { vec![0..n] } }
    }

    /// Blocks of equal consecutive values.
    pub fn from_sorted<T: PartialEq>(values: &[T]) -> OrderedPartition {
        let mut blocks = Vec::new();
        let mut start = 0;
        for i in 1..=values.len() {
            if i == values.len() || values[i] != values[start] {
                blocks.push(start..i);
                start = i;
            }
        }
        OrderedPartition { blocks }
    }

    pub fn from_sizes(sizes: &[usize]) -> OrderedPartition {
        let mut blocks = Vec::new();
        let mut s = 0;
        for &z in sizes {
            blocks.push(s..s + z);
            s += z;
        }
        OrderedPartition { blocks }
    }

    pub fn blocks(&self) -> &[std::ops::Range<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.last().map_or(0, |b| b.end)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.blocks.iter().position(|b| b.contains(&i)).expect("index outside partition")
    }
}

/// Linear subspace of GF(p)^n stored by its reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Subspace {
    basis: Mat,
}

impl Subspace {
    pub fn span(vectors: &Mat) -> Subspace {
        Subspace { basis: vectors.row_basis() }
    }

    pub fn zero(field: Fp, n: usize) -> Subspace {
        Subspace { basis: Mat::zeros(field, 0, n) }
    }

    pub fn full(field: Fp, n: usize) -> Subspace {
        Subspace { basis: Mat::identity(field, n) }
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn ambient(&self) -> usize {
        self.basis.cols()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        self.basis.vstack(&other.basis).rank() == self.dim()
    }

    /// `{x : <x, v> = 0 for all v in self}`.
    pub fn orthogonal(&self) -> Subspace {
        Subspace::span(&self.basis.kernel())
    }

    /// Vectors of `self` supported on the given coordinates.
    pub fn restrict_to(&self, coords: &[usize]) -> Subspace {
        let n = self.ambient();
        let f = self.basis.field();
        let comp: Vec<usize> = (0..n).filter(|c| !coords.contains(c)).collect();
        if self.dim() == 0 {
            return Subspace::zero(f, n);
        }
        // lambda^T B[:, comp] = 0
        let lam = self.basis.select_cols(&comp).transpose().kernel();
        Subspace::span(&lam.mul(&self.basis))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(&self.basis.vstack(&other.basis))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let n = self.ambient();
        self.orthogonal_in(n).sum(&other.orthogonal_in(n)).orthogonal_in(n)
    }

    /// Lexicographic encoding used for deterministic tie-breaking.
    pub fn encoding(&self) -> (usize, Vec<u64>) {
        (self.dim(), self.basis.data().to_vec())
    }
}

/// `S`, `T` invertible with `(S A_k T)[rows, cols] = 0` for every `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrWitness {
    pub s: Mat,
    pub t: Mat,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl FrWitness {
    /// Witness with `U` spanned by the first rows of `S` and `V` by the first
    /// columns of `T`.
    pub fn from_subspaces(u: &Subspace, v: &Subspace) -> FrWitness {
        let s = u.basis().complete_basis();
        let t = v.basis().complete_basis().transpose();
        FrWitness { s, t, rows: (0..u.dim()).collect(), cols: (0..v.dim()).collect() }
    }

    pub fn n(&self) -> usize {
        self.s.rows()
    }

    pub fn r(&self) -> usize {
        self.rows.len()
    }

    pub fn s_size(&self) -> usize {
        self.cols.len()
    }

    /// Upper bound `2n - r - s` on the nc-rank.
    pub fn value(&self) -> usize {
        2 * self.n() - self.r() - self.s_size()
    }

    /// Span of the zero-block rows of `S`.
    pub fn u(&self) -> Subspace {
        Subspace::span(&self.s.select_rows(&self.rows))
    }

    /// Span of the zero-block columns of `T`.
    pub fn v(&self) -> Subspace {
        Subspace::span(&self.t.select_cols(&self.cols).transpose())
    }

    /// Checks invertibility and the zero block against every term.
    pub fn verify(&self, a: &SymbolicMatrix) -> bool {
        let n = self.n();
        if self.s.rows() != n || self.t.cols() != n || a.rows() != n || a.cols() != n {
            return false;
        }
        if self.s.rank() < n || self.t.rank() < n {
            return false;
        }
        a.terms().iter().all(|ak| {
            let m = self.s.mul(ak).mul(&self.t);
            self.rows.iter().all(|&i| self.cols.iter().all(|&j| m.get(i, j) == 0))
        })
    }

    /// Reorder so that the zero block sits in the upper-left corner.
    pub fn canonical(&self) -> FrWitness {
        let n = self.n();
        let row_order: Vec<usize> = self.rows.iter().copied().chain((0..n).filter(|i| !self.rows.contains(i))).collect();
        let col_order: Vec<usize> = self.cols.iter().copied().chain((0..n).filter(|j| !self.cols.contains(j))).collect();
        FrWitness {
            s: self.s.select_rows(&row_order),
            t: self.t.select_cols(&col_order),
            rows: (0..self.r()).collect(),
            cols: (0..self.s_size()).collect(),
        }
    }
}

/// Monte-Carlo nc-rank via a random substitution of the `(n-1)`-blow-up.
pub fn nc_rank<R: Rng + ?Sized>(a: &SymbolicMatrix, trials: usize, rng: &mut R) -> usize {
    nc_rank_randomized(a, trials, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rng_from_seed;

    #[test]
    fn partitions_from_sorted() {
        let p = OrderedPartition::from_sorted(&[3, 3, 1, 0, 0]);
        assert_eq!(p.blocks(), &[0..2, 2..3, 3..5]);
        assert_eq!(p.block_of(4), 2);
    }

    #[test]
    fn subspace_restriction() {
        let f = Fp::new(5).unwrap();
        let u = Subspace::span(&Mat::from_i64_rows(f, &[vec![1, 1, 0], vec![0, 0, 1]]));
        assert_eq!(u.restrict_to(&[2]).dim(), 1);
        assert_eq!(u.restrict_to(&[0]).dim(), 0);
        assert_eq!(u.restrict_to(&[0, 1]).dim(), 1);
        assert_eq!(u.orthogonal().dim(), 1);
    }

    #[test]
    fn sum_and_intersection() {
        let f = Fp::new(3).unwrap();
        let u = Subspace::span(&Mat::from_i64_rows(f, &[vec![1, 0, 0], vec![0, 1, 0]]));
        let v = Subspace::span(&Mat::from_i64_rows(f, &[vec![0, 1, 0], vec![0, 0, 1]]));
        assert_eq!(u.sum(&v).dim(), 3);
        let w = u.intersection(&v);
        assert_eq!(w.basis().to_signed_rows(), vec![vec![0, 1, 0]]);
        assert_eq!(u.intersection(&Subspace::zero(f, 3)).dim(), 0);
        assert_eq!(u.intersection(&Subspace::full(f, 3)), u);
    }

    #[test]
    fn randomized_nc_rank_examples() {
        let f = Fp::new(65521).unwrap();
        let mut rng = rng_from_seed(4);
        let k3 = SymbolicMatrix::from_triples(
            f,
            3,
            3,
            &[vec![(0, 1, 1), (1, 0, -1)], vec![(0, 2, 1), (2, 0, -1)], vec![(1, 2, 1), (2, 1, -1)]],
        );
        assert_eq!(nc_rank(&k3, 3, &mut rng), 3);
        let zero = SymbolicMatrix::from_triples(f, 3, 3, &[vec![]]);
        assert_eq!(nc_rank(&zero, 3, &mut rng), 0);
        // Edmonds matrix of a 4-cycle plus chords, perfect matching present
        let edges = [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 3), (3, 3), (3, 0)];
        let terms: Vec<_> = edges.iter().map(|&(i, j)| vec![(i, j, 1)]).collect();
        let ed = SymbolicMatrix::from_triples(f, 4, 4, &terms);
        assert_eq!(nc_rank(&ed, 3, &mut rng), 4);
    }
}
