//! Matrix builders for bipartite matching, linear matroid intersection,
//! general matching and linear matroid matching, plus the applications
//! built on them: weighted fractional matroid matching, its LP oracle,
//! rank-2 Brascamp-Lieb membership and brute-force ground truths.

mod brute;
mod fmm;
pub mod lp;
pub mod random;

pub use brute::{brute_bipartite, brute_matroid_intersection, BRUTE_MAX_M, BRUTE_MAX_N};
pub use fmm::{bl_membership_rank2, fmm_max_weight, fmp_lp_oracle, BlCertificate, BlVerdict, FmmResult, FmpSolution};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::degdet::DegDetError;
use crate::mvsp::{MvspError, Subspace};
use crate::scalar::{ExactRational, Field, Fp, Mat};
use crate::symbolic::{SymbolicMatrix, WeightedSymbolicMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AppsError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("pair {0} does not span a 2-dimensional subspace")]
    DependentPair(usize),
    #[error("map {0} does not have rank 2")]
    NotRankTwo(usize),
    #[error("parameter {0} is negative")]
    NegativeParameter(usize),
    #[error("instance exceeds the brute-force cap: {0}")]
    CapExceeded(String),
    #[error(transparent)]
    Mvsp(#[from] MvspError),
    #[error(transparent)]
    DegDet(#[from] DegDetError),
}

/// Weighted bipartite graph on `n + n` vertices (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BipartiteInstance {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub weights: Vec<i64>,
}

/// Weighted graph on `n` vertices (0-based).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphInstance {
    pub n: usize,
    pub edges: Vec<(usize, usize)>,
    pub weights: Vec<i64>,
}

/// Two families `a_k`, `b_k` of vectors in `K^n` with weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatroidPairInstance {
    pub n: usize,
    pub a: Vec<Vec<i64>>,
    pub b: Vec<Vec<i64>>,
    pub weights: Vec<i64>,
}

/// Lines `H_k = span{a_k, b_k}` of the projective space, i.e. 2-dimensional
/// subspaces of `K^n`, with weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineCollection {
    pub n: usize,
    pub a: Vec<Vec<i64>>,
    pub b: Vec<Vec<i64>>,
    pub weights: Vec<i64>,
}

/// Rank-2 Brascamp-Lieb datum: surjective maps `B_j: K^n -> K^2` given as
/// `2 x n` matrices, and exponents `p`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlDatum {
    pub n: usize,
    pub maps: Vec<[Vec<i64>; 2]>,
    pub p: Vec<ExactRational>,
}

fn check_edges(n: usize, edges: &[(usize, usize)], weights: &[i64]) -> Result<(), AppsError> {
    if weights.len() != edges.len() {
        return Err(AppsError::DimensionMismatch(format!("{} edges but {} weights", edges.len(), weights.len())));
    }
    for (k, &(i, j)) in edges.iter().enumerate() {
        if i >= n || j >= n {
            return Err(AppsError::DimensionMismatch(format!("edge ({i}, {j}) outside [0, {n})")));
        }
        if edges[..k].contains(&(i, j)) {
            return Err(AppsError::DuplicateEdge(i, j));
        }
    }
    Ok(())
}

fn check_vectors(n: usize, m: usize, what: &str, vs: &[Vec<i64>]) -> Result<(), AppsError> {
    if vs.len() != m {
        return Err(AppsError::DimensionMismatch(format!("{} {what} vectors for {m} weights", vs.len())));
    }
    if let Some(v) = vs.iter().find(|v| v.len() != n) {
        return Err(AppsError::DimensionMismatch(format!("{what} vector of length {} in K^{n}", v.len())));
    }
    Ok(())
}

fn reduce(f: Fp, v: &[i64]) -> Vec<u64> {
    v.iter().map(|&x| f.from_i64(x)).collect()
}

/// Edmonds matrix `sum_{ij in E} e_i e_j^T x_ij`.
pub fn build_edmonds(f: Fp, inst: &BipartiteInstance) -> Result<WeightedSymbolicMatrix, AppsError> {
    check_edges(inst.n, &inst.edges, &inst.weights)?;
    let terms: Vec<_> = inst.edges.iter().map(|&(i, j)| vec![(i, j, 1)]).collect();
    let base = SymbolicMatrix::from_triples(f, inst.n, inst.n, &terms);
    Ok(WeightedSymbolicMatrix::new(base, inst.weights.clone()).expect("one weight per term"))
}

/// Tutte matrix `sum_{ij in E} (e_i e_j^T - e_j e_i^T) x_ij`.
pub fn build_tutte(f: Fp, inst: &GraphInstance) -> Result<WeightedSymbolicMatrix, AppsError> {
    check_edges(inst.n, &inst.edges, &inst.weights)?;
    if let Some(&(i, _)) = inst.edges.iter().find(|(i, j)| i == j) {
        return Err(AppsError::DimensionMismatch(format!("loop at vertex {i}")));
    }
    let terms: Vec<_> = inst.edges.iter().map(|&(i, j)| vec![(i, j, 1), (j, i, -1)]).collect();
    let base = SymbolicMatrix::from_triples(f, inst.n, inst.n, &terms);
    Ok(WeightedSymbolicMatrix::new(base, inst.weights.clone()).expect("one weight per term"))
}

/// `sum_k a_k b_k^T x_k`.
pub fn build_matroid_intersection(f: Fp, inst: &MatroidPairInstance) -> Result<WeightedSymbolicMatrix, AppsError> {
    let m = inst.weights.len();
    check_vectors(inst.n, m, "a", &inst.a)?;
    check_vectors(inst.n, m, "b", &inst.b)?;
    let n = inst.n;
    let terms = (0..m)
        .map(|k| {
            let (a, b) = (reduce(f, &inst.a[k]), reduce(f, &inst.b[k]));
            Mat::from_fn(f, n, n, |i, j| f.mul(a[i], b[j]))
        })
        .collect();
    let base = SymbolicMatrix::new(f, n, n, terms).expect("square terms");
    Ok(WeightedSymbolicMatrix::new(base, inst.weights.clone()).expect("one weight per term"))
}

impl LineCollection {
    /// Checks shapes and that every pair is independent over `f`.
    pub fn validate(&self, f: Fp) -> Result<(), AppsError> {
        let m = self.weights.len();
        check_vectors(self.n, m, "a", &self.a)?;
        check_vectors(self.n, m, "b", &self.b)?;
        for k in 0..m {
            if self.line(f, k).dim() != 2 {
                return Err(AppsError::DependentPair(k));
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.weights.len()
    }

    /// `H_k` as a subspace of `GF(p)^n`.
    pub fn line(&self, f: Fp, k: usize) -> Subspace {
        let rows = vec![self.a[k].clone(), self.b[k].clone()];
        Subspace::span(&Mat::from_i64_rows(f, &rows))
    }
}

/// `sum_k (a_k b_k^T - b_k a_k^T) x_k`, skew-symmetric with zero diagonal.
pub fn build_matroid_matching(f: Fp, h: &LineCollection) -> Result<WeightedSymbolicMatrix, AppsError> {
    h.validate(f)?;
    let n = h.n;
    let terms = (0..h.m())
        .map(|k| {
            let (a, b) = (reduce(f, &h.a[k]), reduce(f, &h.b[k]));
            Mat::from_fn(f, n, n, |i, j| if i == j { 0 } else { f.sub(f.mul(a[i], b[j]), f.mul(b[i], a[j])) })
        })
        .collect();
    let base = SymbolicMatrix::new(f, n, n, terms).expect("square terms");
    Ok(WeightedSymbolicMatrix::new(base, h.weights.clone()).expect("one weight per term"))
}

/// Coordinate lines `span{e_i, e_j}` for the edges of a graph.
pub fn graph_lines(inst: &GraphInstance) -> LineCollection {
    let unit = |i: usize| (0..inst.n).map(|j| i64::from(i == j)).collect::<Vec<_>>();
    LineCollection {
        n: inst.n,
        a: inst.edges.iter().map(|&(i, _)| unit(i)).collect(),
        b: inst.edges.iter().map(|&(_, j)| unit(j)).collect(),
        weights: inst.weights.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> GraphInstance {
        GraphInstance { n: 3, edges: vec![(0, 1), (0, 2), (1, 2)], weights: vec![1, 1, 1] }
    }

    #[test]
    fn single_edge_edmonds() {
        let f = Fp::new(7).unwrap();
        let a = build_edmonds(f, &BipartiteInstance { n: 1, edges: vec![(0, 0)], weights: vec![5] }).unwrap();
        assert_eq!(a.base.num_terms(), 1);
        assert_eq!(a.base.term(0).to_signed_rows(), vec![vec![1]]);
        assert_eq!(a.weights, vec![5]);
    }

    #[test]
    fn tutte_terms_are_skew() {
        let f = Fp::new(5).unwrap();
        let a = build_tutte(f, &k3()).unwrap();
        assert_eq!(a.base.num_terms(), 3);
        assert!(a.base.is_skew_symmetric());
        for t in a.base.terms() {
            assert!(t.to_signed_rows().iter().flatten().all(|&x| x.abs() <= 1));
            assert_eq!(t.nnz(), 2);
        }
        assert_eq!(a.base.term(0).to_signed_rows(), vec![vec![0, 1, 0], vec![-1, 0, 0], vec![0, 0, 0]]);
    }

    #[test]
    fn line_term() {
        let f = Fp::new(3).unwrap();
        let h = LineCollection { n: 2, a: vec![vec![1, 0]], b: vec![vec![0, 1]], weights: vec![0] };
        let a = build_matroid_matching(f, &h).unwrap();
        assert_eq!(a.base.term(0).to_signed_rows(), vec![vec![0, 1], vec![-1, 0]]);
        let lines = graph_lines(&k3());
        let b = build_matroid_matching(f, &lines).unwrap();
        assert_eq!(b, build_tutte(f, &k3()).unwrap());
    }

    #[test]
    fn builder_errors() {
        let f = Fp::new(3).unwrap();
        let bad = BipartiteInstance { n: 2, edges: vec![(0, 2)], weights: vec![1] };
        assert!(matches!(build_edmonds(f, &bad), Err(AppsError::DimensionMismatch(_))));
        let dup = BipartiteInstance { n: 2, edges: vec![(0, 1), (0, 1)], weights: vec![1, 1] };
        assert_eq!(build_edmonds(f, &dup).unwrap_err(), AppsError::DuplicateEdge(0, 1));
        let pair = MatroidPairInstance { n: 2, a: vec![vec![1, 0]], b: vec![vec![1]], weights: vec![1] };
        assert!(matches!(build_matroid_intersection(f, &pair), Err(AppsError::DimensionMismatch(_))));
        // (1, 1) and (2, 2) are dependent over GF(3)
        let h = LineCollection { n: 2, a: vec![vec![1, 1]], b: vec![vec![2, 2]], weights: vec![1] };
        assert_eq!(build_matroid_matching(f, &h).unwrap_err(), AppsError::DependentPair(0));
    }

    #[test]
    fn matroid_terms_are_outer_products() {
        let f = Fp::new(5).unwrap();
        let inst = MatroidPairInstance { n: 2, a: vec![vec![1, 2]], b: vec![vec![3, -1]], weights: vec![2] };
        let a = build_matroid_intersection(f, &inst).unwrap();
        assert_eq!(a.base.term(0).to_signed_rows(), vec![vec![-2, -1], vec![1, -2]]);
    }
}
