use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use super::exhaustive::mvsp_exhaustive_impl;
use super::{count_subspaces, mvsp_bipartite, mvsp_matroid_intersection, FrWitness, MvspError, OrderedPartition};
use crate::scalar::{derived_rng, Mat};
use crate::symbolic::{nc_rank_randomized, SymbolicMatrix};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    Auto,
    Exhaustive,
    Bipartite,
    Matroid,
}

/// Produces an optimal witness for a leading matrix whose terms have been
/// split along the given row/column block partitions.
#[derive(Debug)]
pub struct Solver {
    pub kind: SolverKind,
    pub cap: usize,
    seed: u64,
    calls: AtomicU64,
}

#[derive(Clone, Debug)]
pub struct SolveOutcome {
    pub witness: FrWitness,
    /// Whether the witness is known to be the dominant optimum.
    pub dominant: bool,
    pub method: &'static str,
}

impl Clone for Solver {
    fn clone(&self) -> Self {
        Solver { kind: self.kind, cap: self.cap, seed: self.seed, calls: AtomicU64::new(0) }
    }
}

impl Default for Solver {
    fn default() -> Self {
        Solver::new(SolverKind::Auto, 0)
    }
}

/// Pieces `A_k[I_a, J_b]` of every term, embedded back into `n x n`.
fn pieces(a: &SymbolicMatrix, rows: &OrderedPartition, cols: &OrderedPartition) -> Vec<Mat> {
    let n = a.n();
    let f = a.field();
    let mut out = Vec::new();
    for t in a.terms() {
        for rb in rows.blocks() {
            for cb in cols.blocks() {
                let mut m = Mat::zeros(f, n, n);
                let mut any = false;
                for i in rb.clone() {
                    for j in cb.clone() {
                        let v = t.get(i, j);
                        if v != 0 {
                            m.set(i, j, v);
                            any = true;
                        }
                    }
                }
                if any {
                    out.push(m);
                }
            }
        }
    }
    out
}

/// Rank factorization of a piece into outer products `u v^T`.
fn rank_one_parts(m: &Mat) -> Vec<(Vec<u64>, Vec<u64>)> {
    let (r, piv) = m.rref();
    piv.iter().enumerate().map(|(t, &c)| (m.col(c), r.row(t).to_vec())).collect()
}

impl Solver {
    pub fn new(kind: SolverKind, seed: u64) -> Solver {
        Solver { kind, cap: super::DEFAULT_SUBSPACE_CAP, seed, calls: AtomicU64::new(0) }
    }

    pub fn with_cap(mut self, cap: usize) -> Solver {
        self.cap = cap;
        self
    }

    pub fn solve(&self, a: &SymbolicMatrix, rows: &OrderedPartition, cols: &OrderedPartition) -> Result<SolveOutcome, MvspError> {
        let a = a.padded_square();
        let n = a.n();
        if rows.len() != n || cols.len() != n {
            return Err(MvspError::PartitionMismatch);
        }
        let out = match self.kind {
            SolverKind::Bipartite => self.bipartite(&a, rows, cols),
            SolverKind::Matroid => self.matroid(&a, rows, cols),
            SolverKind::Exhaustive => self.exhaustive(&a),
            SolverKind::Auto => self
                .bipartite(&a, rows, cols)
                .or_else(|_| self.matroid(&a, rows, cols))
                .or_else(|_| self.exhaustive(&a))
                .or_else(|_| self.split_certified(&a, rows, cols)),
        }?;
        debug_assert!(out.witness.verify(&a));
        Ok(out)
    }

    fn bipartite(&self, a: &SymbolicMatrix, rows: &OrderedPartition, cols: &OrderedPartition) -> Result<SolveOutcome, MvspError> {
        let ps = pieces(a, rows, cols);
        if ps.iter().any(|p| p.nnz() > 1) {
            return Err(MvspError::NotStructured("bipartite"));
        }
        let mut edges = Vec::new();
        for p in &ps {
            for i in 0..p.rows() {
                for j in 0..p.cols() {
                    if p.get(i, j) != 0 {
                        edges.push((i, j));
                    }
                }
            }
        }
        Ok(SolveOutcome { witness: mvsp_bipartite(a.field(), a.n(), &edges), dominant: true, method: "bipartite" })
    }

    fn matroid(&self, a: &SymbolicMatrix, rows: &OrderedPartition, cols: &OrderedPartition) -> Result<SolveOutcome, MvspError> {
        let ps = pieces(a, rows, cols);
        let mut av = Vec::new();
        let mut bv = Vec::new();
        for p in &ps {
            let parts = rank_one_parts(p);
            if parts.len() > 1 {
                return Err(MvspError::NotStructured("matroid"));
            }
            for (u, v) in parts {
                av.push(u);
                bv.push(v);
            }
        }
        if av.is_empty() {
            let f = a.field();
            let n = a.n();
            let full = super::Subspace::full(f, n);
            return Ok(SolveOutcome { witness: FrWitness::from_subspaces(&full, &full), dominant: true, method: "matroid" });
        }
        let r = mvsp_matroid_intersection(a.field(), &av, &bv, true);
        Ok(SolveOutcome { witness: r.witness, dominant: true, method: "matroid" })
    }

    fn exhaustive(&self, a: &SymbolicMatrix) -> Result<SolveOutcome, MvspError> {
        let r = mvsp_exhaustive_impl(a, true, self.cap, false)?;
        Ok(SolveOutcome { witness: r.witness, dominant: true, method: "exhaustive" })
    }

    /// Split every piece into rank-one parts, solve the matroid-intersection
    /// relaxation, and accept the witness only if a random blow-up certifies
    /// that its value equals the nc-rank.
    fn split_certified(
        &self,
        a: &SymbolicMatrix,
        rows: &OrderedPartition,
        cols: &OrderedPartition,
    ) -> Result<SolveOutcome, MvspError> {
        let mut av = Vec::new();
        let mut bv = Vec::new();
        for p in pieces(a, rows, cols) {
            for (u, v) in rank_one_parts(&p) {
                av.push(u);
                bv.push(v);
            }
        }
        let r = mvsp_matroid_intersection(a.field(), &av, &bv, true);
        let call = self.calls.fetch_add(1, Ordering::Relaxed);
        let mut rng = derived_rng(self.seed, call);
        let lower = nc_rank_randomized(a, 3, &mut rng);
        if lower == r.value && r.witness.verify(a) {
            Ok(SolveOutcome { witness: r.witness, dominant: false, method: "split-certified" })
        } else {
            let needed = count_subspaces(a.field().p(), a.n());
            Err(MvspError::WitnessUnavailable(format!(
                "relaxation value {} vs blow-up rank {}, exhaustive search needs {} subspaces",
                r.value, lower, needed
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Fp;

    fn k3(p: u64) -> SymbolicMatrix {
        let f = Fp::new(p).unwrap();
        SymbolicMatrix::from_triples(
            f,
            3,
            3,
            &[vec![(0, 1, 1), (1, 0, -1)], vec![(0, 2, 1), (2, 0, -1)], vec![(1, 2, 1), (2, 1, -1)]],
        )
    }

    #[test]
    fn auto_picks_a_method() {
        let p = OrderedPartition::trivial(3);
        let s = Solver::default();
        let out = s.solve(&k3(5), &p, &p).unwrap();
        assert_eq!((out.method, out.witness.value()), ("exhaustive", 3));
        let out = s.solve(&k3(65521), &p, &p).unwrap();
        assert_eq!((out.method, out.witness.value()), ("split-certified", 3));
        assert!(out.witness.u().contains(&out.witness.v()));
    }

    #[test]
    fn structured_kinds_reject_unstructured_input() {
        let p = OrderedPartition::trivial(3);
        assert!(Solver::new(SolverKind::Bipartite, 0).solve(&k3(5), &p, &p).is_err());
        assert!(Solver::new(SolverKind::Matroid, 0).solve(&k3(5), &p, &p).is_err());
        // once the partition separates vertex 0, the pieces of x_{12} and x_{13} become single entries
        let q = OrderedPartition::from_sizes(&[1, 1, 1]);
        assert!(Solver::new(SolverKind::Bipartite, 0).solve(&k3(5), &q, &q).is_ok());
    }
}
