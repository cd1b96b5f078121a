use std::collections::VecDeque;

use super::{FrWitness, Subspace};
use crate::scalar::{Fp, Mat};

/// Linear matroid on a list of vectors, optionally contracted by one element.
struct LinearMatroid<'a> {
    field: Fp,
    vecs: &'a [Vec<u64>],
    contract: Option<usize>,
}

impl LinearMatroid<'_> {
    fn rank(&self, set: &[usize]) -> usize {
        let n = self.vecs.first().map_or(0, |v| v.len());
        let mut idx: Vec<usize> = set.to_vec();
        if let Some(c) = self.contract {
            idx.push(c);
        }
        if idx.is_empty() || n == 0 {
            return 0;
        }
        let m = Mat::from_fn(self.field, idx.len(), n, |i, j| self.vecs[idx[i]][j]);
        let base = match self.contract {
            Some(c) => usize::from(self.vecs[c].iter().any(|&x| x != 0)),
            None => 0,
        };
        m.rank() - base
    }

    fn independent(&self, set: &[usize]) -> bool {
        self.rank(set) == set.len()
    }
}

/// Maximum common independent set of two linear matroids restricted to
/// `ground`, by shortest augmenting paths in the exchange graph.
fn common_independent(ground: &[usize], m1: &LinearMatroid, m2: &LinearMatroid) -> Vec<usize> {
    let mut j: Vec<usize> = Vec::new();
    loop {
        let out: Vec<usize> = ground.iter().copied().filter(|e| !j.contains(e)).collect();
        let with = |x: usize| {
            let mut s = j.clone();
            s.push(x);
            s
        };
        let swap = |y: usize, x: usize| {
            let mut s: Vec<usize> = j.iter().copied().filter(|&e| e != y).collect();
            s.push(x);
            s
        };
        let sources: Vec<usize> = out.iter().copied().filter(|&x| m1.independent(&with(x))).collect();
        let sinks: Vec<bool> = {
            let mut v = vec![false; m1.vecs.len()];
            for &x in &out {
                if m2.independent(&with(x)) {
                    v[x] = true;
                }
            }
            v
        };
        if let Some(&x) = sources.iter().find(|&&x| sinks[x]) {
            j.push(x);
            continue;
        }
        // BFS over exchange graph: y -> x if J - y + x in I1; x -> y if J - y + x in I2
        let total = m1.vecs.len();
        let mut prev: Vec<Option<usize>> = vec![None; total];
        let mut seen = vec![false; total];
        let mut queue = VecDeque::new();
        for &s in &sources {
            seen[s] = true;
            queue.push_back(s);
        }
        let mut end = None;
        while let Some(v) = queue.pop_front() {
            if !j.contains(&v) && sinks[v] {
                end = Some(v);
                break;
            }
            if j.contains(&v) {
                for &x in &out {
                    if !seen[x] && m1.independent(&swap(v, x)) {
                        seen[x] = true;
                        prev[x] = Some(v);
                        queue.push_back(x);
                    }
                }
            } else {
                for &y in &j {
                    if !seen[y] && m2.independent(&swap(y, v)) {
                        seen[y] = true;
                        prev[y] = Some(v);
                        queue.push_back(y);
                    }
                }
            }
        }
        let Some(mut v) = end else {
            return j;
        };
        let mut path = vec![v];
        while let Some(p) = prev[v] {
            path.push(p);
            v = p;
        }
        for e in path {
            if let Some(pos) = j.iter().position(|&x| x == e) {
                j.remove(pos);
            } else {
                j.push(e);
            }
        }
    }
}

/// Maximum common independent set of the linear matroids of `a` and `b`.
pub fn matroid_intersection(field: Fp, a: &[Vec<u64>], b: &[Vec<u64>]) -> Vec<usize> {
    let ground: Vec<usize> = (0..a.len()).collect();
    let m1 = LinearMatroid { field, vecs: a, contract: None };
    let m2 = LinearMatroid { field, vecs: b, contract: None };
    let mut j = common_independent(&ground, &m1, &m2);
    j.sort_unstable();
    j
}

#[derive(Clone, Debug)]
pub struct MatroidResult {
    pub witness: FrWitness,
    /// Minimizer of `r1(I) + r2([m] \ I)`.
    pub minimizer: Vec<usize>,
    pub value: usize,
    pub u: Subspace,
    pub v: Subspace,
}

/// MVSP for `A = sum_k a_k b_k^T x_k` through linear matroid intersection.
///
/// The minimizers of `r1(I) + r2([m] \ I)` form a lattice. With
/// `want_dominant` the smallest minimizer is used; it yields the largest
/// `U = span{a_k : k in I}^perp`, which is the dominant MVSP optimum.
/// Otherwise the largest minimizer is used.
pub fn mvsp_matroid_intersection(field: Fp, a: &[Vec<u64>], b: &[Vec<u64>], want_dominant: bool) -> MatroidResult {
    let m = a.len();
    let n = a.first().or(b.first()).map_or(0, |v| v.len());
    let opt = matroid_intersection(field, a, b).len();
    let mut minimizer = Vec::new();
    for e in 0..m {
        let rest: Vec<usize> = (0..m).filter(|&x| x != e).collect();
        let in_every = if want_dominant {
            // min over I not containing e
            let m1 = LinearMatroid { field, vecs: a, contract: None };
            let m2 = LinearMatroid { field, vecs: b, contract: Some(e) };
            let r2e = LinearMatroid { field, vecs: b, contract: None }.rank(&[e]);
            r2e + common_independent(&rest, &m1, &m2).len() > opt
        } else {
            // e lies in the largest minimizer unless every I containing e is worse
            let m1 = LinearMatroid { field, vecs: a, contract: Some(e) };
            let m2 = LinearMatroid { field, vecs: b, contract: None };
            let r1e = LinearMatroid { field, vecs: a, contract: None }.rank(&[e]);
            r1e + common_independent(&rest, &m1, &m2).len() == opt
        };
        if in_every {
            minimizer.push(e);
        }
    }
    let span = |vs: &[Vec<u64>], idx: &[usize]| {
        let m = Mat::from_fn(field, idx.len(), n, |i, j| vs[idx[i]][j]);
        Subspace::span(&m)
    };
    let complement: Vec<usize> = (0..m).filter(|k| !minimizer.contains(k)).collect();
    let u = span(a, &minimizer).orthogonal_in(n);
    let v = span(b, &complement).orthogonal_in(n);
    let witness = FrWitness::from_subspaces(&u, &v);
    debug_assert_eq!(witness.value(), opt);
    MatroidResult { witness, minimizer, value: opt, u, v }
}

impl Subspace {
    /// Orthogonal complement inside GF(p)^n (handles the empty span).
    pub(crate) fn orthogonal_in(&self, n: usize) -> Subspace {
        if self.dim() == 0 {
            Subspace::full(self.basis().field(), n)
        } else {
            self.orthogonal()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvsp::mvsp_exhaustive;
    use crate::scalar::{rng_from_seed, Field};
    use crate::symbolic::SymbolicMatrix;
    use rand::Rng;

    fn unit(n: usize, i: usize) -> Vec<u64> {
        (0..n).map(|j| u64::from(i == j)).collect()
    }

    fn as_symbolic(f: Fp, a: &[Vec<u64>], b: &[Vec<u64>]) -> SymbolicMatrix {
        let n = a[0].len();
        let terms = a.iter().zip(b).map(|(x, y)| Mat::from_fn(f, n, n, |i, j| f.mul(x[i], y[j]))).collect();
        SymbolicMatrix::new(f, n, n, terms).unwrap()
    }

    #[test]
    fn free_matroids() {
        let f = Fp::new(5).unwrap();
        let a: Vec<_> = (0..3).map(|i| unit(3, i)).collect();
        let r = mvsp_matroid_intersection(f, &a, &a, false);
        assert_eq!(r.value, 3);
        assert_eq!(r.minimizer, vec![0, 1, 2]);
        let r = mvsp_matroid_intersection(f, &a, &a, true);
        assert_eq!(r.value, 3);
        assert!(r.minimizer.is_empty());
    }

    #[test]
    fn parallel_rows() {
        // x1 e1 e1^T + x2 e1 e2^T has rank 1: I = {1, 2} gives r1 + r2 = 1
        let f = Fp::new(5).unwrap();
        let a = vec![unit(2, 0), unit(2, 0)];
        let b = vec![unit(2, 0), unit(2, 1)];
        let r = mvsp_matroid_intersection(f, &a, &b, true);
        assert_eq!(r.value, 1);
        assert!(r.witness.verify(&as_symbolic(f, &a, &b)));
    }

    #[test]
    fn all_zero_vectors() {
        let f = Fp::new(5).unwrap();
        let a = vec![vec![0, 0], vec![0, 0]];
        let b = vec![unit(2, 0), unit(2, 1)];
        assert_eq!(mvsp_matroid_intersection(f, &a, &b, true).value, 0);
    }

    #[test]
    fn dominant_matches_exhaustive() {
        let mut rng = rng_from_seed(21);
        for q in [2u64, 3] {
            let f = Fp::new(q).unwrap();
            for _ in 0..60 {
                let n = rng.gen_range(1..=3);
                let m = rng.gen_range(1..=5);
                let rv = |rng: &mut crate::scalar::Rng| (0..n).map(|_| rng.gen_range(0..q)).collect::<Vec<u64>>();
                let a: Vec<_> = (0..m).map(|_| rv(&mut rng)).collect();
                let b: Vec<_> = (0..m).map(|_| rv(&mut rng)).collect();
                let sym = as_symbolic(f, &a, &b);
                let r = mvsp_matroid_intersection(f, &a, &b, true);
                assert!(r.witness.verify(&sym));
                let ex = mvsp_exhaustive(&sym, true, 5000).unwrap();
                assert_eq!(r.value, ex.value);
                assert_eq!(r.u, ex.u, "dominant U differs");
                assert_eq!(r.v, ex.v);
            }
        }
    }
}
