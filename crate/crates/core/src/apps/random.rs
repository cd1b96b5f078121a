//! Random instance generators used by tests, benchmarks and `selftest`.

use rand::Rng;

use super::{BipartiteInstance, GraphInstance, LineCollection, MatroidPairInstance};
use crate::scalar::{Fp, Mat};

/// Each of the `n^2` edges present with probability `density`.
pub fn bipartite<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64, w: (i64, i64)) -> BipartiteInstance {
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if rng.gen_bool(density) {
                edges.push((i, j));
                weights.push(rng.gen_range(w.0..=w.1));
            }
        }
    }
    BipartiteInstance { n, edges, weights }
}

pub fn graph<R: Rng + ?Sized>(rng: &mut R, n: usize, density: f64, w: (i64, i64)) -> GraphInstance {
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.gen_bool(density) {
                edges.push((i, j));
                weights.push(rng.gen_range(w.0..=w.1));
            }
        }
    }
    GraphInstance { n, edges, weights }
}

fn vector<R: Rng + ?Sized>(rng: &mut R, f: Fp, n: usize) -> Vec<i64> {
    (0..n).map(|_| rng.gen_range(0..f.p()) as i64).collect()
}

/// `m` random vector pairs; zero vectors are allowed (they give loops).
pub fn matroid_pair<R: Rng + ?Sized>(rng: &mut R, f: Fp, n: usize, m: usize, w: (i64, i64)) -> MatroidPairInstance {
    MatroidPairInstance {
        n,
        a: (0..m).map(|_| vector(rng, f, n)).collect(),
        b: (0..m).map(|_| vector(rng, f, n)).collect(),
        weights: (0..m).map(|_| rng.gen_range(w.0..=w.1)).collect(),
    }
}

/// `m` random lines (2-dimensional subspaces) of `GF(p)^n`, `n >= 2`.
pub fn lines<R: Rng + ?Sized>(rng: &mut R, f: Fp, n: usize, m: usize, w: (i64, i64)) -> LineCollection {
    let mut a = Vec::with_capacity(m);
    let mut b = Vec::with_capacity(m);
    while a.len() < m {
        let (u, v) = (vector(rng, f, n), vector(rng, f, n));
        if Mat::from_i64_rows(f, &[u.clone(), v.clone()]).rank() == 2 {
            a.push(u);
            b.push(v);
        }
    }
    LineCollection { n, a, b, weights: (0..m).map(|_| rng.gen_range(w.0..=w.1)).collect() }
}
