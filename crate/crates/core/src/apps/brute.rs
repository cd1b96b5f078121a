use itertools::Itertools;

use super::{AppsError, BipartiteInstance, MatroidPairInstance};
use crate::ratfunc::Degree;
use crate::scalar::{Fp, Mat};

/// Size caps for the exhaustive oracles.
pub const BRUTE_MAX_N: usize = 8;
pub const BRUTE_MAX_M: usize = 12;

/// Maximum weight of a matching with exactly `ell` edges, by dynamic
/// programming over rows and the set of used columns (every matching is
/// considered); minus infinity if none exists.
pub fn brute_bipartite(inst: &BipartiteInstance, ell: usize) -> Result<Degree, AppsError> {
    let n = inst.n;
    if n > BRUTE_MAX_N {
        return Err(AppsError::CapExceeded(format!("n = {n} > {BRUTE_MAX_N}")));
    }
    let mut w: Vec<Vec<Option<i64>>> = vec![vec![None; n]; n];
    for (&(i, j), &c) in inst.edges.iter().zip(&inst.weights) {
        if i >= n || j >= n {
            return Err(AppsError::DimensionMismatch(format!("edge ({i}, {j}) outside [0, {n})")));
        }
        w[i][j] = Some(w[i][j].map_or(c, |old: i64| old.max(c)));
    }
    // best[mask] over rows processed so far; the edge count is popcount(mask)
    let mut best: Vec<Option<i64>> = vec![None; 1 << n];
    best[0] = Some(0);
    for row in &w {
        let prev = best.clone();
        for (mask, v) in prev.iter().enumerate() {
            let Some(v) = v else { continue };
            for (j, c) in row.iter().enumerate() {
                if let Some(c) = c {
                    if mask & (1 << j) == 0 {
                        let t = &mut best[mask | (1 << j)];
                        *t = Some(t.map_or(v + c, |old| old.max(v + c)));
                    }
                }
            }
        }
    }
    Ok(best
        .iter()
        .enumerate()
        .filter(|(mask, _)| mask.count_ones() as usize == ell)
        .filter_map(|(_, v)| *v)
        .max()
        .map_or(Degree::NegInf, Degree::Finite))
}

fn independent(f: Fp, vs: &[Vec<i64>], idx: &[usize]) -> bool {
    idx.is_empty() || Mat::from_i64_rows(f, &idx.iter().map(|&k| vs[k].clone()).collect::<Vec<_>>()).rank() == idx.len()
}

/// Maximum weight of a common independent set of size `ell` of the linear
/// matroids of `a` and `b` over `GF(p)`, by enumeration of all subsets.
pub fn brute_matroid_intersection(f: Fp, inst: &MatroidPairInstance, ell: usize) -> Result<Degree, AppsError> {
    let m = inst.weights.len();
    if inst.n > BRUTE_MAX_N || m > BRUTE_MAX_M {
        return Err(AppsError::CapExceeded(format!("n = {}, m = {m}", inst.n)));
    }
    if inst.a.len() != m || inst.b.len() != m {
        return Err(AppsError::DimensionMismatch("vector families and weights differ in length".into()));
    }
    Ok((0..m)
        .combinations(ell)
        .filter(|s| independent(f, &inst.a, s) && independent(f, &inst.b, s))
        .map(|s| s.iter().map(|&k| inst.weights[k]).sum::<i64>())
        .max()
        .map_or(Degree::NegInf, Degree::Finite))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two() {
        let inst = BipartiteInstance { n: 2, edges: vec![(0, 0), (0, 1), (1, 0), (1, 1)], weights: vec![3, 1, 2, 4] };
        assert_eq!(brute_bipartite(&inst, 2).unwrap(), Degree::Finite(7));
        assert_eq!(brute_bipartite(&inst, 1).unwrap(), Degree::Finite(4));
        assert_eq!(brute_bipartite(&inst, 0).unwrap(), Degree::Finite(0));
        let path = BipartiteInstance { n: 2, edges: vec![(0, 0), (1, 0)], weights: vec![1, 1] };
        assert_eq!(brute_bipartite(&path, 2).unwrap(), Degree::NegInf);
    }

    #[test]
    fn matroid_pair() {
        let f = Fp::new(5).unwrap();
        // a_1 = a_2 = e_1, b_1 = e_1, b_2 = e_2: only singletons are common independent
        let inst =
            MatroidPairInstance { n: 2, a: vec![vec![1, 0], vec![1, 0]], b: vec![vec![1, 0], vec![0, 1]], weights: vec![2, 3] };
        assert_eq!(brute_matroid_intersection(f, &inst, 1).unwrap(), Degree::Finite(3));
        assert_eq!(brute_matroid_intersection(f, &inst, 2).unwrap(), Degree::NegInf);
        let big = MatroidPairInstance { n: 9, a: vec![], b: vec![], weights: vec![] };
        assert!(matches!(brute_matroid_intersection(f, &big, 0), Err(AppsError::CapExceeded(_))));
    }
}
