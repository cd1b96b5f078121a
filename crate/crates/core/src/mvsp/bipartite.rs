use std::collections::VecDeque;

use super::FrWitness;
use crate::scalar::{Fp, Mat};

/// Maximum matching by augmenting paths. Returns `(row_mate, col_mate)`.
pub fn max_bipartite_matching(rows: usize, cols: usize, adj: &[Vec<usize>]) -> (Vec<Option<usize>>, Vec<Option<usize>>) {
    let mut row_mate = vec![None; rows];
    let mut col_mate = vec![None; cols];
    fn augment(
        r: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        row_mate: &mut [Option<usize>],
        col_mate: &mut [Option<usize>],
    ) -> bool {
        for &c in &adj[r] {
            if seen[c] {
                continue;
            }
            seen[c] = true;
            if col_mate[c].is_none() || augment(col_mate[c].unwrap(), adj, seen, row_mate, col_mate) {
                row_mate[r] = Some(c);
                col_mate[c] = Some(r);
                return true;
            }
        }
        false
    }
    for r in 0..rows {
        let mut seen = vec![false; cols];
        augment(r, adj, &mut seen, &mut row_mate, &mut col_mate);
    }
    (row_mate, col_mate)
}

/// Dominant witness for the Edmonds matrix of a bipartite graph on `n + n`
/// vertices. Columns reachable from unmatched columns by alternating paths,
/// together with the rows they do not reach, form the maximum stable set with
/// the most rows; the permutations `S`, `T` move it into the zero block.
pub fn mvsp_bipartite(field: Fp, n: usize, edges: &[(usize, usize)]) -> FrWitness {
    let mut adj = vec![Vec::new(); n];
    let mut radj = vec![Vec::new(); n];
    for &(i, j) in edges {
        if !adj[i].contains(&j) {
            adj[i].push(j);
            radj[j].push(i);
        }
    }
    for a in adj.iter_mut().chain(radj.iter_mut()) {
        a.sort_unstable();
    }
    let (row_mate, col_mate) = max_bipartite_matching(n, n, &adj);
    let mut row_seen = vec![false; n];
    let mut col_seen = vec![false; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&c| col_mate[c].is_none()).collect();
    for &c in &queue {
        col_seen[c] = true;
    }
    while let Some(c) = queue.pop_front() {
        for &r in &radj[c] {
            if row_seen[r] {
                continue;
            }
            row_seen[r] = true;
            let m = row_mate[r].expect("maximum matching has no augmenting path");
            if !col_seen[m] {
                col_seen[m] = true;
                queue.push_back(m);
            }
        }
    }
    let zr: Vec<usize> = (0..n).filter(|&r| !row_seen[r]).collect();
    let zc: Vec<usize> = (0..n).filter(|&c| col_seen[c]).collect();
    let row_order: Vec<usize> = zr.iter().copied().chain((0..n).filter(|r| row_seen[*r])).collect();
    let col_order: Vec<usize> = zc.iter().copied().chain((0..n).filter(|c| !col_seen[*c])).collect();
    let id = Mat::identity(field, n);
    FrWitness {
        s: id.select_rows(&row_order),
        t: id.select_cols(&col_order),
        rows: (0..zr.len()).collect(),
        cols: (0..zc.len()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mvsp::mvsp_exhaustive;
    use crate::scalar::rng_from_seed;
    use crate::symbolic::SymbolicMatrix;
    use rand::Rng;

    fn f() -> Fp {
        Fp::new(2).unwrap()
    }

    fn edmonds(n: usize, edges: &[(usize, usize)]) -> SymbolicMatrix {
        let terms: Vec<_> = edges.iter().map(|&(i, j)| vec![(i, j, 1)]).collect();
        let terms = if terms.is_empty() { vec![vec![]] } else { terms };
        SymbolicMatrix::from_triples(f(), n, n, &terms)
    }

    #[test]
    fn single_edge() {
        let w = mvsp_bipartite(f(), 2, &[(0, 0)]);
        assert_eq!(w.value(), 1);
        // the dominant optimum keeps both rows: U = K^2, V = span(e_2)
        assert_eq!((w.r(), w.s_size()), (2, 1));
        assert_eq!(w.t.select_cols(&w.cols).col(0), vec![0, 1]);
        assert!(w.verify(&edmonds(2, &[(0, 0)])));
    }

    #[test]
    fn perfect_and_empty() {
        let w = mvsp_bipartite(f(), 3, &[(0, 0), (1, 1), (2, 2)]);
        assert_eq!(w.value(), 3);
        assert_eq!(w.r() + w.s_size(), 3);
        let w = mvsp_bipartite(f(), 3, &[]);
        assert_eq!((w.r(), w.s_size()), (3, 3));
    }

    #[test]
    fn agrees_with_exhaustive_and_is_dominant() {
        let mut rng = rng_from_seed(11);
        for _ in 0..60 {
            let n = rng.gen_range(1..=4);
            let edges: Vec<(usize, usize)> =
                (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|_| rng.gen_bool(0.35)).collect();
            let a = edmonds(n, &edges);
            let w = mvsp_bipartite(f(), n, &edges);
            assert!(w.verify(&a));
            let ex = mvsp_exhaustive(&a, true, 5000).unwrap();
            assert_eq!(w.value(), ex.value);
            assert_eq!((w.r(), w.s_size()), (ex.u.dim(), ex.v.dim()));
            assert_eq!(w.u(), ex.u);
        }
    }
}
