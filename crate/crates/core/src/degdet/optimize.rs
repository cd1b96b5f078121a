use rand::Rng;

use super::{hungarian_deg_det, DegDetError};
use crate::mvsp::Solver;
use crate::ratfunc::Degree;
use crate::symbolic::WeightedSymbolicMatrix;

fn delta<R: Rng + ?Sized>(
    a: &WeightedSymbolicMatrix,
    w: &[i64],
    ell: usize,
    solver: &Solver,
    rng: &mut R,
) -> Result<i64, DegDetError> {
    let prof = hungarian_deg_det(&a.with_weights(w.to_vec()), solver, rng)?;
    match prof.values[ell] {
        Degree::Finite(v) => Ok(v),
        _ => Err(DegDetError::EmptyPolytope(ell)),
    }
}

const ATTEMPTS: usize = 8;

/// Integral maximizer `u` of `c^T u` over the polytope whose support
/// function is `w -> Delta_l(A[w])`. A random isolating weight
/// `w = (2n + 1)(M c + pi)` has a unique maximizing vertex with high
/// probability; its coordinates are then both one-sided differences
/// `Delta(w + e_k) - Delta(w)` and `Delta(w) - Delta(w - e_k)`. When they
/// disagree another `pi` is drawn.
pub fn optimize_q<R: Rng + ?Sized>(
    a: &WeightedSymbolicMatrix,
    ell: usize,
    solver: &Solver,
    rng: &mut R,
) -> Result<Vec<i64>, DegDetError> {
    let n = a.n();
    if ell > n {
        return Err(DegDetError::BadCardinality { ell, n });
    }
    let m = a.weights.len();
    let target = delta(a, &a.weights, ell, solver, rng)?;
    if ell == 0 || m == 0 {
        return Ok(vec![0; m]);
    }
    // vertices lie in [0, n]^m, so pi moves any objective by at most r * n * m
    let r = 4 * m as i64 * (n as i64 + 1);
    let big = r * n as i64 * m as i64 + 1;
    let scale = 2 * n as i64 + 1;
    let overflow = || DegDetError::Shape("isolating weights overflow".into());
    for _ in 0..ATTEMPTS {
        let w = a
            .weights
            .iter()
            .map(|&c| {
                let pi = rng.gen_range(1..=r);
                c.checked_mul(big).and_then(|x| x.checked_add(pi)).and_then(|x| x.checked_mul(scale))
            })
            .collect::<Option<Vec<i64>>>()
            .ok_or_else(overflow)?;
        let d = delta(a, &w, ell, solver, rng)?;
        let mut u = Vec::with_capacity(m);
        for k in 0..m {
            let mut wk = w.clone();
            wk[k] += 1;
            let up = delta(a, &wk, ell, solver, rng)? - d;
            wk[k] -= 2;
            let down = d - delta(a, &wk, ell, solver, rng)?;
            if up != down {
                break;
            }
            u.push(up);
        }
        if u.len() < m {
            continue;
        }
        let dot = |x: &[i64]| x.iter().zip(&u).map(|(a, b)| a * b).sum::<i64>();
        if dot(&w) == d && dot(&a.weights) == target {
            return Ok(u);
        }
    }
    Err(DegDetError::NotIsolated(ATTEMPTS))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rng_from_seed, Fp};
    use crate::symbolic::SymbolicMatrix;

    fn bipartite() -> WeightedSymbolicMatrix {
        let f = Fp::new(65521).unwrap();
        let edges = [(0, 0, 3), (0, 1, 1), (1, 0, 2), (1, 1, 4)];
        let terms: Vec<_> = edges.iter().map(|&(i, j, _)| vec![(i, j, 1)]).collect();
        let base = SymbolicMatrix::from_triples(f, 2, 2, &terms);
        WeightedSymbolicMatrix::new(base, edges.iter().map(|e| e.2).collect()).unwrap()
    }

    #[test]
    fn perfect_matching_indicator() {
        let u = optimize_q(&bipartite(), 2, &Solver::default(), &mut rng_from_seed(4)).unwrap();
        assert_eq!(u, vec![1, 0, 0, 1]);
    }

    #[test]
    fn zero_cardinality() {
        let u = optimize_q(&bipartite(), 0, &Solver::default(), &mut rng_from_seed(4)).unwrap();
        assert_eq!(u, vec![0; 4]);
    }

    #[test]
    fn single_entry_row() {
        let u = optimize_q(&bipartite(), 1, &Solver::default(), &mut rng_from_seed(4)).unwrap();
        assert_eq!(u, vec![0, 0, 0, 1], "the heaviest entry is the unique maximizer");
    }

    #[test]
    fn triangle_half_matching() {
        let f = Fp::new(65521).unwrap();
        let edges = [(0, 1), (0, 2), (1, 2)];
        let terms: Vec<_> = edges.iter().map(|&(i, j)| vec![(i, j, 1), (j, i, -1)]).collect();
        let a = WeightedSymbolicMatrix::new(SymbolicMatrix::from_triples(f, 3, 3, &terms), vec![1, 1, 1]).unwrap();
        let u = optimize_q(&a, 3, &Solver::default(), &mut rng_from_seed(4)).unwrap();
        assert_eq!(u, vec![1, 1, 1]);
    }

    #[test]
    fn empty_polytope() {
        let f = Fp::new(5).unwrap();
        let base = SymbolicMatrix::from_triples(f, 2, 2, &[vec![(0, 0, 1), (0, 1, 1)]]);
        let a = WeightedSymbolicMatrix::unweighted(base);
        assert_eq!(optimize_q(&a, 2, &Solver::default(), &mut rng_from_seed(0)).unwrap_err(), DegDetError::EmptyPolytope(2));
    }
}
