use itertools::Itertools;
use rand::Rng;

use crate::symbolic::{blowup_rank, EvalField, SymbolicMatrix};

/// Candidate index sets per side; enumeration stops after this many.
const CANDIDATE_CAP: usize = 400;
/// Pairs examined before giving up.
const PAIR_CAP: usize = 20_000;

/// One-sided nc-nonsingularity test of a square matrix: `true` is a proof
/// (a random substitution of a blow-up attains full rank).
pub fn certify_nonsingular<R: Rng + ?Sized>(a: &SymbolicMatrix, trials: usize, rng: &mut R) -> bool {
    let n = a.rows();
    if n != a.cols() {
        return false;
    }
    if n == 0 {
        return true;
    }
    let ef = EvalField::for_prime(a.field());
    if blowup_rank(a, 1, &ef, rng) == n {
        return true;
    }
    let d = (n - 1).max(1);
    (0..trials.max(1)).any(|_| blowup_rank(a, d, &ef, rng) == n * d)
}

/// Index sets of size `ell` minimizing the sum of `vals`: everything strictly
/// below the threshold plus a choice from the tie class, later indices first.
fn candidates<T: Ord>(vals: &[T], ell: usize) -> Vec<Vec<usize>> {
    let n = vals.len();
    if ell == 0 {
        return vec![vec![]];
    }
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&x, &y| vals[y].cmp(&vals[x]));
    let theta = &vals[idx[n - ell]];
    let must: Vec<usize> = (0..n).filter(|&i| vals[i] < *theta).collect();
    let tie: Vec<usize> = (0..n).rev().filter(|&i| vals[i] == *theta).collect();
    tie.into_iter()
        .combinations(ell - must.len())
        .take(CANDIDATE_CAP)
        .map(|c| {
            let mut s: Vec<usize> = must.iter().copied().chain(c).collect();
            s.sort_unstable();
            s
        })
        .collect()
}

/// Finds `I`, `J` with `|I| = |J| = ell`, attaining the `ell` smallest values
/// of `alpha` and `beta`, whose leading submatrix is nc-nonsingular.
pub fn find_primal<T: Ord, R: Rng + ?Sized>(
    lead: &SymbolicMatrix,
    alpha: &[T],
    beta: &[T],
    ell: usize,
    trials: usize,
    rng: &mut R,
) -> Option<(Vec<usize>, Vec<usize>)> {
    if ell == 0 {
        return Some((vec![], vec![]));
    }
    let rows = candidates(alpha, ell);
    let cols = candidates(beta, ell);
    let ef = EvalField::for_prime(lead.field());
    let pairs = || rows.iter().cartesian_product(cols.iter()).take(PAIR_CAP);
    for (i, j) in pairs() {
        if blowup_rank(&lead.select(i, j), 1, &ef, rng) == ell {
            return Some((i.clone(), j.clone()));
        }
    }
    if ell <= 2 {
        // commutative rank equals nc-rank up to size 2; one more round guards
        // against an unlucky substitution
        return pairs().find(|(i, j)| blowup_rank(&lead.select(i, j), 1, &ef, rng) == ell).map(|(i, j)| (i.clone(), j.clone()));
    }
    pairs().find(|(i, j)| certify_nonsingular(&lead.select(i, j), trials, rng)).map(|(i, j)| (i.clone(), j.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rng_from_seed, Fp};

    #[test]
    fn candidate_sets() {
        assert_eq!(candidates(&[3, 2, 2, 1], 2), vec![vec![2, 3], vec![1, 3]]);
        assert_eq!(candidates(&[0, 0, 0], 1)[0], vec![2]);
        assert_eq!(candidates(&[5, 4], 2), vec![vec![0, 1]]);
    }

    #[test]
    fn skew_triangle_needs_blow_up() {
        let f = Fp::new(65521).unwrap();
        let k3 = SymbolicMatrix::from_triples(
            f,
            3,
            3,
            &[vec![(0, 1, 1), (1, 0, -1)], vec![(0, 2, 1), (2, 0, -1)], vec![(1, 2, 1), (2, 1, -1)]],
        );
        let mut rng = rng_from_seed(1);
        assert!(certify_nonsingular(&k3, 3, &mut rng));
        let z = [0, 0, 0];
        assert_eq!(find_primal(&k3, &z, &z, 3, 3, &mut rng), Some((vec![0, 1, 2], vec![0, 1, 2])));
        let (i, j) = find_primal(&k3, &z, &z, 2, 3, &mut rng).unwrap();
        assert!(certify_nonsingular(&k3.select(&i, &j), 1, &mut rng));
    }
}
