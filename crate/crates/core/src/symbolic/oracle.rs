use itertools::Itertools;
use rand::Rng;
use rayon::prelude::*;

use super::{with_eval_field, EvalField, SymbolicError, SymbolicMatrix, WeightedSymbolicMatrix, ORACLE_MAX_N};
use crate::ratfunc::Degree;
use crate::scalar::matrix::{det_in_place, interpolated_degree, rank_in_place};
use crate::scalar::{derived_rng, Field};

/// Rank of one random substitution of the `d`-blow-up, computed in `ef`.
pub fn blowup_rank<R: Rng + ?Sized>(a: &SymbolicMatrix, d: usize, ef: &EvalField, rng: &mut R) -> usize {
    with_eval_field!(ef, |f| blowup_rank_in(f, a, d, rng))
}

fn blowup_rank_in<F: Field, R: Rng + ?Sized>(f: &F, a: &SymbolicMatrix, d: usize, rng: &mut R) -> usize {
    let (r, c) = (a.rows() * d, a.cols() * d);
    let mut buf = vec![f.zero(); r * c];
    for t in a.terms() {
        for ka in 0..d {
            for kb in 0..d {
                let s = f.random(rng);
                for i in 0..a.rows() {
                    for j in 0..a.cols() {
                        let v = t.get(i, j);
                        if v != 0 {
                            let idx = (i * d + ka) * c + j * d + kb;
                            buf[idx] = f.add(buf[idx], f.mul(f.embed(v), s));
                        }
                    }
                }
            }
        }
    }
    rank_in_place(f, r, c, &mut buf)
}

/// Monte-Carlo nc-rank: `rank(A^{d}) / d` with `d = max(n - 1, 1)`, maximized
/// over `trials` random substitutions. Never exceeds the true value.
pub fn nc_rank_randomized<R: Rng + ?Sized>(a: &SymbolicMatrix, trials: usize, rng: &mut R) -> usize {
    let n = a.n();
    if n == 0 || a.is_zero() {
        return 0;
    }
    let d = (n - 1).max(1);
    let ef = EvalField::for_prime(a.field());
    let base: u64 = rng.gen();
    (0..trials.max(1) as u64)
        .into_par_iter()
        .map(|t| {
            let mut r = derived_rng(base, t);
            blowup_rank(a, d, &ef, &mut r) / d
        })
        .max()
        .unwrap_or(0)
}

fn check_ell(a: &WeightedSymbolicMatrix, ell: usize) -> Result<usize, SymbolicError> {
    let n = a.n();
    if n > ORACLE_MAX_N {
        return Err(SymbolicError::TooLarge(n));
    }
    if ell > n {
        return Err(SymbolicError::BadCardinality { ell, max: n });
    }
    Ok(n)
}

/// Maximum degree of an `ell x ell` minor of a random substitution `A[c](s)`,
/// maximized over all row/column subsets and `trials` substitutions.
/// One-sided: never exceeds the true commutative value `delta_ell`.
pub fn delta_ell_oracle<R: Rng + ?Sized>(
    a: &WeightedSymbolicMatrix,
    ell: usize,
    trials: usize,
    rng: &mut R,
) -> Result<Degree, SymbolicError> {
    let n = check_ell(a, ell)?;
    if ell == 0 {
        return Ok(Degree::Finite(0));
    }
    let Some((cmin, cmax)) = a.weight_range() else {
        return Ok(Degree::NegInf);
    };
    let points = (ell as i64 * (cmax - cmin) + 1) as u64;
    let ef = EvalField::for_prime(a.field());
    if points > ef.order() {
        return Err(SymbolicError::FieldTooSmall(ef.order(), points));
    }
    let sq = a.padded_square();
    let base: u64 = rng.gen();
    let best = with_eval_field!(&ef, |f| delta_ell_in(f, &sq, ell, n, cmin, points, trials, base));
    Ok(best.map_or(Degree::NegInf, |d| Degree::Finite(d + ell as i64 * cmin)))
}

#[allow(clippy::too_many_arguments)]
fn delta_ell_in<F: Field>(
    f: &F,
    a: &WeightedSymbolicMatrix,
    ell: usize,
    n: usize,
    cmin: i64,
    points: u64,
    trials: usize,
    base: u64,
) -> Option<i64> {
    let xs: Vec<F::Elem> = (0..points).map(|i| f.element(i)).collect();
    let subsets: Vec<Vec<usize>> = (0..n).combinations(ell).collect();
    (0..trials.max(1) as u64)
        .flat_map(|trial| {
            let mut rng = derived_rng(base, trial);
            let s: Vec<F::Elem> = (0..a.base.num_terms()).map(|_| f.random(&mut rng)).collect();
            // full substituted matrix at every evaluation point
            let mats: Vec<Vec<F::Elem>> = xs
                .iter()
                .map(|&x| {
                    let scaled: Vec<F::Elem> =
                        a.weights.iter().zip(&s).map(|(&c, &sk)| f.mul(sk, pow(f, x, (c - cmin) as u64))).collect();
                    a.base.shrink_in(f, &scaled)
                })
                .collect();
            let subsets = &subsets;
            let pairs: Vec<(usize, usize)> = (0..subsets.len()).flat_map(|i| (0..subsets.len()).map(move |j| (i, j))).collect();
            pairs
                .into_par_iter()
                .filter_map(|(ii, jj)| {
                    let (rows, cols) = (&subsets[ii], &subsets[jj]);
                    let vals: Vec<F::Elem> = mats
                        .iter()
                        .map(|m| {
                            let mut buf: Vec<F::Elem> =
                                rows.iter().flat_map(|&r| cols.iter().map(move |&c| m[r * n + c])).collect();
                            det_in_place(f, ell, &mut buf)
                        })
                        .collect();
                    interpolated_degree(f, &xs, &vals).map(|d| d as i64)
                })
                .max()
        })
        .max()
}

fn pow<F: Field>(f: &F, mut a: F::Elem, mut e: u64) -> F::Elem {
    let mut r = f.one();
    while e > 0 {
        if e & 1 == 1 {
            r = f.mul(r, a);
        }
        a = f.mul(a, a);
        e >>= 1;
    }
    r
}

/// `max_{|I|=|J|=ell} deg det A[c][I,J]^{d} / d` for random substitutions of
/// the `d`-blow-up, `d = max(ell - 1, 1)`. Estimates the noncommutative
/// `Delta_ell` from below. Samples whose degree is not a multiple of `d`
/// are necessarily unlucky and are discarded.
pub fn delta_blowup_oracle<R: Rng + ?Sized>(
    a: &WeightedSymbolicMatrix,
    ell: usize,
    trials: usize,
    rng: &mut R,
) -> Result<Degree, SymbolicError> {
    let n = check_ell(a, ell)?;
    if ell == 0 {
        return Ok(Degree::Finite(0));
    }
    let Some((cmin, cmax)) = a.weight_range() else {
        return Ok(Degree::NegInf);
    };
    let d = (ell - 1).max(1);
    let points = ((ell * d) as i64 * (cmax - cmin) + 1) as u64;
    let ef = EvalField::for_prime(a.field());
    if points > ef.order() {
        return Err(SymbolicError::FieldTooSmall(ef.order(), points));
    }
    let sq = a.padded_square();
    let base: u64 = rng.gen();
    let best = with_eval_field!(&ef, |f| blowup_delta_in(f, &sq, ell, n, d, cmin, points, trials, base));
    Ok(best.map_or(Degree::NegInf, |v| Degree::Finite(v + ell as i64 * cmin)))
}

#[allow(clippy::too_many_arguments)]
fn blowup_delta_in<F: Field>(
    f: &F,
    a: &WeightedSymbolicMatrix,
    ell: usize,
    n: usize,
    d: usize,
    cmin: i64,
    points: u64,
    trials: usize,
    base: u64,
) -> Option<i64> {
    let xs: Vec<F::Elem> = (0..points).map(|i| f.element(i)).collect();
    let subsets: Vec<Vec<usize>> = (0..n).combinations(ell).collect();
    let m = a.base.num_terms();
    let sz = ell * d;
    let tasks: Vec<(usize, usize, u64)> = (0..subsets.len())
        .flat_map(|i| (0..subsets.len()).flat_map(move |j| (0..trials.max(1) as u64).map(move |t| (i, j, t))))
        .collect();
    tasks
        .into_par_iter()
        .enumerate()
        .filter_map(|(idx, (ii, jj, _))| {
            let (rows, cols) = (&subsets[ii], &subsets[jj]);
            let sub = a.base.select(rows, cols);
            let active: Vec<usize> = (0..m).filter(|&k| !sub.term(k).is_zero()).collect();
            if active.is_empty() {
                return None;
            }
            let mut rng = derived_rng(base, idx as u64);
            // s[k][a][b]
            let s: Vec<Vec<F::Elem>> = active.iter().map(|_| (0..d * d).map(|_| f.random(&mut rng)).collect()).collect();
            let vals: Vec<F::Elem> = xs
                .iter()
                .map(|&x| {
                    let mut buf = vec![f.zero(); sz * sz];
                    for (ai, &k) in active.iter().enumerate() {
                        let xp = pow(f, x, (a.weights[k] - cmin) as u64);
                        let t = sub.term(k);
                        for i in 0..ell {
                            for j in 0..ell {
                                let v = t.get(i, j);
                                if v == 0 {
                                    continue;
                                }
                                let coef = f.mul(f.embed(v), xp);
                                for ka in 0..d {
                                    for kb in 0..d {
                                        let idx = (i * d + ka) * sz + j * d + kb;
                                        buf[idx] = f.add(buf[idx], f.mul(coef, s[ai][ka * d + kb]));
                                    }
                                }
                            }
                        }
                    }
                    det_in_place(f, sz, &mut buf)
                })
                .collect();
            let deg = interpolated_degree(f, &xs, &vals)?;
            (deg % d == 0).then_some((deg / d) as i64)
        })
        .max()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rng_from_seed, Fp};

    fn k3(p: u64, c: Vec<i64>) -> WeightedSymbolicMatrix {
        let f = Fp::new(p).unwrap();
        let base = SymbolicMatrix::from_triples(
            f,
            3,
            3,
            &[vec![(0, 1, 1), (1, 0, -1)], vec![(0, 2, 1), (2, 0, -1)], vec![(1, 2, 1), (2, 1, -1)]],
        );
        WeightedSymbolicMatrix::new(base, c).unwrap()
    }

    #[test]
    fn k3_rank_gap() {
        for p in [2, 3, 5, 65521] {
            let a = k3(p, vec![1, 1, 1]);
            let mut rng = rng_from_seed(p);
            assert_eq!(nc_rank_randomized(&a.base, 3, &mut rng), 3, "p = {p}");
            assert_eq!(delta_ell_oracle(&a, 3, 3, &mut rng), Ok(Degree::NegInf));
            assert_eq!(delta_ell_oracle(&a, 2, 3, &mut rng), Ok(Degree::Finite(2)));
            assert_eq!(delta_blowup_oracle(&a, 3, 3, &mut rng), Ok(Degree::Finite(3)));
        }
    }

    #[test]
    fn bipartite_two_by_two() {
        let f = Fp::new(65521).unwrap();
        let base = SymbolicMatrix::from_triples(f, 2, 2, &[vec![(0, 0, 1)], vec![(0, 1, 1)], vec![(1, 0, 1)], vec![(1, 1, 1)]]);
        let a = WeightedSymbolicMatrix::new(base, vec![3, 1, 2, 4]).unwrap();
        let mut rng = rng_from_seed(0);
        assert_eq!(delta_ell_oracle(&a, 2, 3, &mut rng), Ok(Degree::Finite(7)));
        assert_eq!(delta_ell_oracle(&a, 1, 3, &mut rng), Ok(Degree::Finite(4)));
        assert_eq!(delta_ell_oracle(&a, 0, 3, &mut rng), Ok(Degree::Finite(0)));
        assert!(matches!(delta_ell_oracle(&a, 3, 3, &mut rng), Err(SymbolicError::BadCardinality { .. })));
        assert_eq!(delta_blowup_oracle(&a, 2, 3, &mut rng), Ok(Degree::Finite(7)));
    }

    #[test]
    fn zero_matrix_is_minus_infinity() {
        let f = Fp::new(7).unwrap();
        let base = SymbolicMatrix::from_triples(f, 2, 2, &[vec![]]);
        let a = WeightedSymbolicMatrix::new(base, vec![0]).unwrap();
        let mut rng = rng_from_seed(0);
        assert_eq!(delta_blowup_oracle(&a, 1, 3, &mut rng), Ok(Degree::NegInf));
        assert_eq!(nc_rank_randomized(&a.base, 3, &mut rng), 0);
    }
}
