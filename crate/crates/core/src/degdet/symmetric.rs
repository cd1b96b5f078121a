use rand::Rng;

use super::hungarian::{record_levels, steps, zero_matrix_certificate};
use super::{
    iteration_cap, monomial_leading, pair_sums, rationals, DegDetError, DegreeProfile, DualMats, DualSolution, Guarantee,
    InfCertificate, IterationRecord,
};
use crate::mvsp::{FrWitness, OrderedPartition, Solver, Subspace};
use crate::scalar::{ExactRational, Mat};
use crate::symbolic::WeightedSymbolicMatrix;

type Q = ExactRational;

/// Rows of `basis` (reduced echelon form) with pivot in `block`, restricted
/// to the block: a basis of the initial forms of the subspace.
fn initial_forms(basis: &Mat, block: &std::ops::Range<usize>) -> Vec<Vec<u64>> {
    (0..basis.rows())
        .filter_map(|i| {
            let row = basis.row(i);
            let piv = row.iter().position(|&x| x != 0)?;
            block.contains(&piv).then(|| row[block.clone()].to_vec())
        })
        .collect()
}

/// Extends the independent rows `base` by rows of `extra` (and then unit
/// vectors when `complete`) keeping independence.
fn extend(f: crate::scalar::Fp, dim: usize, base: Vec<Vec<u64>>, extra: &[Vec<u64>], complete: bool) -> Vec<Vec<u64>> {
    let mut rows = base;
    let rank = |rows: &Vec<Vec<u64>>| {
        if rows.is_empty() {
            0
        } else {
            Mat::from_fn(f, rows.len(), dim, |i, j| rows[i][j]).rank()
        }
    };
    let mut r = rank(&rows);
    let units: Vec<Vec<u64>> = (0..dim).map(|i| (0..dim).map(|j| u64::from(i == j)).collect()).collect();
    let pool: Vec<&Vec<u64>> = if complete { extra.iter().chain(units.iter()).collect() } else { extra.iter().collect() };
    for v in pool {
        rows.push(v.clone());
        let r2 = rank(&rows);
        if r2 > r {
            r = r2;
        } else {
            rows.pop();
        }
    }
    rows
}

/// Block-diagonal `S` whose rows, inside each block, start with a basis of
/// the initial forms of `V`, continue to one of `U` and end with a
/// completion. Returns `S`, the positions spanning `in(U)` (`X`) and those
/// spanning `in(V)` (`Y`, a prefix of `X` in every block).
fn graded_witness(u: &Subspace, v: &Subspace, part: &OrderedPartition) -> (Mat, Vec<usize>, Vec<usize>) {
    let f = u.basis().field();
    let n = u.ambient();
    let mut s = Mat::zeros(f, n, n);
    let (mut x, mut y) = (Vec::new(), Vec::new());
    for b in part.blocks() {
        let size = b.len();
        let vb = initial_forms(v.basis(), b);
        let ub = initial_forms(u.basis(), b);
        let nv = vb.len();
        let with_u = extend(f, size, vb, &ub, false);
        let nu = with_u.len();
        let full = extend(f, size, with_u, &[], true);
        for (t, row) in full.iter().enumerate() {
            for (c, &val) in row.iter().enumerate() {
                s.set(b.start + t, b.start + c, val);
            }
            if t < nu {
                x.push(b.start + t);
            }
            if t < nv {
                y.push(b.start + t);
            }
        }
    }
    (s, x, y)
}

/// Hungarian method for matrices whose terms are symmetric or
/// skew-symmetric, keeping `alpha = beta` and `Q = P^T` with rational
/// exponents; `Delta_l = -2 * (sum of the last l entries of alpha)`.
pub fn symmetric_hungarian<R: Rng + ?Sized>(
    a: &WeightedSymbolicMatrix,
    solver: &Solver,
    rng: &mut R,
) -> Result<DegreeProfile, DegDetError> {
    if !a.base.is_termwise_symmetric() {
        return Err(DegDetError::NotSkewSymmetric);
    }
    let n = a.n();
    let f = a.field();
    let mut prof = DegreeProfile::empty(n);
    if n == 0 {
        return Ok(prof);
    }
    let Some((d0, d)) = a.weight_range() else {
        prof.neg_inf = Some(zero_matrix_certificate(f, n));
        return Ok(prof);
    };
    let c = rationals(&a.weights);
    let zero = Q::zero();
    let half = Q::new(1, 2);
    let mut alpha = vec![Q::new(-d, 2); n];
    let mut p = Mat::identity(f, n);
    let mut ell = 0;
    let cap = iteration_cap(n, 4 * (n * n * n) as u64);
    let dual_of = |alpha: &Vec<Q>, p: &Mat| DualSolution {
        alpha: alpha.clone(),
        beta: alpha.clone(),
        mats: DualMats::Monomial { p: p.clone(), q: p.transpose() },
        symmetric: true,
    };
    loop {
        let sums = pair_sums(&alpha, &alpha);
        let (lead, _) = monomial_leading(a, &p, &p.transpose(), |i, j, k| (&sums[i][j] + &c[k]).cmp(&zero))?;
        let part = OrderedPartition::from_sorted(&alpha);
        let out = solver.solve(&lead, &part, &part)?;
        if !out.dominant {
            prof.guarantee = Guarantee::NonDominant;
        }
        let rank = out.witness.value();
        if rank < ell {
            return Err(DegDetError::RankDecrease(ell, rank));
        }
        if rank > ell {
            record_levels(&mut prof, &lead, &dual_of(&alpha, &p), ell + 1..=rank, rng)?;
            ell = rank;
            if ell == n {
                break;
            }
        }
        let dual = dual_of(&alpha, &p);
        if dual.objective(ell + 1) <= Q::from_int((ell as i64 + 1) * d0) {
            let rank_witness = Some(out.witness);
            prof.neg_inf = Some(InfCertificate::Cutoff { from: ell + 1, dual, d0, rank_witness });
            break;
        }
        if prof.iterations >= cap {
            return Err(DegDetError::IterationLimit(cap));
        }
        prof.iterations += 1;

        // (U + V, U meet V) is again optimal and nested
        let (u0, v0) = (out.witness.u(), out.witness.v());
        let (u, v) = (u0.sum(&v0), u0.intersection(&v0));
        let (s, x, y) = graded_witness(&u, &v, &part);
        let w = FrWitness { s: s.clone(), t: s.transpose(), rows: x.clone(), cols: y.clone() };
        if !w.verify(&lead) {
            return Err(DegDetError::Infeasible("symmetrized witness lost its zero block".into()));
        }
        let p2 = s.mul(&p);
        let pt2 = p2.transpose();
        let mk: Vec<Mat> = a.base.terms().iter().map(|t| p2.mul(t).mul(&pt2)).collect();
        let delta: Vec<Q> =
            (0..n).map(|i| &half * &Q::from_int(i64::from(x.contains(&i)) + i64::from(y.contains(&i)) - 1)).collect();
        let st = steps(&alpha, &alpha, &delta, &delta, &mk, &c);
        prof.trace.push(IterationRecord {
            ell,
            r: x.len(),
            s: y.len(),
            kappa1: st.kappa1.clone(),
            kappa2: st.kappa2.clone(),
            kappa: st.kappa(),
            method: out.method.to_string(),
        });
        if st.kappa1.is_none() {
            let witness = FrWitness { s: p2, t: pt2, rows: x, cols: y };
            prof.neg_inf = Some(InfCertificate::ZeroBlock { from: ell + 1, witness });
            break;
        }
        let kappa = st.kappa().expect("finite step");
        let before: Q = -alpha.iter().cloned().sum::<Q>();
        for i in 0..n {
            alpha[i] = &alpha[i] + &(&kappa * &delta[i]);
        }
        p = p2;
        let after: Q = -alpha.iter().cloned().sum::<Q>();
        if after >= before {
            return Err(DegDetError::Monotonicity { before: before.to_string(), after: after.to_string() });
        }
        let dual = dual_of(&alpha, &p);
        if dual.objective(ell + 1) < Q::from_int((ell as i64 + 1) * d0) {
            prof.neg_inf = Some(InfCertificate::Cutoff { from: ell + 1, dual, d0, rank_witness: None });
            break;
        }
    }
    prof.iteration_bound = 4 * (ell * n * n) as u64;
    Ok(prof)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rng_from_seed, Fp};
    use crate::symbolic::SymbolicMatrix;

    fn tutte(p: u64, n: usize, edges: &[(usize, usize, i64)]) -> WeightedSymbolicMatrix {
        let f = Fp::new(p).unwrap();
        let terms: Vec<_> = edges.iter().map(|&(i, j, _)| vec![(i, j, 1), (j, i, -1)]).collect();
        let base = SymbolicMatrix::from_triples(f, n, n, &terms);
        WeightedSymbolicMatrix::new(base, edges.iter().map(|e| e.2).collect()).unwrap()
    }

    fn run(a: &WeightedSymbolicMatrix) -> DegreeProfile {
        symmetric_hungarian(a, &Solver::default(), &mut rng_from_seed(3)).unwrap()
    }

    #[test]
    fn triangle_unit_weights() {
        for p in [3, 65521] {
            let a = tutte(p, 3, &[(0, 1, 1), (0, 2, 1), (1, 2, 1)]);
            assert_eq!(run(&a).finite_values(), vec![Some(0), Some(1), Some(2), Some(3)]);
        }
    }

    #[test]
    fn triangle_uneven_weights() {
        // twice the maximum fractional matching: 2 * (2 + 1 + 1) / 2 = 4
        let a = tutte(3, 3, &[(0, 1, 2), (0, 2, 1), (1, 2, 1)]);
        let prof = run(&a);
        assert_eq!(prof.finite_values(), vec![Some(0), Some(2), Some(4), Some(4)]);
    }

    #[test]
    fn single_edge_has_rank_two() {
        let a = tutte(5, 3, &[(0, 1, 3)]);
        let prof = run(&a);
        assert_eq!(prof.finite_values(), vec![Some(0), Some(3), Some(6), None]);
        assert!(prof.neg_inf.is_some());
    }

    #[test]
    fn rejects_general_terms() {
        let f = Fp::new(5).unwrap();
        let base = SymbolicMatrix::from_triples(f, 2, 2, &[vec![(0, 1, 1)]]);
        let a = WeightedSymbolicMatrix::unweighted(base);
        assert_eq!(
            symmetric_hungarian(&a, &Solver::default(), &mut rng_from_seed(0)).unwrap_err(),
            DegDetError::NotSkewSymmetric
        );
    }
}
