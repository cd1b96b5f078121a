use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{
    find_primal, iteration_cap, kappa_min, monomial_leading, pair_sums, rationals, DegDetError, DegreeProfile, DualMats,
    DualSolution, Guarantee, InfCertificate, IterationRecord, LevelCertificate, DEFAULT_TRIALS,
};
use crate::mvsp::{block_diagonalize_witness, FrWitness, OrderedPartition, Solver};
use crate::ratfunc::Degree;
use crate::scalar::{ExactRational, Mat};
use crate::symbolic::{SymbolicMatrix, WeightedSymbolicMatrix};

type Q = ExactRational;

/// Largest feasible step `kappa1` and largest order-preserving step
/// `kappa2`; `None` means unbounded.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepSizes {
    pub kappa1: Option<ExactRational>,
    pub kappa2: Option<ExactRational>,
}

impl StepSizes {
    pub fn kappa(&self) -> Option<ExactRational> {
        kappa_min(self.kappa1.clone(), self.kappa2.clone())
    }
}

/// Step sizes for the move `alpha += kappa u`, `beta += kappa v` given the
/// transformed terms `mk`.
pub(crate) fn steps(alpha: &[Q], beta: &[Q], u: &[Q], v: &[Q], mk: &[Mat], c: &[Q]) -> StepSizes {
    let n = alpha.len();
    let zero = Q::zero();
    let mut k1: Option<Q> = None;
    for (k, m) in mk.iter().enumerate() {
        for i in 0..n {
            for j in 0..n {
                let rate = &u[i] + &v[j];
                if rate <= zero || m.get(i, j) == 0 {
                    continue;
                }
                let slack = -(&(&alpha[i] + &beta[j]) + &c[k]);
                k1 = kappa_min(k1, Some(&slack / &rate));
            }
        }
    }
    let mut k2: Option<Q> = None;
    for (vals, dir) in [(alpha, u), (beta, v)] {
        for i in 0..n.saturating_sub(1) {
            let rate = &dir[i + 1] - &dir[i];
            if rate > zero {
                k2 = kappa_min(k2, Some(&(&vals[i] - &vals[i + 1]) / &rate));
            }
        }
    }
    StepSizes { kappa1: k1, kappa2: k2 }
}

fn indicator(n: usize, set: &[usize], on: i64, off: i64) -> Vec<Q> {
    (0..n).map(|i| Q::from_int(if set.contains(&i) { on } else { off })).collect()
}

/// Step sizes for a dual whose `P`, `Q` already include the witness `S`,
/// `T`, with zero block on rows `x` and columns `y`. Symmetric duals move by
/// `(1_X + 1_Y - 1) / 2` on both sides.
pub fn step_sizes(dual: &DualSolution, x: &[usize], y: &[usize], a: &WeightedSymbolicMatrix) -> Result<StepSizes, DegDetError> {
    let DualMats::Monomial { p, q } = &dual.mats else {
        return Err(DegDetError::Shape("step sizes need a monomial-mode dual".into()));
    };
    let a = a.padded_square();
    let n = a.n();
    if dual.n() != n {
        return Err(DegDetError::Shape(format!("dual of size {} for a matrix of size {n}", dual.n())));
    }
    let mk: Vec<Mat> = a.base.terms().iter().map(|t| p.mul(t).mul(q)).collect();
    let c = rationals(&a.weights);
    let (u, v) = if dual.symmetric {
        let half = Q::new(1, 2);
        let d: Vec<Q> = (0..n).map(|i| &half * &Q::from_int(i64::from(x.contains(&i)) + i64::from(y.contains(&i)) - 1)).collect();
        (d.clone(), d)
    } else {
        (indicator(n, x, 1, 0), indicator(n, y, 0, -1))
    };
    Ok(steps(&dual.alpha, &dual.beta, &u, &v, &mk, &c))
}

/// Records `Delta_l` for `l` in `levels` from the current dual.
pub(crate) fn record_levels<R: Rng + ?Sized>(
    prof: &mut DegreeProfile,
    lead: &SymbolicMatrix,
    dual: &DualSolution,
    levels: std::ops::RangeInclusive<usize>,
    rng: &mut R,
) -> Result<(), DegDetError> {
    for l in levels {
        let obj = dual.objective(l);
        let val = obj.to_i64().ok_or_else(|| DegDetError::Infeasible(format!("bound {obj} for ell = {l} is not an integer")))?;
        let (rows, cols) =
            find_primal(lead, &dual.alpha, &dual.beta, l, DEFAULT_TRIALS, rng).ok_or(DegDetError::PrimalNotFound(l))?;
        prof.values[l] = Degree::Finite(val);
        prof.certificates[l] = Some(LevelCertificate { dual: dual.clamped(l), rows, cols });
    }
    Ok(())
}

pub(crate) fn zero_matrix_certificate(f: crate::scalar::Fp, n: usize) -> InfCertificate {
    let id = Mat::identity(f, n);
    InfCertificate::ZeroBlock {
        from: 1,
        witness: FrWitness { s: id.clone(), t: id, rows: (0..n).collect(), cols: (0..n).collect() },
    }
}

/// Algebraic Hungarian method: `Delta_l(A[c])` for all `l` with constant
/// transformations, block-diagonal dominant witnesses and long steps.
pub fn hungarian_deg_det<R: Rng + ?Sized>(
    a: &WeightedSymbolicMatrix,
    solver: &Solver,
    rng: &mut R,
) -> Result<DegreeProfile, DegDetError> {
    let a = a.padded_square();
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
    let mut alpha = vec![Q::zero(); n];
    let mut beta = vec![Q::from_int(-d); n];
    let mut p = Mat::identity(f, n);
    let mut q = Mat::identity(f, n);
    let mut ell = 0;
    let mut pending: Option<(StepSizes, Q)> = None;
    let cap = iteration_cap(n, 4 * (n * n * n) as u64);
    loop {
        let sums = pair_sums(&alpha, &beta);
        let (lead, _) = monomial_leading(&a, &p, &q, |i, j, k| (&sums[i][j] + &c[k]).cmp(&zero))?;
        let rows = OrderedPartition::from_sorted(&alpha);
        let cols = OrderedPartition::from_sorted(&beta);
        let out = solver.solve(&lead, &rows, &cols)?;
        if !out.dominant {
            prof.guarantee = Guarantee::NonDominant;
        }
        let rank = out.witness.value();
        if rank < ell {
            return Err(DegDetError::RankDecrease(ell, rank));
        }
        if let Some((st, kappa)) = pending.take() {
            if rank == ell && st.kappa2.as_ref() != Some(&kappa) {
                prof.step_mismatches += 1;
            }
        }
        if rank > ell {
            let dual = DualSolution::monomial(alpha.clone(), beta.clone(), p.clone(), q.clone());
            record_levels(&mut prof, &lead, &dual, ell + 1..=rank, rng)?;
            ell = rank;
            if ell == n {
                break;
            }
        }
        let dual = DualSolution::monomial(alpha.clone(), beta.clone(), p.clone(), q.clone());
        if dual.objective(ell + 1) <= Q::from_int((ell as i64 + 1) * d0) {
            let rank_witness = Some(out.witness);
            prof.neg_inf = Some(InfCertificate::Cutoff { from: ell + 1, dual, d0, rank_witness });
            break;
        }
        if prof.iterations >= cap {
            return Err(DegDetError::IterationLimit(cap));
        }
        prof.iterations += 1;

        let w = block_diagonalize_witness(&out.witness, &rows, &cols)?;
        let p2 = w.s.mul(&p);
        let q2 = q.mul(&w.t);
        let mk: Vec<Mat> = a.base.terms().iter().map(|t| p2.mul(t).mul(&q2)).collect();
        let u = indicator(n, &w.rows, 1, 0);
        let v = indicator(n, &w.cols, 0, -1);
        let st = steps(&alpha, &beta, &u, &v, &mk, &c);
        prof.trace.push(IterationRecord {
            ell,
            r: w.r(),
            s: w.s_size(),
            kappa1: st.kappa1.clone(),
            kappa2: st.kappa2.clone(),
            kappa: st.kappa(),
            method: out.method.to_string(),
        });
        if st.kappa1.is_none() {
            let witness = FrWitness { s: p2, t: q2, rows: w.rows, cols: w.cols };
            prof.neg_inf = Some(InfCertificate::ZeroBlock { from: ell + 1, witness });
            break;
        }
        let kappa = st.kappa().expect("finite step");
        let before = -(alpha.iter().cloned().sum::<Q>() + beta.iter().cloned().sum::<Q>());
        for i in 0..n {
            alpha[i] = &alpha[i] + &(&kappa * &u[i]);
            beta[i] = &beta[i] + &(&kappa * &v[i]);
        }
        p = p2;
        q = q2;
        let after = -(alpha.iter().cloned().sum::<Q>() + beta.iter().cloned().sum::<Q>());
        if after >= before {
            return Err(DegDetError::Monotonicity { before: before.to_string(), after: after.to_string() });
        }
        pending = Some((st, kappa));
        let dual = DualSolution::monomial(alpha.clone(), beta.clone(), p.clone(), q.clone());
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

    fn solve(a: &WeightedSymbolicMatrix) -> DegreeProfile {
        hungarian_deg_det(a, &Solver::default(), &mut rng_from_seed(7)).unwrap()
    }

    fn edmonds(f: Fp, n: usize, edges: &[(usize, usize, i64)]) -> WeightedSymbolicMatrix {
        let terms: Vec<_> = edges.iter().map(|&(i, j, _)| vec![(i, j, 1)]).collect();
        let base = SymbolicMatrix::from_triples(f, n, n, &terms);
        WeightedSymbolicMatrix::new(base, edges.iter().map(|e| e.2).collect()).unwrap()
    }

    #[test]
    fn bipartite_two_by_two() {
        let f = Fp::new(65521).unwrap();
        let a = edmonds(f, 2, &[(0, 0, 3), (0, 1, 1), (1, 0, 2), (1, 1, 4)]);
        let prof = solve(&a);
        assert_eq!(prof.finite_values(), vec![Some(0), Some(4), Some(7)]);
        assert!(prof.neg_inf.is_none());
        assert_eq!(prof.guarantee, Guarantee::Dominant);
        assert!(prof.within_bound());
        assert_eq!(prof.step_mismatches, 0);
    }

    #[test]
    fn rank_deficient_gives_zero_block() {
        let f = Fp::new(65521).unwrap();
        // x1 t^2 e1 e1^T + x2 t e1 e2^T: one nonzero row
        let a = edmonds(f, 2, &[(0, 0, 2), (0, 1, 1)]);
        let prof = solve(&a);
        assert_eq!(prof.finite_values(), vec![Some(0), Some(2), None]);
        match prof.neg_inf.unwrap() {
            InfCertificate::ZeroBlock { from, witness } => {
                assert_eq!(from, 2);
                assert!(witness.verify(&a.base));
                assert!(witness.value() < 2);
            }
            other => panic!("unexpected certificate {other:?}"),
        }
    }

    #[test]
    fn zero_weights_give_flat_profile() {
        let f = Fp::new(65521).unwrap();
        let a = edmonds(f, 3, &[(0, 0, 0), (1, 1, 0), (0, 1, 0)]);
        assert_eq!(solve(&a).finite_values(), vec![Some(0), Some(0), Some(0), None]);
    }

    #[test]
    fn step_sizes_on_initial_dual() {
        let f = Fp::new(65521).unwrap();
        let a = edmonds(f, 2, &[(0, 0, 1), (1, 1, 3)]);
        let id = Mat::identity(f, 2);
        let dual = DualSolution::monomial(rationals(&[0, 0]), rationals(&[-3, -3]), id.clone(), id);
        // zero block: row 0 against column 0 (entry t x1)
        let st = step_sizes(&dual, &[0], &[0], &a).unwrap();
        assert_eq!(st.kappa1, Some(Q::from_int(2)));
        assert_eq!(st.kappa2, None);
    }
}
