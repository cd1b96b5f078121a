use rand::Rng;

use super::hungarian::{record_levels, zero_matrix_certificate};
use super::{
    find_primal, integers, iteration_cap, non_increasing, DegDetError, DegreeProfile, DualMats, DualSolution, Guarantee,
    InfCertificate, IterationRecord, DEFAULT_TRIALS,
};
use crate::mvsp::{bruhat, OrderedPartition, Solver};
use crate::ratfunc::{leading_coeff_matrix, Degree, RatFn, RationalMatrix};
use crate::scalar::{ExactRational, Mat};
use crate::symbolic::{RationalSymbolicMatrix, SymbolicMatrix};

/// `(t^{kappa 1_r}) S (t^alpha) P = B (t^{alpha'}) P'` with `B` biproper
/// (discarded), `alpha'` sorted and `P'` biproper.
fn renorm_rows(
    alpha: &[i64],
    p: &RationalMatrix,
    s: &Mat,
    r: usize,
    kappa: i64,
) -> Result<(Vec<i64>, RationalMatrix), DegDetError> {
    let n = alpha.len();
    let f = p.field();
    let b = bruhat(s)?;
    let mut gamma = alpha.to_vec();
    for i in 0..r {
        gamma[b.perm[i]] += kappa;
    }
    let ut = RationalMatrix::from_fn(f, n, n, |i, j| RatFn::monomial(f, b.u.get(i, j), alpha[j] - alpha[i]));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| gamma[y].cmp(&gamma[x]));
    let all: Vec<usize> = (0..n).collect();
    Ok((order.iter().map(|&i| gamma[i]).collect(), ut.mul(p).select(&order, &all)))
}

/// `Q (t^beta) T (t^{kappa (1_s - 1)}) = Q' (t^{beta'}) B` with `B` biproper.
fn renorm_cols(
    beta: &[i64],
    q: &RationalMatrix,
    t: &Mat,
    s: usize,
    kappa: i64,
) -> Result<(Vec<i64>, RationalMatrix), DegDetError> {
    let n = beta.len();
    let f = q.field();
    let b = bruhat(t)?;
    let mut gamma = vec![0; n];
    for i in 0..n {
        gamma[b.perm[i]] = beta[i];
    }
    for g in gamma.iter_mut().skip(s) {
        *g -= kappa;
    }
    let lt = RationalMatrix::from_fn(f, n, n, |i, j| RatFn::monomial(f, b.l.get(i, j), beta[i] - beta[j]));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| gamma[y].cmp(&gamma[x]));
    let all: Vec<usize> = (0..n).collect();
    let qp = q.mul(&lt).mul_mat(&b.perm_matrix());
    Ok((order.iter().map(|&i| gamma[i]).collect(), qp.select(&all, &order)))
}

/// One long step of Deg-Det: raise the rows `[r]` of `S` and lower the
/// columns outside `[s]` of `T` by `kappa`, then write the result back in
/// the normal form `(t^alpha') P', Q' (t^beta')` with sorted exponents.
pub fn renormalize(
    dual: &DualSolution,
    s: &Mat,
    t: &Mat,
    r: usize,
    s_size: usize,
    kappa: i64,
) -> Result<DualSolution, DegDetError> {
    if !dual.is_sorted() {
        return Err(DegDetError::NotSorted);
    }
    let alpha = integers(&dual.alpha)?;
    let beta = integers(&dual.beta)?;
    let (p, q) = match &dual.mats {
        DualMats::General { p, q } => (p.clone(), q.clone()),
        DualMats::Monomial { p, q } => (RationalMatrix::from_mat(p), RationalMatrix::from_mat(q)),
    };
    let (a2, p2) = renorm_rows(&alpha, &p, s, r, kappa)?;
    let (b2, q2) = renorm_cols(&beta, &q, t, s_size, kappa)?;
    Ok(DualSolution::general(&a2, &b2, p2, q2))
}

/// Order putting the members of `chosen` last among indices with equal value.
fn ties_last(vals: &[i64], chosen: &[usize]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..vals.len()).collect();
    order.sort_by_key(|&i| (std::cmp::Reverse(vals[i]), chosen.contains(&i)));
    order
}

/// Greedy choice of `k` entries of `pool` whose vectors `vec_of(i)` are
/// independent, placed first; the remaining pool follows.
fn independent_first(pool: &[usize], k: usize, vec_of: impl Fn(usize) -> Vec<u64>, f: crate::scalar::Fp) -> Vec<usize> {
    let mut picked: Vec<usize> = Vec::new();
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for &i in pool {
        if picked.len() == k {
            break;
        }
        rows.push(vec_of(i));
        let m = Mat::from_fn(f, rows.len(), k, |a, b| rows[a][b]);
        if m.rank() == rows.len() {
            picked.push(i);
        } else {
            rows.pop();
        }
    }
    picked.iter().copied().chain(pool.iter().copied().filter(|i| !picked.contains(i))).collect()
}

struct State {
    alpha: Vec<i64>,
    beta: Vec<i64>,
    p: RationalMatrix,
    q: RationalMatrix,
}

impl State {
    fn dual(&self) -> DualSolution {
        DualSolution::general(&self.alpha, &self.beta, self.p.clone(), self.q.clone())
    }

    fn bound(&self, ell: usize) -> i64 {
        let n = self.alpha.len();
        -(self.alpha[n - ell..].iter().sum::<i64>() + self.beta[n - ell..].iter().sum::<i64>())
    }

    fn terms(&self, b: &RationalSymbolicMatrix) -> Vec<RationalMatrix> {
        b.terms().iter().map(|t| self.p.mul(t).mul(&self.q)).collect()
    }

    fn leading(&self, pbq: &[RationalMatrix]) -> Result<SymbolicMatrix, DegDetError> {
        let n = self.alpha.len();
        let f = self.p.field();
        let terms = pbq.iter().map(|m| leading_coeff_matrix(m, &self.alpha, &self.beta)).collect::<Result<Vec<_>, _>>()?;
        Ok(SymbolicMatrix::new(f, n, n, terms)?)
    }

    fn permute(&mut self, rows: &[usize], cols: &[usize]) {
        let all: Vec<usize> = (0..self.alpha.len()).collect();
        self.alpha = rows.iter().map(|&i| self.alpha[i]).collect();
        self.beta = cols.iter().map(|&j| self.beta[j]).collect();
        self.p = self.p.select(rows, &all);
        self.q = self.q.select(&all, cols);
    }

    fn step(&self, s: &Mat, t: &Mat, r: usize, sz: usize, kappa: i64) -> Result<State, DegDetError> {
        let (alpha, p) = renorm_rows(&self.alpha, &self.p, s, r, kappa)?;
        let (beta, q) = renorm_cols(&self.beta, &self.q, t, sz, kappa)?;
        Ok(State { alpha, beta, p, q })
    }
}

/// Deg-SubDet with long steps: `Delta_l(B)` for every `l` together with
/// optimal duals, for `B = sum_k B_k x_k` over GF(p)(t).
pub fn deg_subdet<R: Rng + ?Sized>(
    b: &RationalSymbolicMatrix,
    solver: &Solver,
    rng: &mut R,
) -> Result<DegreeProfile, DegDetError> {
    let b = b.padded_square();
    let n = b.n();
    let f = b.field();
    let mut prof = DegreeProfile::empty(n);
    if n == 0 {
        return Ok(prof);
    }
    let Degree::Finite(d) = b.max_deg() else {
        prof.neg_inf = Some(zero_matrix_certificate(f, n));
        return Ok(prof);
    };
    let d0 = b.min_degree_bound().unwrap();
    let bound = (n as i64 * (d - d0)).max(0) as u64;
    prof.iteration_bound = bound;
    let cap = iteration_cap(n, bound);
    let triv = OrderedPartition::trivial(n);
    let all: Vec<usize> = (0..n).collect();
    let mut st =
        State { alpha: vec![0; n], beta: vec![-d; n], p: RationalMatrix::identity(f, n), q: RationalMatrix::identity(f, n) };
    let mut ell = 0;
    loop {
        let mut pbq = st.terms(&b);
        let mut lead = st.leading(&pbq)?;
        let out = solver.solve(&lead, &triv, &triv)?;
        if !out.dominant {
            prof.guarantee = Guarantee::NonDominant;
        }
        let rank = out.witness.value();
        if rank < ell {
            return Err(DegDetError::RankDecrease(ell, rank));
        }
        if rank > ell {
            record_levels(&mut prof, &lead, &st.dual(), ell + 1..=rank, rng)?;
            ell = rank;
            if ell == n {
                break;
            }
        }
        if st.bound(ell + 1) <= (ell as i64 + 1) * d0 {
            let rank_witness = Some(out.witness);
            prof.neg_inf = Some(InfCertificate::Cutoff { from: ell + 1, dual: st.dual(), d0, rank_witness });
            break;
        }
        if prof.iterations >= cap {
            return Err(DegDetError::IterationLimit(cap));
        }
        prof.iterations += 1;

        // keep the lower-right ell x ell leading block nc-nonsingular
        let mut w = out.witness.canonical();
        if ell > 0 {
            let (i, j) =
                find_primal(&lead, &st.alpha, &st.beta, ell, DEFAULT_TRIALS, rng).ok_or(DegDetError::PrimalNotFound(ell))?;
            let ro = ties_last(&st.alpha, &i);
            let co = ties_last(&st.beta, &j);
            st.permute(&ro, &co);
            pbq = pbq.iter().map(|m| m.select(&ro, &co)).collect();
            lead = lead.select(&ro, &co);
            w.s = w.s.mul(&Mat::permutation(f, &ro).transpose());
            w.t = Mat::permutation(f, &co).mul(&w.t);
            debug_assert!(w.verify(&lead));
        }
        let (r, sz) = (w.r(), w.s_size());
        let k = n - ell;
        let zr: Vec<usize> = (0..r).collect();
        let ro = independent_first(&zr, k, |i| w.s.row(i)[..k].to_vec(), f);
        let zc: Vec<usize> = (0..sz).collect();
        let co = independent_first(&zc, k, |j| (0..k).map(|i| w.t.get(i, j)).collect(), f);
        let ro: Vec<usize> = ro.into_iter().chain(r..n).collect();
        let co: Vec<usize> = co.into_iter().chain(sz..n).collect();
        let s = w.s.select(&ro, &all);
        let t = w.t.select(&all, &co);

        // largest feasible step: -deg of the zero block entries
        let s_top = RationalMatrix::from_mat(&s.select(&zr, &all));
        let t_left = t.select(&all, &zc);
        let mut kappa1: Option<i64> = None;
        for m in &pbq {
            let blk = s_top.mul(&m.shifted(&st.alpha, &st.beta)).mul_mat(&t_left);
            for e in blk.entries() {
                if let Degree::Finite(dg) = e.deg() {
                    debug_assert!(dg < 0);
                    kappa1 = Some(kappa1.map_or(-dg, |x| x.min(-dg)));
                }
            }
        }
        let before = st.bound(n);
        let next = match kappa1 {
            Some(kappa) => st.step(&s, &t, r, sz, kappa)?,
            None => {
                // unbounded step: push until the bound for ell + 1 falls below (ell + 1) d0
                let target = (ell as i64 + 1) * d0;
                let mut kappa = (st.bound(ell + 1) - target + 1).max(1);
                let mut cand = st.step(&s, &t, r, sz, kappa)?;
                let mut tries = 0;
                while cand.bound(ell + 1) >= target && tries < 60 {
                    kappa *= 2;
                    cand = st.step(&s, &t, r, sz, kappa)?;
                    tries += 1;
                }
                cand
            }
        };
        prof.trace.push(IterationRecord {
            ell,
            r,
            s: sz,
            kappa1: kappa1.map(ExactRational::from_int),
            kappa2: None,
            kappa: kappa1.map(ExactRational::from_int),
            method: out.method.to_string(),
        });
        debug_assert!(non_increasing(&next.alpha) && non_increasing(&next.beta));
        st = next;
        let after = st.bound(n);
        if after >= before {
            return Err(DegDetError::Monotonicity { before: before.to_string(), after: after.to_string() });
        }
        if st.bound(ell + 1) < (ell as i64 + 1) * d0 {
            // feasibility of the certificate is checked when it is verified
            st.leading(&st.terms(&b))?;
            prof.neg_inf = Some(InfCertificate::Cutoff { from: ell + 1, dual: st.dual(), d0, rank_witness: None });
            break;
        }
    }
    Ok(prof)
}

/// `deg Det B`: the last entry of the Deg-SubDet profile (Deg-Det is the
/// same iteration without recording intermediate levels).
pub fn deg_det<R: Rng + ?Sized>(b: &RationalSymbolicMatrix, solver: &Solver, rng: &mut R) -> Result<Degree, DegDetError> {
    let prof = deg_subdet(b, solver, rng)?;
    Ok(prof.values[prof.n])
}
