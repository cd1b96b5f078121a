use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{certify_nonsingular, DegreeProfile, DualSolution, InfCertificate};
use crate::mvsp::FrWitness;
use crate::ratfunc::{Degree, RationalMatrix};
use crate::scalar::ExactRational;
use crate::symbolic::{RationalSymbolicMatrix, SymbolicMatrix, WeightedSymbolicMatrix};

/// Input a profile claims to describe.
#[derive(Clone, Copy, Debug)]
pub enum ProfileInput<'a> {
    Weighted(&'a WeightedSymbolicMatrix),
    General(&'a RationalSymbolicMatrix),
}

impl ProfileInput<'_> {
    fn n(&self) -> usize {
        match self {
            ProfileInput::Weighted(a) => a.n(),
            ProfileInput::General(b) => b.n(),
        }
    }

    fn leading(&self, dual: &DualSolution) -> Result<SymbolicMatrix, String> {
        match self {
            ProfileInput::Weighted(a) => dual.leading_weighted(a),
            ProfileInput::General(b) => dual.leading_general(b),
        }
        .map_err(|e| e.to_string())
    }

    /// Whether `d0` bounds the degree of every entry from below.
    fn degree_floor(&self, d0: i64) -> bool {
        match self {
            ProfileInput::Weighted(a) => a.weight_range().map_or(true, |(lo, _)| d0 <= lo),
            ProfileInput::General(b) => match b.min_degree_bound() {
                Degree::Finite(lo) => d0 <= lo,
                _ => true,
            },
        }
    }

    fn zero_block(&self, w: &FrWitness) -> bool {
        match self {
            ProfileInput::Weighted(a) => w.verify(&a.padded_square().base),
            ProfileInput::General(b) => {
                let b = b.padded_square();
                let n = b.n();
                if w.n() != n || w.t.cols() != n || w.s.rank() < n || w.t.rank() < n {
                    return false;
                }
                let (s, t) = (RationalMatrix::from_mat(&w.s), RationalMatrix::from_mat(&w.t));
                b.terms().iter().all(|bk| {
                    let m = s.mul(bk).mul(&t);
                    w.rows.iter().all(|&i| w.cols.iter().all(|&j| m.get(i, j).is_zero()))
                })
            }
        }
    }
}

/// Outcome of an independent certificate check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub ok: bool,
    pub issues: Vec<String>,
}

/// Re-checks every certificate of `profile` against `input`: dual
/// feasibility and objective, the primal index sets with a randomized
/// nonsingularity proof, and the minus-infinity certificate.
pub fn verify_profile<R: Rng + ?Sized>(
    profile: &DegreeProfile,
    input: ProfileInput<'_>,
    trials: usize,
    rng: &mut R,
) -> VerifyReport {
    let mut issues = Vec::new();
    let n = input.n();
    if profile.n != n || profile.values.len() != n + 1 || profile.certificates.len() != n + 1 {
        issues.push(format!("profile of size {} for a matrix of size {n}", profile.n));
        return VerifyReport { ok: false, issues };
    }
    if profile.values[0] != Degree::Finite(0) {
        issues.push("Delta_0 must be 0".into());
    }
    for ell in 1..=n {
        let Degree::Finite(val) = profile.values[ell] else { continue };
        let Some(cert) = &profile.certificates[ell] else {
            issues.push(format!("ell = {ell}: missing certificate"));
            continue;
        };
        let d = &cert.dual;
        if d.n() != n || !d.is_sorted() {
            issues.push(format!("ell = {ell}: dual is not a sorted vector pair of size {n}"));
            continue;
        }
        let target = ExactRational::from_int(val);
        if d.objective(ell) != target {
            issues.push(format!("ell = {ell}: dual objective {} differs from {val}", d.objective(ell)));
        }
        let lead = match input.leading(d) {
            Ok(l) => l,
            Err(e) => {
                issues.push(format!("ell = {ell}: {e}"));
                continue;
            }
        };
        let (rows, cols) = (&cert.rows, &cert.cols);
        if rows.len() != ell || cols.len() != ell || rows.iter().chain(cols).any(|&i| i >= n) {
            issues.push(format!("ell = {ell}: primal index sets have the wrong shape"));
            continue;
        }
        let primal: ExactRational =
            -(rows.iter().map(|&i| d.alpha[i].clone()).sum::<ExactRational>() + cols.iter().map(|&j| d.beta[j].clone()).sum());
        if primal != target {
            issues.push(format!("ell = {ell}: primal value {primal} differs from {val}"));
        }
        if !certify_nonsingular(&lead.select(rows, cols), trials, rng) {
            issues.push(format!("ell = {ell}: leading submatrix not certified nc-nonsingular"));
        }
    }
    match &profile.neg_inf {
        None => {
            if let Some(ell) = (1..=n).find(|&l| !profile.values[l].is_finite()) {
                issues.push(format!("ell = {ell}: minus infinity without a certificate"));
            }
        }
        Some(c) => {
            let from = c.from();
            if from == 0 || from > n {
                issues.push(format!("minus-infinity certificate starts at {from}"));
            } else {
                if let Some(ell) = (from..=n).find(|&l| profile.values[l].is_finite()) {
                    issues.push(format!("ell = {ell}: finite value above the certified range"));
                }
                if let Some(ell) = (1..from).find(|&l| !profile.values[l].is_finite()) {
                    issues.push(format!("ell = {ell}: minus infinity below the certified range"));
                }
                match c {
                    InfCertificate::ZeroBlock { witness, .. } => {
                        if witness.value() >= from {
                            issues.push(format!("zero block bounds the rank by {}, not below {from}", witness.value()));
                        }
                        if !input.zero_block(witness) {
                            issues.push("zero-block witness fails".into());
                        }
                    }
                    InfCertificate::Cutoff { dual, d0, rank_witness, .. } => {
                        if dual.n() != n || !dual.is_sorted() {
                            issues.push("cutoff dual is not a sorted vector pair".into());
                        } else {
                            let floor = ExactRational::from_int(from as i64 * d0);
                            let bound = dual.objective(from);
                            match input.leading(dual) {
                                Err(e) => issues.push(format!("cutoff dual: {e}")),
                                Ok(lead) => {
                                    // at equality the leading rank must be below `from`
                                    let strict = rank_witness.as_ref().is_some_and(|w| w.value() < from && w.verify(&lead));
                                    if bound > floor || (bound == floor && !strict) {
                                        issues.push(format!("cutoff bound {bound} does not certify {from} * {d0}"));
                                    }
                                }
                            }
                        }
                        if !input.degree_floor(*d0) {
                            issues.push(format!("{d0} is not a lower bound on the entry degrees"));
                        }
                    }
                }
            }
        }
    }
    VerifyReport { ok: issues.is_empty(), issues }
}
