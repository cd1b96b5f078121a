use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::lp::{Lp, LpOutcome};
use super::{build_matroid_matching, AppsError, BlDatum, LineCollection};
use crate::degdet::{symmetric_hungarian, DegreeProfile};
use crate::mvsp::{all_subspaces, Solver, Subspace};
use crate::ratfunc::Degree;
use crate::scalar::{ExactRational, Fp, Mat};

type Q = ExactRational;

/// Below this many candidate bases the LP is solved by vertex enumeration.
const VERTEX_ENUMERATION_CAP: u128 = 20_000;

/// `sum_k y_k dim(H_k meet X) <= dim X` for one subspace `X`.
#[derive(Clone, Debug)]
struct Constraint {
    coeffs: Vec<i64>,
    rhs: i64,
    x: Subspace,
}

fn meet_dim(h: &Subspace, x: &Subspace) -> i64 {
    (h.dim() + x.dim()) as i64 - h.sum(x).dim() as i64
}

/// One constraint per subspace of `GF(p)^n`, in enumeration order.
fn constraints(f: Fp, lines: &[Subspace], n: usize, cap: usize) -> Result<Vec<Constraint>, AppsError> {
    let all = all_subspaces(f, n, cap)?;
    Ok(all
        .par_iter()
        .map(|x| Constraint { coeffs: lines.iter().map(|h| meet_dim(h, x)).collect(), rhs: x.dim() as i64, x: x.clone() })
        .collect())
}

/// Drops constraints implied by another one (for `y >= 0`).
fn prune(cs: &[Constraint]) -> Vec<(Vec<i64>, i64)> {
    let mut rows: Vec<(Vec<i64>, i64)> = cs.iter().map(|c| (c.coeffs.clone(), c.rhs)).collect();
    rows.sort();
    rows.dedup();
    rows.retain(|(a, _)| a.iter().any(|&v| v > 0));
    let implied = |i: usize, rows: &[(Vec<i64>, i64)]| {
        let (a, b) = &rows[i];
        rows.iter()
            .enumerate()
            .any(|(j, (a2, b2))| j != i && b2 <= b && a2.iter().zip(a).all(|(x, y)| x >= y) && (b2 < b || a2 != a))
    };
    (0..rows.len()).filter(|&i| !implied(i, &rows)).map(|i| rows[i].clone()).collect()
}

fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i as u128 + 1))
}

/// Optimum of the fractional matroid matching LP.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FmpSolution {
    /// `None` when the cardinality constraint makes the LP infeasible.
    pub value: Option<ExactRational>,
    pub y: Vec<ExactRational>,
    /// Constraints left after removing implied ones.
    pub constraints: usize,
    pub method: String,
}

/// `max c^T y` over `y >= 0` with `sum_k y_k dim(H_k meet X) <= dim X` for
/// every subspace `X` of `GF(p)^n`, optionally with `2 * 1^T y = ell`.
pub fn fmp_lp_oracle(f: Fp, h: &LineCollection, ell: Option<usize>, cap: usize) -> Result<FmpSolution, AppsError> {
    h.validate(f)?;
    let m = h.m();
    let lines: Vec<Subspace> = (0..m).map(|k| h.line(f, k)).collect();
    let rows = prune(&constraints(f, &lines, h.n, cap)?);
    let mut lp = Lp::new(h.weights.iter().map(|&c| Q::from_int(c)).collect());
    for (a, b) in &rows {
        lp.add_le(a.iter().map(|&v| Q::from_int(v)).collect(), Q::from_int(*b));
    }
    if let Some(l) = ell {
        lp.add_eq(vec![Q::from_int(2); m], Q::from_int(l as i64));
    }
    let bases = binomial(rows.len() + m, m - lp.a_eq.len().min(m));
    let (out, method) =
        if bases <= VERTEX_ENUMERATION_CAP { (lp.vertex_enumeration(), "vertex-enumeration") } else { (lp.simplex(), "simplex") };
    let (value, y) = match out {
        LpOutcome::Optimal { value, x } => (Some(value), x),
        LpOutcome::Infeasible => (None, vec![]),
        LpOutcome::Unbounded => unreachable!("X = K^n bounds every y_k by n / 2"),
    };
    Ok(FmpSolution { value, y, constraints: rows.len(), method: method.into() })
}

/// Maximum weight fractional matroid matching through the symmetric
/// Hungarian method: `max c^T y = Delta_max(A_H[c]) / 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FmmResult {
    pub max: ExactRational,
    /// `Delta_l / 2` for each `l`, `None` for minus infinity.
    pub per_ell: Vec<Option<ExactRational>>,
    pub profile: DegreeProfile,
}

pub fn fmm_max_weight<R: Rng + ?Sized>(f: Fp, h: &LineCollection, solver: &Solver, rng: &mut R) -> Result<FmmResult, AppsError> {
    let a = build_matroid_matching(f, h)?;
    let profile = symmetric_hungarian(&a, solver, rng)?;
    let half = |d: &Degree| d.finite().map(|v| Q::new(v, 2));
    let per_ell: Vec<Option<Q>> = profile.values.iter().map(half).collect();
    let max = half(&profile.delta_max()).unwrap_or_else(Q::zero);
    Ok(FmmResult { max, per_ell, profile })
}

/// Why a parameter vector is outside the rank-2 Brascamp-Lieb polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum BlCertificate {
    /// `2 * sum p != n`.
    Dimension { twice_sum: ExactRational, n: usize },
    /// `sum_j p_j dim(H_j meet X) > dim X` for the subspace spanned by `basis`.
    Violated { basis: Vec<Vec<i64>>, lhs: ExactRational, dim: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlVerdict {
    pub member: bool,
    pub certificate: Option<BlCertificate>,
    /// Subspaces examined.
    pub checked: usize,
}

/// Membership of `p` in the BL polytope of rank-2 maps over `GF(p)`: the
/// perfect fractional matroid matching polytope of the row spaces `H_j`.
pub fn bl_membership_rank2(f: Fp, datum: &BlDatum, cap: usize) -> Result<BlVerdict, AppsError> {
    let n = datum.n;
    if datum.p.len() != datum.maps.len() {
        return Err(AppsError::DimensionMismatch(format!("{} maps but {} exponents", datum.maps.len(), datum.p.len())));
    }
    let mut lines = Vec::with_capacity(datum.maps.len());
    for (j, rows) in datum.maps.iter().enumerate() {
        if rows.iter().any(|r| r.len() != n) {
            return Err(AppsError::DimensionMismatch(format!("map {j} is not 2 x {n}")));
        }
        let h = Subspace::span(&Mat::from_i64_rows(f, rows));
        if h.dim() != 2 {
            return Err(AppsError::NotRankTwo(j));
        }
        lines.push(h);
    }
    if let Some(j) = datum.p.iter().position(|x| x.is_negative()) {
        return Err(AppsError::NegativeParameter(j));
    }
    let twice_sum = Q::from_int(2) * datum.p.iter().cloned().sum::<Q>();
    if twice_sum != Q::from_int(n as i64) {
        return Ok(BlVerdict { member: false, certificate: Some(BlCertificate::Dimension { twice_sum, n }), checked: 0 });
    }
    let cs = constraints(f, &lines, n, cap)?;
    let violated = cs.iter().find_map(|c| {
        let lhs: Q = c.coeffs.iter().zip(&datum.p).map(|(&a, p)| &Q::from_int(a) * p).sum();
        (lhs > Q::from_int(c.rhs)).then(|| BlCertificate::Violated {
            basis: c.x.basis().to_signed_rows(),
            lhs,
            dim: c.rhs as usize,
        })
    });
    Ok(BlVerdict { member: violated.is_none(), certificate: violated, checked: cs.len() })
}
