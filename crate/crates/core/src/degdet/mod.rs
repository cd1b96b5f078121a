//! Degrees of Dieudonne (sub)determinants: Deg-Det and Deg-SubDet over
//! GF(p)(t), the algebraic Hungarian method for monomial matrices, its
//! symmetric half-integral variant, dual forms and certificate checking.

mod forms;
mod general;
mod hungarian;
mod optimize;
mod primal;
mod symmetric;
mod verify;

pub use forms::{dual_forms_convert, AffineDual};
pub use general::{deg_det, deg_subdet, renormalize};
pub use hungarian::{hungarian_deg_det, step_sizes, StepSizes};
pub use optimize::optimize_q;
pub use primal::{certify_nonsingular, find_primal};
pub use symmetric::symmetric_hungarian;
pub use verify::{verify_profile, ProfileInput, VerifyReport};

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mvsp::{FrWitness, MvspError};
use crate::ratfunc::{leading_coeff_matrix, Degree, RatFuncError, RationalMatrix};
use crate::scalar::{ExactRational, Mat};
use crate::symbolic::{RationalSymbolicMatrix, SymbolicError, SymbolicMatrix, WeightedSymbolicMatrix};

/// Random trials used by certificate searches.
pub const DEFAULT_TRIALS: usize = 3;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DegDetError {
    #[error(transparent)]
    Mvsp(#[from] MvspError),
    #[error(transparent)]
    RatFunc(#[from] RatFuncError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
    #[error("dual vector is not sorted non-increasingly")]
    NotSorted,
    #[error("dual is not complementary slack for ell = {0}")]
    NotComplementarySlack(usize),
    #[error("every term must be symmetric or skew-symmetric")]
    NotSkewSymmetric,
    #[error("dual is infeasible: {0}")]
    Infeasible(String),
    #[error("the objective did not decrease ({before} -> {after})")]
    Monotonicity { before: String, after: String },
    #[error("nc-rank of the leading matrix dropped from {0} to {1}")]
    RankDecrease(usize, usize),
    #[error("no nc-nonsingular submatrix certifies the value for ell = {0}")]
    PrimalNotFound(usize),
    #[error("iteration limit {0} reached")]
    IterationLimit(usize),
    #[error("ell = {ell} outside [0, {n}]")]
    BadCardinality { ell: usize, n: usize },
    #[error("Delta_{0} is -infinity, the polytope is empty")]
    EmptyPolytope(usize),
    #[error("no isolating weight found in {0} attempts")]
    NotIsolated(usize),
    #[error("{0}")]
    Shape(String),
}

/// Transformations of a dual solution: constant (monomial mode) or
/// biproper over GF(p)(t) (general mode).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DualMats {
    Monomial { p: Mat, q: Mat },
    General { p: RationalMatrix, q: RationalMatrix },
}

/// Feasible point `((t^alpha) P, Q (t^beta))` of the dual program.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualSolution {
    pub alpha: Vec<ExactRational>,
    pub beta: Vec<ExactRational>,
    pub mats: DualMats,
    #[serde(default)]
    pub symmetric: bool,
}

pub(crate) fn non_increasing<T: PartialOrd>(v: &[T]) -> bool {
    v.windows(2).all(|w| w[0] >= w[1])
}

pub(crate) fn rationals(v: &[i64]) -> Vec<ExactRational> {
    v.iter().map(|&x| ExactRational::from_int(x)).collect()
}

pub(crate) fn integers(v: &[ExactRational]) -> Result<Vec<i64>, DegDetError> {
    v.iter().map(|x| x.to_i64().ok_or_else(|| DegDetError::Infeasible(format!("exponent {x} is not an integer")))).collect()
}

impl DualSolution {
    pub fn monomial(alpha: Vec<ExactRational>, beta: Vec<ExactRational>, p: Mat, q: Mat) -> DualSolution {
        DualSolution { alpha, beta, mats: DualMats::Monomial { p, q }, symmetric: false }
    }

    pub fn general(alpha: &[i64], beta: &[i64], p: RationalMatrix, q: RationalMatrix) -> DualSolution {
        DualSolution { alpha: rationals(alpha), beta: rationals(beta), mats: DualMats::General { p, q }, symmetric: false }
    }

    pub fn n(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_sorted(&self) -> bool {
        non_increasing(&self.alpha) && non_increasing(&self.beta)
    }

    /// `-sum of the last ell entries of alpha and of beta`.
    pub fn objective(&self, ell: usize) -> ExactRational {
        let n = self.n();
        let a: ExactRational = self.alpha[n - ell..].iter().cloned().sum();
        let b: ExactRational = self.beta[n - ell..].iter().cloned().sum();
        -(a + b)
    }

    /// Lowers the first `n - ell` entries to the `(n - ell + 1)`-th one. This
    /// keeps feasibility and the objective for `ell` and makes the dual
    /// satisfy the equal-prefix slackness condition.
    pub fn clamped(&self, ell: usize) -> DualSolution {
        let mut out = self.clone();
        let n = self.n();
        if ell == 0 || ell > n {
            return out;
        }
        let k = n - ell;
        for v in [&mut out.alpha, &mut out.beta] {
            let theta = v[k].clone();
            for x in v[..k].iter_mut() {
                if *x > theta {
                    *x = theta.clone();
                }
            }
        }
        out
    }

    /// `alpha_1 = ... = alpha_{n-ell}` and likewise for beta, both sorted.
    pub fn is_slack_for(&self, ell: usize) -> bool {
        let k = self.n().saturating_sub(ell);
        self.is_sorted() && self.alpha[..k].windows(2).all(|w| w[0] == w[1]) && self.beta[..k].windows(2).all(|w| w[0] == w[1])
    }

    /// Leading coefficient matrix `((t^alpha) P A[c] Q (t^beta))^(0)`; fails
    /// when some entry has positive degree.
    pub fn leading_weighted(&self, a: &WeightedSymbolicMatrix) -> Result<SymbolicMatrix, DegDetError> {
        match &self.mats {
            DualMats::Monomial { p, q } => {
                let a = a.padded_square();
                check_dims(self, a.n(), p.rows(), q.cols())?;
                let sums = pair_sums(&self.alpha, &self.beta);
                let c: Vec<ExactRational> = rationals(&a.weights);
                let (lead, _) = monomial_leading(&a, p, q, |i, j, k| (&sums[i][j] + &c[k]).cmp(&ExactRational::zero()))?;
                Ok(lead)
            }
            DualMats::General { .. } => self.leading_general(&a.to_rational()),
        }
    }

    pub fn leading_general(&self, b: &RationalSymbolicMatrix) -> Result<SymbolicMatrix, DegDetError> {
        let b = b.padded_square();
        let (p, q) = match &self.mats {
            DualMats::General { p, q } => (p.clone(), q.clone()),
            DualMats::Monomial { p, q } => (RationalMatrix::from_mat(p), RationalMatrix::from_mat(q)),
        };
        check_dims(self, b.n(), p.rows(), q.cols())?;
        general_leading(&b, &integers(&self.alpha)?, &integers(&self.beta)?, &p, &q)
    }
}

fn check_dims(d: &DualSolution, n: usize, pr: usize, qc: usize) -> Result<(), DegDetError> {
    if d.alpha.len() != n || d.beta.len() != n || pr != n || qc != n {
        return Err(DegDetError::Shape(format!("dual of size {} for a matrix of size {n}", d.alpha.len())));
    }
    Ok(())
}

pub(crate) fn pair_sums(alpha: &[ExactRational], beta: &[ExactRational]) -> Vec<Vec<ExactRational>> {
    alpha.iter().map(|a| beta.iter().map(|b| a + b).collect()).collect()
}

/// Terms `M_k = P A_k Q` and the leading matrix keeping the entries with
/// `sign(i, j, k) == Equal`. A nonzero entry with `Greater` is infeasible.
pub(crate) fn monomial_leading<F>(
    a: &WeightedSymbolicMatrix,
    p: &Mat,
    q: &Mat,
    mut sign: F,
) -> Result<(SymbolicMatrix, Vec<Mat>), DegDetError>
where
    F: FnMut(usize, usize, usize) -> Ordering,
{
    let n = a.n();
    let f = a.field();
    let mut lead = Vec::with_capacity(a.base.num_terms());
    let mut mk = Vec::with_capacity(a.base.num_terms());
    for (k, t) in a.base.terms().iter().enumerate() {
        let m = p.mul(t).mul(q);
        let mut l = Mat::zeros(f, n, n);
        for i in 0..n {
            for j in 0..n {
                let v = m.get(i, j);
                if v == 0 {
                    continue;
                }
                match sign(i, j, k) {
                    Ordering::Greater => {
                        return Err(DegDetError::Infeasible(format!("entry ({i}, {j}) of term {k} has positive degree")))
                    }
                    Ordering::Equal => l.set(i, j, v),
                    Ordering::Less => {}
                }
            }
        }
        lead.push(l);
        mk.push(m);
    }
    Ok((SymbolicMatrix::new(f, n, n, lead)?, mk))
}

pub(crate) fn general_leading(
    b: &RationalSymbolicMatrix,
    alpha: &[i64],
    beta: &[i64],
    p: &RationalMatrix,
    q: &RationalMatrix,
) -> Result<SymbolicMatrix, DegDetError> {
    let n = b.n();
    let terms = b.terms().iter().map(|t| leading_coeff_matrix(&p.mul(t).mul(q), alpha, beta)).collect::<Result<Vec<_>, _>>()?;
    Ok(SymbolicMatrix::new(b.field(), n, n, terms)?)
}

/// Whether every witness used was the dominant optimum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Guarantee {
    Dominant,
    NonDominant,
}

/// Proof that `Delta_l = -infinity` for every `l >= from`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InfCertificate {
    /// Constant `S`, `T` with `(S A_k T)[rows, cols] = 0` for all `k` and
    /// `2n - r - s < from`, so the nc-rank is below `from`.
    ZeroBlock { from: usize, witness: FrWitness },
    /// Feasible dual whose bound for `from` is below `from * d0`, the least
    /// degree any nc-nonsingular `from x from` submatrix can have. The bound
    /// may also equal `from * d0` when `rank_witness` shows the dual's
    /// leading matrix has nc-rank below `from`: the bound is then strict.
    Cutoff {
        from: usize,
        dual: DualSolution,
        d0: i64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rank_witness: Option<FrWitness>,
    },
}

impl InfCertificate {
    pub fn from(&self) -> usize {
        match self {
            InfCertificate::ZeroBlock { from, .. } | InfCertificate::Cutoff { from, .. } => *from,
        }
    }
}

/// Certificate of `Delta_l`: an optimal dual and index sets `I`, `J` (in the
/// dual's coordinates) whose leading submatrix is nc-nonsingular with
/// `-sum_I alpha - sum_J beta` equal to the value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelCertificate {
    pub dual: DualSolution,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub ell: usize,
    pub r: usize,
    pub s: usize,
    /// `None` stands for an unbounded step.
    pub kappa1: Option<ExactRational>,
    pub kappa2: Option<ExactRational>,
    pub kappa: Option<ExactRational>,
    pub method: String,
}

/// `Delta_0, ..., Delta_n` with certificates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub n: usize,
    pub values: Vec<Degree>,
    /// Indexed by `l`; present for every finite `l >= 1`.
    pub certificates: Vec<Option<LevelCertificate>>,
    pub neg_inf: Option<InfCertificate>,
    pub iterations: usize,
    pub iteration_bound: u64,
    pub guarantee: Guarantee,
    /// Iterations where the rank stayed and the step differed from the
    /// order-preserving step size.
    pub step_mismatches: usize,
    pub trace: Vec<IterationRecord>,
}

impl DegreeProfile {
    pub fn delta(&self, ell: usize) -> Degree {
        self.values[ell]
    }

    pub fn delta_max(&self) -> Degree {
        self.values.iter().copied().max().unwrap_or(Degree::NegInf)
    }

    /// Largest `l` with a finite value, the nc-rank of the input.
    pub fn rank(&self) -> usize {
        self.values.iter().rposition(|v| v.is_finite()).unwrap_or(0)
    }

    pub fn within_bound(&self) -> bool {
        self.iterations as u64 <= self.iteration_bound
    }

    /// Values as `Option<i64>` (`None` for minus infinity).
    pub fn finite_values(&self) -> Vec<Option<i64>> {
        self.values.iter().map(|v| v.finite()).collect()
    }

    pub(crate) fn empty(n: usize) -> DegreeProfile {
        let mut values = vec![Degree::NegInf; n + 1];
        values[0] = Degree::Finite(0);
        DegreeProfile {
            n,
            values,
            certificates: vec![None; n + 1],
            neg_inf: None,
            iterations: 0,
            iteration_bound: 0,
            guarantee: Guarantee::Dominant,
            step_mismatches: 0,
            trace: Vec::new(),
        }
    }
}

/// Random feasible monomial-mode dual: random invertible `P`, `Q`, random
/// sorted `alpha` in `[-spread, spread]`, and the largest sorted `beta`
/// satisfying every constraint.
pub fn random_feasible_dual<R: rand::Rng + ?Sized>(a: &WeightedSymbolicMatrix, spread: i64, rng: &mut R) -> DualSolution {
    let a = a.padded_square();
    let n = a.n();
    let f = a.field();
    let p = Mat::random_invertible(f, n, rng);
    let q = Mat::random_invertible(f, n, rng);
    let mut alpha: Vec<i64> = (0..n).map(|_| rng.gen_range(-spread..=spread)).collect();
    alpha.sort_unstable_by(|x, y| y.cmp(x));
    let mut need = vec![i64::MIN; n];
    for (k, t) in a.base.terms().iter().enumerate() {
        let m = p.mul(t).mul(&q);
        for i in 0..n {
            for (j, nj) in need.iter_mut().enumerate() {
                if m.get(i, j) != 0 {
                    *nj = (*nj).max(alpha[i] + a.weights[k]);
                }
            }
        }
    }
    let mut beta = Vec::with_capacity(n);
    let mut prev = i64::MAX;
    for nj in need {
        // an unconstrained column still needs a finite exponent
        let b = if nj == i64::MIN { -spread } else { -nj }.min(prev);
        beta.push(b);
        prev = b;
    }
    DualSolution::monomial(rationals(&alpha), rationals(&beta), p, q)
}

/// Hard cap on iterations for loops without a proven bound.
pub(crate) fn iteration_cap(n: usize, bound: u64) -> usize {
    (bound as usize).saturating_mul(4).saturating_add(64 * (n + 1) * (n + 1))
}

pub(crate) fn kappa_min(a: Option<ExactRational>, b: Option<ExactRational>) -> Option<ExactRational> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}
