use serde::{Deserialize, Serialize};

use super::{rationals, DegDetError, DualMats, DualSolution};
use crate::mvsp::Subspace;
use crate::scalar::{ExactRational, Mat};
use crate::symbolic::WeightedSymbolicMatrix;

type Q = ExactRational;

/// Dual in apartment form: bases `u_i` (rows of `P`), `v_j` (columns of
/// `Q`) and nonnegative `xi`, `eta` with `xi_i + eta_j + gamma >= c_k`
/// whenever `u_i^T A_k v_j != 0`. The flags `U_i`, `V_j` give the flag form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineDual {
    pub ell: usize,
    pub xi: Vec<ExactRational>,
    pub eta: Vec<ExactRational>,
    pub gamma: ExactRational,
    pub p: Mat,
    pub q: Mat,
}

impl AffineDual {
    /// `sum xi + sum eta + ell gamma`.
    pub fn objective(&self) -> ExactRational {
        self.xi.iter().cloned().sum::<Q>()
            + self.eta.iter().cloned().sum::<Q>()
            + Q::from_int(self.ell as i64) * self.gamma.clone()
    }

    /// `U_i`: span of the first `i` rows of `P`.
    pub fn row_flag(&self) -> Vec<Subspace> {
        (0..=self.p.rows()).map(|i| Subspace::span(&self.p.select_rows(&(0..i).collect::<Vec<_>>()))).collect()
    }

    /// `V_j`: span of the first `j` columns of `Q`.
    pub fn col_flag(&self) -> Vec<Subspace> {
        let qt = self.q.transpose();
        (0..=qt.rows()).map(|j| Subspace::span(&qt.select_rows(&(0..j).collect::<Vec<_>>()))).collect()
    }

    /// Checks nonnegativity and every constraint of the apartment form.
    pub fn is_feasible(&self, a: &WeightedSymbolicMatrix) -> bool {
        let a = a.padded_square();
        let n = a.n();
        let zero = Q::zero();
        if self.xi.len() != n || self.eta.len() != n || self.xi.iter().chain(&self.eta).any(|x| *x < zero) {
            return false;
        }
        let c = rationals(&a.weights);
        a.base.terms().iter().enumerate().all(|(k, t)| {
            let m = self.p.mul(t).mul(&self.q);
            (0..n).all(|i| (0..n).all(|j| m.get(i, j) == 0 || &(&self.xi[i] + &self.eta[j]) + &self.gamma >= c[k]))
        })
    }

    /// Flag form: `alpha_i + beta_j <= -c_k` whenever `A_k(U_i, V_j) != 0`,
    /// with `alpha = -xi`, `beta = -eta - gamma`.
    pub fn is_flag_feasible(&self, a: &WeightedSymbolicMatrix) -> bool {
        let a = a.padded_square();
        let n = a.n();
        let c = rationals(&a.weights);
        a.base.terms().iter().enumerate().all(|(k, t)| {
            let m = self.p.mul(t).mul(&self.q);
            // A_k(U_i, V_j) != 0 iff the leading i x j block of P A_k Q is nonzero
            let mut seen = vec![vec![false; n]; n];
            for i in 0..n {
                for j in 0..n {
                    let here = m.get(i, j) != 0;
                    let up = i > 0 && seen[i - 1][j];
                    let left = j > 0 && seen[i][j - 1];
                    seen[i][j] = here || up || left;
                }
            }
            (0..n).all(|i| (0..n).all(|j| !seen[i][j] || &(&self.xi[i] + &self.eta[j]) + &self.gamma >= c[k]))
        })
    }
}

/// Rewrites a monomial-mode dual satisfying the equal-prefix slackness
/// condition for `ell` in apartment form with the same objective:
/// `xi = alpha_1 - alpha`, `eta = beta_1 - beta`, `gamma = -(alpha_1 + beta_1)`.
pub fn dual_forms_convert(dual: &DualSolution, ell: usize) -> Result<AffineDual, DegDetError> {
    let n = dual.n();
    if ell > n {
        return Err(DegDetError::BadCardinality { ell, n });
    }
    let DualMats::Monomial { p, q } = &dual.mats else {
        return Err(DegDetError::Shape("apartment form needs constant transformations".into()));
    };
    if !dual.is_slack_for(ell) {
        return Err(DegDetError::NotComplementarySlack(ell));
    }
    if n == 0 {
        return Ok(AffineDual { ell, xi: vec![], eta: vec![], gamma: Q::zero(), p: p.clone(), q: q.clone() });
    }
    let g1 = dual.alpha[0].clone();
    let g2 = dual.beta[0].clone();
    let xi = dual.alpha.iter().map(|a| &g1 - a).collect();
    let eta = dual.beta.iter().map(|b| &g2 - b).collect();
    Ok(AffineDual { ell, xi, eta, gamma: -(g1 + g2), p: p.clone(), q: q.clone() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::degdet::hungarian_deg_det;
    use crate::mvsp::Solver;
    use crate::scalar::{rng_from_seed, Fp};
    use crate::symbolic::SymbolicMatrix;

    #[test]
    fn bipartite_duals_convert_with_equal_objective() {
        let f = Fp::new(65521).unwrap();
        let edges = [(0, 0, 3), (0, 1, 1), (1, 0, 2), (1, 1, 4)];
        let terms: Vec<_> = edges.iter().map(|&(i, j, _)| vec![(i, j, 1)]).collect();
        let base = SymbolicMatrix::from_triples(f, 2, 2, &terms);
        let a = WeightedSymbolicMatrix::new(base, edges.iter().map(|e| e.2).collect()).unwrap();
        let prof = hungarian_deg_det(&a, &Solver::default(), &mut rng_from_seed(1)).unwrap();
        for ell in 1..=2 {
            let cert = prof.certificates[ell].as_ref().unwrap();
            let ad = dual_forms_convert(&cert.dual, ell).unwrap();
            assert_eq!(ad.objective(), Q::from_int(prof.values[ell].unwrap()));
            assert!(ad.is_feasible(&a));
            assert!(ad.is_flag_feasible(&a));
            assert_eq!(ad.row_flag().iter().map(|u| u.dim()).collect::<Vec<_>>(), vec![0, 1, 2]);
        }
    }

    #[test]
    fn slackness_required() {
        let f = Fp::new(5).unwrap();
        let id = Mat::identity(f, 2);
        let d = DualSolution::monomial(rationals(&[2, 1]), rationals(&[0, 0]), id.clone(), id);
        assert_eq!(dual_forms_convert(&d, 0).unwrap_err(), DegDetError::NotComplementarySlack(0));
        assert!(dual_forms_convert(&d, 1).is_ok());
    }
}
