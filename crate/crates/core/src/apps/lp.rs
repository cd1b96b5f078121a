//! Exact rational linear programs `max c^T x` subject to `A_ub x <= b_ub`,
//! `A_eq x = b_eq`, `x >= 0`.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::scalar::ExactRational;

type Q = ExactRational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum LpOutcome {
    Optimal { value: ExactRational, x: Vec<ExactRational> },
    Infeasible,
    Unbounded,
}

impl LpOutcome {
    pub fn value(&self) -> Option<&ExactRational> {
        match self {
            LpOutcome::Optimal { value, .. } => Some(value),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Lp {
    pub c: Vec<ExactRational>,
    pub a_ub: Vec<Vec<ExactRational>>,
    pub b_ub: Vec<ExactRational>,
    pub a_eq: Vec<Vec<ExactRational>>,
    pub b_eq: Vec<ExactRational>,
}

fn dot(a: &[Q], x: &[Q]) -> Q {
    a.iter().zip(x).map(|(u, v)| u * v).sum()
}

impl Lp {
    pub fn new(c: Vec<ExactRational>) -> Lp {
        Lp { c, ..Lp::default() }
    }

    pub fn vars(&self) -> usize {
        self.c.len()
    }

    pub fn add_le(&mut self, row: Vec<ExactRational>, rhs: ExactRational) {
        self.a_ub.push(row);
        self.b_ub.push(rhs);
    }

    pub fn add_eq(&mut self, row: Vec<ExactRational>, rhs: ExactRational) {
        self.a_eq.push(row);
        self.b_eq.push(rhs);
    }

    pub fn is_feasible_point(&self, x: &[ExactRational]) -> bool {
        x.len() == self.vars()
            && x.iter().all(|v| !v.is_negative())
            && self.a_ub.iter().zip(&self.b_ub).all(|(a, b)| dot(a, x) <= *b)
            && self.a_eq.iter().zip(&self.b_eq).all(|(a, b)| dot(a, x) == *b)
    }

    pub fn objective(&self, x: &[ExactRational]) -> ExactRational {
        dot(&self.c, x)
    }

    /// Two-phase dense simplex with Bland's rule (no cycling).
    pub fn simplex(&self) -> LpOutcome {
        Tableau::build(self).solve(self)
    }

    /// Best basic feasible solution over all choices of tight inequalities
    /// (including `x_j >= 0`). Assumes independent equality rows and a
    /// bounded feasible region; exponential, for small programs.
    pub fn vertex_enumeration(&self) -> LpOutcome {
        let nv = self.vars();
        let mut ineq: Vec<(Vec<Q>, Q)> = self.a_ub.iter().cloned().zip(self.b_ub.iter().cloned()).collect();
        for j in 0..nv {
            ineq.push(((0..nv).map(|i| if i == j { -Q::one() } else { Q::zero() }).collect(), Q::zero()));
        }
        let need = match nv.checked_sub(self.a_eq.len()) {
            Some(k) => k,
            None => return LpOutcome::Infeasible,
        };
        let mut best: Option<(Q, Vec<Q>)> = None;
        for pick in (0..ineq.len()).combinations(need) {
            let mut rows: Vec<Vec<Q>> = self.a_eq.clone();
            let mut rhs: Vec<Q> = self.b_eq.clone();
            for &i in &pick {
                rows.push(ineq[i].0.clone());
                rhs.push(ineq[i].1.clone());
            }
            let Some(x) = solve_square(rows, rhs) else { continue };
            if !self.is_feasible_point(&x) {
                continue;
            }
            let v = self.objective(&x);
            if best.as_ref().map_or(true, |(b, _)| v > *b) {
                best = Some((v, x));
            }
        }
        match best {
            Some((value, x)) => LpOutcome::Optimal { value, x },
            None => LpOutcome::Infeasible,
        }
    }
}

/// Unique solution of a square system, `None` when singular.
fn solve_square(mut a: Vec<Vec<Q>>, mut b: Vec<Q>) -> Option<Vec<Q>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let inv = &Q::one() / &a[col][col];
        for j in col..n {
            a[col][j] = &a[col][j] * &inv;
        }
        b[col] = &b[col] * &inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let fac = a[r][col].clone();
                for j in col..n {
                    let d = &fac * &a[col][j];
                    a[r][j] = &a[r][j] - &d;
                }
                let d = &fac * &b[col];
                b[r] = &b[r] - &d;
            }
        }
    }
    Some(b)
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    rhs: Vec<Q>,
    basis: Vec<usize>,
    /// Columns: structural, then slacks, then artificials.
    n_struct: usize,
    n_art: usize,
}

impl Tableau {
    fn build(lp: &Lp) -> Tableau {
        let nv = lp.vars();
        let n_slack = lp.a_ub.len();
        let m = n_slack + lp.a_eq.len();
        // a row needs an artificial unless its slack enters with coefficient +1
        let needs_art: Vec<bool> = (0..m).map(|i| if i < n_slack { lp.b_ub[i].is_negative() } else { true }).collect();
        let n_art = needs_art.iter().filter(|&&x| x).count();
        let width = nv + n_slack + n_art;
        let mut rows = Vec::with_capacity(m);
        let mut rhs = Vec::with_capacity(m);
        let mut basis = Vec::with_capacity(m);
        let mut art = nv + n_slack;
        for i in 0..m {
            let (a, b) = if i < n_slack { (&lp.a_ub[i], &lp.b_ub[i]) } else { (&lp.a_eq[i - n_slack], &lp.b_eq[i - n_slack]) };
            let mut row = vec![Q::zero(); width];
            row[..nv].clone_from_slice(a);
            if i < n_slack {
                row[nv + i] = Q::one();
            }
            let mut b = b.clone();
            if b.is_negative() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
                b = -b;
            }
            if needs_art[i] {
                row[art] = Q::one();
                basis.push(art);
                art += 1;
            } else {
                basis.push(nv + i);
            }
            rows.push(row);
            rhs.push(b);
        }
        Tableau { rows, rhs, basis, n_struct: nv + n_slack, n_art }
    }

    fn width(&self) -> usize {
        self.n_struct + self.n_art
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = &Q::one() / &self.rows[r][c];
        for x in self.rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        self.rhs[r] = &self.rhs[r] * &inv;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let fac = self.rows[i][c].clone();
            for j in 0..self.width() {
                if !self.rows[r][j].is_zero() {
                    let d = &fac * &self.rows[r][j];
                    self.rows[i][j] = &self.rows[i][j] - &d;
                }
            }
            let d = &fac * &self.rhs[r];
            self.rhs[i] = &self.rhs[i] - &d;
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost` over the columns `< limit`; false when unbounded.
    fn optimize(&mut self, cost: &[Q], limit: usize) -> bool {
        loop {
            let reduced = |j: usize, t: &Tableau| {
                let cb: Q = t.basis.iter().zip(&t.rows).map(|(&b, row)| &cost[b] * &row[j]).sum();
                &cost[j] - &cb
            };
            let Some(enter) = (0..limit).find(|&j| !self.basis.contains(&j) && reduced(j, self).is_positive()) else {
                return true;
            };
            let mut leave: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][enter].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][enter];
                let better = match &leave {
                    None => true,
                    Some((l, best)) => ratio < *best || (ratio == *best && self.basis[i] < self.basis[*l]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
            let Some((r, _)) = leave else { return false };
            self.pivot(r, enter);
        }
    }

    fn solve(mut self, lp: &Lp) -> LpOutcome {
        let width = self.width();
        if self.n_art > 0 {
            let cost: Vec<Q> = (0..width).map(|j| if j >= self.n_struct { -Q::one() } else { Q::zero() }).collect();
            self.optimize(&cost, width);
            if self.rhs.iter().zip(&self.basis).any(|(v, &b)| b >= self.n_struct && v.is_positive()) {
                return LpOutcome::Infeasible;
            }
            // drive zero artificials out of the basis, dropping redundant rows
            let mut i = 0;
            while i < self.rows.len() {
                if self.basis[i] >= self.n_struct {
                    match (0..self.n_struct).find(|&j| !self.rows[i][j].is_zero()) {
                        Some(j) => self.pivot(i, j),
                        None => {
                            self.rows.remove(i);
                            self.rhs.remove(i);
                            self.basis.remove(i);
                            continue;
                        }
                    }
                }
                i += 1;
            }
        }
        let nv = lp.vars();
        let cost: Vec<Q> = (0..width).map(|j| if j < nv { lp.c[j].clone() } else { Q::zero() }).collect();
        if !self.optimize(&cost, self.n_struct) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Q::zero(); nv];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < nv {
                x[b] = self.rhs[r].clone();
            }
        }
        LpOutcome::Optimal { value: lp.objective(&x), x }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(v: i64) -> Q {
        Q::from_int(v)
    }

    fn qs(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn textbook_program() {
        // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18 -> 36 at (2, 6)
        let mut lp = Lp::new(qs(&[3, 5]));
        lp.add_le(qs(&[1, 0]), q(4));
        lp.add_le(qs(&[0, 2]), q(12));
        lp.add_le(qs(&[3, 2]), q(18));
        for out in [lp.simplex(), lp.vertex_enumeration()] {
            assert_eq!(out, LpOutcome::Optimal { value: q(36), x: qs(&[2, 6]) });
        }
    }

    #[test]
    fn equality_and_infeasible() {
        let mut lp = Lp::new(qs(&[1, 1]));
        lp.add_le(qs(&[1, 1]), q(1));
        lp.add_eq(qs(&[1, 0]), Q::new(1, 2));
        assert_eq!(lp.simplex().value(), Some(&q(1)));
        lp.add_eq(qs(&[0, 1]), q(1));
        assert_eq!(lp.simplex(), LpOutcome::Infeasible);
        assert_eq!(lp.vertex_enumeration(), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_and_negative_rhs() {
        let mut lp = Lp::new(qs(&[1, 0]));
        lp.add_le(qs(&[0, 1]), q(3));
        assert_eq!(lp.simplex(), LpOutcome::Unbounded);
        // x >= 2 written as -x <= -2, maximize -x
        let mut lp = Lp::new(qs(&[-1]));
        lp.add_le(qs(&[-1]), q(-2));
        assert_eq!(lp.simplex(), LpOutcome::Optimal { value: q(-2), x: qs(&[2]) });
    }

    #[test]
    fn redundant_equalities() {
        let mut lp = Lp::new(qs(&[1, 2]));
        lp.add_le(qs(&[1, 1]), q(5));
        lp.add_eq(qs(&[1, 1]), q(2));
        lp.add_eq(qs(&[2, 2]), q(4));
        assert_eq!(lp.simplex().value(), Some(&q(4)));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn simplex_matches_vertex_enumeration(
            c in prop::collection::vec(-4i64..5, 3),
            rows in prop::collection::vec((prop::collection::vec(0i64..4, 3), 0i64..6), 1..5),
            card in prop::option::of(0i64..4),
        ) {
            let mut lp = Lp::new(qs(&c));
            // box keeps the region bounded
            lp.add_le(qs(&[1, 1, 1]), q(6));
            for (a, b) in rows {
                lp.add_le(qs(&a), q(b));
            }
            if let Some(k) = card {
                lp.add_eq(qs(&[1, 1, 1]), q(k));
            }
            let s = lp.simplex();
            let v = lp.vertex_enumeration();
            prop_assert_eq!(s.value(), v.value());
            if let LpOutcome::Optimal { x, .. } = &s {
                prop_assert!(lp.is_feasible_point(x));
            }
        }
    }
}
