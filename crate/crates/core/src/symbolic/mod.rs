//! Linear symbolic matrices `A = sum_k A_k x_k`, their weighted and rational
//! variants, blow-ups, substitutions and brute-force randomized oracles.

mod eval;
mod oracle;

pub(crate) use eval::with_eval_field;
pub use eval::EvalField;
pub use oracle::{blowup_rank, delta_blowup_oracle, delta_ell_oracle, nc_rank_randomized};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ratfunc::{Degree, RatFn, RationalMatrix};
use crate::scalar::{Field, Fp, Mat};

/// Largest dimension accepted by the exhaustive oracles.
pub const ORACLE_MAX_N: usize = 8;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymbolicError {
    #[error("substitution supplies {got} values for {needed} symbols")]
    MissingSymbol { needed: usize, got: usize },
    #[error("cardinality {ell} outside [0, {max}]")]
    BadCardinality { ell: usize, max: usize },
    #[error("matrix too large for the oracle ({0} > {ORACLE_MAX_N})")]
    TooLarge(usize),
    #[error("term shapes do not agree")]
    ShapeMismatch,
    #[error("field {0} has too few elements for {1} evaluation points")]
    FieldTooSmall(u64, u64),
}

/// `A = sum_k A_k x_k` with constant coefficient matrices over GF(p).
/// Rectangular shapes are allowed; the algorithms pad to square.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicMatrix {
    field: Fp,
    rows: usize,
    cols: usize,
    terms: Vec<Mat>,
}

impl SymbolicMatrix {
    pub fn new(field: Fp, rows: usize, cols: usize, terms: Vec<Mat>) -> Result<SymbolicMatrix, SymbolicError> {
        if terms.iter().any(|t| t.rows() != rows || t.cols() != cols || t.field() != field) {
            return Err(SymbolicError::ShapeMismatch);
        }
        Ok(SymbolicMatrix { field, rows, cols, terms })
    }

    /// Build from per-term sparse `(i, j, value)` triples, 0-based.
    pub fn from_triples(field: Fp, rows: usize, cols: usize, terms: &[Vec<(usize, usize, i64)>]) -> SymbolicMatrix {
        let terms = terms
            .iter()
            .map(|tr| {
                let mut m = Mat::zeros(field, rows, cols);
                for &(i, j, v) in tr {
                    let cur = m.get(i, j);
                    m.set(i, j, field.add(cur, field.from_i64(v)));
                }
                m
            })
            .collect();
        SymbolicMatrix { field, rows, cols, terms }
    }

    pub fn field(&self) -> Fp {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    /// `max(rows, cols)`, the size after padding.
    pub fn n(&self) -> usize {
        self.rows.max(self.cols)
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }
    pub fn terms(&self) -> &[Mat] {
        &self.terms
    }
    pub fn term(&self, k: usize) -> &Mat {
        &self.terms[k]
    }

    pub fn is_zero(&self) -> bool {
        self.terms.iter().all(|t| t.is_zero())
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn padded_square(&self) -> SymbolicMatrix {
        let n = self.n();
        SymbolicMatrix { field: self.field, rows: n, cols: n, terms: self.terms.iter().map(|t| t.padded(n, n)).collect() }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> SymbolicMatrix {
        SymbolicMatrix {
            field: self.field,
            rows: rows.len(),
            cols: cols.len(),
            terms: self.terms.iter().map(|t| t.select(rows, cols)).collect(),
        }
    }

    /// `P A Q` termwise.
    pub fn transform(&self, p: &Mat, q: &Mat) -> SymbolicMatrix {
        SymbolicMatrix {
            field: self.field,
            rows: p.rows(),
            cols: q.cols(),
            terms: self.terms.iter().map(|t| p.mul(t).mul(q)).collect(),
        }
    }

    pub fn transpose(&self) -> SymbolicMatrix {
        SymbolicMatrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            terms: self.terms.iter().map(|t| t.transpose()).collect(),
        }
    }

    /// Every term is symmetric or skew-symmetric (each on its own).
    pub fn is_termwise_symmetric(&self) -> bool {
        self.rows == self.cols
            && self.terms.iter().all(|t| {
                let tt = t.transpose();
                tt == *t || (tt.add(t).is_zero() && (0..self.rows).all(|i| t.get(i, i) == 0))
            })
    }

    /// Every term satisfies `A_k^T = -A_k` with zero diagonal.
    pub fn is_skew_symmetric(&self) -> bool {
        let f = self.field;
        self.rows == self.cols
            && self
                .terms
                .iter()
                .all(|t| (0..self.rows).all(|i| t.get(i, i) == 0 && (0..i).all(|j| t.get(i, j) == f.neg(t.get(j, i)))))
    }

    /// `sum_k s_k A_k` over the base field.
    pub fn shrink(&self, s: &Substitution) -> Result<Mat, SymbolicError> {
        if s.values.len() < self.terms.len() {
            return Err(SymbolicError::MissingSymbol { needed: self.terms.len(), got: s.values.len() });
        }
        let f = self.field;
        let mut out = Mat::zeros(f, self.rows, self.cols);
        for (t, &v) in self.terms.iter().zip(&s.values) {
            out = out.add(&t.scale(v));
        }
        Ok(out)
    }

    /// `sum_k s_k A_k` over an arbitrary extension, row-major.
    pub fn shrink_in<F: Field>(&self, f: &F, s: &[F::Elem]) -> Vec<F::Elem> {
        let mut out = vec![f.zero(); self.rows * self.cols];
        for (t, &v) in self.terms.iter().zip(s) {
            for (o, &a) in out.iter_mut().zip(t.data()) {
                if a != 0 {
                    *o = f.add(*o, f.mul(f.embed(a), v));
                }
            }
        }
        out
    }

    /// `A^{d} = sum_{k,i,j} (A_k kron E_ij) x_{k,ij}`; term index `k d^2 + i d + j`.
    pub fn blow_up(&self, d: usize) -> SymbolicMatrix {
        let f = self.field;
        let mut terms = Vec::with_capacity(self.terms.len() * d * d);
        for t in &self.terms {
            for i in 0..d {
                for j in 0..d {
                    let mut e = Mat::zeros(f, d, d);
                    e.set(i, j, 1);
                    terms.push(t.kron(&e));
                }
            }
        }
        SymbolicMatrix { field: f, rows: self.rows * d, cols: self.cols * d, terms }
    }

    /// Sparse 1-based triples per term, the canonical interchange form.
    pub fn to_triples(&self) -> Vec<Vec<[i64; 3]>> {
        self.terms
            .iter()
            .map(|t| {
                let mut v = Vec::new();
                for i in 0..self.rows {
                    for j in 0..self.cols {
                        let x = t.get(i, j);
                        if x != 0 {
                            v.push([i as i64 + 1, j as i64 + 1, self.field.to_signed(x)]);
                        }
                    }
                }
                v
            })
            .collect()
    }
}

/// `A[c] = sum_k A_k t^{c_k} x_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightedSymbolicMatrix {
    pub base: SymbolicMatrix,
    pub weights: Vec<i64>,
}

impl WeightedSymbolicMatrix {
    pub fn new(base: SymbolicMatrix, weights: Vec<i64>) -> Result<WeightedSymbolicMatrix, SymbolicError> {
        if weights.len() != base.num_terms() {
            return Err(SymbolicError::ShapeMismatch);
        }
        Ok(WeightedSymbolicMatrix { base, weights })
    }

    pub fn unweighted(base: SymbolicMatrix) -> WeightedSymbolicMatrix {
        let m = base.num_terms();
        WeightedSymbolicMatrix { base, weights: vec![0; m] }
    }

    pub fn field(&self) -> Fp {
        self.base.field()
    }
    pub fn n(&self) -> usize {
        self.base.n()
    }

    pub fn with_weights(&self, weights: Vec<i64>) -> WeightedSymbolicMatrix {
        assert_eq!(weights.len(), self.weights.len());
        WeightedSymbolicMatrix { base: self.base.clone(), weights }
    }

    pub fn padded_square(&self) -> WeightedSymbolicMatrix {
        WeightedSymbolicMatrix { base: self.base.padded_square(), weights: self.weights.clone() }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> WeightedSymbolicMatrix {
        WeightedSymbolicMatrix { base: self.base.select(rows, cols), weights: self.weights.clone() }
    }

    /// Indices of terms with a nonzero coefficient matrix.
    pub fn active_terms(&self) -> Vec<usize> {
        (0..self.base.num_terms()).filter(|&k| !self.base.term(k).is_zero()).collect()
    }

    /// `(min, max)` weight over active terms.
    pub fn weight_range(&self) -> Option<(i64, i64)> {
        let act = self.active_terms();
        let lo = act.iter().map(|&k| self.weights[k]).min()?;
        let hi = act.iter().map(|&k| self.weights[k]).max()?;
        Some((lo, hi))
    }

    /// Substitute symbols, keeping `t`.
    pub fn shrink(&self, s: &Substitution) -> Result<RationalMatrix, SymbolicError> {
        let b = &self.base;
        if s.values.len() < b.num_terms() {
            return Err(SymbolicError::MissingSymbol { needed: b.num_terms(), got: s.values.len() });
        }
        Ok(self.to_rational().shrink(s))
    }

    pub fn to_rational(&self) -> RationalSymbolicMatrix {
        let f = self.field();
        let terms = self
            .base
            .terms()
            .iter()
            .zip(&self.weights)
            .map(|(t, &c)| RationalMatrix::from_fn(f, t.rows(), t.cols(), |i, j| RatFn::monomial(f, t.get(i, j), c)))
            .collect();
        RationalSymbolicMatrix { field: f, rows: self.base.rows(), cols: self.base.cols(), terms }
    }

    pub fn blow_up(&self, d: usize) -> WeightedSymbolicMatrix {
        let weights = self.weights.iter().flat_map(|&c| std::iter::repeat(c).take(d * d)).collect();
        WeightedSymbolicMatrix { base: self.base.blow_up(d), weights }
    }
}

/// `B = sum_k B_k x_k` with `B_k` over GF(p)(t).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalSymbolicMatrix {
    field: Fp,
    rows: usize,
    cols: usize,
    terms: Vec<RationalMatrix>,
}

impl RationalSymbolicMatrix {
    pub fn new(field: Fp, rows: usize, cols: usize, terms: Vec<RationalMatrix>) -> Result<Self, SymbolicError> {
        if terms.iter().any(|t| t.rows() != rows || t.cols() != cols) {
            return Err(SymbolicError::ShapeMismatch);
        }
        Ok(RationalSymbolicMatrix { field, rows, cols, terms })
    }

    pub fn field(&self) -> Fp {
        self.field
    }
    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn terms(&self) -> &[RationalMatrix] {
        &self.terms
    }
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn n(&self) -> usize {
        self.rows.max(self.cols)
    }

    pub fn padded_square(&self) -> RationalSymbolicMatrix {
        let n = self.n();
        let f = self.field;
        let terms = self
            .terms
            .iter()
            .map(|t| {
                RationalMatrix::from_fn(f, n, n, |i, j| {
                    if i < self.rows && j < self.cols {
                        t.get(i, j).clone()
                    } else {
                        RatFn::zero(f)
                    }
                })
            })
            .collect();
        RationalSymbolicMatrix { field: f, rows: n, cols: n, terms }
    }

    /// `P B_k Q` for every term.
    pub fn transform(&self, p: &RationalMatrix, q: &RationalMatrix) -> RationalSymbolicMatrix {
        RationalSymbolicMatrix {
            field: self.field,
            rows: p.rows(),
            cols: q.cols(),
            terms: self.terms.iter().map(|t| p.mul(t).mul(q)).collect(),
        }
    }

    pub fn shifted(&self, row_exp: &[i64], col_exp: &[i64]) -> RationalSymbolicMatrix {
        RationalSymbolicMatrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            terms: self.terms.iter().map(|t| t.shifted(row_exp, col_exp)).collect(),
        }
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> RationalSymbolicMatrix {
        RationalSymbolicMatrix {
            field: self.field,
            rows: rows.len(),
            cols: cols.len(),
            terms: self.terms.iter().map(|t| t.select(rows, cols)).collect(),
        }
    }

    pub fn max_deg(&self) -> Degree {
        self.terms.iter().map(|t| t.max_deg()).max().unwrap_or(Degree::NegInf)
    }

    pub fn shrink(&self, s: &Substitution) -> RationalMatrix {
        let f = self.field;
        let mut out = RationalMatrix::zeros(f, self.rows, self.cols);
        for (t, &v) in self.terms.iter().zip(&s.values) {
            if v == 0 {
                continue;
            }
            let scaled = RationalMatrix::from_fn(f, self.rows, self.cols, |i, j| t.get(i, j).scale(v));
            out = out.add(&scaled);
        }
        out
    }

    /// Lower bound `d0` with `deg Det B[I,J] >= |I| d0` for every nc-nonsingular
    /// square submatrix. With Laurent-polynomial entries this is the minimum
    /// of `mindeg` over all entries; general denominators are first cleared
    /// row by row.
    pub fn min_degree_bound(&self) -> Degree {
        let laurent = self.terms.iter().all(|t| t.entries().iter().all(|e| e.is_laurent()));
        if laurent {
            return self.terms.iter().flat_map(|t| t.entries().iter().map(|e| e.mindeg())).min().unwrap_or(Degree::PosInf);
        }
        let f = self.field;
        let mut low = Degree::PosInf;
        let mut max_den = 0i64;
        for i in 0..self.rows {
            let mut l = crate::ratfunc::Poly::one(f);
            for t in &self.terms {
                for j in 0..self.cols {
                    l = l.lcm(t.get(i, j).den());
                }
            }
            max_den = max_den.max(l.deg().unwrap());
            for t in &self.terms {
                for j in 0..self.cols {
                    let e = t.get(i, j);
                    if !e.is_zero() {
                        let numer = e.num().mul(&l.div_exact(e.den()));
                        low = low.min(numer.low_order());
                    }
                }
            }
        }
        match low {
            Degree::Finite(v) => Degree::Finite(v - max_den),
            other => other,
        }
    }
}

/// Values for the symbols `x_1, ..., x_m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Substitution {
    pub values: Vec<u64>,
}

impl Substitution {
    pub fn random<R: Rng + ?Sized>(field: Fp, m: usize, rng: &mut R) -> Substitution {
        Substitution { values: (0..m).map(|_| field.random(rng)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rng_from_seed;

    fn k3(p: u64) -> SymbolicMatrix {
        let f = Fp::new(p).unwrap();
        SymbolicMatrix::from_triples(
            f,
            3,
            3,
            &[vec![(0, 1, 1), (1, 0, -1)], vec![(0, 2, 1), (2, 0, -1)], vec![(1, 2, 1), (2, 1, -1)]],
        )
    }

    #[test]
    fn k3_shrinks_have_rank_two() {
        let a = k3(65521);
        assert!(a.is_skew_symmetric());
        let mut rng = rng_from_seed(1);
        for _ in 0..20 {
            let s = Substitution::random(a.field(), 3, &mut rng);
            assert!(a.shrink(&s).unwrap().rank() <= 2);
        }
    }

    #[test]
    fn missing_symbol() {
        let a = k3(7);
        let s = Substitution { values: vec![1, 2] };
        assert_eq!(a.shrink(&s), Err(SymbolicError::MissingSymbol { needed: 3, got: 2 }));
    }

    #[test]
    fn blow_up_shape_and_rank() {
        let a = k3(65521);
        let b = a.blow_up(2);
        assert_eq!((b.rows(), b.cols(), b.num_terms()), (6, 6, 12));
        let mut rng = rng_from_seed(2);
        let s = Substitution::random(a.field(), 12, &mut rng);
        assert_eq!(b.shrink(&s).unwrap().rank(), 6);
    }

    #[test]
    fn weighted_shrink_keeps_t() {
        let a = WeightedSymbolicMatrix::new(k3(65521), vec![1, 2, 3]).unwrap();
        let s = Substitution { values: vec![1, 1, 1] };
        let m = a.shrink(&s).unwrap();
        assert_eq!(m.get(0, 1), &RatFn::t_pow(a.field(), 1));
        assert_eq!(m.get(1, 2), &RatFn::t_pow(a.field(), 3));
    }

    #[test]
    fn laurent_min_degree_bound() {
        let a = WeightedSymbolicMatrix::new(k3(65521), vec![1, -2, 3]).unwrap();
        assert_eq!(a.to_rational().min_degree_bound(), Degree::Finite(-2));
    }
}
