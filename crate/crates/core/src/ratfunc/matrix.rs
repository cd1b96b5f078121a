use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{Degree, Poly, RatFn, RatFuncError};
use crate::scalar::matrix::{det_in_place, interpolated_degree};
use crate::scalar::{Fp, Mat};

/// Dense matrix over GF(p)(t).
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    field: Fp,
    rows: usize,
    cols: usize,
    entries: Vec<RatFn>,
}

/// Whether a square matrix lies in GL_n of the proper rational functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum BiproperFlag {
    Biproper,
    NotProper,
    SingularLeading,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMatrix[{}x{}]", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "\n  [")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        Ok(())
    }
}

impl RationalMatrix {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> RationalMatrix {
        RationalMatrix { field, rows, cols, entries: vec![RatFn::zero(field); rows * cols] }
    }

    pub fn identity(field: Fp, n: usize) -> RationalMatrix {
        RationalMatrix::from_mat(&Mat::identity(field, n))
    }

    pub fn from_fn(field: Fp, rows: usize, cols: usize, mut g: impl FnMut(usize, usize) -> RatFn) -> RationalMatrix {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(g(i, j));
            }
        }
        RationalMatrix { field, rows, cols, entries }
    }

    pub fn from_mat(m: &Mat) -> RationalMatrix {
        let f = m.field();
        RationalMatrix::from_fn(f, m.rows(), m.cols(), |i, j| RatFn::constant(f, m.get(i, j)))
    }

    /// Diagonal matrix `diag(t^{e_1}, ..., t^{e_n})`.
    pub fn t_diag(field: Fp, exps: &[i64]) -> RationalMatrix {
        let n = exps.len();
        RationalMatrix::from_fn(field, n, n, |i, j| if i == j { RatFn::t_pow(field, exps[i]) } else { RatFn::zero(field) })
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

    pub fn get(&self, i: usize, j: usize) -> &RatFn {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: RatFn) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[RatFn] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn mul(&self, o: &RationalMatrix) -> RationalMatrix {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let f = self.field;
        RationalMatrix::from_fn(f, self.rows, o.cols, |i, j| {
            let mut acc = RatFn::zero(f);
            for k in 0..self.cols {
                let a = self.get(i, k);
                let b = o.get(k, j);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc = acc.add(&a.mul(b));
            }
            acc
        })
    }

    pub fn mul_mat(&self, o: &Mat) -> RationalMatrix {
        self.mul(&RationalMatrix::from_mat(o))
    }

    pub fn add(&self, o: &RationalMatrix) -> RationalMatrix {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        RationalMatrix::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j).add(o.get(i, j)))
    }

    pub fn transpose(&self) -> RationalMatrix {
        RationalMatrix::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> RationalMatrix {
        RationalMatrix::from_fn(self.field, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]).clone())
    }

    /// `diag(t^row_exp) * self * diag(t^col_exp)`.
    pub fn shifted(&self, row_exp: &[i64], col_exp: &[i64]) -> RationalMatrix {
        assert_eq!(row_exp.len(), self.rows);
        assert_eq!(col_exp.len(), self.cols);
        RationalMatrix::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j).shift(row_exp[i] + col_exp[j]))
    }

    pub fn max_deg(&self) -> Degree {
        self.entries.iter().map(|e| e.deg()).max().unwrap_or(Degree::NegInf)
    }

    pub fn is_proper(&self) -> bool {
        self.entries.iter().all(|e| e.is_proper())
    }

    /// Constant term of a proper matrix.
    pub fn constant_part(&self) -> Mat {
        Mat::from_fn(self.field, self.rows, self.cols, |i, j| self.get(i, j).coeff_t0_shifted(0))
    }

    pub fn biproper_flag(&self) -> BiproperFlag {
        if self.rows != self.cols || !self.is_proper() {
            return BiproperFlag::NotProper;
        }
        if self.constant_part().rank() < self.rows {
            BiproperFlag::SingularLeading
        } else {
            BiproperFlag::Biproper
        }
    }

    /// Per-row lcm of denominators, and the polynomial matrix obtained by
    /// multiplying each row through by it.
    pub fn clear_row_denominators(&self) -> (Vec<Poly>, Vec<Vec<Poly>>) {
        let f = self.field;
        let mut dens = Vec::with_capacity(self.rows);
        let mut rows = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut l = Poly::one(f);
            for j in 0..self.cols {
                let d = self.get(i, j).den();
                if d.deg() > Degree::Finite(0) {
                    l = l.lcm(d);
                }
            }
            let row = (0..self.cols)
                .map(|j| {
                    let e = self.get(i, j);
                    e.num().mul(&l.div_exact(e.den()))
                })
                .collect();
            dens.push(l);
            rows.push(row);
        }
        (dens, rows)
    }

    /// Inverse over GF(p)(t), or `None` when singular.
    pub fn inverse(&self) -> Option<RationalMatrix> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let f = self.field;
        let mut a: Vec<Vec<RatFn>> = (0..n).map(|i| (0..n).map(|j| self.get(i, j).clone()).collect()).collect();
        let mut b: Vec<Vec<RatFn>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { RatFn::one(f) } else { RatFn::zero(f) }).collect()).collect();
        for c in 0..n {
            let pr = (c..n).find(|&i| !a[i][c].is_zero())?;
            a.swap(pr, c);
            b.swap(pr, c);
            let inv = a[c][c].inv().unwrap();
            for j in 0..n {
                a[c][j] = a[c][j].mul(&inv);
                b[c][j] = b[c][j].mul(&inv);
            }
            for i in 0..n {
                if i == c || a[i][c].is_zero() {
                    continue;
                }
                let factor = a[i][c].clone();
                for j in 0..n {
                    let da = factor.mul(&a[c][j]);
                    a[i][j] = a[i][j].sub(&da);
                    let db = factor.mul(&b[c][j]);
                    b[i][j] = b[i][j].sub(&db);
                }
            }
        }
        Some(RationalMatrix::from_fn(f, n, n, |i, j| b[i][j].clone()))
    }
}

/// Rank over GF(p)(t), by exact Gaussian elimination.
pub fn mat_rank(m: &RationalMatrix) -> usize {
    let mut a: Vec<Vec<RatFn>> = (0..m.rows).map(|i| (0..m.cols).map(|j| m.get(i, j).clone()).collect()).collect();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(pr) = (r..m.rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(pr, r);
        let inv = a[r][c].inv().unwrap();
        for i in r + 1..m.rows {
            if a[i][c].is_zero() {
                continue;
            }
            let factor = a[i][c].mul(&inv);
            for j in c..m.cols {
                let d = factor.mul(&a[r][j]);
                a[i][j] = a[i][j].sub(&d);
            }
        }
        r += 1;
    }
    r
}

/// `deg det M` (`-inf` if singular).
///
/// Clears row denominators, then evaluates the polynomial determinant at
/// enough points to interpolate its degree; for primes too small to supply
/// the points, falls back to fraction-free Bareiss elimination over GF(p)[t].
pub fn mat_degdet(m: &RationalMatrix) -> Result<Degree, RatFuncError> {
    if m.rows != m.cols {
        return Err(RatFuncError::NotSquare(m.rows, m.cols));
    }
    let n = m.rows;
    if n == 0 {
        return Ok(Degree::Finite(0));
    }
    let (dens, rows) = m.clear_row_denominators();
    let den_deg: i64 = dens.iter().map(|d| d.deg().unwrap()).sum();
    let bound: i64 = rows.iter().map(|r| r.iter().map(|p| p.deg()).max().unwrap().finite().unwrap_or(0)).sum();
    let points = bound as u64 + 1;
    let f = m.field;
    let num_deg = if points <= f.p() { degdet_by_evaluation(f, &rows, points) } else { degdet_bareiss(f, rows) };
    Ok(num_deg.map_or(Degree::NegInf, |d| Degree::Finite(d as i64 - den_deg)))
}

fn degdet_by_evaluation(f: Fp, rows: &[Vec<Poly>], points: u64) -> Option<usize> {
    let n = rows.len();
    let xs: Vec<u64> = (0..points).collect();
    let vals: Vec<u64> = xs
        .iter()
        .map(|&x| {
            let mut buf: Vec<u64> = rows.iter().flat_map(|r| r.iter().map(move |p| p.eval(&f, x))).collect();
            det_in_place(&f, n, &mut buf)
        })
        .collect();
    interpolated_degree(&f, &xs, &vals)
}

/// Degree of the determinant of a polynomial matrix by Bareiss elimination.
pub(crate) fn degdet_bareiss(f: Fp, mut a: Vec<Vec<Poly>>) -> Option<usize> {
    let n = a.len();
    let mut prev = Poly::one(f);
    for k in 0..n {
        let pr = (k..n).find(|&i| !a[i][k].is_zero())?;
        a.swap(pr, k);
        for i in k + 1..n {
            for j in k + 1..n {
                let v = a[i][j].mul(&a[k][k]).sub(&a[i][k].mul(&a[k][j]));
                a[i][j] = v.div_exact(&prev);
            }
            a[i][k] = Poly::zero(f);
        }
        prev = a[k][k].clone();
    }
    a[n - 1][n - 1].deg().finite().map(|d| d as usize)
}

/// Leading coefficient matrix of `diag(t^alpha) M diag(t^beta)`: the
/// coefficient of `t^0` in each entry. Every shifted entry must have
/// non-positive degree.
pub fn leading_coeff_matrix(m: &RationalMatrix, alpha: &[i64], beta: &[i64]) -> Result<Mat, RatFuncError> {
    if alpha.len() != m.rows || beta.len() != m.cols {
        return Err(RatFuncError::ShapeMismatch);
    }
    let mut out = Mat::zeros(m.field, m.rows, m.cols);
    for i in 0..m.rows {
        for j in 0..m.cols {
            let e = m.get(i, j);
            let s = alpha[i] + beta[j];
            if e.deg() + s > Degree::Finite(0) {
                return Err(RatFuncError::InfeasibleShift(i, j));
            }
            out.set(i, j, e.coeff_t0_shifted(s));
        }
    }
    Ok(out)
}

/// Inverse of a biproper matrix; the result is biproper again.
pub fn biproper_inverse(m: &RationalMatrix) -> Result<RationalMatrix, RatFuncError> {
    if m.biproper_flag() != BiproperFlag::Biproper {
        return Err(RatFuncError::NotBiproper);
    }
    let inv = m.inverse().ok_or(RatFuncError::NotBiproper)?;
    debug_assert_eq!(inv.biproper_flag(), BiproperFlag::Biproper);
    Ok(inv)
}

#[derive(Serialize, Deserialize)]
struct Repr {
    p: u64,
    rows: usize,
    cols: usize,
    /// row-major `[numerator coefficients, denominator coefficients]`, low to high
    entries: Vec<[Vec<i64>; 2]>,
}

impl Serialize for RationalMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let f = self.field;
        let signed = |p: &Poly| p.coeffs().iter().map(|&c| f.to_signed(c)).collect::<Vec<_>>();
        Repr {
            p: f.p(),
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| [signed(e.num()), signed(e.den())]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RationalMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let r = Repr::deserialize(d)?;
        let f = Fp::new(r.p).map_err(D::Error::custom)?;
        if r.entries.len() != r.rows * r.cols {
            return Err(D::Error::custom("entry count does not match shape"));
        }
        let entries = r
            .entries
            .iter()
            .map(|[n, d]| RatFn::new(Poly::from_i64(f, n), Poly::from_i64(f, d)).map_err(D::Error::custom))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RationalMatrix { field: f, rows: r.rows, cols: r.cols, entries })
    }
}
