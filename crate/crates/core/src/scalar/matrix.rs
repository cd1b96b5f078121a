//! Dense matrices over GF(p) and field-generic elimination kernels.

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Field, Fp};

/// In-place row reduction of a row-major `rows x cols` buffer to reduced echelon
/// form. Returns the pivot columns.
pub fn rref_in_place<F: Field>(f: &F, rows: usize, cols: usize, a: &mut [F::Elem]) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !f.is_zero(a[i * cols + c])) else {
            continue;
        };
        if pr != r {
            for j in 0..cols {
                a.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(a[r * cols + c]).unwrap();
        for j in c..cols {
            a[r * cols + j] = f.mul(a[r * cols + j], inv);
        }
        for i in 0..rows {
            if i == r {
                continue;
            }
            let factor = a[i * cols + c];
            if f.is_zero(factor) {
                continue;
            }
            for j in c..cols {
                let v = f.mul(factor, a[r * cols + j]);
                a[i * cols + j] = f.sub(a[i * cols + j], v);
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Rank by forward elimination (destroys `a`).
pub fn rank_in_place<F: Field>(f: &F, rows: usize, cols: usize, a: &mut [F::Elem]) -> usize {
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !f.is_zero(a[i * cols + c])) else {
            continue;
        };
        if pr != r {
            for j in c..cols {
                a.swap(pr * cols + j, r * cols + j);
            }
        }
        let inv = f.inv(a[r * cols + c]).unwrap();
        for i in r + 1..rows {
            let x = a[i * cols + c];
            if f.is_zero(x) {
                continue;
            }
            let factor = f.mul(x, inv);
            for j in c..cols {
                let v = f.mul(factor, a[r * cols + j]);
                a[i * cols + j] = f.sub(a[i * cols + j], v);
            }
        }
        r += 1;
    }
    r
}

/// Determinant of an `n x n` buffer (destroys `a`).
pub fn det_in_place<F: Field>(f: &F, n: usize, a: &mut [F::Elem]) -> F::Elem {
    let mut det = f.one();
    for c in 0..n {
        let Some(pr) = (c..n).find(|&i| !f.is_zero(a[i * n + c])) else {
            return f.zero();
        };
        if pr != c {
            for j in c..n {
                a.swap(pr * n + j, c * n + j);
            }
            det = f.neg(det);
        }
        let piv = a[c * n + c];
        det = f.mul(det, piv);
        let inv = f.inv(piv).unwrap();
        for i in c + 1..n {
            let x = a[i * n + c];
            if f.is_zero(x) {
                continue;
            }
            let factor = f.mul(x, inv);
            for j in c..n {
                let v = f.mul(factor, a[c * n + j]);
                a[i * n + j] = f.sub(a[i * n + j], v);
            }
        }
    }
    det
}

/// Degree of the polynomial taking `values[i]` at `points[i]`, via Newton
/// divided differences. `None` for the zero polynomial.
pub fn interpolated_degree<F: Field>(f: &F, points: &[F::Elem], values: &[F::Elem]) -> Option<usize> {
    let n = points.len();
    let mut dd = values.to_vec();
    let mut deg = if f.is_zero(dd[0]) { None } else { Some(0) };
    for level in 1..n {
        for i in (level..n).rev() {
            let num = f.sub(dd[i], dd[i - 1]);
            let den = f.sub(points[i], points[i - level]);
            dd[i] = f.mul(num, f.inv(den).expect("interpolation points must be distinct"));
        }
        if !f.is_zero(dd[level]) {
            deg = Some(level);
        }
    }
    deg
}

/// Dense row-major matrix over GF(p).
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat {
    field: Fp,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat[{}x{} mod {}]", self.rows, self.cols, self.field.p())?;
        for i in 0..self.rows {
            write!(f, "\n  {:?}", self.row(i))?;
        }
        Ok(())
    }
}

impl Mat {
    pub fn zeros(field: Fp, rows: usize, cols: usize) -> Mat {
        Mat { field, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: Fp, n: usize) -> Mat {
        let mut m = Mat::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1 % field.p();
        }
        m
    }

    pub fn from_fn(field: Fp, rows: usize, cols: usize, mut g: impl FnMut(usize, usize) -> u64) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(g(i, j) % field.p());
            }
        }
        Mat { field, rows, cols, data }
    }

    pub fn from_i64_rows(field: Fp, rows: &[Vec<i64>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat::from_fn(field, r, c, |i, j| field.from_i64(rows[i][j]))
    }

    pub fn from_data(field: Fp, rows: usize, cols: usize, data: Vec<u64>) -> Mat {
        assert_eq!(data.len(), rows * cols);
        let p = field.p();
        Mat { field, rows, cols, data: data.into_iter().map(|v| v % p).collect() }
    }

    pub fn random<R: Rng + ?Sized>(field: Fp, rows: usize, cols: usize, rng: &mut R) -> Mat {
        Mat::from_fn(field, rows, cols, |_, _| field.random(rng))
    }

    /// Uniformly random invertible matrix (rejection sampling).
    pub fn random_invertible<R: Rng + ?Sized>(field: Fp, n: usize, rng: &mut R) -> Mat {
        loop {
            let m = Mat::random(field, n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    /// Permutation matrix with a 1 at `(i, perm[i])`.
    pub fn permutation(field: Fp, perm: &[usize]) -> Mat {
        let n = perm.len();
        let mut m = Mat::zeros(field, n, n);
        for (i, &j) in perm.iter().enumerate() {
            m.set(i, j, 1);
        }
        m
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
    pub fn data(&self) -> &[u64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        self.data[i * self.cols + j] = v % self.field.p();
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn to_signed_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|i| self.row(i).iter().map(|&v| self.field.to_signed(v)).collect()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().filter(|&&v| v != 0).count()
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.field, self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn mul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "dimension mismatch in product");
        let f = self.field;
        let mut out = Mat::zeros(f, self.rows, o.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    let idx = i * o.cols + j;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, o.get(k, j)));
                }
            }
        }
        out
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        let f = self.field;
        Mat {
            field: f,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(&a, &b)| f.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        self.add(&o.scale(self.field.neg(1 % self.field.p())))
    }

    pub fn scale(&self, s: u64) -> Mat {
        let f = self.field;
        Mat { field: f, rows: self.rows, cols: self.cols, data: self.data.iter().map(|&a| f.mul(a, s)).collect() }
    }

    pub fn mul_vec(&self, v: &[u64]) -> Vec<u64> {
        let f = self.field;
        (0..self.rows).map(|i| self.row(i).iter().zip(v).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))).collect()
    }

    /// Kronecker product.
    pub fn kron(&self, o: &Mat) -> Mat {
        let f = self.field;
        Mat::from_fn(f, self.rows * o.rows, self.cols * o.cols, |i, j| {
            f.mul(self.get(i / o.rows, j / o.cols), o.get(i % o.rows, j % o.cols))
        })
    }

    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Mat {
        Mat::from_fn(self.field, rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    pub fn select_rows(&self, rows: &[usize]) -> Mat {
        let cols: Vec<usize> = (0..self.cols).collect();
        self.select(rows, &cols)
    }

    pub fn select_cols(&self, cols: &[usize]) -> Mat {
        let rows: Vec<usize> = (0..self.rows).collect();
        self.select(&rows, cols)
    }

    /// Stack `self` on top of `o`.
    pub fn vstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.cols);
        let mut data = self.data.clone();
        data.extend_from_slice(&o.data);
        Mat { field: self.field, rows: self.rows + o.rows, cols: self.cols, data }
    }

    /// Zero-pad to `rows x cols`.
    pub fn padded(&self, rows: usize, cols: usize) -> Mat {
        Mat::from_fn(self.field, rows, cols, |i, j| if i < self.rows && j < self.cols { self.get(i, j) } else { 0 })
    }

    pub fn rank(&self) -> usize {
        let mut d = self.data.clone();
        rank_in_place(&self.field, self.rows, self.cols, &mut d)
    }

    pub fn det(&self) -> u64 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let mut d = self.data.clone();
        det_in_place(&self.field, self.rows, &mut d)
    }

    /// Reduced row echelon form and its pivot columns.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let mut m = self.clone();
        let piv = rref_in_place(&self.field, m.rows, m.cols, &mut m.data);
        (m, piv)
    }

    /// Basis (as rows, in reduced echelon form) of the row space.
    pub fn row_basis(&self) -> Mat {
        let (m, piv) = self.rref();
        m.select_rows(&(0..piv.len()).collect::<Vec<_>>())
    }

    /// Basis (as rows) of the right kernel `{x : self * x = 0}`.
    pub fn kernel(&self) -> Mat {
        let f = self.field;
        let (m, piv) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !piv.contains(c)).collect();
        let mut out = Mat::zeros(f, free.len(), self.cols);
        for (t, &fc) in free.iter().enumerate() {
            out.set(t, fc, 1);
            for (r, &pc) in piv.iter().enumerate() {
                out.set(t, pc, f.neg(m.get(r, fc)));
            }
        }
        out
    }

    pub fn inverse(&self) -> Option<Mat> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        let f = self.field;
        let mut aug = Mat::from_fn(f, n, 2 * n, |i, j| {
            if j < n {
                self.get(i, j)
            } else if j - n == i {
                1
            } else {
                0
            }
        });
        let piv = rref_in_place(&f, n, 2 * n, &mut aug.data);
        if piv.len() < n || piv[n - 1] >= n {
            return None;
        }
        Some(Mat::from_fn(f, n, n, |i, j| aug.get(i, n + j)))
    }

    /// Extend the rows of `self` (assumed independent) to a basis of the full
    /// space, appending unit vectors. Returns a square matrix.
    pub fn complete_basis(&self) -> Mat {
        let n = self.cols;
        let mut out = self.clone();
        let mut rank = out.rank();
        assert_eq!(rank, self.rows, "rows must be independent");
        for i in 0..n {
            if rank == n {
                break;
            }
            let mut e = Mat::zeros(self.field, 1, n);
            e.set(0, i, 1);
            let cand = out.vstack(&e);
            let r = cand.rank();
            if r > rank {
                out = cand;
                rank = r;
            }
        }
        out
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self.get(i, j) == 0))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.rows).all(|i| (i + 1..self.cols).all(|j| self.get(i, j) == 0))
    }

    /// If `self` is a permutation matrix, the permutation `i -> j` of its ones.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        if self.rows != self.cols {
            return None;
        }
        let mut perm = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let nz: Vec<usize> = (0..self.cols).filter(|&j| self.get(i, j) != 0).collect();
            if nz.len() != 1 || self.get(i, nz[0]) != 1 {
                return None;
            }
            perm.push(nz[0]);
        }
        let mut seen = vec![false; self.rows];
        for &j in &perm {
            if std::mem::replace(&mut seen[j], true) {
                return None;
            }
        }
        Some(perm)
    }
}
