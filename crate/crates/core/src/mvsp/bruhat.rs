use serde::{Deserialize, Serialize};

use super::MvspError;
use crate::scalar::{Field, Mat};

/// `S = L * perm * U` with `L` lower unitriangular, `U` upper triangular and
/// `perm` the permutation matrix with ones at `(i, perm[i])`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BruhatTriple {
    pub l: Mat,
    pub perm: Vec<usize>,
    pub u: Mat,
}

impl BruhatTriple {
    pub fn perm_matrix(&self) -> Mat {
        Mat::permutation(self.l.field(), &self.perm)
    }

    pub fn reconstruct(&self) -> Mat {
        self.l.mul(&self.perm_matrix()).mul(&self.u)
    }
}

/// Bruhat decomposition by the row sweep: in row `i` take the first nonzero
/// column `j`, clear column `j` below and row `i` to the right.
pub fn bruhat(s: &Mat) -> Result<BruhatTriple, MvspError> {
    let n = s.rows();
    if n != s.cols() {
        return Err(MvspError::Singular);
    }
    let f = s.field();
    let mut w = s.clone();
    let mut lrow = Mat::identity(f, n);
    let mut ucol = Mat::identity(f, n);
    let mut perm = vec![0; n];
    for i in 0..n {
        let j = (0..n).find(|&j| w.get(i, j) != 0).ok_or(MvspError::Singular)?;
        perm[i] = j;
        let inv = f.inv(w.get(i, j)).unwrap();
        for i2 in i + 1..n {
            let x = w.get(i2, j);
            if x == 0 {
                continue;
            }
            let fac = f.mul(x, inv);
            for c in 0..n {
                let v = f.sub(w.get(i2, c), f.mul(fac, w.get(i, c)));
                w.set(i2, c, v);
                let v = f.sub(lrow.get(i2, c), f.mul(fac, lrow.get(i, c)));
                lrow.set(i2, c, v);
            }
        }
        for j2 in j + 1..n {
            let x = w.get(i, j2);
            if x == 0 {
                continue;
            }
            let fac = f.mul(x, inv);
            for r in 0..n {
                let v = f.sub(w.get(r, j2), f.mul(fac, w.get(r, j)));
                w.set(r, j2, v);
                let v = f.sub(ucol.get(r, j2), f.mul(fac, ucol.get(r, j)));
                ucol.set(r, j2, v);
            }
        }
    }
    // lrow * S * ucol = perm * D
    let mut d = Mat::zeros(f, n, n);
    for i in 0..n {
        d.set(perm[i], perm[i], w.get(i, perm[i]));
    }
    let l = lrow.inverse().ok_or(MvspError::Singular)?;
    let u = d.mul(&ucol.inverse().ok_or(MvspError::Singular)?);
    Ok(BruhatTriple { l, perm, u })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rng_from_seed, Fp};
    use rand::Rng;

    fn f() -> Fp {
        Fp::new(7).unwrap()
    }

    #[test]
    fn identity_and_antidiagonal() {
        let id = Mat::identity(f(), 3);
        let b = bruhat(&id).unwrap();
        assert_eq!((b.l.clone(), b.perm.clone(), b.u.clone()), (id.clone(), vec![0, 1, 2], id.clone()));
        let j = Mat::permutation(f(), &[2, 1, 0]);
        let b = bruhat(&j).unwrap();
        assert_eq!(b.perm, vec![2, 1, 0]);
        assert_eq!(b.l, id);
        assert_eq!(b.u, id);
    }

    #[test]
    fn two_by_two_example() {
        let s = Mat::from_i64_rows(f(), &[vec![0, 1], vec![1, 1]]);
        let b = bruhat(&s).unwrap();
        assert_eq!(b.perm, vec![1, 0]);
        assert_eq!(b.reconstruct(), s);
        assert_eq!(b.l.to_signed_rows(), vec![vec![1, 0], vec![1, 1]]);
        assert!(b.l.is_lower_triangular() && b.u.is_upper_triangular());
    }

    #[test]
    fn singular_rejected() {
        let s = Mat::from_i64_rows(f(), &[vec![1, 2], vec![2, 4]]);
        assert_eq!(bruhat(&s), Err(MvspError::Singular));
    }

    fn random_triangular(n: usize, lower: bool, rng: &mut crate::scalar::Rng) -> Mat {
        let f = f();
        Mat::from_fn(f, n, n, |i, j| {
            if i == j {
                rng.gen_range(1..7)
            } else if (lower && i > j) || (!lower && i < j) {
                rng.gen_range(0..7)
            } else {
                0
            }
        })
    }

    #[test]
    fn permutation_is_unique() {
        let mut rng = rng_from_seed(5);
        for _ in 0..100 {
            let n = rng.gen_range(1..6);
            let s = Mat::random_invertible(f(), n, &mut rng);
            let b = bruhat(&s).unwrap();
            assert_eq!(b.reconstruct(), s);
            assert!(b.l.is_lower_triangular() && b.u.is_upper_triangular());
            let l2 = random_triangular(n, true, &mut rng);
            let u2 = random_triangular(n, false, &mut rng);
            let b2 = bruhat(&l2.mul(&s).mul(&u2)).unwrap();
            assert_eq!(b2.perm, b.perm);
        }
    }
}
