use std::fmt;

use serde::{Deserialize, Serialize};

use super::Degree;
use crate::scalar::{Field, Fp};

/// Univariate polynomial in t over GF(p), coefficients low to high, no
/// trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Poly {
    field: Fp,
    coeffs: Vec<u64>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => write!(f, "t")?,
                (1, c) => write!(f, "{c}t")?,
                (i, 1) => write!(f, "t^{i}")?,
                (i, c) => write!(f, "{c}t^{i}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn new(field: Fp, coeffs: Vec<u64>) -> Poly {
        let p = field.p();
        let mut c: Vec<u64> = coeffs.into_iter().map(|v| v % p).collect();
        while c.last() == Some(&0) {
            c.pop();
        }
        Poly { field, coeffs: c }
    }

    pub fn from_i64(field: Fp, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&v| field.from_i64(v)).collect())
    }

    pub fn zero(field: Fp) -> Poly {
        Poly { field, coeffs: vec![] }
    }

    pub fn constant(field: Fp, c: u64) -> Poly {
        Poly::new(field, vec![c])
    }

    pub fn one(field: Fp) -> Poly {
        Poly::constant(field, 1)
    }

    /// `c * t^k`
    pub fn monomial(field: Fp, c: u64, k: usize) -> Poly {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Poly::new(field, v)
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn deg(&self) -> Degree {
        if self.is_zero() {
            Degree::NegInf
        } else {
            Degree::Finite(self.coeffs.len() as i64 - 1)
        }
    }

    /// Exponent of the lowest nonzero term; `+inf` for zero.
    pub fn low_order(&self) -> Degree {
        match self.coeffs.iter().position(|&c| c != 0) {
            Some(i) => Degree::Finite(i as i64),
            None => Degree::PosInf,
        }
    }

    pub fn lc(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    /// True when the polynomial is `c * t^k`.
    pub fn is_monomial(&self) -> bool {
        self.coeffs.iter().filter(|&&c| c != 0).count() == 1
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let f = self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.add(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        let f = self.field;
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new(f, (0..n).map(|i| f.sub(self.coeff(i), o.coeff(i))).collect())
    }

    pub fn neg(&self) -> Poly {
        let f = self.field;
        Poly::new(f, self.coeffs.iter().map(|&c| f.neg(c)).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.field);
        }
        let f = self.field;
        let mut out = vec![0u64; self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.coeffs.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Poly::new(f, out)
    }

    pub fn scale(&self, c: u64) -> Poly {
        let f = self.field;
        Poly::new(f, self.coeffs.iter().map(|&a| f.mul(a, c)).collect())
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut v = vec![0; k];
        v.extend_from_slice(&self.coeffs);
        Poly { field: self.field, coeffs: v }
    }

    /// Divide by `t^k`; the low `k` coefficients must vanish.
    pub fn unshift(&self, k: usize) -> Poly {
        debug_assert!(self.coeffs.iter().take(k).all(|&c| c == 0));
        Poly { field: self.field, coeffs: self.coeffs.iter().skip(k).copied().collect() }
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(self.field.inv(self.lc()).unwrap())
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let f = self.field;
        if self.coeffs.len() < d.coeffs.len() {
            return (Poly::zero(f), self.clone());
        }
        let mut r = self.coeffs.clone();
        let dl = d.coeffs.len();
        let inv = f.inv(d.lc()).unwrap();
        let mut q = vec![0u64; r.len() - dl + 1];
        for i in (0..q.len()).rev() {
            let c = f.mul(r[i + dl - 1], inv);
            q[i] = c;
            if c == 0 {
                continue;
            }
            for (j, &dc) in d.coeffs.iter().enumerate() {
                r[i + j] = f.sub(r[i + j], f.mul(c, dc));
            }
        }
        (Poly::new(f, q), Poly::new(f, r))
    }

    /// Exact division; panics if `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Poly {
        let (q, r) = self.divrem(d);
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.field);
        }
        self.mul(o).div_exact(&self.gcd(o)).monic()
    }

    pub fn eval<F: Field>(&self, f: &F, x: F::Elem) -> F::Elem {
        let mut acc = f.zero();
        for &c in self.coeffs.iter().rev() {
            acc = f.add(f.mul(acc, x), f.embed(c));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> Fp {
        Fp::new(7).unwrap()
    }

    #[test]
    fn degrees() {
        assert_eq!(Poly::from_i64(f(), &[1, 0, 0, 1]).deg(), Degree::Finite(3));
        assert_eq!(Poly::zero(f()).deg(), Degree::NegInf);
        assert_eq!(Poly::from_i64(f(), &[0, 1, 0, 1]).low_order(), Degree::Finite(1));
    }

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_i64(f(), &[-1, 0, 1]); // t^2 - 1
        let b = Poly::from_i64(f(), &[1, 1]); // t + 1
        let (q, r) = a.divrem(&b);
        assert!(r.is_zero());
        assert_eq!(q, Poly::from_i64(f(), &[-1, 1]));
        let g = a.gcd(&Poly::from_i64(f(), &[1, 2, 1]));
        assert_eq!(g, b);
    }
}
