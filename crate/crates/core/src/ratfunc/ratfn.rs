use std::fmt;

use super::{Degree, Poly, RatFuncError};
use crate::scalar::{Field, Fp};

/// Rational function `num / den` over GF(p). Always kept normalized:
/// `den` monic, `gcd(num, den) = 1`, and zero is `0 / 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFn {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.deg() == Degree::Finite(0) {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl RatFn {
    pub fn new(num: Poly, den: Poly) -> Result<RatFn, RatFuncError> {
        if den.is_zero() {
            return Err(RatFuncError::ZeroDenominator);
        }
        Ok(RatFn::normalized(num, den))
    }

    fn normalized(num: Poly, den: Poly) -> RatFn {
        let f = num.field();
        if num.is_zero() {
            return RatFn { num, den: Poly::one(f) };
        }
        // common case: both sides are shifted by powers of t only
        let (num, den) = if den.is_monomial() {
            let k = match (num.low_order(), den.low_order()) {
                (Degree::Finite(a), Degree::Finite(b)) => a.min(b) as usize,
                _ => 0,
            };
            (num.unshift(k), den.unshift(k))
        } else {
            let g = num.gcd(&den);
            (num.div_exact(&g), den.div_exact(&g))
        };
        let inv = f.inv(den.lc()).unwrap();
        RatFn { num: num.scale(inv), den: den.scale(inv) }
    }

    pub fn from_poly(p: Poly) -> RatFn {
        let f = p.field();
        RatFn { num: p, den: Poly::one(f) }
    }

    pub fn zero(f: Fp) -> RatFn {
        RatFn::from_poly(Poly::zero(f))
    }

    pub fn one(f: Fp) -> RatFn {
        RatFn::from_poly(Poly::one(f))
    }

    pub fn constant(f: Fp, c: u64) -> RatFn {
        RatFn::from_poly(Poly::constant(f, c))
    }

    /// `c * t^k` for any integer `k`.
    pub fn monomial(f: Fp, c: u64, k: i64) -> RatFn {
        if k >= 0 {
            RatFn::from_poly(Poly::monomial(f, c, k as usize))
        } else {
            RatFn::normalized(Poly::constant(f, c), Poly::monomial(f, 1, (-k) as usize))
        }
    }

    pub fn t_pow(f: Fp, k: i64) -> RatFn {
        RatFn::monomial(f, 1, k)
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> Fp {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// `deg num - deg den`; `-inf` for zero.
    pub fn deg(&self) -> Degree {
        if self.is_zero() {
            Degree::NegInf
        } else {
            self.num.deg() - self.den.deg()
        }
    }

    /// Lowest exponent of the numerator minus the degree of the denominator;
    /// `+inf` for zero.
    pub fn mindeg(&self) -> Degree {
        if self.is_zero() {
            Degree::PosInf
        } else {
            self.num.low_order() - self.den.deg()
        }
    }

    /// Ratio of leading coefficients (the coefficient of `t^deg`).
    pub fn lc(&self) -> u64 {
        let f = self.field();
        f.mul(self.num.lc(), f.inv(self.den.lc()).unwrap())
    }

    /// Coefficient of `t^0` in the expansion of `t^s * self` at infinity,
    /// provided `deg + s <= 0`.
    pub fn coeff_t0_shifted(&self, s: i64) -> u64 {
        match self.deg() {
            Degree::Finite(d) if d + s == 0 => self.lc(),
            _ => 0,
        }
    }

    pub fn is_proper(&self) -> bool {
        self.deg() <= Degree::Finite(0)
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_monomial()
    }

    pub fn add(&self, o: &RatFn) -> RatFn {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFn::normalized(self.num.add(&o.num), self.den.clone());
        }
        RatFn::normalized(self.num.mul(&o.den).add(&o.num.mul(&self.den)), self.den.mul(&o.den))
    }

    pub fn neg(&self) -> RatFn {
        RatFn { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, o: &RatFn) -> RatFn {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFn) -> RatFn {
        if self.is_zero() || o.is_zero() {
            return RatFn::zero(self.field());
        }
        RatFn::normalized(self.num.mul(&o.num), self.den.mul(&o.den))
    }

    pub fn scale(&self, c: u64) -> RatFn {
        RatFn::normalized(self.num.scale(c), self.den.clone())
    }

    /// Multiply by `t^k`.
    pub fn shift(&self, k: i64) -> RatFn {
        if self.is_zero() || k == 0 {
            return self.clone();
        }
        if k > 0 {
            RatFn::normalized(self.num.shift(k as usize), self.den.clone())
        } else {
            RatFn::normalized(self.num.clone(), self.den.shift((-k) as usize))
        }
    }

    pub fn inv(&self) -> Option<RatFn> {
        if self.is_zero() {
            None
        } else {
            Some(RatFn::normalized(self.den.clone(), self.num.clone()))
        }
    }

    pub fn div(&self, o: &RatFn) -> Option<RatFn> {
        o.inv().map(|oi| self.mul(&oi))
    }

    /// Value at `x`, or `None` at a pole.
    pub fn eval<F: Field>(&self, f: &F, x: F::Elem) -> Option<F::Elem> {
        let d = self.den.eval(f, x);
        f.inv(d).map(|di| f.mul(self.num.eval(f, x), di))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> Fp {
        Fp::new(101).unwrap()
    }

    fn poly(c: &[i64]) -> Poly {
        Poly::from_i64(f(), c)
    }

    #[test]
    fn degree_examples() {
        assert_eq!(RatFn::from_poly(poly(&[1, 0, 0, 1])).deg(), Degree::Finite(3));
        assert_eq!(RatFn::zero(f()).deg(), Degree::NegInf);
        let r = RatFn::new(poly(&[1, 0, 1]), poly(&[0, 0, 0, 0, 0, 1])).unwrap();
        assert_eq!(r.deg(), Degree::Finite(-3));
    }

    #[test]
    fn mindeg_examples() {
        assert_eq!(RatFn::from_poly(poly(&[0, 1, 0, 1])).mindeg(), Degree::Finite(1));
        let r = RatFn::new(poly(&[0, 1, 0, 1]), poly(&[0, 0, 1])).unwrap();
        assert_eq!(r.mindeg(), Degree::Finite(-1));
        assert_eq!(RatFn::zero(f()).mindeg(), Degree::PosInf);
    }

    #[test]
    fn normalization_cancels() {
        // (t^2 - 1) / (t + 1) = t - 1
        let r = RatFn::new(poly(&[-1, 0, 1]), poly(&[1, 1])).unwrap();
        assert_eq!(r, RatFn::from_poly(poly(&[-1, 1])));
        assert!(RatFn::new(poly(&[1]), Poly::zero(f())).is_err());
    }

    #[test]
    fn arithmetic() {
        let a = RatFn::t_pow(f(), -1);
        let b = RatFn::t_pow(f(), 2);
        assert_eq!(a.mul(&b), RatFn::t_pow(f(), 1));
        assert!(a.sub(&a).is_zero());
        let c = RatFn::new(poly(&[1]), poly(&[1, 1])).unwrap();
        let s = c.add(&c.neg());
        assert!(s.is_zero());
        assert_eq!(c.mul(&c.inv().unwrap()), RatFn::one(f()));
    }
}
