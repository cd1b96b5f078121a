use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{Field, Fp, ScalarError};

/// A residue together with its modulus. Convenient at API boundaries; the
/// inner loops work on raw `u64` with an [`Fp`] context instead.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FieldElem {
    value: u64,
    p: u64,
}

impl FieldElem {
    pub fn new(value: i64, field: Fp) -> Self {
        FieldElem { value: field.from_i64(value), p: field.p() }
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> Fp {
        Fp::new(self.p).expect("FieldElem always carries a prime")
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Result<FieldElem, ScalarError> {
        ff_inv(*self)
    }

    fn ctx(&self, other: &FieldElem) -> Fp {
        assert_eq!(self.p, other.p, "mixed moduli");
        self.field()
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.p)
    }
}

/// Multiplicative inverse.
pub fn ff_inv(a: FieldElem) -> Result<FieldElem, ScalarError> {
    let f = a.field();
    f.inv(a.value).map(|v| FieldElem { value: v, p: a.p }).ok_or(ScalarError::ZeroInversion)
}

/// Uniform element of GF(p).
pub fn random_elem<R: Rng + ?Sized>(field: Fp, rng: &mut R) -> FieldElem {
    FieldElem { value: field.random(rng), p: field.p() }
}

impl Add for FieldElem {
    type Output = FieldElem;
    fn add(self, o: FieldElem) -> FieldElem {
        let f = self.ctx(&o);
        FieldElem { value: f.add(self.value, o.value), p: self.p }
    }
}

impl Sub for FieldElem {
    type Output = FieldElem;
    fn sub(self, o: FieldElem) -> FieldElem {
        let f = self.ctx(&o);
        FieldElem { value: f.sub(self.value, o.value), p: self.p }
    }
}

impl Mul for FieldElem {
    type Output = FieldElem;
    fn mul(self, o: FieldElem) -> FieldElem {
        let f = self.ctx(&o);
        FieldElem { value: f.mul(self.value, o.value), p: self.p }
    }
}

impl Div for FieldElem {
    type Output = FieldElem;
    /// Panics on division by zero; use [`ff_inv`] for a fallible path.
    fn div(self, o: FieldElem) -> FieldElem {
        self * ff_inv(o).expect("division by zero")
    }
}

impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        let f = self.field();
        FieldElem { value: f.neg(self.value), p: self.p }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rng_from_seed;

    #[test]
    fn inverse_examples() {
        let f7 = Fp::new(7).unwrap();
        assert_eq!(ff_inv(FieldElem::new(2, f7)).unwrap().value(), 4);
        assert_eq!(ff_inv(FieldElem::new(1, f7)).unwrap().value(), 1);
        let f5 = Fp::new(5).unwrap();
        assert_eq!(ff_inv(FieldElem::new(0, f5)), Err(ScalarError::ZeroInversion));
    }

    #[test]
    fn seeded_sampling_is_deterministic() {
        let f = Fp::new(65521).unwrap();
        let a: Vec<_> = {
            let mut r = rng_from_seed(9);
            (0..20).map(|_| random_elem(f, &mut r)).collect()
        };
        let b: Vec<_> = {
            let mut r = rng_from_seed(9);
            (0..20).map(|_| random_elem(f, &mut r)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn field_axioms_on_random_triples() {
        for p in [2u64, 3, 5, 65521] {
            let f = Fp::new(p).unwrap();
            let mut rng = rng_from_seed(p);
            let zero = FieldElem::new(0, f);
            let one = FieldElem::new(1, f);
            for _ in 0..10_000 {
                let a = random_elem(f, &mut rng);
                let b = random_elem(f, &mut rng);
                let c = random_elem(f, &mut rng);
                assert_eq!((a + b) + c, a + (b + c));
                assert_eq!((a * b) * c, a * (b * c));
                assert_eq!(a + b, b + a);
                assert_eq!(a * b, b * a);
                assert_eq!(a * (b + c), a * b + a * c);
                assert_eq!(a + zero, a);
                assert_eq!(a * one, a);
                assert_eq!(a + (-a), zero);
                if !a.is_zero() {
                    assert_eq!(a * a.inv().unwrap(), one);
                }
            }
        }
    }
}
