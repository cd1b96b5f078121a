use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Exact rational number. Serialized as a string such as `"3/4"` or `"-2"`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactRational(pub BigRational);

impl ExactRational {
    pub fn new(num: i64, den: i64) -> Self {
        ExactRational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_int(v: i64) -> Self {
        ExactRational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    /// Integer value, if this is an integer that fits in i64.
    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.to_integer().to_i64()
        } else {
            None
        }
    }

    pub fn ceil_i64(&self) -> i64 {
        self.0.ceil().to_integer().to_i64().expect("rational out of i64 range")
    }

    pub fn floor_i64(&self) -> i64 {
        self.0.floor().to_integer().to_i64().expect("rational out of i64 range")
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for ExactRational {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let s = s.trim();
        let parse = |x: &str| x.trim().parse::<BigInt>().map_err(|e| format!("{s}: {e}"));
        match s.split_once('/') {
            Some((n, d)) => {
                let d = parse(d)?;
                if d.is_zero() {
                    return Err(format!("{s}: zero denominator"));
                }
                Ok(ExactRational(BigRational::new(parse(n)?, d)))
            }
            None => Ok(ExactRational(BigRational::from_integer(parse(s)?))),
        }
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(ExactRational::from_int(v)),
            Repr::Str(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

impl From<i64> for ExactRational {
    fn from(v: i64) -> Self {
        ExactRational::from_int(v)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident) => {
        impl $tr for ExactRational {
            type Output = ExactRational;
            fn $m(self, o: ExactRational) -> ExactRational {
                ExactRational(self.0.$m(o.0))
            }
        }
        impl<'a> $tr<&'a ExactRational> for &'a ExactRational {
            type Output = ExactRational;
            fn $m(self, o: &'a ExactRational) -> ExactRational {
                ExactRational((&self.0).$m(&o.0))
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);
binop!(Div, div);

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl std::iter::Sum for ExactRational {
    fn sum<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |a, b| a + b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let x: ExactRational = "3/4".parse().unwrap();
        assert_eq!(x.to_string(), "3/4");
        let y: ExactRational = "-6/3".parse().unwrap();
        assert_eq!(y.to_string(), "-2");
        assert!("1/0".parse::<ExactRational>().is_err());
    }

    #[test]
    fn serde_roundtrip() {
        let x = ExactRational::new(1, 2);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "\"1/2\"");
        let back: ExactRational = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        let int: ExactRational = serde_json::from_str("7").unwrap();
        assert_eq!(int, ExactRational::from_int(7));
    }

    #[test]
    fn ceil_floor() {
        assert_eq!(ExactRational::new(3, 2).ceil_i64(), 2);
        assert_eq!(ExactRational::new(-3, 2).ceil_i64(), -1);
        assert_eq!(ExactRational::new(-3, 2).floor_i64(), -2);
    }
}
