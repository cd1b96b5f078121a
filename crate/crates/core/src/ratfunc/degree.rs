use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Integer degree with both infinities. Ordering is `NegInf < Finite(_) < PosInf`.
/// Arithmetic saturates; adding opposite infinities panics.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Degree {
    NegInf,
    Finite(i64),
    PosInf,
}

impl Degree {
    pub fn is_finite(&self) -> bool {
        matches!(self, Degree::Finite(_))
    }

    pub fn finite(&self) -> Option<i64> {
        match self {
            Degree::Finite(v) => Some(*v),
            _ => None,
        }
    }

    /// The finite value; panics on an infinity.
    pub fn unwrap(&self) -> i64 {
        self.finite().unwrap_or_else(|| panic!("degree is {self}"))
    }

    pub fn scale(&self, k: i64) -> Degree {
        match *self {
            Degree::Finite(v) => Degree::Finite(v * k),
            d if k > 0 => d,
            d if k < 0 => -d,
            _ => Degree::Finite(0),
        }
    }
}

impl From<i64> for Degree {
    fn from(v: i64) -> Degree {
        Degree::Finite(v)
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, o: Degree) -> Degree {
        use Degree::*;
        match (self, o) {
            (Finite(a), Finite(b)) => Finite(a + b),
            (NegInf, PosInf) | (PosInf, NegInf) => panic!("-inf + +inf is undefined"),
            (NegInf, _) | (_, NegInf) => NegInf,
            _ => PosInf,
        }
    }
}

impl Add<i64> for Degree {
    type Output = Degree;
    fn add(self, o: i64) -> Degree {
        self + Degree::Finite(o)
    }
}

impl Neg for Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        match self {
            Degree::NegInf => Degree::PosInf,
            Degree::PosInf => Degree::NegInf,
            Degree::Finite(v) => Degree::Finite(-v),
        }
    }
}

impl Sub for Degree {
    type Output = Degree;
    fn sub(self, o: Degree) -> Degree {
        self + (-o)
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::NegInf => write!(f, "-inf"),
            Degree::PosInf => write!(f, "+inf"),
            Degree::Finite(v) => write!(f, "{v}"),
        }
    }
}

impl Serialize for Degree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Degree::Finite(v) => s.serialize_i64(*v),
            Degree::NegInf => s.serialize_str("-inf"),
            Degree::PosInf => s.serialize_str("+inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Degree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Int(i64),
            Str(String),
        }
        match Repr::deserialize(d)? {
            Repr::Int(v) => Ok(Degree::Finite(v)),
            Repr::Str(s) => match s.as_str() {
                "-inf" => Ok(Degree::NegInf),
                "+inf" | "inf" => Ok(Degree::PosInf),
                other => Err(serde::de::Error::custom(format!("bad degree {other:?}"))),
            },
        }
    }
}
