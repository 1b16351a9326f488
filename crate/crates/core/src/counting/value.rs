use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::rational::{format_rational, parse_rational, rational_from_f64, to_f64};
use crate::{Error, Result};

/// A ledger value: exact when every ingredient is exact, a float once an
/// irrational operation (square root of a non-square) enters, or a
/// symbolic `coef·log(arg)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum LedgerValue {
    Integer {
        #[serde(with = "int_string")]
        value: BigInt,
    },
    Rational {
        #[serde(with = "crate::rational::serde_rational")]
        value: BigRational,
    },
    Real {
        value: f64,
    },
    Log {
        #[serde(with = "crate::rational::serde_rational")]
        coef: BigRational,
        #[serde(with = "crate::rational::serde_rational")]
        arg: BigRational,
    },
}

mod int_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(n: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&n.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.parse().map_err(serde::de::Error::custom)
    }
}

impl LedgerValue {
    pub fn to_f64(&self) -> f64 {
        match self {
            LedgerValue::Integer { value } => value.to_f64().unwrap_or(f64::INFINITY),
            LedgerValue::Rational { value } => to_f64(value),
            LedgerValue::Real { value } => *value,
            LedgerValue::Log { coef, arg } => to_f64(coef) * to_f64(arg).ln(),
        }
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        LedgerValue::Integer { value: n.into() }
    }

    pub fn as_num(&self) -> Num {
        match self {
            LedgerValue::Integer { value } => Num::Exact(BigRational::from_integer(value.clone())),
            LedgerValue::Rational { value } => Num::Exact(value.clone()),
            LedgerValue::Real { value } => Num::Approx(*value),
            LedgerValue::Log { .. } => Num::Approx(self.to_f64()),
        }
    }
}

impl fmt::Display for LedgerValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LedgerValue::Integer { value } => write!(f, "{value}"),
            LedgerValue::Rational { value } => write!(f, "{}", format_rational(value)),
            LedgerValue::Real { value } => write!(f, "{value:e}"),
            LedgerValue::Log { coef, arg } => {
                write!(f, "{}·log({})", format_rational(coef), format_rational(arg))
            }
        }
    }
}

/// Arithmetic that stays exact as long as it can.
#[derive(Clone, Debug, PartialEq)]
pub enum Num {
    Exact(BigRational),
    Approx(f64),
}

impl Num {
    pub fn int(n: i64) -> Self {
        Num::Exact(BigRational::from_integer(n.into()))
    }

    pub fn big(n: BigInt) -> Self {
        Num::Exact(BigRational::from_integer(n))
    }

    /// Exact binary value of a float.
    pub fn from_f64(x: f64) -> Result<Self> {
        Ok(Num::Exact(rational_from_f64(x)?))
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(Num::Exact(parse_rational(s)?))
    }

    pub fn f(&self) -> f64 {
        match self {
            Num::Exact(q) => to_f64(q),
            Num::Approx(x) => *x,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Num::Exact(_))
    }

    fn zip(
        &self,
        o: &Num,
        exact: impl Fn(&BigRational, &BigRational) -> BigRational,
        approx: impl Fn(f64, f64) -> f64,
    ) -> Num {
        match (self, o) {
            (Num::Exact(a), Num::Exact(b)) => Num::Exact(exact(a, b)),
            _ => Num::Approx(approx(self.f(), o.f())),
        }
    }

    pub fn add(&self, o: &Num) -> Num {
        self.zip(o, |a, b| a + b, |a, b| a + b)
    }

    pub fn sub(&self, o: &Num) -> Num {
        self.zip(o, |a, b| a - b, |a, b| a - b)
    }

    pub fn mul(&self, o: &Num) -> Num {
        self.zip(o, |a, b| a * b, |a, b| a * b)
    }

    pub fn div(&self, o: &Num) -> Num {
        self.zip(o, |a, b| a / b, |a, b| a / b)
    }

    pub fn pow(&self, e: u32) -> Num {
        match self {
            Num::Exact(a) => Num::Exact(num_traits::pow(a.clone(), e as usize)),
            Num::Approx(x) => Num::Approx(x.powi(e as i32)),
        }
    }

    /// Exact when the argument is the square of a rational.
    pub fn sqrt(&self) -> Num {
        if let Num::Exact(q) = self {
            if !q.is_negative() {
                let (n, d) = (q.numer(), q.denom());
                let (rn, rd) = (n.sqrt(), d.sqrt());
                if &(&rn * &rn) == n && &(&rd * &rd) == d {
                    return Num::Exact(BigRational::new(rn, rd));
                }
            }
        }
        Num::Approx(self.f().sqrt())
    }

    pub fn cmp_num(&self, o: &Num) -> Ordering {
        match (self, o) {
            (Num::Exact(a), Num::Exact(b)) => a.cmp(b),
            _ => self.f().total_cmp(&o.f()),
        }
    }

    pub fn max(&self, o: &Num) -> Num {
        if self.cmp_num(o) == Ordering::Less {
            o.clone()
        } else {
            self.clone()
        }
    }

    pub fn min(&self, o: &Num) -> Num {
        if self.cmp_num(o) == Ordering::Greater {
            o.clone()
        } else {
            self.clone()
        }
    }

    /// Smallest integer `>= self`.
    pub fn ceil(&self) -> Result<BigInt> {
        match self {
            Num::Exact(q) => Ok(q.ceil().to_integer()),
            Num::Approx(x) => {
                let c = x.ceil();
                num_traits::FromPrimitive::from_f64(c)
                    .ok_or_else(|| Error::ledger(format!("cannot round {x} to an integer")))
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Num::Exact(q) => q.is_positive(),
            Num::Approx(x) => *x > 0.0,
        }
    }

    pub fn value(&self) -> LedgerValue {
        match self {
            Num::Exact(q) if q.denom().is_one() => LedgerValue::Integer {
                value: q.numer().clone(),
            },
            Num::Exact(q) => LedgerValue::Rational { value: q.clone() },
            Num::Approx(x) => LedgerValue::Real { value: *x },
        }
    }
}

/// Smallest integer `c` with `c^k >= n` (`n >= 0`, `k >= 1`).
pub fn int_root_ceil(n: &BigInt, k: u32) -> BigInt {
    if n <= &BigInt::one() {
        return n.clone().max(BigInt::zero());
    }
    let mut c = n.nth_root(k);
    while num_traits::pow(c.clone(), k as usize) < *n {
        c += 1;
    }
    c
}
