use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::rational::{format_rational, parse_rational};
use crate::{Error, Result};

/// `y^2 = x^3 + a4 x + a6` over the rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EllipticCurveQ {
    a4: BigRational,
    a6: BigRational,
}

/// A rational point: the identity `O` or an affine pair.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ECPoint {
    Infinity,
    Affine { x: BigRational, y: BigRational },
}

impl ECPoint {
    pub fn affine(x: BigRational, y: BigRational) -> Self {
        ECPoint::Affine { x, y }
    }

    pub fn from_ints(x: i64, y: i64) -> Self {
        ECPoint::Affine {
            x: BigRational::from_integer(x.into()),
            y: BigRational::from_integer(y.into()),
        }
    }

    pub fn parse(x: &str, y: &str) -> Result<Self> {
        Ok(ECPoint::Affine {
            x: parse_rational(x)?,
            y: parse_rational(y)?,
        })
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ECPoint::Infinity)
    }

    pub fn x(&self) -> Option<&BigRational> {
        match self {
            ECPoint::Infinity => None,
            ECPoint::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&BigRational> {
        match self {
            ECPoint::Infinity => None,
            ECPoint::Affine { y, .. } => Some(y),
        }
    }

    /// Total bit size of the x-coordinate's numerator and denominator.
    pub fn x_bits(&self) -> u64 {
        match self {
            ECPoint::Infinity => 0,
            ECPoint::Affine { x, .. } => x.numer().bits() + x.denom().bits(),
        }
    }
}

impl fmt::Display for ECPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ECPoint::Infinity => write!(f, "O"),
            ECPoint::Affine { x, y } => {
                write!(f, "({}, {})", format_rational(x), format_rational(y))
            }
        }
    }
}

// Points travel through reports as `"O"` or `["x", "y"]` with exact
// rational strings.
impl Serialize for ECPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            ECPoint::Infinity => s.serialize_str("O"),
            ECPoint::Affine { x, y } => [format_rational(x), format_rational(y)].serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for ECPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Identity(String),
            Pair([String; 2]),
        }
        match Repr::deserialize(d)? {
            Repr::Identity(s) if s == "O" => Ok(ECPoint::Infinity),
            Repr::Identity(s) => Err(serde::de::Error::custom(format!(
                "expected \"O\" or a coordinate pair, got {s:?}"
            ))),
            Repr::Pair([x, y]) => ECPoint::parse(&x, &y).map_err(serde::de::Error::custom),
        }
    }
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl EllipticCurveQ {
    pub fn new(a4: BigRational, a6: BigRational) -> Result<Self> {
        let curve = EllipticCurveQ { a4, a6 };
        if curve.discriminant().is_zero() {
            return Err(Error::input(format!("singular curve {curve}")));
        }
        Ok(curve)
    }

    pub fn from_ints(a4: i64, a6: i64) -> Result<Self> {
        Self::new(rat(a4), rat(a6))
    }

    pub fn parse(a4: &str, a6: &str) -> Result<Self> {
        Self::new(parse_rational(a4)?, parse_rational(a6)?)
    }

    pub fn a4(&self) -> &BigRational {
        &self.a4
    }

    pub fn a6(&self) -> &BigRational {
        &self.a6
    }

    /// `-16 (4 a4^3 + 27 a6^2)`.
    pub fn discriminant(&self) -> BigRational {
        let a4_cubed = &self.a4 * &self.a4 * &self.a4;
        let a6_sq = &self.a6 * &self.a6;
        rat(-16) * (rat(4) * a4_cubed + rat(27) * a6_sq)
    }

    fn rhs(&self, x: &BigRational) -> BigRational {
        x * x * x + &self.a4 * x + &self.a6
    }

    pub fn contains(&self, p: &ECPoint) -> bool {
        match p {
            ECPoint::Infinity => true,
            ECPoint::Affine { x, y } => y * y == self.rhs(x),
        }
    }

    pub fn validate(&self, p: &ECPoint) -> Result<()> {
        if self.contains(p) {
            Ok(())
        } else {
            Err(Error::input(format!("point {p} is not on {self}")))
        }
    }

    pub fn point(&self, x: BigRational, y: BigRational) -> Result<ECPoint> {
        let p = ECPoint::Affine { x, y };
        self.validate(&p)?;
        Ok(p)
    }

    /// Chord-tangent addition, validating both inputs.
    pub fn add(&self, p: &ECPoint, q: &ECPoint) -> Result<ECPoint> {
        self.validate(p)?;
        self.validate(q)?;
        Ok(self.add_unchecked(p, q))
    }

    pub fn sub(&self, p: &ECPoint, q: &ECPoint) -> Result<ECPoint> {
        self.add(p, &self.neg(q))
    }

    pub fn neg(&self, p: &ECPoint) -> ECPoint {
        match p {
            ECPoint::Infinity => ECPoint::Infinity,
            ECPoint::Affine { x, y } => ECPoint::Affine { x: x.clone(), y: -y },
        }
    }

    pub(crate) fn add_unchecked(&self, p: &ECPoint, q: &ECPoint) -> ECPoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (ECPoint::Infinity, _) => return q.clone(),
            (_, ECPoint::Infinity) => return p.clone(),
            (ECPoint::Affine { x: x1, y: y1 }, ECPoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
        };
        let slope = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return ECPoint::Infinity;
            }
            (rat(3) * x1 * x1 + &self.a4) / (rat(2) * y1)
        } else {
            (y2 - y1) / (x2 - x1)
        };
        let x3 = &slope * &slope - x1 - x2;
        let y3 = &slope * (x1 - &x3) - y1;
        ECPoint::Affine { x: x3, y: y3 }
    }

    pub fn double(&self, p: &ECPoint) -> ECPoint {
        self.add_unchecked(p, p)
    }

    /// `[n]P` by double-and-add; negative `n` negates.
    pub fn mul(&self, p: &ECPoint, n: i64) -> Result<ECPoint> {
        self.validate(p)?;
        Ok(self.mul_unchecked(p, n))
    }

    pub(crate) fn mul_unchecked(&self, p: &ECPoint, n: i64) -> ECPoint {
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = ECPoint::Infinity;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add_unchecked(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.double(&base);
            }
        }
        acc
    }

    /// `sum_i [n_i] P_i`.
    pub fn combination(&self, points: &[ECPoint], coeffs: &[i64]) -> Result<ECPoint> {
        if points.len() != coeffs.len() {
            return Err(Error::input(format!(
                "{} generators but {} coefficients",
                points.len(),
                coeffs.len()
            )));
        }
        let mut acc = ECPoint::Infinity;
        for (p, &n) in points.iter().zip(coeffs) {
            self.validate(p)?;
            if n != 0 {
                acc = self.add_unchecked(&acc, &self.mul_unchecked(p, n));
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for EllipticCurveQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "y^2 = x^3 + ({})x + ({})",
            format_rational(&self.a4),
            format_rational(&self.a6)
        )
    }
}
