//! Exact rational arithmetic for lattice parameters.
//!
//! Every quantity that decides a verdict (lattice constants, the `p/q`
//! density split, matrix entries on the exact path) is kept as a ratio of
//! unbounded integers, so reduction to lowest terms never overflows and
//! equality tests are exact. Floating point only enters when a value is
//! handed to the numeric scan.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RationalError {
    #[error("denominator must be nonzero")]
    ZeroDenominator,
    #[error(
        "'{input}' is not an exact rational; write num/den (e.g. 1/3) or an integer. \
         Decimals are rejected because the p/q density split must be exact"
    )]
    Parse { input: String },
    #[error("expected a positive value, got {got}")]
    NotPositive { got: String },
}

/// Arbitrary-precision rational, always in lowest terms with positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(BigRational);

impl Rational {
    /// Reduces `num/den` to lowest terms. Fails only on a zero denominator.
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Result<Self, RationalError> {
        let den = den.into();
        if den.is_zero() {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num.into(), den)))
    }

    pub fn integer(n: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(n.into()))
    }

    /// Shorthand for small literal fractions.
    ///
    /// Panics if `den == 0`; use [`Rational::new`] for untrusted input.
    pub fn frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "Rational::frac requires a nonzero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn floor_int(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    pub fn ceil_int(&self) -> BigInt {
        self.0.ceil().to_integer()
    }

    /// Euclidean remainder into `[0, period)`. `period` must be positive.
    pub fn mod_floor(&self, period: &Rational) -> Rational {
        debug_assert!(period.is_positive());
        let quot = Rational((&self.0 / &period.0).floor());
        self - &(period * &quot)
    }

    pub fn to_f64(&self) -> f64 {
        match self.0.to_f64() {
            Some(v) if v.is_finite() || self.0.denom().is_one() => v,
            _ => {
                // numerator and denominator both overflow f64: rescale by a
                // common power of two first
                let shift = (self.0.denom().bits() as i64 - 64).max(0) as u64;
                let num = self.0.numer() >> shift;
                let den = self.0.denom() >> shift;
                num.to_f64().unwrap_or(f64::NAN) / den.to_f64().unwrap_or(f64::NAN)
            }
        }
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::integer(n)
    }
}

macro_rules! impl_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational(self.0.$method(&rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational((&self.0).$method(rhs.0))
            }
        }
    };
}

impl_binop!(Add, add);
impl_binop!(Sub, sub);
impl_binop!(Mul, mul);
impl_binop!(Div, div);

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = RationalError;

    /// Accepts `num/den` or a bare integer. Anything else (notably decimal
    /// or exponent notation) is rejected so callers cannot silently lose
    /// exactness.
    fn from_str(s: &str) -> Result<Self, RationalError> {
        let parse_err = || RationalError::Parse { input: s.to_string() };
        let trimmed = s.trim();
        if trimmed.contains(['.', 'e', 'E']) {
            return Err(parse_err());
        }
        let (num_str, den_str) = match trimmed.split_once('/') {
            Some((n, d)) => (n.trim(), d.trim()),
            None => (trimmed, "1"),
        };
        let num: BigInt = num_str.parse().map_err(|_| parse_err())?;
        let den: BigInt = den_str.parse().map_err(|_| parse_err())?;
        if den.is_zero() {
            return Err(RationalError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num, den)))
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The reduced fraction `alpha * beta = p/q` that drives the whole analysis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityFraction {
    pub p: BigInt,
    pub q: BigInt,
    /// `p <= q`, i.e. the lattice is not denser than critical.
    pub subcritical: bool,
}

/// Splits `alpha * beta` into coprime `p/q` and reports whether `p <= q`.
pub fn density_fraction(
    alpha: &Rational,
    beta: &Rational,
) -> Result<DensityFraction, RationalError> {
    for v in [alpha, beta] {
        if !v.is_positive() {
            return Err(RationalError::NotPositive { got: v.to_string() });
        }
    }
    let product = alpha * beta;
    let p = product.numer().clone();
    let q = product.denom().clone();
    let subcritical = p <= q;
    Ok(DensityFraction { p, q, subcritical })
}
