//! Scalar models: exact big rationals and plain `f64`, plus one shared
//! tolerance policy.

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational, always in lowest terms with a positive denominator.
pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative value {0}")]
    NegativeRoot(String),
    #[error("cannot compare an exact value with a float")]
    MixedModel,
    #[error("non-finite float result")]
    NonFinite,
    #[error("cannot parse {0:?} as a rational")]
    Parse(String),
}

/// Comparison policy for the float model. Exact values ignore it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TolerancePolicy {
    pub relative_epsilon: f64,
    pub absolute_epsilon: f64,
}

impl Default for TolerancePolicy {
    fn default() -> Self {
        TolerancePolicy {
            relative_epsilon: 1e-9,
            absolute_epsilon: 1e-12,
        }
    }
}

impl TolerancePolicy {
    /// Both epsilons zero.
    pub fn exact() -> Self {
        TolerancePolicy {
            relative_epsilon: 0.0,
            absolute_epsilon: 0.0,
        }
    }
}

/// A field element. Everything above this module is generic over it.
pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    /// Division that refuses a zero divisor.
    fn try_div(&self, rhs: &Self) -> Result<Self, NumericError>;
    /// A square root inside the model, if there is one.
    fn sqrt_opt(&self) -> Option<Self>;
    fn near(&self, other: &Self, policy: &TolerancePolicy) -> bool;
    /// Human-readable value, used in error messages and reports.
    fn render(&self) -> String;

    fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_i64(n)
            .try_div(&Self::from_i64(d))
            .expect("constant ratio with nonzero denominator")
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    fn near_zero(&self, policy: &TolerancePolicy) -> bool {
        self.near(&Self::zero(), policy)
    }
}

impl Scalar for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(v: i64) -> Self {
        Q::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn try_div(&self, rhs: &Self) -> Result<Self, NumericError> {
        if Zero::is_zero(rhs) {
            return Err(NumericError::DivisionByZero);
        }
        Ok(self / rhs)
    }
    fn sqrt_opt(&self) -> Option<Self> {
        sqrt_exact(self).ok().flatten()
    }
    fn near(&self, other: &Self, _policy: &TolerancePolicy) -> bool {
        self == other
    }
    fn render(&self) -> String {
        format_rational(self)
    }
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(v: i64) -> Self {
        v as f64
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn try_div(&self, rhs: &Self) -> Result<Self, NumericError> {
        if *rhs == 0.0 {
            return Err(NumericError::DivisionByZero);
        }
        let v = self / rhs;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(NumericError::NonFinite)
        }
    }
    fn sqrt_opt(&self) -> Option<Self> {
        if *self >= 0.0 {
            Some(self.sqrt())
        } else {
            None
        }
    }
    fn near(&self, other: &Self, policy: &TolerancePolicy) -> bool {
        let scale = self.abs().max(other.abs());
        (self - other).abs() <= policy.absolute_epsilon.max(policy.relative_epsilon * scale)
    }
    fn render(&self) -> String {
        format!("{self}")
    }
}

/// A scalar tagged with its model, for inputs whose model is only known at runtime.
#[derive(Debug, Clone, PartialEq)]
pub enum Number {
    Exact(Q),
    Approx(f64),
}

/// Compare two tagged scalars. Exact values compare exactly.
pub fn near_equal(a: &Number, b: &Number, policy: &TolerancePolicy) -> Result<bool, NumericError> {
    match (a, b) {
        (Number::Exact(x), Number::Exact(y)) => Ok(x == y),
        (Number::Approx(x), Number::Approx(y)) => Ok(x.near(y, policy)),
        _ => Err(NumericError::MixedModel),
    }
}

/// Nonnegative rational square root when numerator and denominator are both squares.
pub fn sqrt_exact(q: &Q) -> Result<Option<Q>, NumericError> {
    if q.is_negative() {
        return Err(NumericError::NegativeRoot(format_rational(q)));
    }
    let n = q.numer().sqrt();
    if &(&n * &n) != q.numer() {
        return Ok(None);
    }
    let d = q.denom().sqrt();
    if &(&d * &d) != q.denom() {
        return Ok(None);
    }
    Ok(Some(Q::new(n, d)))
}

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

/// Parse "num/den" or "num". Accepts a leading '-' or U+2212.
pub fn parse_rational(s: &str) -> Result<Q, NumericError> {
    let err = || NumericError::Parse(s.to_string());
    let t = s.trim();
    let (neg, body) = if let Some(rest) = t.strip_prefix('-') {
        (true, rest)
    } else if let Some(rest) = t.strip_prefix('\u{2212}') {
        (true, rest)
    } else {
        (false, t)
    };
    let digits = |p: &str| -> Result<BigInt, NumericError> {
        if p.is_empty() || !p.bytes().all(|b| b.is_ascii_digit()) {
            return Err(err());
        }
        p.parse::<BigInt>().map_err(|_| err())
    };
    let value = match body.split_once('/') {
        Some((n, d)) => {
            let d = digits(d)?;
            if d.is_zero() {
                return Err(err());
            }
            Q::new(digits(n)?, d)
        }
        None => Q::from_integer(digits(body)?),
    };
    Ok(if neg { -value } else { value })
}

/// "num/den", or just "num" when the denominator is 1.
pub fn format_rational(q: &Q) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Nearest float, good to a few ulps for the sizes used here.
pub fn to_f64(q: &Q) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn exact_comparison() {
        let p = TolerancePolicy::default();
        assert!(near_equal(&Number::Exact(qr(3, 7)), &Number::Exact(qr(6, 14)), &p).unwrap());
        assert!(near_equal(&Number::Approx(1.0), &Number::Approx(1.0 + 1e-15), &p).unwrap());
        assert!(!near_equal(&Number::Approx(1.0), &Number::Approx(1.001), &p).unwrap());
        assert_eq!(
            near_equal(&Number::Exact(q(1)), &Number::Approx(1.0), &p),
            Err(NumericError::MixedModel)
        );
    }

    #[test]
    fn square_roots() {
        assert_eq!(sqrt_exact(&q(7056)).unwrap(), Some(q(84)));
        assert_eq!(sqrt_exact(&qr(278784, 49)).unwrap(), Some(qr(528, 7)));
        assert_eq!(sqrt_exact(&q(2)).unwrap(), None);
        assert_eq!(sqrt_exact(&q(0)).unwrap(), Some(q(0)));
        assert!(sqrt_exact(&q(-4)).is_err());
    }

    #[test]
    fn division_by_zero_is_rejected() {
        assert_eq!(q(1).try_div(&q(0)), Err(NumericError::DivisionByZero));
        assert_eq!(1.0f64.try_div(&0.0), Err(NumericError::DivisionByZero));
    }

    #[test]
    fn parsing() {
        assert_eq!(parse_rational("-528/7").unwrap(), qr(-528, 7));
        assert_eq!(parse_rational("\u{2212}3").unwrap(), q(-3));
        assert_eq!(parse_rational("6/14").unwrap(), qr(3, 7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational("--1").is_err());
        assert_eq!(format_rational(&qr(-312, 7)), "-312/7");
        assert_eq!(format_rational(&qr(14, 7)), "2");
    }

    fn rational() -> impl Strategy<Value = Q> {
        (any::<i64>(), 1..i64::MAX).prop_map(|(n, d)| qr(n, d))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn field_axioms(a in rational(), b in rational(), c in rational()) {
            prop_assert_eq!((&a + &b) * &c, &a * &c + &b * &c);
            prop_assert_eq!((&a + &b) + &c, &a + (&b + &c));
            prop_assert_eq!(&a * &b, &b * &a);
            let s = &a * &b + &c;
            prop_assert!(num_integer::Integer::gcd(s.numer(), s.denom()).is_one());
            prop_assert!(s.denom().is_positive());
        }

        #[test]
        fn sqrt_of_square(r in rational()) {
            prop_assert_eq!(sqrt_exact(&(&r * &r)).unwrap(), Some(r.abs()));
        }

        #[test]
        fn format_parse_roundtrip(r in rational()) {
            prop_assert_eq!(parse_rational(&format_rational(&r)).unwrap(), r);
        }
    }
}
