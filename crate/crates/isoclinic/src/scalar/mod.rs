//! Coefficient fields: exact cyclotomic numbers and a floating complex fallback.

mod cyclotomic;
mod float;
pub mod rational;

pub use cyclotomic::Cyclotomic;
pub use float::Float;

use num_complex::Complex64;
use num_rational::BigRational;
use serde_json::Value;
use std::cmp::Ordering;
use std::fmt::Debug;

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ScalarError {
    #[error("malformed scalar: {0}")]
    Malformed(String),
    #[error("no square root of {0} in the supported cyclotomic fields")]
    NoSquareRoot(String),
}

/// Commutative ring operations shared by scalars and series, enough for
/// characteristic polynomials.
pub trait Ring: Clone + Debug + Send + Sync {
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn mul_int(&self, n: i64) -> Self;
    /// Division by a nonzero integer; the rings here all contain Q.
    fn div_int(&self, n: i64) -> Self;
}

pub trait Scalar: Ring + PartialEq + 'static {
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(n: i64) -> Self;
    fn from_rational(q: &Rational) -> Self;
    /// `zeta_order^power` with `zeta_order = exp(2 pi i / order)`.
    fn root_of_unity(order: u32, power: i64) -> Self;
    fn inv(&self) -> Option<Self>;
    fn to_complex(&self) -> Complex64;
    /// Rational value if the scalar is (numerically) rational.
    fn as_rational(&self) -> Option<Rational>;
    fn sqrt_rational(q: &Rational) -> Result<Self, ScalarError>;
    /// Deterministic total order used to sort roots and orbit labels.
    fn total_cmp(&self, other: &Self) -> Ordering;
    fn to_wire(&self) -> Value;
    fn from_wire(v: &Value) -> Result<Self, ScalarError>;

    fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv().expect("division by zero scalar"))
    }

    fn magnitude(&self) -> f64 {
        self.to_complex().norm()
    }

    fn is_one(&self) -> bool {
        self.sub(&Self::one()).is_zero()
    }

    fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }
}

/// Parse a JSON scalar in any accepted shape: `"p/q"`, an integer, or a
/// field-specific object.
pub fn parse_rational_value(v: &Value) -> Result<Rational, ScalarError> {
    match v {
        Value::String(s) => rational::parse(s),
        Value::Number(n) => n
            .as_i64()
            .map(|i| Rational::from_integer(i.into()))
            .ok_or_else(|| ScalarError::Malformed(format!("non-integer number {n}; use \"p/q\""))),
        other => Err(ScalarError::Malformed(other.to_string())),
    }
}
