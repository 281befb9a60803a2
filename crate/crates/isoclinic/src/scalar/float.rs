use super::rational;
use super::{Rational, Ring, Scalar, ScalarError};
use num_complex::Complex64;
use num_traits::{FromPrimitive, ToPrimitive};
use serde_json::{json, Value};
use std::cmp::Ordering;

pub const TOLERANCE: f64 = 1e-9;

/// Complex double with tolerance-based zero test.
#[derive(Clone, Copy, Debug)]
pub struct Float(pub Complex64);

impl Float {
    pub fn new(re: f64, im: f64) -> Self {
        Float(Complex64::new(re, im))
    }
}

impl PartialEq for Float {
    fn eq(&self, other: &Self) -> bool {
        let scale = 1.0f64.max(self.0.norm()).max(other.0.norm());
        (self.0 - other.0).norm() <= TOLERANCE * scale
    }
}

impl Ring for Float {
    fn add(&self, other: &Self) -> Self {
        Float(self.0 + other.0)
    }
    fn sub(&self, other: &Self) -> Self {
        Float(self.0 - other.0)
    }
    fn mul(&self, other: &Self) -> Self {
        Float(self.0 * other.0)
    }
    fn neg(&self) -> Self {
        Float(-self.0)
    }
    fn is_zero(&self) -> bool {
        self.0.norm() <= TOLERANCE
    }
    fn mul_int(&self, n: i64) -> Self {
        Float(self.0 * n as f64)
    }
    fn div_int(&self, n: i64) -> Self {
        Float(self.0 / n as f64)
    }
}

impl Scalar for Float {
    const EXACT: bool = false;

    fn zero() -> Self {
        Float::new(0.0, 0.0)
    }
    fn one() -> Self {
        Float::new(1.0, 0.0)
    }
    fn from_int(n: i64) -> Self {
        Float::new(n as f64, 0.0)
    }
    fn from_rational(q: &Rational) -> Self {
        Float::new(q.to_f64().unwrap_or(f64::NAN), 0.0)
    }
    fn root_of_unity(order: u32, power: i64) -> Self {
        let a = 2.0 * std::f64::consts::PI * power.rem_euclid(order as i64) as f64 / order as f64;
        Float(Complex64::from_polar(1.0, a))
    }
    fn inv(&self) -> Option<Self> {
        (!self.is_zero()).then(|| Float(self.0.inv()))
    }
    fn to_complex(&self) -> Complex64 {
        self.0
    }
    fn as_rational(&self) -> Option<Rational> {
        if self.0.im.abs() > 1e-7 {
            return None;
        }
        // snap to the nearest fraction with a small denominator
        for den in 1..=720i64 {
            let num = (self.0.re * den as f64).round();
            if (num / den as f64 - self.0.re).abs() < 1e-7 {
                return Some(Rational::new((num as i64).into(), den.into()));
            }
        }
        Rational::from_f64(self.0.re)
    }
    fn sqrt_rational(q: &Rational) -> Result<Self, ScalarError> {
        Ok(Float(Complex64::new(q.to_f64().unwrap_or(f64::NAN), 0.0).sqrt()))
    }
    fn total_cmp(&self, other: &Self) -> Ordering {
        let key = |x: f64| (x / TOLERANCE).round();
        key(self.0.re)
            .total_cmp(&key(other.0.re))
            .then(key(self.0.im).total_cmp(&key(other.0.im)))
    }
    fn to_wire(&self) -> Value {
        json!([self.0.re, self.0.im])
    }
    fn from_wire(v: &Value) -> Result<Self, ScalarError> {
        match v {
            Value::Array(parts) if parts.len() == 2 => {
                let re = parts[0].as_f64();
                let im = parts[1].as_f64();
                match (re, im) {
                    (Some(re), Some(im)) => Ok(Float::new(re, im)),
                    _ => Err(ScalarError::Malformed(v.to_string())),
                }
            }
            Value::Number(n) => n.as_f64().map(|x| Float::new(x, 0.0)).ok_or_else(|| ScalarError::Malformed(v.to_string())),
            Value::Object(_) => {
                let c = super::Cyclotomic::from_wire(v)?;
                Ok(Float(c.to_complex()))
            }
            other => rational::parse(other.as_str().unwrap_or_default())
                .map(|q| Float::from_rational(&q))
                .map_err(|_| ScalarError::Malformed(other.to_string())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_equality() {
        assert_eq!(Float::new(1.0, 0.0), Float::new(1.0 + 1e-12, 0.0));
        assert_ne!(Float::new(1.0, 0.0), Float::new(1.0 + 1e-6, 0.0));
    }

    #[test]
    fn rational_snapping() {
        assert_eq!(Float::new(-1.5, 0.0).as_rational(), Some(rational::frac(-3, 2)));
        assert_eq!(Float::new(0.0, 1.0).as_rational(), None);
    }
}
