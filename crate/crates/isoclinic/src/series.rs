//! Truncated Laurent series in u = t^(1/m) with tracked precision.

use crate::linalg::{vis_zero, Vector};
use crate::scalar::{Ring, Scalar};
use num_integer::Integer;
use serde_json::{json, Value};
use std::collections::BTreeMap;
use std::fmt::Debug;

/// Precision used for series that are known exactly.
pub const EXACT: i64 = i64::MAX / 8;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SeriesError {
    #[error("coefficient of u^{requested} is beyond the known precision {precision}")]
    PrecisionUnderflow { requested: i64, precision: i64 },
    #[error("series exponents are not divisible by {0}")]
    NotRestrictable(u32),
    #[error("malformed series: {0}")]
    Malformed(String),
}

/// Coefficients a series may carry: scalars or Lie algebra vectors.
pub trait Coefficient: Clone + Debug + PartialEq + Send + Sync {
    type Field: Scalar;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn sub(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, s: &Self::Field) -> Self;
    fn to_wire(&self) -> Value;
}

impl<F: Scalar> Coefficient for F {
    type Field = F;
    fn is_zero(&self) -> bool {
        Ring::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        Ring::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Ring::sub(self, other)
    }
    fn neg(&self) -> Self {
        Ring::neg(self)
    }
    fn scale(&self, s: &F) -> Self {
        Ring::mul(self, s)
    }
    fn to_wire(&self) -> Value {
        Scalar::to_wire(self)
    }
}

impl<F: Scalar> Coefficient for Vec<F> {
    type Field = F;
    fn is_zero(&self) -> bool {
        vis_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        crate::linalg::vadd(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        crate::linalg::vsub(self, other)
    }
    fn neg(&self) -> Self {
        crate::linalg::vneg(self)
    }
    fn scale(&self, s: &F) -> Self {
        crate::linalg::vscale(self, s)
    }
    fn to_wire(&self) -> Value {
        Value::Array(self.iter().map(Scalar::to_wire).collect())
    }
}

/// Sum of c_k u^k for k < precision; coefficients at k >= precision are
/// unknown.
#[derive(Debug, Clone, PartialEq)]
pub struct Puiseux<C> {
    ramification: u32,
    terms: BTreeMap<i64, C>,
    precision: i64,
}

pub type Series<F> = Puiseux<F>;
pub type VectorSeries<F> = Puiseux<Vector<F>>;

impl<C: Coefficient> Puiseux<C> {
    pub fn new(ramification: u32, precision: i64) -> Self {
        assert!(ramification >= 1, "ramification must be positive");
        Puiseux { ramification, terms: BTreeMap::new(), precision }
    }

    pub fn exact(ramification: u32) -> Self {
        Self::new(ramification, EXACT)
    }

    pub fn monomial(ramification: u32, k: i64, c: C, precision: i64) -> Self {
        let mut s = Self::new(ramification, precision);
        s.add_term(k, c);
        s
    }

    pub fn ramification(&self) -> u32 {
        self.ramification
    }

    pub fn precision(&self) -> i64 {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision >= EXACT / 2
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn exponents(&self) -> Vec<i64> {
        self.terms.keys().copied().collect()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Add c u^k in place, dropping it if it is beyond the precision.
    pub fn add_term(&mut self, k: i64, c: C) {
        if k >= self.precision || c.is_zero() {
            return;
        }
        match self.terms.remove(&k) {
            Some(old) => {
                let s = old.add(&c);
                if !s.is_zero() {
                    self.terms.insert(k, s);
                }
            }
            None => {
                self.terms.insert(k, c);
            }
        }
    }

    pub fn coeff(&self, k: i64) -> Result<Option<&C>, SeriesError> {
        if k >= self.precision {
            return Err(SeriesError::PrecisionUnderflow { requested: k, precision: self.precision });
        }
        Ok(self.terms.get(&k))
    }

    pub fn truncate(&self, precision: i64) -> Self {
        let p = precision.min(self.precision);
        Puiseux {
            ramification: self.ramification,
            terms: self.terms.range(..p).map(|(k, c)| (*k, c.clone())).collect(),
            precision: p,
        }
    }

    pub fn with_precision(mut self, precision: i64) -> Self {
        self.precision = precision;
        self.terms.retain(|k, _| *k < precision);
        self
    }

    fn lifted(&self, ramification: u32) -> Self {
        if ramification == self.ramification {
            return self.clone();
        }
        self.reramify(ramification / self.ramification)
    }

    pub fn add(&self, other: &Self) -> Self {
        let ram = self.ramification.lcm(&other.ramification);
        let (a, b) = (self.lifted(ram), other.lifted(ram));
        let mut out = a.truncate(b.precision);
        for (k, c) in b.terms.range(..out.precision) {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, s: &C::Field) -> Self {
        let mut out = Self::new(self.ramification, self.precision);
        for (k, c) in &self.terms {
            out.add_term(*k, c.scale(s));
        }
        out
    }

    pub fn map<D: Coefficient>(&self, f: impl Fn(&C) -> D) -> Puiseux<D> {
        let mut out = Puiseux::new(self.ramification, self.precision);
        for (k, c) in &self.terms {
            out.add_term(*k, f(c));
        }
        out
    }

    /// Multiply by u^k.
    pub fn shift(&self, k: i64) -> Self {
        Puiseux {
            ramification: self.ramification,
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
            precision: if self.is_exact() { EXACT } else { self.precision + k },
        }
    }

    /// u d/du.
    pub fn log_derivative(&self) -> Self {
        let mut out = Self::new(self.ramification, self.precision);
        for (k, c) in &self.terms {
            out.add_term(*k, c.scale(&C::Field::from_int(*k)));
        }
        out
    }

    /// Coefficient of u^0, i.e. the residue of the series times du/u;
    /// `None` when it vanishes.
    pub fn residue(&self) -> Result<Option<C>, SeriesError> {
        Ok(self.coeff(0)?.cloned())
    }

    /// Substitute u = w^k.
    pub fn reramify(&self, k: u32) -> Self {
        assert!(k >= 1);
        let k64 = k as i64;
        Puiseux {
            ramification: self.ramification * k,
            terms: self.terms.iter().map(|(e, c)| (e * k64, c.clone())).collect(),
            precision: if self.is_exact() { EXACT } else { self.precision * k64 },
        }
    }

    /// Inverse of `reramify(k)`.
    pub fn restrict(&self, k: u32) -> Result<Self, SeriesError> {
        let k64 = k as i64;
        if !self.ramification.is_multiple_of(k) || self.terms.keys().any(|e| e % k64 != 0) {
            return Err(SeriesError::NotRestrictable(k));
        }
        Ok(Puiseux {
            ramification: self.ramification / k,
            terms: self.terms.iter().map(|(e, c)| (e / k64, c.clone())).collect(),
            precision: if self.is_exact() { EXACT } else { Integer::div_ceil(&self.precision, &k64) },
        })
    }

    /// Agreement on all exponents known to both, after a common
    /// re-ramification.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let ram = self.ramification.lcm(&other.ramification);
        let (a, b) = (self.lifted(ram), other.lifted(ram));
        let p = a.precision.min(b.precision);
        a.truncate(p).terms == b.truncate(p).terms
    }

    pub fn to_wire(&self) -> Value {
        let terms: Vec<Value> = self.terms.iter().map(|(k, c)| json!([k, c.to_wire()])).collect();
        let mut obj = json!({ "ramification": self.ramification, "terms": terms });
        if !self.is_exact() {
            obj["precision"] = json!(self.precision);
        }
        obj
    }

    pub fn from_wire(v: &Value, parse: impl Fn(&Value) -> Result<C, String>) -> Result<Self, SeriesError> {
        let bad = |m: &str| SeriesError::Malformed(m.to_string());
        let ram = v.get("ramification").map_or(Some(1), Value::as_u64).ok_or_else(|| bad("ramification must be a positive integer"))?;
        if ram == 0 {
            return Err(bad("ramification must be a positive integer"));
        }
        let precision = match v.get("precision") {
            None | Some(Value::Null) => EXACT,
            Some(p) => p.as_i64().ok_or_else(|| bad("precision must be an integer"))?,
        };
        let mut out = Self::new(ram as u32, precision);
        let terms = v.get("terms").and_then(Value::as_array).ok_or_else(|| bad("missing \"terms\" array"))?;
        for t in terms {
            let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("each term is [exponent, coefficient]"))?;
            let k = pair[0].as_i64().ok_or_else(|| bad("exponent must be an integer"))?;
            out.add_term(k, parse(&pair[1]).map_err(SeriesError::Malformed)?);
        }
        Ok(out)
    }
}

impl<F: Scalar> Puiseux<F> {
    pub fn constant(ramification: u32, c: F) -> Self {
        Self::monomial(ramification, 0, c, EXACT)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let ram = self.ramification.lcm(&other.ramification);
        let (a, b) = (self.lifted(ram), other.lifted(ram));
        let va = a.valuation().unwrap_or(a.precision);
        let vb = b.valuation().unwrap_or(b.precision);
        let mut p = EXACT;
        if !a.is_exact() {
            p = p.min(a.precision.saturating_add(vb));
        }
        if !b.is_exact() {
            p = p.min(b.precision.saturating_add(va));
        }
        let mut out = Puiseux::new(ram, p);
        for (i, x) in &a.terms {
            for (j, y) in &b.terms {
                out.add_term(i + j, Ring::mul(x, y));
            }
        }
        out
    }

    /// Scalar series times a vector.
    pub fn times_vector(&self, v: &[F]) -> VectorSeries<F> {
        self.map(|c| crate::linalg::vscale(v, c))
    }
}

impl<F: Scalar> Puiseux<Vector<F>> {
    /// Multiply every coefficient by a scalar series.
    pub fn scale_by_series(&self, s: &Series<F>) -> Self {
        let mut out: VectorSeries<F> = Puiseux::new(self.ramification, EXACT);
        for (k, c) in s.terms() {
            let part = self.shift(k).scale(c);
            out = out.add(&part);
        }
        let vs = self.valuation().unwrap_or(self.precision);
        let vt = s.valuation().unwrap_or(s.precision);
        let mut p = EXACT;
        if !self.is_exact() {
            p = p.min(self.precision.saturating_add(vt));
        }
        if !s.is_exact() {
            p = p.min(s.precision.saturating_add(vs));
        }
        out.with_precision(p)
    }

    /// Apply a linear map to every coefficient.
    pub fn map_linear(&self, m: &crate::linalg::Matrix<F>) -> Self {
        self.map(|c| m.mul_vec(c))
    }

    pub fn component(&self, i: usize) -> Series<F> {
        self.map(|c| c[i].clone())
    }
}

impl<F: Scalar> Ring for Puiseux<F> {
    fn add(&self, other: &Self) -> Self {
        Puiseux::add(self, other)
    }
    fn sub(&self, other: &Self) -> Self {
        Puiseux::sub(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        Puiseux::mul(self, other)
    }
    fn neg(&self) -> Self {
        Puiseux::neg(self)
    }
    fn is_zero(&self) -> bool {
        Puiseux::is_zero(self)
    }
    fn mul_int(&self, n: i64) -> Self {
        self.scale(&F::from_int(n))
    }
    fn div_int(&self, n: i64) -> Self {
        self.scale(&F::from_int(1).div_int(n))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Cyclotomic, Float};

    type C = Cyclotomic;

    fn mono(k: i64, c: i64) -> Series<C> {
        Series::monomial(1, k, C::from_int(c), EXACT)
    }

    #[test]
    fn monomial_product() {
        assert_eq!(mono(-3, 1).mul(&mono(2, 1)), mono(-1, 1));
    }

    #[test]
    fn log_derivative_and_residue() {
        assert_eq!(mono(5, 1).log_derivative(), mono(5, 5));
        let s = mono(-1, 3).add(&mono(0, 7));
        assert_eq!(s.residue().unwrap(), Some(C::from_int(7)));
    }

    #[test]
    fn precision_propagates_through_products() {
        let a = mono(-2, 1).add(&mono(1, 1)).with_precision(3);
        let b = mono(1, 2).with_precision(4);
        // a known to 3, b valuation 1 -> 4; b known to 4, a valuation -2 -> 2
        assert_eq!(a.mul(&b).precision(), 2);
        assert!(matches!(a.coeff(3), Err(SeriesError::PrecisionUnderflow { .. })));
    }

    #[test]
    fn reramify_then_restrict_is_identity() {
        let s = mono(-3, 2).add(&mono(4, -1)).with_precision(6);
        let r = s.reramify(3);
        assert_eq!(r.ramification(), 3);
        assert_eq!(r.restrict(3).unwrap(), s);
        assert!(r.add(&Series::monomial(3, 1, C::one(), EXACT)).restrict(3).is_err());
    }

    #[test]
    fn mixed_ramification_addition() {
        let half = Series::monomial(2, 1, C::one(), EXACT);
        let whole = mono(1, 1);
        let s = half.add(&whole);
        assert_eq!(s.ramification(), 2);
        assert_eq!(s.exponents(), vec![1, 2]);
    }

    #[test]
    fn wire_round_trip() {
        let s = mono(-2, 3).add(&mono(1, -1)).with_precision(5);
        let back = Series::<C>::from_wire(&s.to_wire(), |v| C::from_wire(v).map_err(|e| e.to_string())).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn float_and_exact_products_agree() {
        let a = mono(-1, 2).add(&mono(0, 3)).add(&mono(2, -5));
        let b = mono(1, 7).add(&mono(3, 1));
        let exact = a.mul(&b);
        let fa: Series<Float> = a.map(|c| Float(c.to_complex()));
        let fb: Series<Float> = b.map(|c| Float(c.to_complex()));
        let float = fa.mul(&fb);
        assert_eq!(float.exponents(), exact.exponents());
        for (k, c) in exact.terms() {
            assert_eq!(*float.coeff(k).unwrap().unwrap(), Float(c.to_complex()));
        }
    }
}
