//! Opers d + (p_-1 + sum v_ij t^(-j-1) p_i) dt: slopes, the index sets of
//! isoclinic opers, reduction to canonical form and the inverse map from
//! isoclinic canonical forms to minimal oper forms.

mod index;
mod minimal;

pub use index::{dim_match_check, ell, regular_element_in_piece, DimMatchReport, DimMatchRow, IndexSet};
pub use minimal::{canonical_to_minimal_oper, fiber_independence_check, minimal_oper_form};

use crate::connection::{reduce_to_canonical, CanonicalForm, ConnectionError, FormalConnection, GaugeAtom, GaugeWord};
use crate::liealg::{Algebra, LieAlgebra, LieError};
use crate::scalar::{rational, Rational, Scalar};
use crate::series::VectorSeries;
use serde_json::{json, Value};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OperError {
    #[error("N = {n} and m = {m} are not coprime positive integers")]
    NotCoprime { n: i64, m: i64 },
    #[error("no regular semisimple element found in the graded piece g_{0}")]
    NoRegularElement(i64),
    #[error("oper has slope zero (regular singular)")]
    SlopeZero,
    #[error("leading coefficient p_-1 + sum v p_i is not regular semisimple")]
    LeadingNotRegularSemisimple,
    #[error("block matrix at exponent {0} is singular")]
    SingularBlock(i64),
    #[error("canonical form is not isoclinic")]
    NotIsoclinic,
    #[error("canonical form does not come from a minimal oper: {0}")]
    NotMinimalShape(String),
    #[error("index p_{0} out of range 1..={1}")]
    IndexOutOfRange(usize, usize),
    #[error("coefficient (i, j) = ({0}, {1}) is outside the allowed support")]
    OutsideSupport(usize, i64),
    #[error("malformed oper: {0}")]
    Malformed(String),
    #[error(transparent)]
    Connection(#[from] ConnectionError),
}

impl From<LieError> for OperError {
    fn from(e: LieError) -> Self {
        OperError::Connection(e.into())
    }
}

/// Oper canonical form with coefficients v_(i,j) of t^(-j-1) p_i; the index
/// i runs over 1..=rank.
#[derive(Debug, Clone, PartialEq)]
pub struct OperForm<F: Scalar> {
    algebra: Algebra,
    coefficients: BTreeMap<(usize, i64), F>,
}

impl<F: Scalar> OperForm<F> {
    pub fn new(algebra: Algebra) -> Self {
        OperForm { algebra, coefficients: BTreeMap::new() }
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn set(&mut self, i: usize, j: i64, v: F) -> Result<(), OperError> {
        let n = self.algebra.rank();
        if i == 0 || i > n {
            return Err(OperError::IndexOutOfRange(i, n));
        }
        if v.is_zero() {
            self.coefficients.remove(&(i, j));
        } else {
            self.coefficients.insert((i, j), v);
        }
        Ok(())
    }

    pub fn with(mut self, i: usize, j: i64, v: F) -> Result<Self, OperError> {
        self.set(i, j, v)?;
        Ok(self)
    }

    pub fn get(&self, i: usize, j: i64) -> F {
        self.coefficients.get(&(i, j)).cloned().unwrap_or_else(F::zero)
    }

    pub fn coefficients(&self) -> &BTreeMap<(usize, i64), F> {
        &self.coefficients
    }

    /// sup(0, max_i (-ord v_i / d_i - 1)).
    pub fn slope(&self) -> Rational {
        let degrees = self.algebra.degrees();
        let mut s = rational::int(0);
        for &(i, j) in self.coefficients.keys() {
            let cand = rational::frac(j + 1, degrees[i - 1] as i64) - rational::int(1);
            if cand > s {
                s = cand;
            }
        }
        s
    }

    /// The oper as a connection, d + A(t) dt over the unramified disk.
    pub fn to_connection(&self) -> Result<FormalConnection<F>, OperError> {
        let alg = &self.algebra;
        let mut a = VectorSeries::exact(1);
        a.add_term(0, alg.p_minus());
        for (&(i, j), v) in &self.coefficients {
            a.add_term(-j - 1, crate::linalg::vscale(&alg.kostant::<F>(i - 1), v));
        }
        Ok(FormalConnection::from_dt(alg.clone(), &a)?)
    }

    /// Slope as N/m in lowest terms.
    pub fn slope_parts(&self) -> (i64, i64) {
        let s = self.slope();
        (numer(&s), denom(&s))
    }

    /// Pull back to u = t^(1/m) and gauge by rho_check(u^(N+m)):
    /// m u^-N p_-1 + sum m v_ij u^(l_ij) p_i - (N+m) rho_check, against du/u.
    pub fn u_form(&self) -> Result<(FormalConnection<F>, GaugeWord<F>), OperError> {
        let (n, m) = self.slope_parts();
        if n == 0 {
            return Err(OperError::SlopeZero);
        }
        let word = GaugeWord::new(m as u32, vec![GaugeAtom::CocharacterPower { mu: self.algebra.rho_check(), power: n + m }]);
        let conn = self.to_connection()?.gauge(&word)?;
        Ok((conn, word))
    }

    pub fn to_wire(&self) -> Value {
        json!({
            "algebra": self.algebra.name(),
            "coefficients": self.coefficients.iter().map(|(&(i, j), v)| json!([i, j, v.to_wire()])).collect::<Vec<_>>(),
        })
    }

    pub fn from_wire(v: &Value) -> Result<Self, OperError> {
        let bad = |m: &str| OperError::Malformed(m.to_string());
        let name = v.get("algebra").and_then(Value::as_str).ok_or_else(|| bad("missing \"algebra\""))?;
        let algebra = LieAlgebra::from_name(name).map_err(|e| OperError::Malformed(e.to_string()))?;
        let mut out = OperForm::new(algebra);
        let coeffs = v.get("coefficients").and_then(Value::as_array).ok_or_else(|| bad("missing \"coefficients\" array"))?;
        for c in coeffs {
            let t = c.as_array().filter(|t| t.len() == 3).ok_or_else(|| bad("each coefficient is [i, j, scalar]"))?;
            let i = t[0].as_u64().ok_or_else(|| bad("i must be a positive integer"))? as usize;
            let j = t[1].as_i64().ok_or_else(|| bad("j must be an integer"))?;
            let x = F::from_wire(&t[2]).map_err(|e| OperError::Malformed(e.to_string()))?;
            out.set(i, j, x)?;
        }
        Ok(out)
    }

    /// Human-readable form over t, exponent -j-1.
    pub fn display_t(&self) -> String {
        let mut parts = vec!["p_-1".to_string()];
        for (&(i, j), v) in &self.coefficients {
            let w = v.to_wire();
            let shown = w.as_str().map_or_else(|| w.to_string(), str::to_string);
            parts.push(format!("({shown}) t^{} p_{i}", -j - 1));
        }
        format!("d + ({}) dt", parts.join(" + "))
    }
}

fn numer(q: &Rational) -> i64 {
    rational::to_i64(&Rational::from_integer(q.numer().clone())).expect("small slope")
}

fn denom(q: &Rational) -> i64 {
    rational::denom_u32(q) as i64
}

/// Result of reducing an oper: the u-form it was built from and its
/// canonical form.
#[derive(Debug, Clone)]
pub struct OperReduction<F: Scalar> {
    pub n: i64,
    pub m: i64,
    pub u_form: FormalConnection<F>,
    pub canonical: CanonicalForm<F>,
    /// Gauge word from the u-form to the canonical form.
    pub word: GaugeWord<F>,
}

/// Reduce an oper with positive slope to canonical form, retrying with more
/// terms of the u-form whenever the reduction reports a precision shortfall.
pub fn oper_to_canonical<F: Scalar>(oper: &OperForm<F>) -> Result<OperReduction<F>, OperError> {
    oper_to_canonical_at(oper, None)
}

/// As `oper_to_canonical`, reading the u-form only below `precision` when
/// given.
pub fn oper_to_canonical_at<F: Scalar>(oper: &OperForm<F>, precision: Option<i64>) -> Result<OperReduction<F>, OperError> {
    let (n, m) = oper.slope_parts();
    let (u_form, _) = oper.u_form()?;
    let h = oper.algebra.coxeter_number() as i64;
    let mut p = precision.unwrap_or(1 + (h + 1) * n);
    let attempts = if precision.is_some() { 1 } else { 5 };
    let mut last = None;
    for _ in 0..attempts {
        match reduce_to_canonical(&u_form.truncate(p)) {
            Ok(red) => return Ok(OperReduction { n, m, u_form, canonical: red.canonical, word: red.word }),
            Err(ConnectionError::PrecisionUnderflow { needed, .. }) => {
                last = Some(ConnectionError::PrecisionUnderflow { precision: p, needed });
                p = 2 * p.max(needed.max(1));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Err(last.expect("at least one attempt").into())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{vadd, vscale};
    use crate::scalar::{Cyclotomic, Ring};

    type C = Cyclotomic;

    fn oper(name: &str, coeffs: &[(usize, i64, i64)]) -> OperForm<C> {
        let mut o = OperForm::new(LieAlgebra::from_name(name).unwrap());
        for &(i, j, v) in coeffs {
            o.set(i, j, C::from_int(v)).unwrap();
        }
        o
    }

    #[test]
    fn slope_examples() {
        assert_eq!(oper("A1", &[(1, 2, 1)]).slope(), rational::frac(1, 2));
        assert_eq!(oper("A1", &[]).slope(), rational::int(0));
        assert_eq!(oper("A2", &[(2, 6, 1)]).slope(), rational::frac(4, 3));
        assert_eq!(oper("A2", &[(2, 6, 1)]).slope_parts(), (4, 3));
    }

    #[test]
    fn u_form_matches_the_exponent_formula() {
        // l_ij = (d_i - 1) N + m (d_i - 1 - j)
        let o = oper("A2", &[(2, 6, 1), (1, 3, 2), (2, 5, 3), (1, 0, 5)]);
        let (n, m) = (4, 3);
        let (u, _) = o.u_form().unwrap();
        let g = o.algebra();
        let mut expected = VectorSeries::<C>::exact(3);
        expected.add_term(-n, vscale(&g.p_minus(), &C::from_int(m)));
        for (&(i, j), v) in o.coefficients() {
            let d = g.degrees()[i - 1] as i64;
            let l = (d - 1) * n + m * (d - 1 - j);
            expected.add_term(l, vscale(&g.kostant::<C>(i - 1), &v.mul_int(m)));
        }
        expected.add_term(0, vscale(&g.rho_check(), &C::from_int(-(n + m))));
        assert_eq!(u.coefficient(), &expected);
    }

    #[test]
    fn airy_oper_is_isoclinic_with_slope_three_halves() {
        let o = oper("A1", &[(1, 4, 1)]);
        let red = oper_to_canonical(&o).unwrap();
        let cf = &red.canonical;
        assert_eq!(cf.slope(), rational::frac(3, 2));
        assert!(cf.is_isoclinic().unwrap());
        // u-leading term m (f + e); ad eigenvalues of f + e are 0, +-2
        let g = o.algebra();
        let fe = vadd(&g.p_minus::<C>(), &g.kostant::<C>(0));
        assert_eq!(cf.leading_term().unwrap(), &vscale(&fe, &C::from_int(2)));
        assert!(vis_zero_opt(cf.residue()));
    }

    fn vis_zero_opt(v: Option<&Vec<C>>) -> bool {
        v.is_some_and(|v| crate::linalg::vis_zero(v))
    }

    #[test]
    fn sl3_oper_at_slope_four_thirds() {
        let o = oper("A2", &[(2, 6, 1)]);
        let red = oper_to_canonical(&o).unwrap();
        assert_eq!(red.canonical.slope(), rational::frac(4, 3));
        assert!(red.canonical.is_isoclinic().unwrap());
        assert!(vis_zero_opt(red.canonical.residue()));
    }

    #[test]
    fn wire_round_trip() {
        let o = oper("A2", &[(2, 6, 1), (1, 3, -2)]);
        assert_eq!(OperForm::<C>::from_wire(&o.to_wire()).unwrap(), o);
    }
}
