//! Connections on the projective line minus the origin: the global form of
//! a minimal oper, its restriction to the formal disk at 0, and the check
//! at infinity. Airy connections are the slope (1+h)/h case.

use crate::connection::{reduce_to_canonical, CanonicalForm, ConnectionError, FormalConnection, GaugeAtom, GaugeWord};
use crate::liealg::{Algebra, LieAlgebra};
use crate::linalg::{vneg, vscale, Matrix, Vector};
use crate::oper::{minimal_oper_form, IndexSet, OperError, OperForm};
use crate::scalar::{rational, Rational, Scalar};
use crate::series::VectorSeries;
use serde_json::{json, Value};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AiryError {
    #[error("p_-1 + v p_n is not regular semisimple")]
    LeadingNotRegularSemisimple,
    #[error("not in minimal form: {0}")]
    NotMinimalForm(String),
    #[error("malformed global connection: {0}")]
    Malformed(String),
    #[error(transparent)]
    Oper(OperError),
    #[error(transparent)]
    Connection(#[from] ConnectionError),
}

impl From<OperError> for AiryError {
    fn from(e: OperError) -> Self {
        match e {
            OperError::LeadingNotRegularSemisimple => AiryError::LeadingNotRegularSemisimple,
            OperError::OutsideSupport(i, j) => AiryError::NotMinimalForm(format!("coefficient ({i}, {j}) is outside -N <= l_ij <= -1")),
            OperError::Connection(c) => AiryError::Connection(c),
            other => AiryError::Oper(other),
        }
    }
}

/// d + A(t) dt with A a g-valued Laurent polynomial.
#[derive(Debug, Clone, PartialEq)]
pub struct GlobalConnection<F: Scalar> {
    algebra: Algebra,
    terms: BTreeMap<i64, Vector<F>>,
}

impl<F: Scalar> GlobalConnection<F> {
    pub fn new(algebra: Algebra, terms: BTreeMap<i64, Vector<F>>) -> Result<Self, AiryError> {
        for x in terms.values() {
            algebra.check_element(x).map_err(|e| AiryError::Malformed(e.to_string()))?;
        }
        let terms = terms.into_iter().filter(|(_, x)| x.iter().any(|c| !c.is_zero())).collect();
        Ok(GlobalConnection { algebra, terms })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    /// Coefficient of t^k dt.
    pub fn terms(&self) -> &BTreeMap<i64, Vector<F>> {
        &self.terms
    }

    pub fn series(&self) -> VectorSeries<F> {
        let mut s = VectorSeries::exact(1);
        for (&k, x) in &self.terms {
            s.add_term(k, x.clone());
        }
        s
    }

    /// Read back the oper coefficients from t^-2 p_-1 + sum c t^k p_i,
    /// with j = -k + 2 d_i - 3.
    pub fn to_minimal_oper(&self) -> Result<OperForm<F>, AiryError> {
        let g = &self.algebra;
        let rank = g.rank();
        let mut cols = vec![g.p_minus::<F>()];
        cols.extend((0..rank).map(|i| g.kostant::<F>(i)));
        let basis = Matrix::from_cols(g.dim(), &cols);
        let mut oper = OperForm::new(g.clone());
        let mut saw_p_minus = false;
        for (&k, x) in &self.terms {
            let c = basis
                .solve(x)
                .filter(|c| &basis.mul_vec(c) == x)
                .ok_or_else(|| AiryError::NotMinimalForm(format!("t^{k} coefficient is not in span(p_-1, p_1, ..., p_n)")))?;
            if !c[0].is_zero() {
                if k != -2 || !c[0].is_one() {
                    return Err(AiryError::NotMinimalForm("p_-1 must appear exactly once, as t^-2 p_-1".into()));
                }
                saw_p_minus = true;
            }
            for (i, v) in c.into_iter().enumerate().skip(1) {
                let d = g.degrees()[i - 1] as i64;
                oper.set(i, -k + 2 * d - 3, v)?;
            }
        }
        if !saw_p_minus {
            return Err(AiryError::NotMinimalForm("missing t^-2 p_-1".into()));
        }
        Ok(oper)
    }

    pub fn to_wire(&self) -> Value {
        let mut v = self.series().to_wire();
        v["algebra"] = json!(self.algebra.name());
        v["chart"] = json!("t");
        v["differential"] = json!("dt");
        v
    }

    pub fn from_wire(v: &Value) -> Result<Self, AiryError> {
        let bad = |m: &str| AiryError::Malformed(m.to_string());
        let name = v.get("algebra").and_then(Value::as_str).ok_or_else(|| bad("missing \"algebra\""))?;
        let algebra = LieAlgebra::from_name(name).map_err(|e| AiryError::Malformed(e.to_string()))?;
        if v.get("ramification").is_some_and(|r| r.as_u64() != Some(1)) {
            return Err(bad("global connections are unramified"));
        }
        let alg = algebra.clone();
        let s = VectorSeries::<F>::from_wire(v, |c| alg.element_from_wire(c)).map_err(|e| AiryError::Malformed(e.to_string()))?;
        if !s.is_exact() {
            return Err(bad("global connections have polynomial coefficients"));
        }
        Self::new(algebra, s.terms().map(|(k, x)| (k, x.clone())).collect())
    }
}

/// d + (t^-2 p_-1 + sum v_ij t^(-j+2d_i-3) p_i) dt from a minimal oper of
/// slope N/m.
pub fn globalize<F: Scalar>(oper: &OperForm<F>, n: i64, m: i64) -> Result<GlobalConnection<F>, AiryError> {
    let g = oper.algebra();
    let idx = IndexSet::new(g, n, m)?;
    let mut leading = BTreeMap::new();
    let mut lower = BTreeMap::new();
    for (&(i, j), v) in oper.coefficients() {
        match idx.ell.get(&(i, j)) {
            Some(&l) if l == -n => leading.insert((i, j), v.clone()),
            Some(_) => lower.insert((i, j), v.clone()),
            None => return Err(AiryError::NotMinimalForm(format!("coefficient ({i}, {j}) is outside -N <= l_ij <= -1"))),
        };
    }
    minimal_oper_form(g, n, m, &leading, &lower)?;
    let mut terms: BTreeMap<i64, Vector<F>> = BTreeMap::from([(-2, g.p_minus())]);
    for (&(i, j), v) in oper.coefficients() {
        let d = g.degrees()[i - 1] as i64;
        let k = -j + 2 * d - 3;
        let add = vscale(&g.kostant::<F>(i - 1), v);
        let slot = terms.entry(k).or_insert_with(|| g.zero());
        *slot = crate::linalg::vadd(slot, &add);
    }
    GlobalConnection::new(g.clone(), terms)
}

/// d + (t^-2 p_-1 + v t^-3 p_n + sum v_i t^-2 p_i) dt, the Airy family of
/// slope (1+h)/h; `lower` maps i to v_(i, 2d_i - 1).
pub fn airy_family<F: Scalar>(g: &Algebra, top: F, lower: &BTreeMap<usize, F>) -> Result<GlobalConnection<F>, AiryError> {
    let h = g.coxeter_number() as i64;
    let rank = g.rank();
    let mut oper = OperForm::new(g.clone()).with(rank, 2 * h, top)?;
    for (&i, v) in lower {
        if i == 0 || i > rank {
            return Err(AiryError::Oper(OperError::IndexOutOfRange(i, rank)));
        }
        let d = g.degrees()[i - 1] as i64;
        oper.set(i, 2 * d - 1, v.clone())?;
    }
    globalize(&oper, h + 1, h)
}

/// The instance v_(n,2h) = 1 with no lower terms.
pub fn ks_airy<F: Scalar>(g: &Algebra) -> Result<GlobalConnection<F>, AiryError> {
    airy_family(g, F::one(), &BTreeMap::new())
}

/// The connection on the punctured formal disk at 0, unramified.
pub fn restrict_to_zero<F: Scalar>(gc: &GlobalConnection<F>) -> Result<FormalConnection<F>, AiryError> {
    Ok(FormalConnection::from_dt(gc.algebra.clone(), &gc.series())?)
}

/// Canonical form at 0: pull back to u = t^(1/m), gauge by
/// rho_check(u^(N-m)) and reduce.
pub fn canonical_at_zero<F: Scalar>(gc: &GlobalConnection<F>) -> Result<CanonicalForm<F>, AiryError> {
    let oper = gc.to_minimal_oper()?;
    let (n, m) = oper.slope_parts();
    if n == 0 {
        return Err(AiryError::Oper(OperError::SlopeZero));
    }
    let word = GaugeWord::new(m as u32, vec![GaugeAtom::CocharacterPower { mu: gc.algebra.rho_check(), power: n - m }]);
    let u_form = restrict_to_zero(gc)?.gauge(&word)?;
    let h = gc.algebra.coxeter_number() as i64;
    let mut p = 1 + (h + 1) * n;
    let mut last = None;
    for _ in 0..5 {
        match reduce_to_canonical(&u_form.truncate(p)) {
            Ok(red) => return Ok(red.canonical),
            Err(ConnectionError::PrecisionUnderflow { needed, .. }) => {
                last = Some(ConnectionError::PrecisionUnderflow { precision: p, needed });
                p = 2 * p.max(needed.max(1));
            }
            Err(e) => return Err(e.into()),
        }
    }
    Err(last.expect("at least one attempt").into())
}

/// Behaviour at infinity in the chart s = 1/t, where t^k dt = -s^(-k-2) ds.
#[derive(Debug, Clone, PartialEq)]
pub struct InfinityReport<F: Scalar> {
    /// Coefficients of s^k ds.
    pub s_terms: BTreeMap<i64, Vector<F>>,
    /// At most a simple pole at s = 0.
    pub regular: bool,
    /// No pole at all; only then is trivial monodromy certified.
    pub holomorphic: bool,
    pub trivial_monodromy: bool,
    pub slope_at_zero: Rational,
}

impl<F: Scalar> InfinityReport<F> {
    pub fn to_wire(&self) -> Value {
        json!({
            "s_terms": self.s_terms.iter().map(|(k, x)| json!([k, x.iter().map(Scalar::to_wire).collect::<Vec<_>>()])).collect::<Vec<_>>(),
            "regular": self.regular,
            "holomorphic": self.holomorphic,
            "trivial_monodromy": if self.trivial_monodromy { json!(true) } else { json!("not certified") },
            "slope_at_zero": rational::format(&self.slope_at_zero),
        })
    }
}

pub fn infinity_check<F: Scalar>(gc: &GlobalConnection<F>) -> Result<InfinityReport<F>, AiryError> {
    let s_terms: BTreeMap<i64, Vector<F>> = gc.terms.iter().map(|(&k, x)| (-k - 2, vneg(x))).collect();
    let low = s_terms.keys().next().copied().unwrap_or(0);
    let holomorphic = low >= 0;
    let slope_at_zero = gc.to_minimal_oper()?.slope();
    Ok(InfinityReport { s_terms, regular: low >= -1, holomorphic, trivial_monodromy: holomorphic, slope_at_zero })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Cyclotomic, Ring};

    type C = Cyclotomic;

    fn alg(name: &str) -> Algebra {
        LieAlgebra::from_name(name).unwrap()
    }

    #[test]
    fn ks_airy_sl2_terms() {
        let g = alg("A1");
        let gc = ks_airy::<C>(&g).unwrap();
        let (f, e) = (g.basis::<C>(0), g.basis::<C>(2));
        assert_eq!(gc.terms(), &BTreeMap::from([(-3, e), (-2, f)]));
    }

    #[test]
    fn family_rejects_nilpotent_leading() {
        let g = alg("A1");
        assert_eq!(airy_family(&g, C::zero(), &BTreeMap::new()), Err(AiryError::LeadingNotRegularSemisimple));
    }

    #[test]
    fn sl3_family_any_lower_term() {
        let g = alg("A2");
        for c in [-3, 0, 2, 7] {
            let gc = airy_family(&g, C::one(), &BTreeMap::from([(1, C::from_int(c))])).unwrap();
            assert_eq!(gc.terms().keys().copied().collect::<Vec<_>>(), vec![-3, -2]);
        }
    }

    #[test]
    fn half_slope_globalization() {
        let g = alg("A1");
        let oper = OperForm::new(g.clone()).with(1, 2, C::from_int(5)).unwrap();
        let gc = globalize(&oper, 1, 2).unwrap();
        let (f, e) = (g.basis::<C>(0), g.basis::<C>(2));
        assert_eq!(gc.terms(), &BTreeMap::from([(-2, f), (-1, vscale(&e, &C::from_int(5)))]));
        let cf = canonical_at_zero(&gc).unwrap();
        assert_eq!(cf.slope(), rational::frac(1, 2));
        let inf = infinity_check(&gc).unwrap();
        assert!(inf.regular && !inf.holomorphic && !inf.trivial_monodromy);
    }

    #[test]
    fn sl2_airy_at_infinity() {
        let g = alg("A1");
        let inf = infinity_check(&ks_airy::<C>(&g).unwrap()).unwrap();
        let (f, e) = (g.basis::<C>(0), g.basis::<C>(2));
        assert_eq!(inf.s_terms, BTreeMap::from([(0, vneg(&f)), (1, vneg(&e))]));
        assert!(inf.holomorphic && inf.trivial_monodromy);
        assert_eq!(inf.slope_at_zero, rational::frac(3, 2));
    }

    #[test]
    fn restriction_matches_oper_reduction() {
        let g = alg("A1");
        let oper = OperForm::new(g.clone()).with(1, 4, C::one()).unwrap().with(1, 3, C::from_int(2)).unwrap();
        let gc = globalize(&oper, 3, 2).unwrap();
        let at_zero = canonical_at_zero(&gc).unwrap();
        let direct = crate::oper::oper_to_canonical(&oper).unwrap().canonical;
        assert!(at_zero.irregular_part_equal(&direct));
        assert_eq!(gc.to_minimal_oper().unwrap(), oper);
    }

    #[test]
    fn wire_round_trip() {
        let g = alg("A2");
        let gc = airy_family(&g, C::from_int(2), &BTreeMap::from([(1, C::from_int(1).div_int(3))])).unwrap();
        assert_eq!(GlobalConnection::<C>::from_wire(&gc.to_wire()).unwrap(), gc);
    }

    #[test]
    fn outside_support_is_not_minimal() {
        let g = alg("A1");
        let oper = OperForm::new(g.clone()).with(1, 4, C::one()).unwrap().with(1, 1, C::one()).unwrap();
        assert!(matches!(globalize(&oper, 3, 2), Err(AiryError::NotMinimalForm(_))));
    }
}
