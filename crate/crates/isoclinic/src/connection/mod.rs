//! Formal connections d + A(u) du/u over a ramified disk, gauge words and
//! the reduction to canonical form.

mod canonical;
mod reduce;

pub use canonical::{CanonicalForm, CanonicalTerm, Descent, RefinedLeadingTerms, ZReduction};
pub use reduce::{reduce_to_canonical, Reduction};

use crate::liealg::{Algebra, LieAlgebra, LieError};
use crate::linalg::{vneg, vscale, Matrix, Vector};
use crate::scalar::{rational, Rational, Scalar};
use crate::series::{SeriesError, VectorSeries};
use serde_json::{json, Value};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConnectionError {
    #[error("gauge argument is not ad-nilpotent")]
    NotNilpotent,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error("coefficients known only below u^{precision}; need more terms (at least {needed})")]
    PrecisionUnderflow { precision: i64, needed: i64 },
    #[error("spectrum does not split over the coefficient field")]
    NonSplitSpectrum,
    #[error("reduction did not stabilise after {0} stages")]
    StageLimitExceeded(usize),
    #[error("cocharacter power produces a non-integral exponent")]
    NonIntegralShift,
    #[error("gauge by a non-nilpotent element needs a truncated connection")]
    InfiniteExpansion,
    #[error("coefficient has length {got}, algebra dimension is {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("malformed connection: {0}")]
    Malformed(String),
}

impl From<LieError> for ConnectionError {
    fn from(e: LieError) -> Self {
        match e {
            LieError::NotNilpotent => ConnectionError::NotNilpotent,
            LieError::WrongLength { expected, got } => ConnectionError::WrongLength { expected, got },
            LieError::NonIntegralWeight => ConnectionError::NonIntegralShift,
            _ => ConnectionError::NonSplitSpectrum,
        }
    }
}

/// d + A(u) du/u with u^m = t.
#[derive(Debug, Clone, PartialEq)]
pub struct FormalConnection<F: Scalar> {
    algebra: Algebra,
    coefficient: VectorSeries<F>,
}

impl<F: Scalar> FormalConnection<F> {
    pub fn new(algebra: Algebra, coefficient: VectorSeries<F>) -> Result<Self, ConnectionError> {
        for (_, c) in coefficient.terms() {
            if c.len() != algebra.dim() {
                return Err(ConnectionError::WrongLength { expected: algebra.dim(), got: c.len() });
            }
        }
        Ok(FormalConnection { algebra, coefficient })
    }

    /// d + A(u) dt, rewritten against du/u: dt = m u^m du/u.
    pub fn from_dt(algebra: Algebra, a: &VectorSeries<F>) -> Result<Self, ConnectionError> {
        let m = a.ramification() as i64;
        Self::new(algebra, a.shift(m).scale(&F::from_int(m)))
    }

    /// d + A(u) dt/t, rewritten against du/u.
    pub fn from_dlog_t(algebra: Algebra, a: &VectorSeries<F>) -> Result<Self, ConnectionError> {
        Self::new(algebra, a.scale(&F::from_int(a.ramification() as i64)))
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn ramification(&self) -> u32 {
        self.coefficient.ramification()
    }

    pub fn coefficient(&self) -> &VectorSeries<F> {
        &self.coefficient
    }

    pub fn precision(&self) -> i64 {
        self.coefficient.precision()
    }

    /// Pull back along u = w^k; du/u = k dw/w.
    pub fn reramify(&self, k: u32) -> Self {
        FormalConnection {
            algebra: self.algebra.clone(),
            coefficient: self.coefficient.reramify(k).scale(&F::from_int(k as i64)),
        }
    }

    pub fn truncate(&self, precision: i64) -> Self {
        FormalConnection { algebra: self.algebra.clone(), coefficient: self.coefficient.truncate(precision) }
    }

    /// Slope read off the leading order: -v/m when the valuation v is
    /// negative, zero otherwise.
    pub fn naive_slope(&self) -> Rational {
        match self.coefficient.valuation() {
            Some(v) if v < 0 => rational::frac(-v, self.ramification() as i64),
            _ => rational::int(0),
        }
    }

    pub fn gauge(&self, word: &GaugeWord<F>) -> Result<Self, ConnectionError> {
        let ram = num_integer::lcm(self.ramification(), word.ramification);
        let mut cur = self.reramify(ram / self.ramification());
        let word = word.reramify(ram / word.ramification);
        for atom in &word.atoms {
            cur = cur.apply(atom)?;
        }
        Ok(cur)
    }

    pub fn apply(&self, atom: &GaugeAtom<F>) -> Result<Self, ConnectionError> {
        let alg = &self.algebra;
        let coefficient = match atom {
            GaugeAtom::ExpNilpotent { x, power } => apply_exp(alg, &self.coefficient, x, *power)?,
            GaugeAtom::CocharacterPower { mu, power } => apply_cocharacter(alg, &self.coefficient, mu, *power)?,
            GaugeAtom::Constant { ad } => self.coefficient.map_linear(ad),
        };
        Ok(FormalConnection { algebra: alg.clone(), coefficient })
    }

    pub fn to_wire(&self) -> Value {
        let mut v = self.coefficient.to_wire();
        v["algebra"] = json!(self.algebra.name());
        v
    }

    pub fn from_wire(v: &Value) -> Result<Self, ConnectionError> {
        let name = v.get("algebra").and_then(Value::as_str).ok_or_else(|| ConnectionError::Malformed("missing \"algebra\"".into()))?;
        let algebra = LieAlgebra::from_name(name).map_err(|e| ConnectionError::Malformed(e.to_string()))?;
        let series_json = v.get("coefficient").cloned().map_or_else(
            || v.clone(),
            |c| {
                let mut obj = json!({ "terms": c, "ramification": v.get("ramification").cloned().unwrap_or(json!(1)) });
                if let Some(p) = v.get("precision") {
                    obj["precision"] = p.clone();
                }
                obj
            },
        );
        let alg = algebra.clone();
        let coefficient = VectorSeries::from_wire(&series_json, |c| alg.element_from_wire(c))?;
        Self::new(algebra, coefficient)
    }
}

fn nilpotency_index<F: Scalar>(ad: &Matrix<F>) -> Option<u32> {
    let n = ad.rows();
    let mut p = Matrix::identity(n);
    for k in 0..=n as u32 {
        if p.is_zero() {
            return Some(k);
        }
        p = p.mul(ad);
    }
    None
}

/// Ad_{exp(x u^k)} A - k x u^k.
fn apply_exp<F: Scalar>(alg: &LieAlgebra, a: &VectorSeries<F>, x: &[F], k: i64) -> Result<VectorSeries<F>, ConnectionError> {
    alg.check_element(x)?;
    let ad = alg.ad(x);
    let nil = nilpotency_index(&ad);
    if nil.is_none() && (k <= 0 || a.is_exact()) {
        return Err(if k <= 0 { ConnectionError::NotNilpotent } else { ConnectionError::InfiniteExpansion });
    }
    let mut out = a.clone();
    let mut term = a.clone();
    let mut n: i64 = 1;
    loop {
        if nil.is_some_and(|m| n >= m as i64) {
            break;
        }
        term = term.map_linear(&ad).shift(k).scale(&F::from_int(1).div_int(n));
        if k > 0 {
            // higher terms land beyond what is known
            term = term.truncate(out.precision());
            if term.is_zero() {
                break;
            }
        }
        out = out.add(&term);
        n += 1;
    }
    if k != 0 {
        let mut corr = VectorSeries::new(a.ramification(), crate::series::EXACT);
        corr.add_term(k, vscale(x, &F::from_int(-k)));
        out = out.add(&corr);
    }
    Ok(out)
}

/// Eigen-splitting of ad(mu) with rational eigenvalues: a fast path for
/// Cartan elements, which act diagonally on the root basis.
fn cocharacter_parts<F: Scalar>(alg: &LieAlgebra, a: &VectorSeries<F>, mu: &[F]) -> Result<Vec<(Rational, VectorSeries<F>)>, ConnectionError> {
    let cartan = alg.cartan_indices();
    let on_cartan = mu.iter().enumerate().all(|(i, c)| c.is_zero() || cartan.contains(&i));
    if on_cartan {
        let coroot: Option<Vec<Rational>> = cartan.iter().map(|&i| mu[i].as_rational()).collect();
        let coroot = coroot.ok_or(ConnectionError::NonSplitSpectrum)?;
        let mut groups: std::collections::BTreeMap<Rational, Vec<usize>> = Default::default();
        for b in 0..alg.dim() {
            groups.entry(alg.root_value_on(b, &coroot)).or_default().push(b);
        }
        return Ok(groups
            .into_iter()
            .map(|(w, idx)| {
                let part = a.map(|c| c.iter().enumerate().map(|(i, x)| if idx.contains(&i) { x.clone() } else { F::zero() }).collect());
                (w, part)
            })
            .collect());
    }
    let eig = alg.rational_eigen_decomposition(mu)?;
    Ok(eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(j, w)| (w.clone(), a.map(|c| eig.split(c).swap_remove(j))))
        .collect())
}

/// Ad_{u^{k mu}} A - k mu.
fn apply_cocharacter<F: Scalar>(alg: &LieAlgebra, a: &VectorSeries<F>, mu: &[F], k: i64) -> Result<VectorSeries<F>, ConnectionError> {
    alg.check_element(mu)?;
    let mut out = VectorSeries::new(a.ramification(), crate::series::EXACT);
    for (w, part) in cocharacter_parts(alg, a, mu)? {
        let shift = rational::to_i64(&(w * rational::int(k))).ok_or(ConnectionError::NonIntegralShift)?;
        out = out.add(&part.shift(shift));
    }
    let mut corr = VectorSeries::new(a.ramification(), crate::series::EXACT);
    corr.add_term(0, vscale(mu, &F::from_int(-k)));
    Ok(out.add(&corr))
}

/// One factor of a gauge transformation.
#[derive(Debug, Clone, PartialEq)]
pub enum GaugeAtom<F> {
    /// exp(x u^power).
    ExpNilpotent { x: Vector<F>, power: i64 },
    /// u^(power mu) for mu semisimple with rational eigenvalues.
    CocharacterPower { mu: Vector<F>, power: i64 },
    /// A constant group element, given by its adjoint action.
    Constant { ad: Matrix<F> },
}

impl<F: Scalar> GaugeAtom<F> {
    pub fn inverse(&self) -> Self {
        match self {
            GaugeAtom::ExpNilpotent { x, power } => GaugeAtom::ExpNilpotent { x: vneg(x), power: *power },
            GaugeAtom::CocharacterPower { mu, power } => GaugeAtom::CocharacterPower { mu: mu.clone(), power: -power },
            GaugeAtom::Constant { ad } => GaugeAtom::Constant { ad: ad.inverse().expect("automorphisms are invertible") },
        }
    }

    fn reramify(&self, k: u32) -> Self {
        let k = k as i64;
        match self {
            GaugeAtom::ExpNilpotent { x, power } => GaugeAtom::ExpNilpotent { x: x.clone(), power: power * k },
            GaugeAtom::CocharacterPower { mu, power } => GaugeAtom::CocharacterPower { mu: mu.clone(), power: power * k },
            c => c.clone(),
        }
    }

    pub fn to_wire(&self) -> Value {
        let vec = |v: &[F]| Value::Array(v.iter().map(F::to_wire).collect());
        match self {
            GaugeAtom::ExpNilpotent { x, power } => json!({ "exp": vec(x), "power": power }),
            GaugeAtom::CocharacterPower { mu, power } => json!({ "cocharacter": vec(mu), "power": power }),
            GaugeAtom::Constant { ad } => json!({ "constant": ad.to_rows().iter().map(|r| vec(r)).collect::<Vec<_>>() }),
        }
    }
}

/// g = g_n ... g_1 over the cover of degree `ramification`; atoms[0] acts
/// first.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeWord<F> {
    pub ramification: u32,
    pub atoms: Vec<GaugeAtom<F>>,
}

impl<F: Scalar> GaugeWord<F> {
    pub fn identity(ramification: u32) -> Self {
        GaugeWord { ramification, atoms: Vec::new() }
    }

    pub fn new(ramification: u32, atoms: Vec<GaugeAtom<F>>) -> Self {
        GaugeWord { ramification, atoms }
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn push(&mut self, atom: GaugeAtom<F>) {
        self.atoms.push(atom);
    }

    pub fn inverse(&self) -> Self {
        GaugeWord { ramification: self.ramification, atoms: self.atoms.iter().rev().map(GaugeAtom::inverse).collect() }
    }

    /// The same gauge transformation over the cover u = w^k.
    pub fn reramify(&self, k: u32) -> Self {
        GaugeWord { ramification: self.ramification * k, atoms: self.atoms.iter().map(|a| a.reramify(k)).collect() }
    }

    /// `self` followed by `other`.
    pub fn then(&self, other: &Self) -> Self {
        let ram = num_integer::lcm(self.ramification, other.ramification);
        let mut out = self.reramify(ram / self.ramification);
        out.atoms.extend(other.reramify(ram / other.ramification).atoms);
        out
    }

    pub fn to_wire(&self) -> Value {
        json!({ "ramification": self.ramification, "atoms": self.atoms.iter().map(GaugeAtom::to_wire).collect::<Vec<_>>() })
    }
}

/// Cartan element with the given coroot coordinates.
pub fn coweight<F: Scalar>(alg: &LieAlgebra, coroot: &[Rational]) -> Vector<F> {
    let mut v = alg.zero::<F>();
    for (i, c) in alg.cartan_indices().into_iter().zip(coroot) {
        v[i] = F::from_rational(c);
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{vadd, vsub};
    use crate::scalar::Cyclotomic;
    use crate::series::EXACT;

    type C = Cyclotomic;

    fn sl2() -> (Algebra, Vector<C>, Vector<C>, Vector<C>) {
        let g = LieAlgebra::from_name("A1").unwrap();
        let (f, h, e) = (g.basis(0), g.basis(1), g.basis(2));
        (g, e, h, f)
    }

    fn conn(g: &Algebra, ram: u32, terms: &[(i64, Vector<C>)], precision: i64) -> FormalConnection<C> {
        let mut s = VectorSeries::new(ram, precision);
        for (k, v) in terms {
            s.add_term(*k, v.clone());
        }
        FormalConnection::new(g.clone(), s).unwrap()
    }

    #[test]
    fn identity_word_is_trivial() {
        let (g, e, _, f) = sl2();
        let c = conn(&g, 2, &[(-3, vadd(&e, &f))], 4);
        assert_eq!(c.gauge(&GaugeWord::identity(2)).unwrap(), c);
    }

    #[test]
    fn rho_check_cocharacter_on_trivial_connection() {
        let (g, ..) = sl2();
        let c = conn(&g, 1, &[], EXACT);
        let word = GaugeWord::new(1, vec![GaugeAtom::CocharacterPower { mu: g.rho_check(), power: 1 }]);
        let out = c.gauge(&word).unwrap();
        let expected = conn(&g, 1, &[(0, vneg(&g.rho_check::<C>()))], EXACT);
        assert_eq!(out, expected);
    }

    #[test]
    fn exp_f_conjugates_e() {
        // Ad_{exp f}(e) = e + [f, e] + [f, [f, e]]/2 = e - h - f
        let (g, e, h, f) = sl2();
        let c = conn(&g, 1, &[(0, e.clone())], EXACT);
        let word = GaugeWord::new(1, vec![GaugeAtom::ExpNilpotent { x: f.clone(), power: 0 }]);
        let out = c.gauge(&word).unwrap();
        let expected = vsub(&vsub(&e, &h), &f);
        assert_eq!(out.coefficient().coeff(0).unwrap().unwrap(), &expected);
    }

    #[test]
    fn non_nilpotent_negative_power_is_rejected() {
        let (g, e, _, f) = sl2();
        let c = conn(&g, 1, &[(0, e.clone())], 5);
        let word = GaugeWord::new(1, vec![GaugeAtom::ExpNilpotent { x: vadd(&e, &f), power: -1 }]);
        assert_eq!(c.gauge(&word), Err(ConnectionError::NotNilpotent));
    }

    #[test]
    fn negative_power_lowers_precision() {
        let (g, e, _, f) = sl2();
        let c = conn(&g, 1, &[(-2, f.clone())], 6);
        let word = GaugeWord::new(1, vec![GaugeAtom::ExpNilpotent { x: e.clone(), power: -1 }]);
        let out = c.gauge(&word).unwrap();
        // ad(e)^3 = 0 on sl2, so the unknown tail moves down by two steps
        assert_eq!(out.precision(), 4);
        let back = out.gauge(&word.inverse()).unwrap();
        assert_eq!(back.precision(), 2);
        assert!(back.coefficient().agrees_with(c.coefficient()));
    }

    #[test]
    fn round_trip_with_mixed_atoms() {
        let g = LieAlgebra::from_name("A2").unwrap();
        let x = vadd(&g.basis::<C>(0), &g.basis::<C>(4));
        let c = conn(&g, 1, &[(-2, g.p_minus()), (-1, g.p_plus()), (0, g.basis(3))], 12);
        let word = GaugeWord::new(
            1,
            vec![
                GaugeAtom::ExpNilpotent { x: x.clone(), power: 2 },
                GaugeAtom::CocharacterPower { mu: g.rho_check(), power: 1 },
                GaugeAtom::Constant { ad: g.weyl_lift(0) },
                GaugeAtom::ExpNilpotent { x: g.basis(7), power: -1 },
            ],
        );
        let there = c.gauge(&word).unwrap();
        let back = there.gauge(&word.inverse()).unwrap();
        assert!(back.coefficient().agrees_with(c.coefficient()));
        // both cocharacter factors and both negative powers cost precision
        assert_eq!(back.precision(), 4);
    }

    #[test]
    fn from_dt_multiplies_by_m_u_to_the_m() {
        let (g, e, ..) = sl2();
        let a = VectorSeries::monomial(2, -6, e.clone(), EXACT);
        let c = FormalConnection::from_dt(g, &a).unwrap();
        assert_eq!(c.coefficient().coeff(-4).unwrap().unwrap(), &vscale(&e, &C::from_int(2)));
        assert_eq!(c.naive_slope(), rational::int(2));
    }

    #[test]
    fn wire_round_trip() {
        let (g, e, _, f) = sl2();
        let c = conn(&g, 2, &[(-3, vadd(&e, &f))], 4);
        assert_eq!(FormalConnection::from_wire(&c.to_wire()).unwrap(), c);
    }
}
