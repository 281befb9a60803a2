use super::{ConnectionError, FormalConnection};
use crate::liealg::Algebra;
use crate::linalg::{vis_zero, vscale, Decomposer, Matrix, Subspace, Vector};
use crate::scalar::{rational, Rational, Scalar};
use crate::series::{VectorSeries, EXACT};
use serde_json::{json, Value};

/// D u^exponent du/u.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalTerm<F> {
    pub exponent: i64,
    pub coefficient: Vector<F>,
}

/// d + (D_1 u^(-k_1) + ... + D_k u^(-k_k) + D_(k+1)) du/u with u^m = t and
/// 0 < k_k < ... < k_1; the slopes are r_i = k_i / m.
#[derive(Debug, Clone, PartialEq)]
pub struct CanonicalForm<F: Scalar> {
    algebra: Algebra,
    ramification: u32,
    terms: Vec<CanonicalTerm<F>>,
    /// D_(k+1) against du/u; `None` if the constant term was beyond the
    /// known precision.
    residue: Option<Vector<F>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefinedLeadingTerms<F> {
    /// Break set I (1-based positions in the irregular part).
    pub breaks: Vec<usize>,
    pub slopes: Vec<Rational>,
    /// X_i for i in I.
    pub terms: Vec<Vector<F>>,
    /// dim m_0 = dim g, dim m_1, ..., dim m_k.
    pub levi_dims: Vec<usize>,
    /// dim z_1, ..., dim z_k.
    pub center_dims: Vec<usize>,
    /// Whether each m_i is the centralizer of the X_j with j <= i in I.
    pub generic: bool,
}

/// Outcome of the descent test for a candidate (theta, b).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Descent {
    Holds,
    /// theta^b is not the identity on the Cartan.
    WrongOrder,
    /// Some b r_i is not an integer.
    NonIntegralSlope(usize),
    /// Ad_theta D_i differs from zeta_b^(-b r_i) D_i.
    Eigenvalue(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ZReduction {
    Reduced,
    NotReduced,
    /// The residue has non-rational spectrum; not decidable exactly.
    Unverified,
}

impl<F: Scalar> CanonicalForm<F> {
    pub fn new(
        algebra: Algebra,
        ramification: u32,
        terms: Vec<CanonicalTerm<F>>,
        residue: Option<Vector<F>>,
    ) -> Result<Self, ConnectionError> {
        let bad = |m: &str| Err(ConnectionError::Malformed(m.to_string()));
        for (i, t) in terms.iter().enumerate() {
            algebra.check_element(&t.coefficient)?;
            if t.exponent >= 0 || vis_zero(&t.coefficient) {
                return bad("irregular terms need negative exponent and nonzero coefficient");
            }
            if i > 0 && t.exponent <= terms[i - 1].exponent {
                return bad("slopes must be strictly decreasing");
            }
            if !algebra.is_semisimple(&t.coefficient) {
                return bad("irregular coefficients must be semisimple");
            }
        }
        let mut all: Vec<&Vector<F>> = terms.iter().map(|t| &t.coefficient).collect();
        if let Some(r) = &residue {
            algebra.check_element(r)?;
            all.push(r);
        }
        for i in 0..all.len() {
            for j in i + 1..all.len() {
                if !vis_zero(&algebra.bracket(all[i], all[j])) {
                    return bad("coefficients must commute");
                }
            }
        }
        Ok(CanonicalForm { algebra, ramification, terms, residue })
    }

    pub fn algebra(&self) -> &Algebra {
        &self.algebra
    }

    pub fn ramification(&self) -> u32 {
        self.ramification
    }

    pub fn terms(&self) -> &[CanonicalTerm<F>] {
        &self.terms
    }

    pub fn residue(&self) -> Option<&Vector<F>> {
        self.residue.as_ref()
    }

    pub fn slopes(&self) -> Vec<Rational> {
        self.terms.iter().map(|t| self.slope_of(t)).collect()
    }

    fn slope_of(&self, t: &CanonicalTerm<F>) -> Rational {
        rational::frac(-t.exponent, self.ramification as i64)
    }

    /// r_1, or zero for a regular singular connection.
    pub fn slope(&self) -> Rational {
        self.terms.first().map_or_else(|| rational::int(0), |t| self.slope_of(t))
    }

    /// The irregular part in the dt/t presentation: pairs (r_i, D_i / m).
    pub fn t_normalized(&self) -> Vec<(Rational, Vector<F>)> {
        let per_t = F::from_int(1).div_int(self.ramification as i64);
        self.terms.iter().map(|t| (self.slope_of(t), vscale(&t.coefficient, &per_t))).collect()
    }

    /// D_(k+1) in the dt/t presentation.
    pub fn t_normalized_residue(&self) -> Option<Vector<F>> {
        self.residue.as_ref().map(|r| vscale(r, &F::from_int(1).div_int(self.ramification as i64)))
    }

    pub fn leading_term(&self) -> Option<&Vector<F>> {
        self.terms.first().map(|t| &t.coefficient)
    }

    pub fn is_isoclinic(&self) -> Result<bool, ConnectionError> {
        match self.leading_term() {
            None => Ok(false),
            Some(d) => Ok(self.algebra.is_regular_semisimple(d)?),
        }
    }

    /// Termwise equality of the irregular parts in the dt/t presentation,
    /// so forms over different covers compare correctly.
    pub fn irregular_part_equal(&self, other: &Self) -> bool {
        self.algebra == other.algebra && self.t_normalized() == other.t_normalized()
    }

    /// Equality of irregular parts up to simultaneous conjugation, for
    /// isoclinic forms: the leading terms have equal invariants and every
    /// lower term matches after transport between the two tori.
    pub fn irregular_part_equivalent(&self, other: &Self) -> Result<bool, ConnectionError> {
        if self.algebra != other.algebra {
            return Ok(false);
        }
        if !self.is_isoclinic()? || !other.is_isoclinic()? {
            return Ok(self.irregular_part_equal(other));
        }
        let (a, b) = (self.t_normalized(), other.t_normalized());
        if a.len() != b.len() || a.iter().zip(&b).any(|(x, y)| x.0 != y.0) {
            return Ok(false);
        }
        let (d1, e1) = (&a[0].1, &b[0].1);
        if self.algebra.invariants(d1) != self.algebra.invariants(e1) {
            return Ok(false);
        }
        for ((_, d), (_, e)) in a.iter().zip(&b).skip(1) {
            match self.algebra.transport(d1, e1, d) {
                Ok(moved) if moved == *e => {}
                _ => return Ok(false),
            }
        }
        Ok(true)
    }

    /// The canonical form itself as a connection over its cover.
    pub fn to_connection(&self) -> FormalConnection<F> {
        let precision = if self.residue.is_some() { EXACT } else { 0 };
        let mut s = VectorSeries::new(self.ramification, precision);
        for t in &self.terms {
            s.add_term(t.exponent, t.coefficient.clone());
        }
        if let Some(r) = &self.residue {
            s.add_term(0, r.clone());
        }
        FormalConnection::new(self.algebra.clone(), s).expect("coefficients have the algebra's dimension")
    }

    pub fn refined_leading_terms(&self) -> Result<RefinedLeadingTerms<F>, ConnectionError> {
        let alg = &self.algebra;
        let n = alg.dim();
        let mut levi = Subspace::<F>::full(n);
        let mut center = Subspace::<F>::zero(n);
        let mut levi_dims = vec![n];
        let mut center_dims = Vec::new();
        let mut breaks = Vec::new();
        let mut slopes = Vec::new();
        let mut xs = Vec::new();
        let mut generic = true;
        let mut seen: Vec<Vector<F>> = Vec::new();
        for (i, t) in self.terms.iter().enumerate() {
            let derived = derived_algebra(alg, &levi);
            let next_levi = levi.intersect(&alg.centralizer(std::slice::from_ref(&t.coefficient)));
            let next_center = next_levi.intersect(&alg.centralizer(next_levi.basis()));
            let a = next_center.intersect(&derived);
            let dec = Decomposer::new(n, vec![center.basis().to_vec(), a.basis().to_vec()]).ok_or(ConnectionError::NonSplitSpectrum)?;
            let x = dec.split(&t.coefficient).swap_remove(1);
            if !vis_zero(&x) {
                breaks.push(i + 1);
                slopes.push(self.slope_of(t));
                seen.push(x.clone());
                xs.push(x);
            }
            generic &= alg.centralizer(&seen) == next_levi;
            levi = next_levi;
            center = next_center;
            levi_dims.push(levi.dim());
            center_dims.push(center.dim());
        }
        Ok(RefinedLeadingTerms { breaks, slopes, terms: xs, levi_dims, center_dims, generic })
    }

    /// Test the descent condition for (theta, b): theta^b acts trivially on
    /// the Cartan, b r_i are integers and Ad_theta D_i = zeta_b^(-b r_i) D_i.
    /// `theta` is given by its adjoint matrix.
    pub fn descent_check(&self, theta: &Matrix<F>, b: u32) -> Descent {
        let alg = &self.algebra;
        let power = theta.pow(b);
        for i in alg.cartan_indices() {
            let h = alg.basis::<F>(i);
            if power.mul_vec(&h) != h {
                return Descent::WrongOrder;
            }
        }
        for (i, t) in self.terms.iter().enumerate() {
            let Some(br) = rational::to_i64(&(self.slope_of(t) * rational::int(b as i64))) else {
                return Descent::NonIntegralSlope(i + 1);
            };
            let expected = vscale(&t.coefficient, &F::root_of_unity(b, -br));
            if theta.mul_vec(&t.coefficient) != expected {
                return Descent::Eigenvalue(i + 1);
            }
        }
        Descent::Holds
    }

    /// Whether the semisimple part of D_(k+1) has the same centralizer in
    /// the common centralizer of D_1..D_k as exp(2 pi i m D_(k+1,s)) for all
    /// nonzero integers m. With rational spectrum this means ad D_(k+1,s)
    /// vanishes there.
    pub fn weakly_z_reduced(&self) -> Result<ZReduction, ConnectionError> {
        let alg = &self.algebra;
        let Some(res) = &self.residue else { return Ok(ZReduction::Unverified) };
        let s = alg.jordan_decompose(res)?.semisimple;
        let ds: Vec<Vector<F>> = self.terms.iter().map(|t| t.coefficient.clone()).collect();
        let common = alg.centralizer(&ds);
        let eig = match alg.rational_eigen_decomposition(&s) {
            Ok(e) => e,
            Err(_) => return Ok(ZReduction::Unverified),
        };
        let moved = eig
            .eigenvalues
            .iter()
            .zip(&eig.spaces)
            .any(|(w, sp)| *w != rational::int(0) && sp.intersect(&common).dim() > 0);
        Ok(if moved { ZReduction::NotReduced } else { ZReduction::Reduced })
    }

    pub fn to_wire(&self) -> Value {
        let el = |v: &Vector<F>| self.algebra.element_to_wire(v);
        json!({
            "algebra": self.algebra.name(),
            "ramification": self.ramification,
            "slopes": self.slopes().iter().map(rational::format).collect::<Vec<_>>(),
            "exponents": self.terms.iter().map(|t| t.exponent).collect::<Vec<_>>(),
            "coefficients": self.terms.iter().map(|t| el(&t.coefficient)).collect::<Vec<_>>(),
            "residue": self.residue.as_ref().map(el),
        })
    }

    /// Inverse of `to_wire`; the slopes are recomputed, not read.
    pub fn from_wire(v: &Value) -> Result<Self, ConnectionError> {
        let bad = |m: &str| ConnectionError::Malformed(m.to_string());
        let name = v.get("algebra").and_then(Value::as_str).ok_or_else(|| bad("missing \"algebra\""))?;
        let algebra = crate::liealg::LieAlgebra::from_name(name).map_err(|e| ConnectionError::Malformed(e.to_string()))?;
        let ramification = v.get("ramification").map_or(Some(1), Value::as_u64).filter(|&r| r >= 1).ok_or_else(|| bad("ramification must be a positive integer"))?;
        let exponents = v.get("exponents").and_then(Value::as_array).ok_or_else(|| bad("missing \"exponents\" array"))?;
        let coefficients = v.get("coefficients").and_then(Value::as_array).ok_or_else(|| bad("missing \"coefficients\" array"))?;
        if exponents.len() != coefficients.len() {
            return Err(bad("\"exponents\" and \"coefficients\" differ in length"));
        }
        let parse = |c: &Value| algebra.element_from_wire::<F>(c).map_err(ConnectionError::Malformed);
        let mut terms = Vec::with_capacity(exponents.len());
        for (e, c) in exponents.iter().zip(coefficients) {
            let exponent = e.as_i64().ok_or_else(|| bad("exponents must be integers"))?;
            terms.push(CanonicalTerm { exponent, coefficient: parse(c)? });
        }
        let residue = match v.get("residue") {
            None | Some(Value::Null) => None,
            Some(r) => Some(parse(r)?),
        };
        Self::new(algebra, ramification as u32, terms, residue)
    }
}

impl<F: Scalar> RefinedLeadingTerms<F> {
    pub fn to_wire(&self, alg: &crate::liealg::LieAlgebra) -> Value {
        json!({
            "breaks": self.breaks,
            "slopes": self.slopes.iter().map(rational::format).collect::<Vec<_>>(),
            "terms": self.terms.iter().map(|x| alg.element_to_wire(x)).collect::<Vec<_>>(),
            "levi_dims": self.levi_dims,
            "center_dims": self.center_dims,
            "generic": self.generic,
        })
    }
}

fn derived_algebra<F: Scalar>(alg: &crate::liealg::LieAlgebra, space: &Subspace<F>) -> Subspace<F> {
    let b = space.basis();
    let mut out = Vec::new();
    for i in 0..b.len() {
        for j in i + 1..b.len() {
            out.push(alg.bracket(&b[i], &b[j]));
        }
    }
    Subspace::span(alg.dim(), &out)
}
