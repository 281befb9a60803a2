//! Toral K-types: the grading by Ad(rho_check(zeta_m)), the torus t_Y of a
//! regular semisimple Y in g_-N, its root-space complement, the Lagrangian
//! slice for even N and the lattices j', j^+, bar j, j^(+,perp) on the
//! u-side.

mod lattice;
mod special;

pub use lattice::{GradedLattice, KTypeLattices, KTypeReport};
pub use special::{relevance_check, special_check, special_window};

use crate::liealg::{Algebra, Grading, LieError};
use crate::linalg::{vis_zero, Matrix, Subspace, Vector};
use crate::oper::regular_element_in_piece;
use crate::scalar::{Rational, Scalar};
use serde_json::{json, Value};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KTypeError {
    #[error("N = {n} and m = {m} are not coprime")]
    NotCoprime { n: i64, m: i64 },
    #[error("{0} is not a regular elliptic number of the Weyl group")]
    NotRegularElliptic(u32),
    #[error("no regular semisimple element found in g_{0}")]
    NoRegularElement(i64),
    #[error("Y is not a regular semisimple element of g_-N")]
    NotRegularSemisimple,
    #[error("component at u^{0} does not lie in the torus piece t_(Y,{0})")]
    OutsideTorus(i64),
    #[error("character has no component list for u^{0}")]
    MissingComponent(i64),
    #[error("the depth N/m = {n}/{m} is not the Airy depth (1+h)/h of a supported type")]
    WrongDepth { n: i64, m: u32 },
    #[error("the spectrum of ad(Y)^(2m) is not rational")]
    NonSplitSpectrum,
    #[error("malformed K-type data: {0}")]
    Malformed(String),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Sum of the t_Y-root spaces over the Theta-orbits sharing the value
/// alpha(Y)^m; the value separates an orbit from its negative when m is odd.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitClass<F> {
    pub key: F,
    pub space: Subspace<F>,
}

#[derive(Debug, Clone)]
pub struct ToralDatum<F: Scalar> {
    pub algebra: Algebra,
    pub m: u32,
    pub n: i64,
    pub y: Vector<F>,
    pub grading: Grading,
    /// t_(Y,i) indexed by the residue of i mod m.
    pub torus: Vec<Subspace<F>>,
    /// tau_i = ad(Y)(g_(i+N)), indexed by residue.
    pub tau: Vec<Subspace<F>>,
}

impl<F: Scalar> ToralDatum<F> {
    pub fn new(algebra: &Algebra, m: u32, n: i64, y: Option<Vector<F>>) -> Result<Self, KTypeError> {
        if n < 1 || num_integer::gcd(n, m as i64) != 1 {
            return Err(KTypeError::NotCoprime { n, m: m as i64 });
        }
        if !algebra.regular_elliptic_numbers()?.contains(&m) {
            return Err(KTypeError::NotRegularElliptic(m));
        }
        let grading = algebra.grading(m);
        let y = match y {
            Some(y) => y,
            None => regular_element_in_piece::<F>(algebra, m, -n).ok_or(KTypeError::NoRegularElement(-n))?,
        };
        algebra.check_element(&y)?;
        if !grading.is_homogeneous(&y, -n) || !algebra.is_regular_semisimple(&y)? {
            return Err(KTypeError::NotRegularSemisimple);
        }
        let t_y = algebra.centralizer(std::slice::from_ref(&y));
        let ad = algebra.ad(&y);
        let mut torus = Vec::with_capacity(m as usize);
        let mut tau = Vec::with_capacity(m as usize);
        for i in 0..m as i64 {
            torus.push(t_y.intersect(&grading.subspace(algebra, i)));
            tau.push(grading.subspace::<F>(algebra, i + n).image(&ad));
        }
        Ok(ToralDatum { algebra: algebra.clone(), m, n, y, grading, torus, tau })
    }

    pub fn residue(&self, i: i64) -> usize {
        i.rem_euclid(self.m as i64) as usize
    }

    pub fn torus_piece(&self, i: i64) -> &Subspace<F> {
        &self.torus[self.residue(i)]
    }

    pub fn tau_piece(&self, i: i64) -> &Subspace<F> {
        &self.tau[self.residue(i)]
    }

    pub fn piece(&self, i: i64) -> Subspace<F> {
        self.grading.subspace(&self.algebra, i)
    }

    pub fn is_airy_depth(&self) -> bool {
        let h = self.algebra.coxeter_number();
        self.m == h && self.n == h as i64 + 1
    }

    /// Theta-orbit classes of t_Y-roots, sorted by key. Needs m odd so that
    /// the keys of an orbit and its negative differ by a sign.
    pub fn orbit_classes(&self) -> Result<Vec<OrbitClass<F>>, KTypeError> {
        let g = &self.algebra;
        let ad = g.ad(&self.y);
        let ad_m = ad.pow(self.m);
        let square = ad_m.mul(&ad_m);
        let chi: Option<Vec<Rational>> = square.char_poly().iter().map(F::as_rational).collect();
        let chi = chi.ok_or(KTypeError::NonSplitSpectrum)?;
        let roots = crate::poly::rational_roots(&chi).ok_or(KTypeError::NonSplitSpectrum)?;
        let mut classes = Vec::new();
        for w in roots.iter().filter(|w| !num_traits::Zero::is_zero(*w)) {
            let a = F::sqrt_rational(w).map_err(|_| KTypeError::NonSplitSpectrum)?;
            for key in [a.clone(), a.neg()] {
                let shifted = ad_m.sub(&Matrix::identity(g.dim()).scale(&key));
                let space = Subspace::span(g.dim(), &shifted.kernel());
                if space.dim() > 0 {
                    classes.push(OrbitClass { key, space });
                }
            }
        }
        let total: usize = classes.iter().map(|c| c.space.dim()).sum();
        if total != g.num_roots() {
            return Err(KTypeError::NonSplitSpectrum);
        }
        classes.sort_by(|a, b| a.key.total_cmp(&b.key));
        Ok(classes)
    }

    /// For even N: the Lagrangian m in tau_(N/2) spanned by the orbit
    /// classes in A, where A is filled greedily in key order and each chosen
    /// class sends its negative to B.
    pub fn lagrangian(&self) -> Result<Option<Subspace<F>>, KTypeError> {
        if self.n % 2 != 0 {
            return Ok(None);
        }
        let classes = self.orbit_classes()?;
        let mut side: Vec<Option<bool>> = vec![None; classes.len()];
        for i in 0..classes.len() {
            if side[i].is_some() {
                continue;
            }
            side[i] = Some(true);
            let neg = classes[i].key.neg();
            if let Some(j) = classes.iter().position(|c| c.key == neg) {
                side[j] = Some(false);
            }
        }
        let half = self.piece(self.n / 2);
        let mut out = Subspace::zero(self.algebra.dim());
        for (c, s) in classes.iter().zip(&side) {
            if *s == Some(true) {
                out = out.sum(&c.space.intersect(&half));
            }
        }
        Ok(Some(out))
    }

    /// The symplectic form <Y, [x, y]> on a basis.
    pub fn symplectic_gram(&self, basis: &[Vector<F>]) -> Matrix<F> {
        let g = &self.algebra;
        let rows: Vec<Vector<F>> = basis
            .iter()
            .map(|x| basis.iter().map(|z| g.killing(&self.y, &g.bracket(x, z))).collect())
            .collect();
        if rows.is_empty() {
            Matrix::zeros(0, 0)
        } else {
            Matrix::from_rows(&rows)
        }
    }

    /// A character with the given components, checked against the torus
    /// pieces; missing components are zero.
    pub fn character(&self, components: BTreeMap<i64, Vector<F>>) -> Result<ToralCharacter<F>, KTypeError> {
        let mut full = BTreeMap::new();
        for i in -self.n..=-1 {
            let c = components.get(&i).cloned().unwrap_or_else(|| self.algebra.zero());
            if !self.torus_piece(i).contains(&c) {
                return Err(KTypeError::OutsideTorus(i));
            }
            full.insert(i, c);
        }
        if let Some(k) = components.keys().find(|k| !(-self.n..=-1).contains(*k)) {
            return Err(KTypeError::OutsideTorus(*k));
        }
        Ok(ToralCharacter { components: full })
    }

    /// The character whose leading component is Y and whose lower
    /// components are the given coordinates in the torus bases.
    pub fn character_from_coords(&self, coords: &BTreeMap<i64, Vector<F>>) -> Result<ToralCharacter<F>, KTypeError> {
        let mut comps = BTreeMap::new();
        comps.insert(-self.n, self.y.clone());
        for (&i, c) in coords {
            let basis = self.torus_piece(i).basis();
            if c.len() != basis.len() {
                return Err(KTypeError::Malformed(format!("t_(Y,{i}) has dimension {}", basis.len())));
            }
            let mut x = self.algebra.zero::<F>();
            for (ci, b) in c.iter().zip(basis) {
                crate::linalg::vaxpy(&mut x, ci, b);
            }
            comps.insert(i, x);
        }
        self.character(comps)
    }

    pub fn to_wire(&self) -> Value {
        let g = &self.algebra;
        let pieces = |v: &[Subspace<F>]| -> Value {
            let mut map = serde_json::Map::new();
            for (i, s) in v.iter().enumerate() {
                map.insert(i.to_string(), Value::Array(s.basis().iter().map(|b| g.element_to_wire(b)).collect()));
            }
            Value::Object(map)
        };
        json!({
            "algebra": g.name(),
            "m": self.m,
            "N": self.n,
            "Y": g.element_to_wire(&self.y),
            "torus": pieces(&self.torus),
            "tau": pieces(&self.tau),
            "tau_dims": self.tau.iter().map(Subspace::dim).collect::<Vec<_>>(),
            "torus_dims": self.torus.iter().map(Subspace::dim).collect::<Vec<_>>(),
        })
    }
}

/// phi~ = sum Y_i u^i du/u over -N <= i <= -1 with Y_i in t_(Y,i).
#[derive(Debug, Clone, PartialEq)]
pub struct ToralCharacter<F> {
    pub components: BTreeMap<i64, Vector<F>>,
}

impl<F: Scalar> ToralCharacter<F> {
    pub fn leading(&self) -> &Vector<F> {
        self.components.values().next().expect("a character has a leading component")
    }

    pub fn component(&self, i: i64) -> Option<&Vector<F>> {
        self.components.get(&i)
    }

    pub fn depth(&self) -> i64 {
        -*self.components.keys().next().expect("a character has a leading component")
    }

    /// The form sum Y_i u^i du/u as a coefficient series in u = t^(1/m).
    pub fn to_series(&self, m: u32, precision: i64) -> crate::series::VectorSeries<F> {
        let mut s = crate::series::VectorSeries::new(m, precision);
        for (&i, c) in &self.components {
            if !vis_zero(c) {
                s.add_term(i, c.clone());
            }
        }
        s
    }

    pub fn map(&self, f: impl Fn(&Vector<F>) -> Vector<F>) -> Self {
        ToralCharacter { components: self.components.iter().map(|(&i, c)| (i, f(c))).collect() }
    }

    pub fn to_wire(&self, g: &crate::liealg::LieAlgebra) -> Value {
        let mut map = serde_json::Map::new();
        for (i, c) in &self.components {
            map.insert(i.to_string(), g.element_to_wire(c));
        }
        Value::Object(map)
    }

    pub fn from_wire(g: &crate::liealg::LieAlgebra, v: &Value) -> Result<Self, KTypeError> {
        let obj = v.as_object().ok_or_else(|| KTypeError::Malformed("character must be an object {i: element}".into()))?;
        let mut components = BTreeMap::new();
        for (k, val) in obj {
            let i: i64 = k.parse().map_err(|_| KTypeError::Malformed(format!("bad level {k}")))?;
            components.insert(i, g.element_from_wire(val).map_err(KTypeError::Malformed)?);
        }
        if components.is_empty() {
            return Err(KTypeError::Malformed("empty character".into()));
        }
        Ok(ToralCharacter { components })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::LieAlgebra;
    use crate::scalar::Cyclotomic;

    type C = Cyclotomic;

    #[test]
    fn sl2_datum() {
        let g = LieAlgebra::from_name("A1").unwrap();
        let d = ToralDatum::<C>::new(&g, 2, 3, None).unwrap();
        assert_eq!(d.y, vec![C::one(), C::zero(), C::one()]);
        assert_eq!(d.torus_piece(1).dim(), 1);
        assert!(d.torus_piece(1).contains(&d.y));
        assert_eq!(d.torus_piece(0).dim(), 0);
        assert!(d.tau.iter().all(|t| t.dim() == 1));
    }

    #[test]
    fn sl3_datum_and_lagrangian() {
        let g = LieAlgebra::from_name("A2").unwrap();
        let d = ToralDatum::<C>::new(&g, 3, 4, None).unwrap();
        assert!(d.tau.iter().all(|t| t.dim() == 2));
        let classes = d.orbit_classes().unwrap();
        assert_eq!(classes.len(), 2);
        assert!(classes.iter().all(|c| c.space.dim() == 3));
        let lag = d.lagrangian().unwrap().unwrap();
        assert_eq!(lag.dim(), 1);
        assert!(lag.is_subspace_of(d.tau_piece(2)));
        let b = &lag.basis()[0];
        assert!(d.tau_piece(4).contains(&g.bracket(b, b)));
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = LieAlgebra::from_name("A2").unwrap();
        assert!(matches!(ToralDatum::<C>::new(&g, 3, 3, None), Err(KTypeError::NotCoprime { .. })));
        assert_eq!(ToralDatum::<C>::new(&g, 2, 3, None).unwrap_err(), KTypeError::NotRegularElliptic(2));
        let a1 = LieAlgebra::from_name("A1").unwrap();
        let e = a1.basis::<C>(2);
        assert_eq!(ToralDatum::new(&a1, 2, 3, Some(e)).unwrap_err(), KTypeError::NotRegularSemisimple);
    }
}
