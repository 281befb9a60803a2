//! The classical local Hitchin map in Kostant coordinates, its image
//! lattice on j^(+,perp), little Weyl group fibers and the passage from a
//! toral character to a minimal oper on the dual side.

mod fiber;
mod image;
mod langlands;

pub use fiber::{fiber_over_phi, little_weyl_group, LittleWeylGroup, TorusElement};
pub use image::{hitchin_image_lattice, verify_hitchin_image, HitchinImageReport, SurjectivityWitness, WitnessKind};
pub use langlands::{langlands_parameter, match_leading_terms, LanglandsParameter, LeadingMatch};

use crate::connection::ConnectionError;
use crate::ktype::{KTypeError, ToralCharacter, ToralDatum};
use crate::liealg::{LieAlgebra, LieError};
use crate::linalg::Vector;
use crate::oper::{IndexSet, OperError};
use crate::scalar::{Rational, Scalar};
use crate::series::{Series, SeriesError, VectorSeries, EXACT};
use num_bigint::BigInt;
use serde_json::{json, Value};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HitchinError {
    #[error("surjectivity witness failed for degree {degree} at t^{exponent}")]
    SurjectivityWitnessFailed { degree: usize, exponent: i64 },
    #[error("leading block is not regular semisimple")]
    NotRegularLeading,
    #[error("fiber search needs a one-dimensional Cartan subspace, found dimension {0}")]
    RankTooLarge(usize),
    #[error("little Weyl group oracle needs g_0 to be a Cartan subalgebra (dim g_0 = {0})")]
    LittleWeylUnsupported(usize),
    #[error("no exact {1}-th root of {0} in the coefficient field")]
    NoExactRoot(String, u32),
    #[error("linear system at level {0} is singular")]
    SingularLevel(i64),
    #[error("element is not regular semisimple")]
    NotRegularSemisimple,
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Lie(#[from] LieError),
    #[error(transparent)]
    KType(#[from] KTypeError),
    #[error(transparent)]
    Oper(#[from] OperError),
    #[error(transparent)]
    Connection(#[from] ConnectionError),
}

/// Which differential a g-valued series is written against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Differential {
    Dt,
    /// du/u with u^m = t, m the ramification of the series.
    DuOverU,
}

/// Section coordinates (c_1, ..., c_n) with p_-1 + sum c_i p_i conjugate
/// to x when x is regular.
pub fn invariant_coordinates<F: Scalar>(g: &LieAlgebra, x: &[F]) -> Result<Vector<F>, HitchinError> {
    Ok(g.kostant_coordinates(x)?)
}

/// h_i(t) (dt)^(d_i), one series per basic degree.
#[derive(Debug, Clone, PartialEq)]
pub struct HitchinPoint<F> {
    pub degrees: Vec<u32>,
    pub components: Vec<Series<F>>,
}

impl<F: Scalar> HitchinPoint<F> {
    /// h_(i,j), the coefficient of t^(-j-1) (dt)^(d_i); i is 1-based.
    pub fn coordinate(&self, i: usize, j: i64) -> Result<F, HitchinError> {
        let s = &self.components[i - 1];
        let k = (-j - 1) * s.ramification() as i64;
        Ok(s.coeff(k)?.cloned().unwrap_or_else(F::zero))
    }

    /// Lowest t-exponent of each component, as a rational.
    pub fn valuations(&self) -> Vec<Option<Rational>> {
        self.components
            .iter()
            .map(|s| s.valuation().map(|v| Rational::new(BigInt::from(v), BigInt::from(s.ramification()))))
            .collect()
    }

    pub fn to_wire(&self) -> Value {
        json!({
            "degrees": self.degrees,
            "components": self.components.iter().map(Series::to_wire).collect::<Vec<_>>(),
        })
    }
}

/// Termwise invariants of a g-valued form, twisted to (dt)^(d_i).
pub fn local_hitchin<F: Scalar>(g: &LieAlgebra, omega: &VectorSeries<F>, against: Differential) -> Result<HitchinPoint<F>, HitchinError> {
    let m = omega.ramification();
    let xs: Vec<Series<F>> = (0..g.dim()).map(|k| omega.component(k)).collect();
    let zero = Series::new(m, EXACT);
    let one = Series::constant(m, F::one());
    let coords = g.kostant_coordinates_over(&xs, &zero, &one, |q| Series::constant(m, F::from_rational(q)));
    let mut components = Vec::with_capacity(coords.len());
    for (c, &d) in coords.into_iter().zip(g.degrees()) {
        let h = match against {
            Differential::Dt => c,
            Differential::DuOverU => {
                let per = F::from_int(1).div(&F::from_int(m as i64).pow(d));
                c.shift(-(m as i64) * d as i64).scale(&per)
            }
        };
        // collapse to integral t-exponents when possible
        let k = (1..=m).rev().find(|k| m.is_multiple_of(*k) && h.restrict(*k).is_ok()).unwrap_or(1);
        let h = h.restrict(k)?;
        components.push(h);
    }
    Ok(HitchinPoint { degrees: g.degrees().to_vec(), components })
}

/// sum x_l u^l du/u as an exact series with ramification m.
pub(crate) fn form_series<F: Scalar>(levels: &BTreeMap<i64, Vector<F>>, m: u32) -> VectorSeries<F> {
    let mut s = VectorSeries::new(m, EXACT);
    for (&l, x) in levels {
        s.add_term(l, x.clone());
    }
    s
}

/// Coordinates h_(i,j) of a toral character for -N <= l_(i,j) <= -1.
pub fn hitchin_on_bj<F: Scalar>(datum: &ToralDatum<F>, phi: &ToralCharacter<F>) -> Result<BTreeMap<(usize, i64), F>, HitchinError> {
    let idx = IndexSet::new(&datum.algebra, datum.n, datum.m as i64)?;
    let point = local_hitchin(&datum.algebra, &form_series(&phi.components, datum.m), Differential::DuOverU)?;
    idx.a_nu_tilde.iter().map(|&(i, j)| Ok(((i, j), point.coordinate(i, j)?))).collect()
}

/// Exact g-th root in the coefficient field, when one is visible: rational
/// roots, square roots of rationals, and a primitive 2g-th root of unity
/// for the sign.
pub(crate) fn exact_root<F: Scalar>(r: &F, g: u32) -> Result<F, HitchinError> {
    use num_traits::Signed;
    if g == 1 {
        return Ok(r.clone());
    }
    let fail = || HitchinError::NoExactRoot(format!("{}", r.to_wire()), g);
    let q = r.as_rational().ok_or_else(fail)?;
    if g == 2 {
        return F::sqrt_rational(&q).map_err(|_| fail());
    }
    let (num, den) = (q.numer().abs(), q.denom().clone());
    let (a, b) = (num.nth_root(g), den.nth_root(g));
    if num_traits::Pow::pow(&a, g) != num || num_traits::Pow::pow(&b, g) != den {
        return Err(fail());
    }
    let base = F::from_rational(&Rational::new(a, b));
    if q.is_negative() {
        Ok(base.mul(&F::root_of_unity(2 * g, 1)))
    } else {
        Ok(base)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Cyclotomic, Ring};

    type C = Cyclotomic;

    fn c(n: i64) -> C {
        C::from_int(n)
    }

    #[test]
    fn sl2_invariant_coordinates() {
        let g = LieAlgebra::from_name("A1").unwrap();
        let (f, h, e) = (g.basis::<C>(0), g.basis::<C>(1), g.basis::<C>(2));
        let x = crate::linalg::vadd(&f, &crate::linalg::vscale(&e, &c(7)));
        assert_eq!(invariant_coordinates(&g, &x).unwrap(), vec![c(7)]);
        assert_eq!(invariant_coordinates(&g, &e).unwrap(), vec![c(0)]);
        assert_eq!(invariant_coordinates(&g, &crate::linalg::vscale(&h, &c(3))).unwrap(), vec![c(9)]);
    }

    #[test]
    fn sl2_hitchin_examples() {
        let g = LieAlgebra::from_name("A1").unwrap();
        let (f, e) = (g.basis::<C>(0), g.basis::<C>(2));
        let mut a = VectorSeries::new(1, EXACT);
        a.add_term(0, f.clone());
        a.add_term(-3, e.clone());
        let p = local_hitchin(&g, &a, Differential::Dt).unwrap();
        assert_eq!(p.components[0], Series::monomial(1, -3, c(1), EXACT));

        let mut b = VectorSeries::new(2, EXACT);
        b.add_term(-3, crate::linalg::vadd(&e, &f));
        let p = local_hitchin(&g, &b, Differential::DuOverU).unwrap();
        assert_eq!(p.components[0], Series::monomial(1, -5, c(1).div_int(4), EXACT));
        assert_eq!(p.coordinate(1, 4).unwrap(), c(1).div_int(4));
    }

    #[test]
    fn roots() {
        assert_eq!(exact_root(&c(-8), 3).unwrap().pow(3), c(-8));
        assert_eq!(exact_root(&c(5), 2).unwrap().pow(2), c(5));
        assert!(exact_root(&c(2), 3).is_err());
    }
}
