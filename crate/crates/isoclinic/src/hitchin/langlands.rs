use super::{hitchin_on_bj, HitchinError};
use crate::connection::CanonicalForm;
use crate::ktype::{ToralCharacter, ToralDatum};
use crate::liealg::{Algebra, LieAlgebra};
use crate::linalg::{vscale, Vector};
use crate::oper::{ell, minimal_oper_form, oper_to_canonical, OperForm};
use crate::scalar::{rational, Rational, Scalar};
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// A regular semisimple class of g carried to the dual algebra through
/// section coordinates, identified degree by degree.
#[derive(Debug, Clone, PartialEq)]
pub struct LeadingMatch<F> {
    pub coordinates: Vector<F>,
    pub dual: Algebra,
    pub dual_element: Vector<F>,
}

pub fn match_leading_terms<F: Scalar>(g: &LieAlgebra, y: &[F]) -> Result<LeadingMatch<F>, HitchinError> {
    if !g.is_regular_semisimple(y)? {
        return Err(HitchinError::NotRegularSemisimple);
    }
    let coordinates = g.kostant_coordinates(y)?;
    let dual = g.dual();
    let dual_element = dual.kostant_element(&coordinates);
    if !dual.is_regular_semisimple(&dual_element)? {
        return Err(HitchinError::NotRegularSemisimple);
    }
    Ok(LeadingMatch { coordinates, dual, dual_element })
}

#[derive(Debug, Clone)]
pub struct LanglandsParameter<F: Scalar> {
    pub values: BTreeMap<(usize, i64), F>,
    pub oper: OperForm<F>,
    pub canonical: CanonicalForm<F>,
    pub slope: Rational,
    pub isoclinic: bool,
    /// m times the dt/t leading term has the section coordinates of Y.
    pub leading_class_matches: bool,
}

impl<F: Scalar> LanglandsParameter<F> {
    pub fn to_wire(&self) -> Value {
        json!({
            "values": self.values.iter().map(|((i, j), v)| json!([i, j, v.to_wire()])).collect::<Vec<_>>(),
            "oper": self.oper.to_wire(),
            "oper_display": self.oper.display_t(),
            "canonical": self.canonical.to_wire(),
            "slope": rational::format(&self.slope),
            "isoclinic": self.isoclinic,
            "leading_class_matches": self.leading_class_matches,
        })
    }
}

/// v_(i,j) = h_(i,j)(phi) on the pairs with -N <= l_(i,j) <= -1, assembled
/// into the minimal oper on the dual algebra and reduced.
pub fn langlands_parameter<F: Scalar>(datum: &ToralDatum<F>, phi: &ToralCharacter<F>) -> Result<LanglandsParameter<F>, HitchinError> {
    let g = &datum.algebra;
    let (n, m) = (datum.n, datum.m as i64);
    let leading_component = phi.component(-n).ok_or(HitchinError::NotRegularLeading)?;
    if !g.is_regular_semisimple(leading_component)? {
        return Err(HitchinError::NotRegularLeading);
    }
    let matched = match_leading_terms(g, leading_component)?;
    let values = hitchin_on_bj(datum, phi)?;
    let (mut leading, mut lower) = (BTreeMap::new(), BTreeMap::new());
    for (&(i, j), v) in &values {
        if ell(g.degrees()[i - 1], n, m, j) == -n {
            leading.insert((i, j), v.clone());
        } else {
            lower.insert((i, j), v.clone());
        }
    }
    let dual = g.dual();
    let oper = minimal_oper_form(&dual, n, m, &leading, &lower)?;
    let canonical = oper_to_canonical(&oper)?.canonical;
    let slope = canonical.slope();
    let isoclinic = canonical.is_isoclinic()? && slope == rational::frac(n, m);
    let leading_class_matches = match canonical.t_normalized().first() {
        Some((_, lead)) => dual.kostant_coordinates(&vscale(lead, &F::from_int(m)))? == matched.coordinates,
        None => false,
    };
    Ok(LanglandsParameter { values, oper, canonical, slope, isoclinic, leading_class_matches })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Cyclotomic, Ring};

    type C = Cyclotomic;

    #[test]
    fn sl2_parameter() {
        let g = LieAlgebra::from_name("A1").unwrap();
        let d = ToralDatum::<C>::new(&g, 2, 3, None).unwrap();
        let phi = d.character(BTreeMap::from([(-3, d.y.clone())])).unwrap();
        let p = langlands_parameter(&d, &phi).unwrap();
        assert_eq!(p.values[&(1, 4)], C::from_int(1).div_int(4));
        assert_eq!(p.values[&(1, 3)], C::zero());
        assert!(p.isoclinic);
        assert!(p.leading_class_matches);
        assert_eq!(p.slope, rational::frac(3, 2));
    }

    #[test]
    fn matching_is_identity_on_sl2() {
        let g = LieAlgebra::from_name("A1").unwrap();
        let y = crate::linalg::vadd(&g.basis::<C>(0), &g.basis::<C>(2));
        let mt = match_leading_terms(&g, &y).unwrap();
        assert_eq!(mt.coordinates, vec![C::one()]);
        assert!(match_leading_terms(&g, &g.basis::<C>(2)).is_err());
    }
}
