use super::{KTypeError, ToralCharacter, ToralDatum};
use crate::linalg::vis_zero;
use crate::scalar::Scalar;

/// Levels i (negative) where a special character must vanish, at the Airy
/// depth (1+h)/h. For odd h only type A is covered.
pub fn special_window<F: Scalar>(datum: &ToralDatum<F>) -> Result<std::ops::RangeInclusive<i64>, KTypeError> {
    let h = datum.algebra.coxeter_number() as i64;
    if !datum.is_airy_depth() {
        return Err(KTypeError::WrongDepth { n: datum.n, m: datum.m });
    }
    if h % 2 == 1 && !datum.algebra.cartan_type().is_type_a() {
        return Err(KTypeError::WrongDepth { n: datum.n, m: datum.m });
    }
    // floor(h/2) + 1 covers both parities
    Ok(-h..=-(h / 2 + 1))
}

pub fn special_check<F: Scalar>(datum: &ToralDatum<F>, phi: &ToralCharacter<F>) -> Result<bool, KTypeError> {
    let window = special_window(datum)?;
    Ok(window.into_iter().all(|i| phi.component(i).is_none_or(|c| vis_zero(c))))
}

/// Residue of kappa(phi, x u^i) du/u against every root vector x of height
/// i, for i in the window mirrored to positive levels.
pub fn relevance_check<F: Scalar>(datum: &ToralDatum<F>, phi: &ToralCharacter<F>) -> Result<bool, KTypeError> {
    let window = special_window(datum)?;
    let g = &datum.algebra;
    let h = g.coxeter_number() as i64;
    let low = -*window.end();
    for i in low..h {
        for (b, &wt) in g.weights().iter().enumerate() {
            if wt != i {
                continue;
            }
            let x = g.basis::<F>(b);
            let mut residue = F::zero();
            for (&k, c) in &phi.components {
                if k + i == 0 {
                    residue = residue.add(&g.killing(c, &x));
                }
            }
            if !residue.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::LieAlgebra;
    use crate::scalar::Cyclotomic;
    use std::collections::BTreeMap;

    type C = Cyclotomic;

    #[test]
    fn sl2_is_always_special() {
        let g = LieAlgebra::from_name("A1").unwrap();
        let d = ToralDatum::<C>::new(&g, 2, 3, None).unwrap();
        assert_eq!(special_window(&d).unwrap(), -2..=-2);
        let mut coords = BTreeMap::new();
        coords.insert(-1, vec![C::from_int(5)]);
        let phi = d.character_from_coords(&coords).unwrap();
        assert!(special_check(&d, &phi).unwrap());
        assert!(relevance_check(&d, &phi).unwrap());
    }

    #[test]
    fn sl3_window_and_agreement() {
        let g = LieAlgebra::from_name("A2").unwrap();
        let d = ToralDatum::<C>::new(&g, 3, 4, None).unwrap();
        assert_eq!(special_window(&d).unwrap(), -3..=-2);
        let bare = d.character_from_coords(&BTreeMap::new()).unwrap();
        assert!(special_check(&d, &bare).unwrap() && relevance_check(&d, &bare).unwrap());
        let mut coords = BTreeMap::new();
        coords.insert(-2, vec![C::from_int(1)]);
        let phi = d.character_from_coords(&coords).unwrap();
        assert!(!special_check(&d, &phi).unwrap());
        assert!(!relevance_check(&d, &phi).unwrap());
    }

    #[test]
    fn wrong_depth_is_rejected() {
        let g = LieAlgebra::from_name("G2").unwrap();
        let d = ToralDatum::<C>::new(&g, 3, 4, None).unwrap();
        let phi = d.character_from_coords(&BTreeMap::new()).unwrap();
        assert!(matches!(special_check(&d, &phi), Err(KTypeError::WrongDepth { .. })));
    }
}
