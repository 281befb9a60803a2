use super::image::solve_levels;
use super::{exact_root, hitchin_on_bj, HitchinError};
use crate::ktype::{ToralCharacter, ToralDatum};
use crate::liealg::BasisLabel;
use crate::oper::{ell, IndexSet};
use crate::scalar::Scalar;
use std::collections::BTreeMap;

/// An element of the adjoint torus with alpha_j(x) = zeta_K^(w_j) on the
/// simple roots, acting on Y by the scalar zeta_k^c.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusElement {
    pub order: u32,
    pub simple_exponents: Vec<i64>,
    pub scalar_exponent: i64,
}

/// W_0 = N_(G_0)(t_(Y,-N)) / C_(G_0)(t_(Y,-N)) as the group mu_k of scalars
/// by which torus elements rescale Y, with one representative each.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LittleWeylGroup {
    pub order: u32,
    pub elements: Vec<TorusElement>,
}

impl LittleWeylGroup {
    /// Ad(x) applied to every component of a character.
    pub fn act<F: Scalar>(&self, datum: &ToralDatum<F>, x: &TorusElement, phi: &ToralCharacter<F>) -> ToralCharacter<F> {
        let g = &datum.algebra;
        let factors: Vec<Option<F>> = g
            .labels()
            .iter()
            .map(|label| match label {
                BasisLabel::Cartan(_) => None,
                BasisLabel::Root(v) => {
                    let p: i64 = v.iter().zip(&x.simple_exponents).map(|(a, w)| a * w).sum();
                    Some(F::root_of_unity(x.order, p))
                }
            })
            .collect();
        phi.map(|c| c.iter().zip(&factors).map(|(ci, f)| f.as_ref().map_or_else(|| ci.clone(), |f| ci.mul(f))).collect())
    }

    pub fn orbit<F: Scalar>(&self, datum: &ToralDatum<F>, phi: &ToralCharacter<F>) -> Vec<ToralCharacter<F>> {
        self.elements.iter().map(|x| self.act(datum, x, phi)).collect()
    }
}

fn root_of(label: &BasisLabel) -> Option<&[i64]> {
    match label {
        BasisLabel::Root(v) => Some(v),
        BasisLabel::Cartan(_) => None,
    }
}

/// Solve x^alpha = c for alpha in the support of Y over the adjoint torus.
/// The achievable c form mu_k, k the gcd of sum n_alpha over integer
/// relations sum n_alpha alpha = 0 (searched with |n_alpha| <= 6).
pub fn little_weyl_group<F: Scalar>(datum: &ToralDatum<F>) -> Result<LittleWeylGroup, HitchinError> {
    let g = &datum.algebra;
    if datum.grading.dim(0) != g.rank() {
        return Err(HitchinError::LittleWeylUnsupported(datum.grading.dim(0)));
    }
    let support: Vec<Vec<i64>> = datum
        .y
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(b, _)| root_of(&g.labels()[b]).map(<[i64]>::to_vec).ok_or(HitchinError::NotRegularSemisimple))
        .collect::<Result<_, _>>()?;
    let r = g.rank();
    let bound = 6i64;
    let mut k = 0i64;
    let mut n = vec![-bound; support.len()];
    loop {
        if n.iter().any(|&x| x != 0) {
            let zero = (0..r).all(|j| support.iter().zip(&n).map(|(a, c)| a[j] * c).sum::<i64>() == 0);
            if zero {
                k = num_integer::gcd(k, n.iter().sum::<i64>());
            }
        }
        let mut pos = 0;
        while pos < n.len() && n[pos] == bound {
            n[pos] = -bound;
            pos += 1;
        }
        if pos == n.len() {
            break;
        }
        n[pos] += 1;
    }
    if k == 0 {
        return Err(HitchinError::NotRegularSemisimple);
    }
    let k = k as u32;
    let mut elements = Vec::with_capacity(k as usize);
    for c in 0..k as i64 {
        elements.push(find_torus_element(&support, r, k, c).ok_or(HitchinError::NotRegularSemisimple)?);
    }
    Ok(LittleWeylGroup { order: k, elements })
}

/// Brute force over alpha_j(x) in mu_K, K = k, 2k, ..., 6k.
fn find_torus_element(support: &[Vec<i64>], rank: usize, k: u32, c: i64) -> Option<TorusElement> {
    for mult in 1..=6u32 {
        let order = k * mult;
        let target = c * mult as i64;
        let mut w = vec![0i64; rank];
        loop {
            let ok = support
                .iter()
                .all(|a| (a.iter().zip(&w).map(|(x, y)| x * y).sum::<i64>() - target).rem_euclid(order as i64) == 0);
            if ok {
                return Some(TorusElement { order, simple_exponents: w, scalar_exponent: c });
            }
            let mut pos = 0;
            while pos < rank && w[pos] == order as i64 - 1 {
                w[pos] = 0;
                pos += 1;
            }
            if pos == rank {
                break;
            }
            w[pos] += 1;
        }
    }
    None
}

/// All toral characters with the given coordinates h_(i,j), solved from
/// the equations directly: the leading component is s Y with s^(d_i)
/// fixed by the leading pairs, and each lower level is linear.
pub fn fiber_over_phi<F: Scalar>(
    datum: &ToralDatum<F>,
    phi: &BTreeMap<(usize, i64), F>,
) -> Result<Vec<ToralCharacter<F>>, HitchinError> {
    let g = &datum.algebra;
    let n = datum.n;
    let cartan_dim = datum.torus_piece(-n).dim();
    if cartan_dim != 1 {
        return Err(HitchinError::RankTooLarge(cartan_dim));
    }
    let idx = IndexSet::new(g, n, datum.m as i64)?;
    let unit = datum.character(BTreeMap::from([(-n, datum.y.clone())]))?;
    let base = hitchin_on_bj(datum, &unit)?;
    let mut gcd = 0u32;
    let mut ratios = Vec::new();
    for p in idx.leading() {
        let d = g.degrees()[p.0 - 1];
        let t = phi.get(&p).cloned().unwrap_or_else(F::zero);
        if base[&p].is_zero() {
            if !t.is_zero() {
                return Ok(Vec::new());
            }
            continue;
        }
        gcd = num_integer::gcd(gcd, d);
        ratios.push((d, t.div(&base[&p])));
    }
    if gcd == 0 || ratios.iter().any(|(_, r)| r.is_zero()) {
        return Err(HitchinError::NotRegularLeading);
    }
    // s^gcd from a Bezout combination of the s^(d_i)
    let mut s_g = F::one();
    let combo = bezout(&ratios.iter().map(|(d, _)| *d as i64).collect::<Vec<_>>());
    for ((_, r), a) in ratios.iter().zip(&combo) {
        let factor = if *a >= 0 { r.pow(*a as u32) } else { r.inv().ok_or(HitchinError::NotRegularLeading)?.pow((-a) as u32) };
        s_g = s_g.mul(&factor);
    }
    let s0 = exact_root(&s_g, gcd)?;
    if ratios.iter().any(|(d, r)| s0.pow(*d) != *r) {
        return Ok(Vec::new());
    }
    let targets: BTreeMap<(usize, i64), F> = idx
        .a_nu_tilde
        .iter()
        .filter(|&&(i, j)| ell(g.degrees()[i - 1], n, datum.m as i64, j) > -n)
        .map(|&p| (p, phi.get(&p).cloned().unwrap_or_else(F::zero)))
        .collect();
    let mut out = Vec::with_capacity(gcd as usize);
    for r in 0..gcd {
        let s = s0.mul(&F::root_of_unity(gcd, r as i64));
        let lead = crate::linalg::vscale(&datum.y, &s);
        let start = BTreeMap::from([(-n, lead)]);
        let form = solve_levels(datum, start, &targets, -n + 1, -1)?;
        let mut full = form.clone();
        for l in -n..=-1 {
            full.entry(l).or_insert_with(|| g.zero());
        }
        out.push(ToralCharacter { components: full });
    }
    Ok(out)
}

fn extended_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = extended_gcd(b, a.rem_euclid(b));
        (g, y, x - a.div_euclid(b) * y)
    }
}

/// Integers a_i with sum a_i d_i = gcd(d).
fn bezout(ds: &[i64]) -> Vec<i64> {
    let mut coeffs = vec![0i64; ds.len()];
    let mut g = 0i64;
    for (k, &d) in ds.iter().enumerate() {
        if g == 0 {
            g = d;
            coeffs[k] = 1;
            continue;
        }
        let (h, x, y) = extended_gcd(g, d);
        for c in coeffs.iter_mut().take(k) {
            *c *= x;
        }
        coeffs[k] = y;
        g = h;
    }
    coeffs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::LieAlgebra;
    use crate::scalar::Cyclotomic;

    type C = Cyclotomic;

    #[test]
    fn bezout_identity() {
        let ds = [4, 6, 9];
        let a = bezout(&ds);
        assert_eq!(ds.iter().zip(&a).map(|(d, x)| d * x).sum::<i64>(), 1);
    }

    #[test]
    fn sl2_little_weyl_group() {
        let g = LieAlgebra::from_name("A1").unwrap();
        let d = ToralDatum::<C>::new(&g, 2, 3, None).unwrap();
        let w = little_weyl_group(&d).unwrap();
        assert_eq!(w.order, 2);
        let phi = d.character(BTreeMap::from([(-3, d.y.clone())])).unwrap();
        let orbit = w.orbit(&d, &phi);
        assert_eq!(orbit[1].leading(), &crate::linalg::vneg(&d.y));
    }

    #[test]
    fn sl2_fiber_is_orbit() {
        let g = LieAlgebra::from_name("A1").unwrap();
        let d = ToralDatum::<C>::new(&g, 2, 3, None).unwrap();
        let mut coords = BTreeMap::new();
        coords.insert(-3, vec![C::from_int(2)]);
        coords.insert(-1, vec![C::from_int(-1)]);
        let phi = d.character_from_coords(&coords).unwrap();
        let h = hitchin_on_bj(&d, &phi).unwrap();
        let fiber = fiber_over_phi(&d, &h).unwrap();
        assert_eq!(fiber.len(), 2);
        assert!(fiber.contains(&phi));
        let w = little_weyl_group(&d).unwrap();
        for x in w.orbit(&d, &phi) {
            assert!(fiber.contains(&x));
        }
    }
}
