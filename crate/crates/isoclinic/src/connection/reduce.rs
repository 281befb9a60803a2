use super::{CanonicalForm, CanonicalTerm, ConnectionError, FormalConnection, GaugeAtom, GaugeWord};
use crate::liealg::LieAlgebra;
use crate::linalg::{vaxpy, vis_zero, vscale, zero_vec, Decomposer, Matrix, Subspace, Vector};
use crate::scalar::{rational, Rational, Scalar};

/// Stage cap for the reduction loop.
const MAX_STAGES: usize = 64;

#[derive(Debug, Clone)]
pub struct Reduction<F: Scalar> {
    pub canonical: CanonicalForm<F>,
    /// Applying `word` to the input gives `reduced`.
    pub word: GaugeWord<F>,
    pub reduced: FormalConnection<F>,
}

/// The Levi subalgebra the remaining coefficients live in, split as
/// center + derived part + a complement in g.
struct Levi<F> {
    space: Subspace<F>,
    center: Subspace<F>,
    derived: Subspace<F>,
    split: Decomposer<F>,
}

impl<F: Scalar> Levi<F> {
    fn new(alg: &LieAlgebra, space: Subspace<F>) -> Result<Self, ConnectionError> {
        let n = alg.dim();
        let center = space.intersect(&alg.centralizer(space.basis()));
        let b = space.basis();
        let mut brackets = Vec::new();
        for i in 0..b.len() {
            for j in i + 1..b.len() {
                brackets.push(alg.bracket(&b[i], &b[j]));
            }
        }
        let derived = Subspace::span(n, &brackets);
        let split = Decomposer::new(n, vec![center.basis().to_vec(), derived.basis().to_vec(), space.standard_complement()])
            .ok_or(ConnectionError::NonSplitSpectrum)?;
        Ok(Levi { space, center, derived, split })
    }
}

fn combine<F: Scalar>(n: usize, basis: &[Vector<F>], coords: &[F]) -> Vector<F> {
    let mut acc = zero_vec(n);
    for (c, b) in coords.iter().zip(basis) {
        vaxpy(&mut acc, c, b);
    }
    acc
}

/// Precision used when the input is given exactly: enough terms past the
/// leading order for every shear the algorithm can perform.
fn working_precision<F: Scalar>(conn: &FormalConnection<F>) -> i64 {
    let v = conn.coefficient().valuation().unwrap_or(0).min(0);
    1 + (conn.algebra().coxeter_number() as i64 + 1) * (-v).max(1)
}

/// Reduce to canonical form: split off the centralizer of each semisimple
/// leading part, shear away nilpotent leading parts, and finally remove the
/// central part of the holomorphic tail.
pub fn reduce_to_canonical<F: Scalar>(conn: &FormalConnection<F>) -> Result<Reduction<F>, ConnectionError> {
    let alg = conn.algebra().clone();
    let n = alg.dim();
    let mut cur = if conn.coefficient().is_exact() { conn.truncate(working_precision(conn)) } else { conn.clone() };
    let mut word = GaugeWord::identity(cur.ramification());
    let mut levi = Levi::new(&alg, Subspace::full(n))?;
    let mut splits = 0;
    for stage in 0.. {
        if stage >= MAX_STAGES {
            return Err(ConnectionError::StageLimitExceeded(stage));
        }
        let Some((k, lead)) = leading_derived_term(&cur, &levi)? else { break };
        let parts = alg.jordan_decompose(&lead)?;
        if vis_zero(&parts.semisimple) {
            shear(&alg, &mut cur, &mut word, &levi, -k, &lead)?;
        } else {
            splits += 1;
            if splits > alg.rank() + 1 {
                return Err(ConnectionError::StageLimitExceeded(stage));
            }
            split(&alg, &mut cur, &mut word, &levi, -k, &parts.semisimple)?;
            let space = levi.space.intersect(&alg.centralizer(&[parts.semisimple]));
            levi = Levi::new(&alg, space)?;
        }
    }
    remove_central_tail(&mut cur, &mut word, &levi)?;
    let canonical = extract(&cur, &levi)?;
    Ok(Reduction { canonical, word, reduced: cur })
}

fn leading_derived_term<F: Scalar>(cur: &FormalConnection<F>, levi: &Levi<F>) -> Result<Option<(i64, Vector<F>)>, ConnectionError> {
    for (k, c) in cur.coefficient().terms() {
        if k >= 0 {
            break;
        }
        let d = levi.split.split(c).swap_remove(1);
        if !vis_zero(&d) {
            return Ok(Some((k, d)));
        }
    }
    if cur.precision() < 0 {
        return Err(ConnectionError::PrecisionUnderflow { precision: cur.precision(), needed: 0 });
    }
    Ok(None)
}

fn apply<F: Scalar>(cur: &mut FormalConnection<F>, word: &mut GaugeWord<F>, atom: GaugeAtom<F>) -> Result<(), ConnectionError> {
    *cur = cur.apply(&atom)?;
    word.push(atom);
    Ok(())
}

/// With leading term L at u^-r whose semisimple part s is nonzero, remove
/// the [s, levi]-components of all higher terms: ad L is invertible there.
fn split<F: Scalar>(
    alg: &LieAlgebra,
    cur: &mut FormalConnection<F>,
    word: &mut GaugeWord<F>,
    levi: &Levi<F>,
    r: i64,
    s: &[F],
) -> Result<(), ConnectionError> {
    let n = alg.dim();
    let moving = levi.space.image(&alg.ad(s));
    let fixed = levi.space.intersect(&alg.centralizer(&[s.to_vec()]));
    let dec = Decomposer::new(n, vec![moving.basis().to_vec(), fixed.basis().to_vec()]).ok_or(ConnectionError::NonSplitSpectrum)?;
    let lead = cur.coefficient().coeff(-r)?.cloned().unwrap_or_else(|| zero_vec(n));
    let ad_lead = alg.ad(&lead);
    let cols: Vec<Vector<F>> = moving.basis().iter().map(|v| dec.block_coords(&ad_lead.mul_vec(v), 0)).collect();
    let inv = Matrix::from_cols(moving.dim(), &cols).inverse().ok_or(ConnectionError::NonSplitSpectrum)?;
    for k in (-r + 1)..cur.precision() {
        let Some(c) = cur.coefficient().coeff(k)?.cloned() else { continue };
        let cv = dec.block_coords(&c, 0);
        if vis_zero(&cv) {
            continue;
        }
        // Ad exp(Z u^(k+r)) adds [Z, L] at u^k
        let z = combine(n, moving.basis(), &inv.mul_vec(&cv));
        apply(cur, word, GaugeAtom::ExpNilpotent { x: z, power: k + r })?;
    }
    Ok(())
}

/// Nilpotent leading term F at u^-r: complete it to an sl2-triple (E, H, F)
/// in the derived algebra, normalise the higher terms into the slice
/// ker ad E, and shear by a fractional power of H.
fn shear<F: Scalar>(
    alg: &LieAlgebra,
    cur: &mut FormalConnection<F>,
    word: &mut GaugeWord<F>,
    levi: &Levi<F>,
    r: i64,
    nil: &[F],
) -> Result<(), ConnectionError> {
    let n = alg.dim();
    let der = levi.derived.basis();
    let ad_f = alg.ad(nil);
    let images: Vec<Vector<F>> = der.iter().map(|d| ad_f.mul_vec(d)).collect();

    // h' = [F, z] with [h', F] = 2F, then E with [F, E] = h', [h', E] = -2E
    let sq: Vec<Vector<F>> = images.iter().map(|v| ad_f.mul_vec(v)).collect();
    let zc = Matrix::from_cols(n, &sq).solve(&vscale(nil, &F::from_int(-2))).ok_or(ConnectionError::NonSplitSpectrum)?;
    let hp = ad_f.mul_vec(&combine(n, der, &zc));
    let ad_hp = alg.ad(&hp);
    let stacked: Vec<Vector<F>> = der
        .iter()
        .zip(&images)
        .map(|(d, fd)| {
            let mut col = fd.clone();
            let mut second = ad_hp.mul_vec(d);
            vaxpy(&mut second, &F::from_int(2), d);
            col.extend(second);
            col
        })
        .collect();
    let mut rhs = hp.clone();
    rhs.extend(zero_vec::<F>(n));
    let ec = Matrix::from_cols(2 * n, &stacked).solve(&rhs).ok_or(ConnectionError::NonSplitSpectrum)?;
    let e = combine(n, der, &ec);
    let h: Vector<F> = hp.iter().map(|x| x.neg()).collect();

    let image = Subspace::span(n, &images);
    let slice = levi.derived.intersect(&alg.centralizer(&[e]));
    let dec = Decomposer::new(n, vec![image.basis().to_vec(), slice.basis().to_vec(), levi.center.basis().to_vec()])
        .ok_or(ConnectionError::NonSplitSpectrum)?;
    let f_map = Matrix::from_cols(n, &images);
    for k in (-r + 1)..cur.precision() {
        let Some(c) = cur.coefficient().coeff(k)?.cloned() else { continue };
        let part = dec.split(&c).swap_remove(0);
        if vis_zero(&part) {
            continue;
        }
        let z = combine(n, der, &f_map.solve(&part).ok_or(ConnectionError::NonSplitSpectrum)?);
        // Ad exp(Z u^(k+r)) adds [Z, F] = -[F, Z] at u^k
        apply(cur, word, GaugeAtom::ExpNilpotent { x: z, power: k + r })?;
    }

    let eig = alg.rational_eigen_decomposition(&h)?;
    let slice_weights: Vec<&Rational> = eig
        .eigenvalues
        .iter()
        .zip(&eig.spaces)
        .filter(|(_, sp)| sp.intersect(&slice).dim() > 0)
        .map(|(w, _)| w)
        .collect();
    let top = slice_weights.iter().copied().max().cloned().unwrap_or_else(|| rational::int(0));
    let two = rational::int(2);
    let mut delta: Option<Rational> = None;
    for (k, c) in cur.coefficient().terms() {
        if k <= -r {
            continue;
        }
        let s = dec.split(c).swap_remove(1);
        if vis_zero(&s) {
            continue;
        }
        for (w, comp) in eig.eigenvalues.iter().zip(eig.split(&s)) {
            if !vis_zero(&comp) {
                let cand = rational::int(k + r) / (w / &two + rational::int(1));
                if delta.as_ref().is_none_or(|d| cand < *d) {
                    delta = Some(cand);
                }
            }
        }
    }
    // unseen terms at u^k, k >= precision, could only give larger candidates
    // than this bound
    let bound = rational::int(cur.precision() + r) / (&top / &two + rational::int(1));
    let r_q = rational::int(r);
    let delta = match delta {
        Some(d) if d < r_q => d,
        _ => r_q,
    };
    if delta > bound {
        let needed = rational::ceil_i64(&(&delta * (&top / &two + rational::int(1)))) - r;
        return Err(ConnectionError::PrecisionUnderflow { precision: cur.precision(), needed });
    }

    let c = -delta / two;
    let mut q = 1u32;
    for w in &eig.eigenvalues {
        q = rational::lcm_u32(q, rational::denom_u32(&(&c * w)));
    }
    if q > 1 {
        *cur = cur.reramify(q);
        *word = word.reramify(q);
    }
    let scale = F::from_rational(&(c * rational::int(q as i64)));
    apply(cur, word, GaugeAtom::CocharacterPower { mu: vscale(&h, &scale), power: 1 })
}

/// Central components of the holomorphic tail are removed by exp(c u^k / k),
/// which commutes with everything left.
fn remove_central_tail<F: Scalar>(cur: &mut FormalConnection<F>, word: &mut GaugeWord<F>, levi: &Levi<F>) -> Result<(), ConnectionError> {
    let tail: Vec<(i64, Vector<F>)> = cur.coefficient().terms().filter(|(k, _)| *k > 0).map(|(k, c)| (k, c.clone())).collect();
    for (k, c) in tail {
        let z = levi.split.split(&c).swap_remove(0);
        if !vis_zero(&z) {
            apply(cur, word, GaugeAtom::ExpNilpotent { x: vscale(&z, &F::from_int(1).div_int(k)), power: k })?;
        }
    }
    Ok(())
}

fn extract<F: Scalar>(cur: &FormalConnection<F>, levi: &Levi<F>) -> Result<CanonicalForm<F>, ConnectionError> {
    let mut terms = Vec::new();
    for (k, c) in cur.coefficient().terms() {
        if k >= 0 {
            break;
        }
        debug_assert!(levi.center.contains(c));
        terms.push(CanonicalTerm { exponent: k, coefficient: c.clone() });
    }
    let residue = match cur.coefficient().coeff(0) {
        Ok(c) => Some(c.cloned().unwrap_or_else(|| zero_vec(cur.algebra().dim()))),
        Err(_) => None,
    };
    CanonicalForm::new(cur.algebra().clone(), cur.ramification(), terms, residue)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::liealg::{Algebra, LieAlgebra};
    use crate::linalg::vadd;
    use crate::scalar::{Cyclotomic, Ring};
    use crate::series::{VectorSeries, EXACT};

    type C = Cyclotomic;

    fn conn(g: &Algebra, ram: u32, terms: &[(i64, Vector<C>)], precision: i64) -> FormalConnection<C> {
        let mut s = VectorSeries::new(ram, precision);
        for (k, v) in terms {
            s.add_term(*k, v.clone());
        }
        FormalConnection::new(g.clone(), s).unwrap()
    }

    fn witnessed(input: &FormalConnection<C>, red: &Reduction<C>) {
        let moved = input.gauge(&red.word).unwrap();
        assert!(moved.coefficient().agrees_with(red.reduced.coefficient()));
    }

    #[test]
    fn already_canonical_input() {
        let g = LieAlgebra::from_name("A1").unwrap();
        let ef = vadd(&g.basis::<C>(0), &g.basis(2));
        let input = conn(&g, 2, &[(-3, ef.clone())], EXACT);
        let red = reduce_to_canonical(&input).unwrap();
        let cf = &red.canonical;
        assert_eq!(cf.slopes(), vec![rational::frac(3, 2)]);
        assert_eq!(cf.leading_term().unwrap(), &ef);
        assert!(vis_zero(cf.residue().unwrap()));
        assert!(cf.is_isoclinic().unwrap());
    }

    #[test]
    fn regular_tail_is_removed() {
        let g = LieAlgebra::from_name("A1").unwrap();
        let ef = vadd(&g.basis::<C>(0), &g.basis(2));
        let input = conn(&g, 1, &[(-1, ef.clone()), (1, ef.clone())], 6);
        let red = reduce_to_canonical(&input).unwrap();
        let expected = conn(&g, 1, &[(-1, ef.clone())], EXACT);
        assert!(red.reduced.coefficient().agrees_with(expected.coefficient()));
        assert_eq!(red.canonical.to_connection(), expected);
        witnessed(&input, &red);
    }

    #[test]
    fn sl2_oper_has_slope_one_half() {
        let g = LieAlgebra::from_name("A1").unwrap();
        let (f, e) = (g.basis::<C>(0), g.basis::<C>(2));
        let v = 3;
        let mut a = VectorSeries::new(1, EXACT);
        a.add_term(0, f.clone());
        a.add_term(-3, vscale(&e, &C::from_int(v)));
        let input = FormalConnection::from_dt(g.clone(), &a).unwrap();
        let red = reduce_to_canonical(&input).unwrap();
        let cf = &red.canonical;
        assert_eq!(cf.slope(), rational::frac(1, 2));
        assert!(cf.is_isoclinic().unwrap());
        // ad(f + v e) has characteristic polynomial x^3 - 4 v x
        let (_, d1) = cf.t_normalized().swap_remove(0);
        let chi = g.ad(&d1).char_poly();
        let expected: Vec<C> = vec![C::zero(), C::from_int(-4 * v), C::zero(), C::one()];
        assert_eq!(chi, expected);
        witnessed(&input.truncate(working_precision(&input)), &red);
    }

    #[test]
    fn reduction_is_idempotent() {
        let g = LieAlgebra::from_name("A1").unwrap();
        let (f, h, e) = (g.basis::<C>(0), g.basis::<C>(1), g.basis::<C>(2));
        let input = conn(&g, 1, &[(-2, vadd(&e, &f)), (-1, h.clone()), (0, e.clone())], 8);
        let first = reduce_to_canonical(&input).unwrap();
        witnessed(&input, &first);
        let again = reduce_to_canonical(&first.canonical.to_connection()).unwrap();
        assert_eq!(again.canonical, first.canonical);
    }

    #[test]
    fn two_step_levi_chain_in_sl3() {
        let g = LieAlgebra::from_name("A2").unwrap();
        let ci = g.cartan_indices();
        let (h1, h2) = (g.basis::<C>(ci[0]), g.basis::<C>(ci[1]));
        let w1 = vscale(&vadd(&vscale(&h1, &C::from_int(2)), &h2), &C::from_int(1).div_int(3));
        let ea1 = g.basis::<C>(g.simple_root_index(0, 1));
        let input = conn(&g, 1, &[(-2, w1.clone()), (-1, vadd(&h2, &ea1))], 6);
        let red = reduce_to_canonical(&input).unwrap();
        witnessed(&input, &red);
        let cf = &red.canonical;
        assert_eq!(cf.slopes(), vec![rational::int(2), rational::int(1)]);
        assert_eq!(cf.terms()[0].coefficient, w1);
        assert_eq!(cf.terms()[1].coefficient, h2);
        assert!(!cf.is_isoclinic().unwrap());
        let refined = cf.refined_leading_terms().unwrap();
        assert_eq!(refined.levi_dims, vec![8, 4, 2]);
        assert_eq!(refined.breaks, vec![1, 2]);
        assert!(refined.generic);
        assert_eq!(CanonicalForm::<C>::from_wire(&cf.to_wire()).unwrap(), *cf);
        assert_eq!(refined.to_wire(&g)["levi_dims"], serde_json::json!([8, 4, 2]));
    }

    #[test]
    fn insufficient_precision_is_reported() {
        let g = LieAlgebra::from_name("A1").unwrap();
        let (f, e) = (g.basis::<C>(0), g.basis::<C>(2));
        // nilpotent leading term with the rest unknown
        let input = conn(&g, 1, &[(-4, e.clone()), (-1, f.clone())], -1);
        assert!(matches!(reduce_to_canonical(&input), Err(ConnectionError::PrecisionUnderflow { .. })));
    }
}
