use isoclinic::airy::{globalize, ks_airy};
use isoclinic::hitchin::{
    fiber_over_phi, hitchin_image_lattice, hitchin_on_bj, invariant_coordinates, langlands_parameter, little_weyl_group, local_hitchin,
    match_leading_terms, verify_hitchin_image, Differential,
};
use isoclinic::ktype::{ToralCharacter, ToralDatum};
use isoclinic::liealg::{Algebra, LieAlgebra};
use isoclinic::linalg::{vadd, vscale, Vector};
use isoclinic::par::Exec;
use isoclinic::scalar::{Cyclotomic, Ring, Scalar};
use isoclinic::series::{Series, VectorSeries, EXACT};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

type C = Cyclotomic;

fn c(n: i64) -> C {
    C::from_int(n)
}

fn alg(name: &str) -> Algebra {
    LieAlgebra::from_name(name).unwrap()
}

/// x = a f + b h + c e in sl2 as a 2x2 matrix [[b, c], [a, -b]].
fn sl2_matrix(x: &[C]) -> [[C; 2]; 2] {
    [[x[1].clone(), x[2].clone()], [x[0].clone(), x[1].neg()]]
}

/// Half the trace of X^2 in the defining representation.
fn half_trace_square(x: &[C]) -> C {
    let m = sl2_matrix(x);
    let mut tr = C::zero();
    for i in 0..2 {
        for k in 0..2 {
            tr = tr.add(&m[i][k].mul(&m[k][i]));
        }
    }
    tr.div_int(2)
}

fn random_element(g: &LieAlgebra, rng: &mut ChaCha8Rng) -> Vector<C> {
    (0..g.dim()).map(|_| c(rng.gen_range(-3..=3))).collect()
}

#[test]
fn sl2_invariant_is_half_trace_square() {
    let g = alg("A1");
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let x = random_element(&g, &mut rng);
        assert_eq!(invariant_coordinates(&g, &x).unwrap(), vec![half_trace_square(&x)]);
    }
    let h = g.basis::<C>(1);
    assert_eq!(invariant_coordinates(&g, &vscale(&h, &c(5))).unwrap(), vec![c(25)]);
}

#[test]
fn invariants_are_conjugation_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for name in ["A1", "A2", "B2", "G2"] {
        let g = alg(name);
        let roots: Vec<usize> = (0..g.dim()).filter(|i| !g.cartan_indices().contains(i)).collect();
        for _ in 0..25 {
            let x = random_element(&g, &mut rng);
            let b = roots[rng.gen_range(0..roots.len())];
            let conj = g.exp_ad(&vscale(&g.basis::<C>(b), &c(rng.gen_range(-2..=2)))).unwrap();
            let y = conj.mul_vec(&x);
            assert_eq!(invariant_coordinates(&g, &x).unwrap(), invariant_coordinates(&g, &y).unwrap(), "{name}");
        }
    }
}

/// Ad_(exp(f u)) applied termwise: sum_n u^n ad_f^n / n!.
fn conjugate_by_exp_fu(g: &LieAlgebra, omega: &VectorSeries<C>) -> VectorSeries<C> {
    let f = g.basis::<C>(0);
    let mut out = VectorSeries::new(omega.ramification(), EXACT);
    for (k, x) in omega.terms() {
        let mut term = x.clone();
        let mut fact = 1;
        for n in 0..4 {
            if n > 0 {
                fact *= n;
                term = g.bracket(&f, &term);
            }
            out.add_term(k + n, vscale(&term, &C::one().div_int(fact)));
        }
    }
    out
}

#[test]
fn local_hitchin_examples() {
    let g = alg("A1");
    let (f, e) = (g.basis::<C>(0), g.basis::<C>(2));
    let mut a = VectorSeries::exact(1);
    a.add_term(0, f.clone());
    a.add_term(-3, e.clone());
    let p = local_hitchin(&g, &a, Differential::Dt).unwrap();
    assert_eq!(p.components[0], Series::monomial(1, -3, C::one(), EXACT));
    assert_eq!(local_hitchin(&g, &conjugate_by_exp_fu(&g, &a), Differential::Dt).unwrap(), p);

    // (e+f) u^-3 du/u with du/u = dt/(2t): half trace of (e+f)^2 is 1, so
    // u^-6 (dt / 2t)^2 = t^-5 / 4 (dt)^2
    let ef = vadd(&e, &f);
    let expected = half_trace_square(&ef).div_int(4);
    let mut b = VectorSeries::exact(2);
    b.add_term(-3, ef.clone());
    let p = local_hitchin(&g, &b, Differential::DuOverU).unwrap();
    assert_eq!(p.components[0], Series::monomial(1, -5, expected, EXACT));
}

#[test]
fn image_lattice_on_sl2() {
    let g = alg("A1");
    // -d - floor(d N / m) with d = 2, N = 3, m = 2
    assert_eq!(hitchin_image_lattice(&g, 3, 2), vec![-2 - 3]);
    let d = ToralDatum::<C>::new(&g, 2, 3, None).unwrap();
    let r = verify_hitchin_image(&d, 50, 5, 99, Exec::default()).unwrap();
    assert!(r.contained);
    assert_eq!(r.witnesses.len(), 5);
    let r0 = verify_hitchin_image(&d, 0, 1, 1, Exec::Sequential).unwrap();
    assert!(r0.contained);
}

/// The A1 torus equation: Ad diag(a, 1/a) sends e + f to a^2 e + a^-2 f,
/// which lies on the line of e + f iff a^4 = 1; W_0 acts by a^2 = -1 on
/// root coordinates.
fn sl2_orbit(phi: &ToralCharacter<C>) -> Vec<ToralCharacter<C>> {
    let flip = phi.map(|x| vec![x[0].neg(), x[1].clone(), x[2].neg()]);
    vec![phi.clone(), flip]
}

fn random_sl2_character(d: &ToralDatum<C>, rng: &mut ChaCha8Rng) -> ToralCharacter<C> {
    let mut lead = 0;
    while lead == 0 {
        lead = rng.gen_range(-5..=5);
    }
    let coords = BTreeMap::from([(-3, vec![c(lead)]), (-1, vec![c(rng.gen_range(-5..=5))])]);
    d.character_from_coords(&coords).unwrap()
}

fn same_set(a: &[ToralCharacter<C>], b: &[ToralCharacter<C>]) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.contains(x))
}

#[test]
fn sl2_fibers_are_torus_orbits() {
    let g = alg("A1");
    let d = ToralDatum::<C>::new(&g, 2, 3, None).unwrap();
    let w0 = little_weyl_group(&d).unwrap();
    assert_eq!(w0.order, 2);
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..20 {
        let phi = random_sl2_character(&d, &mut rng);
        let oracle = sl2_orbit(&phi);
        assert!(same_set(&w0.orbit(&d, &phi), &oracle));
        let h = hitchin_on_bj(&d, &phi).unwrap();
        assert_eq!(hitchin_on_bj(&d, &oracle[1]).unwrap(), h);
        assert!(same_set(&fiber_over_phi(&d, &h).unwrap(), &oracle));
    }
}

#[test]
fn sl2_langlands_parameter() {
    let g = alg("A1");
    let d = ToralDatum::<C>::new(&g, 2, 3, None).unwrap();
    let phi = d.character(BTreeMap::from([(-3, d.y.clone())])).unwrap();
    let p = langlands_parameter(&d, &phi).unwrap();
    // v_(1,4) is the t^-5 coefficient of the Hitchin image above
    assert_eq!(p.values[&(1, 4)], C::one().div_int(4));
    assert_eq!(p.values[&(1, 3)], C::zero());
    assert!(p.isoclinic && p.leading_class_matches);

    let mut rng = ChaCha8Rng::seed_from_u64(14);
    for _ in 0..20 {
        let phi = random_sl2_character(&d, &mut rng);
        let p = langlands_parameter(&d, &phi).unwrap();
        assert!(p.isoclinic && p.leading_class_matches);
        for x in sl2_orbit(&phi) {
            assert_eq!(langlands_parameter(&d, &x).unwrap().oper, p.oper);
        }
        assert!(same_set(&fiber_over_phi(&d, &p.values).unwrap(), &sl2_orbit(&phi)));
    }
}

#[test]
fn leading_term_matching() {
    let g = alg("A1");
    let ef = vadd(&g.basis::<C>(0), &g.basis::<C>(2));
    let m = match_leading_terms(&g, &ef).unwrap();
    assert_eq!(m.coordinates, vec![half_trace_square(&ef)]);

    // A2: ad-spectra of Y and of the transported class agree
    let a2 = alg("A2");
    let d = ToralDatum::<C>::new(&a2, 3, 4, None).unwrap();
    let m = match_leading_terms(&a2, &d.y).unwrap();
    let spectrum = |h: &LieAlgebra, x: &[C]| h.ad(x).char_poly();
    assert_eq!(spectrum(&a2, &d.y), spectrum(&m.dual, &m.dual_element));
}

#[test]
fn ks_airy_is_the_langlands_image_of_a_special_character() {
    let g = alg("A1");
    let d = ToralDatum::<C>::new(&g, 2, 3, None).unwrap();
    // v_(1,4) = a^2 / 4, so a = 2 gives the Airy normalization v = 1
    let phi = d.character(BTreeMap::from([(-3, vscale(&d.y, &c(2)))])).unwrap();
    let p = langlands_parameter(&d, &phi).unwrap();
    assert_eq!(globalize(&p.oper, 3, 2).unwrap(), ks_airy::<C>(&g).unwrap());
}
