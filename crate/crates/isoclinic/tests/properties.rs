use isoclinic::airy::{airy_family, canonical_at_zero, globalize, infinity_check, GlobalConnection};
use isoclinic::hitchin::invariant_coordinates;
use isoclinic::liealg::LieAlgebra;
use isoclinic::linalg::{vadd, vis_zero, vscale, Vector};
use isoclinic::oper::{canonical_to_minimal_oper, oper_to_canonical, IndexSet, OperForm};
use isoclinic::par::Exec;
use isoclinic::scalar::{rational, Cyclotomic, Scalar};
use isoclinic::series::{Series, EXACT};
use isoclinic::verify;
use proptest::prelude::*;
use std::collections::BTreeMap;

type C = Cyclotomic;

fn c(n: i64) -> C {
    C::from_int(n)
}

fn element(g: &LieAlgebra, coords: &[i64]) -> Vector<C> {
    coords.iter().take(g.dim()).map(|&x| c(x)).collect()
}

fn name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(vec!["A1", "A2", "A3", "B2", "C2", "G2"])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn jacobi_and_killing_invariance(n in name(), xs in prop::collection::vec(-3i64..=3, 63)) {
        let g = LieAlgebra::from_name(n).unwrap();
        let d = g.dim();
        let (x, y, z) = (element(&g, &xs[..d]), element(&g, &xs[21..21 + d]), element(&g, &xs[42..42 + d]));
        let jac = vadd(&vadd(&g.bracket(&x, &g.bracket(&y, &z)), &g.bracket(&y, &g.bracket(&z, &x))), &g.bracket(&z, &g.bracket(&x, &y)));
        prop_assert!(vis_zero(&jac));
        prop_assert_eq!(g.killing(&g.bracket(&x, &y), &z), g.killing(&x, &g.bracket(&y, &z)));
    }

    #[test]
    fn invariants_survive_root_conjugation(n in name(), xs in prop::collection::vec(-3i64..=3, 21), b in 0usize..21, s in -2i64..=2) {
        let g = LieAlgebra::from_name(n).unwrap();
        let x = element(&g, &xs);
        let roots: Vec<usize> = (0..g.dim()).filter(|i| !g.cartan_indices().contains(i)).collect();
        let r = roots[b % roots.len()];
        let y = g.exp_ad(&vscale(&g.basis::<C>(r), &c(s))).unwrap().mul_vec(&x);
        prop_assert_eq!(invariant_coordinates(&g, &x).unwrap(), invariant_coordinates(&g, &y).unwrap());
    }

    #[test]
    fn series_products_commute(a in prop::collection::vec((-4i64..4, -5i64..=5), 0..5), b in prop::collection::vec((-4i64..4, -5i64..=5), 0..5)) {
        let build = |t: &[(i64, i64)]| {
            let mut s = Series::new(2, EXACT);
            for &(k, v) in t {
                s.add_term(k, c(v));
            }
            s
        };
        let (x, y) = (build(&a), build(&b));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
    }

    #[test]
    fn sl2_oper_slope_matches_canonical(lead in prop_oneof![-4i64..=-1, 1i64..=4], low in -4i64..=4, k in 0usize..3) {
        let (n, m) = [(1, 2), (3, 2), (5, 2)][k];
        let g = LieAlgebra::from_name("A1").unwrap();
        let idx = IndexSet::new(&g, n, m).unwrap();
        let mut o = OperForm::new(g.clone());
        for p in idx.leading() {
            o.set(p.0, p.1, c(lead)).unwrap();
        }
        for &p in &idx.a_nu {
            o.set(p.0, p.1, c(low)).unwrap();
        }
        let cf = oper_to_canonical(&o).unwrap().canonical;
        prop_assert_eq!(cf.slope(), o.slope());
        prop_assert_eq!(canonical_to_minimal_oper(&cf).unwrap(), o);
    }

    #[test]
    fn airy_family_round_trips(v1 in -5i64..=5, top in prop_oneof![-3i64..=-1, 1i64..=3]) {
        let g = LieAlgebra::from_name("A2").unwrap();
        let gc = airy_family(&g, c(top), &BTreeMap::from([(1, c(v1))])).unwrap();
        let cf = canonical_at_zero(&gc).unwrap();
        prop_assert_eq!(cf.slope(), rational::frac(4, 3));
        prop_assert!(cf.is_isoclinic().unwrap());
        prop_assert_eq!(globalize(&canonical_to_minimal_oper(&cf).unwrap(), 4, 3).unwrap(), gc.clone());
        prop_assert_eq!(GlobalConnection::<C>::from_wire(&gc.to_wire()).unwrap(), gc.clone());
        prop_assert!(infinity_check(&gc).unwrap().trivial_monodromy);
    }

    #[test]
    fn globalized_forms_are_holomorphic_at_infinity_from_slope_one(lead in 1i64..=4, low in -3i64..=3, k in 0usize..4) {
        let (n, m) = [(3, 2), (5, 2), (1, 2), (4, 3)][k];
        let name = if m == 2 { "A1" } else { "A2" };
        let g = LieAlgebra::from_name(name).unwrap();
        let idx = IndexSet::new(&g, n, m).unwrap();
        let mut o = OperForm::new(g.clone());
        for p in idx.leading() {
            o.set(p.0, p.1, c(lead)).unwrap();
        }
        for &p in &idx.a_nu {
            o.set(p.0, p.1, c(low)).unwrap();
        }
        let report = infinity_check(&globalize(&o, n, m).unwrap()).unwrap();
        prop_assert!(report.regular);
        if n >= m {
            prop_assert!(report.trivial_monodromy);
        }
    }
}

#[test]
fn parallel_and_sequential_checks_agree() {
    let a = verify::slope_agreement(&["A1"], 6, 5, Exec::Parallel);
    let b = verify::slope_agreement(&["A1"], 6, 5, Exec::Sequential);
    assert_eq!(a, b);
    assert!(a.passed());
    let a = verify::little_weyl_fibers(5, 5, Exec::Parallel);
    assert_eq!(a, verify::little_weyl_fibers(5, 5, Exec::Sequential));
}
