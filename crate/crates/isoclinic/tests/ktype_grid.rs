use isoclinic::ktype::{relevance_check, special_check, ToralDatum};
use isoclinic::liealg::LieAlgebra;
use isoclinic::scalar::{Cyclotomic, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

type C = Cyclotomic;

fn coprime(a: i64, b: i64) -> bool {
    num_integer::gcd(a, b) == 1
}

#[test]
fn rank_two_grid_structure() {
    for name in ["A1", "A2", "B2", "C2", "G2"] {
        let g = LieAlgebra::from_name(name).unwrap();
        for m in g.regular_elliptic_numbers().unwrap() {
            for n in (1..=3 * m as i64).filter(|&n| coprime(n, m as i64)) {
                let d = ToralDatum::<C>::new(&g, m, n, None).unwrap();
                let lat = d.build_lattices().unwrap_or_else(|e| panic!("{name} m={m} N={n}: {e}"));
                let r = d.verify(&lat);
                assert!(r.all_ok(), "{name} m={m} N={n}: {r:?}");
                if n % 2 == 0 {
                    let l = lat.lagrangian.as_ref().unwrap();
                    assert_eq!(2 * l.dim(), d.tau_piece(n / 2).dim());
                }
            }
        }
    }
}

fn random_character(d: &ToralDatum<C>, rng: &mut ChaCha8Rng) -> isoclinic::ktype::ToralCharacter<C> {
    let mut coords = BTreeMap::new();
    let keep_window = rng.gen_bool(0.5);
    for i in -d.n + 1..=-1 {
        let dim = d.torus_piece(i).dim();
        let zero = rng.gen_bool(0.3) || (keep_window && i < -(d.m as i64) / 2);
        let v = (0..dim).map(|_| if zero { C::zero() } else { C::from_int(rng.gen_range(-3..=3)) }).collect();
        coords.insert(i, v);
    }
    d.character_from_coords(&coords).unwrap()
}

#[test]
fn special_agrees_with_relevant_at_airy_depth() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, h) in [("A1", 2u32), ("A2", 3), ("B2", 4), ("C2", 4), ("G2", 6)] {
        let g = LieAlgebra::from_name(name).unwrap();
        let d = ToralDatum::<C>::new(&g, h, h as i64 + 1, None).unwrap();
        let (mut special, mut not) = (0, 0);
        for _ in 0..50 {
            let phi = random_character(&d, &mut rng);
            let s = special_check(&d, &phi).unwrap();
            assert_eq!(s, relevance_check(&d, &phi).unwrap(), "{name}");
            if s {
                special += 1
            } else {
                not += 1
            }
        }
        if name != "A1" {
            assert!(special > 0 && not > 0, "{name}: {special} special, {not} not");
        }
    }
}
