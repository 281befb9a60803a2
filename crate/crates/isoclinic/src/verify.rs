//! Batch property checks over seeded samples and small parameter grids.
//! Each returns a report listing every failing case; nothing panics.

use crate::airy::{canonical_at_zero, globalize, infinity_check, ks_airy};
use crate::hitchin::{fiber_over_phi, hitchin_image_lattice, hitchin_on_bj, langlands_parameter, little_weyl_group, verify_hitchin_image};
use crate::ktype::{relevance_check, special_check, ToralCharacter, ToralDatum};
use crate::liealg::{Algebra, LieAlgebra};
use crate::linalg::{vis_zero, vscale, vsub, Vector};
use crate::oper::{canonical_to_minimal_oper, dim_match_check, ell, fiber_independence_check, minimal_oper_form, oper_to_canonical, IndexSet, OperForm};
use crate::par::Exec;
use crate::scalar::{rational, Cyclotomic, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::collections::BTreeMap;

type C = Cyclotomic;

pub const SUPPORTED: [&str; 6] = ["A1", "A2", "A3", "B2", "C2", "G2"];
pub const RANK_TWO: [&str; 5] = ["A1", "A2", "B2", "C2", "G2"];

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    fn collect(name: &str, outcomes: Vec<Result<(), String>>) -> Self {
        let cases = outcomes.len();
        CheckReport { name: name.to_string(), cases, failures: outcomes.into_iter().filter_map(Result::err).collect() }
    }

    pub fn passed(&self) -> bool {
        self.cases > 0 && self.failures.is_empty()
    }

    pub fn to_wire(&self) -> Value {
        json!({ "check": self.name, "pass": self.passed(), "cases": self.cases, "failures": self.failures })
    }
}

fn alg(name: &str) -> Algebra {
    LieAlgebra::from_name(name).expect("supported algebra")
}

fn coprime(a: i64, b: i64) -> bool {
    num_integer::gcd(a, b) == 1
}

fn seeded(seed: u64, k: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ (k as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

fn small(rng: &mut ChaCha8Rng) -> C {
    C::from_int(rng.gen_range(-3..=3))
}

/// Slopes exercised for the oper checks: regular elliptic m with a few N.
pub fn sample_slopes(name: &str) -> Vec<(i64, i64)> {
    match name {
        "A1" => vec![(1, 2), (3, 2), (5, 2)],
        "A2" => vec![(1, 3), (2, 3), (4, 3), (5, 3)],
        _ => vec![],
    }
}

/// A minimal oper with random small integer coefficients on A~_nu and a
/// regular semisimple leading coefficient.
pub fn random_minimal_oper(g: &Algebra, n: i64, m: i64, rng: &mut ChaCha8Rng) -> OperForm<C> {
    let idx = IndexSet::new(g, n, m).expect("coprime slope");
    loop {
        let leading: BTreeMap<_, _> = idx.leading().into_iter().map(|p| (p, small(rng))).collect();
        let lower: BTreeMap<_, _> = idx.a_nu.iter().map(|&p| (p, small(rng))).collect();
        if let Ok(o) = minimal_oper_form(g, n, m, &leading, &lower) {
            return o;
        }
    }
}

/// |A_(nu,l)| by direct enumeration of l_ij against dim t_(X,l) on the dual
/// side, read from the toral datum of the dual algebra.
pub fn dim_match_grid(names: &[&str], exec: Exec) -> CheckReport {
    let mut cases = Vec::new();
    for &name in names {
        let g = alg(name);
        for m in g.regular_elliptic_numbers().unwrap_or_default() {
            for n in (1..=3 * m as i64).filter(|&n| coprime(n, m as i64)) {
                cases.push((g.clone(), m, n));
            }
        }
    }
    let outcomes = exec.map(&cases, |(g, m, n)| -> Result<(), String> {
        let tag = format!("{} m={m} N={n}", g.name());
        let dual = g.dual();
        let datum = ToralDatum::<C>::new(&dual, *m, *n, None).map_err(|e| format!("{tag}: {e}"))?;
        let report = dim_match_check(g, *m as i64, *n).map_err(|e| format!("{tag}: {e}"))?;
        for l in (-n + 1)..=-1 {
            let mut count = 0;
            for &d in g.degrees() {
                count += (-2 * d as i64 * (n + *m as i64)..=2 * d as i64 * (n + *m as i64))
                    .filter(|&j| ell(d, *n, *m as i64, j) == l)
                    .count();
            }
            let dim = datum.torus_piece(l).dim();
            if count != dim {
                return Err(format!("{tag} l={l}: |A|={count}, dim={dim}"));
            }
            let row = report.rows.iter().find(|r| r.ell == l).ok_or_else(|| format!("{tag}: missing row {l}"))?;
            if row.count != count || row.dim != dim {
                return Err(format!("{tag} l={l}: module reports {}/{}", row.count, row.dim));
            }
        }
        Ok(())
    });
    CheckReport::collect("dim-match", outcomes)
}

fn oper_cases(names: &[&str], per_slope: usize) -> Vec<(Algebra, i64, i64, usize)> {
    let mut out = Vec::new();
    for &name in names {
        let g = alg(name);
        for (n, m) in sample_slopes(name) {
            for k in 0..per_slope {
                out.push((g.clone(), n, m, k));
            }
        }
    }
    out
}

/// Oper slope formula against the slope of the reduced canonical form.
pub fn slope_agreement(names: &[&str], per_algebra: usize, seed: u64, exec: Exec) -> CheckReport {
    let mut cases = Vec::new();
    for &name in names {
        let g = alg(name);
        let slopes = sample_slopes(name);
        for k in 0..per_algebra {
            let (n, m) = slopes[k % slopes.len()];
            cases.push((g.clone(), n, m, k));
        }
    }
    let outcomes = exec.map(&cases, |(g, n, m, k)| {
        let mut rng = seeded(seed, *k + 1000 * g.rank());
        let o = random_minimal_oper(g, *n, *m, &mut rng);
        let cf = oper_to_canonical(&o).map_err(|e| format!("{} {}: {e}", g.name(), o.display_t()))?.canonical;
        if cf.slope() != o.slope() {
            return Err(format!("{} {}: oper {} vs canonical {}", g.name(), o.display_t(), rational::format(&o.slope()), rational::format(&cf.slope())));
        }
        Ok(())
    });
    CheckReport::collect("slope-agreement", outcomes)
}

/// minimal oper -> canonical -> minimal oper is the identity; the inverse
/// fails on any singular block.
pub fn minimal_form_round_trip(names: &[&str], per_slope: usize, seed: u64, exec: Exec) -> CheckReport {
    let cases = oper_cases(names, per_slope);
    let outcomes = exec.map(&cases, |(g, n, m, k)| {
        let mut rng = seeded(seed, *k + 7919 * (*n as usize) + 104_729 * g.rank());
        let o = random_minimal_oper(g, *n, *m, &mut rng);
        let tag = format!("{} {}", g.name(), o.display_t());
        let cf = oper_to_canonical(&o).map_err(|e| format!("{tag}: {e}"))?.canonical;
        let back = canonical_to_minimal_oper(&cf).map_err(|e| format!("{tag}: {e}"))?;
        if back != o {
            return Err(format!("{tag}: came back as {}", back.display_t()));
        }
        Ok(())
    });
    CheckReport::collect("minimal-form-bijection", outcomes)
}

/// Opers differing only in coefficients with l_ij >= 0 reduce to equal
/// irregular parts.
pub fn fiber_independence(names: &[&str], pairs: usize, seed: u64, exec: Exec) -> CheckReport {
    let mut cases = Vec::new();
    for &name in names {
        let g = alg(name);
        let slopes = sample_slopes(name);
        for k in 0..pairs {
            let (n, m) = slopes[k % slopes.len()];
            cases.push((g.clone(), n, m, k));
        }
    }
    let outcomes = exec.map(&cases, |(g, n, m, k)| {
        let mut rng = seeded(seed, *k + 31 * g.rank());
        let a = random_minimal_oper(g, *n, *m, &mut rng);
        let mut b = a.clone();
        for (i, &d) in g.degrees().iter().enumerate() {
            let top = (d as i64 - 1) * (n + m) / m;
            for j in -1..=top {
                if ell(d, *n, *m, j) >= 0 && rng.gen_bool(0.6) {
                    b.set(i + 1, j, small(&mut rng)).map_err(|e| e.to_string())?;
                }
            }
        }
        let tag = format!("{} {} / {}", g.name(), a.display_t(), b.display_t());
        match fiber_independence_check(&a, &b) {
            Ok(true) => Ok(()),
            Ok(false) => Err(format!("{tag}: irregular parts differ")),
            Err(e) => Err(format!("{tag}: {e}")),
        }
    });
    CheckReport::collect("fiber-independence", outcomes)
}

/// Lattice exponent, containment of sampled j^(+,perp) and surjectivity
/// witnesses on A1 with N = 3, m = 2.
pub fn hitchin_image(samples: usize, window: i64, seed: u64, exec: Exec) -> CheckReport {
    let g = alg("A1");
    let mut outcomes = Vec::new();
    let bounds = hitchin_image_lattice(&g, 3, 2);
    outcomes.push(if bounds == vec![-5] { Ok(()) } else { Err(format!("lattice bound {bounds:?}, expected [-5]")) });
    let report = ToralDatum::<C>::new(&g, 2, 3, None)
        .map_err(|e| e.to_string())
        .and_then(|d| verify_hitchin_image(&d, samples, window, seed, exec).map_err(|e| e.to_string()));
    match report {
        Err(e) => outcomes.push(Err(e)),
        Ok(r) => {
            outcomes.push(if r.contained { Ok(()) } else { Err(format!("containment fails at {:?}", r.first_violation)) });
            let want = window as usize * g.rank();
            outcomes.push(if r.surjective() && r.witnesses.len() == want {
                Ok(())
            } else {
                Err(format!("{} witnesses, expected {want}", r.witnesses.len()))
            });
        }
    }
    CheckReport::collect("hitchin-image", outcomes)
}

/// A random character on the datum with nonzero leading multiple of Y.
pub fn random_regular_character(datum: &ToralDatum<C>, rng: &mut ChaCha8Rng) -> ToralCharacter<C> {
    let mut coords = BTreeMap::new();
    let mut lead = 0;
    while lead == 0 {
        lead = rng.gen_range(-4..=4);
    }
    coords.insert(-datum.n, vec![C::from_int(lead)]);
    for i in -datum.n + 1..=-1 {
        let dim = datum.torus_piece(i).dim();
        coords.insert(i, (0..dim).map(|_| small(rng)).collect());
    }
    datum.character_from_coords(&coords).expect("coordinates in the torus pieces")
}

fn same_set(a: &[ToralCharacter<C>], b: &[ToralCharacter<C>]) -> bool {
    a.len() == b.len() && a.iter().all(|x| b.contains(x)) && b.iter().all(|x| a.contains(x))
}

/// On A1 with m = 2, N = 3 the fiber of every regular character is its
/// W_0-orbit, of size 2.
pub fn little_weyl_fibers(count: usize, seed: u64, exec: Exec) -> CheckReport {
    let g = alg("A1");
    let datum = match ToralDatum::<C>::new(&g, 2, 3, None) {
        Ok(d) => d,
        Err(e) => return CheckReport::collect("little-weyl-fibers", vec![Err(e.to_string())]),
    };
    let w0 = match little_weyl_group(&datum) {
        Ok(w) if w.order == 2 => w,
        Ok(w) => return CheckReport::collect("little-weyl-fibers", vec![Err(format!("|W_0| = {}", w.order))]),
        Err(e) => return CheckReport::collect("little-weyl-fibers", vec![Err(e.to_string())]),
    };
    let outcomes = exec.map_range(count, |k| {
        let phi = random_regular_character(&datum, &mut seeded(seed, k));
        let h = hitchin_on_bj(&datum, &phi).map_err(|e| e.to_string())?;
        let fiber = fiber_over_phi(&datum, &h).map_err(|e| e.to_string())?;
        let orbit = w0.orbit(&datum, &phi);
        if fiber.len() != 2 || !same_set(&fiber, &orbit) {
            return Err(format!("sample {k}: fiber of size {} differs from the orbit", fiber.len()));
        }
        Ok(())
    });
    CheckReport::collect("little-weyl-fibers", outcomes)
}

/// Special characters on A1 at depth 3/2: isoclinic output of slope 3/2,
/// matched leading class, W_0-invariance and fiber recovery.
pub fn langlands_coherence(count: usize, seed: u64, exec: Exec) -> CheckReport {
    let name = "langlands-coherence";
    let g = alg("A1");
    let (datum, w0) = match ToralDatum::<C>::new(&g, 2, 3, None).map_err(|e| e.to_string()).and_then(|d| {
        let w = little_weyl_group(&d).map_err(|e| e.to_string())?;
        Ok((d, w))
    }) {
        Ok(x) => x,
        Err(e) => return CheckReport::collect(name, vec![Err(e)]),
    };
    let outcomes = exec.map_range(count, |k| {
        let phi = random_regular_character(&datum, &mut seeded(seed, k));
        if !special_check(&datum, &phi).map_err(|e| e.to_string())? {
            return Err(format!("sample {k}: not special"));
        }
        let p = langlands_parameter(&datum, &phi).map_err(|e| format!("sample {k}: {e}"))?;
        if !p.isoclinic || p.slope != rational::frac(3, 2) {
            return Err(format!("sample {k}: slope {} isoclinic {}", rational::format(&p.slope), p.isoclinic));
        }
        if !p.leading_class_matches {
            return Err(format!("sample {k}: leading class does not match"));
        }
        for x in w0.orbit(&datum, &phi) {
            let q = langlands_parameter(&datum, &x).map_err(|e| format!("sample {k}: {e}"))?;
            if q.oper != p.oper || !q.canonical.irregular_part_equal(&p.canonical) {
                return Err(format!("sample {k}: W_0-translate changes the output"));
            }
        }
        let fiber = fiber_over_phi(&datum, &p.values).map_err(|e| e.to_string())?;
        if !same_set(&fiber, &w0.orbit(&datum, &phi)) {
            return Err(format!("sample {k}: fiber is not the W_0-orbit"));
        }
        Ok(())
    });
    CheckReport::collect(name, outcomes)
}

/// ks_airy restricts at 0 to an isoclinic form of slope (1+h)/h, is
/// holomorphic at infinity, and survives globalize after restrict.
pub fn airy_checks(names: &[&str]) -> CheckReport {
    let outcomes = names
        .iter()
        .map(|&name| -> Result<(), String> {
            let g = alg(name);
            let h = g.coxeter_number() as i64;
            let gc = ks_airy::<C>(&g).map_err(|e| format!("{name}: {e}"))?;
            let cf = canonical_at_zero(&gc).map_err(|e| format!("{name}: {e}"))?;
            if cf.slope() != rational::frac(h + 1, h) || !cf.is_isoclinic().map_err(|e| e.to_string())? {
                return Err(format!("{name}: slope {} at 0", rational::format(&cf.slope())));
            }
            let inf = infinity_check(&gc).map_err(|e| e.to_string())?;
            if !inf.holomorphic || !inf.trivial_monodromy {
                return Err(format!("{name}: pole at infinity"));
            }
            let back = canonical_to_minimal_oper(&cf).map_err(|e| format!("{name}: {e}"))?;
            let again = globalize(&back, h + 1, h).map_err(|e| format!("{name}: {e}"))?;
            if again != gc {
                return Err(format!("{name}: globalize after restrict changed the connection"));
            }
            Ok(())
        })
        .collect();
    CheckReport::collect("airy", outcomes)
}

/// Random characters for the special/relevant comparison; about half keep
/// the special window at zero.
pub fn random_character(datum: &ToralDatum<C>, rng: &mut ChaCha8Rng) -> ToralCharacter<C> {
    let mut coords = BTreeMap::new();
    let keep_window = rng.gen_bool(0.5);
    for i in -datum.n + 1..=-1 {
        let dim = datum.torus_piece(i).dim();
        let zero = rng.gen_bool(0.3) || (keep_window && i < -(datum.m as i64) / 2);
        coords.insert(i, (0..dim).map(|_| if zero { C::zero() } else { small(rng) }).collect());
    }
    datum.character_from_coords(&coords).expect("coordinates in the torus pieces")
}

/// Structure of the K-type lattices on the rank <= 2 grid, and special
/// versus relevant at Airy depth.
pub fn ktype_structure(samples: usize, seed: u64, exec: Exec) -> CheckReport {
    let mut cases = Vec::new();
    for name in RANK_TWO {
        let g = alg(name);
        for m in g.regular_elliptic_numbers().unwrap_or_default() {
            for n in (1..=3 * m as i64).filter(|&n| coprime(n, m as i64)) {
                cases.push((g.clone(), m, n));
            }
        }
    }
    let mut outcomes = exec.map(&cases, |(g, m, n)| {
        let tag = format!("{} m={m} N={n}", g.name());
        let d = ToralDatum::<C>::new(g, *m, *n, None).map_err(|e| format!("{tag}: {e}"))?;
        let lat = d.build_lattices().map_err(|e| format!("{tag}: {e}"))?;
        let r = d.verify(&lat);
        if !r.all_ok() {
            return Err(format!("{tag}: {}", r.to_wire()));
        }
        if n % 2 == 0 {
            let l = lat.lagrangian.as_ref().ok_or_else(|| format!("{tag}: no Lagrangian"))?;
            if 2 * l.dim() != d.tau_piece(n / 2).dim() {
                return Err(format!("{tag}: Lagrangian has dimension {}", l.dim()));
            }
        }
        Ok(())
    });
    let airy = exec.map(&RANK_TWO, |&name| {
        let g = alg(name);
        let h = g.coxeter_number();
        let d = ToralDatum::<C>::new(&g, h, h as i64 + 1, None).map_err(|e| format!("{name}: {e}"))?;
        let mut rng = seeded(seed, h as usize);
        for k in 0..samples {
            let phi = random_character(&d, &mut rng);
            let s = special_check(&d, &phi).map_err(|e| e.to_string())?;
            let r = relevance_check(&d, &phi).map_err(|e| e.to_string())?;
            if s != r {
                return Err(format!("{name} sample {k}: special={s}, relevant={r}"));
            }
        }
        Ok(())
    });
    outcomes.extend(airy);
    CheckReport::collect("ktype-structure", outcomes)
}

/// Jacobi, ad-invariance of the Killing form, the principal triple and
/// multiplicativity of every Z/m grading, on all basis triples.
pub fn structural_invariants(names: &[&str], exec: Exec) -> CheckReport {
    let outcomes = exec.map(names, |&name| {
        let g = alg(name);
        let n = g.dim();
        let basis: Vec<Vector<C>> = (0..n).map(|i| g.basis(i)).collect();
        let brackets: Vec<Vec<Vector<C>>> = basis.iter().map(|x| basis.iter().map(|y| g.bracket(x, y)).collect()).collect();
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let j1 = g.bracket(&basis[a], &brackets[b][c]);
                    let j2 = g.bracket(&basis[b], &brackets[c][a]);
                    let j3 = g.bracket(&basis[c], &brackets[a][b]);
                    if !vis_zero(&crate::linalg::vadd(&crate::linalg::vadd(&j1, &j2), &j3)) {
                        return Err(format!("{name}: Jacobi fails on ({a}, {b}, {c})"));
                    }
                    if g.killing(&brackets[a][b], &basis[c]) != g.killing(&basis[a], &brackets[b][c]) {
                        return Err(format!("{name}: Killing form not invariant on ({a}, {b}, {c})"));
                    }
                }
            }
        }
        let (pm, pp): (Vector<C>, Vector<C>) = (g.p_minus(), g.p_plus());
        let two_rho = vscale(&g.rho_check::<C>(), &C::from_int(2));
        let triple = g.bracket(&two_rho, &pm) == vscale(&pm, &C::from_int(-2))
            && g.bracket(&two_rho, &pp) == vscale(&pp, &C::from_int(2))
            && vis_zero(&vsub(&g.bracket(&pp, &pm), &two_rho));
        if !triple {
            return Err(format!("{name}: principal triple relations fail"));
        }
        let heights = g.weights();
        for m in 1..=g.coxeter_number() + 1 {
            let grading = g.grading(m);
            for a in 0..n {
                for b in 0..n {
                    if !grading.is_homogeneous(&brackets[a][b], heights[a] + heights[b]) {
                        return Err(format!("{name}: Z/{m} grading not multiplicative on ({a}, {b})"));
                    }
                }
            }
        }
        Ok(())
    });
    CheckReport::collect("structural-invariants", outcomes)
}

pub fn all_checks(seed: u64, exec: Exec) -> Vec<CheckReport> {
    vec![
        dim_match_grid(&["A1", "A2", "G2"], exec),
        slope_agreement(&["A1", "A2"], 100, seed, exec),
        minimal_form_round_trip(&["A1", "A2"], 50, seed, exec),
        fiber_independence(&["A1", "A2"], 20, seed, exec),
        hitchin_image(50, 5, seed, exec),
        little_weyl_fibers(20, seed, exec),
        langlands_coherence(20, seed, exec),
        airy_checks(&["A1", "A2"]),
        ktype_structure(50, seed, exec),
        structural_invariants(&SUPPORTED, exec),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_batches_pass() {
        let seed = 3;
        assert!(dim_match_grid(&["A1"], Exec::Sequential).passed());
        assert!(slope_agreement(&["A1"], 4, seed, Exec::Sequential).passed());
        assert!(minimal_form_round_trip(&["A1"], 2, seed, Exec::Sequential).passed());
        assert!(fiber_independence(&["A1"], 3, seed, Exec::Sequential).passed());
        assert!(little_weyl_fibers(3, seed, Exec::Sequential).passed());
        assert!(airy_checks(&["A1"]).passed());
    }

    #[test]
    fn failures_are_reported() {
        let r = CheckReport::collect("x", vec![Ok(()), Err("bad".into())]);
        assert!(!r.passed());
        assert_eq!(r.to_wire()["failures"], json!(["bad"]));
        assert!(!CheckReport::collect("empty", vec![]).passed());
    }
}
