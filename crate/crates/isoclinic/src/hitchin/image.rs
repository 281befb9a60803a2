use super::{exact_root, form_series, local_hitchin, Differential, HitchinError, HitchinPoint};
use crate::ktype::ToralDatum;
use crate::liealg::LieAlgebra;
use crate::linalg::{vaxpy, Matrix, Vector};
use crate::oper::ell;
use crate::par::Exec;
use crate::scalar::Scalar;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// Lowest allowed t-exponent -d_i - floor(d_i N / m) per degree.
pub fn hitchin_image_lattice(g: &LieAlgebra, n: i64, m: i64) -> Vec<i64> {
    g.degrees().iter().map(|&d| -(d as i64) - (d as i64 * n).div_euclid(m)).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessKind {
    /// A torus-valued preimage of base + monomial, checked by recomputing.
    Exact,
    /// The leading-level map is étale at the base point and every lower
    /// level was solved exactly.
    Jacobian,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurjectivityWitness {
    pub degree: usize,
    pub exponent: i64,
    pub level: i64,
    pub kind: WitnessKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HitchinImageReport {
    pub bounds: Vec<i64>,
    pub samples: usize,
    pub contained: bool,
    /// Index of the first sample whose image left the lattice.
    pub first_violation: Option<usize>,
    pub window: i64,
    pub witnesses: Vec<SurjectivityWitness>,
}

impl HitchinImageReport {
    pub fn surjective(&self) -> bool {
        !self.witnesses.is_empty()
    }

    pub fn to_wire(&self) -> Value {
        json!({
            "bounds": self.bounds,
            "samples": self.samples,
            "contained": self.contained,
            "first_violation": self.first_violation,
            "window": self.window,
            "witnesses": self.witnesses.iter().map(|w| json!({
                "degree": w.degree,
                "exponent": w.exponent,
                "level": w.level,
                "kind": match w.kind { WitnessKind::Exact => "exact", WitnessKind::Jacobian => "jacobian" },
            })).collect::<Vec<_>>(),
            "surjective": self.surjective(),
        })
    }
}

/// Pairs (i, j) with t-exponent -j-1 in [e_i, e_i + window).
fn window_pairs(bounds: &[i64], window: i64) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    for (i, &e) in bounds.iter().enumerate() {
        for k in e..e + window {
            out.push((i + 1, -k - 1));
        }
    }
    out
}

fn pair_level<F: Scalar>(datum: &ToralDatum<F>, (i, j): (usize, i64)) -> i64 {
    ell(datum.algebra.degrees()[i - 1], datum.n, datum.m as i64, j)
}

pub(crate) fn evaluate<F: Scalar>(datum: &ToralDatum<F>, form: &BTreeMap<i64, Vector<F>>) -> Result<HitchinPoint<F>, HitchinError> {
    local_hitchin(&datum.algebra, &form_series(form, datum.m), Differential::DuOverU)
}

/// Extend `form` (fixed below `from`) by torus components at levels
/// from..=to so that h_(i,j) matches `targets` at every listed pair whose
/// level lies in that range. Each level is linear in its new component.
pub(crate) fn solve_levels<F: Scalar>(
    datum: &ToralDatum<F>,
    mut form: BTreeMap<i64, Vector<F>>,
    targets: &BTreeMap<(usize, i64), F>,
    from: i64,
    to: i64,
) -> Result<BTreeMap<i64, Vector<F>>, HitchinError> {
    form.retain(|&l, _| l < from);
    for l in from..=to {
        let rows: Vec<(usize, i64)> = targets.keys().copied().filter(|&p| pair_level(datum, p) == l).collect();
        if rows.is_empty() {
            continue;
        }
        let now = evaluate(datum, &form)?;
        let current: Vec<F> = rows.iter().map(|&(i, j)| now.coordinate(i, j)).collect::<Result<_, _>>()?;
        let rhs: Vec<F> = rows.iter().zip(&current).map(|(p, c)| targets[p].sub(c)).collect();
        let basis = datum.torus_piece(l).basis().to_vec();
        if basis.is_empty() {
            if rhs.iter().all(|x| x.is_zero()) {
                continue;
            }
            return Err(HitchinError::SingularLevel(l));
        }
        let mut cols = Vec::with_capacity(basis.len());
        for b in &basis {
            let mut probe = form.clone();
            probe.insert(l, b.clone());
            let p = evaluate(datum, &probe)?;
            let col: Vec<F> = rows
                .iter()
                .zip(&current)
                .map(|(&(i, j), c)| p.coordinate(i, j).map(|v| v.sub(c)))
                .collect::<Result<_, _>>()?;
            cols.push(col);
        }
        let mat = Matrix::from_cols(rows.len(), &cols);
        let y = mat.solve(&rhs).ok_or(HitchinError::SingularLevel(l))?;
        let mut x = datum.algebra.zero::<F>();
        for (c, b) in y.iter().zip(&basis) {
            vaxpy(&mut x, c, b);
        }
        form.insert(l, x);
    }
    Ok(form)
}

fn random_vector<F: Scalar>(basis: &[Vector<F>], dim: usize, rng: &mut ChaCha8Rng) -> Vector<F> {
    let mut x = vec![F::zero(); dim];
    for b in basis {
        vaxpy(&mut x, &F::from_int(rng.gen_range(-3..=3)), b);
    }
    x
}

/// Containment on seeded samples of j^(+,perp) and a surjectivity witness
/// for every monomial t^k (dt)^(d_i) with e_i <= k < e_i + window.
pub fn verify_hitchin_image<F: Scalar>(
    datum: &ToralDatum<F>,
    samples: usize,
    window: i64,
    seed: u64,
    exec: Exec,
) -> Result<HitchinImageReport, HitchinError> {
    let g = &datum.algebra;
    let (n, m) = (datum.n, datum.m as i64);
    let bounds = hitchin_image_lattice(g, n, m);
    let pairs = window_pairs(&bounds, window);
    let top = pairs.iter().map(|&p| pair_level(datum, p)).max().unwrap_or(-1).max(-1);
    let lat = datum.build_lattices()?;

    // containment
    let seeds: Vec<u64> = (0..samples as u64).map(|s| seed.wrapping_mul(0x9E37_79B9).wrapping_add(s)).collect();
    let results = exec.map(&seeds, |&s| -> Result<bool, HitchinError> {
        let mut rng = ChaCha8Rng::seed_from_u64(s);
        let mut form = BTreeMap::new();
        for l in -n..=top {
            let slice = lat.j_plus_perp.slice(datum, l);
            let x = random_vector(slice.basis(), g.dim(), &mut rng);
            form.insert(l, x);
        }
        let p = evaluate(datum, &form)?;
        Ok(p.components.iter().zip(&bounds).all(|(s, &e)| {
            s.ramification() == 1 && s.valuation().is_none_or(|v| v >= e)
        }))
    });
    let mut first_violation = None;
    for (k, r) in results.into_iter().enumerate() {
        if !r? && first_violation.is_none() {
            first_violation = Some(k);
        }
    }

    // base point: Y at the leading level, seeded torus components above
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut base = BTreeMap::new();
    base.insert(-n, datum.y.clone());
    for l in -n + 1..=top {
        let x = random_vector(datum.torus_piece(l).basis(), g.dim(), &mut rng);
        base.insert(l, x);
    }
    let base_point = evaluate(datum, &base)?;
    let base_values: BTreeMap<(usize, i64), F> =
        pairs.iter().map(|&(i, j)| Ok(((i, j), base_point.coordinate(i, j)?))).collect::<Result<_, HitchinError>>()?;

    let witnesses = exec.map(&pairs, |&(i, j)| -> Result<SurjectivityWitness, HitchinError> {
        let level = pair_level(datum, (i, j));
        let exponent = -j - 1;
        let fail = HitchinError::SurjectivityWitnessFailed { degree: i, exponent };
        let mut target = base_values.clone();
        let bumped = target[&(i, j)].add(&F::one());
        target.insert((i, j), bumped);
        let (start, kind) = if level > -n {
            (base.clone(), WitnessKind::Exact)
        } else {
            match leading_rescale(datum, &base_values, (i, j), &target) {
                Some(y) => {
                    let mut s = BTreeMap::new();
                    s.insert(-n, y);
                    (s, WitnessKind::Exact)
                }
                None => {
                    if !leading_is_etale(datum) {
                        return Err(fail);
                    }
                    return Ok(SurjectivityWitness { degree: i, exponent, level, kind: WitnessKind::Jacobian });
                }
            }
        };
        let from = if level > -n { level } else { -n + 1 };
        let solved = solve_levels(datum, start, &target, from, top).map_err(|_| fail.clone())?;
        let p = evaluate(datum, &solved)?;
        for (&(a, b), v) in &target {
            if p.coordinate(a, b)? != *v {
                return Err(fail);
            }
        }
        Ok(SurjectivityWitness { degree: i, exponent, level, kind })
    });
    let witnesses = witnesses.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok(HitchinImageReport {
        bounds,
        samples,
        contained: first_violation.is_none(),
        first_violation,
        window,
        witnesses,
    })
}

/// When the Cartan subspace t_(Y,-N) is a line, the leading target is
/// reached by scaling Y; returns the rescaled leading component.
fn leading_rescale<F: Scalar>(
    datum: &ToralDatum<F>,
    base: &BTreeMap<(usize, i64), F>,
    pair: (usize, i64),
    target: &BTreeMap<(usize, i64), F>,
) -> Option<Vector<F>> {
    if datum.torus_piece(-datum.n).dim() != 1 {
        return None;
    }
    let leading: Vec<(usize, i64)> = base.keys().copied().filter(|&p| pair_level(datum, p) == -datum.n).collect();
    if leading != [pair] {
        return None;
    }
    let d = datum.algebra.degrees()[pair.0 - 1];
    let b = &base[&pair];
    if b.is_zero() {
        return None;
    }
    let s = exact_root(&target[&pair].div(b), d).ok()?;
    Some(crate::linalg::vscale(&datum.y, &s))
}

/// The differential of the basic invariants of the leading degrees,
/// restricted to t_(Y,-N), is invertible at Y.
fn leading_is_etale<F: Scalar>(datum: &ToralDatum<F>) -> bool {
    let g = &datum.algebra;
    let idx = match crate::oper::IndexSet::new(g, datum.n, datum.m as i64) {
        Ok(i) => i,
        Err(_) => return false,
    };
    let degrees: Vec<usize> = idx.leading().iter().map(|&(i, _)| i - 1).collect();
    let basis = datum.torus_piece(-datum.n).basis().to_vec();
    if degrees.len() != basis.len() {
        return false;
    }
    let rows: Vec<Vector<F>> = degrees
        .iter()
        .map(|&i| basis.iter().map(|b| g.invariant_differentials(&datum.y, b)[i].clone()).collect())
        .collect();
    !rows.is_empty() && !Matrix::from_rows(&rows).det().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Cyclotomic;

    #[test]
    fn sl2_lattice_bound() {
        let g = crate::liealg::LieAlgebra::from_name("A1").unwrap();
        assert_eq!(hitchin_image_lattice(&g, 3, 2), vec![-5]);
        let g2 = crate::liealg::LieAlgebra::from_name("G2").unwrap();
        assert_eq!(hitchin_image_lattice(&g2, 7, 6), vec![-4, -13]);
    }

    #[test]
    fn sl2_image_report() {
        let g = crate::liealg::LieAlgebra::from_name("A1").unwrap();
        let d = ToralDatum::<Cyclotomic>::new(&g, 2, 3, None).unwrap();
        let r = verify_hitchin_image(&d, 10, 5, 1, Exec::Sequential).unwrap();
        assert!(r.contained);
        assert_eq!(r.witnesses.len(), 5);
        assert!(r.witnesses.iter().all(|w| w.kind == WitnessKind::Exact));
    }
}
