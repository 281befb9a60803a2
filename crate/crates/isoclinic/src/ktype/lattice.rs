use super::{KTypeError, ToralDatum};
use crate::linalg::{Matrix, Subspace, Vector};
use crate::scalar::Scalar;
use serde_json::{json, Value};
use std::collections::BTreeMap;

/// A u-graded lattice: prescribed slices below `full_from`, the whole graded
/// piece g_i from there on, and zero below the lowest listed level.
#[derive(Debug, Clone, PartialEq)]
pub struct GradedLattice<F> {
    pub levels: BTreeMap<i64, Subspace<F>>,
    pub full_from: i64,
}

impl<F: Scalar> GradedLattice<F> {
    pub fn slice(&self, datum: &ToralDatum<F>, i: i64) -> Subspace<F> {
        if i >= self.full_from {
            datum.piece(i)
        } else {
            self.levels.get(&i).cloned().unwrap_or_else(|| Subspace::zero(datum.algebra.dim()))
        }
    }

    /// Whether sum x_i u^i lies in the lattice.
    pub fn contains(&self, datum: &ToralDatum<F>, x: &BTreeMap<i64, Vector<F>>) -> bool {
        x.iter().all(|(&i, v)| self.slice(datum, i).contains(v))
    }

    /// Dimension of the lattice modulo u^top.
    pub fn dim_below(&self, datum: &ToralDatum<F>, top: i64) -> usize {
        let low = self.levels.keys().next().copied().unwrap_or(self.full_from).min(self.full_from);
        (low..top).map(|i| self.slice(datum, i).dim()).sum()
    }

    pub fn to_wire(&self, datum: &ToralDatum<F>) -> Value {
        let g = &datum.algebra;
        let mut map = serde_json::Map::new();
        for (i, s) in &self.levels {
            map.insert(i.to_string(), Value::Array(s.basis().iter().map(|b| g.element_to_wire(b)).collect()));
        }
        json!({ "levels": Value::Object(map), "full_from": self.full_from })
    }
}

#[derive(Debug, Clone)]
pub struct KTypeLattices<F: Scalar> {
    pub j_prime: GradedLattice<F>,
    pub j: GradedLattice<F>,
    pub bar_j: GradedLattice<F>,
    pub j_plus_perp: GradedLattice<F>,
    pub j_perp: GradedLattice<F>,
    pub lagrangian: Option<Subspace<F>>,
    pub lagrangian_perp: Option<Subspace<F>>,
}

/// Exact checks of the structure of a toral K-type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KTypeReport {
    pub tau_dims: bool,
    pub torus_zero: bool,
    pub direct_sum: bool,
    pub lagrangian_half: bool,
    pub isotropic: bool,
    pub nondegenerate: bool,
    pub lagrangian_bracket: bool,
    pub ideal: bool,
    pub bar_j_abelian: bool,
    pub pairing_vanishes: bool,
    pub perfect_pairing: bool,
}

impl KTypeReport {
    pub fn all_ok(&self) -> bool {
        self.tau_dims
            && self.torus_zero
            && self.direct_sum
            && self.lagrangian_half
            && self.isotropic
            && self.nondegenerate
            && self.lagrangian_bracket
            && self.ideal
            && self.bar_j_abelian
            && self.pairing_vanishes
            && self.perfect_pairing
    }

    pub fn to_wire(&self) -> Value {
        json!({
            "tau_dims": self.tau_dims,
            "torus_zero": self.torus_zero,
            "direct_sum": self.direct_sum,
            "lagrangian_half": self.lagrangian_half,
            "isotropic": self.isotropic,
            "nondegenerate": self.nondegenerate,
            "lagrangian_bracket": self.lagrangian_bracket,
            "ideal": self.ideal,
            "bar_j_abelian": self.bar_j_abelian,
            "pairing_vanishes": self.pairing_vanishes,
            "perfect_pairing": self.perfect_pairing,
            "ok": self.all_ok(),
        })
    }
}

/// Elements of g_(-i) that are Killing-orthogonal to `sub` (a subspace of g_i).
fn annihilator<F: Scalar>(datum: &ToralDatum<F>, i: i64, sub: &Subspace<F>) -> Subspace<F> {
    let g = &datum.algebra;
    let basis = datum.piece(-i).basis().to_vec();
    if sub.dim() == 0 {
        return datum.piece(-i);
    }
    let rows: Vec<Vector<F>> = sub.basis().iter().map(|s| basis.iter().map(|b| g.killing(b, s)).collect()).collect();
    let coeffs = Matrix::from_rows(&rows).kernel();
    let vecs: Vec<Vector<F>> = coeffs
        .iter()
        .map(|c| {
            let mut x = g.zero::<F>();
            for (ci, b) in c.iter().zip(&basis) {
                crate::linalg::vaxpy(&mut x, ci, b);
            }
            x
        })
        .collect();
    Subspace::span(g.dim(), &vecs)
}

fn killing_gram<F: Scalar>(datum: &ToralDatum<F>, a: &[Vector<F>], b: &[Vector<F>]) -> Matrix<F> {
    let g = &datum.algebra;
    let rows: Vec<Vector<F>> = a.iter().map(|x| b.iter().map(|y| g.killing(x, y)).collect()).collect();
    Matrix::from_rows(&rows)
}

impl<F: Scalar> ToralDatum<F> {
    pub fn build_lattices(&self) -> Result<KTypeLattices<F>, KTypeError> {
        let n = self.n;
        let dim = self.algebra.dim();
        let lagrangian = self.lagrangian()?;
        let lagrangian_perp = lagrangian.as_ref().map(|l| annihilator(self, n / 2, l));

        let mut jp = BTreeMap::new();
        for i in (n + 1) / 2..=n {
            jp.insert(i, self.tau_piece(i).clone());
        }
        if let Some(l) = &lagrangian {
            jp.insert(n / 2, l.clone());
        }
        let j_prime = GradedLattice { levels: jp, full_from: n + 1 };

        let mut jl = BTreeMap::new();
        for i in 1..=n {
            jl.insert(i, self.torus_piece(i).sum(&j_prime.slice(self, i)));
        }
        let j = GradedLattice { levels: jl, full_from: n + 1 };

        let bar_j = GradedLattice {
            levels: (1..=n).map(|i| (i, self.torus_piece(i).clone())).collect(),
            full_from: i64::MAX,
        };

        let mut pp = BTreeMap::new();
        let mut jperp = BTreeMap::new();
        let perp_full;
        match &lagrangian_perp {
            None => {
                for i in -n..=-(n + 1) / 2 {
                    pp.insert(i, self.torus_piece(i).clone());
                }
                perp_full = -(n - 1) / 2;
            }
            Some(mp) => {
                for i in -n..=-n / 2 - 1 {
                    pp.insert(i, self.torus_piece(i).clone());
                }
                pp.insert(-n / 2, mp.clone());
                jperp.insert(-n / 2, self.tau_piece(-n / 2).intersect(mp));
                perp_full = -n / 2 + 1;
            }
        }
        for i in perp_full..=-1 {
            jperp.insert(i, self.tau_piece(i).clone());
        }
        let j_plus_perp = GradedLattice { levels: pp, full_from: perp_full };
        let j_perp = GradedLattice { levels: jperp, full_from: 0 };
        debug_assert!(j_plus_perp.levels.values().all(|s| s.ambient() == dim));
        Ok(KTypeLattices { j_prime, j, bar_j, j_plus_perp, j_perp, lagrangian, lagrangian_perp })
    }

    pub fn verify(&self, lat: &KTypeLattices<F>) -> KTypeReport {
        let g = &self.algebra;
        let n = self.n;
        let m = self.m as i64;
        let roots = g.num_roots();
        let tau_dims = roots.is_multiple_of(self.m as usize) && self.tau.iter().all(|t| t.dim() == roots / self.m as usize);
        let torus_zero = self.torus_piece(0).dim() == 0;
        let direct_sum = (0..m).all(|i| {
            let (t, tau) = (self.torus_piece(i), self.tau_piece(i));
            t.dim() + tau.dim() == self.grading.dim(i) && t.intersect(tau).dim() == 0
        });

        let (mut lagrangian_half, mut isotropic, mut nondegenerate, mut lagrangian_bracket) = (true, true, true, true);
        if let Some(l) = &lat.lagrangian {
            let tau_half = self.tau_piece(n / 2);
            lagrangian_half = 2 * l.dim() == tau_half.dim() && l.is_subspace_of(tau_half);
            isotropic = self.symplectic_gram(l.basis()).is_zero();
            nondegenerate = !self.symplectic_gram(tau_half.basis()).det().is_zero();
            let tau_n = self.tau_piece(n);
            lagrangian_bracket =
                l.basis().iter().all(|x| l.basis().iter().all(|y| tau_n.contains(&g.bracket(x, y))));
            lagrangian_half &= lat
                .lagrangian_perp
                .as_ref()
                .is_some_and(|mp| self.torus_piece(-n / 2).is_subspace_of(mp));
        }

        // [j, j'] in j' and [j, j] in j' (so that bar j is abelian); levels
        // above N lie in p(N+1) and are automatic
        let mut ideal = true;
        let mut bar_j_abelian = true;
        for a in 1..=n {
            let ja = lat.j.slice(self, a);
            for b in 1..=n - a {
                let target = lat.j_prime.slice(self, a + b);
                let jpb = lat.j_prime.slice(self, b);
                let jb = lat.j.slice(self, b);
                for x in ja.basis() {
                    ideal &= jpb.basis().iter().all(|y| target.contains(&g.bracket(x, y)));
                    bar_j_abelian &= jb.basis().iter().all(|y| target.contains(&g.bracket(x, y)));
                }
            }
        }
        for a in 1..=n {
            for b in 1..=n {
                let (ta, tb) = (self.torus_piece(a), self.torus_piece(b));
                bar_j_abelian &= ta.basis().iter().all(|x| tb.basis().iter().all(|y| crate::linalg::vis_zero(&g.bracket(x, y))));
            }
        }

        // j^(+,perp) is exactly the annihilator of j^+ under Res kappa du/u
        let mut pairing_vanishes = true;
        for b in (n / 2).max(1)..=n {
            let plus = lat.j_prime.slice(self, b);
            let perp = lat.j_plus_perp.slice(self, -b);
            if plus.dim() > 0 && perp.dim() > 0 {
                pairing_vanishes &= killing_gram(self, plus.basis(), perp.basis()).is_zero();
            }
            pairing_vanishes &= plus.dim() + perp.dim() == self.grading.dim(b);
        }
        for b in 1..n / 2 {
            pairing_vanishes &= lat.j_plus_perp.slice(self, -b).dim() == self.grading.dim(b);
        }

        let perfect_pairing = (1..=n).all(|i| {
            let (t, s) = (self.torus_piece(i), self.torus_piece(-i));
            t.dim() == s.dim() && (t.dim() == 0 || !killing_gram(self, t.basis(), s.basis()).det().is_zero())
        }) && (-n..=-1).all(|i| {
            let quotient = lat.j_plus_perp.slice(self, i).dim() - lat.j_perp.slice(self, i).dim();
            quotient == self.torus_piece(i).dim()
        });

        KTypeReport {
            tau_dims,
            torus_zero,
            direct_sum,
            lagrangian_half,
            isotropic,
            nondegenerate,
            lagrangian_bracket,
            ideal,
            bar_j_abelian,
            pairing_vanishes,
            perfect_pairing,
        }
    }
}

impl<F: Scalar> KTypeLattices<F> {
    pub fn to_wire(&self, datum: &ToralDatum<F>) -> Value {
        let g = &datum.algebra;
        let sub = |s: &Option<Subspace<F>>| match s {
            Some(s) => Value::Array(s.basis().iter().map(|b| g.element_to_wire(b)).collect()),
            None => Value::Null,
        };
        json!({
            "j_prime": self.j_prime.to_wire(datum),
            "j_plus": self.j_prime.to_wire(datum),
            "j": self.j.to_wire(datum),
            "bar_j": self.bar_j.to_wire(datum),
            "bar_j_dim": self.bar_j.levels.values().map(Subspace::dim).sum::<usize>(),
            "j_plus_perp": self.j_plus_perp.to_wire(datum),
            "j_perp": self.j_perp.to_wire(datum),
            "lagrangian": sub(&self.lagrangian),
            "lagrangian_perp": sub(&self.lagrangian_perp),
        })
    }
}

#[cfg(test)]
mod tests {
    use crate::ktype::ToralDatum;
    use crate::liealg::LieAlgebra;
    use crate::scalar::Cyclotomic;

    #[test]
    fn sl2_lattices() {
        let g = LieAlgebra::from_name("A1").unwrap();
        let d = ToralDatum::<Cyclotomic>::new(&g, 2, 3, None).unwrap();
        let lat = d.build_lattices().unwrap();
        assert_eq!(lat.j_plus_perp.slice(&d, -3), d.torus_piece(1).clone());
        assert_eq!(lat.j_plus_perp.slice(&d, -2).dim(), 0);
        assert_eq!(lat.j_plus_perp.full_from, -1);
        assert_eq!(lat.bar_j.levels.values().map(|s| s.dim()).sum::<usize>(), 2);
        assert!(d.verify(&lat).all_ok());
    }

    #[test]
    fn sl3_even_depth_lattices() {
        let g = LieAlgebra::from_name("A2").unwrap();
        let d = ToralDatum::<Cyclotomic>::new(&g, 3, 4, None).unwrap();
        let lat = d.build_lattices().unwrap();
        let r = d.verify(&lat);
        assert!(r.all_ok(), "{r:?}");
        assert_eq!(lat.lagrangian.as_ref().unwrap().dim(), 1);
        assert_eq!(lat.lagrangian_perp.as_ref().unwrap().dim(), 2);
    }
}
