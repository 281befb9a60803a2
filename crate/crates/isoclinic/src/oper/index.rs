use super::OperError;
use crate::liealg::LieAlgebra;
use crate::linalg::Vector;
use crate::scalar::{Cyclotomic, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::collections::{BTreeMap, BTreeSet};

/// Exponents l_ij = (d_i - 1) N + m (d_i - 1 - j) of the u-form, restricted
/// to -N <= l_ij <= -1.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexSet {
    pub n: i64,
    pub m: i64,
    pub ell: BTreeMap<(usize, i64), i64>,
    /// Pairs with -N < l_ij <= -1.
    pub a_nu: BTreeSet<(usize, i64)>,
    /// Pairs with -N <= l_ij <= -1.
    pub a_nu_tilde: BTreeSet<(usize, i64)>,
}

pub fn ell(d: u32, n: i64, m: i64, j: i64) -> i64 {
    let d = d as i64;
    (d - 1) * n + m * (d - 1 - j)
}

impl IndexSet {
    pub fn new(g: &LieAlgebra, n: i64, m: i64) -> Result<Self, OperError> {
        if n < 1 || m < 1 || num_integer::gcd(n, m) != 1 {
            return Err(OperError::NotCoprime { n, m });
        }
        let mut table = BTreeMap::new();
        let mut a_nu = BTreeSet::new();
        let mut a_nu_tilde = BTreeSet::new();
        for (idx, &d) in g.degrees().iter().enumerate() {
            let base = (d as i64 - 1) * (n + m);
            // -N <= base - m j <= -1
            let lo = num_integer::Integer::div_ceil(&(base + 1), &m);
            let hi = num_integer::Integer::div_floor(&(base + n), &m);
            for j in lo..=hi {
                let l = ell(d, n, m, j);
                table.insert((idx + 1, j), l);
                a_nu_tilde.insert((idx + 1, j));
                if l > -n {
                    a_nu.insert((idx + 1, j));
                }
            }
        }
        Ok(IndexSet { n, m, ell: table, a_nu, a_nu_tilde })
    }

    /// Pairs with l_ij = l.
    pub fn block(&self, l: i64) -> Vec<(usize, i64)> {
        self.ell.iter().filter(|(_, &v)| v == l).map(|(k, _)| *k).collect()
    }

    /// The leading pairs, l_ij = -N.
    pub fn leading(&self) -> Vec<(usize, i64)> {
        self.block(-self.n)
    }

    pub fn to_wire(&self) -> Value {
        let pairs = |s: &BTreeSet<(usize, i64)>| s.iter().map(|(i, j)| json!([i, j, self.ell[&(*i, *j)]])).collect::<Vec<_>>();
        json!({ "N": self.n, "m": self.m, "A_nu": pairs(&self.a_nu), "A_nu_tilde": pairs(&self.a_nu_tilde) })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimMatchRow {
    pub ell: i64,
    pub count: usize,
    pub dim: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimMatchReport {
    pub rows: Vec<DimMatchRow>,
    pub pass: bool,
    /// The regular semisimple element of g_-N used.
    pub element: Vector<Cyclotomic>,
}

impl DimMatchReport {
    pub fn to_wire(&self) -> Value {
        json!({
            "pass": self.pass,
            "rows": self.rows.iter().map(|r| json!({ "ell": r.ell, "count": r.count, "dim": r.dim })).collect::<Vec<_>>(),
            "element": self.element.iter().map(Scalar::to_wire).collect::<Vec<_>>(),
        })
    }
}

/// A regular semisimple element of the graded piece g_k (heights congruent
/// to k mod m): first the sum of the basis vectors, then seeded random small
/// integer combinations.
pub fn regular_element_in_piece<F: Scalar>(g: &LieAlgebra, m: u32, k: i64) -> Option<Vector<F>> {
    let grading = g.grading(m);
    let piece = grading.piece(k).to_vec();
    if piece.is_empty() {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(((m as u64) << 32) ^ (k as u64));
    for attempt in 0..200 {
        let mut x = g.zero::<F>();
        for &b in &piece {
            let c = if attempt == 0 { 1 } else { rng.gen_range(-3..=3) };
            x[b] = F::from_int(c);
        }
        if g.is_regular_semisimple(&x).unwrap_or(false) {
            return Some(x);
        }
    }
    None
}

/// Compare |A_(nu,l)| with dim of the centralizer of X in g_l for every
/// -N < l <= -1, with X regular semisimple in g_-N.
pub fn dim_match_check(g: &LieAlgebra, m: i64, n: i64) -> Result<DimMatchReport, OperError> {
    let index = IndexSet::new(g, n, m)?;
    let x = regular_element_in_piece::<Cyclotomic>(g, m as u32, -n).ok_or(OperError::NoRegularElement(-n))?;
    let torus = g.centralizer(std::slice::from_ref(&x));
    let grading = g.grading(m as u32);
    let mut rows = Vec::new();
    for l in (-n + 1)..=-1 {
        let count = index.a_nu.iter().filter(|p| index.ell[p] == l).count();
        let dim = torus.intersect(&grading.subspace(g, l)).dim();
        rows.push(DimMatchRow { ell: l, count, dim });
    }
    let pass = rows.iter().all(|r| r.count == r.dim);
    Ok(DimMatchReport { rows, pass, element: x })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[(usize, i64)]) -> BTreeSet<(usize, i64)> {
        v.iter().copied().collect()
    }

    #[test]
    fn index_examples() {
        let a1 = LieAlgebra::from_name("A1").unwrap();
        let s = IndexSet::new(&a1, 3, 2).unwrap();
        assert_eq!(s.a_nu, set(&[(1, 3)]));
        assert_eq!(s.a_nu_tilde, set(&[(1, 3), (1, 4)]));
        assert_eq!(s.ell[&(1, 4)], -3);
        let a2 = LieAlgebra::from_name("A2").unwrap();
        let s = IndexSet::new(&a2, 4, 3).unwrap();
        assert_eq!(s.a_nu, set(&[(1, 3), (2, 5)]));
        assert_eq!(s.a_nu_tilde, set(&[(1, 3), (2, 5), (2, 6)]));
        let s = IndexSet::new(&a1, 1, 2).unwrap();
        assert!(s.a_nu.is_empty());
        assert_eq!(s.a_nu_tilde, set(&[(1, 2)]));
        assert!(matches!(IndexSet::new(&a1, 2, 2), Err(OperError::NotCoprime { .. })));
    }

    #[test]
    fn dim_match_examples() {
        let a1 = LieAlgebra::from_name("A1").unwrap();
        let r = dim_match_check(&a1, 2, 3).unwrap();
        assert!(r.pass);
        assert_eq!(r.rows, vec![DimMatchRow { ell: -2, count: 0, dim: 0 }, DimMatchRow { ell: -1, count: 1, dim: 1 }]);
        let a2 = LieAlgebra::from_name("A2").unwrap();
        let r = dim_match_check(&a2, 3, 4).unwrap();
        assert!(r.pass);
        let counts: Vec<(i64, usize)> = r.rows.iter().map(|r| (r.ell, r.count)).collect();
        assert_eq!(counts, vec![(-3, 0), (-2, 1), (-1, 1)]);
        assert!(dim_match_check(&a1, 2, 1).unwrap().rows.is_empty());
    }
}
