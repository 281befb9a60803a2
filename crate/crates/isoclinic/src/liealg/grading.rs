use super::LieAlgebra;
use crate::linalg::{Subspace, Vector};
use crate::scalar::Scalar;

/// Z/m-grading cut out by Ad(rho_check(zeta_m)): g_i is spanned by the root
/// vectors of height congruent to i, with the Cartan in g_0.
#[derive(Debug, Clone, PartialEq)]
pub struct Grading {
    pub modulus: u32,
    pub pieces: Vec<Vec<usize>>,
}

impl Grading {
    pub fn new(g: &LieAlgebra, m: u32) -> Self {
        assert!(m >= 1, "grading modulus must be positive");
        let mut pieces = vec![Vec::new(); m as usize];
        for (i, w) in g.weights().iter().enumerate() {
            pieces[w.rem_euclid(m as i64) as usize].push(i);
        }
        Grading { modulus: m, pieces }
    }

    pub fn residue(&self, i: i64) -> usize {
        i.rem_euclid(self.modulus as i64) as usize
    }

    pub fn piece(&self, i: i64) -> &[usize] {
        &self.pieces[self.residue(i)]
    }

    pub fn dim(&self, i: i64) -> usize {
        self.piece(i).len()
    }

    pub fn subspace<F: Scalar>(&self, g: &LieAlgebra, i: i64) -> Subspace<F> {
        let vecs: Vec<Vector<F>> = self.piece(i).iter().map(|&k| g.basis(k)).collect();
        Subspace::span(g.dim(), &vecs)
    }

    /// Component of x in g_i.
    pub fn project<F: Scalar>(&self, x: &[F], i: i64) -> Vector<F> {
        let mut out = vec![F::zero(); x.len()];
        for &k in self.piece(i) {
            out[k] = x[k].clone();
        }
        out
    }

    pub fn is_homogeneous<F: Scalar>(&self, x: &[F], i: i64) -> bool {
        let r = self.residue(i);
        x.iter().enumerate().all(|(k, c)| c.is_zero() || self.pieces[r].contains(&k))
    }
}

impl LieAlgebra {
    pub fn grading(&self, m: u32) -> Grading {
        Grading::new(self, m)
    }
}
