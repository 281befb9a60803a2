//! Jordan decomposition, regularity and rational eigen-splittings.

use super::{LieAlgebra, LieError};
use crate::linalg::{vis_zero, vsub, Decomposer, Matrix, Subspace, Vector};
use crate::poly;
use crate::scalar::{Rational, Scalar};

#[derive(Debug, Clone, PartialEq)]
pub struct JordanParts<F> {
    pub semisimple: Vector<F>,
    pub nilpotent: Vector<F>,
}

/// Splitting of g into ad(x)-eigenspaces with rational eigenvalues.
#[derive(Debug, Clone)]
pub struct EigenDecomposition<F> {
    pub eigenvalues: Vec<Rational>,
    pub spaces: Vec<Subspace<F>>,
    decomposer: Decomposer<F>,
}

impl<F: Scalar> EigenDecomposition<F> {
    /// Components of v in each eigenspace, in the order of `eigenvalues`.
    pub fn split(&self, v: &[F]) -> Vec<Vector<F>> {
        self.decomposer.split(v)
    }
}

impl LieAlgebra {
    /// Solve ad(s) = target for s; ad is injective on a simple algebra.
    fn un_ad<F: Scalar>(&self, target: &Matrix<F>) -> Option<Vector<F>> {
        let n = self.dim();
        let ads: Vec<Matrix<F>> = (0..n).map(|a| self.ad(&self.basis::<F>(a))).collect();
        let mut rows = Vec::with_capacity(n * n);
        let mut rhs = Vec::with_capacity(n * n);
        for r in 0..n {
            for c in 0..n {
                rows.push(ads.iter().map(|m| m.get(r, c).clone()).collect::<Vector<F>>());
                rhs.push(target.get(r, c).clone());
            }
        }
        Matrix::from_rows(&rows).solve(&rhs)
    }

    /// Additive Jordan decomposition computed without splitting the
    /// spectrum: Newton iteration on the squarefree part of the
    /// characteristic polynomial of ad(x).
    pub fn jordan_decompose<F: Scalar>(&self, x: &[F]) -> Result<JordanParts<F>, LieError> {
        self.check_element(x)?;
        let a = self.ad(x);
        let chi = a.char_poly();
        let p = poly::squarefree_part(&chi);
        let dp = poly::derivative(&p);
        let mut s = a.clone();
        for _ in 0..64 {
            let ps = poly::eval_matrix(&p, &s);
            if ps.is_zero() {
                break;
            }
            let inv = poly::eval_matrix(&dp, &s).inverse().ok_or(LieError::NonSplitSpectrum)?;
            s = s.sub(&ps.mul(&inv));
        }
        if s == a {
            return Ok(JordanParts { semisimple: x.to_vec(), nilpotent: self.zero() });
        }
        let semisimple = self.un_ad(&s).ok_or(LieError::NonSplitSpectrum)?;
        let nilpotent = vsub(x, &semisimple);
        Ok(JordanParts { semisimple, nilpotent })
    }

    pub fn is_semisimple<F: Scalar>(&self, x: &[F]) -> bool {
        let a = self.ad(x);
        let p = poly::squarefree_part(&a.char_poly());
        poly::eval_matrix(&p, &a).is_zero()
    }

    pub fn is_nilpotent<F: Scalar>(&self, x: &[F]) -> bool {
        self.ad(x).pow(self.dim() as u32).is_zero()
    }

    pub fn is_regular_semisimple<F: Scalar>(&self, x: &[F]) -> Result<bool, LieError> {
        self.check_element(x)?;
        if vis_zero(x) {
            return Ok(false);
        }
        Ok(self.is_semisimple(x) && self.centralizer(&[x.to_vec()]).dim() == self.rank())
    }

    /// exp(ad x) for ad-nilpotent x.
    pub fn exp_ad<F: Scalar>(&self, x: &[F]) -> Result<Matrix<F>, LieError> {
        let n = self.dim();
        let a = self.ad(x);
        let mut term = Matrix::identity(n);
        let mut acc = Matrix::identity(n);
        for k in 1..=n as i64 {
            term = term.mul(&a).scale(&F::from_int(1).div_int(k));
            if term.is_zero() {
                return Ok(acc);
            }
            acc = acc.add(&term);
        }
        if term.mul(&a).is_zero() {
            Ok(acc)
        } else {
            Err(LieError::NotNilpotent)
        }
    }

    /// Ad of the Weyl group lift exp(e_i) exp(-f_i) exp(e_i).
    pub fn weyl_lift<F: Scalar>(&self, i: usize) -> Matrix<F> {
        let e = self.basis::<F>(self.simple_root_index(i, 1));
        let f = self.basis::<F>(self.simple_root_index(i, -1));
        let ee = self.exp_ad(&e).expect("root vectors are nilpotent");
        let ef = self.exp_ad(&crate::linalg::vneg(&f)).expect("root vectors are nilpotent");
        ee.mul(&ef).mul(&ee)
    }

    /// Ad of the torus element exp(2 pi i mu / order) for mu in the Cartan
    /// with integral root values; diagonal in the root basis.
    pub fn torus_ad<F: Scalar>(&self, mu: &[Rational], order: u32) -> Result<Matrix<F>, LieError> {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for b in 0..n {
            let w = self.root_value_on(b, mu);
            let p = crate::scalar::rational::to_i64(&w).ok_or(LieError::NonIntegralWeight)?;
            m.set(b, b, F::root_of_unity(order, p));
        }
        Ok(m)
    }

    /// Value of the root labelling basis vector b on a Cartan element
    /// (coroot coordinates); zero on the Cartan part.
    pub fn root_value_on(&self, b: usize, mu: &[Rational]) -> Rational {
        match &self.labels()[b] {
            super::BasisLabel::Cartan(_) => Rational::from_integer(0.into()),
            super::BasisLabel::Root(v) => {
                let a = self.cartan_matrix();
                let mut acc = Rational::from_integer(0.into());
                for (i, &ni) in v.iter().enumerate() {
                    for (j, cj) in mu.iter().enumerate() {
                        acc += cj * Rational::from_integer((ni * a[j][i]).into());
                    }
                }
                acc
            }
        }
    }

    /// Eigenspaces of ad(x) when x is semisimple with rational spectrum.
    pub fn rational_eigen_decomposition<F: Scalar>(&self, x: &[F]) -> Result<EigenDecomposition<F>, LieError> {
        let a = self.ad(x);
        let chi = a.char_poly();
        let chi_q: Option<Vec<Rational>> = chi.iter().map(F::as_rational).collect();
        let chi_q = chi_q.ok_or(LieError::NonSplitSpectrum)?;
        let roots = poly::rational_roots(&chi_q).ok_or(LieError::NonSplitSpectrum)?;
        let n = self.dim();
        let mut spaces = Vec::new();
        for lam in &roots {
            let shifted = a.sub(&Matrix::identity(n).scale(&F::from_rational(lam)));
            spaces.push(Subspace::span(n, &shifted.kernel()));
        }
        if spaces.iter().map(Subspace::dim).sum::<usize>() != n {
            return Err(LieError::NonSplitSpectrum);
        }
        let decomposer = Decomposer::new(n, spaces.iter().map(|s| s.basis().to_vec()).collect())
            .ok_or(LieError::NonSplitSpectrum)?;
        Ok(EigenDecomposition { eigenvalues: roots, spaces, decomposer })
    }
}
