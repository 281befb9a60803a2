//! Basic invariant polynomials and coordinates on the Kostant section.

use super::{LieAlgebra, LieError};
use crate::linalg::{char_poly, Matrix, Vector};
use crate::scalar::{Rational, Ring, Scalar};
use crate::series::Series;

/// How the invariant of a given degree is extracted from the invariant
/// representation: a characteristic polynomial coefficient, or the trace
/// of a power when that coefficient is decomposable.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InvariantKind {
    CharPoly,
    PowerSum,
}

impl LieAlgebra {
    fn rep_over<R: Ring>(&self, x: &[R], zero: &R, embed: &impl Fn(&Rational) -> R) -> Vec<Vec<R>> {
        if self.cartan_type.is_type_a() {
            let n = self.rep[0].len();
            let mut m = vec![vec![zero.clone(); n]; n];
            for (a, xa) in x.iter().enumerate() {
                if xa.is_zero() {
                    continue;
                }
                for (r, row) in self.rep[a].iter().enumerate() {
                    for (c, q) in row.iter().enumerate() {
                        if *q != Rational::from_integer(0.into()) {
                            m[r][c] = m[r][c].add(&xa.mul(&embed(q)));
                        }
                    }
                }
            }
            m
        } else {
            let n = self.dim();
            let mut m = vec![vec![zero.clone(); n]; n];
            for (a, xa) in x.iter().enumerate() {
                if xa.is_zero() {
                    continue;
                }
                for b in 0..n {
                    for &(k, s) in &self.brackets[a][b] {
                        m[k][b] = m[k][b].add(&xa.mul_int(s));
                    }
                }
            }
            m
        }
    }

    fn invariants_with<R: Ring>(
        &self,
        x: &[R],
        zero: &R,
        one: &R,
        embed: &impl Fn(&Rational) -> R,
        kinds: &[InvariantKind],
    ) -> Vec<R> {
        let m = self.rep_over(x, zero, embed);
        let size = m.len();
        let chi = char_poly(&m, zero, one);
        let mul = |a: &[Vec<R>], b: &[Vec<R>]| -> Vec<Vec<R>> {
            (0..size)
                .map(|i| {
                    (0..size)
                        .map(|j| {
                            let mut acc = zero.clone();
                            for k in 0..size {
                                if !a[i][k].is_zero() && !b[k][j].is_zero() {
                                    acc = acc.add(&a[i][k].mul(&b[k][j]));
                                }
                            }
                            acc
                        })
                        .collect()
                })
                .collect()
        };
        self.degrees
            .iter()
            .zip(kinds)
            .map(|(&d, kind)| match kind {
                InvariantKind::CharPoly => chi[size - d as usize].clone(),
                InvariantKind::PowerSum => {
                    let mut p = m.clone();
                    for _ in 1..d {
                        p = mul(&p, &m);
                    }
                    let mut tr = zero.clone();
                    for (i, row) in p.iter().enumerate() {
                        tr = tr.add(&row[i]);
                    }
                    tr
                }
            })
            .collect()
    }

    /// Choose per degree the extraction whose restriction to the Kostant
    /// section is triangular with nonzero diagonal, and record that
    /// diagonal.
    pub(super) fn compute_invariant_kinds(&self) -> (Vec<InvariantKind>, Vec<Rational>) {
        type C = crate::scalar::Cyclotomic;
        let n = self.rank();
        let mut kinds = Vec::with_capacity(n);
        let mut kappa = Vec::with_capacity(n);
        let f = self.p_minus::<C>();
        for i in 0..n {
            let x = crate::linalg::vadd(&f, &self.kostant::<C>(i));
            let mut chosen = None;
            for kind in [InvariantKind::CharPoly, InvariantKind::PowerSum] {
                let v = self.invariants_with(&x, &C::zero(), &C::one(), &C::from_rational, &vec![kind; n])[i].clone();
                if !v.is_zero() {
                    chosen = Some((kind, v.as_rational().expect("rational structure constants")));
                    break;
                }
            }
            let (kind, k) = chosen.expect("some invariant of each degree is nondegenerate on the Kostant section");
            kinds.push(kind);
            kappa.push(k);
        }
        (kinds, kappa)
    }

    /// Values I_(d_1)(x), ..., I_(d_n)(x) of the basic invariants.
    pub fn invariants<F: Scalar>(&self, x: &[F]) -> Vec<F> {
        self.invariants_with(x, &F::zero(), &F::one(), &F::from_rational, &self.invariant_kinds)
    }

    /// The same invariants evaluated over any ring containing the scalars.
    pub fn invariants_over<R: Ring>(&self, x: &[R], zero: &R, one: &R, embed: impl Fn(&Rational) -> R) -> Vec<R> {
        self.invariants_with(x, zero, one, &embed, &self.invariant_kinds)
    }

    /// Directional derivatives dI_k(x)[y], computed over dual numbers.
    pub fn invariant_differentials<F: Scalar>(&self, x: &[F], y: &[F]) -> Vec<F> {
        let dual: Vec<Series<F>> = x
            .iter()
            .zip(y)
            .map(|(a, b)| {
                let mut s = Series::new(1, 2);
                s.add_term(0, a.clone());
                s.add_term(1, b.clone());
                s
            })
            .collect();
        let zero = Series::new(1, crate::series::EXACT);
        let one = Series::constant(1, F::one());
        self.invariants_over(&dual, &zero, &one, |q| Series::constant(1, F::from_rational(q)))
            .into_iter()
            .map(|s| s.coeff(1).ok().flatten().cloned().unwrap_or_else(F::zero))
            .collect()
    }

    /// p_-1 + sum c_i p_i.
    pub fn kostant_element<F: Scalar>(&self, c: &[F]) -> Vector<F> {
        let mut x = self.p_minus::<F>();
        for (i, ci) in c.iter().enumerate() {
            crate::linalg::vaxpy(&mut x, ci, &self.kostant::<F>(i));
        }
        x
    }

    /// The coordinates c with I(p_-1 + sum c_i p_i) = I(x), solved
    /// degree by degree; the section element is then conjugate to x when
    /// x is regular.
    pub fn kostant_coordinates<F: Scalar>(&self, x: &[F]) -> Result<Vector<F>, LieError> {
        self.check_element(x)?;
        let target = self.invariants(x);
        self.kostant_coordinates_of_invariants(&target)
    }

    pub fn kostant_coordinates_of_invariants<F: Scalar>(&self, target: &[F]) -> Result<Vector<F>, LieError> {
        let n = self.rank();
        let mut c = vec![F::zero(); n];
        for i in 0..n {
            let base = self.invariants(&self.kostant_element(&c))[i].clone();
            c[i] = target[i].sub(&base).div(&F::from_rational(&self.kappa[i]));
        }
        Ok(c)
    }

    /// Kostant coordinates over any ring containing the scalars, solved
    /// degree by degree as in `kostant_coordinates_of_invariants`.
    pub fn kostant_coordinates_over<R: Ring>(&self, x: &[R], zero: &R, one: &R, embed: impl Fn(&Rational) -> R) -> Vec<R> {
        type C = crate::scalar::Cyclotomic;
        let n = self.rank();
        let rational = |v: Vector<C>| -> Vec<Rational> { v.iter().map(|c| c.as_rational().expect("rational section")).collect() };
        let f = rational(self.p_minus::<C>());
        let sections: Vec<Vec<Rational>> = (0..n).map(|i| self.kostant_rational(i).to_vec()).collect();
        let target = self.invariants_over(x, zero, one, &embed);
        let mut c: Vec<R> = vec![zero.clone(); n];
        for i in 0..n {
            let element: Vec<R> = (0..self.dim())
                .map(|k| {
                    let mut acc = embed(&f[k]);
                    for (cj, sj) in c.iter().zip(&sections) {
                        if !num_traits::Zero::is_zero(&sj[k]) {
                            acc = acc.add(&cj.mul(&embed(&sj[k])));
                        }
                    }
                    acc
                })
                .collect();
            let base = self.invariants_over(&element, zero, one, &embed)[i].clone();
            let inv_kappa = embed(&(Rational::from_integer(1.into()) / &self.kappa[i]));
            c[i] = target[i].sub(&base).mul(&inv_kappa);
        }
        c
    }

    /// Move y from the centralizer of `from` to the centralizer of `to`
    /// along the conjugation taking `from` to `to` (both regular
    /// semisimple and conjugate): the image is pinned down by the
    /// invariant differentials.
    pub fn transport<F: Scalar>(&self, from: &[F], to: &[F], y: &[F]) -> Result<Vector<F>, LieError> {
        let target = self.invariant_differentials(from, y);
        let torus = self.centralizer(&[to.to_vec()]);
        let cols: Vec<Vector<F>> = torus.basis().iter().map(|b| self.invariant_differentials(to, b)).collect();
        let coords = Matrix::from_cols(self.rank(), &cols).solve(&target).ok_or(LieError::NotConjugate)?;
        let mut out = self.zero::<F>();
        for (c, b) in coords.iter().zip(torus.basis()) {
            crate::linalg::vaxpy(&mut out, c, b);
        }
        Ok(out)
    }
}
