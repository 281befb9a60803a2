//! Simple Lie algebras of rank at most 3 with a fixed Chevalley basis.

mod construct;
mod elements;
mod grading;
mod invariants;
mod weyl;

pub use elements::{EigenDecomposition, JordanParts};
pub use grading::Grading;
pub use invariants::InvariantKind;
pub use weyl::{WeylElement, WeylGroup};

use crate::linalg::{vis_zero, zero_vec, Matrix, Subspace, Vector};
use crate::scalar::{rational, Rational, Scalar};
use num_traits::Zero;
use serde_json::{json, Value};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum LieError {
    #[error("unsupported Cartan type {0}; supported: A1, A2, A3, B2, C2, G2")]
    UnsupportedType(String),
    #[error("Weyl enumeration is capped at rank 3, got rank {0}")]
    RankTooLarge(usize),
    #[error("spectrum of ad(x) does not split over the coefficient field")]
    NonSplitSpectrum,
    #[error("element has length {got}, algebra dimension is {expected}")]
    WrongLength { expected: usize, got: usize },
    #[error("element is not ad-nilpotent")]
    NotNilpotent,
    #[error("elements are not conjugate")]
    NotConjugate,
    #[error("coweight has non-integral root values")]
    NonIntegralWeight,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CartanType {
    A(usize),
    B2,
    C2,
    G2,
}

impl CartanType {
    pub fn rank(self) -> usize {
        match self {
            CartanType::A(n) => n,
            _ => 2,
        }
    }

    pub fn is_type_a(self) -> bool {
        matches!(self, CartanType::A(_))
    }

    /// Type of the algebra built from the transposed Cartan matrix.
    pub fn dual(self) -> CartanType {
        match self {
            CartanType::B2 => CartanType::C2,
            CartanType::C2 => CartanType::B2,
            other => other,
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CartanType::A(n) => write!(f, "A{n}"),
            CartanType::B2 => write!(f, "B2"),
            CartanType::C2 => write!(f, "C2"),
            CartanType::G2 => write!(f, "G2"),
        }
    }
}

impl FromStr for CartanType {
    type Err = LieError;
    fn from_str(s: &str) -> Result<Self, LieError> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A1" => Ok(CartanType::A(1)),
            "A2" => Ok(CartanType::A(2)),
            "A3" => Ok(CartanType::A(3)),
            "B2" => Ok(CartanType::B2),
            "C2" => Ok(CartanType::C2),
            "G2" => Ok(CartanType::G2),
            _ => Err(LieError::UnsupportedType(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BasisLabel {
    Cartan(usize),
    Root(Vec<i64>),
}

/// A simple Lie algebra with structure constants frozen at construction.
#[derive(Debug, Clone)]
pub struct LieAlgebra {
    cartan_type: CartanType,
    cartan_matrix: Vec<Vec<i64>>,
    positive_roots: Vec<Vec<i64>>,
    labels: Vec<BasisLabel>,
    weights: Vec<i64>,
    brackets: Vec<Vec<Vec<(usize, i64)>>>,
    killing: Vec<Vec<i64>>,
    degrees: Vec<u32>,
    rho_check: Vec<Rational>,
    p_minus: Vec<Rational>,
    p_plus: Vec<Rational>,
    kostant: Vec<Vec<Rational>>,
    rep: Vec<Vec<Vec<Rational>>>,
    invariant_kinds: Vec<InvariantKind>,
    kappa: Vec<Rational>,
}

pub type Algebra = Arc<LieAlgebra>;

/// Algebras are determined by their type.
impl PartialEq for LieAlgebra {
    fn eq(&self, other: &Self) -> bool {
        self.cartan_type == other.cartan_type
    }
}

fn to_field<F: Scalar>(v: &[Rational]) -> Vector<F> {
    v.iter().map(F::from_rational).collect()
}

impl LieAlgebra {
    pub fn build(ty: CartanType) -> Result<Algebra, LieError> {
        if let CartanType::A(n) = ty {
            if !(1..=3).contains(&n) {
                return Err(LieError::UnsupportedType(ty.to_string()));
            }
        }
        let raw = construct::build(ty);
        let dim = raw.basis.len();
        let rank = raw.cartan_matrix.len();
        let mut cartan_index = 0;
        let labels: Vec<BasisLabel> = raw
            .labels
            .iter()
            .map(|l| match l {
                Some(root) => BasisLabel::Root(root.clone()),
                None => {
                    cartan_index += 1;
                    BasisLabel::Cartan(cartan_index - 1)
                }
            })
            .collect();
        let weights: Vec<i64> = labels
            .iter()
            .map(|l| match l {
                BasisLabel::Cartan(_) => 0,
                BasisLabel::Root(r) => r.iter().sum(),
            })
            .collect();

        let ad_int = |a: usize| -> Vec<Vec<i64>> {
            let mut m = vec![vec![0i64; dim]; dim];
            for (b, col) in raw.brackets[a].iter().enumerate() {
                for &(k, c) in col {
                    m[k][b] += c;
                }
            }
            m
        };
        let ads: Vec<Vec<Vec<i64>>> = (0..dim).map(ad_int).collect();
        let killing: Vec<Vec<i64>> = (0..dim)
            .map(|a| {
                (0..dim)
                    .map(|b| (0..dim).map(|i| (0..dim).map(|j| ads[a][i][j] * ads[b][j][i]).sum::<i64>()).sum())
                    .collect()
            })
            .collect();

        let first_cartan = labels.iter().position(|l| matches!(l, BasisLabel::Cartan(_))).unwrap();
        let root_index = |root: &[i64]| labels.iter().position(|l| matches!(l, BasisLabel::Root(r) if r == root));

        // rho_check: alpha_i(sum c_j H_j) = sum_j c_j a_{ji} = 1
        let at: Vec<Vector<crate::scalar::Cyclotomic>> = (0..rank)
            .map(|i| (0..rank).map(|j| crate::scalar::Cyclotomic::from_int(raw.cartan_matrix[j][i])).collect())
            .collect();
        let ones = vec![crate::scalar::Cyclotomic::one(); rank];
        let c = Matrix::from_rows(&at).solve(&ones).expect("invertible Cartan matrix");
        let mut rho_check = vec![Rational::zero(); dim];
        for (j, cj) in c.iter().enumerate() {
            rho_check[first_cartan + j] = cj.as_rational().unwrap();
        }

        let mut p_minus = vec![Rational::zero(); dim];
        let mut p_plus = vec![Rational::zero(); dim];
        for i in 0..rank {
            let mut alpha = vec![0i64; rank];
            alpha[i] = 1;
            p_plus[root_index(&alpha).unwrap()] = &rho_check[first_cartan + i] * rational::int(2);
            alpha[i] = -1;
            p_minus[root_index(&alpha).unwrap()] = rational::int(1);
        }

        let rep: Vec<Vec<Vec<Rational>>> = raw
            .basis
            .iter()
            .map(|m| m.to_rows().iter().map(|r| r.iter().map(|x| x.as_rational().unwrap()).collect()).collect())
            .collect();

        let mut alg = LieAlgebra {
            cartan_type: ty,
            cartan_matrix: raw.cartan_matrix,
            positive_roots: raw.positive_roots,
            labels,
            weights,
            brackets: raw.brackets,
            killing,
            degrees: Vec::new(),
            rho_check,
            p_minus,
            p_plus,
            kostant: Vec::new(),
            rep,
            invariant_kinds: Vec::new(),
            kappa: Vec::new(),
        };
        alg.kostant = alg.compute_kostant_basis();
        alg.degrees = alg.kostant.iter().map(|p| (alg.weight_of(&to_field::<crate::scalar::Cyclotomic>(p)).unwrap() + 1) as u32).collect();
        (alg.invariant_kinds, alg.kappa) = alg.compute_invariant_kinds();
        Ok(Arc::new(alg))
    }

    pub fn from_name(name: &str) -> Result<Algebra, LieError> {
        Self::build(name.parse()?)
    }

    /// The Langlands dual, built from the transposed Cartan matrix.
    pub fn dual(&self) -> Algebra {
        Self::build(self.cartan_type.dual()).expect("dual of a supported type")
    }

    fn compute_kostant_basis(&self) -> Vec<Vec<Rational>> {
        use crate::scalar::Cyclotomic;
        let p1: Vector<Cyclotomic> = to_field(&self.p_plus);
        let ad = self.ad(&p1);
        let max_w = *self.weights.iter().max().unwrap();
        let mut out = Vec::new();
        for w in 1..=max_w {
            let idx: Vec<usize> = (0..self.dim()).filter(|&i| self.weights[i] == w).collect();
            // kernel of ad p1 on the weight-w space
            let cols: Vec<Vector<Cyclotomic>> = idx.iter().map(|&i| ad.col(i)).collect();
            let ker = Matrix::from_cols(self.dim(), &cols).kernel();
            if ker.is_empty() {
                continue;
            }
            let vecs: Vec<Vector<Cyclotomic>> = ker
                .iter()
                .map(|k| {
                    let mut v = zero_vec::<Cyclotomic>(self.dim());
                    for (c, &i) in k.iter().zip(&idx) {
                        v[i] = c.clone();
                    }
                    v
                })
                .collect();
            for v in Subspace::span(self.dim(), &vecs).basis() {
                out.push(v.iter().map(|x| x.as_rational().unwrap()).collect());
            }
        }
        out
    }

    pub fn cartan_type(&self) -> CartanType {
        self.cartan_type
    }

    pub fn name(&self) -> String {
        self.cartan_type.to_string()
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn rank(&self) -> usize {
        self.cartan_matrix.len()
    }

    pub fn cartan_matrix(&self) -> &[Vec<i64>] {
        &self.cartan_matrix
    }

    pub fn positive_roots(&self) -> &[Vec<i64>] {
        &self.positive_roots
    }

    pub fn num_roots(&self) -> usize {
        2 * self.positive_roots.len()
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    /// rho_check-weight (root height) of each basis element.
    pub fn weights(&self) -> &[i64] {
        &self.weights
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn coxeter_number(&self) -> u32 {
        *self.degrees.iter().max().unwrap()
    }

    pub fn killing_table(&self) -> &[Vec<i64>] {
        &self.killing
    }

    pub fn structure_constants(&self, a: usize, b: usize) -> &[(usize, i64)] {
        &self.brackets[a][b]
    }

    pub fn cartan_indices(&self) -> Vec<usize> {
        (0..self.dim()).filter(|&i| matches!(self.labels[i], BasisLabel::Cartan(_))).collect()
    }

    pub fn root_index(&self, root: &[i64]) -> Option<usize> {
        self.labels.iter().position(|l| matches!(l, BasisLabel::Root(r) if r == root))
    }

    pub fn simple_root_index(&self, i: usize, sign: i64) -> usize {
        let mut a = vec![0i64; self.rank()];
        a[i] = sign;
        self.root_index(&a).unwrap()
    }

    pub fn highest_root_index(&self) -> usize {
        self.root_index(self.positive_roots.last().unwrap()).unwrap()
    }

    pub fn basis_label(&self, i: usize) -> String {
        match &self.labels[i] {
            BasisLabel::Cartan(k) => format!("H{}", k + 1),
            BasisLabel::Root(r) => {
                let sign = if r.iter().sum::<i64>() < 0 { "-" } else { "" };
                let body: Vec<String> = r.iter().map(|c| c.abs().to_string()).collect();
                format!("E{sign}[{}]", body.join(","))
            }
        }
    }

    pub fn basis<F: Scalar>(&self, i: usize) -> Vector<F> {
        crate::linalg::unit_vec(self.dim(), i)
    }

    pub fn zero<F: Scalar>(&self) -> Vector<F> {
        zero_vec(self.dim())
    }

    pub fn rho_check<F: Scalar>(&self) -> Vector<F> {
        to_field(&self.rho_check)
    }

    pub fn rho_check_rational(&self) -> &[Rational] {
        &self.rho_check
    }

    pub fn p_minus<F: Scalar>(&self) -> Vector<F> {
        to_field(&self.p_minus)
    }

    pub fn p_plus<F: Scalar>(&self) -> Vector<F> {
        to_field(&self.p_plus)
    }

    /// Kostant basis p_1..p_n of the centralizer of p_1 (index 0-based).
    pub fn kostant<F: Scalar>(&self, i: usize) -> Vector<F> {
        to_field(&self.kostant[i])
    }

    pub fn kostant_rational(&self, i: usize) -> &[Rational] {
        &self.kostant[i]
    }

    pub fn check_element<F: Scalar>(&self, x: &[F]) -> Result<(), LieError> {
        if x.len() != self.dim() {
            return Err(LieError::WrongLength { expected: self.dim(), got: x.len() });
        }
        Ok(())
    }

    pub fn bracket<F: Scalar>(&self, x: &[F], y: &[F]) -> Vector<F> {
        let mut out = self.zero::<F>();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                if yb.is_zero() {
                    continue;
                }
                let c = xa.mul(yb);
                for &(k, s) in &self.brackets[a][b] {
                    out[k] = out[k].add(&c.mul_int(s));
                }
            }
        }
        out
    }

    /// Matrix of ad(x) in the fixed basis (column b = [x, e_b]).
    pub fn ad<F: Scalar>(&self, x: &[F]) -> Matrix<F> {
        let n = self.dim();
        let mut m: Matrix<F> = Matrix::zeros(n, n);
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for b in 0..n {
                for &(k, s) in &self.brackets[a][b] {
                    let v = m.get(k, b).add(&xa.mul_int(s));
                    m.set(k, b, v);
                }
            }
        }
        m
    }

    pub fn killing<F: Scalar>(&self, x: &[F], y: &[F]) -> F {
        let mut acc = F::zero();
        for (a, xa) in x.iter().enumerate() {
            if xa.is_zero() {
                continue;
            }
            for (b, yb) in y.iter().enumerate() {
                let k = self.killing[a][b];
                if k != 0 && !yb.is_zero() {
                    acc = acc.add(&xa.mul(yb).mul_int(k));
                }
            }
        }
        acc
    }

    /// Weight of a homogeneous element, `None` if mixed or zero.
    pub fn weight_of<F: Scalar>(&self, x: &[F]) -> Option<i64> {
        let mut w = None;
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match w {
                None => w = Some(self.weights[i]),
                Some(v) if v != self.weights[i] => return None,
                _ => {}
            }
        }
        w
    }

    /// Component of x in weight w.
    pub fn weight_component<F: Scalar>(&self, x: &[F], w: i64) -> Vector<F> {
        x.iter()
            .enumerate()
            .map(|(i, c)| if self.weights[i] == w { c.clone() } else { F::zero() })
            .collect()
    }

    /// Representation matrix used for invariants: the defining one for type
    /// A, the adjoint one otherwise.
    pub fn invariant_rep<F: Scalar>(&self, x: &[F]) -> Matrix<F> {
        if self.cartan_type.is_type_a() {
            let n = self.rep[0].len();
            let mut m: Matrix<F> = Matrix::zeros(n, n);
            for (a, xa) in x.iter().enumerate() {
                if xa.is_zero() {
                    continue;
                }
                for (r, row) in self.rep[a].iter().enumerate() {
                    for (c, q) in row.iter().enumerate() {
                        if !q.is_zero() {
                            let v = m.get(r, c).add(&xa.mul(&F::from_rational(q)));
                            m.set(r, c, v);
                        }
                    }
                }
            }
            m
        } else {
            self.ad(x)
        }
    }

    pub fn centralizer<F: Scalar>(&self, elements: &[Vector<F>]) -> Subspace<F> {
        if elements.is_empty() {
            return Subspace::full(self.dim());
        }
        let mut rows: Vec<Vector<F>> = Vec::new();
        for x in elements {
            rows.extend(self.ad(x).to_rows());
        }
        Subspace::span(self.dim(), &Matrix::from_rows(&rows).kernel())
    }

    pub fn element_to_wire<F: Scalar>(&self, x: &[F]) -> Value {
        Value::Array(x.iter().map(F::to_wire).collect())
    }

    pub fn element_from_wire<F: Scalar>(&self, v: &Value) -> Result<Vector<F>, String> {
        let arr = v.as_array().ok_or("element must be an array of scalars")?;
        let x: Vector<F> = arr.iter().map(F::from_wire).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        self.check_element(&x).map_err(|e| e.to_string())?;
        Ok(x)
    }

    pub fn info(&self) -> Value {
        json!({
            "type": self.name(),
            "dim": self.dim(),
            "rank": self.rank(),
            "degrees": self.degrees,
            "coxeter_number": self.coxeter_number(),
            "cartan_matrix": self.cartan_matrix,
            "basis": (0..self.dim()).map(|i| self.basis_label(i)).collect::<Vec<_>>(),
            "rho_check": self.rho_check.iter().map(rational::format).collect::<Vec<_>>(),
            "p_minus": self.p_minus.iter().map(rational::format).collect::<Vec<_>>(),
            "p_plus": self.p_plus.iter().map(rational::format).collect::<Vec<_>>(),
            "kostant_basis": self.kostant.iter().map(|p| p.iter().map(rational::format).collect::<Vec<_>>()).collect::<Vec<_>>(),
        })
    }

    pub fn is_zero<F: Scalar>(x: &[F]) -> bool {
        vis_zero(x)
    }
}
