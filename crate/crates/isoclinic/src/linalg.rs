//! Dense linear algebra over a generic scalar field.

use crate::scalar::{Ring, Scalar};

pub type Vector<F> = Vec<F>;

pub fn zero_vec<F: Scalar>(n: usize) -> Vector<F> {
    vec![F::zero(); n]
}

pub fn unit_vec<F: Scalar>(n: usize, i: usize) -> Vector<F> {
    let mut v = zero_vec(n);
    v[i] = F::one();
    v
}

pub fn vadd<F: Scalar>(a: &[F], b: &[F]) -> Vector<F> {
    a.iter().zip(b).map(|(x, y)| x.add(y)).collect()
}

pub fn vsub<F: Scalar>(a: &[F], b: &[F]) -> Vector<F> {
    a.iter().zip(b).map(|(x, y)| x.sub(y)).collect()
}

pub fn vscale<F: Scalar>(a: &[F], s: &F) -> Vector<F> {
    a.iter().map(|x| x.mul(s)).collect()
}

pub fn vneg<F: Scalar>(a: &[F]) -> Vector<F> {
    a.iter().map(|x| x.neg()).collect()
}

pub fn vaxpy<F: Scalar>(acc: &mut [F], s: &F, x: &[F]) {
    if s.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(x) {
        if !b.is_zero() {
            *a = a.add(&s.mul(b));
        }
    }
}

pub fn vis_zero<F: Scalar>(a: &[F]) -> bool {
    a.iter().all(|x| x.is_zero())
}

pub fn dot<F: Scalar>(a: &[F], b: &[F]) -> F {
    let mut acc = F::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc = acc.add(&x.mul(y));
        }
    }
    acc
}

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: Scalar> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F::one());
        }
        m
    }

    pub fn from_rows(rows: &[Vector<F>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().cloned());
        }
        Matrix { rows: r, cols: c, data }
    }

    /// Matrix whose columns are the given vectors (all of length `n`).
    pub fn from_cols(n: usize, cols: &[Vector<F>]) -> Self {
        let mut m = Self::zeros(n, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &F {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: F) {
        self.data[r * self.cols + c] = x;
    }

    pub fn row(&self, r: usize) -> &[F] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vector<F> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vector<F>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn add(&self, other: &Self) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: vadd(&self.data, &other.data) }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: vsub(&self.data, &other.data) }
    }

    pub fn scale(&self, s: &F) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: vscale(&self.data, s) }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "shape mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = out.data[idx].add(&a.mul(b));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F]) -> Vector<F> {
        (0..self.rows).map(|r| dot(self.row(r), v)).collect()
    }

    pub fn trace(&self) -> F {
        let mut acc = F::zero();
        for i in 0..self.rows.min(self.cols) {
            acc = acc.add(self.get(i, i));
        }
        acc
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let candidate = if F::EXACT {
                (row..m.rows).find(|&r| !m.get(r, col).is_zero())
            } else {
                (row..m.rows)
                    .filter(|&r| !m.get(r, col).is_zero())
                    .max_by(|&a, &b| m.get(a, col).magnitude().total_cmp(&m.get(b, col).magnitude()))
            };
            let Some(p) = candidate else { continue };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("nonzero pivot");
            for c in col..m.cols {
                let x = m.get(row, c).mul(&inv);
                m.set(row, c, x);
            }
            m.set(row, col, F::one());
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let f = m.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    let pc = m.get(row, c);
                    if !pc.is_zero() {
                        let x = m.get(r, c).sub(&f.mul(pc));
                        m.set(r, c, x);
                    }
                }
                m.set(r, col, F::zero());
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Canonical kernel basis: one vector per free column, with a 1 there.
    pub fn kernel(&self) -> Vec<Vector<F>> {
        let (r, pivots) = self.rref();
        let mut out = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = zero_vec::<F>(self.cols);
            v[free] = F::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = r.get(i, free).neg();
            }
            out.push(v);
        }
        out
    }

    /// Some solution of `self * x = b`, if consistent.
    pub fn solve(&self, b: &[F]) -> Option<Vector<F>> {
        let mut aug = Self::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b[r].clone());
        }
        let (red, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = zero_vec::<F>(self.cols);
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = red.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Self::zeros(n, 2 * n);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n + r, F::one());
        }
        let (red, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Self::zeros(n, n);
        for r in 0..n {
            for c in 0..n {
                inv.set(r, c, red.get(r, n + c).clone());
            }
        }
        Some(inv)
    }

    pub fn det(&self) -> F {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = self.rows;
        let mut det = F::one();
        for col in 0..n {
            let Some(p) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return F::zero();
            };
            if p != col {
                m.swap_rows(p, col);
                det = det.neg();
            }
            let piv = m.get(col, col).clone();
            det = det.mul(&piv);
            let inv = piv.inv().expect("nonzero pivot");
            for r in col + 1..n {
                let f = m.get(r, col).mul(&inv);
                if f.is_zero() {
                    continue;
                }
                for c in col..n {
                    let x = m.get(r, c).sub(&f.mul(m.get(col, c)));
                    m.set(r, c, x);
                }
            }
        }
        det
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::identity(self.rows);
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn char_poly(&self) -> Vec<F> {
        char_poly(&self.to_rows(), &F::zero(), &F::one())
    }
}

/// Characteristic polynomial det(x I - M), coefficients low to high, by
/// Faddeev-LeVerrier. Works over any ring containing Q.
pub fn char_poly<R: Ring>(m: &[Vec<R>], zero: &R, one: &R) -> Vec<R> {
    let n = m.len();
    let matmul = |a: &[Vec<R>], b: &[Vec<R>]| -> Vec<Vec<R>> {
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let mut acc = zero.clone();
                        for k in 0..n {
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
    let mut coeffs = vec![zero.clone(); n + 1];
    coeffs[n] = one.clone();
    let mut mk: Vec<Vec<R>> = vec![vec![zero.clone(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = matmul(m, &mk);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] = row[i].add(&coeffs[n - k + 1]);
        }
        let am = matmul(m, &next);
        let mut tr = zero.clone();
        for (i, row) in am.iter().enumerate() {
            tr = tr.add(&row[i]);
        }
        coeffs[n - k] = tr.neg().div_int(k as i64);
        mk = next;
    }
    coeffs
}

/// A subspace stored by its reduced row echelon basis, so equal subspaces
/// have identical bases.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<F> {
    ambient: usize,
    basis: Vec<Vector<F>>,
}

impl<F: Scalar> Subspace<F> {
    pub fn span(ambient: usize, vectors: &[Vector<F>]) -> Self {
        if vectors.is_empty() {
            return Self::zero(ambient);
        }
        let (r, pivots) = Matrix::from_rows(vectors).rref();
        Subspace { ambient, basis: (0..pivots.len()).map(|i| r.row(i).to_vec()).collect() }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace { ambient, basis: (0..ambient).map(|i| unit_vec(ambient, i)).collect() }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector<F>] {
        &self.basis
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.coords(v).is_some()
    }

    /// Coordinates of `v` in the stored basis.
    pub fn coords(&self, v: &[F]) -> Option<Vector<F>> {
        if self.basis.is_empty() {
            return vis_zero(v).then(Vec::new);
        }
        Matrix::from_cols(self.ambient, &self.basis).solve(v)
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut all = self.basis.clone();
        all.extend(other.basis.iter().cloned());
        Self::span(self.ambient, &all)
    }

    pub fn intersect(&self, other: &Self) -> Self {
        if self.basis.is_empty() || other.basis.is_empty() {
            return Self::zero(self.ambient);
        }
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().map(|v| vneg(v)));
        let ker = Matrix::from_cols(self.ambient, &cols).kernel();
        let vecs: Vec<Vector<F>> = ker
            .iter()
            .map(|k| {
                let mut acc = zero_vec::<F>(self.ambient);
                for (c, b) in k.iter().zip(&self.basis) {
                    vaxpy(&mut acc, c, b);
                }
                acc
            })
            .collect();
        Self::span(self.ambient, &vecs)
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    /// Image of the subspace under a linear map.
    pub fn image(&self, map: &Matrix<F>) -> Self {
        let vecs: Vec<Vector<F>> = self.basis.iter().map(|v| map.mul_vec(v)).collect();
        Self::span(map.rows(), &vecs)
    }

    /// Standard basis vectors completing this subspace to the ambient space.
    pub fn standard_complement(&self) -> Vec<Vector<F>> {
        let mut current = self.clone();
        let mut out = Vec::new();
        for i in 0..self.ambient {
            let e = unit_vec::<F>(self.ambient, i);
            if !current.contains(&e) {
                current = current.sum(&Self::span(self.ambient, std::slice::from_ref(&e)));
                out.push(e);
            }
            if current.dim() == self.ambient {
                break;
            }
        }
        out
    }
}

/// Coordinates with respect to a fixed family of independent vectors,
/// grouped into blocks; used to split vectors along a direct sum.
#[derive(Clone, Debug)]
pub struct Decomposer<F> {
    ambient: usize,
    blocks: Vec<Vec<Vector<F>>>,
    rows: Vec<usize>,
    inv: Matrix<F>,
}

impl<F: Scalar> Decomposer<F> {
    /// `None` when the vectors are dependent.
    pub fn new(ambient: usize, blocks: Vec<Vec<Vector<F>>>) -> Option<Self> {
        let all: Vec<Vector<F>> = blocks.iter().flatten().cloned().collect();
        let k = all.len();
        if k == 0 {
            return Some(Decomposer { ambient, blocks, rows: Vec::new(), inv: Matrix::zeros(0, 0) });
        }
        let m = Matrix::from_cols(ambient, &all);
        let (_, rows) = m.transpose().rref();
        if rows.len() < k {
            return None;
        }
        let sub = Matrix::from_rows(&rows.iter().map(|&r| m.row(r).to_vec()).collect::<Vec<_>>());
        let inv = sub.inverse()?;
        Some(Decomposer { ambient, blocks, rows, inv })
    }

    pub fn coords(&self, v: &[F]) -> Vector<F> {
        let picked: Vector<F> = self.rows.iter().map(|&r| v[r].clone()).collect();
        self.inv.mul_vec(&picked)
    }

    /// Components of `v` in each block (assuming `v` lies in the total span).
    pub fn split(&self, v: &[F]) -> Vec<Vector<F>> {
        let c = self.coords(v);
        let mut out = Vec::with_capacity(self.blocks.len());
        let mut offset = 0;
        for block in &self.blocks {
            let mut acc = zero_vec::<F>(self.ambient);
            for (i, b) in block.iter().enumerate() {
                vaxpy(&mut acc, &c[offset + i], b);
            }
            offset += block.len();
            out.push(acc);
        }
        out
    }

    pub fn block_coords(&self, v: &[F], block: usize) -> Vector<F> {
        let c = self.coords(v);
        let offset: usize = self.blocks[..block].iter().map(Vec::len).sum();
        c[offset..offset + self.blocks[block].len()].to_vec()
    }

    pub fn block(&self, i: usize) -> &[Vector<F>] {
        &self.blocks[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{Cyclotomic, Float};

    fn q(n: i64) -> Cyclotomic {
        Cyclotomic::from_int(n)
    }

    #[test]
    fn kernel_and_rank() {
        let m = Matrix::from_rows(&[vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]]);
        assert_eq!(m.rank(), 1);
        let ker = m.kernel();
        assert_eq!(ker.len(), 2);
        for v in ker {
            assert!(vis_zero(&m.mul_vec(&v)));
        }
    }

    #[test]
    fn inverse_and_det() {
        let m = Matrix::from_rows(&[vec![q(2), q(1)], vec![q(7), q(4)]]);
        assert_eq!(m.det(), q(1));
        assert_eq!(m.mul(&m.inverse().unwrap()), Matrix::identity(2));
        let s = Matrix::from_rows(&[vec![q(1), q(2)], vec![q(2), q(4)]]);
        assert!(s.inverse().is_none());
    }

    #[test]
    fn char_poly_of_companion() {
        // companion of x^3 - 2x + 5
        let m = Matrix::from_rows(&[
            vec![q(0), q(0), q(-5)],
            vec![q(1), q(0), q(2)],
            vec![q(0), q(1), q(0)],
        ]);
        assert_eq!(m.char_poly(), vec![q(5), q(-2), q(0), q(1)]);
    }

    #[test]
    fn float_solve_matches_exact() {
        let rows = [[3.0, 1.0, -2.0], [1.0, 4.0, 0.5], [0.0, -1.0, 2.0]];
        let m = Matrix::from_rows(&rows.iter().map(|r| r.iter().map(|&x| Float::new(x, 0.0)).collect()).collect::<Vec<_>>());
        let b = vec![Float::new(1.0, 0.0), Float::new(2.0, 0.0), Float::new(3.0, 0.0)];
        let x = m.solve(&b).unwrap();
        assert_eq!(m.mul_vec(&x), b);
    }

    #[test]
    fn subspace_intersection() {
        let a = Subspace::span(3, &[vec![q(1), q(0), q(0)], vec![q(0), q(1), q(0)]]);
        let b = Subspace::span(3, &[vec![q(0), q(1), q(0)], vec![q(0), q(0), q(1)]]);
        let c = a.intersect(&b);
        assert_eq!(c, Subspace::span(3, &[vec![q(0), q(5), q(0)]]));
        assert_eq!(a.sum(&b).dim(), 3);
        assert_eq!(c.standard_complement().len(), 2);
    }

    #[test]
    fn decomposer_splits_direct_sum() {
        let d = Decomposer::new(2, vec![vec![vec![q(1), q(1)]], vec![vec![q(1), q(-1)]]]).unwrap();
        let parts = d.split(&[q(3), q(1)]);
        assert_eq!(parts[0], vec![q(2), q(2)]);
        assert_eq!(parts[1], vec![q(1), q(-1)]);
    }
}
