use super::{LieAlgebra, LieError};
use crate::linalg::{Matrix, Vector};
use crate::scalar::{Cyclotomic, Ring, Scalar};
use std::collections::BTreeSet;

/// Weyl group element acting on the Cartan in the coroot basis H_1..H_n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeylElement {
    pub matrix: Vec<Vec<i64>>,
    pub order: u32,
}

#[derive(Debug, Clone)]
pub struct WeylGroup {
    pub elements: Vec<WeylElement>,
    rank: usize,
}

fn matmul(a: &[Vec<i64>], b: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn identity(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}

impl WeylElement {
    pub fn to_matrix<F: Scalar>(&self) -> Matrix<F> {
        Matrix::from_rows(&self.matrix.iter().map(|r| r.iter().map(|&x| F::from_int(x)).collect()).collect::<Vec<_>>())
    }

    pub fn is_elliptic(&self) -> bool {
        let n = self.matrix.len();
        let m: Matrix<Cyclotomic> = self.to_matrix();
        !m.sub(&Matrix::identity(n)).det().is_zero()
    }
}

impl WeylGroup {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

impl LieAlgebra {
    /// Simple reflection s_i on the Cartan: h -> h - alpha_i(h) H_i.
    pub fn simple_reflection(&self, i: usize) -> Vec<Vec<i64>> {
        let r = self.rank();
        let a = self.cartan_matrix();
        let mut s = identity(r);
        // alpha_i(sum c_j H_j) = sum_j c_j a_{ji}
        for j in 0..r {
            s[i][j] -= a[j][i];
        }
        s
    }

    /// Root values on a Cartan vector given in coroot coordinates.
    pub fn root_values<F: Scalar>(&self, h: &[F]) -> Vec<F> {
        let a = self.cartan_matrix();
        self.positive_roots()
            .iter()
            .map(|beta| {
                let mut acc = F::zero();
                for (i, &ni) in beta.iter().enumerate() {
                    for (j, cj) in h.iter().enumerate() {
                        acc = acc.add(&cj.mul_int(ni * a[j][i]));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn weyl_group(&self) -> Result<WeylGroup, LieError> {
        let r = self.rank();
        if r > 3 {
            return Err(LieError::RankTooLarge(r));
        }
        let gens: Vec<Vec<Vec<i64>>> = (0..r).map(|i| self.simple_reflection(i)).collect();
        let mut seen: BTreeSet<Vec<Vec<i64>>> = BTreeSet::new();
        let mut queue = vec![identity(r)];
        seen.insert(identity(r));
        let mut order = vec![identity(r)];
        while let Some(w) = queue.pop() {
            for s in &gens {
                let next = matmul(s, &w);
                if seen.insert(next.clone()) {
                    queue.push(next.clone());
                    order.push(next);
                }
            }
        }
        order.sort();
        let elements = order
            .into_iter()
            .map(|m| {
                let mut p = m.clone();
                let mut k = 1;
                while p != identity(r) {
                    p = matmul(&p, &m);
                    k += 1;
                }
                WeylElement { matrix: m, order: k }
            })
            .collect();
        Ok(WeylGroup { elements, rank: r })
    }

    /// Orders m of elliptic Weyl elements having a regular eigenvector for a
    /// primitive m-th root of unity. Exact over Q(zeta_m).
    pub fn regular_elliptic_numbers(&self) -> Result<BTreeSet<u32>, LieError> {
        let w = self.weyl_group()?;
        let mut out = BTreeSet::new();
        for el in &w.elements {
            if el.order == 1 || out.contains(&el.order) || !el.is_elliptic() {
                continue;
            }
            if self.regular_eigenvector(el).is_some() {
                out.insert(el.order);
            }
        }
        Ok(out)
    }

    /// A zeta_m-eigenvector of w on which no root vanishes, if any.
    pub fn regular_eigenvector(&self, w: &WeylElement) -> Option<Vector<Cyclotomic>> {
        let r = self.rank();
        let zeta = Cyclotomic::root_of_unity(w.order, 1);
        let shifted = w.to_matrix::<Cyclotomic>().sub(&Matrix::identity(r).scale(&zeta));
        let ker = shifted.kernel();
        if ker.is_empty() {
            return None;
        }
        // a generic combination avoids every hyperplane that does not
        // contain the whole eigenspace
        let vanishing_everywhere =
            |k: usize| ker.iter().all(|v| self.root_values(v)[k].is_zero());
        if (0..self.positive_roots().len()).any(vanishing_everywhere) {
            return None;
        }
        for shift in 0..=(self.positive_roots().len() as i64 * ker.len() as i64) {
            let mut v = vec![Cyclotomic::zero(); r];
            for (k, b) in ker.iter().enumerate() {
                let c = Cyclotomic::from_int(1 + shift * k as i64);
                for (vi, bi) in v.iter_mut().zip(b) {
                    *vi = vi.add(&c.mul(bi));
                }
            }
            if self.root_values(&v).iter().all(|x| !x.is_zero()) {
                return Some(v);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        for (name, n) in [("A1", 2), ("A2", 6), ("A3", 24), ("B2", 8), ("C2", 8), ("G2", 12)] {
            assert_eq!(LieAlgebra::from_name(name).unwrap().weyl_group().unwrap().order(), n, "{name}");
        }
    }

    #[test]
    fn regular_elliptic_numbers_small() {
        let nums = |n: &str| LieAlgebra::from_name(n).unwrap().regular_elliptic_numbers().unwrap().into_iter().collect::<Vec<_>>();
        assert_eq!(nums("A1"), vec![2]);
        assert_eq!(nums("A2"), vec![3]);
        assert_eq!(nums("B2"), vec![2, 4]);
        assert_eq!(nums("G2"), vec![2, 3, 6]);
        assert_eq!(nums("A3"), vec![4]);
    }
}
