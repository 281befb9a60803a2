//! Chevalley bases read off from explicit matrix realizations.
//!
//! Type A uses sl_{n+1}; C2 and B2 are the diagram-folded A3 (sp4 inside
//! sl4) with the two simple roots in either order; G2 is the triality-folded
//! so8 with the form given by the antidiagonal.

use super::CartanType;
use crate::linalg::{Decomposer, Matrix};
use crate::scalar::{Cyclotomic, Ring, Scalar};

type Mat = Matrix<Cyclotomic>;

pub(super) struct RawAlgebra {
    pub cartan_matrix: Vec<Vec<i64>>,
    /// Positive roots in simple-root coordinates, by height then reverse-lex.
    pub positive_roots: Vec<Vec<i64>>,
    /// Basis matrices in the final basis order.
    pub basis: Vec<Mat>,
    /// `None` for Cartan elements, otherwise the root.
    pub labels: Vec<Option<Vec<i64>>>,
    pub brackets: Vec<Vec<Vec<(usize, i64)>>>,
}

fn unit(n: usize, i: usize, j: usize) -> Mat {
    let mut m = Mat::zeros(n, n);
    m.set(i, j, Cyclotomic::one());
    m
}

fn comm(a: &Mat, b: &Mat) -> Mat {
    a.mul(b).sub(&b.mul(a))
}

fn generators(ty: CartanType) -> Vec<Mat> {
    match ty {
        CartanType::A(n) => (0..n).map(|i| unit(n + 1, i, i + 1)).collect(),
        CartanType::C2 | CartanType::B2 => {
            let long_pair = unit(4, 0, 1).add(&unit(4, 2, 3));
            let middle = unit(4, 1, 2);
            if ty == CartanType::C2 {
                vec![long_pair, middle]
            } else {
                vec![middle, long_pair]
            }
        }
        CartanType::G2 => {
            // so8 Chevalley generators for J = antidiagonal, indices 0..8
            let so = |i: usize, j: usize| unit(8, i, j).sub(&unit(8, 7 - j, 7 - i));
            let outer = so(0, 1).add(&so(2, 3)).add(&so(2, 4));
            vec![outer, so(1, 2)]
        }
    }
}

/// Coefficient c with `[h, e] = c e` for a nonzero root vector e.
fn eigen_coefficient(h: &Mat, e: &Mat) -> i64 {
    let he = comm(h, e);
    for r in 0..e.rows() {
        for c in 0..e.cols() {
            if !e.get(r, c).is_zero() {
                let q = he.get(r, c).div(e.get(r, c));
                return crate::scalar::rational::to_i64(&q.as_rational().unwrap()).expect("integral Cartan entry");
            }
        }
    }
    panic!("zero root vector")
}

pub(super) fn positive_roots(cartan: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let r = cartan.len();
    let pairing = |beta: &[i64], i: usize| -> i64 { (0..r).map(|j| beta[j] * cartan[i][j]).sum() };
    let mut roots: Vec<Vec<i64>> = (0..r).map(|i| (0..r).map(|j| (i == j) as i64).collect()).collect();
    let mut layer: Vec<Vec<i64>> = roots.clone();
    while !layer.is_empty() {
        let mut next: Vec<Vec<i64>> = Vec::new();
        for beta in &layer {
            for i in 0..r {
                // p = largest k with beta - k alpha_i a root
                let mut p = 0;
                loop {
                    let mut cand = beta.clone();
                    cand[i] -= p + 1;
                    if cand.iter().all(|&c| c >= 0) && roots.contains(&cand) {
                        p += 1;
                    } else {
                        break;
                    }
                }
                let q = p - pairing(beta, i);
                if q > 0 {
                    let mut up = beta.clone();
                    up[i] += 1;
                    if !next.contains(&up) {
                        next.push(up);
                    }
                }
            }
        }
        next.sort_by(|a, b| b.cmp(a));
        roots.extend(next.iter().cloned());
        layer = next;
    }
    roots
}

pub(super) fn build(ty: CartanType) -> RawAlgebra {
    let e = generators(ty);
    let f: Vec<Mat> = e.iter().map(Mat::transpose).collect();
    let h: Vec<Mat> = e.iter().zip(&f).map(|(a, b)| comm(a, b)).collect();
    let r = e.len();
    let cartan_matrix: Vec<Vec<i64>> =
        (0..r).map(|i| (0..r).map(|j| eigen_coefficient(&h[i], &e[j])).collect()).collect();
    let pos = positive_roots(&cartan_matrix);

    let mut root_vectors: Vec<Mat> = Vec::with_capacity(pos.len());
    for gamma in &pos {
        let height: i64 = gamma.iter().sum();
        if height == 1 {
            let i = gamma.iter().position(|&c| c == 1).unwrap();
            root_vectors.push(e[i].clone());
            continue;
        }
        // extraspecial pair: smallest simple index i with gamma - alpha_i a root
        let (i, beta_idx) = (0..r)
            .find_map(|i| {
                let mut beta = gamma.clone();
                beta[i] -= 1;
                pos.iter().position(|b| *b == beta).map(|k| (i, k))
            })
            .expect("non-simple root has a predecessor");
        let beta = &pos[beta_idx];
        let mut p = 0i64;
        loop {
            let mut cand = beta.clone();
            cand[i] -= p + 1;
            if pos.contains(&cand) {
                p += 1;
            } else {
                break;
            }
        }
        let v = comm(&e[i], &root_vectors[beta_idx]).scale(&Cyclotomic::from_int(1).div_int(p + 1));
        assert!(!v.is_zero(), "root vector vanished");
        root_vectors.push(v);
    }

    // basis order: negative roots (deepest first), Cartan, positive roots
    let mut basis: Vec<Mat> = Vec::new();
    let mut labels: Vec<Option<Vec<i64>>> = Vec::new();
    let max_height = pos.iter().map(|g| g.iter().sum::<i64>()).max().unwrap();
    for height in (1..=max_height).rev() {
        for (gamma, v) in pos.iter().zip(&root_vectors) {
            if gamma.iter().sum::<i64>() == height {
                basis.push(v.transpose());
                labels.push(Some(gamma.iter().map(|c| -c).collect()));
            }
        }
    }
    for hi in &h {
        basis.push(hi.clone());
        labels.push(None);
    }
    for (gamma, v) in pos.iter().zip(&root_vectors) {
        basis.push(v.clone());
        labels.push(Some(gamma.clone()));
    }

    let n = basis[0].rows();
    let flat = |m: &Mat| -> Vec<Cyclotomic> { (0..n).flat_map(|i| m.row(i).to_vec()).collect() };
    let dec = Decomposer::new(n * n, vec![basis.iter().map(flat).collect()]).expect("independent basis");
    let dim = basis.len();
    let mut brackets = vec![vec![Vec::new(); dim]; dim];
    for a in 0..dim {
        for b in 0..dim {
            let c = dec.coords(&flat(&comm(&basis[a], &basis[b])));
            brackets[a][b] = c
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(k, x)| {
                    let q = x.as_rational().expect("rational structure constant");
                    (k, crate::scalar::rational::to_i64(&q).expect("integral structure constant"))
                })
                .collect();
        }
    }
    RawAlgebra { cartan_matrix, positive_roots: pos, basis, labels, brackets }
}
