//! Univariate polynomials, coefficients stored low to high.

use crate::linalg::Matrix;
use crate::scalar::{Rational, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn trim<F: Scalar>(mut p: Vec<F>) -> Vec<F> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn degree<F: Scalar>(p: &[F]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn mul<F: Scalar>(a: &[F], b: &[F]) -> Vec<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![F::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    trim(out)
}

pub fn derivative<F: Scalar>(p: &[F]) -> Vec<F> {
    trim(p.iter().enumerate().skip(1).map(|(k, c)| c.mul_int(k as i64)).collect())
}

pub fn divrem<F: Scalar>(num: &[F], den: &[F]) -> (Vec<F>, Vec<F>) {
    let den = trim(den.to_vec());
    let dd = degree(&den).expect("division by zero polynomial");
    let lead_inv = den[dd].inv().expect("nonzero leading coefficient");
    let mut rem = trim(num.to_vec());
    if rem.len() <= dd {
        return (Vec::new(), rem);
    }
    let mut quot = vec![F::zero(); rem.len() - dd];
    while let Some(rd) = degree(&rem) {
        if rd < dd {
            break;
        }
        let c = rem[rd].mul(&lead_inv);
        for (j, d) in den.iter().enumerate() {
            rem[rd - dd + j] = rem[rd - dd + j].sub(&c.mul(d));
        }
        rem[rd] = F::zero();
        quot[rd - dd] = c;
        rem = trim(rem);
    }
    (trim(quot), rem)
}

pub fn monic<F: Scalar>(p: &[F]) -> Vec<F> {
    let p = trim(p.to_vec());
    match p.last() {
        Some(l) => {
            let inv = l.inv().unwrap();
            p.iter().map(|c| c.mul(&inv)).collect()
        }
        None => p,
    }
}

pub fn gcd<F: Scalar>(a: &[F], b: &[F]) -> Vec<F> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let (_, r) = divrem(&a, &b);
        a = b;
        b = r;
    }
    monic(&a)
}

/// Product of the distinct irreducible factors.
pub fn squarefree_part<F: Scalar>(p: &[F]) -> Vec<F> {
    let g = gcd(p, &derivative(p));
    monic(&divrem(p, &g).0)
}

pub fn eval<F: Scalar>(p: &[F], x: &F) -> F {
    let mut acc = F::zero();
    for c in p.iter().rev() {
        acc = acc.mul(x).add(c);
    }
    acc
}

pub fn eval_matrix<F: Scalar>(p: &[F], m: &Matrix<F>) -> Matrix<F> {
    let n = m.rows();
    let mut acc = Matrix::zeros(n, n);
    for c in p.iter().rev() {
        acc = acc.mul(m).add(&Matrix::identity(n).scale(c));
    }
    acc
}

/// Rational roots of a polynomial with rational coefficients, sorted, or
/// `None` if its coefficients are too large to search.
pub fn rational_roots(p: &[Rational]) -> Option<Vec<Rational>> {
    let mut p: Vec<Rational> = p.to_vec();
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    if p.len() <= 1 {
        return Some(Vec::new());
    }
    let mut roots = Vec::new();
    while p.first().is_some_and(|c| c.is_zero()) {
        p.remove(0);
        if !roots.contains(&Rational::zero()) {
            roots.push(Rational::zero());
        }
    }
    if p.len() <= 1 {
        return Some(roots);
    }
    // repeated factors only inflate the coefficients
    let exact: Vec<crate::scalar::Cyclotomic> = p.iter().map(crate::scalar::Cyclotomic::from_rational).collect();
    let p: Vec<Rational> = squarefree_part(&exact).iter().map(|c| c.as_rational().expect("rational input")).collect();
    let den_lcm = p.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p.iter().map(|c| (c * Rational::from_integer(den_lcm.clone())).to_integer()).collect();
    let a0 = ints[0].abs().to_u64()?;
    let an = ints.last().unwrap().abs().to_u64()?;
    if a0 > 1_000_000_000_000 || an > 1_000_000_000_000 {
        return None;
    }
    let divisors = |n: u64| -> Vec<u64> {
        let mut d = Vec::new();
        let mut i = 1u64;
        while i * i <= n {
            if n.is_multiple_of(i) {
                d.push(i);
                if i * i != n {
                    d.push(n / i);
                }
            }
            i += 1;
        }
        d
    };
    let evaluate = |x: &Rational| {
        let mut acc = Rational::zero();
        for c in p.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    for num in divisors(a0) {
        for den in divisors(an) {
            for sign in [1i64, -1] {
                let x = Rational::new(BigInt::from(num) * sign, BigInt::from(den));
                if !roots.contains(&x) && evaluate(&x).is_zero() {
                    roots.push(x);
                }
            }
        }
    }
    roots.sort();
    Some(roots)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rational, Cyclotomic, Ring};

    fn p(c: &[i64]) -> Vec<Cyclotomic> {
        c.iter().map(|&x| Cyclotomic::from_int(x)).collect()
    }

    #[test]
    fn squarefree_removes_repeats() {
        // (x-1)^2 (x+2) = x^3 - 3x + 2
        assert_eq!(squarefree_part(&p(&[2, -3, 0, 1])), p(&[-2, 1, 1]));
    }

    #[test]
    fn division_identity() {
        let a = p(&[1, 2, 3, 4, 5]);
        let b = p(&[1, 0, 2]);
        let (q, r) = divrem(&a, &b);
        let back: Vec<_> = {
            let mut m = mul(&q, &b);
            m.resize(a.len(), Cyclotomic::from_int(0));
            m.iter().zip(r.iter().chain(std::iter::repeat(&Cyclotomic::from_int(0)))).map(|(x, y)| x.add(y)).collect()
        };
        assert_eq!(back, a);
    }

    #[test]
    fn finds_rational_roots() {
        // (2x - 3)(x + 4) x = 2x^3 + 5x^2 - 12x
        let poly: Vec<Rational> = [0, -12, 5, 2].iter().map(|&c| rational::int(c)).collect();
        assert_eq!(
            rational_roots(&poly).unwrap(),
            vec![rational::int(-4), rational::int(0), rational::frac(3, 2)]
        );
    }
}
