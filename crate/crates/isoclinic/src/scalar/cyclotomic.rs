use super::rational::{self, square_split, squarefree_primes};
use super::{Rational, Ring, Scalar, ScalarError};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

/// Element of Q(zeta_L) in the power basis 1, zeta, ..., zeta^(phi(L)-1).
///
/// `order` is kept canonical (1, odd, or divisible by 4) and is lowered to 1
/// whenever the value is rational.
#[derive(Clone, Debug)]
pub struct Cyclotomic {
    order: u32,
    coeffs: Vec<Rational>,
}

struct FieldTable {
    phi: usize,
    /// `powers[e]` expresses zeta^e in the power basis, for 0 <= e < L.
    powers: Vec<Vec<i64>>,
}

fn canonical_order(n: u32) -> u32 {
    if n % 4 == 2 {
        n / 2
    } else {
        n
    }
}

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let lead = *den.last().unwrap();
    let mut quot = vec![0i64; rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd] / lead;
        quot[k] = c;
        for (j, d) in den.iter().enumerate() {
            rem[k + j] -= c * d;
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    quot
}

fn cyclotomic_poly(n: u32) -> Vec<i64> {
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            p = poly_div_exact(&p, &cyclotomic_poly(d));
        }
    }
    p
}

fn table(order: u32) -> Arc<FieldTable> {
    static CACHE: OnceLock<RwLock<HashMap<u32, Arc<FieldTable>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| RwLock::new(HashMap::new()));
    if let Some(t) = cache.read().unwrap().get(&order) {
        return t.clone();
    }
    let phi_poly = cyclotomic_poly(order);
    let phi = phi_poly.len() - 1;
    let mut powers: Vec<Vec<i64>> = Vec::with_capacity(order as usize);
    for e in 0..order as usize {
        if e < phi {
            let mut v = vec![0i64; phi];
            v[e] = 1;
            powers.push(v);
        } else {
            let prev = &powers[e - 1];
            let top = prev[phi - 1];
            let mut v = vec![0i64; phi];
            for j in (1..phi).rev() {
                v[j] = prev[j - 1];
            }
            for j in 0..phi {
                v[j] -= top * phi_poly[j];
            }
            powers.push(v);
        }
    }
    let t = Arc::new(FieldTable { phi, powers });
    cache.write().unwrap().insert(order, t.clone());
    t
}

impl Cyclotomic {
    pub fn rational(q: Rational) -> Self {
        Cyclotomic { order: 1, coeffs: vec![q] }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Build from power-basis coefficients in Q(zeta_order).
    pub fn from_coeffs(order: u32, coeffs: Vec<Rational>) -> Result<Self, ScalarError> {
        if order == 0 {
            return Err(ScalarError::Malformed("cyclotomic order 0".into()));
        }
        let canon = canonical_order(order);
        let t = table(order);
        if coeffs.len() != t.phi {
            return Err(ScalarError::Malformed(format!(
                "order {order} needs {} coefficients, got {}",
                t.phi,
                coeffs.len()
            )));
        }
        if canon == order {
            return Ok(Cyclotomic { order, coeffs }.normalized());
        }
        // order = 2 * odd: zeta_order = -zeta_odd^((odd+1)/2)
        let mut acc = Cyclotomic::zero();
        for (k, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                let term = Cyclotomic::root_of_unity(order, k as i64).scale(c);
                acc = Ring::add(&acc, &term);
            }
        }
        Ok(acc)
    }

    fn scale(&self, q: &Rational) -> Self {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
            .normalized()
    }

    fn normalized(mut self) -> Self {
        if self.order != 1 && self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            self.coeffs.truncate(1);
            self.order = 1;
        }
        self
    }

    fn lift(&self, order: u32) -> Vec<Rational> {
        if self.order == order {
            return self.coeffs.clone();
        }
        let t = table(order);
        let step = (order / self.order) as usize;
        let mut out = vec![Rational::zero(); t.phi];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&t.powers[(k * step) % order as usize]) {
                if *p != 0 {
                    *o += c * Rational::from_integer((*p).into());
                }
            }
        }
        out
    }

    fn common(&self, other: &Self) -> (u32, Vec<Rational>, Vec<Rational>) {
        let order = self.order.lcm(&other.order);
        (order, self.lift(order), other.lift(order))
    }

    fn mul_same(order: u32, a: &[Rational], b: &[Rational]) -> Vec<Rational> {
        let t = table(order);
        let phi = t.phi;
        let mut conv = vec![Rational::zero(); 2 * phi - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if !y.is_zero() {
                    conv[i + j] += x * y;
                }
            }
        }
        let mut out: Vec<Rational> = conv[..phi].to_vec();
        for (e, c) in conv.iter().enumerate().skip(phi) {
            if c.is_zero() {
                continue;
            }
            for (o, p) in out.iter_mut().zip(&t.powers[e % order as usize]) {
                if *p != 0 {
                    *o += c * Rational::from_integer((*p).into());
                }
            }
        }
        out
    }

    /// Complex conjugate (zeta -> zeta^-1).
    pub fn conj(&self) -> Self {
        let mut acc = Cyclotomic::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = Ring::add(&acc, &Cyclotomic::root_of_unity(self.order, -(k as i64)).scale(c));
            }
        }
        acc
    }
}

/// Solve a small dense rational system; used only for field inversion.
fn solve_rational(mut m: Vec<Vec<Rational>>, mut rhs: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = rhs.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, piv);
        rhs.swap(col, piv);
        let inv = m[col][col].recip();
        for j in col..n {
            m[col][j] = &m[col][j] * &inv;
        }
        rhs[col] = &rhs[col] * &inv;
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..n {
                    let d = &f * &m[col][j];
                    m[r][j] -= d;
                }
                let d = &f * &rhs[col];
                rhs[r] -= d;
            }
        }
    }
    Some(rhs)
}

fn legendre(a: u64, p: u64) -> i64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    if result == 1 {
        1
    } else if result == 0 {
        0
    } else {
        -1
    }
}

/// sqrt(p) for a prime p (2 included).
fn sqrt_prime(p: u64) -> Cyclotomic {
    if p == 2 {
        return Ring::sub(&Cyclotomic::root_of_unity(8, 1), &Cyclotomic::root_of_unity(8, 3));
    }
    let mut gauss = Cyclotomic::zero();
    for a in 1..p {
        let s = legendre(a, p);
        gauss = Ring::add(&gauss, &Cyclotomic::root_of_unity(p as u32, a as i64).mul_int(s));
    }
    if p % 4 == 1 {
        gauss
    } else {
        // gauss^2 = -p
        Ring::mul(&gauss, &Cyclotomic::root_of_unity(4, 3))
    }
}

impl PartialEq for Cyclotomic {
    fn eq(&self, other: &Self) -> bool {
        if self.order == other.order {
            return self.coeffs == other.coeffs;
        }
        let (_, a, b) = self.common(other);
        a == b
    }
}

impl Ring for Cyclotomic {
    fn add(&self, other: &Self) -> Self {
        if self.order == 1 && other.order == 1 {
            return Cyclotomic::rational(&self.coeffs[0] + &other.coeffs[0]);
        }
        let (order, a, b) = self.common(other);
        Cyclotomic { order, coeffs: a.iter().zip(&b).map(|(x, y)| x + y).collect() }.normalized()
    }

    fn sub(&self, other: &Self) -> Self {
        if self.order == 1 && other.order == 1 {
            return Cyclotomic::rational(&self.coeffs[0] - &other.coeffs[0]);
        }
        let (order, a, b) = self.common(other);
        Cyclotomic { order, coeffs: a.iter().zip(&b).map(|(x, y)| x - y).collect() }.normalized()
    }

    fn mul(&self, other: &Self) -> Self {
        if self.order == 1 {
            return other.scale(&self.coeffs[0]);
        }
        if other.order == 1 {
            return self.scale(&other.coeffs[0]);
        }
        let (order, a, b) = self.common(other);
        Cyclotomic { order, coeffs: Self::mul_same(order, &a, &b) }.normalized()
    }

    fn neg(&self) -> Self {
        Cyclotomic { order: self.order, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    fn mul_int(&self, n: i64) -> Self {
        self.scale(&rational::int(n))
    }

    fn div_int(&self, n: i64) -> Self {
        self.scale(&rational::frac(1, n))
    }
}

impl Scalar for Cyclotomic {
    const EXACT: bool = true;

    fn zero() -> Self {
        Cyclotomic::rational(Rational::zero())
    }

    fn one() -> Self {
        Cyclotomic::rational(Rational::one())
    }

    fn from_int(n: i64) -> Self {
        Cyclotomic::rational(rational::int(n))
    }

    fn from_rational(q: &Rational) -> Self {
        Cyclotomic::rational(q.clone())
    }

    fn root_of_unity(order: u32, power: i64) -> Self {
        assert!(order > 0, "root of unity of order 0");
        let k = power.rem_euclid(order as i64) as u32;
        let g = k.gcd(&order);
        let (n, k) = (order / g, k / g);
        if n == 1 {
            return Self::one();
        }
        if n == 2 {
            return Self::from_int(-1);
        }
        if n % 4 == 2 {
            let odd = n / 2;
            let e = (k as u64 * (odd as u64).div_ceil(2)) % odd as u64;
            let base = Self::root_of_unity(odd, e as i64);
            return if k % 2 == 1 { base.neg() } else { base };
        }
        let t = table(n);
        let coeffs = t.powers[k as usize].iter().map(|&c| rational::int(c)).collect();
        Cyclotomic { order: n, coeffs }.normalized()
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.order == 1 {
            return Some(Cyclotomic::rational(self.coeffs[0].recip()));
        }
        let phi = self.coeffs.len();
        // column j of the multiplication matrix is self * zeta^j
        let mut m = vec![vec![Rational::zero(); phi]; phi];
        for j in 0..phi {
            let mut basis = vec![Rational::zero(); phi];
            basis[j] = Rational::one();
            let col = Self::mul_same(self.order, &self.coeffs, &basis);
            for (i, c) in col.into_iter().enumerate() {
                m[i][j] = c;
            }
        }
        let mut rhs = vec![Rational::zero(); phi];
        rhs[0] = Rational::one();
        let y = solve_rational(m, rhs)?;
        Some(Cyclotomic { order: self.order, coeffs: y }.normalized())
    }

    fn to_complex(&self) -> Complex64 {
        let mut z = Complex64::new(0.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let angle = 2.0 * std::f64::consts::PI * k as f64 / self.order as f64;
            z += Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle);
        }
        z
    }

    fn as_rational(&self) -> Option<Rational> {
        (self.order == 1).then(|| self.coeffs[0].clone())
    }

    fn sqrt_rational(q: &Rational) -> Result<Self, ScalarError> {
        if q.is_zero() {
            return Ok(Self::zero());
        }
        // sqrt(a/b) = sqrt(a b) / b
        let n: BigInt = q.numer() * q.denom();
        let (square, free) = square_split(&n)?;
        let mut root = Cyclotomic::rational(Rational::new(square, q.denom().clone()));
        if free.to_u64().is_none() {
            return Err(ScalarError::NoSquareRoot(rational::format(q)));
        }
        for p in squarefree_primes(&free) {
            root = Ring::mul(&root, &sqrt_prime(p));
        }
        if q.is_negative() {
            root = Ring::mul(&root, &Self::root_of_unity(4, 1));
        }
        debug_assert!(Ring::mul(&root, &root) == Self::from_rational(q));
        Ok(root)
    }

    fn total_cmp(&self, other: &Self) -> Ordering {
        let (_, a, b) = self.common(other);
        a.cmp(&b)
    }

    fn to_wire(&self) -> Value {
        if self.order == 1 {
            Value::String(rational::format(&self.coeffs[0]))
        } else {
            json!({
                "order": self.order,
                "coeffs": self.coeffs.iter().map(rational::format).collect::<Vec<_>>(),
            })
        }
    }

    fn from_wire(v: &Value) -> Result<Self, ScalarError> {
        match v {
            Value::Object(map) => {
                let order = map
                    .get("order")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| ScalarError::Malformed("cyclotomic scalar needs \"order\"".into()))?;
                let coeffs = map
                    .get("coeffs")
                    .and_then(Value::as_array)
                    .ok_or_else(|| ScalarError::Malformed("cyclotomic scalar needs \"coeffs\"".into()))?
                    .iter()
                    .map(super::parse_rational_value)
                    .collect::<Result<Vec<_>, _>>()?;
                let order = u32::try_from(order).map_err(|_| ScalarError::Malformed("order too large".into()))?;
                Self::from_coeffs(order, coeffs)
            }
            other => super::parse_rational_value(other).map(Cyclotomic::rational),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> Cyclotomic {
        Cyclotomic::root_of_unity(n, k)
    }

    #[test]
    fn roots_of_unity_have_the_right_order() {
        for n in [3u32, 4, 5, 6, 8, 10, 12] {
            let w = z(n, 1);
            assert!(w.pow(n).is_one(), "order {n}");
            for d in 1..n {
                assert!(!w.pow(d).is_one(), "order {n} power {d}");
            }
        }
    }

    #[test]
    fn sum_of_primitive_cube_roots_is_minus_one() {
        let s = Ring::add(&z(3, 1), &z(3, 2));
        assert_eq!(s, Cyclotomic::from_int(-1));
        assert_eq!(s.order(), 1);
    }

    #[test]
    fn mixed_orders_lift_to_lcm() {
        // zeta_4 * zeta_3 = zeta_12^7
        assert_eq!(Ring::mul(&z(4, 1), &z(3, 1)), z(12, 7));
        // zeta_6 = -zeta_3^2
        assert_eq!(z(6, 1), z(3, 2).neg());
    }

    #[test]
    fn inverse_matches_conjugate_on_units() {
        let x = z(5, 2);
        assert_eq!(x.inv().unwrap(), x.conj());
        let y = Ring::add(&z(8, 1), &Cyclotomic::from_int(3));
        assert!(Ring::mul(&y, &y.inv().unwrap()).is_one());
    }

    #[test]
    fn square_roots_of_rationals() {
        for (p, q) in [(2, 1), (-1, 1), (3, 1), (-3, 1), (5, 4), (-7, 3), (12, 1), (-15, 2)] {
            let r = rational::frac(p, q);
            let s = Cyclotomic::sqrt_rational(&r).unwrap();
            assert_eq!(Ring::mul(&s, &s), Cyclotomic::from_rational(&r));
        }
    }

    #[test]
    fn complex_embedding_matches_polar_form() {
        let w = z(12, 5).to_complex();
        let a = 2.0 * std::f64::consts::PI * 5.0 / 12.0;
        assert!((w - Complex64::from_polar(1.0, a)).norm() < 1e-12);
    }

    #[test]
    fn wire_round_trip() {
        let x = Ring::add(&z(12, 1), &Cyclotomic::from_rational(&rational::frac(1, 3)));
        let back = Cyclotomic::from_wire(&x.to_wire()).unwrap();
        assert_eq!(back, x);
        assert_eq!(Cyclotomic::from_wire(&json!("-3/6")).unwrap().to_wire(), json!("-1/2"));
        let six = Cyclotomic::from_wire(&json!({"order": 6, "coeffs": ["0", "1"]})).unwrap();
        assert_eq!(six, z(6, 1));
    }
}
