use super::{Rational, ScalarError};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub fn parse(s: &str) -> Result<Rational, ScalarError> {
    let bad = || ScalarError::Malformed(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

pub fn format(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn frac(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

pub fn floor_i64(q: &Rational) -> i64 {
    q.floor().to_integer().to_i64().expect("exponent out of range")
}

pub fn ceil_i64(q: &Rational) -> i64 {
    q.ceil().to_integer().to_i64().expect("exponent out of range")
}

pub fn denom_u32(q: &Rational) -> u32 {
    q.denom().to_u32().expect("denominator out of range")
}

pub fn to_i64(q: &Rational) -> Option<i64> {
    if q.is_integer() {
        q.numer().to_i64()
    } else {
        None
    }
}

pub fn lcm_u32(a: u32, b: u32) -> u32 {
    a.lcm(&b)
}

/// Split |n| = s^2 * f with f squarefree. Trial division; the integers met
/// here are small.
pub fn square_split(n: &BigInt) -> Result<(BigInt, BigInt), ScalarError> {
    let mut rest = n.abs();
    let mut square = BigInt::one();
    let mut free = BigInt::one();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(2_000_000u64);
    while &p * &p <= rest {
        if p > limit {
            return Err(ScalarError::NoSquareRoot(n.to_string()));
        }
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            square *= &p;
        }
        if e % 2 == 1 {
            free *= &p;
        }
        p += 1;
    }
    free *= rest;
    Ok((square, free))
}

/// Odd prime factors of a squarefree integer, with 2 reported separately.
pub fn squarefree_primes(f: &BigInt) -> Vec<u64> {
    let mut out = Vec::new();
    let mut rest = f.abs().to_u64().expect("squarefree part too large");
    let mut p = 2u64;
    while p * p <= rest {
        if rest.is_multiple_of(p) {
            out.push(p);
            rest /= p;
        }
        p += 1;
    }
    if rest > 1 {
        out.push(rest);
    }
    out
}
