//! Small integer helpers: factorization, squarefree parts, divisor functions.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest absolute value accepted by [`squarefree_part`].
pub const SQUAREFREE_LIMIT: u64 = 1_000_000_000_000;

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// Signed squarefree part of a nonzero integer with |n| ≤ 10^12.
pub fn squarefree_part(n: &BigInt) -> Result<i64> {
    if n.is_zero() {
        return Err(Error::InvalidField("zero has no squarefree part".into()));
    }
    let abs = n
        .abs()
        .to_u64()
        .filter(|&a| a <= SQUAREFREE_LIMIT)
        .ok_or_else(|| Error::DiscriminantTooLarge(n.to_string()))?;
    let core: u64 = factorize(abs)
        .into_iter()
        .filter(|&(_, e)| e % 2 == 1)
        .map(|(p, _)| p)
        .product();
    Ok(if n.is_negative() {
        -(core as i64)
    } else {
        core as i64
    })
}

/// Discriminant of Q(√d) for squarefree d ≠ 1.
pub fn fundamental_discriminant(d: i64) -> i64 {
    if d.rem_euclid(4) == 1 {
        d
    } else {
        4 * d
    }
}

/// d_k(n): the n-th Dirichlet coefficient of ζ(s)^k.
pub fn divisor_k(k: u64, n: u64) -> u128 {
    factorize(n)
        .into_iter()
        .map(|(_, e)| binomial(k as u128 + e as u128 - 1, e as u128))
        .product()
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

pub fn gcd(a: u64, b: u64) -> u64 {
    num_integer::gcd(a, b)
}

pub fn lcm(a: u64, b: u64) -> u64 {
    num_integer::lcm(a, b)
}

/// Multiplicative order of `a` modulo `q` (requires gcd(a, q) = 1).
pub fn multiplicative_order(a: u64, q: u64) -> u64 {
    let a = a % q;
    let mut x = a;
    let mut k = 1;
    while x != 1 % q {
        x = (x as u128 * a as u128 % q as u128) as u64;
        k += 1;
    }
    k
}

/// (n, k) with n = p^k for a prime p, or None.
pub fn prime_power(n: u64) -> Option<(u64, u32)> {
    let f = factorize(n);
    match f.as_slice() {
        [(p, k)] => Some((*p, *k)),
        _ => None,
    }
}

/// Determinant of a square integer matrix by Bareiss elimination.
pub fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}
