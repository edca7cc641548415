//! Dirichlet coefficients of ζ_K/ζ = L(s, reg − 1) and their Rankin–Selberg
//! products.
//!
//! At an unramified prime with Frobenius of order d in a group of order g,
//! the local roots are the d-th roots of unity, each with multiplicity g/d,
//! minus one copy of 1. Everything below is driven by that description:
//! complete homogeneous values h_k come from the exact series
//! (1 − T)(1 − T^d)^{−g/d}, Schur values from the Jacobi–Trudi determinant.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::field::FieldDescriptor;
use crate::par;
use crate::sieve::PrimeSieve;

/// Largest Euler-factor truncation accepted by [`euler_factor_series`].
pub const MAX_EULER_TERMS: usize = 24;
/// Largest Rankin–Selberg exponent accepted by [`coeff_a_kxk_prime`].
pub const MAX_RS_EXPONENT: usize = 8;

/// Local roots of ζ_K/ζ at an unramified prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LocalRootMultiset {
    pub frobenius_order: usize,
    pub group_order: usize,
}

impl LocalRootMultiset {
    pub fn new(frobenius_order: usize, group_order: usize) -> Self {
        assert!(frobenius_order >= 1 && group_order.is_multiple_of(frobenius_order));
        LocalRootMultiset {
            frobenius_order,
            group_order,
        }
    }

    /// Number of roots, |G| − 1.
    pub fn len(&self) -> usize {
        self.group_order - 1
    }

    pub fn is_empty(&self) -> bool {
        self.group_order == 1
    }

    /// The roots as complex numbers, grouped by exponent.
    pub fn roots(&self) -> Vec<Complex64> {
        let d = self.frobenius_order;
        let mult = self.group_order / d;
        let mut out = Vec::with_capacity(self.len());
        for k in 0..d {
            let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / d as f64);
            let copies = if k == 0 { mult - 1 } else { mult };
            out.extend(std::iter::repeat_n(z, copies));
        }
        out
    }

    /// Power sum Σ α^k: g·[d | k] − 1.
    pub fn power_sum(&self, k: u64) -> i64 {
        let g = self.group_order as i64;
        if k.is_multiple_of(self.frobenius_order as u64) {
            g - 1
        } else {
            -1
        }
    }

    /// h_0, …, h_n: coefficients of ∏(1 − αT)^{−1} = (1 − T)(1 − T^d)^{−g/d}.
    pub fn complete_homogeneous(&self, n: usize) -> Result<Vec<i128>> {
        let d = self.frobenius_order;
        let r = (self.group_order / d) as u64;
        let b = |k: usize| -> BigInt {
            if !k.is_multiple_of(d) {
                return BigInt::zero();
            }
            let j = (k / d) as u64;
            binomial_big(r + j - 1, j)
        };
        (0..=n)
            .map(|k| {
                let v = if k == 0 { b(0) } else { b(k) - b(k - 1) };
                v.to_i128().ok_or(Error::CoefficientOverflow)
            })
            .collect()
    }
}

fn binomial_big(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

pub fn local_roots(field: &FieldDescriptor, p: u64) -> Result<LocalRootMultiset> {
    let d = field.frobenius_order(p)?;
    Ok(LocalRootMultiset::new(d, field.degree_closure()))
}

/// a_K(p^k) for k = 0..=n.
pub fn euler_factor_series(field: &FieldDescriptor, p: u64, n: usize) -> Result<Vec<i128>> {
    if n > MAX_EULER_TERMS {
        return Err(Error::ParameterOutOfRange(format!(
            "Euler truncation {n} > {MAX_EULER_TERMS}"
        )));
    }
    local_roots(field, p)?.complete_homogeneous(n)
}

/// A partition: nonincreasing positive parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Partition(pub Vec<usize>);

impl Partition {
    pub fn new(mut parts: Vec<usize>) -> Self {
        parts.retain(|&x| x > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition(parts)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().sum()
    }
}

/// All partitions of `n`, in reverse lexicographic order.
pub fn partitions(n: usize) -> Vec<Partition> {
    fn rec(remaining: usize, max_part: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for part in (1..=remaining.min(max_part)).rev() {
            prefix.push(part);
            rec(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// s_λ at the local roots, exactly, by the Jacobi–Trudi determinant
/// det(h_{λ_i − i + j}).
pub fn schur_exact(lambda: &Partition, roots: &LocalRootMultiset) -> Result<i128> {
    let l = lambda.len();
    if l > roots.len() {
        return Err(Error::PartitionTooLong {
            len: l,
            roots: roots.len(),
        });
    }
    if l == 0 {
        return Ok(1);
    }
    let h = roots.complete_homogeneous(lambda.weight() + l)?;
    let entry = |i: usize, j: usize| -> BigInt {
        let idx = lambda.0[i] as isize - i as isize + j as isize;
        if idx < 0 {
            BigInt::zero()
        } else {
            BigInt::from(h[idx as usize])
        }
    };
    let matrix: Vec<Vec<BigInt>> = (0..l)
        .map(|i| (0..l).map(|j| entry(i, j)).collect())
        .collect();
    arith::bareiss_det(matrix)
        .to_i128()
        .ok_or(Error::CoefficientOverflow)
}

/// s_λ at the local roots as a complex number.
pub fn schur(lambda: &Partition, roots: &LocalRootMultiset) -> Result<Complex64> {
    schur_exact(lambda, roots).map(|v| Complex64::new(v as f64, 0.0))
}

/// a_K(n), multiplicative in n.
pub fn coeff_a_k(field: &FieldDescriptor, n: u64) -> Result<i128> {
    if n == 0 || !field.is_coprime(n) {
        return Err(Error::NotCoprimeToDiscriminant { n });
    }
    let mut value: i128 = 1;
    for (p, e) in arith::factorize(n) {
        let h = local_roots(field, p)?.complete_homogeneous(e as usize)?;
        value = value
            .checked_mul(h[e as usize])
            .ok_or(Error::CoefficientOverflow)?;
    }
    Ok(value)
}

/// a_{K×K'}(p^j) = Σ_{|λ| = j} s_λ(A_K(p)) s_λ(A_K'(p)).
pub fn coeff_a_kxk_prime(
    k: &FieldDescriptor,
    k2: &FieldDescriptor,
    p: u64,
    j: usize,
) -> Result<i128> {
    if j > MAX_RS_EXPONENT {
        return Err(Error::ParameterOutOfRange(format!(
            "exponent {j} > {MAX_RS_EXPONENT}"
        )));
    }
    let a = local_roots(k, p)?;
    let b = local_roots(k2, p)?;
    rankin_selberg_local(&a, &b, j)
}

/// The Cauchy-identity sum for given root multisets.
pub fn rankin_selberg_local(
    a: &LocalRootMultiset,
    b: &LocalRootMultiset,
    j: usize,
) -> Result<i128> {
    let max_len = a.len().min(b.len());
    let mut total: i128 = 0;
    for lambda in partitions(j).into_iter().filter(|l| l.len() <= max_len) {
        let term = schur_exact(&lambda, a)?
            .checked_mul(schur_exact(&lambda, b)?)
            .ok_or(Error::CoefficientOverflow)?;
        total = total.checked_add(term).ok_or(Error::CoefficientOverflow)?;
    }
    Ok(total)
}

/// a_{K×K'}(n), multiplicative in n.
pub fn coeff_a_kxk(k: &FieldDescriptor, k2: &FieldDescriptor, n: u64) -> Result<i128> {
    if n == 0 || !k.is_coprime(n) || !k2.is_coprime(n) {
        return Err(Error::NotCoprimeToDiscriminant { n });
    }
    let mut value: i128 = 1;
    for (p, e) in arith::factorize(n) {
        let local = coeff_a_kxk_prime(k, k2, p, e as usize)?;
        value = value.checked_mul(local).ok_or(Error::CoefficientOverflow)?;
    }
    Ok(value)
}

/// λ_K(n)Λ(n): (Σ_j α_j(p)^k) log p for n = p^k, zero otherwise.
pub fn lambda_vm(field: &FieldDescriptor, n: u64) -> Result<f64> {
    if n < 2 {
        return Err(Error::ParameterOutOfRange(format!("n = {n} < 2")));
    }
    match arith::prime_power(n) {
        None => Ok(0.0),
        Some((p, k)) => {
            let roots = local_roots(field, p)?;
            Ok(roots.power_sum(k as u64) as f64 * (p as f64).ln())
        }
    }
}

/// Unramified prime powers p^k ≤ limit with λ_K(p^k)Λ(p^k), in increasing
/// (p, k) order.
fn prime_power_terms(
    field: &FieldDescriptor,
    limit: u64,
    sieve: &PrimeSieve,
) -> Result<Vec<(u64, f64)>> {
    let primes = sieve.primes_up_to(limit)?;
    let blocks: Vec<&[u64]> = primes.chunks(par::BLOCK).collect();
    let per_block = par::map(&blocks, |block| -> Result<Vec<(u64, f64)>> {
        let mut out = Vec::new();
        for &p in block.iter() {
            if field.is_ramified(p) {
                continue;
            }
            let roots = local_roots(field, p)?;
            let logp = (p as f64).ln();
            let mut pk = p;
            let mut k = 1u64;
            loop {
                out.push((pk, roots.power_sum(k) as f64 * logp));
                match pk.checked_mul(p) {
                    Some(next) if next <= limit => {
                        pk = next;
                        k += 1;
                    }
                    _ => break,
                }
            }
        }
        Ok(out)
    });
    let mut all = Vec::new();
    for b in per_block {
        all.extend(b?);
    }
    Ok(all)
}

/// Σ_{n ≤ N} |λ_K(n)Λ(n)| n^{−1−η} over unramified prime powers.
pub fn mertens_partial_sum(
    field: &FieldDescriptor,
    eta: f64,
    n_max: u64,
    sieve: &PrimeSieve,
) -> Result<f64> {
    if !(eta > 0.0) {
        return Err(Error::ParameterOutOfRange(format!(
            "eta = {eta} must be positive"
        )));
    }
    let terms = prime_power_terms(field, n_max, sieve)?;
    Ok(terms
        .iter()
        .map(|&(n, lam)| lam.abs() * (n as f64).powf(-1.0 - eta))
        .sum())
}

/// Truncated Taylor coefficient of the logarithmic derivative together with
/// an upper bound for the discarded tail.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TaylorTerm {
    /// (η^{k+1}/k!)·|Σ_{n ≤ N} λ_K(n)Λ(n)(log n)^k n^{−s₀}|.
    pub value: f64,
    /// Bound for (η^{k+1}/k!)·Σ_{n > N} |λ_K(n)Λ(n)|(log n)^k n^{−1−η}.
    pub tail_bound: f64,
    pub truncation: u64,
}

/// Chebyshev bound ψ(x) ≤ 1.03883 x (Rosser–Schoenfeld).
const PSI_CONSTANT: f64 = 1.03883;

/// Tail bound using |λ_K(n)| ≤ m, ψ(x) ≤ 1.03883x and partial summation;
/// valid once (log n)^k n^{−1−η} is decreasing past N.
pub fn taylor_tail_bound(m: usize, k: u32, eta: f64, n_max: u64) -> f64 {
    let l = (n_max as f64).ln();
    if l <= k as f64 / (1.0 + eta) {
        return f64::INFINITY;
    }
    let ln_kfact = crate::numerics::ln_factorial(k as u64);
    // η^{k+1} L^k N^{−η} / k!
    let boundary = ((k + 1) as f64 * eta.ln() + k as f64 * l - eta * l - ln_kfact).exp();
    // e^{−ηL} Σ_{j ≤ k} (ηL)^j / j!  (scaled incomplete gamma)
    let y = eta * l;
    let mut term = (-y).exp();
    let mut gamma = term;
    for j in 1..=k {
        term *= y / j as f64;
        gamma += term;
    }
    PSI_CONSTANT * m as f64 * (boundary + gamma)
}

pub fn log_deriv_taylor_term(
    field: &FieldDescriptor,
    k: u32,
    eta: f64,
    tau: f64,
    n_max: u64,
    sieve: &PrimeSieve,
    tolerance: f64,
) -> Result<TaylorTerm> {
    if !(eta > 0.0 && eta <= 1.0) {
        return Err(Error::ParameterOutOfRange(format!(
            "eta = {eta} outside (0, 1]"
        )));
    }
    if k > 40 {
        return Err(Error::ParameterOutOfRange(format!("k = {k} > 40")));
    }
    let tail_bound = taylor_tail_bound(field.m(), k, eta, n_max);
    if !(tail_bound <= tolerance) {
        return Err(Error::TruncationInsufficient {
            tail: tail_bound,
            tolerance,
        });
    }
    let terms = prime_power_terms(field, n_max, sieve)?;
    let ln_scale = (k + 1) as f64 * eta.ln() - crate::numerics::ln_factorial(k as u64);
    let mut sum = Complex64::zero();
    for &(n, lam) in &terms {
        let l = (n as f64).ln();
        let mag = lam * (k as f64 * l.ln() - (1.0 + eta) * l + ln_scale).exp();
        sum += Complex64::from_polar(mag, -tau * l);
    }
    Ok(TaylorTerm {
        value: sum.norm(),
        tail_bound,
        truncation: n_max,
    })
}

/// The per-term window estimate outside [N₀, N₁] = [e^{M/(300η)}, e^{40M/η}],
/// in the form (η log n)^k / k! ≤ n^{η/2} 110^{−k}. Returns (lhs, rhs) in log
/// scale for n = e^{log_n}.
pub fn taylor_window_sides(eta: f64, k: u32, log_n: f64) -> (f64, f64) {
    let lhs = k as f64 * (eta * log_n).ln() - crate::numerics::ln_factorial(k as u64);
    let rhs = 0.5 * eta * log_n - k as f64 * 110f64.ln();
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Catalog;
    use crate::sieve::sieve_primes;

    fn cat() -> Catalog {
        Catalog::builtin()
    }

    #[test]
    fn local_root_examples() {
        let r = LocalRootMultiset::new(1, 4);
        assert_eq!(r.roots(), vec![Complex64::new(1.0, 0.0); 3]);
        let c = cat();
        let g = c.get("gaussian").unwrap();
        let r3 = local_roots(g, 3).unwrap();
        let roots = r3.roots();
        assert_eq!(roots.len(), 1);
        assert!((roots[0] + 1.0).norm() < 1e-15);
        assert_eq!(local_roots(g, 2).unwrap_err(), Error::RamifiedPrime(2));
    }

    #[test]
    fn euler_series_examples() {
        let g = cat().get("gaussian").unwrap().clone();
        let s = euler_factor_series(&g, 3, 6).unwrap();
        assert_eq!(s, vec![1, -1, 1, -1, 1, -1, 1]);
        // (1 − T)(1 + T³ + T⁶ + …) by long division
        let c3 = LocalRootMultiset::new(3, 3)
            .complete_homogeneous(7)
            .unwrap();
        assert_eq!(c3, vec![1, -1, 0, 1, -1, 0, 1, -1]);
        let split = LocalRootMultiset::new(1, 4)
            .complete_homogeneous(3)
            .unwrap();
        assert_eq!(split, vec![1, 3, 6, 10]);
        assert!(euler_factor_series(&g, 3, 25).is_err());
    }

    #[test]
    fn gaussian_coefficients() {
        let g = cat().get("gaussian").unwrap().clone();
        assert_eq!(coeff_a_k(&g, 1).unwrap(), 1);
        assert_eq!(coeff_a_k(&g, 15).unwrap(), -1);
        assert_eq!(coeff_a_k(&g, 9).unwrap(), 1);
        assert_eq!(
            coeff_a_k(&g, 6).unwrap_err(),
            Error::NotCoprimeToDiscriminant { n: 6 }
        );
    }

    #[test]
    fn schur_examples() {
        let two_ones = LocalRootMultiset::new(1, 3);
        assert_eq!(schur_exact(&Partition::new(vec![]), &two_ones).unwrap(), 1);
        assert_eq!(schur_exact(&Partition::new(vec![1]), &two_ones).unwrap(), 2);
        assert_eq!(
            schur_exact(&Partition::new(vec![2, 1]), &two_ones).unwrap(),
            2
        );
        assert_eq!(
            schur_exact(&Partition::new(vec![1, 1, 1]), &two_ones).unwrap_err(),
            Error::PartitionTooLong { len: 3, roots: 2 }
        );
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (0..=8).map(|n| partitions(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn rankin_selberg_small_cases() {
        let c = cat();
        let g = c.get("gaussian").unwrap();
        assert_eq!(coeff_a_kxk_prime(g, g, 3, 0).unwrap(), 1);
        assert_eq!(coeff_a_kxk_prime(g, g, 3, 1).unwrap(), 1);
        // (1 − (−1)(−1)T)^{−1} = 1/(1 − T)
        assert_eq!(coeff_a_kxk_prime(g, g, 3, 2).unwrap(), 1);
        let s3 = c.get("s3-23").unwrap();
        for p in [5u64, 7, 11, 13] {
            let a = coeff_a_k(s3, p).unwrap() * coeff_a_k(g, p).unwrap();
            assert_eq!(coeff_a_kxk_prime(s3, g, p, 1).unwrap(), a);
        }
        assert_eq!(coeff_a_kxk(g, g, 15).unwrap(), 1);
    }

    #[test]
    fn lambda_examples() {
        let g = cat().get("gaussian").unwrap().clone();
        assert_eq!(lambda_vm(&g, 6).unwrap(), 0.0);
        assert!((lambda_vm(&g, 3).unwrap() + 3f64.ln()).abs() < 1e-15);
        assert!((lambda_vm(&g, 9).unwrap() - 3f64.ln()).abs() < 1e-15);
        assert!((lambda_vm(&g, 5).unwrap() - 5f64.ln()).abs() < 1e-15);
    }

    #[test]
    fn mertens_bound_small() {
        let sieve = sieve_primes(10_000).unwrap();
        let c = cat();
        let g = c.get("gaussian").unwrap();
        assert!(mertens_partial_sum(g, 1.0, 10_000, &sieve).unwrap() < 1.0);
        for f in c.fields() {
            let v = mertens_partial_sum(f, 10.0, 1000, &sieve).unwrap();
            assert!(v <= f.m() as f64 / 10.0 + 1e-15, "{}: {v}", f.name());
        }
    }

    #[test]
    fn taylor_term_tail_control() {
        let sieve = sieve_primes(100_000).unwrap();
        let g = cat().get("gaussian").unwrap().clone();
        let t = log_deriv_taylor_term(&g, 0, 1.0, 0.0, 100_000, &sieve, 1.0).unwrap();
        assert!(t.value <= 1.0);
        assert!(t.tail_bound < 1e-3);
        let err = log_deriv_taylor_term(&g, 1, 1.0, 0.0, 1000, &sieve, 1e-8).unwrap_err();
        assert!(matches!(err, Error::TruncationInsufficient { .. }));
    }

    #[test]
    fn window_estimate_outside_window() {
        // k = M: below N₀ and above N₁ the inequality holds.
        let eta = 0.01;
        for &k in &[10u32, 20, 40] {
            let m = k as f64;
            let n0 = m / (300.0 * eta);
            let n1 = 40.0 * m / eta;
            for &log_n in &[1.0, 0.5 * n0, 0.999 * n0, 1.001 * n1, 3.0 * n1] {
                let (lhs, rhs) = taylor_window_sides(eta, k, log_n);
                assert!(lhs <= rhs, "k={k} log n={log_n}: {lhs} > {rhs}");
            }
        }
    }
}
