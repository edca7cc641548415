//! Dense polynomials over the prime field F_p and their factorization.
//!
//! Polynomials are coefficient vectors, constant term first, with no trailing
//! zeros (the zero polynomial is the empty vector). Factorization runs the
//! usual pipeline: squarefree decomposition, distinct-degree splitting, then
//! Cantor–Zassenhaus equal-degree splitting driven by a seeded ChaCha stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Seed for the equal-degree splitting stream.
pub const DEFAULT_SPLIT_SEED: u64 = 0x005e_edc4_eb07_a2e7_u64;

pub type Poly = Vec<u64>;

/// Arithmetic in F_p[x] for a prime p < 2^32.
#[derive(Clone, Copy, Debug)]
pub struct Fp {
    p: u64,
}

impl Fp {
    pub fn new(p: u64) -> Self {
        assert!((2..1 << 32).contains(&p), "prime out of range");
        Fp { p }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    fn mulm(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut r = 1 % self.p;
        a %= self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mulm(r, a);
            }
            a = self.mulm(a, a);
            e >>= 1;
        }
        r
    }

    fn inv(&self, a: u64) -> u64 {
        debug_assert!(!a.is_multiple_of(self.p));
        self.pow(a, self.p - 2)
    }

    /// Reduces integer coefficients mod p.
    pub fn reduce(&self, f: &[i64]) -> Poly {
        let p = self.p as i64;
        let mut out: Poly = f.iter().map(|&c| c.rem_euclid(p) as u64).collect();
        trim(&mut out);
        out
    }

    pub fn add(&self, a: &[u64], b: &[u64]) -> Poly {
        let mut out: Poly = (0..a.len().max(b.len()))
            .map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % self.p)
            .collect();
        trim(&mut out);
        out
    }

    pub fn sub(&self, a: &[u64], b: &[u64]) -> Poly {
        let mut out: Poly = (0..a.len().max(b.len()))
            .map(|i| (a.get(i).unwrap_or(&0) + self.p - b.get(i).unwrap_or(&0)) % self.p)
            .collect();
        trim(&mut out);
        out
    }

    pub fn mul(&self, a: &[u64], b: &[u64]) -> Poly {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        trim(&mut out);
        out
    }

    /// Quotient and remainder; `b` must be nonzero.
    pub fn divrem(&self, a: &[u64], b: &[u64]) -> (Poly, Poly) {
        assert!(!b.is_empty(), "division by zero polynomial");
        let mut r = a.to_vec();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let db = b.len() - 1;
        let lead_inv = self.inv(b[db]);
        let mut q = vec![0u64; r.len() - db];
        for k in (0..q.len()).rev() {
            let c = self.mulm(r[k + db], lead_inv);
            q[k] = c;
            if c != 0 {
                for (j, &bj) in b.iter().enumerate() {
                    r[k + j] = (r[k + j] + self.p - self.mulm(c, bj)) % self.p;
                }
            }
        }
        trim(&mut q);
        trim(&mut r);
        (q, r)
    }

    pub fn rem(&self, a: &[u64], b: &[u64]) -> Poly {
        self.divrem(a, b).1
    }

    pub fn div_exact(&self, a: &[u64], b: &[u64]) -> Poly {
        let (q, r) = self.divrem(a, b);
        debug_assert!(r.is_empty());
        q
    }

    pub fn monic(&self, a: &[u64]) -> Poly {
        match a.last() {
            None => Vec::new(),
            Some(&lc) => {
                let inv = self.inv(lc);
                a.iter().map(|&c| self.mulm(c, inv)).collect()
            }
        }
    }

    /// Monic gcd.
    pub fn gcd(&self, a: &[u64], b: &[u64]) -> Poly {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        self.monic(&a)
    }

    pub fn derivative(&self, a: &[u64]) -> Poly {
        let mut out: Poly = a
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| self.mulm(c, i as u64 % self.p))
            .collect();
        trim(&mut out);
        out
    }

    /// `base^e mod m`.
    pub fn powmod(&self, base: &[u64], mut e: u64, m: &[u64]) -> Poly {
        let mut result = self.rem(&[1], m);
        let mut b = self.rem(base, m);
        while e > 0 {
            if e & 1 == 1 {
                result = self.rem(&self.mul(&result, &b), m);
            }
            b = self.rem(&self.mul(&b, &b), m);
            e >>= 1;
        }
        result
    }

    /// Squarefree decomposition of a monic polynomial: pairs (g, k) with g
    /// squarefree monic and f = ∏ g^k.
    pub fn squarefree_decomposition(&self, f: &[u64]) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        self.sqf_into(&self.monic(f), 1, &mut out);
        out
    }

    fn sqf_into(&self, f: &[u64], scale: usize, out: &mut Vec<(Poly, usize)>) {
        if f.len() <= 1 {
            return;
        }
        let df = self.derivative(f);
        if df.is_empty() {
            self.sqf_into(&self.pth_root(f), scale * self.p as usize, out);
            return;
        }
        let mut c = self.gcd(f, &df);
        let mut w = self.div_exact(f, &c);
        let mut i = 1;
        while w.len() > 1 {
            let y = self.gcd(&w, &c);
            let z = self.div_exact(&w, &y);
            if z.len() > 1 {
                out.push((z, i * scale));
            }
            i += 1;
            w = y;
            c = self.div_exact(&c, &w);
        }
        if c.len() > 1 {
            self.sqf_into(&self.pth_root(&c), scale * self.p as usize, out);
        }
    }

    fn pth_root(&self, f: &[u64]) -> Poly {
        let p = self.p as usize;
        let mut out: Poly = f.iter().step_by(p).copied().collect();
        trim(&mut out);
        out
    }

    /// Distinct-degree splitting of a squarefree monic polynomial: pairs
    /// (g, d) where g is the product of all irreducible factors of degree d.
    pub fn distinct_degree(&self, f: &[u64]) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        let mut f = self.monic(f);
        let x: Poly = vec![0, 1];
        let mut h = self.rem(&x, &f);
        let mut d = 1;
        while f.len() > 2 * d {
            h = self.powmod(&h, self.p, &f);
            let g = self.gcd(&f, &self.sub(&h, &x));
            if g.len() > 1 {
                f = self.div_exact(&f, &g);
                h = self.rem(&h, &f);
                out.push((g, d));
            }
            d += 1;
        }
        if f.len() > 1 {
            let deg = f.len() - 1;
            out.push((f, deg));
        }
        out
    }

    /// Splits a product of distinct irreducibles of common degree `d`.
    pub fn equal_degree(&self, g: &[u64], d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
        let n = g.len() - 1;
        if n == d {
            return vec![self.monic(g)];
        }
        loop {
            let a: Poly = {
                let mut a: Poly = (0..n).map(|_| rng.gen_range(0..self.p)).collect();
                trim(&mut a);
                a
            };
            if a.len() <= 1 {
                continue;
            }
            let candidate = if self.p == 2 {
                // absolute trace to F_2
                let mut t = a.clone();
                let mut acc = a.clone();
                for _ in 1..d {
                    t = self.rem(&self.mul(&t, &t), g);
                    acc = self.add(&acc, &t);
                }
                acc
            } else {
                // a^((p^d - 1)/2) = (a^(1 + p + ... + p^(d-1)))^((p-1)/2)
                let mut frob = self.rem(&a, g);
                let mut norm = frob.clone();
                for _ in 1..d {
                    frob = self.powmod(&frob, self.p, g);
                    norm = self.rem(&self.mul(&norm, &frob), g);
                }
                let b = self.powmod(&norm, (self.p - 1) / 2, g);
                self.sub(&b, &[1])
            };
            let h = self.gcd(g, &candidate);
            if h.len() > 1 && h.len() < g.len() {
                let rest = self.div_exact(g, &h);
                let mut out = self.equal_degree(&h, d, rng);
                out.extend(self.equal_degree(&rest, d, rng));
                return out;
            }
        }
    }

    /// Complete factorization of a monic polynomial into monic irreducibles
    /// with multiplicities, sorted by (degree, coefficients).
    pub fn factor(&self, f: &[u64], seed: u64) -> Vec<(Poly, usize)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ self.p);
        let mut out = Vec::new();
        for (g, k) in self.squarefree_decomposition(f) {
            for (block, d) in self.distinct_degree(&g) {
                for irr in self.equal_degree(&block, d, &mut rng) {
                    out.push((irr, k));
                }
            }
        }
        out.sort_by(|a, b| (a.0.len(), &a.0, a.1).cmp(&(b.0.len(), &b.0, b.1)));
        out
    }

    /// Degrees and multiplicities of the irreducible factors, without the
    /// equal-degree step. Sorted by (degree desc, multiplicity desc).
    pub fn factorization_pattern(&self, f: &[u64]) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (g, k) in self.squarefree_decomposition(f) {
            for (block, d) in self.distinct_degree(&g) {
                let count = (block.len() - 1) / d;
                out.extend(std::iter::repeat_n((d, k), count));
            }
        }
        out.sort_unstable_by(|a, b| b.cmp(a));
        out
    }

    /// Whether a monic polynomial is irreducible (Ben-Or style test).
    pub fn is_irreducible(&self, f: &[u64]) -> bool {
        let n = f.len().saturating_sub(1);
        if n == 0 {
            return false;
        }
        let x: Poly = vec![0, 1];
        let mut h = self.rem(&x, f);
        for _ in 1..=n / 2 {
            h = self.powmod(&h, self.p, f);
            if self.gcd(f, &self.sub(&h, &x)).len() > 1 {
                return false;
            }
        }
        true
    }
}

pub fn trim(a: &mut Poly) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

/// Factor degrees with multiplicity of an integer polynomial reduced mod p:
/// pairs (irreducible degree, multiplicity), degrees descending.
pub fn factor_poly_mod_p(f: &[i64], p: u64) -> Vec<(usize, usize)> {
    let fp = Fp::new(p);
    let mut pairs: Vec<(usize, usize)> = fp
        .factor(&fp.reduce(f), DEFAULT_SPLIT_SEED)
        .into_iter()
        .map(|(g, k)| (g.len() - 1, k))
        .collect();
    pairs.sort_unstable_by(|a, b| b.cmp(a));
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn eval(fp: &Fp, f: &[u64], x: u64) -> u64 {
        f.iter().rev().fold(0, |acc, &c| (acc * x + c) % fp.p())
    }

    #[test]
    fn x2_plus_1() {
        assert_eq!(factor_poly_mod_p(&[1, 0, 1], 5), vec![(1, 1), (1, 1)]);
        assert_eq!(factor_poly_mod_p(&[1, 0, 1], 3), vec![(2, 1)]);
        assert_eq!(factor_poly_mod_p(&[1, 0, 1], 2), vec![(1, 2)]);
        // roots 2, 3 mod 5 by exhaustion
        let fp = Fp::new(5);
        let roots: Vec<u64> = (0..5).filter(|&x| eval(&fp, &[1, 0, 1], x) == 0).collect();
        assert_eq!(roots, vec![2, 3]);
    }

    #[test]
    fn repeated_factors_in_small_characteristic() {
        // (x+1)^4 (x^2+x+1)^2 over F_2, degree 8
        let fp = Fp::new(2);
        let a = fp.mul(&[1, 1], &[1, 1]);
        let a4 = fp.mul(&a, &a);
        let b = [1u64, 1, 1];
        let f = fp.mul(&a4, &fp.mul(&b, &b));
        let fac = fp.factor(&f, 1);
        assert_eq!(fac, vec![(vec![1, 1], 4), (vec![1, 1, 1], 2)]);
        // (x^3 - 1)^3 = (x - 1)^9 over F_3
        let fp3 = Fp::new(3);
        let cube = fp3.reduce(&[-1, 0, 0, 1]);
        let f = fp3.mul(&cube, &fp3.mul(&cube, &cube));
        assert_eq!(fp3.factorization_pattern(&f), vec![(1, 9)]);
    }

    #[test]
    fn cyclotomic_pattern_matches_order() {
        // Φ_5 mod 7 is irreducible (ord 7 mod 5 = 4); mod 11 it splits.
        assert_eq!(factor_poly_mod_p(&[1, 1, 1, 1, 1], 7), vec![(4, 1)]);
        assert_eq!(factor_poly_mod_p(&[1, 1, 1, 1, 1], 11), vec![(1, 1); 4]);
        assert_eq!(
            factor_poly_mod_p(&[1, 1, 1, 1, 1], 19),
            vec![(2, 1), (2, 1)]
        );
    }

    proptest! {
        #[test]
        fn factorization_reconstructs_input(
            coeffs in proptest::collection::vec(0u64..1000, 1..8),
            p_idx in 0usize..6,
        ) {
            let p = [2u64, 3, 5, 7, 101, 65_537][p_idx];
            let fp = Fp::new(p);
            let mut f: Poly = coeffs.iter().map(|c| c % p).collect();
            f.push(1);
            let fac = fp.factor(&f, 7);
            let mut prod: Poly = vec![1];
            for (g, k) in &fac {
                prop_assert!(fp.is_irreducible(g));
                for _ in 0..*k {
                    prod = fp.mul(&prod, g);
                }
            }
            prop_assert_eq!(&prod, &f);
            let mut from_pattern: Vec<(usize, usize)> =
                fac.iter().map(|(g, k)| (g.len() - 1, *k)).collect();
            from_pattern.sort_unstable_by(|a, b| b.cmp(a));
            prop_assert_eq!(fp.factorization_pattern(&f), from_pattern);
        }
    }
}
