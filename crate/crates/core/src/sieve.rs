use crate::error::{Error, Result};

pub const MAX_SIEVE_LIMIT: u64 = 100_000_000;

/// All primes up to `limit`, ascending.
#[derive(Clone, Debug)]
pub struct PrimeSieve {
    limit: u64,
    primes: Vec<u64>,
}

/// Sieve of Eratosthenes over odd numbers only, one bit per odd.
pub fn sieve_primes(limit: u64) -> Result<PrimeSieve> {
    if limit > MAX_SIEVE_LIMIT {
        return Err(Error::LimitTooLarge(limit));
    }
    if limit < 2 {
        return Err(Error::ParameterOutOfRange(format!(
            "sieve limit {limit} < 2"
        )));
    }
    // bit i represents 2i + 1
    let n_odd = limit.div_ceil(2) as usize;
    let mut composite = vec![0u64; n_odd.div_ceil(64)];
    let set = |bits: &mut [u64], i: usize| bits[i >> 6] |= 1 << (i & 63);
    let get = |bits: &[u64], i: usize| bits[i >> 6] >> (i & 63) & 1 == 1;
    set(&mut composite, 0); // 1
    let mut i = 1usize;
    loop {
        let p = 2 * i + 1;
        if p * p > limit as usize {
            break;
        }
        if !get(&composite, i) {
            let mut j = p * p / 2;
            while j < n_odd {
                set(&mut composite, j);
                j += p;
            }
        }
        i += 1;
    }
    let mut primes = Vec::with_capacity(estimate_count(limit));
    primes.push(2);
    primes.extend(
        (1..n_odd)
            .filter(|&i| !get(&composite, i))
            .map(|i| 2 * i as u64 + 1),
    );
    Ok(PrimeSieve { limit, primes })
}

fn estimate_count(limit: u64) -> usize {
    let x = limit as f64;
    (1.26 * x / x.ln().max(1.0)) as usize + 16
}

impl PrimeSieve {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// Primes `p ≤ x`.
    pub fn primes_up_to(&self, x: u64) -> Result<&[u64]> {
        self.check_range(x)?;
        Ok(&self.primes[..self.pi(x)])
    }

    /// Primes in `(lo, hi]`.
    pub fn primes_in(&self, lo: u64, hi: u64) -> Result<&[u64]> {
        self.check_range(hi)?;
        let a = self.pi(lo.min(hi));
        let b = self.pi(hi);
        Ok(&self.primes[a..b])
    }

    /// π(x) for `x` within the sieve range.
    pub fn pi_count(&self, x: u64) -> Result<u64> {
        self.check_range(x)?;
        Ok(self.pi(x) as u64)
    }

    fn pi(&self, x: u64) -> usize {
        self.primes.partition_point(|&p| p <= x)
    }

    pub fn check_range(&self, x: u64) -> Result<()> {
        if x > self.limit {
            return Err(Error::SieveRangeExceeded {
                requested: x,
                limit: self.limit,
            });
        }
        Ok(())
    }

    pub fn is_prime(&self, n: u64) -> Result<bool> {
        self.check_range(n)?;
        Ok(self.primes.binary_search(&n).is_ok())
    }
}
