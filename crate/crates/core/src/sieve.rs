//! Smallest-prime-factor table over rational integers, used to evaluate
//! `mu_i` and `phi_i` for every Gaussian integer up to a norm bound without
//! factoring each one in the Gaussian integers.
//!
//! A canonical `q = a + bi` is determined, prime by prime, by the rational
//! factorization of `norm(q)` plus one extra bit for split primes: whether
//! `p` divides both `a` and `b` (then both conjugate primes divide `q`)
//! or not (then exactly one does).

use crate::GInt;

#[derive(Clone, Debug)]
pub struct NormSieve {
    spf: Vec<u32>,
}

/// `mu_i` and `phi_i` of one Gaussian integer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MuPhi {
    pub mu: i8,
    pub phi: u64,
}

impl NormSieve {
    pub fn new(limit: u64) -> Self {
        let limit = usize::try_from(limit).expect("sieve limit fits in memory");
        assert!(limit < u32::MAX as usize, "sieve limit too large");
        let mut spf = vec![0u32; limit + 1];
        let mut primes: Vec<u32> = Vec::new();
        for n in 2..=limit {
            if spf[n] == 0 {
                spf[n] = n as u32;
                primes.push(n as u32);
            }
            let smallest = spf[n];
            for &p in &primes {
                let m = n * p as usize;
                if p > smallest || m > limit {
                    break;
                }
                spf[m] = p;
            }
        }
        Self { spf }
    }

    pub fn limit(&self) -> u64 {
        (self.spf.len() - 1) as u64
    }

    /// `(p, e)` pairs of `n`, ascending in `p`. `n` must be within the limit.
    pub fn factor(&self, mut n: u64) -> Vec<(u64, u32)> {
        assert!(n <= self.limit(), "{n} exceeds the sieve limit {}", self.limit());
        let mut out: Vec<(u64, u32)> = Vec::new();
        while n > 1 {
            let p = u64::from(self.spf[n as usize]);
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        out
    }

    /// `mu_i(q)` and `phi_i(q)` for nonzero `q`.
    pub fn mu_phi(&self, q: GInt) -> MuPhi {
        assert!(!q.is_zero(), "mu_i/phi_i undefined at 0");
        let n = q.norm() as u64;
        let mut mu: i8 = 1;
        let mut phi: u64 = 1;
        for (p, e) in self.factor(n) {
            let pi = p as i64;
            let (local, prime_count, squarefree) = if p == 2 {
                (p.pow(e - 1), 1, e == 1)
            } else if p % 4 == 3 {
                // inert: p^(e/2) divides q, residue field of size p^2
                (p.pow(e - 2) * (p * p - 1), 1, e == 2)
            } else if q.re % pi == 0 && q.im % pi == 0 {
                (p.pow(e - 2) * (p - 1) * (p - 1), 2, e == 2)
            } else {
                (p.pow(e - 1) * (p - 1), 1, e == 1)
            };
            phi *= local;
            if !squarefree {
                mu = 0;
            } else if prime_count == 1 {
                mu = -mu;
            }
        }
        MuPhi { mu, phi }
    }
}
