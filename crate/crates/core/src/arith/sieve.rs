use alloc::boxed::Box;
use alloc::vec::Vec;

use once_cell::race::OnceBox;

/// Size of the shared smallest-prime-factor table.
pub const SIEVE_LIMIT: usize = 1_000_000;

static SHARED: OnceBox<SpfSieve> = OnceBox::new();

/// Smallest-prime-factor table on `0..=limit`.
#[derive(Debug, Clone)]
pub struct SpfSieve {
    spf: Vec<u32>,
}

impl SpfSieve {
    pub fn new(limit: usize) -> Self {
        let mut spf = alloc::vec![0u32; limit + 1];
        for i in 2..=limit {
            if spf[i] == 0 {
                spf[i] = i as u32;
                let mut j = i.saturating_mul(i);
                while j <= limit {
                    if spf[j] == 0 {
                        spf[j] = i as u32;
                    }
                    j += i;
                }
            }
        }
        Self { spf }
    }

    /// The process-wide table up to [`SIEVE_LIMIT`], built on first use.
    pub fn shared() -> &'static SpfSieve {
        SHARED.get_or_init(|| Box::new(SpfSieve::new(SIEVE_LIMIT)))
    }

    pub fn limit(&self) -> usize {
        self.spf.len() - 1
    }

    /// Smallest prime factor of `n` (`n >= 2`, `n <= limit`).
    #[inline]
    pub fn spf(&self, n: usize) -> usize {
        self.spf[n] as usize
    }

    pub fn is_prime(&self, n: usize) -> bool {
        n >= 2 && self.spf[n] as usize == n
    }
}

/// `n` together with its prime factorisation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactoredInteger {
    pub n: u64,
    /// `(prime, exponent)` with strictly increasing primes.
    pub factors: Vec<(u64, u32)>,
}

impl FactoredInteger {
    pub fn product(&self) -> u64 {
        self.factors.iter().fold(1u64, |acc, &(p, e)| acc * p.pow(e))
    }
}

/// Factors `n >= 1` with the shared sieve, falling back to trial division
/// above [`SIEVE_LIMIT`].
pub fn factor(n: u64) -> FactoredInteger {
    assert!(n >= 1, "factor is defined for n >= 1");
    let mut factors = Vec::new();
    let mut m = n;
    let sieve = SpfSieve::shared();
    let push = |p: u64, factors: &mut Vec<(u64, u32)>| match factors.last_mut() {
        Some((q, e)) if *q == p => *e += 1,
        _ => factors.push((p, 1)),
    };
    if m > sieve.limit() as u64 {
        let mut p = 2u64;
        while p * p <= m && m > sieve.limit() as u64 {
            while m.is_multiple_of(p) {
                push(p, &mut factors);
                m /= p;
            }
            p += if p == 2 { 1 } else { 2 };
        }
        if m > sieve.limit() as u64 {
            // m is prime: every factor up to sqrt(m) has been removed
            push(m, &mut factors);
            m = 1;
        }
    }
    while m > 1 {
        let p = sieve.spf(m as usize) as u64;
        push(p, &mut factors);
        m /= p;
    }
    FactoredInteger { n, factors }
}

/// Primes in `[lo, hi]`, ascending.
pub fn primes_in(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || hi < lo {
        return Vec::new();
    }
    let lo = lo.max(2);
    let width = (hi - lo + 1) as usize;
    let mut composite = alloc::vec![false; width];
    let mut p = 2u64;
    while p * p <= hi {
        let start = (lo.div_ceil(p) * p).max(p * p);
        let mut j = start;
        while j <= hi {
            composite[(j - lo) as usize] = true;
            j += p;
        }
        p += 1;
    }
    composite.iter().enumerate().filter(|(_, &c)| !c).map(|(i, _)| lo + i as u64).collect()
}

/// Indicator on `[lo, hi]` of the primes `p ≡ residue (mod modulus)`;
/// entry `i` corresponds to `lo + i`.
pub fn prime_indicator(lo: u64, hi: u64, residue: u64, modulus: u64) -> Vec<bool> {
    assert!(hi >= lo && lo >= 1, "prime_indicator needs 1 <= lo <= hi");
    assert!(modulus >= 1, "modulus must be positive");
    let mut out = alloc::vec![false; (hi - lo + 1) as usize];
    let r = residue % modulus;
    for p in primes_in(lo, hi) {
        if p % modulus == r {
            out[(p - lo) as usize] = true;
        }
    }
    out
}
