//! Exact integer arithmetic and multiplicative coefficient generators.

mod frac;
mod sieve;
mod sums;

pub use frac::{dirichlet_convolve, frac_coefficients, frac_coefficients_float, CoeffValues, FracCoefficients, EXACT_LIMIT};
pub use sieve::{factor, prime_indicator, primes_in, FactoredInteger, SpfSieve, SIEVE_LIMIT};
pub use sums::{kloosterman_sum, ramanujan_sum, unit_phase};

use crate::error::{Error, Result};

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = a % b;
        a = b;
        b = r;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// Möbius function.
///
/// # Panics
/// If `n == 0`.
pub fn mobius(n: u64) -> i8 {
    assert!(n >= 1, "mobius is defined for n >= 1");
    let f = factor(n);
    if f.factors.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.factors.len().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// Euler's totient.
///
/// # Panics
/// If `n == 0`.
pub fn euler_phi(n: u64) -> u64 {
    assert!(n >= 1, "euler_phi is defined for n >= 1");
    factor(n).factors.iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

/// Inverse of `m` modulo `n`, in `[0, n)`.
pub fn mod_inverse(m: i64, n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::InvalidArgument("modulus must be positive"));
    }
    let n_i = n as i128;
    let r = (m as i128).rem_euclid(n_i);
    let (g, x) = ext_gcd(r, n_i);
    if g != 1 {
        return Err(Error::NotCoprime { m, n });
    }
    Ok(x.rem_euclid(n_i) as u64)
}

/// Returns `(g, x)` with `a·x ≡ g (mod b)`, `g = gcd(a, b)`.
fn ext_gcd(a: i128, b: i128) -> (i128, i128) {
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    (old_r, old_s)
}

/// Table `inv[x]` of inverses modulo `n` for `0 <= x < n`; `None` where
/// `gcd(x, n) > 1`.
pub fn inverse_table(n: u64) -> alloc::vec::Vec<Option<u32>> {
    (0..n).map(|x| mod_inverse(x as i64, n).ok().map(|v| v as u32)).collect()
}
