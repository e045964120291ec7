use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_complex::Complex64;
use once_cell::race::OnceBox;
use serde::{Deserialize, Serialize};

use crate::arith::{mod_inverse, prime_indicator, ramanujan_sum, unit_phase};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::quad::{composite, pairwise_sum, GaussLegendre};
use crate::weights::phi;

use super::{trilinear_sum, TrilinearSpec};

static PHI_MASS: OnceBox<f64> = OnceBox::new();

/// `∫ φ`.
fn phi_mass() -> f64 {
    *PHI_MASS.get_or_init(|| alloc::boxed::Box::new(composite(&GaussLegendre::new(20), 1.0, 2.0, 1.0 / 32.0, phi)))
}

/// The smooth weight `f(x) = (K/∫φ) φ(x/M)` on `[M, 2M]`, of mass `KM`.
fn bump(k: f64, m: u64) -> Result<impl Fn(u64) -> f64> {
    if !(k > 0.0) {
        return Err(Error::InvalidArgument("K must be positive"));
    }
    let scale = k / phi_mass();
    if scale > 1.0 {
        return Err(Error::InvalidArgument("K too large for a weight bounded by 1"));
    }
    Ok(move |x: u64| scale * phi(x as f64 / m as f64))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonCheck {
    pub lhs: Complex64,
    /// `K (M/n) c_n(a)`
    pub rhs: f64,
    /// `|lhs - rhs| / (K M/n)`
    pub deviation: f64,
}

/// `Σ_{M ≤ m ≤ 2M, (m,n)=1} f(m) e(a m̄/n)` against `K (M/n) c_n(a)`.
pub fn poisson_ramanujan_check(n: u64, a: i64, m: u64, k: f64) -> Result<PoissonCheck> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidArgument("n and M must be positive"));
    }
    let f = bump(k, m)?;
    let terms: Vec<Complex64> =
        (m..=2 * m).filter_map(|x| mod_inverse(x as i64, n).ok().map(|inv| unit_phase(a as i128 * inv as i128, n) * f(x))).collect();
    let lhs = pairwise_sum(&terms);
    let scale = k * m as f64 / n as f64;
    let rhs = scale * ramanujan_sum(n, a);
    Ok(PoissonCheck { lhs, rhs, deviation: (lhs - rhs).norm() / scale })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LowerBoundReport {
    pub spec: TrilinearSpec,
    pub k: f64,
    pub s_value: Complex64,
    pub s_abs: f64,
    /// primes `≡ 3 (mod 4)` carrying `ν`
    pub nu_primes: Vec<u64>,
    /// primes `≡ 1 (mod 4)` carrying `-β`
    pub beta_primes: Vec<u64>,
    /// `K (M/N) #ν #β`
    pub crude_prediction: f64,
    /// `Σ_{a,n} ν_a β_n K (M/n) c_n(a)`
    pub poisson_prediction: f64,
    /// `|S|` over the crude prediction
    pub ratio: f64,
    /// `|S| / (MA)`
    pub s_over_ma: f64,
    /// the construction uses the closed ranges `[X, 2X]`
    pub closed_ranges: bool,
}

/// `α_m = f(m)`, `β_n = -[n prime, n ≡ 1 (4)]`, `ν_a = [a prime, a ≡ 3 (4)]`
/// on `[M,2M] × [N,2N] × [A,2A]`.
pub fn lower_bound_construction<E: Executor>(exec: &E, m: u64, n: u64, a: u64, k: f64) -> Result<LowerBoundReport> {
    if m == 0 || n == 0 || a == 0 {
        return Err(Error::InvalidArgument("range bases must be positive"));
    }
    if m < n {
        return Err(Error::InvalidArgument("the construction assumes M >= N"));
    }
    let f = bump(k, m)?;
    let nu_ind = prime_indicator(a, 2 * a, 3, 4);
    let beta_ind = prime_indicator(n, 2 * n, 1, 4);
    let nu_primes: Vec<u64> = (a..=2 * a).zip(&nu_ind).filter(|(_, &b)| b).map(|(p, _)| p).collect();
    let beta_primes: Vec<u64> = (n..=2 * n).zip(&beta_ind).filter(|(_, &b)| b).map(|(p, _)| p).collect();
    if nu_primes.is_empty() {
        return Err(Error::EmptyPrimeClass { residue: 3, modulus: 4, lo: a, hi: 2 * a });
    }
    if beta_primes.is_empty() {
        return Err(Error::EmptyPrimeClass { residue: 1, modulus: 4, lo: n, hi: 2 * n });
    }
    let one = Complex64::new(1.0, 0.0);
    let spec = TrilinearSpec {
        a,
        m,
        n,
        nu: nu_ind.iter().map(|&b| if b { one } else { Complex64::new(0.0, 0.0) }).collect(),
        alpha: (m..=2 * m).map(|x| Complex64::new(f(x), 0.0)).collect(),
        beta: beta_ind.iter().map(|&b| if b { -one } else { Complex64::new(0.0, 0.0) }).collect(),
        closed: true,
    };
    let s = trilinear_sum(exec, &spec)?;
    let s_abs = s.norm();
    let crude = k * (m as f64 / n as f64) * (nu_primes.len() * beta_primes.len()) as f64;
    let mut poisson = 0.0;
    for &q in &beta_primes {
        for &p in &nu_primes {
            poisson -= k * (m as f64 / q as f64) * ramanujan_sum(q, p as i64);
        }
    }
    Ok(LowerBoundReport {
        spec,
        k,
        s_value: s,
        s_abs,
        nu_primes,
        beta_primes,
        crude_prediction: crude,
        poisson_prediction: poisson,
        ratio: s_abs / crude,
        s_over_ma: s_abs / (m as f64 * a as f64),
        closed_ranges: true,
    })
}

/// Largest range base accepted by the exhaustive counts.
pub const CHAR_COUNT_LIMIT: u64 = 256;

/// `#{(x₁,x₂,x₃,x₄) ∈ [X,2X)⁴ : x₁x₂ = x₃x₄}`.
pub fn quadruple_count(x: u64) -> Result<u64> {
    if x == 0 {
        return Err(Error::InvalidArgument("range base must be positive"));
    }
    if x > CHAR_COUNT_LIMIT {
        return Err(Error::TooLarge { count: x as u128, limit: CHAR_COUNT_LIMIT as u128 });
    }
    let mut products: BTreeMap<u64, u64> = BTreeMap::new();
    for u in x..2 * x {
        for v in x..2 * x {
            *products.entry(u * v).or_default() += 1;
        }
    }
    Ok(products.values().map(|c| c * c).sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharMomentCount {
    /// `#a · #n`, the second moment per `m`
    pub second: u64,
    /// `Q(A) · Q(N)`, the fourth moment per `m` without the `(m, n₁n₂) = 1` filter
    pub fourth: u64,
    pub quadruples_a: u64,
    pub quadruples_n: u64,
}

/// Counting inputs of the character-average argument, with the `m`-sum
/// factored out.
pub fn char_fourth_moment_count(a: u64, n: u64) -> Result<CharMomentCount> {
    let qa = quadruple_count(a)?;
    let qn = quadruple_count(n)?;
    Ok(CharMomentCount { second: a * n, fourth: qa * qn, quadruples_a: qa, quadruples_n: qn })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadruples_brute() {
        for x in 1..=6u64 {
            let mut c = 0;
            for a in x..2 * x {
                for b in x..2 * x {
                    for d in x..2 * x {
                        for e in x..2 * x {
                            c += (a * b == d * e) as u64;
                        }
                    }
                }
            }
            assert_eq!(quadruple_count(x).unwrap(), c);
        }
        assert_eq!(quadruple_count(1).unwrap(), 1);
        assert_eq!(quadruple_count(2).unwrap(), 6);
    }
}
