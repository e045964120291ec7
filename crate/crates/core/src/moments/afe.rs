use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::SpfSieve;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::quad::pairwise_sum;
use crate::special::{zeta_abs_sq_critical, ZetaEvalConfig};
use crate::weights::WTable;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AfeConfig {
    /// terms with `|W(2πk/t)|` below this are dropped
    pub w_tol: f64,
    /// largest product `m₁m₂` an evaluator may allocate for
    pub max_terms: usize,
}

impl Default for AfeConfig {
    fn default() -> Self {
        Self { w_tol: 1e-6, max_terms: 50_000_000 }
    }
}

/// `|ζ(1/2+it)|² ≈ 2 Σ_k W(2πk/t) g_t(k)/√k` with
/// `g_t(k) = Σ_{m₁m₂=k} (m₁/m₂)^{it}`.
///
/// `g_t` is real and multiplicative: `g_t(p) = 2cos(t log p)` and
/// `g_t(pm) = g_t(p)g_t(m) - [p | m] g_t(m/p)`, so one sweep over `k`
/// in smallest-prime-factor order gives every value from earlier ones.
#[derive(Debug, Clone)]
pub struct AfeEvaluator {
    table: WTable,
    t_max: f64,
    sieve: SpfSieve,
    log_k: Vec<f64>,
    inv_sqrt_k: Vec<f64>,
}

/// Number of products kept at height `t`.
fn length(t: f64, x_cut: f64) -> usize {
    libm::floor(t * x_cut / (2.0 * PI)) as usize
}

impl AfeEvaluator {
    /// Evaluator for heights up to `t_max`.
    pub fn new(t_max: f64, cfg: &AfeConfig) -> Result<Self> {
        if !(cfg.w_tol > 0.0 && cfg.w_tol < 1.0) {
            return Err(Error::InvalidArgument("w_tol must lie in (0, 1)"));
        }
        let table = WTable::new(cfg.w_tol);
        let k_max = length(t_max, table.x_cut());
        if k_max > cfg.max_terms {
            return Err(Error::TooLarge { count: k_max as u128, limit: cfg.max_terms as u128 });
        }
        let sieve = SpfSieve::new(k_max.max(2));
        let log_k = (0..=k_max).map(|k| if k == 0 { 0.0 } else { libm::log(k as f64) }).collect();
        let inv_sqrt_k = (0..=k_max).map(|k| if k == 0 { 0.0 } else { 1.0 / libm::sqrt(k as f64) }).collect();
        Ok(Self { table, t_max, sieve, log_k, inv_sqrt_k })
    }

    pub fn x_cut(&self) -> f64 {
        self.table.x_cut()
    }

    /// Number of products `k = m₁m₂` summed at height `t`.
    pub fn terms(&self, t: f64) -> usize {
        length(t, self.table.x_cut()).min(self.log_k.len() - 1)
    }

    fn check(&self, t: f64) -> Result<()> {
        if !(t >= 100.0) {
            return Err(Error::InvalidArgument("afe needs t >= 100"));
        }
        if t > self.t_max {
            return Err(Error::InvalidArgument("t above the evaluator's t_max"));
        }
        Ok(())
    }

    /// The smoothed sum at height `t`.
    pub fn eval(&self, t: f64) -> Result<f64> {
        self.check(t)?;
        let k_len = self.terms(t);
        let shift = libm::log(2.0 * PI / t);
        let mut g = alloc::vec![0.0f64; k_len + 1];
        g[1] = 1.0;
        const CHUNK: usize = 4096;
        let mut partial = Vec::with_capacity(k_len / CHUNK + 2);
        let mut acc = self.table.at_log(shift);
        for k in 2..=k_len {
            let p = self.sieve.spf(k);
            let v = if p == k {
                2.0 * libm::cos(t * self.log_k[k])
            } else {
                let m = k / p;
                let mut v = g[p] * g[m];
                if m.is_multiple_of(p) {
                    v -= g[m / p];
                }
                v
            };
            g[k] = v;
            acc += self.table.at_log(self.log_k[k] + shift) * v * self.inv_sqrt_k[k];
            if k % CHUNK == 0 {
                partial.push(acc);
                acc = 0.0;
            }
        }
        partial.push(acc);
        Ok(2.0 * pairwise_sum(&partial))
    }

    /// The unsymmetrised double sum `2 Σ_{m₁m₂ ≤ K} (m₁m₂)^{-1/2}(m₁/m₂)^{it} W`,
    /// walking divisor pairs directly. Its imaginary part measures the
    /// `m₁ ↔ m₂` cancellation.
    pub fn eval_divisor_walk(&self, t: f64) -> Result<Complex64> {
        self.check(t)?;
        let k_len = self.terms(t);
        let shift = libm::log(2.0 * PI / t);
        let mut rows = Vec::with_capacity(k_len);
        for m1 in 1..=k_len {
            let mut row = Complex64::new(0.0, 0.0);
            let l1 = self.log_k[m1];
            for m2 in 1..=k_len / m1 {
                let l2 = self.log_k[m2];
                let w = self.table.at_log(l1 + l2 + shift);
                row += Complex64::from_polar(w * self.inv_sqrt_k[m1] * self.inv_sqrt_k[m2], t * (l1 - l2));
            }
            rows.push(row);
        }
        Ok(pairwise_sum(&rows) * 2.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AfeSample {
    pub t: f64,
    pub afe: f64,
    pub zeta_abs_sq: f64,
    pub abs_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AfeCheck {
    #[serde(rename = "T")]
    pub t: f64,
    pub max_abs_dev: f64,
    /// `constant · T^{-2/3}`
    pub bound: f64,
    pub passed: bool,
    pub x_cut: f64,
    pub samples: Vec<AfeSample>,
}

/// Compares the AFE with `|ζ|²` at `samples` uniform points of `[T, 2T]`.
pub fn afe_check<E: Executor>(
    exec: &E,
    t: f64,
    samples: usize,
    seed: u64,
    constant: f64,
    afe: &AfeConfig,
    zcfg: &ZetaEvalConfig,
) -> Result<AfeCheck> {
    let eval = AfeEvaluator::new(2.0 * t, afe)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ts: Vec<f64> = (0..samples).map(|_| rng.gen_range(t..2.0 * t)).collect();
    let rows: Result<Vec<AfeSample>> = exec
        .map_indexed(ts.len(), |i| {
            let a = eval.eval(ts[i])?;
            let z = zeta_abs_sq_critical(ts[i], zcfg)?;
            Ok(AfeSample { t: ts[i], afe: a, zeta_abs_sq: z, abs_dev: (a - z).abs() })
        })
        .into_iter()
        .collect();
    let rows = rows?;
    let max_abs_dev = rows.iter().map(|r| r.abs_dev).fold(0.0, f64::max);
    let bound = constant * libm::pow(t, -2.0 / 3.0);
    Ok(AfeCheck { t, max_abs_dev, bound, passed: max_abs_dev <= bound, x_cut: eval.x_cut(), samples: rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplicative_sweep_matches_walk() {
        let eval = AfeEvaluator::new(200.0, &AfeConfig { w_tol: 1e-4, ..AfeConfig::default() }).unwrap();
        for t in [123.4, 150.0] {
            let a = eval.eval(t).unwrap();
            let b = eval.eval_divisor_walk(t).unwrap();
            assert!((a - b.re).abs() < 1e-9 * a.abs().max(1.0), "{a} vs {b}");
            assert!(b.im.abs() < 1e-9);
        }
    }
}
