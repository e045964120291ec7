//! Trilinear forms of Kloosterman fractions
//! `S = Σ_a ΣΣ_{(m,n)=1} ν_a α_m β_n e(a m̄/n)` over `A ≤ a < 2A`,
//! `M ≤ m < 2M`, `N ≤ n < 2N`, with the bounds they are measured against.

mod bounds;
mod construction;

use alloc::vec::Vec;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{mod_inverse, unit_phase};
use crate::dirichlet::CoeffModel;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::quad::pairwise_sum;

pub use bounds::{
    bound_report, conjecture_rhs, general_rhs, ratio_harness, BoundPreset, BoundReport, GeneralRhs, HarnessConfig, HarnessReport, HarnessRow, Norms,
};
pub use construction::{
    char_fourth_moment_count, lower_bound_construction, poisson_ramanujan_check, quadruple_count, CharMomentCount, LowerBoundReport, PoissonCheck,
    CHAR_COUNT_LIMIT,
};

/// Largest `#a · #m · #n` evaluated by the brute-force sum.
pub const EVALUATION_LIMIT: u128 = 1_000_000_000;

/// Coefficients on the three ranges. With `closed` set the ranges are
/// `[X, 2X]` instead of `[X, 2X)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrilinearSpec {
    #[serde(rename = "A")]
    pub a: u64,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub nu: Vec<Complex64>,
    pub alpha: Vec<Complex64>,
    pub beta: Vec<Complex64>,
    #[serde(default)]
    pub closed: bool,
}

impl TrilinearSpec {
    pub fn new(a: u64, m: u64, n: u64, nu: Vec<Complex64>, alpha: Vec<Complex64>, beta: Vec<Complex64>) -> Result<Self> {
        let spec = Self { a, m, n, nu, alpha, beta, closed: false };
        spec.validate()?;
        Ok(spec)
    }

    /// All coefficients equal to one.
    pub fn ones(a: u64, m: u64, n: u64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        Self { a, m, n, nu: alloc::vec![one; a as usize], alpha: alloc::vec![one; m as usize], beta: alloc::vec![one; n as usize], closed: false }
    }

    /// Number of integers in the range with base `x`.
    pub fn width(&self, x: u64) -> usize {
        x as usize + self.closed as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.a == 0 || self.m == 0 || self.n == 0 {
            return Err(Error::InvalidArgument("range bases must be positive"));
        }
        if self.nu.len() != self.width(self.a) || self.alpha.len() != self.width(self.m) || self.beta.len() != self.width(self.n) {
            return Err(Error::InvalidArgument("sequence lengths must equal their range widths"));
        }
        Ok(())
    }

    /// `true` when every coefficient lies in the closed unit disk.
    pub fn is_normalized(&self) -> bool {
        self.nu.iter().chain(&self.alpha).chain(&self.beta).all(|c| c.norm() <= 1.0 + 1e-12)
    }

    /// Projects every coefficient onto the closed unit disk.
    pub fn normalize(&mut self) {
        for c in self.nu.iter_mut().chain(self.alpha.iter_mut()).chain(self.beta.iter_mut()) {
            let r = c.norm();
            if r > 1.0 {
                *c /= r;
            }
        }
    }

    /// Terms visited by the brute-force sum.
    pub fn evaluations(&self) -> u128 {
        self.nu.len() as u128 * self.alpha.len() as u128 * self.beta.len() as u128
    }

    /// Coefficients drawn from `model`; the three sequences use seeds
    /// `3·seed`, `3·seed + 1` and `3·seed + 2`, then are clamped to the disk.
    pub fn from_model(model: &CoeffModel, a: u64, m: u64, n: u64, seed: u64) -> Result<Self> {
        let draw = |len: u64, k: u64| {
            let sub = CoeffModel { seed: seed.wrapping_mul(3).wrapping_add(k), ..model.clone() };
            sub.coefficients(len as usize)
        };
        let mut spec = Self::new(a, m, n, draw(a, 0)?, draw(m, 1)?, draw(n, 2)?)?;
        spec.normalize();
        Ok(spec)
    }
}

fn guard(spec: &TrilinearSpec) -> Result<()> {
    spec.validate()?;
    let count = spec.evaluations();
    if count > EVALUATION_LIMIT {
        return Err(Error::TooLarge { count, limit: EVALUATION_LIMIT });
    }
    Ok(())
}

/// Exact `S_{A,M,N}`. One task per `n`; `m̄ mod n` once per pair and the
/// `a`-sum walks `a·m̄ mod n` through a table of `e(k/n)`.
pub fn trilinear_sum<E: Executor>(exec: &E, spec: &TrilinearSpec) -> Result<Complex64> {
    guard(spec)?;
    let zero = Complex64::new(0.0, 0.0);
    let a_len = spec.nu.len() as u64;
    let m_len = spec.alpha.len() as u64;
    let parts = exec.map_indexed(spec.beta.len(), |j| {
        let beta = spec.beta[j];
        if beta == zero {
            return zero;
        }
        let n = spec.n + j as u64;
        let table: Option<Vec<Complex64>> = (n <= 4 * a_len * m_len).then(|| (0..n).map(|k| unit_phase(k as i128, n)).collect());
        let mut rows = Vec::with_capacity(spec.alpha.len());
        for (i, &alpha) in spec.alpha.iter().enumerate() {
            if alpha == zero {
                continue;
            }
            let m = spec.m + i as u64;
            let Ok(x) = mod_inverse(m as i64, n) else { continue };
            let mut idx = ((spec.a % n) as u128 * x as u128 % n as u128) as u64;
            let mut inner = zero;
            for (k, &nu) in spec.nu.iter().enumerate() {
                if nu != zero {
                    let e = match &table {
                        Some(t) => t[idx as usize],
                        None => unit_phase((spec.a + k as u64) as i128 * x as i128, n),
                    };
                    inner += nu * e;
                }
                idx += x;
                if idx >= n {
                    idx -= n;
                }
            }
            rows.push(alpha * inner);
        }
        beta * pairwise_sum(&rows)
    });
    Ok(pairwise_sum(&parts))
}

/// The same sum with every phase rewritten by reciprocity,
/// `e(a m̄/n) = e(-a n̄/m + a/(mn))`.
pub fn trilinear_sum_reciprocal(spec: &TrilinearSpec) -> Result<Complex64> {
    guard(spec)?;
    let mut rows = Vec::new();
    for (j, &beta) in spec.beta.iter().enumerate() {
        let n = spec.n + j as u64;
        for (i, &alpha) in spec.alpha.iter().enumerate() {
            let m = spec.m + i as u64;
            let Ok(nbar) = mod_inverse(n as i64, m) else { continue };
            let mut inner = Complex64::new(0.0, 0.0);
            for (k, &nu) in spec.nu.iter().enumerate() {
                let a = spec.a + k as u64;
                let small = a as f64 / (m as f64 * n as f64);
                inner += nu * unit_phase(-(a as i128) * nbar as i128, m) * Complex64::from_polar(1.0, core::f64::consts::TAU * small);
            }
            rows.push(alpha * beta * inner);
        }
    }
    Ok(pairwise_sum(&rows))
}
