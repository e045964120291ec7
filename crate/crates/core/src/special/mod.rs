//! Complex ζ(s) and log Γ(s).
//!
//! Two evaluators for ζ are available. Euler–Maclaurin works anywhere with
//! `Re s > -1` and is the default. Riemann–Siegel is restricted to the
//! critical line with `|t| >= 10` and is much cheaper at large height.

mod bernoulli;
mod euler_maclaurin;
mod gamma;
mod line;
mod riemann_siegel;

use alloc::vec::Vec;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec::Executor;

pub use euler_maclaurin::MAX_EM_TERMS;
pub use gamma::{chi, gamma, log_gamma};
pub use line::ZetaLine;
pub use riemann_siegel::{rs_theta, RS_CORRECTIONS};

/// Smallest height accepted by the Riemann–Siegel evaluator.
pub const RS_MIN_HEIGHT: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ZetaMethod {
    #[default]
    EulerMaclaurin,
    RiemannSiegel,
}

/// How to evaluate ζ.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ZetaEvalConfig {
    pub method: ZetaMethod,
    pub target_abs_error: f64,
    /// Bernoulli correction depth, at most [`MAX_EM_TERMS`].
    pub em_terms: usize,
    /// Euler–Maclaurin uses `⌈multiplier · (|t| + 10)⌉` direct terms.
    pub em_cutoff_multiplier: f64,
}

impl Default for ZetaEvalConfig {
    fn default() -> Self {
        Self { method: ZetaMethod::EulerMaclaurin, target_abs_error: 1e-10, em_terms: 15, em_cutoff_multiplier: 1.3 }
    }
}

impl ZetaEvalConfig {
    pub fn riemann_siegel() -> Self {
        Self { method: ZetaMethod::RiemannSiegel, ..Self::default() }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.target_abs_error > 0.0) {
            return Err(Error::InvalidArgument("target_abs_error must be positive"));
        }
        if self.em_terms == 0 || self.em_terms > MAX_EM_TERMS {
            return Err(Error::InvalidArgument("em_terms must lie in 1..=20"));
        }
        if !(self.em_cutoff_multiplier > 0.0) {
            return Err(Error::InvalidArgument("em_cutoff_multiplier must be positive"));
        }
        Ok(())
    }

    /// Direct-sum length used by Euler–Maclaurin at height `t`.
    pub fn em_cutoff(&self, t: f64) -> usize {
        libm::ceil(self.em_cutoff_multiplier * (t.abs() + 10.0)) as usize
    }
}

/// ζ(s).
pub fn zeta(s: Complex64, cfg: &ZetaEvalConfig) -> Result<Complex64> {
    cfg.validate()?;
    if s == Complex64::new(1.0, 0.0) {
        return Err(Error::PoleAtOne);
    }
    match cfg.method {
        ZetaMethod::EulerMaclaurin => {
            if s.re <= -1.0 {
                return Err(Error::InvalidArgument("euler-maclaurin evaluation needs Re s > -1"));
            }
            Ok(euler_maclaurin::zeta_em(s, cfg.em_cutoff(s.im), cfg.em_terms, cfg.target_abs_error * 1e-3))
        }
        ZetaMethod::RiemannSiegel => {
            if s.re != 0.5 || s.im.abs() < RS_MIN_HEIGHT {
                return Err(Error::MethodDomain { re: s.re, im: s.im.abs() });
            }
            let t = s.im.abs();
            let z = riemann_siegel::hardy_z(t, cfg.target_abs_error);
            let v = Complex64::from_polar(z, -rs_theta(t));
            Ok(if s.im < 0.0 { v.conj() } else { v })
        }
    }
}

/// Hardy's `Z(t) = e^{iθ(t)} ζ(1/2 + it)`, real for real `t`. Requires `t >= 10`.
pub fn hardy_z(t: f64, cfg: &ZetaEvalConfig) -> Result<f64> {
    cfg.validate()?;
    if t < RS_MIN_HEIGHT {
        return Err(Error::MethodDomain { re: 0.5, im: t });
    }
    match cfg.method {
        ZetaMethod::RiemannSiegel => Ok(riemann_siegel::hardy_z(t, cfg.target_abs_error)),
        ZetaMethod::EulerMaclaurin => {
            let z = zeta(Complex64::new(0.5, t), cfg)?;
            Ok((z * Complex64::from_polar(1.0, rs_theta(t))).re)
        }
    }
}

/// `|ζ(1/2 + it)|²` for `t >= 10`.
pub fn zeta_abs_sq_critical(t: f64, cfg: &ZetaEvalConfig) -> Result<f64> {
    if t < RS_MIN_HEIGHT {
        return Err(Error::InvalidArgument("zeta_abs_sq_critical needs t >= 10"));
    }
    match cfg.method {
        ZetaMethod::RiemannSiegel => hardy_z(t, cfg).map(|z| z * z),
        ZetaMethod::EulerMaclaurin => zeta(Complex64::new(0.5, t), cfg).map(|z| z.norm_sqr()),
    }
}

/// ζ(σ + it) for every `t` in `ts`, in order.
pub fn zeta_batch<E: Executor>(exec: &E, sigma: f64, ts: &[f64], cfg: &ZetaEvalConfig) -> Result<Vec<Complex64>> {
    exec.map_indexed(ts.len(), |i| zeta(Complex64::new(sigma, ts[i]), cfg)).into_iter().collect()
}

/// `|ζ(1/2 + it)|²` for every `t` in `ts`, in order.
pub fn zeta_abs_sq_batch<E: Executor>(exec: &E, ts: &[f64], cfg: &ZetaEvalConfig) -> Result<Vec<f64>> {
    exec.map_indexed(ts.len(), |i| zeta_abs_sq_critical(ts[i], cfg)).into_iter().collect()
}
