use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::dirichlet::{build, CoeffModel};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::special::ZetaEvalConfig;

use super::main_term::main_term;
use super::{QuadratureSpec, ZetaGrid};

/// Finite-height thresholds for the asymptotic statements. None of them
/// follows from the asymptotics, so they are inputs and are echoed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Calibration {
    /// allowed ensemble mean of `|I - main|/I`
    pub mean_rel_dev: f64,
    /// allowed `|I - main|/I` for the unit polynomial
    pub unit_rel_dev: f64,
    /// AFE error allowed as `afe_constant · T^{-2/3}`
    pub afe_constant: f64,
    /// allowed max/min of `M₃(1/2,T)/(T (log T)^{9/4})` over the grid
    pub third_moment_factor: f64,
    /// `C` in `M₃(1/2,T) ≤ C T^{(3/2)(σ-1/2)} M₃(σ,T)`
    pub transfer_constant: f64,
}

impl Default for Calibration {
    fn default() -> Self {
        Self { mean_rel_dev: 0.05, unit_rel_dev: 0.03, afe_constant: 10.0, third_moment_factor: 2.0, transfer_constant: 10.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TwistedMomentConfig {
    pub model: CoeffModel,
    #[serde(rename = "T")]
    pub t: f64,
    pub theta: f64,
    pub trials: usize,
    pub seed: u64,
    #[serde(default)]
    pub quadrature: QuadratureSpec,
    #[serde(default = "ZetaEvalConfig::riemann_siegel")]
    pub zeta: ZetaEvalConfig,
    #[serde(default)]
    pub calibration: Calibration,
}

impl TwistedMomentConfig {
    pub fn new(model: CoeffModel, t: f64, theta: f64, trials: usize, seed: u64) -> Self {
        Self {
            model,
            t,
            theta,
            trials,
            seed,
            quadrature: QuadratureSpec::default(),
            zeta: ZetaEvalConfig::riemann_siegel(),
            calibration: Calibration::default(),
        }
    }

    /// `N = ⌈T^θ⌉`.
    pub fn length(&self) -> usize {
        libm::ceil(libm::pow(self.t, self.theta) - 1e-9) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub trial: usize,
    pub seed: u64,
    pub i_direct: f64,
    pub i_error: f64,
    pub main_term: f64,
    pub rel_dev: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwistedMomentReport {
    #[serde(rename = "T")]
    pub t: f64,
    pub theta: f64,
    #[serde(rename = "N")]
    pub n: usize,
    pub regime: String,
    pub rows: Vec<TrialRow>,
    pub mean_rel_dev: f64,
    pub max_rel_dev: f64,
    pub threshold: f64,
    pub passed: bool,
    pub negative_log_pairs: u64,
    pub config: TwistedMomentConfig,
}

pub const BEYOND_HALF: &str = "beyond-1/2 regime";
pub const BELOW_HALF: &str = "below-1/2 regime";

/// Direct moment against the main term over `trials` coefficient draws;
/// trial `i` uses seed `seed + i`.
pub fn twisted_moment_experiment<E: Executor>(exec: &E, cfg: &TwistedMomentConfig) -> Result<TwistedMomentReport> {
    if !(cfg.theta > 0.0 && cfg.theta <= 0.6) {
        return Err(Error::InvalidArgument("theta must lie in (0, 0.6]"));
    }
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is needed"));
    }
    let n = cfg.length();
    if n > 10_000 {
        return Err(Error::TooLarge { count: n as u128, limit: 10_000 });
    }
    let grid = ZetaGrid::new(exec, cfg.t, &cfg.quadrature, &cfg.zeta)?;
    let mut rows = Vec::with_capacity(cfg.trials);
    let mut negative = 0u64;
    for trial in 0..cfg.trials {
        let seed = cfg.seed.wrapping_add(trial as u64);
        let model = CoeffModel { seed, ..cfg.model.clone() };
        let poly = build(&model, n)?;
        let direct = grid.twisted(exec, &poly)?;
        if !(direct.value > 0.0) {
            return Err(Error::QuadratureNotConverged("direct moment is not positive"));
        }
        let main = main_term(&poly, cfg.t)?;
        negative = negative.max(main.negative_log_pairs);
        rows.push(TrialRow {
            trial,
            seed,
            i_direct: direct.value,
            i_error: direct.abs_error_estimate,
            main_term: main.value,
            rel_dev: (direct.value - main.value).abs() / direct.value,
        });
    }
    let mean = rows.iter().map(|r| r.rel_dev).sum::<f64>() / rows.len() as f64;
    let max = rows.iter().map(|r| r.rel_dev).fold(0.0, f64::max);
    let threshold = if cfg.model.kind == crate::dirichlet::CoeffKind::Unit { cfg.calibration.unit_rel_dev } else { cfg.calibration.mean_rel_dev };
    Ok(TwistedMomentReport {
        t: cfg.t,
        theta: cfg.theta,
        n,
        regime: String::from(if cfg.theta > 0.5 { BEYOND_HALF } else { BELOW_HALF }),
        rows,
        mean_rel_dev: mean,
        max_rel_dev: max,
        threshold,
        passed: mean <= threshold,
        negative_log_pairs: negative,
        config: cfg.clone(),
    })
}
