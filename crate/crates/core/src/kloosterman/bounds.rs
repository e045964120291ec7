use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dirichlet::CoeffModel;
use crate::error::{Error, Result};
use crate::exec::Executor;

use super::{trilinear_sum, TrilinearSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundPreset {
    /// `r = t = 0`
    Conjecture,
    /// `r = 23/48`, `t = 1/2`
    Dfi,
    /// `r = 9/20`, `t = 7/20`
    Bcr,
}

impl BoundPreset {
    pub fn exponents(self) -> (f64, f64) {
        match self {
            BoundPreset::Conjecture => (0.0, 0.0),
            BoundPreset::Dfi => (23.0 / 48.0, 0.5),
            BoundPreset::Bcr => (9.0 / 20.0, 7.0 / 20.0),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Norms {
    pub alpha: f64,
    pub beta: f64,
    pub nu: f64,
    pub alpha_inf: f64,
    pub beta_inf: f64,
}

fn l2(v: &[Complex64]) -> f64 {
    libm::sqrt(v.iter().map(|c| c.norm_sqr()).sum::<f64>())
}

fn linf(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm()).fold(0.0, f64::max)
}

impl Norms {
    pub fn of(spec: &TrilinearSpec) -> Self {
        Self { alpha: l2(&spec.alpha), beta: l2(&spec.beta), nu: l2(&spec.nu), alpha_inf: linf(&spec.alpha), beta_inf: linf(&spec.beta) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneralRhs {
    pub value: f64,
    /// `A ≤ (MN)^{(1/2 - r)/(1 + 2t) + ε}`
    pub admissible: bool,
    pub window: f64,
}

/// `‖α‖‖β‖‖ν‖(M+N)^{1/2+r+ε}A^t + ‖ν‖A^{1/2}(‖α‖_∞‖β‖N^{1/2+ε} + ‖α‖‖β‖_∞M^{1/2+ε})`.
pub fn general_rhs(spec: &TrilinearSpec, r: f64, t: f64, epsilon: f64) -> Result<GeneralRhs> {
    if !(r >= 0.0 && t >= 0.0) {
        return Err(Error::InvalidArgument("r and t must be non-negative"));
    }
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidArgument("epsilon must be non-negative"));
    }
    spec.validate()?;
    let nm = Norms::of(spec);
    let (a, m, n) = (spec.a as f64, spec.m as f64, spec.n as f64);
    let value = nm.alpha * nm.beta * nm.nu * libm::pow(m + n, 0.5 + r + epsilon) * libm::pow(a, t)
        + nm.nu * libm::sqrt(a) * (nm.alpha_inf * nm.beta * libm::pow(n, 0.5 + epsilon) + nm.alpha * nm.beta_inf * libm::pow(m, 0.5 + epsilon));
    let window = libm::pow(m * n, (0.5 - r) / (1.0 + 2.0 * t) + epsilon);
    Ok(GeneralRhs { value, admissible: a <= window, window })
}

/// Right-hand side of the conjectured bound.
pub fn conjecture_rhs(spec: &TrilinearSpec, epsilon: f64) -> Result<f64> {
    general_rhs(spec, 0.0, 0.0, epsilon).map(|g| g.value)
}

fn ratio(s: f64, rhs: f64) -> f64 {
    if rhs > 0.0 {
        s / rhs
    } else {
        0.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub s_value: Complex64,
    pub s_abs: f64,
    pub epsilon: f64,
    pub rhs_conjecture: f64,
    pub rhs_bcr: f64,
    pub rhs_dfi: f64,
    pub ratio_conjecture: f64,
    pub ratio_bcr: f64,
    pub ratio_dfi: f64,
    pub admissible_conjecture: bool,
    pub admissible_bcr: bool,
    pub admissible_dfi: bool,
    pub norms: Norms,
}

pub fn bound_report<E: Executor>(exec: &E, spec: &TrilinearSpec, epsilon: f64) -> Result<BoundReport> {
    let s = trilinear_sum(exec, spec)?;
    let [c, b, d] = [BoundPreset::Conjecture, BoundPreset::Bcr, BoundPreset::Dfi].map(|p| {
        let (r, t) = p.exponents();
        general_rhs(spec, r, t, epsilon)
    });
    let (c, b, d) = (c?, b?, d?);
    let s_abs = s.norm();
    Ok(BoundReport {
        s_value: s,
        s_abs,
        epsilon,
        rhs_conjecture: c.value,
        rhs_bcr: b.value,
        rhs_dfi: d.value,
        ratio_conjecture: ratio(s_abs, c.value),
        ratio_bcr: ratio(s_abs, b.value),
        ratio_dfi: ratio(s_abs, d.value),
        admissible_conjecture: c.admissible,
        admissible_bcr: b.admissible,
        admissible_dfi: d.admissible,
        norms: Norms::of(spec),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarnessConfig {
    #[serde(rename = "A")]
    pub a: u64,
    #[serde(rename = "M")]
    pub m: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub trials: usize,
    pub model: CoeffModel,
    pub seed: u64,
    #[serde(default)]
    pub epsilon: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessRow {
    pub trial: usize,
    pub seed: u64,
    pub s_abs: f64,
    pub rhs_conj: f64,
    pub ratio_conj: f64,
    pub rhs_bcr: f64,
    pub ratio_bcr: f64,
    pub rhs_dfi: f64,
    pub ratio_dfi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarnessReport {
    /// always `"exploratory"`: the ensemble stress-tests, it cannot verify
    pub status: String,
    pub rows: Vec<HarnessRow>,
    pub max_ratio_conj: f64,
    pub mean_ratio_conj: f64,
    pub argmax_trial: usize,
    /// coefficients of the trial achieving the maximum
    pub extremal: TrilinearSpec,
    pub config: HarnessConfig,
}

/// `|S|/rhs` over `trials` coefficient draws; trial `i` uses seed `seed + i`.
pub fn ratio_harness<E: Executor>(exec: &E, cfg: &HarnessConfig) -> Result<HarnessReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is needed"));
    }
    let mut rows = Vec::with_capacity(cfg.trials);
    let mut best: Option<(f64, usize, TrilinearSpec)> = None;
    for trial in 0..cfg.trials {
        let seed = cfg.seed.wrapping_add(trial as u64);
        let spec = TrilinearSpec::from_model(&cfg.model, cfg.a, cfg.m, cfg.n, seed)?;
        let r = bound_report(exec, &spec, cfg.epsilon)?;
        rows.push(HarnessRow {
            trial,
            seed,
            s_abs: r.s_abs,
            rhs_conj: r.rhs_conjecture,
            ratio_conj: r.ratio_conjecture,
            rhs_bcr: r.rhs_bcr,
            ratio_bcr: r.ratio_bcr,
            rhs_dfi: r.rhs_dfi,
            ratio_dfi: r.ratio_dfi,
        });
        if best.as_ref().is_none_or(|b| r.ratio_conjecture > b.0) {
            best = Some((r.ratio_conjecture, trial, spec));
        }
    }
    let (max, argmax, extremal) = best.expect("at least one trial");
    let mean = rows.iter().map(|r| r.ratio_conj).sum::<f64>() / rows.len() as f64;
    Ok(HarnessReport {
        status: "exploratory".into(),
        rows,
        max_ratio_conj: max,
        mean_ratio_conj: mean,
        argmax_trial: argmax,
        extremal,
        config: cfg.clone(),
    })
}
