//! Moment integrals of ζ on `[T, 2T]`.
//!
//! * [`direct_twisted_moment`]: `I = ∫ |ζ(1/2+it)|² |A(1/2+it)|² φ(t/T) dt` by
//!   panel quadrature;
//! * [`main_term`]: the asymptotic main term
//!   `Σ_{d,e} a_d ā_e/[d,e] ∫ (log(t(d,e)²/2πde) + 2γ) φ(t/T) dt`;
//! * [`AfeEvaluator`]: `|ζ(1/2+it)|²` from the smoothed double sum
//!   `2 Σ (m₁m₂)^{-1/2} (m₁/m₂)^{it} W(2πm₁m₂/t)`;
//! * [`diagonal_term`] and [`a0_contour`], which add up to the main term;
//! * [`third_moment`]: `∫_T^{2T} |ζ(σ+it)|³ dt`.

mod afe;
mod diagonal;
mod experiment;
mod grid;
mod main_term;

use alloc::string::String;
use alloc::vec::Vec;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dirichlet::DirichletPolynomial;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::quad::PanelRule;
use crate::special::{zeta, zeta_abs_sq_critical, ZetaEvalConfig, ZetaLine, ZetaMethod};
use crate::weights::phi;

pub use afe::{afe_check, AfeCheck, AfeConfig, AfeEvaluator, AfeSample};
pub use diagonal::{a0_contour, diagonal_term, DiagonalReport, DIAGONAL_W_TOL};
pub use experiment::{twisted_moment_experiment, Calibration, TrialRow, TwistedMomentConfig, TwistedMomentReport, BELOW_HALF, BEYOND_HALF};
pub use grid::{MomentGrid, TRule};
pub use main_term::{main_term, main_term_brute, pair_aggregate, MainTermReport, PairAggregate};

/// Composite rule on `[T, 2T]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureSpec {
    pub rule: PanelRule,
    /// `None` selects `min(0.25, 2π/(4 log(2T/2π)))`
    pub panel_width: Option<f64>,
    pub nodes_per_panel: usize,
    /// every `refine_stride`-th panel is re-integrated at half width
    pub refine_stride: usize,
    /// refinement estimate allowed relative to the value
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self { rule: PanelRule::GaussLegendrePanels, panel_width: None, nodes_per_panel: 8, refine_stride: 20, rel_tol: 1e-6 }
    }
}

impl QuadratureSpec {
    /// Largest width that resolves the zero spacing of ζ up to height `2T`.
    pub fn max_width(t: f64) -> f64 {
        2.0 * core::f64::consts::PI / (4.0 * libm::log(2.0 * t / (2.0 * core::f64::consts::PI)))
    }

    pub fn width(&self, t: f64) -> f64 {
        self.panel_width.unwrap_or_else(|| Self::max_width(t).min(0.25))
    }

    pub fn validate(&self, t: f64) -> Result<()> {
        if self.nodes_per_panel < 4 {
            return Err(Error::InvalidArgument("nodes_per_panel must be at least 4"));
        }
        if self.refine_stride == 0 {
            return Err(Error::InvalidArgument("refine_stride must be positive"));
        }
        let w = self.width(t);
        if !(w > 0.0) || w > Self::max_width(t) * (1.0 + 1e-12) {
            return Err(Error::InvalidArgument("panel_width does not resolve the oscillation of zeta at this height"));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidArgument("rel_tol must be positive"));
        }
        Ok(())
    }
}

/// Echo of the inputs of a moment computation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    #[serde(rename = "T")]
    pub t: f64,
    pub sigma: f64,
    pub label: String,
    pub quadrature: QuadratureSpec,
    pub zeta: ZetaEvalConfig,
}

/// Value of an integral with its refinement error estimate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: u64,
    /// seconds; left at 0 by the core and filled in by hosts that keep time
    pub wall_time: f64,
    pub config: ReportConfig,
}

/// ζ configuration used for moment grids: Riemann–Siegel on the critical
/// line, Euler–Maclaurin elsewhere.
pub fn default_zeta_for(sigma: f64) -> ZetaEvalConfig {
    if sigma == 0.5 {
        ZetaEvalConfig::riemann_siegel()
    } else {
        ZetaEvalConfig { em_cutoff_multiplier: 0.5, ..ZetaEvalConfig::default() }
    }
}

/// `|ζ(1/2+it)|² φ(t/T)` tabulated on a quadrature grid, shared by every
/// polynomial integrated at the same `T`.
#[derive(Debug, Clone)]
pub struct ZetaGrid {
    grid: MomentGrid,
    base: Vec<f64>,
    base_refined: Vec<f64>,
    t: f64,
    quad: QuadratureSpec,
    zeta: ZetaEvalConfig,
}

impl ZetaGrid {
    pub fn new<E: Executor>(exec: &E, t: f64, quad: &QuadratureSpec, zcfg: &ZetaEvalConfig) -> Result<Self> {
        if !(t >= 100.0) {
            return Err(Error::InvalidArgument("moment integrals need T >= 100"));
        }
        quad.validate(t)?;
        let grid = MomentGrid::new(t, 2.0 * t, quad.width(t), quad)?;
        let f = |x: f64| zeta_abs_sq_critical(x, zcfg).map(|z| z * phi(x / t));
        let base = collect(exec.map_indexed(grid.nodes().len(), |i| f(grid.nodes()[i])))?;
        let base_refined = collect(exec.map_indexed(grid.refined_nodes().len(), |i| f(grid.refined_nodes()[i])))?;
        Ok(Self { grid, base, base_refined, t, quad: *quad, zeta: *zcfg })
    }

    pub fn height(&self) -> f64 {
        self.t
    }

    pub fn grid(&self) -> &MomentGrid {
        &self.grid
    }

    /// `∫ |ζ|² |A|² φ(t/T) dt` on this grid.
    pub fn twisted<E: Executor>(&self, exec: &E, poly: &DirichletPolynomial) -> Result<MomentReport> {
        let slice = poly.at_sigma(0.5);
        let nodes = self.grid.nodes();
        let refined = self.grid.refined_nodes();
        let vals = exec.map_indexed(nodes.len(), |i| self.base[i] * slice.eval(nodes[i]).norm_sqr());
        let vals_ref = exec.map_indexed(refined.len(), |i| self.base_refined[i] * slice.eval(refined[i]).norm_sqr());
        let (value, err) = self.grid.integrate(&vals, &vals_ref);
        if err > self.quad.rel_tol * value.abs() {
            return Err(Error::QuadratureNotConverged("twisted moment refinement estimate above tolerance"));
        }
        Ok(MomentReport {
            value,
            abs_error_estimate: err,
            evaluations: (nodes.len() + refined.len()) as u64,
            wall_time: 0.0,
            config: ReportConfig { t: self.t, sigma: 0.5, label: poly.label().into(), quadrature: self.quad, zeta: self.zeta },
        })
    }
}

/// Panels per parallel task when sweeping a [`ZetaLine`].
const LINE_CHUNK: usize = 64;

fn line_values<E: Executor>(exec: &E, line: &ZetaLine, a: f64, step: f64, count: usize, f: impl Fn(Complex64) -> f64 + Sync + Send) -> Vec<f64> {
    let chunks = count.div_ceil(LINE_CHUNK);
    let parts = exec.map_indexed(chunks, |c| {
        let first = c * LINE_CHUNK;
        let n = LINE_CHUNK.min(count - first);
        line.panels(a + step * first as f64, step, n).into_iter().map(&f).collect::<Vec<f64>>()
    });
    parts.concat()
}

fn collect<T>(v: Vec<Result<T>>) -> Result<Vec<T>> {
    v.into_iter().collect()
}

/// `I = ∫ |ζ(1/2+it)|² |A(1/2+it)|² φ(t/T) dt`.
pub fn direct_twisted_moment<E: Executor>(
    exec: &E,
    poly: &DirichletPolynomial,
    t: f64,
    quad: &QuadratureSpec,
    zcfg: &ZetaEvalConfig,
) -> Result<MomentReport> {
    ZetaGrid::new(exec, t, quad, zcfg)?.twisted(exec, poly)
}

/// `M₃(σ, T) = ∫_T^{2T} |ζ(σ+it)|³ dt`.
pub fn third_moment<E: Executor>(exec: &E, sigma: f64, t: f64, quad: &QuadratureSpec, zcfg: &ZetaEvalConfig) -> Result<MomentReport> {
    if !(0.5..=1.0).contains(&sigma) {
        return Err(Error::InvalidArgument("third_moment needs 1/2 <= sigma <= 1"));
    }
    if !(t >= 100.0) {
        return Err(Error::InvalidArgument("moment integrals need T >= 100"));
    }
    if zcfg.method == ZetaMethod::RiemannSiegel && sigma != 0.5 {
        return Err(Error::MethodDomain { re: sigma, im: t });
    }
    quad.validate(t)?;
    let grid = MomentGrid::new(t, 2.0 * t, quad.width(t), quad)?;
    let cube = |z: Complex64| {
        let a = z.norm();
        a * a * a
    };
    let (vals, vals_ref) = match zcfg.method {
        ZetaMethod::RiemannSiegel => {
            let f = |x: f64| zeta(Complex64::new(sigma, x), zcfg).map(cube);
            let vals = collect(exec.map_indexed(grid.nodes().len(), |i| f(grid.nodes()[i])))?;
            let vals_ref = collect(exec.map_indexed(grid.refined_nodes().len(), |i| f(grid.refined_nodes()[i])))?;
            (vals, vals_ref)
        }
        ZetaMethod::EulerMaclaurin => {
            let line = ZetaLine::new(sigma, grid.offsets(), 2.0 * t, zcfg)?;
            let vals = line_values(exec, &line, grid.start(), grid.panel_width(), grid.panels(), cube);
            let fine = ZetaLine::new(sigma, grid.refined_offsets(), 2.0 * t, zcfg)?;
            let step = grid.panel_width() * grid.stride() as f64;
            let vals_ref = line_values(exec, &fine, grid.start(), step, grid.sampled_panels(), cube);
            (vals, vals_ref)
        }
    };
    let (value, err) = grid.integrate(&vals, &vals_ref);
    if err > quad.rel_tol * value.abs() {
        return Err(Error::QuadratureNotConverged("third moment refinement estimate above tolerance"));
    }
    Ok(MomentReport {
        value,
        abs_error_estimate: err,
        evaluations: (vals.len() + vals_ref.len()) as u64,
        wall_time: 0.0,
        config: ReportConfig { t, sigma, label: "third_moment".into(), quadrature: *quad, zeta: *zcfg },
    })
}
