use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dirichlet::DirichletPolynomial;
use crate::error::{Error, Result};
use crate::quad::{pairwise_sum, GaussLegendre};
use crate::special::{zeta, ZetaEvalConfig};
use crate::weights::{mellin_g, w_closed_form, w_log_cutoff};

use super::grid::TRule;
use super::main_term::{main_term, pair_aggregate, PairAggregate};

/// `W` values below this are dropped from the `ℓ`-sum.
pub const DIAGONAL_W_TOL: f64 = 1e-13;

/// Abscissa and half-height of the shifted contour in the `A₀` integral.
const A0_ABSCISSA: f64 = -0.25;
const A0_HEIGHT: f64 = 12.0;
const A0_PANEL: f64 = 0.5;
const A0_NODES: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalReport {
    #[serde(rename = "T")]
    pub t: f64,
    pub diagonal: f64,
    pub main_term: f64,
    pub a0: f64,
    /// `diagonal - main_term`
    pub gap: f64,
    /// `diagonal + a0 - main_term`
    pub closure: f64,
    pub imag: f64,
    pub max_ell: u64,
}

fn check_height(t: f64) -> Result<()> {
    if !(t >= 100.0) {
        return Err(Error::InvalidArgument("diagonal term needs T >= 100"));
    }
    Ok(())
}

fn diagonal_from(agg: &PairAggregate, rule: &TRule) -> (Complex64, u64) {
    let x_cut = libm::exp(w_log_cutoff(DIAGONAL_W_TOL));
    let mut max_ell = 0u64;
    let mut terms = Vec::with_capacity(agg.entries.len());
    for &(q, c) in &agg.entries {
        let qf = q as f64;
        let dq = rule.integrate(|t| {
            let ell_max = libm::floor(libm::sqrt(t * x_cut / (2.0 * PI * qf))) as u64;
            max_ell = max_ell.max(ell_max);
            let s: Vec<f64> = (1..=ell_max)
                .map(|l| {
                    let lf = l as f64;
                    w_closed_form(2.0 * PI * lf * lf * qf / t) / lf
                })
                .collect();
            2.0 * pairwise_sum(&s)
        });
        terms.push(c * dq);
    }
    (pairwise_sum(&terms), max_ell)
}

/// `D = 2 Σ_{n₁,n₂,ℓ} a_{n₁}ā_{n₂}(n₁,n₂)/(ℓ n₁n₂) ∫ W(2πℓ²n₁*n₂*/t) φ(t/T) dt`.
pub fn diagonal_term(poly: &DirichletPolynomial, t: f64) -> Result<DiagonalReport> {
    check_height(t)?;
    let agg = pair_aggregate(poly);
    let rule = TRule::new(t);
    let (d, max_ell) = diagonal_from(&agg, &rule);
    let a0 = a0_from(&agg, &rule)?;
    let m = main_term(poly, t)?;
    Ok(DiagonalReport {
        t,
        diagonal: d.re,
        main_term: m.value,
        a0: a0.re,
        gap: d.re - m.value,
        closure: d.re + a0.re - m.value,
        imag: d.im.abs().max(a0.im.abs()),
        max_ell,
    })
}

fn a0_from(agg: &PairAggregate, rule: &TRule) -> Result<Complex64> {
    let gl = GaussLegendre::new(A0_NODES);
    let zcfg = ZetaEvalConfig::default();
    let panels = libm::ceil(2.0 * A0_HEIGHT / A0_PANEL) as usize;
    let h = 2.0 * A0_HEIGHT / panels as f64;
    let mut terms = Vec::with_capacity(panels * A0_NODES);
    for p in 0..panels {
        let lo = -A0_HEIGHT + h * p as f64;
        for (y, wy) in gl.mapped(lo, lo + h) {
            let w = Complex64::new(A0_ABSCISSA, y);
            let z = zeta(Complex64::new(1.0, 0.0) + w * 2.0, &zcfg)?;
            let mellin_phi: Vec<Complex64> = rule.nodes.iter().zip(&rule.weights).map(|(&t, &wt)| Complex64::new(t, 0.0).powc(w) * wt).collect();
            let phi_w = pairwise_sum(&mellin_phi);
            let dirichlet: Vec<Complex64> = agg.entries.iter().map(|&(q, c)| c * Complex64::new(2.0 * PI * q as f64, 0.0).powc(-w)).collect();
            terms.push(z * mellin_g(w) / w * phi_w * pairwise_sum(&dirichlet) * wy);
        }
    }
    Ok(-pairwise_sum(&terms) / PI)
}

/// `A₀ = -(1/π) ∫ ζ(1+2w) G(w)/w Σ_q c_q (2πq)^{-w} ∫ φ(t/T) t^w dt dy`
/// along `Re w = -1/4`, so that `D + A₀` equals the main term.
pub fn a0_contour(poly: &DirichletPolynomial, t: f64) -> Result<f64> {
    check_height(t)?;
    a0_from(&pair_aggregate(poly), &TRule::new(t)).map(|v| v.re)
}
