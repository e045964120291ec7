use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{composite_complex, pairwise_sum, GaussLegendre};
use crate::special::{zeta, ZetaEvalConfig};

/// Compactly supported smoothing pair. `F` is the density of
/// `θ - δ + (1-θ)(U_1 + … + U_N)` with `U_i` uniform on `[0, 1]`, so
/// `F̂(z) = e^{2πi(θ-δ)z} ((e^{2πi(1-θ)z} - 1)/(2πi(1-θ)z))^N` and
/// `G(x) = 1 - ∫_0^x F` falls from 1 to 0 across
/// `[θ - δ, θ - δ + (1-θ)N]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmoothingPairSix {
    pub theta: f64,
    pub delta: f64,
    #[serde(rename = "N")]
    pub n: u32,
}

impl Default for SmoothingPairSix {
    fn default() -> Self {
        Self { theta: 0.9, delta: 0.05, n: 11 }
    }
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut b = 1.0;
    for i in 0..k {
        b = b * (n - i) as f64 / (i + 1) as f64;
    }
    b
}

fn factorial(n: u32) -> f64 {
    (1..=n).map(|i| i as f64).product()
}

// Irwin–Hall distribution function of n uniforms
fn irwin_hall_cdf(x: f64, n: u32) -> f64 {
    let nf = n as f64;
    if x <= 0.0 {
        return 0.0;
    }
    if x >= nf {
        return 1.0;
    }
    if x > 0.5 * nf {
        return 1.0 - irwin_hall_cdf(nf - x, n);
    }
    let top = libm::floor(x) as u32;
    let terms: Vec<f64> = (0..=top)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(n, k) * libm::pow(x - k as f64, nf)
        })
        .collect();
    pairwise_sum(&terms) / factorial(n)
}

fn irwin_hall_pdf(x: f64, n: u32) -> f64 {
    let nf = n as f64;
    if x <= 0.0 || x >= nf {
        return 0.0;
    }
    let x = if x > 0.5 * nf { nf - x } else { x };
    let top = libm::floor(x) as u32;
    let terms: Vec<f64> = (0..=top)
        .map(|k| {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sign * binomial(n, k) * libm::pow(x - k as f64, nf - 1.0)
        })
        .collect();
    pairwise_sum(&terms) / factorial(n - 1)
}

// (e^a - 1)/a
fn exp_ratio(a: Complex64) -> Complex64 {
    if a.norm() < 1e-2 {
        let mut term = Complex64::new(1.0, 0.0);
        let mut sum = term;
        for k in 2..=7 {
            term = term * a / k as f64;
            sum += term;
        }
        sum
    } else {
        (a.exp() - 1.0) / a
    }
}

impl SmoothingPairSix {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return Err(Error::InvalidArgument("six.theta must lie in (0, 1)"));
        }
        if !(self.delta > 0.0 && self.delta < self.theta) {
            return Err(Error::InvalidArgument("six.delta must lie in (0, theta)"));
        }
        if self.n <= 10 {
            return Err(Error::InvalidArgument("six.N must exceed 10"));
        }
        if self.n > 60 {
            return Err(Error::InvalidArgument("six.N above 60 is not supported"));
        }
        Ok(())
    }

    /// Left end of the transition, `θ - δ`.
    pub fn support_start(&self) -> f64 {
        self.theta - self.delta
    }

    /// Right end of the transition, `θ - δ + (1-θ)N`.
    pub fn support_end(&self) -> f64 {
        self.support_start() + (1.0 - self.theta) * self.n as f64
    }

    /// `F̂(z)`.
    pub fn fhat(&self, z: Complex64) -> Complex64 {
        let i2pi = Complex64::new(0.0, 2.0 * PI);
        let shift = (i2pi * z * self.support_start()).exp();
        let kernel = exp_ratio(i2pi * z * (1.0 - self.theta));
        shift * kernel.powu(self.n)
    }

    /// `F(u)`, a probability density on `[θ - δ, θ - δ + (1-θ)N]`.
    pub fn density(&self, u: f64) -> f64 {
        let scale = 1.0 - self.theta;
        irwin_hall_pdf((u - self.support_start()) / scale, self.n) / scale
    }

    /// `G(x) = 1 - ∫_0^x F(u) du`.
    pub fn g(&self, x: f64) -> f64 {
        1.0 - irwin_hall_cdf((x - self.support_start()) / (1.0 - self.theta), self.n)
    }
}

/// Quadrature settings for [`mellin_smoothing_identity_check`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothingIdentityConfig {
    /// abscissa `c` of the line `Re w = c`
    pub abscissa: f64,
    /// tolerated bound on the discarded tails
    pub tail_tolerance: f64,
    pub min_height: f64,
    pub max_height: f64,
    pub panel_width: f64,
    pub nodes: usize,
}

impl Default for SmoothingIdentityConfig {
    fn default() -> Self {
        Self { abscissa: 1.0, tail_tolerance: 1e-9, min_height: 60.0, max_height: 4000.0, panel_width: 0.25, nodes: 8 }
    }
}

/// Both sides of `Σ_n G(log n / log x) n^{-s} = (1/2πi) ∫_{(c)} ζ(s+w) F̂(-iw log x / 2π) dw/w`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck {
    pub lhs: Complex64,
    pub rhs: Complex64,
    pub deviation: f64,
    pub terms: usize,
    pub height: f64,
    pub tail_bound: f64,
}

/// Evaluates both sides of the truncation identity for the smoothing pair.
pub fn mellin_smoothing_identity_check(s: Complex64, x: f64, pair: &SmoothingPairSix, cfg: &SmoothingIdentityConfig) -> Result<IdentityCheck> {
    pair.validate()?;
    let c = cfg.abscissa;
    if !(x > 1.0) {
        return Err(Error::InvalidArgument("identity check needs x > 1"));
    }
    if !(c > 0.0 && c > 1.0 - s.re) {
        return Err(Error::InvalidArgument("abscissa must exceed max(1 - Re s, 0)"));
    }
    let lx = libm::log(x);
    let n_max = libm::floor(libm::exp(pair.support_end() * lx)) as u64;
    if n_max > 50_000_000 {
        return Err(Error::TooLarge { count: n_max as u128, limit: 50_000_000 });
    }
    let lhs_terms: Vec<Complex64> = (1..=n_max)
        .map(|n| {
            let ln = libm::log(n as f64);
            let w = pair.g(ln / lx);
            (-s * ln).exp() * w
        })
        .collect();
    let lhs = pairwise_sum(&lhs_terms);

    // |F̂| on the line decays like (B/|y|)^N
    let zcfg = ZetaEvalConfig::default();
    let a = 1.0 - pair.theta;
    let nf = pair.n as f64;
    let b = (1.0 + libm::exp(a * c * lx)) / (a * lx);
    let zeta_max = zeta(Complex64::new(s.re + c, 0.0), &zcfg)?.re;
    let prefactor = zeta_max * libm::exp(c * pair.support_start() * lx) / (PI * nf);
    let tail_at = |y: f64| prefactor * libm::pow(b / y, nf);
    let mut height = cfg.min_height.max(2.0 * b);
    while tail_at(height) > cfg.tail_tolerance {
        height *= 1.25;
        if height > cfg.max_height {
            return Err(Error::QuadratureNotConverged("smoothing identity needs a contour above max_height"));
        }
    }
    let gl = GaussLegendre::new(cfg.nodes);
    let mut failure = None;
    let integral = composite_complex(&gl, -height, height, cfg.panel_width, |y| {
        let w = Complex64::new(c, y);
        let z = match zeta(s + w, &zcfg) {
            Ok(z) => z,
            Err(e) => {
                failure = Some(e);
                return Complex64::new(0.0, 0.0);
            }
        };
        let arg = Complex64::new(0.0, -1.0) * w * (lx / (2.0 * PI));
        z * pair.fhat(arg) / w
    });
    if let Some(e) = failure {
        return Err(e);
    }
    let rhs = integral / (2.0 * PI);
    Ok(IdentityCheck { lhs, rhs, deviation: (lhs - rhs).norm(), terms: n_max as usize, height, tail_bound: tail_at(height) })
}
