//! Smooth cutoffs and Mellin weights.
//!
//! * `φ`, the compactly supported bump on `[1, 2]` weighting the moment;
//! * `G(w) = e^{w²}(1 - 4w²)` and the approximate-functional-equation kernel
//!   `W(x) = (1/2πi) ∫ x^{-w} G(w) dw/w`;
//! * the dyadic partition of unity `F_M`;
//! * the compactly supported smoothing pair `(F̂, G)` used for Dirichlet
//!   series truncation, see [`SmoothingPairSix`].

mod oscillatory;
mod partition;
mod six;
mod table;

use core::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{composite_complex, GaussLegendre};
use crate::special::{zeta, ZetaEvalConfig};
use crate::EULER_GAMMA;

pub use oscillatory::{cos_mellin_closed_form, cos_mellin_extrapolated, cos_mellin_regularized, OscillatoryCheck};
pub use partition::{ramp, DyadicPartition};
pub use six::{mellin_smoothing_identity_check, IdentityCheck, SmoothingIdentityConfig, SmoothingPairSix};
pub use table::{w_log_cutoff, WTable};

/// `φ(x) = exp(4 - 1/((x-1)(2-x)))` on `(1, 2)`, zero elsewhere. Peak value 1 at `x = 3/2`.
pub fn phi(x: f64) -> f64 {
    if x <= 1.0 || x >= 2.0 {
        return 0.0;
    }
    let q = (x - 1.0) * (2.0 - x);
    libm::exp(4.0 - 1.0 / q)
}

/// `G(w) = e^{w²}(1 - 4w²)`: even, entire, `G(0) = 1`, `G(1/2) = 0`.
pub fn mellin_g(w: Complex64) -> Complex64 {
    let w2 = w * w;
    w2.exp() * (1.0 - 4.0 * w2)
}

/// Closed form of `W(x)` for the fixed `G`:
/// `W(x) = erfc(log x / 2)/2 - (log x/√π) e^{-(log x)²/4}`.
pub fn w_closed_form(x: f64) -> f64 {
    let l = libm::log(x);
    0.5 * libm::erfc(0.5 * l) - l / libm::sqrt(PI) * libm::exp(-0.25 * l * l)
}

/// A truncated vertical-line integral together with the quantities needed
/// to judge it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContourValue {
    pub value: Complex64,
    /// `∫ |integrand| |dw|` over the truncated line, the scale of any rounding loss.
    pub magnitude: f64,
    /// Bound on the discarded tails `|Im w| > height`.
    pub tail_bound: f64,
}

/// Quadrature layout for vertical-line integrals of `W`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WContour {
    pub height: f64,
    pub panel_width: f64,
    pub nodes: usize,
}

impl Default for WContour {
    fn default() -> Self {
        Self { height: 12.0, panel_width: 0.5, nodes: 16 }
    }
}

/// `W(x)` via the line `Re w = c`, adding the residue `G(0) = 1` at `w = 0`
/// when `c < 0`.
pub fn w_on_line(x: f64, c: f64, layout: &WContour) -> Result<ContourValue> {
    if !(x > 0.0) {
        return Err(Error::InvalidArgument("W needs x > 0"));
    }
    if c == 0.0 {
        return Err(Error::InvalidArgument("the contour may not pass through w = 0"));
    }
    let gl = GaussLegendre::new(layout.nodes);
    let lx = libm::log(x);
    let mut magnitude = 0.0;
    let integral = composite_complex(&gl, -layout.height, layout.height, layout.panel_width, |y| {
        let w = Complex64::new(c, y);
        let v = (-w * lx).exp() * mellin_g(w) / w;
        magnitude += v.norm();
        v
    });
    // dw = i dy, so (1/2πi) ∫ f dw = (1/2π) ∫ f dy
    let mut value = integral / (2.0 * PI);
    if c < 0.0 {
        value += 1.0;
    }
    let y = layout.height;
    let a = 1.0 + 4.0 * c * c;
    let tail_bound = 2.0 * libm::exp(-c * lx + c * c - y * y) * (a / (2.0 * y * y) + 2.0) / (2.0 * PI);
    Ok(ContourValue { value, magnitude: magnitude / (2.0 * PI), tail_bound })
}

/// `W(x)` by contour integration: `Re w = 2` for `x > 1`, `Re w = -1/4` plus
/// the residue at `w = 0` for `x <= 1`. Beyond `x = e^4` the line moves to the
/// saddle point `Re w = log x / 2` so that tiny values are resolved.
pub fn w_eval(x: f64) -> Result<f64> {
    let c = if x > 1.0 { libm::fmax(2.0, 0.5 * libm::log(x)) } else { -0.25 };
    let cv = w_on_line(x, c, &WContour::default())?;
    if cv.tail_bound > 1e-12 * cv.value.norm().max(1e-300) && cv.tail_bound > 1e-15 {
        return Err(Error::QuadratureNotConverged("W contour tail above tolerance"));
    }
    Ok(cv.value.re)
}

/// Checks of `Res_{w=0} x^w ζ(1+2w) G(w)/w` on one circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidueValue {
    pub value: Complex64,
    /// `(1/2) log x + γ`
    pub closed_form: f64,
    /// change between `points` and `2·points` trapezoid nodes
    pub refinement: f64,
}

fn residue_on_circle(x: f64, radius: f64, points: usize, cfg: &ZetaEvalConfig) -> Result<Complex64> {
    let lx = libm::log(x);
    let mut acc = alloc::vec::Vec::with_capacity(points);
    for j in 0..points {
        let ang = 2.0 * PI * (j as f64 + 0.5) / points as f64;
        let w = Complex64::from_polar(radius, ang);
        let z = zeta(Complex64::new(1.0, 0.0) + w * 2.0, cfg)?;
        // (1/2πi) ∮ f dw with dw = i w dφ
        acc.push((w * lx).exp() * z * mellin_g(w));
    }
    Ok(crate::quad::pairwise_sum(&acc) / points as f64)
}

/// Residue at `w = 0` of `x^w ζ(1+2w) G(w)/w`, by the trapezoid rule on the
/// circle `|w| = radius`.
pub fn residue_main_term(x: f64, radius: f64) -> Result<ResidueValue> {
    if !(x > 1.0) {
        return Err(Error::InvalidArgument("residue_main_term needs x > 1"));
    }
    if !(radius > 0.0 && radius < 0.5) {
        return Err(Error::InvalidArgument("circle radius must lie in (0, 1/2)"));
    }
    let cfg = ZetaEvalConfig { target_abs_error: 1e-13, ..ZetaEvalConfig::default() };
    let coarse = residue_on_circle(x, radius, 48, &cfg)?;
    let fine = residue_on_circle(x, radius, 96, &cfg)?;
    let refinement = (fine - coarse).norm();
    if refinement > 1e-10 * (1.0 + fine.norm()) {
        return Err(Error::QuadratureNotConverged("residue trapezoid rule"));
    }
    Ok(ResidueValue { value: fine, closed_form: 0.5 * libm::log(x) + EULER_GAMMA, refinement })
}

/// Serializable description of the weights used by a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeightDescriptor {
    pub phi: KindSpec,
    #[serde(rename = "G")]
    pub g: KindSpec,
    pub partition: PartitionSpec,
    pub six: SmoothingPairSix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KindSpec {
    pub kind: alloc::string::String,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionSpec {
    pub x_min: f64,
    pub x_max: f64,
}

pub const PHI_KIND: &str = "exp_bump";
pub const G_KIND: &str = "gaussian_quadratic";

impl Default for WeightDescriptor {
    fn default() -> Self {
        Self {
            phi: KindSpec { kind: PHI_KIND.into() },
            g: KindSpec { kind: G_KIND.into() },
            partition: PartitionSpec { x_min: 1.0, x_max: 1e4 },
            six: SmoothingPairSix::default(),
        }
    }
}

impl WeightDescriptor {
    /// Rejects kinds other than the implemented ones and invalid parameters.
    pub fn validate(&self) -> Result<()> {
        if self.phi.kind != PHI_KIND {
            return Err(Error::InvalidArgument("unsupported phi.kind"));
        }
        if self.g.kind != G_KIND {
            return Err(Error::InvalidArgument("unsupported G.kind"));
        }
        DyadicPartition::new(self.partition.x_min, self.partition.x_max)?;
        self.six.validate()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn phi_shape() {
        assert_eq!(phi(0.5), 0.0);
        assert_eq!(phi(1.0), 0.0);
        assert_eq!(phi(2.0), 0.0);
        assert!((phi(1.5) - 1.0).abs() < 1e-15);
        let a = phi(1.25);
        assert!(a > 0.0 && a < 1.0);
        assert!((a - phi(1.75)).abs() < 1e-15);
    }

    #[test]
    fn g_requirements() {
        assert_eq!(mellin_g(Complex64::new(0.0, 0.0)), Complex64::new(1.0, 0.0));
        assert!(mellin_g(Complex64::new(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn w_examples() {
        assert!((w_eval(1e-6).unwrap() - 1.0).abs() < 1e-6);
        let layout = WContour::default();
        let a = w_on_line(1.0, 2.0, &layout).unwrap().value;
        let b = w_on_line(1.0, 3.0, &layout).unwrap().value;
        assert!((a - b).norm() < 1e-9);
        assert!((a.re - 0.5).abs() < 1e-12);
        assert!(a.im.abs() < 1e-10);
    }

    #[test]
    fn contour_matches_closed_form() {
        for &x in &[1e-4, 0.01, 0.3, 1.0, 1.7, 10.0, 50.0, 100.0, 1e4] {
            let c = w_eval(x).unwrap();
            assert!((c - w_closed_form(x)).abs() < 1e-12, "x={x}: {c} vs {}", w_closed_form(x));
        }
    }

    #[test]
    fn residue_closed_form() {
        let e2 = libm::exp(2.0);
        let r = residue_main_term(e2, 0.1).unwrap();
        assert!((r.value.re - 1.577_215_664_9).abs() < 1e-9);
        for x in [2.0, 10.0, 100.0] {
            let a = residue_main_term(x, 0.05).unwrap();
            let b = residue_main_term(x, 0.1).unwrap();
            assert!((a.value - b.value).norm() < 1e-8);
            assert!((a.value.re - a.closed_form).abs() < 1e-9);
            assert!(a.value.im.abs() < 1e-10);
        }
    }

    #[test]
    fn descriptor_round_trip() {
        let d = WeightDescriptor::default();
        d.validate().unwrap();
        let bad = WeightDescriptor { g: KindSpec { kind: "other".into() }, ..d.clone() };
        assert!(bad.validate().is_err());
    }
}
