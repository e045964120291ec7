//! `∫_0^∞ cos(y) y^{s-1} dy = Γ(s) cos(πs/2)` for `0 < Re s < 1`, computed
//! through the damped integrals `∫ cos(y) y^{s-1} e^{-εy} dy` and
//! extrapolation in `ε → 0`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::quad::{composite_complex, GaussLegendre};
use crate::special::gamma;

/// `Γ(s) cos(πs/2)`.
pub fn cos_mellin_closed_form(s: Complex64) -> Result<Complex64> {
    Ok(gamma(s)? * (s * (PI / 2.0)).cos())
}

/// `∫_0^∞ cos(y) y^{s-1} e^{-εy} dy` by quadrature.
pub fn cos_mellin_regularized(s: Complex64, eps: f64) -> Result<Complex64> {
    if !(s.re > 0.0 && s.re < 1.0) {
        return Err(Error::InvalidArgument("needs 0 < Re s < 1"));
    }
    if !(eps > 0.0) {
        return Err(Error::InvalidArgument("needs eps > 0"));
    }
    let gl = GaussLegendre::new(16);
    // [0, 1] with y = e^u; the integrand is O(e^{u Re s})
    let depth = 30.0 / s.re;
    let near = composite_complex(&gl, -depth, 0.0, 0.5, |u| {
        let y = libm::exp(u);
        (s * u).exp() * (libm::cos(y) * libm::exp(-eps * y))
    });
    let far = composite_complex(&gl, 1.0, 1.0 + 32.0 / eps, PI, |y| (s - 1.0).scale(libm::log(y)).exp() * (libm::cos(y) * libm::exp(-eps * y)));
    Ok(near + far)
}

/// Outcome of the extrapolated oscillatory integral.
#[derive(Debug, Clone, PartialEq)]
pub struct OscillatoryCheck {
    pub value: Complex64,
    pub closed_form: Complex64,
    pub deviation: f64,
    /// `(ε, damped integral)` pairs used by the extrapolation
    pub samples: Vec<(f64, Complex64)>,
}

/// Neville extrapolation to `ε = 0` of the damped integrals at
/// `ε = eps0, eps0/2, …` (`levels` values).
pub fn cos_mellin_extrapolated(s: Complex64, eps0: f64, levels: usize) -> Result<OscillatoryCheck> {
    if levels < 2 {
        return Err(Error::InvalidArgument("extrapolation needs at least two levels"));
    }
    let mut samples = Vec::with_capacity(levels);
    let mut eps = eps0;
    for _ in 0..levels {
        samples.push((eps, cos_mellin_regularized(s, eps)?));
        eps *= 0.5;
    }
    let mut p: Vec<Complex64> = samples.iter().map(|&(_, v)| v).collect();
    for m in 1..levels {
        for i in 0..levels - m {
            let (xi, xj) = (samples[i].0, samples[i + m].0);
            p[i] = (p[i + 1] * xi - p[i] * xj) / (xi - xj);
        }
    }
    let value = p[0];
    let closed_form = cos_mellin_closed_form(s)?;
    Ok(OscillatoryCheck { value, closed_form, deviation: (value - closed_form).norm(), samples })
}
