use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::quad::pairwise_sum;

fn h(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        libm::exp(-1.0 / x)
    }
}

/// Smooth step: 1 on `(-∞, 1]`, 0 on `[2, ∞)`.
pub fn ramp(u: f64) -> f64 {
    if u <= 1.0 {
        return 1.0;
    }
    if u >= 2.0 {
        return 0.0;
    }
    let a = h(2.0 - u);
    a / (a + h(u - 1.0))
}

/// Dyadic partition of unity `F_M(x) = ρ(x/M) - ρ(2x/M)`, `M = 2^j`,
/// covering `[x_min, x_max]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DyadicPartition {
    x_min: f64,
    x_max: f64,
    scales: Vec<f64>,
}

impl DyadicPartition {
    pub fn new(x_min: f64, x_max: f64) -> Result<Self> {
        if !(x_min > 0.0 && x_max >= x_min && x_max.is_finite()) {
            return Err(Error::InvalidArgument("partition range must satisfy 0 < x_min <= x_max < inf"));
        }
        let lo = libm::floor(libm::log2(x_min)) as i32;
        let hi = libm::ceil(libm::log2(x_max)) as i32;
        let scales = (lo..=hi).map(|j| libm::exp2(j as f64)).collect();
        Ok(Self { x_min, x_max, scales })
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// The scales `M`, increasing.
    pub fn scales(&self) -> &[f64] {
        &self.scales
    }

    /// `F_M(x)`, supported in `[M/2, 2M]`.
    pub fn eval(m: f64, x: f64) -> f64 {
        ramp(x / m) - ramp(2.0 * x / m)
    }

    /// `Σ_M F_M(x)`.
    pub fn sum(&self, x: f64) -> f64 {
        let parts: Vec<f64> = self.scales.iter().map(|&m| Self::eval(m, x)).collect();
        pairwise_sum(&parts)
    }

    /// Scales whose piece does not vanish at `x`.
    pub fn active(&self, x: f64) -> impl Iterator<Item = f64> + '_ {
        self.scales.iter().copied().filter(move |&m| x > 0.5 * m && x < 2.0 * m)
    }
}
