use alloc::vec::Vec;
use core::f64::consts::PI;

use super::w_closed_form;

/// `W` tabulated against `L = log x` with cubic Hermite interpolation.
///
/// Below `L_MIN` the table returns 1 and above `cut` it returns 0; `cut` is
/// the point past which `|W|` stays below the requested tolerance.
#[derive(Debug, Clone)]
pub struct WTable {
    values: Vec<f64>,
    slopes: Vec<f64>,
    cut: f64,
    tol: f64,
}

const L_MIN: f64 = -16.0;
const STEPS_PER_UNIT: f64 = 1024.0;

fn w_of_log(l: f64) -> f64 {
    w_closed_form(libm::exp(l))
}

// dW/dL = e^{-L²/4}(L² - 3)/(2√π)
fn w_slope(l: f64) -> f64 {
    libm::exp(-0.25 * l * l) * (l * l - 3.0) / (2.0 * libm::sqrt(PI))
}

/// Smallest `L` beyond which `|W(e^L)| <= tol`.
pub fn w_log_cutoff(tol: f64) -> f64 {
    // |W| is eventually decreasing with leading term (L/√π) e^{-L²/4}; scan down from far out
    let mut l = 40.0;
    while l > 0.0 {
        let next = l - 1.0 / 64.0;
        if w_of_log(next).abs() > tol {
            return l;
        }
        l = next;
    }
    0.0
}

impl WTable {
    /// Table valid for all `x`, with `|W| <= tol` treated as zero.
    pub fn new(tol: f64) -> Self {
        let cut = w_log_cutoff(tol);
        let count = libm::ceil((cut - L_MIN) * STEPS_PER_UNIT) as usize + 2;
        let h = 1.0 / STEPS_PER_UNIT;
        let nodes = (0..count).map(|i| L_MIN + h * i as f64);
        let (values, slopes) = nodes.map(|l| (w_of_log(l), w_slope(l))).unzip();
        Self { values, slopes, cut, tol }
    }

    /// `log X_cut`.
    pub fn log_cut(&self) -> f64 {
        self.cut
    }

    pub fn x_cut(&self) -> f64 {
        libm::exp(self.cut)
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    /// `W(e^l)`.
    #[inline]
    pub fn at_log(&self, l: f64) -> f64 {
        if l >= self.cut {
            return 0.0;
        }
        if l <= L_MIN {
            return 1.0;
        }
        let u = (l - L_MIN) * STEPS_PER_UNIT;
        let i = u as usize;
        let s = u - i as f64;
        let h = 1.0 / STEPS_PER_UNIT;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.slopes[i] * h, self.slopes[i + 1] * h);
        let s2 = s * s;
        let s3 = s2 * s;
        (2.0 * s3 - 3.0 * s2 + 1.0) * y0 + (s3 - 2.0 * s2 + s) * d0 + (-2.0 * s3 + 3.0 * s2) * y1 + (s3 - s2) * d1
    }

    /// `W(x)`.
    pub fn at(&self, x: f64) -> f64 {
        self.at_log(libm::log(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interpolation_error() {
        let tab = WTable::new(1e-12);
        let mut worst: f64 = 0.0;
        let mut l = -15.9;
        while l < tab.log_cut() {
            worst = worst.max((tab.at_log(l) - w_of_log(l)).abs());
            l += 0.000_731;
        }
        assert!(worst < 1e-13, "{worst:e}");
        assert!(w_of_log(tab.log_cut()).abs() <= 1e-12);
        assert!(w_of_log(tab.log_cut() - 0.05).abs() > 1e-12);
    }

    #[test]
    fn slope_matches_difference() {
        for l in [-3.0, -0.5, 0.0, 1.2, 4.0] {
            let h = 1e-6;
            let fd = (w_of_log(l + h) - w_of_log(l - h)) / (2.0 * h);
            assert!((fd - w_slope(l)).abs() < 1e-8);
        }
    }
}
