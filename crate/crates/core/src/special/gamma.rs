use core::f64::consts::PI;

use num_complex::Complex64;

use super::bernoulli::BERNOULLI_EVEN;
use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;
const STIRLING_MIN_MODULUS: f64 = 16.0;
const STIRLING_TERMS: usize = 12;

/// Principal branch of `log Γ(s)`: continuous off the non-positive real
/// axis and real for `s > 0`.
pub fn log_gamma(s: Complex64) -> Result<Complex64> {
    if s.im == 0.0 && s.re <= 0.0 && s.re == libm::round(s.re) {
        return Err(Error::PoleAtNonPositiveInteger(s.re as i64));
    }
    // log Γ(s) = log Γ(s + n) - Σ_{k<n} log(s + k)
    let mut z = s;
    let mut shift = Complex64::new(0.0, 0.0);
    while z.re < 0.5 || z.norm() < STIRLING_MIN_MODULUS {
        shift += z.ln();
        z += 1.0;
    }
    Ok(stirling(z) - shift)
}

fn stirling(z: Complex64) -> Complex64 {
    let inv = z.inv();
    let inv2 = inv * inv;
    let mut corr = Complex64::new(0.0, 0.0);
    let mut pow = inv;
    for k in 1..=STIRLING_TERMS {
        let b = BERNOULLI_EVEN[k - 1];
        corr += pow * (b / ((2 * k) as f64 * (2 * k - 1) as f64));
        pow *= inv2;
    }
    (z - 0.5) * z.ln() - z + LN_SQRT_2PI + corr
}

/// `Γ(s)` via [`log_gamma`].
pub fn gamma(s: Complex64) -> Result<Complex64> {
    log_gamma(s).map(|l| l.exp())
}

/// Functional-equation factor `χ(s) = 2^s π^{s-1} sin(πs/2) Γ(1-s)`, so
/// that `ζ(s) = χ(s) ζ(1-s)`.
pub fn chi(s: Complex64) -> Result<Complex64> {
    let one_minus = Complex64::new(1.0, 0.0) - s;
    let lg = log_gamma(one_minus)?;
    let log_mag = s * core::f64::consts::LN_2 + (s - 1.0) * libm::log(PI) + lg;
    Ok((log_mag + log_sin(s * (PI / 2.0))).exp())
}

// log sin z without overflow for large |Im z| (branch irrelevant after exp)
fn log_sin(z: Complex64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    if z.im.abs() < 20.0 {
        return z.sin().ln();
    }
    // sin z = e^{∓iz} (e^{±2iz} - 1) / (±2i), picking the decaying exponential
    let sg = if z.im > 0.0 { 1.0 } else { -1.0 };
    let small = (i * z * (2.0 * sg)).exp();
    -i * z * sg + ((small - 1.0) / (i * (2.0 * sg))).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn real_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-14);
        assert!((log_gamma(c(0.5, 0.0)).unwrap().re - 0.572_364_942_924_700_1).abs() < 1e-13);
        assert!((log_gamma(c(5.0, 0.0)).unwrap().re - libm::log(24.0)).abs() < 1e-13);
        let mut ln_fact = 0.0;
        for n in 1..100 {
            ln_fact += libm::log(n as f64);
            let lg = log_gamma(c(n as f64 + 1.0, 0.0)).unwrap();
            assert!((lg.re - ln_fact).abs() < 1e-12 * ln_fact.max(1.0), "n={n}");
            assert_eq!(lg.im, 0.0);
        }
    }

    #[test]
    fn poles_are_rejected() {
        assert_eq!(log_gamma(c(0.0, 0.0)), Err(Error::PoleAtNonPositiveInteger(0)));
        assert_eq!(log_gamma(c(-3.0, 0.0)), Err(Error::PoleAtNonPositiveInteger(-3)));
        assert!(log_gamma(c(-3.0, 1e-9)).is_ok());
    }

    #[test]
    fn recurrence_and_reflection() {
        for &(re, im) in &[(0.3, 2.0), (-2.7, 0.4), (0.5, 40.0), (3.0, -70.0), (-10.5, 5.0)] {
            let s = c(re, im);
            let a = log_gamma(s + 1.0).unwrap();
            let b = log_gamma(s).unwrap() + s.ln();
            // equal modulo 2πi
            let d = a - b;
            assert!(d.re.abs() < 1e-11, "{s}");
            let k = libm::round(d.im / (2.0 * PI));
            assert!((d.im - 2.0 * PI * k).abs() < 1e-10, "{s}");
            // Γ(s)Γ(1-s) = π / sin(πs)
            let prod = (log_gamma(s).unwrap() + log_gamma(c(1.0, 0.0) - s).unwrap()).exp();
            let exact = c(PI, 0.0) / (s * PI).sin();
            assert!((prod - exact).norm() < 1e-10 * exact.norm(), "{s}");
        }
    }

    #[test]
    fn continuous_along_vertical_line() {
        let mut prev = log_gamma(c(0.25, 0.0)).unwrap();
        for j in 1..=2000 {
            let cur = log_gamma(c(0.25, j as f64 * 0.05)).unwrap();
            assert!((cur - prev).norm() < 0.5);
            prev = cur;
        }
    }
}
