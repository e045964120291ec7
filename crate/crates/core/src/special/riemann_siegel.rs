//! Riemann–Siegel evaluation of the Hardy Z-function.
//!
//! The remainder uses the corrections `C_0..C_4`, each a fixed linear
//! combination of derivatives of `Ψ(p) = cos(2π(p² - p - 1/16)) / cos(2πp)`.
//! Derivatives come from Cauchy integrals on a circle around `p`; the five
//! corrections are then tabulated once as Chebyshev expansions on `[0, 1]`.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};

use num_complex::Complex64;
use once_cell::race::OnceBox;

/// Number of remainder corrections available.
pub const RS_CORRECTIONS: usize = 5;

const CHEB_DEGREE: usize = 56;
const CAUCHY_POINTS: usize = 64;
const CAUCHY_RADIUS: f64 = 0.5;

static TABLE: OnceBox<CorrectionTable> = OnceBox::new();

struct CorrectionTable {
    cheb: [Vec<f64>; RS_CORRECTIONS],
    /// upper bound of |C_k| on [0, 1]
    bound: [f64; RS_CORRECTIONS],
}

fn psi(p: Complex64) -> Complex64 {
    let arg = (p * p - p - 1.0 / 16.0) * TAU;
    arg.cos() / (p * TAU).cos()
}

/// `Ψ^{(m)}(p)` for `m = 0..=12`.
fn psi_derivatives(p: f64) -> [f64; 13] {
    let mut samples = [Complex64::new(0.0, 0.0); CAUCHY_POINTS];
    for (j, slot) in samples.iter_mut().enumerate() {
        let theta = TAU * (j as f64 + 0.5) / CAUCHY_POINTS as f64;
        *slot = psi(Complex64::new(p, 0.0) + Complex64::from_polar(CAUCHY_RADIUS, theta));
    }
    let mut out = [0.0; 13];
    let mut fact = 1.0;
    for (m, slot) in out.iter_mut().enumerate() {
        if m > 0 {
            fact *= m as f64;
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for (j, v) in samples.iter().enumerate() {
            let theta = TAU * (j as f64 + 0.5) / CAUCHY_POINTS as f64;
            acc += v * Complex64::from_polar(1.0, -(m as f64) * theta);
        }
        *slot = acc.re * fact / (CAUCHY_POINTS as f64 * libm::pow(CAUCHY_RADIUS, m as f64));
    }
    out
}

/// Direct (untabulated) evaluation of `C_0..C_4` at `p`.
pub(crate) fn corrections_direct(p: f64) -> [f64; RS_CORRECTIONS] {
    let d = psi_derivatives(p);
    let pi2 = PI * PI;
    let pi4 = pi2 * pi2;
    let pi6 = pi4 * pi2;
    let pi8 = pi4 * pi4;
    [
        d[0],
        -d[3] / (96.0 * pi2),
        d[6] / (18432.0 * pi4) + d[2] / (64.0 * pi2),
        -d[9] / (5308416.0 * pi6) - d[5] / (3840.0 * pi4) - d[1] / (64.0 * pi2),
        d[12] / (2038431744.0 * pi8) + 11.0 * d[8] / (5898240.0 * pi6) + 19.0 * d[4] / (24576.0 * pi4) + d[0] / (128.0 * pi2),
    ]
}

impl CorrectionTable {
    fn build() -> Self {
        let n = CHEB_DEGREE + 1;
        let values: Vec<[f64; RS_CORRECTIONS]> = (0..n)
            .map(|k| {
                let x = libm::cos(PI * (k as f64 + 0.5) / n as f64);
                corrections_direct(0.5 * (x + 1.0))
            })
            .collect();
        let cheb: [Vec<f64>; RS_CORRECTIONS] = core::array::from_fn(|c| {
            (0..n)
                .map(|j| {
                    let s: f64 = (0..n).map(|k| values[k][c] * libm::cos(PI * j as f64 * (k as f64 + 0.5) / n as f64)).sum();
                    2.0 * s / n as f64
                })
                .collect()
        });
        let bound = core::array::from_fn(|c| cheb[c].iter().map(|x| x.abs()).sum::<f64>());
        Self { cheb, bound }
    }

    fn eval(&self, c: usize, p: f64) -> f64 {
        let x = 2.0 * p - 1.0;
        let coeffs = &self.cheb[c];
        let (mut b1, mut b2) = (0.0, 0.0);
        for &a in coeffs.iter().skip(1).rev() {
            let b0 = 2.0 * x * b1 - b2 + a;
            b2 = b1;
            b1 = b0;
        }
        x * b1 - b2 + 0.5 * coeffs[0]
    }
}

const LOG_TABLE_LEN: usize = 1 << 16;
static LOGS: OnceBox<Vec<(f64, f64)>> = OnceBox::new();

// (log n, n^{-1/2}) for n < 2^16, i.e. heights up to about 2.7e10
fn log_table() -> &'static [(f64, f64)] {
    LOGS.get_or_init(|| {
        Box::new((0..LOG_TABLE_LEN).map(|k| if k == 0 { (0.0, 0.0) } else { (libm::log(k as f64), 1.0 / libm::sqrt(k as f64)) }).collect())
    })
}

fn table() -> &'static CorrectionTable {
    TABLE.get_or_init(|| Box::new(CorrectionTable::build()))
}

/// Riemann–Siegel theta function, asymptotic series (accurate for `t >= 10`).
pub fn rs_theta(t: f64) -> f64 {
    let inv = 1.0 / t;
    let inv2 = inv * inv;
    0.5 * t * libm::log(t / TAU) - 0.5 * t - PI / 8.0
        + inv * (1.0 / 48.0 + inv2 * (7.0 / 5760.0 + inv2 * (31.0 / 80640.0 + inv2 * (127.0 / 430080.0))))
}

/// `Z(t)` with as many of the five corrections as needed to bring the
/// estimated remainder below `target`. Requires `t >= 10`.
pub(crate) fn hardy_z(t: f64, target: f64) -> f64 {
    let a = libm::sqrt(t / TAU);
    let n = libm::floor(a) as usize;
    let p = a - n as f64;
    let theta = rs_theta(t);
    let mut main = 0.0;
    let logs = log_table();
    for k in 1..=n {
        let (l, r) = match logs.get(k) {
            Some(&pair) => pair,
            None => {
                let kf = k as f64;
                (libm::log(kf), 1.0 / libm::sqrt(kf))
            }
        };
        main += libm::cos(theta - t * l) * r;
    }
    main *= 2.0;
    let tab = table();
    let w = 1.0 / a;
    let mut rem = 0.0;
    let mut wk = 1.0;
    for c in 0..RS_CORRECTIONS {
        rem += tab.eval(c, p) * wk;
        wk *= w;
        let next = if c + 1 < RS_CORRECTIONS { tab.bound[c + 1] * wk } else { 0.0 };
        if next * libm::sqrt(w) < target * 1e-2 {
            break;
        }
    }
    let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
    main + sign * libm::sqrt(w) * rem
}
