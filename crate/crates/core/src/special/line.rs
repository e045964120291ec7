use alloc::vec::Vec;

use num_complex::Complex64;

use super::euler_maclaurin::em_tail;
use super::{ZetaEvalConfig, ZetaMethod};
use crate::error::{Error, Result};

/// Panels between exact re-evaluations of the running phases.
const RESYNC: usize = 32;

/// Euler–Maclaurin ζ on a horizontal line at many heights of the form
/// `a + p·step + offset_j`.
///
/// The direct sum shares the phases `n^{-i(a + p·step)}` between the offsets
/// of a panel and advances them from panel to panel by a fixed rotation, so
/// a panel of `k` nodes costs about `k + 1` complex products per term
/// instead of `k` exponentials.
#[derive(Debug, Clone)]
pub struct ZetaLine {
    sigma: f64,
    offsets: Vec<f64>,
    n_cut: usize,
    logs: Vec<f64>,
    mags: Vec<f64>,
    /// `n^{-i offset_j}`, row-major in `n`
    rot: Vec<Complex64>,
    cfg: ZetaEvalConfig,
}

impl ZetaLine {
    /// Evaluator valid up to height `t_max`; uses the Euler–Maclaurin
    /// parameters of `cfg` with the cut-off of `t_max`.
    pub fn new(sigma: f64, offsets: &[f64], t_max: f64, cfg: &ZetaEvalConfig) -> Result<Self> {
        cfg.validate()?;
        if cfg.method != ZetaMethod::EulerMaclaurin {
            return Err(Error::InvalidArgument("ZetaLine needs the euler_maclaurin method"));
        }
        if sigma <= -1.0 {
            return Err(Error::InvalidArgument("euler-maclaurin evaluation needs Re s > -1"));
        }
        let n_cut = cfg.em_cutoff(t_max).max(2);
        let logs: Vec<f64> = (0..n_cut).map(|n| if n == 0 { 0.0 } else { libm::log(n as f64) }).collect();
        let mags = logs.iter().map(|&l| libm::exp(-sigma * l)).collect();
        let mut rot = Vec::with_capacity(n_cut * offsets.len());
        for &l in &logs {
            for &o in offsets {
                rot.push(Complex64::from_polar(1.0, -o * l));
            }
        }
        Ok(Self { sigma, offsets: offsets.to_vec(), n_cut, logs, mags, rot, cfg: *cfg })
    }

    pub fn cutoff(&self) -> usize {
        self.n_cut
    }

    /// ζ at `a + p·step + offset_j` for `p < count`, panel-major.
    pub fn panels(&self, a: f64, step: f64, count: usize) -> Vec<Complex64> {
        let k = self.offsets.len();
        let mut out = Vec::with_capacity(count * k);
        let mut base = alloc::vec![Complex64::new(0.0, 0.0); self.n_cut];
        let mut advance = alloc::vec![Complex64::new(0.0, 0.0); self.n_cut];
        for n in 1..self.n_cut {
            advance[n] = Complex64::from_polar(1.0, -step * self.logs[n]);
        }
        let mut acc = alloc::vec![Complex64::new(0.0, 0.0); k];
        for p in 0..count {
            let start = a + step * p as f64;
            if p % RESYNC == 0 {
                for n in 1..self.n_cut {
                    base[n] = Complex64::from_polar(self.mags[n], -start * self.logs[n]);
                }
            }
            acc.iter_mut().for_each(|v| *v = Complex64::new(0.0, 0.0));
            for n in 1..self.n_cut {
                let b = base[n];
                let row = &self.rot[n * k..(n + 1) * k];
                for (v, r) in acc.iter_mut().zip(row) {
                    *v += b * r;
                }
                base[n] = b * advance[n];
            }
            for (j, v) in acc.iter().enumerate() {
                let s = Complex64::new(self.sigma, start + self.offsets[j]);
                out.push(v + em_tail(s, self.n_cut, self.cfg.em_terms, self.cfg.target_abs_error * 1e-3));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::zeta;

    #[test]
    fn matches_pointwise() {
        let cfg = ZetaEvalConfig { em_cutoff_multiplier: 0.5, ..ZetaEvalConfig::default() };
        let offsets = [0.013, 0.05, 0.11, 0.19];
        let line = ZetaLine::new(0.6, &offsets, 2000.0, &cfg).unwrap();
        let vals = line.panels(1000.0, 0.2, 70);
        for p in [0usize, 1, 31, 32, 33, 69] {
            for (j, o) in offsets.iter().enumerate() {
                let t = 1000.0 + 0.2 * p as f64 + o;
                let z = zeta(Complex64::new(0.6, t), &cfg).unwrap();
                assert!((vals[p * 4 + j] - z).norm() < 1e-10, "p={p} j={j}");
            }
        }
    }
}
