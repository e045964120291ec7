//! Dirichlet polynomials `A(s) = Σ_{n≤N} a_n n^{-s}` and their coefficient
//! models.

use alloc::string::String;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{dirichlet_convolve, frac_coefficients, prime_indicator};
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::quad::pairwise_sum;
use crate::weights::ramp;

const BLOCK: usize = 64;

/// A finite Dirichlet series with dense coefficients `a_1..a_N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DirichletPolynomial {
    coeffs: Vec<Complex64>,
    logs: Vec<f64>,
    label: String,
}

impl DirichletPolynomial {
    pub fn new(coeffs: Vec<Complex64>, label: impl Into<String>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidArgument("a Dirichlet polynomial needs at least one coefficient"));
        }
        if coeffs.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidArgument("coefficients must be finite"));
        }
        let logs = (1..=coeffs.len()).map(|n| libm::log(n as f64)).collect();
        Ok(Self { coeffs, logs, label: label.into() })
    }

    pub fn from_real(coeffs: &[f64], label: impl Into<String>) -> Result<Self> {
        Self::new(coeffs.iter().map(|&x| Complex64::new(x, 0.0)).collect(), label)
    }

    pub fn unit() -> Self {
        Self::new(alloc::vec![Complex64::new(1.0, 0.0)], "unit").expect("non-empty")
    }

    /// Length `N`.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// `a_n` at index `n - 1`.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn has_real_coefficients(&self) -> bool {
        self.coeffs.iter().all(|c| c.im == 0.0)
    }

    /// `Σ |a_n|² / n`.
    pub fn weighted_norm_sq(&self) -> f64 {
        let terms: Vec<f64> = self.coeffs.iter().enumerate().map(|(i, c)| c.norm_sqr() / (i + 1) as f64).collect();
        pairwise_sum(&terms)
    }

    /// `Σ |a_n| n^{-σ}`, the natural scale for evaluation errors.
    pub fn abs_sum(&self, sigma: f64) -> f64 {
        let terms: Vec<f64> = self.coeffs.iter().zip(&self.logs).map(|(c, l)| c.norm() * libm::exp(-sigma * l)).collect();
        pairwise_sum(&terms)
    }

    /// `A(s)` with the precomputed `log n` table and blocked pairwise summation.
    pub fn eval(&self, s: Complex64) -> Complex64 {
        self.at_sigma(s.re).eval(s.im)
    }

    /// `A(s)` by direct left-to-right summation of `a_n n^{-s}`.
    pub fn eval_naive(&self, s: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, c) in self.coeffs.iter().enumerate() {
            acc += c * Complex64::new((i + 1) as f64, 0.0).powc(-s);
        }
        acc
    }

    /// Freezes `Re s = σ`, folding `n^{-σ}` into the coefficients.
    pub fn at_sigma(&self, sigma: f64) -> SigmaSlice<'_> {
        let scaled = self.coeffs.iter().zip(&self.logs).map(|(c, &l)| c * libm::exp(-sigma * l)).collect();
        SigmaSlice { scaled, logs: &self.logs }
    }

    /// `A(σ + it)` for every `t` in `ts`, in order.
    pub fn eval_batch<E: Executor>(&self, exec: &E, sigma: f64, ts: &[f64]) -> Vec<Complex64> {
        let slice = self.at_sigma(sigma);
        exec.map_indexed(ts.len(), |i| slice.eval(ts[i]))
    }

    /// Pointwise product `A(s)B(s)` as a polynomial of length `N_A N_B`.
    pub fn product(&self, other: &Self) -> Result<Self> {
        let len = self.len() * other.len();
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[(i + 1) * (j + 1) - 1] += a * b;
            }
        }
        Self::new(out, alloc::format!("({})*({})", self.label, other.label))
    }
}

/// A polynomial with `Re s` fixed, evaluated along a vertical line.
#[derive(Debug, Clone)]
pub struct SigmaSlice<'a> {
    scaled: Vec<Complex64>,
    logs: &'a [f64],
}

impl SigmaSlice<'_> {
    /// `Σ a_n n^{-σ} n^{-it}`.
    pub fn eval(&self, t: f64) -> Complex64 {
        let mut blocks = [Complex64::new(0.0, 0.0); 64];
        let mut partial: Vec<Complex64> = Vec::with_capacity(self.scaled.len() / BLOCK + 1);
        for (chunk_c, chunk_l) in self.scaled.chunks(BLOCK).zip(self.logs.chunks(BLOCK)) {
            for ((slot, c), &l) in blocks.iter_mut().zip(chunk_c).zip(chunk_l) {
                let (sn, cs) = libm::sincos(t * l);
                *slot = Complex64::new(c.re * cs + c.im * sn, c.im * cs - c.re * sn);
            }
            partial.push(pairwise_sum(&blocks[..chunk_c.len()]));
        }
        pairwise_sum(&partial)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeffKind {
    /// `a_1 = 1`, all others zero
    Unit,
    /// independent uniform points of the unit disk
    RandomDisk,
    /// independent `±1`
    RandomSign,
    /// samples of a smooth `ψ` supported on `[L height^{-xi1}, 2L]`, `L = N/2`
    SmoothPsi,
    /// indicator of primes `≡ residue (mod modulus)`
    PrimeIndicator,
    /// `d_{1/order}(n)`, coefficients of `ζ(s)^{1/order}`
    FracOrder,
    /// Dirichlet convolution of the `factors`
    ConvolutionProduct,
}

/// Declarative description of a coefficient sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffModel {
    pub kind: CoeffKind,
    #[serde(default)]
    pub seed: u64,
    /// support window `[lo, hi]`; defaults to `[1, N]`
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<(u64, u64)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub factors: Vec<CoeffModel>,
}

impl CoeffModel {
    pub fn of_kind(kind: CoeffKind) -> Self {
        Self { kind, seed: 0, window: None, order: None, xi1: None, height: None, residue: None, modulus: None, factors: Vec::new() }
    }

    pub fn unit() -> Self {
        Self::of_kind(CoeffKind::Unit)
    }

    pub fn random_disk(seed: u64) -> Self {
        Self { seed, ..Self::of_kind(CoeffKind::RandomDisk) }
    }

    pub fn random_sign(seed: u64) -> Self {
        Self { seed, ..Self::of_kind(CoeffKind::RandomSign) }
    }

    pub fn frac_order(order: u32) -> Self {
        Self { order: Some(order), ..Self::of_kind(CoeffKind::FracOrder) }
    }

    pub fn smooth_psi(xi1: f64, height: f64) -> Self {
        Self { xi1: Some(xi1), height: Some(height), ..Self::of_kind(CoeffKind::SmoothPsi) }
    }

    pub fn prime_indicator(residue: u64, modulus: u64) -> Self {
        Self { residue: Some(residue), modulus: Some(modulus), ..Self::of_kind(CoeffKind::PrimeIndicator) }
    }

    pub fn convolution(left: CoeffModel, right: CoeffModel) -> Self {
        Self { factors: alloc::vec![left, right], ..Self::of_kind(CoeffKind::ConvolutionProduct) }
    }

    pub fn with_window(mut self, lo: u64, hi: u64) -> Self {
        self.window = Some((lo, hi));
        self
    }

    fn label(&self) -> String {
        match self.kind {
            CoeffKind::Unit => "unit".into(),
            CoeffKind::RandomDisk => alloc::format!("random_disk(seed={})", self.seed),
            CoeffKind::RandomSign => alloc::format!("random_sign(seed={})", self.seed),
            CoeffKind::SmoothPsi => "smooth_psi".into(),
            CoeffKind::PrimeIndicator => "prime_indicator".into(),
            CoeffKind::FracOrder => alloc::format!("frac_order({})", self.order.unwrap_or(0)),
            CoeffKind::ConvolutionProduct => "convolution_product".into(),
        }
    }

    /// Coefficients `a_1..a_N`.
    pub fn coefficients(&self, n: usize) -> Result<Vec<Complex64>> {
        if n == 0 {
            return Err(Error::InvalidArgument("polynomial length must be at least 1"));
        }
        let (lo, hi) = self.window.unwrap_or((1, n as u64));
        if lo == 0 || lo > hi {
            return Err(Error::BadModel("window must satisfy 1 <= lo <= hi"));
        }
        if lo > n as u64 {
            return Err(Error::BadModel("window starts beyond the polynomial length"));
        }
        let hi = hi.min(n as u64);
        let zero = Complex64::new(0.0, 0.0);
        let mut out: Vec<Complex64> = match self.kind {
            CoeffKind::Unit => {
                if lo > 1 {
                    return Err(Error::BadModel("the unit model needs 1 inside its window"));
                }
                let mut v = alloc::vec![zero; n];
                v[0] = Complex64::new(1.0, 0.0);
                v
            }
            CoeffKind::RandomDisk => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                (0..n)
                    .map(|_| {
                        let r = libm::sqrt(rng.gen::<f64>());
                        let a = 2.0 * PI * rng.gen::<f64>();
                        Complex64::from_polar(r, a)
                    })
                    .collect()
            }
            CoeffKind::RandomSign => {
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                (0..n).map(|_| Complex64::new(if rng.gen::<bool>() { 1.0 } else { -1.0 }, 0.0)).collect()
            }
            CoeffKind::SmoothPsi => {
                let xi1 = self.xi1.ok_or(Error::BadModel("smooth_psi needs xi1"))?;
                let height = self.height.ok_or(Error::BadModel("smooth_psi needs height"))?;
                if !(xi1 > 0.0 && height > 1.0) {
                    return Err(Error::BadModel("smooth_psi needs xi1 > 0 and height > 1"));
                }
                let half = 0.5 * n as f64;
                let start = half * libm::pow(height, -xi1);
                (1..=n)
                    .map(|k| {
                        let x = k as f64;
                        Complex64::new((1.0 - ramp(x / start)) * ramp(x / half), 0.0)
                    })
                    .collect()
            }
            CoeffKind::PrimeIndicator => {
                let modulus = self.modulus.unwrap_or(1);
                if modulus == 0 {
                    return Err(Error::BadModel("prime_indicator needs modulus >= 1"));
                }
                let residue = self.residue.unwrap_or(0);
                let ind = prime_indicator(1, n as u64, residue, modulus);
                ind.into_iter().map(|b| if b { Complex64::new(1.0, 0.0) } else { zero }).collect()
            }
            CoeffKind::FracOrder => {
                let order = self.order.ok_or(Error::BadModel("frac_order needs order"))?;
                if order == 0 {
                    return Err(Error::BadModel("frac_order needs order >= 1"));
                }
                frac_coefficients(order, n).to_f64().into_iter().map(|x| Complex64::new(x, 0.0)).collect()
            }
            CoeffKind::ConvolutionProduct => {
                let mut iter = self.factors.iter();
                let first = iter.next().ok_or(Error::BadModel("convolution_product needs factors"))?;
                let mut acc = first.coefficients(n)?;
                for f in iter {
                    let next = f.coefficients(n)?;
                    acc = dirichlet_convolve(&acc, &next);
                }
                acc
            }
        };
        for (i, c) in out.iter_mut().enumerate() {
            let k = (i + 1) as u64;
            if k < lo || k > hi {
                *c = zero;
            }
        }
        Ok(out)
    }
}

/// The polynomial of length `n` described by `model`.
pub fn build(model: &CoeffModel, n: usize) -> Result<DirichletPolynomial> {
    DirichletPolynomial::new(model.coefficients(n)?, model.label())
}

/// `Σ_{n≤x} d_{1/2}(n) n^{-iv} n^{-s}`.
pub fn dhalf_mollifier(x: usize, v: f64) -> Result<DirichletPolynomial> {
    if x == 0 {
        return Err(Error::InvalidArgument("mollifier length must be at least 1"));
    }
    let d = frac_coefficients(2, x).to_f64();
    let coeffs = d.iter().enumerate().map(|(i, &c)| Complex64::from_polar(c, -v * libm::log((i + 1) as f64))).collect();
    DirichletPolynomial::new(coeffs, alloc::format!("dhalf(x={x}, v={v})"))
}

/// `(1/T) ∫_0^T |A(1/2 + it)|² dt` and its diagonal prediction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanSquare {
    pub quadrature: f64,
    /// the same integral from the exact antiderivative of each `(m/n)^{it}`
    pub exact: f64,
    /// `Σ |a_n|²/n`
    pub diagonal: f64,
}

/// Mean square of `A(1/2+it)` over `[0, height]`.
pub fn mean_square<E: Executor>(exec: &E, poly: &DirichletPolynomial, height: f64) -> Result<MeanSquare> {
    if !(height > 0.0) {
        return Err(Error::InvalidArgument("height must be positive"));
    }
    let max_freq = libm::log(poly.len() as f64).max(1.0);
    let width = (0.5 / max_freq).min(0.5);
    let grid = crate::quad::PanelGrid::new(0.0, height, width);
    let gl = crate::quad::GaussLegendre::new(8);
    let slice = poly.at_sigma(0.5);
    let panels = exec.map_indexed(grid.count, |i| {
        let (lo, hi) = grid.bounds(i);
        gl.integrate(lo, hi, |t| slice.eval(t).norm_sqr())
    });
    let quadrature = pairwise_sum(&panels) / height;

    let b: Vec<Complex64> = poly.coeffs.iter().zip(&poly.logs).map(|(c, &l)| c * libm::exp(-0.5 * l)).collect();
    let rows = exec.map_indexed(b.len(), |m| {
        let mut row = Vec::with_capacity(b.len());
        for n in 0..b.len() {
            let w = if m == n {
                Complex64::new(height, 0.0)
            } else {
                // ∫_0^T (m/n)^{it} dt
                let f = poly.logs[n] - poly.logs[m];
                let (sn, cs) = libm::sincos(f * height);
                Complex64::new(sn / f, (cs - 1.0) / f)
            };
            row.push(b[m].conj() * b[n] * w);
        }
        pairwise_sum(&row)
    });
    let exact = pairwise_sum(&rows).re / height;
    Ok(MeanSquare { quadrature, exact, diagonal: poly.weighted_norm_sq() })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn simple_values() {
        let u = build(&CoeffModel::unit(), 1).unwrap();
        assert_eq!(u.coeffs(), &[c(1.0, 0.0)]);
        assert_eq!(u.eval(c(0.3, 17.0)), c(1.0, 0.0));
        let p = DirichletPolynomial::from_real(&[1.0, 1.0], "ones").unwrap();
        assert!((p.eval(c(0.0, 0.0)) - 2.0).norm() < 1e-15);
        let f = build(&CoeffModel::frac_order(2), 4).unwrap();
        let want = [1.0, 0.5, 0.5, 0.375];
        for (a, b) in f.coeffs().iter().zip(want) {
            assert_eq!(a.re, b);
        }
    }

    #[test]
    fn conjugation_symmetry() {
        let p = build(&CoeffModel::random_sign(7), 300).unwrap();
        assert!(p.has_real_coefficients());
        let s = c(0.5, 123.4);
        assert!((p.eval(s.conj()) - p.eval(s).conj()).norm() < 1e-12);
    }

    #[test]
    fn windows() {
        let m = CoeffModel::random_disk(3).with_window(5, 9);
        let v = m.coefficients(20).unwrap();
        for (i, x) in v.iter().enumerate() {
            let k = i + 1;
            assert_eq!(x.norm() == 0.0, !(5..=9).contains(&k));
            assert!(x.norm() <= 1.0);
        }
        assert!(matches!(CoeffModel::unit().with_window(2, 5).coefficients(5), Err(Error::BadModel(_))));
        assert!(matches!(CoeffModel::random_sign(1).with_window(6, 3).coefficients(9), Err(Error::BadModel(_))));
        assert!(matches!(CoeffModel::random_sign(1).with_window(30, 40).coefficients(9), Err(Error::BadModel(_))));
        assert!(matches!(CoeffModel::of_kind(CoeffKind::FracOrder).coefficients(9), Err(Error::BadModel(_))));
    }

    #[test]
    fn seeds_are_deterministic() {
        let a = CoeffModel::random_disk(11).coefficients(50).unwrap();
        let b = CoeffModel::random_disk(11).coefficients(50).unwrap();
        let d = CoeffModel::random_disk(12).coefficients(50).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, d);
    }

    #[test]
    fn mollifier_examples() {
        assert_eq!(dhalf_mollifier(1, 3.0).unwrap().coeffs(), &[c(1.0, 0.0)]);
        let m = dhalf_mollifier(4, 0.0).unwrap();
        let want = [1.0, 0.5, 0.5, 0.375];
        for (a, b) in m.coeffs().iter().zip(want) {
            assert_eq!(*a, c(b, 0.0));
        }
    }
}
