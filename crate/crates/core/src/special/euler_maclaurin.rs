use num_complex::Complex64;

use super::bernoulli::scaled_bernoulli;

/// Maximum Bernoulli correction depth available.
pub const MAX_EM_TERMS: usize = 20;

/// Euler–Maclaurin evaluation of `ζ(s)` with `n_cut` direct terms and up to
/// `terms` Bernoulli corrections. Corrections stop early once they fall
/// below `stop_below`.
pub(crate) fn zeta_em(s: Complex64, n_cut: usize, terms: usize, stop_below: f64) -> Complex64 {
    let n_cut = n_cut.max(2);
    let mut head = Complex64::new(0.0, 0.0);
    for n in (1..n_cut).rev() {
        head += power_neg(n as f64, s);
    }
    head + em_tail(s, n_cut, terms, stop_below)
}

/// Everything in the Euler–Maclaurin formula except `Σ_{n<N} n^{-s}`.
pub(crate) fn em_tail(s: Complex64, n_cut: usize, terms: usize, stop_below: f64) -> Complex64 {
    let nf = n_cut as f64;
    let n_pow = power_neg(nf, s);
    let one = Complex64::new(1.0, 0.0);
    let mut total = n_pow * nf / (s - one) + n_pow * 0.5;
    // B_{2k}/(2k)! · s(s+1)…(s+2k-2) · N^{-s-2k+1}
    let mut rising = s;
    let mut scale = n_pow / nf;
    let inv_n2 = 1.0 / (nf * nf);
    for k in 1..=terms.min(MAX_EM_TERMS) {
        if k > 1 {
            let a = (2 * k - 3) as f64;
            rising = rising * (s + a) * (s + a + 1.0);
            scale *= inv_n2;
        }
        let term = rising * scale * scaled_bernoulli(k);
        total += term;
        if term.norm() < stop_below {
            break;
        }
    }
    total
}

/// `n^{-s}` for real `n > 0`.
#[inline]
pub(crate) fn power_neg(n: f64, s: Complex64) -> Complex64 {
    let l = libm::log(n);
    let mag = libm::exp(-s.re * l);
    let (sn, cs) = libm::sincos(s.im * l);
    Complex64::new(mag * cs, -mag * sn)
}
