use core::f64::consts::TAU;

use num_complex::Complex64;

use super::{euler_phi, gcd, inverse_table, mobius};
use crate::quad::pairwise_sum;

/// `e(num / den) = exp(2πi·num/den)`, reducing the numerator exactly first.
#[inline]
pub fn unit_phase(num: i128, den: u64) -> Complex64 {
    let r = num.rem_euclid(den as i128) as f64 / den as f64;
    let (s, c) = libm::sincos(TAU * r);
    Complex64::new(c, s)
}

const IMAG_TOLERANCE: f64 = 1e-10;

/// Ramanujan sum `c_n(a) = μ(n/(n,a))·φ(n)/φ(n/(n,a))`.
pub fn ramanujan_sum(n: u64, a: i64) -> f64 {
    assert!(n >= 1, "ramanujan_sum needs n >= 1");
    let g = gcd(n, a.unsigned_abs());
    let q = n / g;
    (mobius(q) as i64 * (euler_phi(n) / euler_phi(q)) as i64) as f64
}

/// Kloosterman sum `S(a, b; c) = Σ_{x mod c, (x,c)=1} e((a x + b x̄)/c)`.
///
/// The sum is real; the imaginary part of the computed value is asserted
/// to vanish, which catches a broken coprimality filter.
pub fn kloosterman_sum(a: i64, b: i64, c: u64) -> f64 {
    assert!(c >= 1, "kloosterman_sum needs c >= 1");
    let inv = inverse_table(c);
    let terms: alloc::vec::Vec<Complex64> =
        inv.iter().enumerate().filter_map(|(x, xi)| xi.map(|xi| unit_phase(a as i128 * x as i128 + b as i128 * xi as i128, c))).collect();
    let s = pairwise_sum(&terms);
    assert!(s.im.abs() < IMAG_TOLERANCE * libm::sqrt(1.0 + c as f64), "kloosterman sum S({a},{b};{c}) has imaginary part {}", s.im);
    s.re
}
