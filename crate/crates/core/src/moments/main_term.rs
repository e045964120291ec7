use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, lcm};
use crate::dirichlet::DirichletPolynomial;
use crate::error::{Error, Result};
use crate::quad::{composite, pairwise_sum, GaussLegendre};
use crate::weights::phi;
use crate::EULER_GAMMA;

use super::grid::TRule;

/// Coefficients `c_q = Σ a_d ā_e / [d, e]` over pairs with `de/(d,e)² = q`.
///
/// The t-integral of a pair depends on `(d, e)` only through the exact
/// rational `(d,e)²/(de) = 1/q`, so the integer `q` is the cache key.
#[derive(Debug, Clone, PartialEq)]
pub struct PairAggregate {
    pub entries: Vec<(u64, Complex64)>,
    pub pairs: u64,
}

pub fn pair_aggregate(poly: &DirichletPolynomial) -> PairAggregate {
    let a = poly.coeffs();
    let mut map: BTreeMap<u64, Complex64> = BTreeMap::new();
    let mut pairs = 0u64;
    for (i, ad) in a.iter().enumerate() {
        if *ad == Complex64::new(0.0, 0.0) {
            continue;
        }
        let d = i as u64 + 1;
        for (j, ae) in a.iter().enumerate() {
            if *ae == Complex64::new(0.0, 0.0) {
                continue;
            }
            let e = j as u64 + 1;
            let g = gcd(d, e);
            let q = (d / g) * (e / g);
            *map.entry(q).or_default() += ad * ae.conj() / lcm(d, e) as f64;
            pairs += 1;
        }
    }
    PairAggregate { entries: map.into_iter().collect(), pairs }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MainTermReport {
    pub value: f64,
    pub imag: f64,
    #[serde(rename = "T")]
    pub t: f64,
    pub pairs: u64,
    pub distinct_q: usize,
    /// pairs whose logarithm `log(t/2πq)` is negative somewhere on `[T, 2T]`
    pub negative_log_pairs: u64,
    /// pairs whose logarithm is negative on all of `[T, 2T]`
    pub fully_negative_log_pairs: u64,
}

fn check_height(t: f64) -> Result<()> {
    if !(t > 10.0) {
        return Err(Error::InvalidArgument("main term needs T > 10"));
    }
    Ok(())
}

/// `Σ_{d,e} (a_d ā_e/[d,e]) ∫ (log(t(d,e)²/2πde) + 2γ) φ(t/T) dt`.
pub fn main_term(poly: &DirichletPolynomial, t: f64) -> Result<MainTermReport> {
    check_height(t)?;
    let agg = pair_aggregate(poly);
    let rule = TRule::new(t);
    let a = poly.coeffs();
    let mut terms = Vec::with_capacity(agg.entries.len());
    for &(q, c) in &agg.entries {
        let lq = libm::log(2.0 * PI * q as f64);
        let j = rule.integrate(|x| libm::log(x) - lq + 2.0 * EULER_GAMMA);
        terms.push(c * j);
    }
    let total = pairwise_sum(&terms);
    let (mut partial, mut full) = (0u64, 0u64);
    for (i, ad) in a.iter().enumerate() {
        for (j, ae) in a.iter().enumerate() {
            if ad.norm_sqr() == 0.0 || ae.norm_sqr() == 0.0 {
                continue;
            }
            let (d, e) = (i as u64 + 1, j as u64 + 1);
            let g = gcd(d, e);
            let q = ((d / g) * (e / g)) as f64;
            if q > t / (2.0 * PI) {
                partial += 1;
            }
            if q > 2.0 * t / (2.0 * PI) {
                full += 1;
            }
        }
    }
    Ok(MainTermReport {
        value: total.re,
        imag: total.im,
        t,
        pairs: agg.pairs,
        distinct_q: agg.entries.len(),
        negative_log_pairs: partial,
        fully_negative_log_pairs: full,
    })
}

/// Independent double sum with a separate quadrature per pair and no cache.
pub fn main_term_brute(poly: &DirichletPolynomial, t: f64) -> Result<Complex64> {
    check_height(t)?;
    let gl = GaussLegendre::new(20);
    let a = poly.coeffs();
    let mut terms = Vec::new();
    for (i, ad) in a.iter().enumerate() {
        for (j, ae) in a.iter().enumerate() {
            let (d, e) = ((i + 1) as f64, (j + 1) as f64);
            let g = gcd(i as u64 + 1, j as u64 + 1) as f64;
            let ratio = g * g / (d * e);
            let integral = composite(&gl, t, 2.0 * t, t / 40.0, |x| (libm::log(x * ratio / (2.0 * PI)) + 2.0 * EULER_GAMMA) * phi(x / t));
            terms.push(ad * ae.conj() * (g / (d * e)) * integral);
        }
    }
    Ok(pairwise_sum(&terms))
}
