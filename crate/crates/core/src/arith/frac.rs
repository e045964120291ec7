use alloc::vec::Vec;
use core::ops::{Add, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::sieve::SpfSieve;

/// Largest length for which [`frac_coefficients`] uses exact rationals.
pub const EXACT_LIMIT: usize = 10_000;

/// Coefficient storage: `values[i]` is the coefficient of `(i + 1)^{-s}`.
#[derive(Debug, Clone, PartialEq)]
pub enum CoeffValues {
    Exact(Vec<BigRational>),
    Float(Vec<f64>),
}

/// Dirichlet coefficients of `ζ(s)^{1/order}` on `1..=len`.
#[derive(Debug, Clone, PartialEq)]
pub struct FracCoefficients {
    pub order: u32,
    pub values: CoeffValues,
}

impl FracCoefficients {
    pub fn len(&self) -> usize {
        match &self.values {
            CoeffValues::Exact(v) => v.len(),
            CoeffValues::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coefficient at `n` (1-based) as a float.
    pub fn get(&self, n: usize) -> f64 {
        match &self.values {
            CoeffValues::Exact(v) => v[n - 1].to_f64().unwrap_or(f64::NAN),
            CoeffValues::Float(v) => v[n - 1],
        }
    }

    /// Whether the `order`-fold Dirichlet self-convolution is all ones:
    /// exactly in rational mode, to `1e-12` in float mode.
    pub fn power_is_ones(&self) -> bool {
        fn power<T>(base: &[T], order: u32) -> Vec<T>
        where
            T: Clone + Zero + Add<Output = T>,
            for<'x> &'x T: Mul<&'x T, Output = T>,
        {
            let mut acc = base.to_vec();
            for _ in 1..order {
                acc = dirichlet_convolve(&acc, base);
            }
            acc
        }
        match &self.values {
            CoeffValues::Exact(v) => power(v, self.order).iter().all(|x| x.is_one()),
            CoeffValues::Float(v) => power(v, self.order).iter().all(|x| (x - 1.0).abs() < 1e-12),
        }
    }

    pub fn to_f64(&self) -> Vec<f64> {
        match &self.values {
            CoeffValues::Exact(v) => v.iter().map(|q| q.to_f64().unwrap_or(f64::NAN)).collect(),
            CoeffValues::Float(v) => v.clone(),
        }
    }
}

/// Coefficients of `ζ(s)^{1/order}` up to `len`, exact when `len <= EXACT_LIMIT`.
pub fn frac_coefficients(order: u32, len: usize) -> FracCoefficients {
    assert!(order >= 1 && len >= 1, "frac_coefficients needs order >= 1 and len >= 1");
    if len <= EXACT_LIMIT {
        let k = BigInt::from(order);
        // (1 - x)^{-1/k} = Σ_j c_j x^j,  c_j = c_{j-1} · (1 + (j-1)k) / (k j)
        let values = multiplicative(len, BigRational::one(), |prev, j| {
            let num = BigInt::from(1u64 + (j as u64 - 1) * order as u64);
            let den = &k * BigInt::from(j as u64);
            prev * BigRational::new(num, den)
        });
        FracCoefficients { order, values: CoeffValues::Exact(values) }
    } else {
        frac_coefficients_float(order, len)
    }
}

/// Floating-point variant of [`frac_coefficients`] for any length.
pub fn frac_coefficients_float(order: u32, len: usize) -> FracCoefficients {
    assert!(order >= 1 && len >= 1, "frac_coefficients needs order >= 1 and len >= 1");
    let inv = 1.0 / order as f64;
    let values = multiplicative(len, 1.0f64, |prev, j| prev * (inv + (j - 1) as f64) / j as f64);
    FracCoefficients { order, values: CoeffValues::Float(values) }
}

/// Builds a multiplicative function whose value at `p^j` depends only on
/// `j` through `next(value at p^{j-1}, j)`.
fn multiplicative<T, F>(len: usize, one: T, next: F) -> Vec<T>
where
    T: Clone + Mul<Output = T>,
    F: Fn(&T, usize) -> T,
{
    let sieve;
    let spf = if len <= super::SIEVE_LIMIT {
        SpfSieve::shared()
    } else {
        sieve = SpfSieve::new(len);
        &sieve
    };
    let mut prime_power = alloc::vec![one.clone()];
    let mut out: Vec<T> = Vec::with_capacity(len);
    out.push(one);
    for n in 2..=len {
        let p = spf.spf(n);
        let mut m = n;
        let mut e = 0usize;
        while m % p == 0 {
            m /= p;
            e += 1;
        }
        while prime_power.len() <= e {
            let j = prime_power.len();
            let v = next(&prime_power[j - 1], j);
            prime_power.push(v);
        }
        out.push(prime_power[e].clone() * out[m - 1].clone());
    }
    out
}

/// Dirichlet convolution `(a * b)[d] = Σ_{nk=d} a[n] b[k]` on the common
/// range (both slices are 1-based: element 0 is index 1).
pub fn dirichlet_convolve<T>(a: &[T], b: &[T]) -> Vec<T>
where
    T: Clone + Zero + Add<Output = T>,
    for<'x> &'x T: Mul<&'x T, Output = T>,
{
    let len = a.len().min(b.len());
    let mut out = alloc::vec![T::zero(); len];
    for n in 1..=len {
        if a[n - 1].is_zero() {
            continue;
        }
        let mut d = n;
        let mut k = 1;
        while d <= len {
            out[d - 1] = out[d - 1].clone() + &a[n - 1] * &b[k - 1];
            d += n;
            k += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn exact(c: &FracCoefficients) -> &[BigRational] {
        match &c.values {
            CoeffValues::Exact(v) => v,
            CoeffValues::Float(_) => panic!("expected exact values"),
        }
    }

    #[test]
    fn half_order_examples() {
        let c = frac_coefficients(2, 8);
        let v = exact(&c);
        assert_eq!(v[0], q(1, 1));
        assert_eq!(v[1], q(1, 2));
        assert_eq!(v[3], q(3, 8));
        assert_eq!(v[5], q(1, 4));
        assert_eq!(v[7], q(5, 16));
    }

    #[test]
    fn convolution_examples() {
        let ones = alloc::vec![1i64; 6];
        let mut delta = alloc::vec![0i64; 6];
        delta[0] = 1;
        assert_eq!(dirichlet_convolve(&delta, &ones), ones);
        assert_eq!(dirichlet_convolve(&ones, &ones), [1, 2, 2, 3, 2, 4]);
    }

    #[test]
    fn self_convolution_recovers_zeta() {
        for order in 1..=4u32 {
            let c = frac_coefficients(order, 600);
            let base = exact(&c).to_vec();
            let mut acc = base.clone();
            for _ in 1..order {
                acc = dirichlet_convolve(&acc, &base);
            }
            assert!(acc.iter().all(|x| x.is_one()), "order {order}");
            assert!(c.power_is_ones());
        }
    }

    #[test]
    fn float_mode_agrees_with_exact() {
        let e = frac_coefficients(3, 2_000).to_f64();
        let f = frac_coefficients_float(3, 2_000).to_f64();
        for (x, y) in e.iter().zip(&f) {
            assert!((x - y).abs() < 1e-14);
        }
        let big = frac_coefficients(2, EXACT_LIMIT + 5);
        assert!(matches!(big.values, CoeffValues::Float(_)));
        let conv = dirichlet_convolve(&big.to_f64(), &big.to_f64());
        assert!(conv.iter().all(|x| (x - 1.0).abs() < 1e-12));
        assert!(big.power_is_ones());
        let mut broken = frac_coefficients(2, 50);
        if let CoeffValues::Exact(v) = &mut broken.values {
            v[12] = q(1, 3);
        }
        assert!(!broken.power_is_ones());
    }

    #[test]
    fn multiplicative_on_coprime_pairs() {
        let c = frac_coefficients(2, 3_000);
        let v = exact(&c);
        for m in 1..55usize {
            for n in 1..55usize {
                if super::super::gcd(m as u64, n as u64) == 1 {
                    assert_eq!(v[m * n - 1], &v[m - 1] * &v[n - 1]);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn convolution_commutes_and_associates(
            a in proptest::collection::vec(-50i64..50, 512),
            b in proptest::collection::vec(-50i64..50, 512),
            c in proptest::collection::vec(-50i64..50, 512),
        ) {
            prop_assert_eq!(dirichlet_convolve(&a, &b), dirichlet_convolve(&b, &a));
            let left = dirichlet_convolve(&dirichlet_convolve(&a, &b), &c);
            let right = dirichlet_convolve(&a, &dirichlet_convolve(&b, &c));
            prop_assert_eq!(left, right);
        }
    }
}
