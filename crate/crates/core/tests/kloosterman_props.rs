use proptest::prelude::*;
use twistmo_core::arith::{mod_inverse, unit_phase};
use twistmo_core::dirichlet::CoeffModel;
use twistmo_core::exec::Sequential;
use twistmo_core::kloosterman::*;
use twistmo_core::{Complex64, Error};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn random_spec(seed: u64, a: u64, m: u64, n: u64) -> TrilinearSpec {
    TrilinearSpec::from_model(&CoeffModel::random_disk(0), a, m, n, seed).unwrap()
}

fn sum(spec: &TrilinearSpec) -> Complex64 {
    trilinear_sum(&Sequential, spec).unwrap()
}

#[test]
fn small_examples() {
    assert!((sum(&TrilinearSpec::ones(1, 1, 1)) - c(1.0, 0.0)).norm() < 1e-15);
    let mut s = TrilinearSpec::ones(3, 4, 5);
    s.nu.iter_mut().for_each(|v| *v = c(0.0, 0.0));
    assert_eq!(sum(&s), c(0.0, 0.0));
    // n ∈ {2, 3}, m = 1, a = 1
    let two = sum(&TrilinearSpec::ones(1, 1, 2));
    let expected = unit_phase(1, 2) + unit_phase(1, 3);
    assert!((two - expected).norm() < 1e-15);
}

#[test]
fn matches_naive_triple_loop() {
    let spec = random_spec(5, 7, 9, 11);
    let mut naive = c(0.0, 0.0);
    for (k, nu) in spec.nu.iter().enumerate() {
        for (i, al) in spec.alpha.iter().enumerate() {
            for (j, be) in spec.beta.iter().enumerate() {
                let (a, m, n) = (spec.a + k as u64, spec.m + i as u64, spec.n + j as u64);
                if let Ok(inv) = mod_inverse(m as i64, n) {
                    naive += nu * al * be * unit_phase(a as i128 * inv as i128, n);
                }
            }
        }
    }
    assert!((sum(&spec) - naive).norm() < 1e-11);
}

#[test]
fn guard_trips() {
    let mut spec = TrilinearSpec::ones(1, 1, 1);
    spec.a = 1000;
    spec.m = 1000;
    spec.n = 1001;
    spec.nu = vec![c(1.0, 0.0); 1000];
    spec.alpha = vec![c(1.0, 0.0); 1000];
    spec.beta = vec![c(1.0, 0.0); 1001];
    assert!(matches!(trilinear_sum(&Sequential, &spec), Err(Error::TooLarge { .. })));
    let bad = TrilinearSpec { nu: vec![], ..TrilinearSpec::ones(2, 2, 2) };
    assert!(trilinear_sum(&Sequential, &bad).is_err());
}

fn scaled(v: &[Complex64], f: Complex64) -> Vec<Complex64> {
    v.iter().map(|x| x * f).collect()
}

fn added(u: &[Complex64], v: &[Complex64]) -> Vec<Complex64> {
    u.iter().zip(v).map(|(x, y)| x + y).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn linear_in_each_sequence(seed in 0u64..1_000_000, which in 0usize..3, re in -2.0f64..2.0, im in -2.0f64..2.0) {
        let x = random_spec(seed, 8, 8, 8);
        let y = random_spec(seed + 7_777_777, 8, 8, 8);
        let lam = c(re, im);
        let mut z = x.clone();
        let mut y_only = x.clone();
        match which {
            0 => { z.nu = added(&x.nu, &scaled(&y.nu, lam)); y_only.nu = y.nu.clone(); }
            1 => { z.alpha = added(&x.alpha, &scaled(&y.alpha, lam)); y_only.alpha = y.alpha.clone(); }
            _ => { z.beta = added(&x.beta, &scaled(&y.beta, lam)); y_only.beta = y.beta.clone(); }
        }
        let lhs = sum(&z);
        let rhs = sum(&x) + lam * sum(&y_only);
        prop_assert!((lhs - rhs).norm() < 1e-10 * (1.0 + lhs.norm()));
    }

    #[test]
    fn ratios_invariant_under_phase(seed in 0u64..1_000_000, which in 0usize..3, angle in 0.0f64..6.283) {
        let x = random_spec(seed, 8, 8, 8);
        let mut y = x.clone();
        let rot = Complex64::from_polar(1.0, angle);
        match which {
            0 => y.nu = scaled(&x.nu, rot),
            1 => y.alpha = scaled(&x.alpha, rot),
            _ => y.beta = scaled(&x.beta, rot),
        }
        let a = bound_report(&Sequential, &x, 0.0).unwrap();
        let b = bound_report(&Sequential, &y, 0.0).unwrap();
        for (p, q) in [(a.ratio_conjecture, b.ratio_conjecture), (a.ratio_bcr, b.ratio_bcr), (a.ratio_dfi, b.ratio_dfi)] {
            prop_assert!((p - q).abs() < 1e-12 * p.max(1e-300));
        }
    }

    #[test]
    fn reciprocity(seed in 0u64..1_000_000) {
        let x = random_spec(seed, 8, 8, 8);
        let direct = sum(&x);
        let recip = trilinear_sum_reciprocal(&x).unwrap();
        prop_assert!((direct - recip).norm() < 1e-9);
    }

    #[test]
    fn doubling_keeps_ratios(seed in 0u64..1_000_000) {
        let x = random_spec(seed, 6, 7, 5);
        let mut y = x.clone();
        for v in y.nu.iter_mut().chain(y.alpha.iter_mut()).chain(y.beta.iter_mut()) {
            *v *= 2.0;
        }
        let a = bound_report(&Sequential, &x, 0.0).unwrap();
        let b = bound_report(&Sequential, &y, 0.0).unwrap();
        prop_assert!((a.ratio_conjecture - b.ratio_conjecture).abs() < 1e-12 * a.ratio_conjecture.max(1e-300));
        prop_assert!((a.ratio_bcr - b.ratio_bcr).abs() < 1e-12 * a.ratio_bcr.max(1e-300));
    }

    #[test]
    fn conjecture_rhs_monotone_in_epsilon(seed in 0u64..1_000_000) {
        let x = random_spec(seed, 5, 9, 4);
        prop_assert!(conjecture_rhs(&x, 0.1).unwrap() > conjecture_rhs(&x, 0.0).unwrap());
    }
}

#[test]
fn conjecture_rhs_examples() {
    let unit = TrilinearSpec::ones(1, 1, 1);
    for eps in [0.0, 0.05] {
        let v = conjecture_rhs(&unit, eps).unwrap();
        assert!((v - (2f64.powf(0.5 + eps) + 2.0)).abs() < 1e-14);
    }
    let x = random_spec(3, 4, 6, 5);
    let mut y = x.clone();
    y.nu = scaled(&x.nu, c(3.0, 0.0));
    assert!((conjecture_rhs(&y, 0.0).unwrap() - 3.0 * conjecture_rhs(&x, 0.0).unwrap()).abs() < 1e-12 * conjecture_rhs(&y, 0.0).unwrap());
    assert!(general_rhs(&x, -0.1, 0.0, 0.0).is_err());
    assert!(conjecture_rhs(&x, -0.1).is_err());
}

#[test]
fn general_rhs_presets() {
    let x = random_spec(9, 6, 8, 7);
    let g = general_rhs(&x, 0.0, 0.0, 0.0).unwrap();
    assert_eq!(g.value, conjecture_rhs(&x, 0.0).unwrap());
    assert_eq!(BoundPreset::Dfi.exponents(), (23.0 / 48.0, 0.5));
    assert_eq!(BoundPreset::Bcr.exponents(), (9.0 / 20.0, 7.0 / 20.0));
    // DFI window is (MN)^{1/96}: A = 6 lies outside it at M = 8, N = 7
    let (r, t) = BoundPreset::Dfi.exponents();
    assert!(!general_rhs(&x, r, t, 0.0).unwrap().admissible);
    assert!(general_rhs(&TrilinearSpec::ones(1, 8, 7), r, t, 0.0).unwrap().admissible);
    let big = random_spec(1, 100, 12, 10);
    let (rb, tb) = BoundPreset::Bcr.exponents();
    assert!(general_rhs(&big, rb, tb, 0.0).unwrap().value < general_rhs(&big, r, t, 0.0).unwrap().value);
}

#[test]
fn degenerate_single_a_single_m() {
    // ν = δ_{a=5}, α = δ_{m=9}, β ≡ 1: S = Σ_{n ∈ [8,16), (9,n)=1} e(5·9̄/n)
    let mut spec = TrilinearSpec::ones(4, 8, 8);
    spec.nu = vec![c(0.0, 0.0); 4];
    spec.nu[1] = c(1.0, 0.0);
    spec.alpha = vec![c(0.0, 0.0); 8];
    spec.alpha[1] = c(1.0, 0.0);
    let mut expected = c(0.0, 0.0);
    for n in 8..16u64 {
        if let Ok(inv) = mod_inverse(9, n) {
            expected += unit_phase(5 * inv as i128, n);
        }
    }
    let r = bound_report(&Sequential, &spec, 0.0).unwrap();
    assert!((r.s_value - expected).norm() < 1e-13);
    // ‖ν‖ = ‖α‖ = ‖α‖∞ = ‖β‖∞ = 1, ‖β‖ = √8
    let rhs = 8f64.sqrt() * 16f64.sqrt() + 2.0 * (8f64.sqrt() * 8f64.sqrt() + 8f64.sqrt());
    assert!((r.rhs_conjecture - rhs).abs() < 1e-12);
    assert!((r.ratio_conjecture - expected.norm() / rhs).abs() < 1e-13);
}

#[test]
fn harness_small() {
    let cfg = HarnessConfig { a: 8, m: 8, n: 8, trials: 100, model: CoeffModel::random_sign(0), seed: 1, epsilon: 0.0 };
    let r = ratio_harness(&Sequential, &cfg).unwrap();
    assert_eq!(r.rows.len(), 100);
    assert_eq!(r.status, "exploratory");
    assert!(r.max_ratio_conj.is_finite() && r.max_ratio_conj > 0.0);
    assert_eq!(r.rows[r.argmax_trial].ratio_conj, r.max_ratio_conj);
    let again = bound_report(&Sequential, &r.extremal, 0.0).unwrap();
    assert_eq!(again.ratio_conjecture, r.max_ratio_conj);
    assert!(r.extremal.is_normalized());
}

#[test]
fn lower_bound_example() {
    let r = lower_bound_construction(&Sequential, 64, 8, 8, 0.25).unwrap();
    assert_eq!((r.nu_primes.clone(), r.beta_primes.clone()), (vec![11], vec![13]));
    assert!(r.ratio >= 0.5 && r.ratio <= 2.0, "{}", r.ratio);
    // M/n ≈ 5 is far from the regime where the ℓ ≠ 0 Poisson terms are negligible
    assert!((r.s_abs - r.poisson_prediction).abs() < 0.05 * r.poisson_prediction);
    let half = lower_bound_construction(&Sequential, 64, 8, 8, 0.125).unwrap();
    assert!((r.s_abs / half.s_abs - 2.0).abs() < 0.02);
    assert!(lower_bound_construction(&Sequential, 64, 8, 8, 5.0).is_err());
    assert!(matches!(lower_bound_construction(&Sequential, 64, 2, 8, 0.25), Err(Error::EmptyPrimeClass { residue: 1, .. })));
    assert!(lower_bound_construction(&Sequential, 4, 8, 8, 0.25).is_err());
}

#[test]
fn lower_bound_grid_stays_proportional_to_ma() {
    let mut worst = f64::INFINITY;
    for m in [64, 128, 256] {
        for n in [8, 16] {
            for a in [8, 16] {
                let r = lower_bound_construction(&Sequential, m, n, a, 0.25).unwrap();
                worst = worst.min(r.s_over_ma);
            }
        }
    }
    assert!(worst > 1e-3, "{worst}");
}

#[test]
fn poisson_examples() {
    let one = poisson_ramanujan_check(1, 1, 1000, 0.25).unwrap();
    assert!(one.deviation < 1e-12);
    let five = poisson_ramanujan_check(5, 1, 10_000, 0.25).unwrap();
    assert!(five.deviation < 1e-3);
    let small = poisson_ramanujan_check(97, 3, 1000, 0.25).unwrap();
    let large = poisson_ramanujan_check(97, 3, 10_000, 0.25).unwrap();
    assert!(large.deviation < small.deviation, "{} vs {}", large.deviation, small.deviation);
}

#[test]
fn character_counts() {
    assert_eq!(quadruple_count(1).unwrap(), 1);
    assert_eq!(quadruple_count(2).unwrap(), 6);
    let c = char_fourth_moment_count(2, 3).unwrap();
    assert_eq!(c.second, 6);
    assert_eq!(c.fourth, 6 * quadruple_count(3).unwrap());
    let ratios: Vec<f64> = [8u64, 16, 32, 64].iter().map(|&a| quadruple_count(a).unwrap() as f64 / (a as f64 * (a as f64).ln()).powi(2)).collect();
    for w in ratios.windows(2) {
        assert!(w[1] <= w[0] * 1.1, "{ratios:?}");
    }
    assert!(matches!(quadruple_count(257), Err(Error::TooLarge { .. })));
}
