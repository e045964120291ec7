use core::f64::consts::PI;

use proptest::prelude::*;
use twistmo_core::dirichlet::{build, CoeffModel, DirichletPolynomial};
use twistmo_core::exec::Sequential;
use twistmo_core::moments::*;
use twistmo_core::quad::{composite, GaussLegendre, PanelRule};
use twistmo_core::special::{zeta_abs_sq_critical, ZetaEvalConfig};
use twistmo_core::weights::{phi, w_closed_form};
use twistmo_core::{Complex64, Error, EULER_GAMMA};

fn rs() -> ZetaEvalConfig {
    ZetaEvalConfig::riemann_siegel()
}

#[test]
fn unit_polynomial_is_the_smoothed_second_moment() {
    let t = 1000.0;
    let r = direct_twisted_moment(&Sequential, &DirichletPolynomial::unit(), t, &QuadratureSpec::default(), &rs()).unwrap();
    let gl = GaussLegendre::new(12);
    let plain = composite(&gl, t, 2.0 * t, 0.1, |x| zeta_abs_sq_critical(x, &rs()).unwrap() * phi(x / t));
    assert!((r.value - plain).abs() < 1e-7 * plain, "{} vs {plain}", r.value);
    assert!(r.abs_error_estimate >= 0.0 && r.value.is_finite());
    assert_eq!(r.wall_time, 0.0);
}

#[test]
fn half_width_within_reported_estimate() {
    let mut runs = 0;
    let mut inside = 0;
    for (t, model) in
        [(500.0, CoeffModel::unit()), (1000.0, CoeffModel::random_disk(3)), (2000.0, CoeffModel::random_sign(4)), (1500.0, CoeffModel::frac_order(2))]
    {
        let poly = build(&model, 6).unwrap();
        let quad = QuadratureSpec::default();
        let a = direct_twisted_moment(&Sequential, &poly, t, &quad, &rs()).unwrap();
        let half = QuadratureSpec { panel_width: Some(0.5 * quad.width(t)), ..quad };
        let b = direct_twisted_moment(&Sequential, &poly, t, &half, &rs()).unwrap();
        runs += 1;
        if (a.value - b.value).abs() <= a.abs_error_estimate {
            inside += 1;
        }
    }
    assert!(inside as f64 >= 0.95 * runs as f64, "{inside}/{runs}");
}

#[test]
fn unit_direct_matches_main_term() {
    let t = 1000.0;
    let p = DirichletPolynomial::unit();
    let i = direct_twisted_moment(&Sequential, &p, t, &QuadratureSpec::default(), &rs()).unwrap();
    let m = main_term(&p, t).unwrap();
    let cal = Calibration::default();
    assert!(i.value > 0.0);
    assert!((i.value - m.value).abs() / i.value <= cal.unit_rel_dev);
}

#[test]
fn quadrature_spec_validation() {
    let t = 1000.0;
    let q = QuadratureSpec::default();
    assert!(q.validate(t).is_ok());
    assert!((q.width(t) - QuadratureSpec::max_width(t).min(0.25)).abs() < 1e-15);
    assert!(QuadratureSpec { nodes_per_panel: 3, ..q }.validate(t).is_err());
    assert!(QuadratureSpec { panel_width: Some(0.5), ..q }.validate(t).is_err());
    let p = DirichletPolynomial::unit();
    assert!(direct_twisted_moment(&Sequential, &p, 50.0, &q, &rs()).is_err());
    let simpson = QuadratureSpec { rule: PanelRule::Simpson, nodes_per_panel: 9, ..q };
    let a = direct_twisted_moment(&Sequential, &p, 500.0, &simpson, &rs()).unwrap();
    let b = direct_twisted_moment(&Sequential, &p, 500.0, &q, &rs()).unwrap();
    assert!((a.value - b.value).abs() < 1e-5 * b.value);
}

#[test]
fn unrealistic_tolerance_is_reported() {
    let q = QuadratureSpec { rel_tol: 1e-30, nodes_per_panel: 4, ..QuadratureSpec::default() };
    let r = direct_twisted_moment(&Sequential, &DirichletPolynomial::unit(), 500.0, &q, &rs());
    assert!(matches!(r, Err(Error::QuadratureNotConverged(_))));
}

#[test]
fn main_term_unit_closed_integral() {
    let t = 1000.0;
    let m = main_term(&DirichletPolynomial::unit(), t).unwrap();
    let gl = GaussLegendre::new(20);
    let direct = composite(&gl, t, 2.0 * t, 5.0, |x| ((x / (2.0 * PI)).ln() + 2.0 * EULER_GAMMA) * phi(x / t));
    assert!((m.value - direct).abs() < 1e-9 * direct);
    assert_eq!((m.pairs, m.distinct_q, m.negative_log_pairs), (1, 1, 0));
}

#[test]
fn main_term_matches_brute_force() {
    let t = 1000.0;
    let p = DirichletPolynomial::from_real(&[1.0, 1.0], "ones").unwrap();
    let cached = main_term(&p, t).unwrap();
    let brute = main_term_brute(&p, t).unwrap();
    assert!((cached.value - brute.re).abs() < 1e-9 * brute.re.abs());
    assert_eq!(cached.distinct_q, 2);
    let q = build(&CoeffModel::random_disk(11), 12).unwrap();
    let a = main_term(&q, 2000.0).unwrap();
    let b = main_term_brute(&q, 2000.0).unwrap();
    assert!((a.value - b.re).abs() < 1e-9 * a.value.abs().max(1.0));
}

#[test]
fn negative_log_pairs_counted() {
    // q = de/(d,e)² exceeds T/2π ≈ 15.9 for coprime pairs with de ≥ 16
    let p = build(&CoeffModel::unit().with_window(1, 1), 1).unwrap();
    assert_eq!(main_term(&p, 100.0).unwrap().negative_log_pairs, 0);
    let ones = DirichletPolynomial::from_real(&[1.0; 8], "ones").unwrap();
    let m = main_term(&ones, 100.0).unwrap();
    let mut partial = 0;
    let mut full = 0;
    for d in 1..=8u64 {
        for e in 1..=8u64 {
            let g = twistmo_core::arith::gcd(d, e);
            let q = (d * e / (g * g)) as f64;
            partial += (q > 100.0 / (2.0 * PI)) as u64;
            full += (q > 200.0 / (2.0 * PI)) as u64;
        }
    }
    assert_eq!((m.negative_log_pairs, m.fully_negative_log_pairs), (partial, full));
    assert!(partial > 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn main_term_real_and_conjugation_invariant(seed in 0u64..1000, n in 1usize..20) {
        let p = build(&CoeffModel::random_disk(seed), n).unwrap();
        let conj = DirichletPolynomial::new(p.coeffs().iter().map(|c| c.conj()).collect(), "conj").unwrap();
        let a = main_term(&p, 500.0).unwrap();
        let b = main_term(&conj, 500.0).unwrap();
        prop_assert!(a.imag.abs() < 1e-12 * a.value.abs().max(1.0));
        prop_assert!((a.value - b.value).abs() < 1e-12 * a.value.abs().max(1.0));
        let r = build(&CoeffModel::random_sign(seed), n).unwrap();
        prop_assert!(main_term(&r, 500.0).unwrap().imag.abs() < 1e-12);
    }
}

#[test]
fn afe_examples() {
    let eval = AfeEvaluator::new(2000.0, &AfeConfig::default()).unwrap();
    for t in [500.0f64, 2000.0] {
        let a = eval.eval(t).unwrap();
        let z = zeta_abs_sq_critical(t, &rs()).unwrap();
        assert!((a - z).abs() <= 10.0 * t.powf(-2.0 / 3.0), "t={t}: {a} vs {z}");
    }
    let walk = eval.eval_divisor_walk(500.0).unwrap();
    assert!(walk.im.abs() < 1e-10);
    assert!((walk.re - eval.eval(500.0).unwrap()).abs() < 1e-8);
    assert!(eval.eval(50.0).is_err());
    assert!(eval.eval(2500.0).is_err());
}

#[test]
fn afe_check_small_height() {
    let c = afe_check(&Sequential, 1000.0, 40, 5, 10.0, &AfeConfig::default(), &rs()).unwrap();
    assert!(c.passed, "{} > {}", c.max_abs_dev, c.bound);
    assert_eq!(c.samples.len(), 40);
    assert!(c.samples.iter().all(|s| (1000.0..2000.0).contains(&s.t)));
    let again = afe_check(&Sequential, 1000.0, 40, 5, 10.0, &AfeConfig::default(), &rs()).unwrap();
    assert_eq!(c, again);
}

#[test]
fn afe_evaluator_size_guard() {
    let cfg = AfeConfig { max_terms: 1000, ..AfeConfig::default() };
    assert!(matches!(AfeEvaluator::new(1e4, &cfg), Err(Error::TooLarge { .. })));
}

#[test]
fn diagonal_unit_instantiation() {
    let t = 1000.0;
    let d = diagonal_term(&DirichletPolynomial::unit(), t).unwrap();
    // 2 Σ_ℓ ℓ^{-1} ∫ W(2πℓ²/t) φ(t/T) dt with an independent rule
    let gl = GaussLegendre::new(24);
    let direct = composite(&gl, t, 2.0 * t, 20.0, |x| {
        let mut s = 0.0;
        let mut l = 1.0f64;
        loop {
            let w = w_closed_form(2.0 * PI * l * l / x);
            if 2.0 * PI * l * l / x > 1e6 {
                break;
            }
            s += w / l;
            l += 1.0;
        }
        2.0 * s * phi(x / t)
    });
    assert!((d.diagonal - direct).abs() < 1e-8 * direct, "{} vs {direct}", d.diagonal);
}

#[test]
fn diagonal_plus_a0_is_main_term() {
    let t = 1000.0;
    let d = diagonal_term(&DirichletPolynomial::unit(), t).unwrap();
    assert!(d.gap.abs() > 1e-3);
    assert!(d.closure.abs() < 1e-8 * d.main_term, "{d:?}");
    assert!((d.diagonal + d.a0 - d.main_term).abs() < 1e-8 * d.main_term);
    assert!((a0_contour(&DirichletPolynomial::unit(), t).unwrap() - d.a0).abs() < 1e-12);
    let p = build(&CoeffModel::random_sign(2), 5).unwrap();
    let e = diagonal_term(&p, 500.0).unwrap();
    assert!(e.imag < 1e-10);
    assert!(e.closure.abs() < 1e-8 * e.main_term.abs());
}

#[test]
fn third_moment_small() {
    let t = 1000.0;
    let a = third_moment(&Sequential, 0.5, t, &QuadratureSpec::default(), &default_zeta_for(0.5)).unwrap();
    assert!(a.value > 0.0 && a.value.is_finite());
    let sigma = 0.5 + 3.0 / t.ln();
    let b = third_moment(&Sequential, sigma, t, &QuadratureSpec::default(), &default_zeta_for(sigma)).unwrap();
    let cal = Calibration::default();
    assert!(a.value / b.value <= cal.transfer_constant * t.powf(1.5 * (sigma - 0.5)));
    // the rotated sweep agrees with pointwise evaluation
    let slow = third_moment(&Sequential, sigma, 200.0, &QuadratureSpec::default(), &default_zeta_for(sigma)).unwrap();
    let gl = GaussLegendre::new(8);
    let pointwise = composite(&gl, 200.0, 400.0, QuadratureSpec::default().width(200.0), |x| {
        twistmo_core::special::zeta(Complex64::new(sigma, x), &ZetaEvalConfig::default()).unwrap().norm().powi(3)
    });
    assert!((slow.value - pointwise).abs() < 1e-9 * pointwise);
    assert!(third_moment(&Sequential, 0.4, t, &QuadratureSpec::default(), &default_zeta_for(0.5)).is_err());
    assert!(matches!(third_moment(&Sequential, 0.7, t, &QuadratureSpec::default(), &rs()), Err(Error::MethodDomain { .. })));
}

#[test]
fn theorem1_unit_and_regimes() {
    let t = 1000.0;
    let unit = TwistedMomentConfig::new(CoeffModel::unit(), t, 0.2, 2, 0);
    let r = twisted_moment_experiment(&Sequential, &unit).unwrap();
    let p = build(&CoeffModel::unit(), r.n).unwrap();
    let i = direct_twisted_moment(&Sequential, &p, t, &QuadratureSpec::default(), &rs()).unwrap();
    let m = main_term(&p, t).unwrap();
    let expected = (i.value - m.value).abs() / i.value;
    assert_eq!(r.rows.len(), 2);
    for row in &r.rows {
        assert!((row.rel_dev - expected).abs() < 1e-12);
    }
    assert_eq!(r.regime, BELOW_HALF);
    assert_eq!(r.threshold, Calibration::default().unit_rel_dev);
    let beyond = TwistedMomentConfig::new(CoeffModel::random_sign(0), 500.0, 0.51, 1, 3);
    let b = twisted_moment_experiment(&Sequential, &beyond).unwrap();
    assert_eq!(b.regime, BEYOND_HALF);
    assert_eq!(b.n, 24);
    assert_eq!(b.rows[0].seed, 3);
    let bad = TwistedMomentConfig::new(CoeffModel::unit(), t, 0.7, 1, 0);
    assert!(twisted_moment_experiment(&Sequential, &bad).is_err());
}

#[test]
fn theorem1_config_roundtrip() {
    let cfg = TwistedMomentConfig::new(CoeffModel::random_disk(1), 5e4, 0.25, 5, 9);
    let s = serde_json::to_string(&cfg).unwrap();
    let back: TwistedMomentConfig = serde_json::from_str(&s).unwrap();
    assert_eq!(cfg, back);
    let minimal: TwistedMomentConfig = serde_json::from_str(r#"{"model":{"kind":"unit"},"T":1000,"theta":0.25,"trials":1,"seed":0}"#).unwrap();
    assert_eq!(minimal.calibration, Calibration::default());
    assert!(serde_json::from_str::<TwistedMomentConfig>(r#"{"model":{"kind":"unit"},"T":1000,"theta":0.25,"trials":1,"seed":0,"extra":1}"#).is_err());
}
