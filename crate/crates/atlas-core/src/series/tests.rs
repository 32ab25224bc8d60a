use super::*;
use approx::assert_relative_eq;

/// Independent oracle: partial sums of sum n^{-s} for real s > 1 with an
/// integral tail correction, accurate to ~1e-13 for s >= 2 at N = 2e6.
fn zeta_partial_sum_oracle(s: f64) -> f64 {
    let n = 2_000_000u64;
    let mut acc = 0.0f64;
    for k in (1..=n).rev() {
        acc += (k as f64).powf(-s);
    }
    // Euler-Maclaurin tail: integral + half term + first Bernoulli term.
    let nf = n as f64 + 1.0;
    acc + nf.powf(1.0 - s) / (s - 1.0) - 0.5 * nf.powf(-s) + s / 12.0 * nf.powf(-s - 1.0)
}

#[test]
fn eval_zeta_at_two() {
    let spec = SeriesSpec::zeta();
    let r = spec.eval(Complex64::new(2.0, 0.0), 1e-12).unwrap();
    let oracle = zeta_partial_sum_oracle(2.0);
    assert_relative_eq!(r.value.re, oracle, max_relative = 1e-11);
    assert!(r.value.im.abs() < 1e-12);
    assert!(r.error_bound <= 1e-12);
    assert_eq!(r.method, Method::EtaAcceleration);
}

#[test]
fn eval_zeta_far_right_is_near_one() {
    let spec = SeriesSpec::zeta();
    let r = spec.eval(Complex64::new(30.0, 7.0), 1e-12).unwrap();
    // Tail oracle: |zeta(s) - 1| <= sum_{n >= 2} n^{-30} < 2 * 2^{-30}.
    let tail: f64 = (2..200u64).map(|n| (n as f64).powf(-30.0)).sum();
    assert!(tail < 2.0 * 2.0f64.powi(-30));
    assert!((r.value - Complex64::new(1.0, 0.0)).norm() <= 2.0 * 2.0f64.powi(-30));
}

#[test]
fn eval_at_pole_is_rejected() {
    let spec = SeriesSpec::zeta();
    assert!(matches!(
        spec.eval(Complex64::new(1.0, 0.0), 1e-10),
        Err(EvalError::EvaluationAtPole(_))
    ));
    // Principal character has the pole too; non-principal does not.
    let lp = SeriesSpec::dirichlet_l(5, 0).unwrap();
    assert!(lp.pole.is_some());
    let l2 = SeriesSpec::dirichlet_l(5, 2).unwrap();
    assert!(l2.pole.is_none());
}

#[test]
fn zeta_derivative_matches_richardson_finite_difference() {
    let spec = SeriesSpec::zeta();
    let s = Complex64::new(2.0, 0.0);
    let f = |x: Complex64| spec.eval(x, 1e-14).unwrap().value;
    // Richardson-extrapolated central differences at h and h/2.
    let h = 1e-5;
    let d_h = (f(s + h) - f(s - h)) / (2.0 * h);
    let d_h2 = (f(s + h / 2.0) - f(s - h / 2.0)) / h;
    let fd = (4.0 * d_h2 - d_h) / 3.0;
    let r = spec.eval_derivative(s, 1, 1e-12).unwrap();
    assert!((r.value - fd).norm() < 1e-9, "{} vs {}", r.value, fd);
    // Spot value: zeta'(2) ~ -0.9375482543.
    assert_relative_eq!(r.value.re, -0.93754825431584375, max_relative = 1e-9);
}

#[test]
fn zeta_derivative_nonzero_at_first_zero() {
    let spec = SeriesSpec::zeta();
    let s = Complex64::new(0.5, 14.134725141734694);
    let r = spec.eval_derivative(s, 1, 1e-10).unwrap();
    assert!(r.value.norm() > 0.5, "first zero is simple: {}", r.value);
    let f = |x: Complex64| spec.eval(x, 1e-13).unwrap().value;
    let h = 1e-6;
    let fd = (f(s + h) - f(s - h)) / (2.0 * h);
    assert!((r.value - fd).norm() < 1e-6);
}

#[test]
fn second_derivative_consistency() {
    let spec = SeriesSpec::dirichlet_l(5, 2).unwrap();
    let s = Complex64::new(0.3, 21.0);
    let f = |x: Complex64| spec.eval(x, 1e-12).unwrap().value;
    let h = 1e-4;
    let fd2 = (f(s + h) - 2.0 * f(s) + f(s - h)) / (h * h);
    let r = spec.eval_derivative(s, 2, 1e-9).unwrap();
    assert!((r.value - fd2).norm() < 1e-5 * (1.0 + r.value.norm()));
}

#[test]
fn derivative_at_large_sigma_shrinks_like_leading_term() {
    // f'(s) ~ -lambda_2 a_2 e^{-lambda_2 s} once the constant term dies.
    let spec = SeriesSpec::dirichlet_l(5, 1).unwrap();
    let s = Complex64::new(25.0, 3.0);
    let r = spec.eval_derivative(s, 1, 1e-12).unwrap();
    let chi2 = spec.coefficient(2).unwrap();
    let lead = -chi2 * 2.0f64.ln() * (-s * 2.0f64.ln()).exp();
    // Agreement up to the first omitted term of the derivative series.
    let next = 3.0f64.ln() * 3.0f64.powi(-25);
    assert!(
        (r.value - lead).norm() < 1.5 * next,
        "lead mismatch: {}",
        (r.value - lead).norm()
    );
    assert!(r.value.norm() < 1e-6);
}

#[test]
fn dirichlet_l_matches_direct_character_sum() {
    // Independent oracle in the absolute-convergence region.
    for (q, j) in [(5u32, 1u32), (5, 2), (7, 3), (7, 4)] {
        let spec = SeriesSpec::dirichlet_l(q, j).unwrap();
        let chi = characters::DirichletCharacter::new(q, j).unwrap();
        let s = Complex64::new(2.5, 1.25);
        let mut acc = Complex64::new(0.0, 0.0);
        for n in (1..400_000u64).rev() {
            acc += chi.eval(n) * (-s * (n as f64).ln()).exp();
        }
        let r = spec.eval(s, 1e-12).unwrap();
        assert!(
            (r.value - acc).norm() < 3e-10,
            "L({q},{j}) mismatch: {} vs {acc}",
            r.value
        );
    }
}

#[test]
fn normalized_tail_threshold_under_half_by_sigma_three() {
    // Direct tail oracle: sum_{n>=2} n^{-3} < 0.5, so sigma_eps(0.5) <= 3.
    let spec = SeriesSpec::zeta();
    let sigma = spec.uniform_limit_threshold(0.5).unwrap();
    assert!(sigma <= 3.0, "sigma_eps = {sigma}");
    let tail: f64 = (2..100_000u64).map(|n| (n as f64).powf(-3.0)).sum();
    assert!(tail < 0.5);
    // And the function really stays within eps of 1 to the right of it.
    for t in [0.0, 5.0, 40.0] {
        let v = spec.eval(Complex64::new(sigma + 0.01, t), 1e-10).unwrap();
        assert!((v.value - Complex64::new(1.0, 0.0)).norm() < 0.5);
    }
}

#[test]
fn threshold_monotone_in_eps() {
    let spec = SeriesSpec::davenport_heilbronn();
    let s1 = spec.uniform_limit_threshold(0.2).unwrap();
    let s2 = spec.uniform_limit_threshold(0.5).unwrap();
    let s3 = spec.uniform_limit_threshold(0.9).unwrap();
    assert!(s1 >= s2 && s2 >= s3);
}

#[test]
fn abscissa_estimates_match_known_values() {
    // Ordinary zeta-type series: D ~ 1 and sigma_c ~ 1.
    let spec = SeriesSpec::zeta();
    let est = spec.estimate_abscissae(10_000).unwrap();
    assert_relative_eq!(est.d, 1.0, max_relative = 1e-9);
    assert!((est.sigma_c - 1.0).abs() < 0.01);
    assert_eq!(est.sigma_u_upper, est.sigma_c + est.d);

    // Primitive character: bounded partial sums, sigma_c ~ 0.
    let l = SeriesSpec::dirichlet_l(5, 2).unwrap();
    let est = l.estimate_abscissae(10_000).unwrap();
    assert!(est.sigma_c.abs() < 0.05, "sigma_c = {}", est.sigma_c);

    // Degenerate spec a_n = 0 for n >= 2: the constant partial sum gives 0.
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 40];
    coeffs[0] = Complex64::new(1.0, 0.0);
    let near_zero = SeriesSpec::custom(
        coeffs,
        (1..=40u64).map(|n| (n as f64).ln()).collect(),
    )
    .unwrap();
    let est = near_zero.estimate_abscissae(40).unwrap();
    assert_eq!(est.sigma_c, 0.0);
}

#[test]
fn sigma_eps_ladder_is_monotone() {
    let spec = SeriesSpec::zeta();
    let est = spec.estimate_abscissae(4096).unwrap();
    for w in est.sigma_eps.windows(2) {
        // Larger eps -> smaller threshold.
        assert!(w[0].0 > w[1].0);
        assert!(w[0].1 <= w[1].1);
    }
}

#[test]
fn euler_product_agrees_with_series() {
    let zeta = SeriesSpec::zeta();
    let r_series = zeta.eval(Complex64::new(2.0, 0.0), 1e-12).unwrap();
    let r_prod = zeta.euler_product_eval(Complex64::new(2.0, 0.0), 100_000).unwrap();
    assert!(
        (r_series.value - r_prod.value).norm() <= r_series.error_bound + r_prod.error_bound,
        "diff {} vs budget {}",
        (r_series.value - r_prod.value).norm(),
        r_series.error_bound + r_prod.error_bound
    );

    let l = SeriesSpec::dirichlet_l(5, 2).unwrap();
    let s = Complex64::new(3.0, 0.0);
    let a = l.eval(s, 1e-12).unwrap();
    let b = l.euler_product_eval(s, 10_000).unwrap();
    assert!((a.value - b.value).norm() <= a.error_bound + b.error_bound);
}

#[test]
fn euler_product_requires_multiplicativity() {
    let dh = SeriesSpec::davenport_heilbronn();
    assert!(matches!(
        dh.euler_product_eval(Complex64::new(2.0, 0.0), 100),
        Err(EvalError::NotMultiplicative)
    ));
}

#[test]
fn euler_product_tends_to_one_far_right() {
    let zeta = SeriesSpec::zeta();
    let r = zeta.euler_product_eval(Complex64::new(40.0, 0.0), 1000).unwrap();
    assert!((r.value - Complex64::new(1.0, 0.0)).norm() < 1e-11);
}

#[test]
fn combination_is_normalized_and_keeps_zero_structure() {
    let combo = SeriesSpec::l_pair_combination(7, 2, 4, 0.34375).unwrap();
    assert!((combo.coefficient(1).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-14);
    assert!((combo.normalization.re - 1.34375).abs() < 1e-14);
    // Value equals the unnormalized sum divided by 1.34375.
    let l2 = SeriesSpec::dirichlet_l(7, 2).unwrap();
    let l4 = SeriesSpec::dirichlet_l(7, 4).unwrap();
    let s = Complex64::new(0.5, 31.0);
    let raw = l2.eval(s, 1e-12).unwrap().value + 0.34375 * l4.eval(s, 1e-12).unwrap().value;
    let v = combo.eval(s, 1e-11).unwrap().value;
    assert!((v - raw / 1.34375).norm() < 1e-10);
}

#[test]
fn custom_series_evaluates_in_half_plane_only() {
    let coeffs: Vec<Complex64> = (0..64)
        .map(|n| {
            if n == 0 {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.5 / (n as f64), 0.2)
            }
        })
        .collect();
    let exps: Vec<f64> = (1..=64).map(|n| (n as f64).ln() * 1.5).collect();
    let exps: Vec<f64> = exps.iter().map(|l| l - exps[0] * 0.0).collect();
    let mut exps = exps;
    exps[0] = 0.0;
    let spec = SeriesSpec::custom(coeffs.clone(), exps.clone()).unwrap();
    let s = Complex64::new(4.0, 1.0);
    let r = spec.eval(s, 1e-6).unwrap();
    let direct: Complex64 = coeffs
        .iter()
        .zip(&exps)
        .map(|(a, &l)| a * (-s * l).exp())
        .sum();
    assert!((r.value - direct).norm() <= r.error_bound + 1e-14);
    assert!(spec.eval(Complex64::new(-1.0, 0.0), 1e-6).is_err());
}

#[test]
fn custom_rejects_bad_normalization() {
    assert!(SeriesSpec::custom(
        vec![Complex64::new(2.0, 0.0), Complex64::new(1.0, 0.0)],
        vec![0.0, 1.0],
    )
    .is_err());
    assert!(SeriesSpec::custom(
        vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
        vec![0.5, 1.0],
    )
    .is_err());
    assert!(SeriesSpec::custom(
        vec![Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0)],
        vec![0.0, -1.0],
    )
    .is_err());
}

#[test]
fn determinism_bit_identical() {
    let spec = SeriesSpec::dirichlet_l(7, 2).unwrap();
    let s = Complex64::new(-1.25, 33.7);
    let a = spec.eval(s, 1e-8).unwrap();
    let b = spec.eval(s, 1e-8).unwrap();
    assert_eq!(a, b);
}

#[test]
fn uniform_limit_region_has_value_near_one_for_all_presets() {
    let specs: Vec<SeriesSpec> = vec![
        SeriesSpec::zeta(),
        SeriesSpec::dirichlet_l(5, 1).unwrap(),
        SeriesSpec::dirichlet_l(7, 3).unwrap(),
        SeriesSpec::davenport_heilbronn(),
        SeriesSpec::l_pair_combination(7, 2, 4, 0.34375).unwrap(),
    ];
    for spec in &specs {
        let eps = 0.5;
        let sigma = spec.uniform_limit_threshold(eps).unwrap();
        for t in [-12.0, 0.0, 3.0, 27.0] {
            let v = spec.eval(Complex64::new(sigma + 1e-6, t), 1e-10).unwrap();
            assert!(
                (v.value - Complex64::new(1.0, 0.0)).norm() < eps,
                "{} at sigma_eps themed point",
                spec.id()
            );
        }
    }
}

#[test]
fn self_dual_pair_has_real_coefficients_and_correct_phase() {
    let s = SeriesSpec::self_dual_pair(7, 1).unwrap();
    for n in 1..30u64 {
        let a = s.coefficient(n).unwrap();
        assert!(a.im.abs() < 1e-14, "a_{n} = {a} not real");
    }
    assert!((s.coefficient(1).unwrap().re - 1.0).abs() < 1e-14);
    // Functional-equation pairing: located zeros off the line come in
    // sigma <-> 1 - sigma pairs (checked in the zero-finder tests); here we
    // check the symmetrization is even/odd-consistent.
    assert!(SeriesSpec::self_dual_pair(7, 3).is_err()); // real character
    assert!(SeriesSpec::self_dual_pair(7, 0).is_err()); // principal
}

#[test]
fn double_zero_combination_is_normalized() {
    let c = SeriesSpec::double_zero_combination_mod7();
    assert!((c.coefficient(1).unwrap() - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    assert_eq!(c.id(), "combo:7");
    for n in 1..30u64 {
        assert!(c.coefficient(n).unwrap().im.abs() < 1e-12);
    }
}
