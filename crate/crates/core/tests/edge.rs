use bordered_gue::edge::*;
use bordered_gue::ensemble::{sample_bordered_r1_tridiagonal, sample_gue_tridiagonal, stream_rng};
use bordered_gue::quad::{adaptive, MappedRule};
use bordered_gue::specfun::airy;
use bordered_gue::stats::mean_std_se;
use proptest::prelude::*;

#[test]
fn semicircle_values_and_mass() {
    assert!((semicircle(2.0, 0.0) - 2.0 / std::f64::consts::PI).abs() < 1e-15);
    assert_eq!(semicircle(2.0, 2.0), 0.0);
    assert_eq!(semicircle(50.0, 11.0), 0.0);
    // λ = √(2n) sin θ removes the square-root endpoints
    let n = 50.0f64;
    let r = (2.0 * n).sqrt();
    let half_pi = std::f64::consts::FRAC_PI_2;
    let mass = MappedRule::composite(16, 8, -half_pi, half_pi)
        .integrate(|t| semicircle(n, r * t.sin()) * r * t.cos());
    assert!((mass - n).abs() < 1e-10, "mass {mass}");
}

#[test]
fn stieltjes_transform() {
    let n = 100.0f64;
    let lam = 1e3 * n.sqrt();
    let v = stieltjes_semicircle(n, lam).unwrap();
    assert!((v * lam / n - 1.0).abs() < 1e-2);
    for l in [15.0, 20.0, 100.0] {
        assert_eq!(stieltjes_semicircle(n, -l).unwrap(), -stieltjes_semicircle(n, l).unwrap());
    }
    assert!(stieltjes_semicircle(n, 14.0).is_err());
    // direct integral of the semicircle against 1/(λ - y)
    let lam = 16.0;
    let r = (2.0 * n).sqrt();
    let half_pi = std::f64::consts::FRAC_PI_2;
    let direct = MappedRule::composite(16, 16, -half_pi, half_pi)
        .integrate(|t| semicircle(n, r * t.sin()) * r * t.cos() / (lam - r * t.sin()));
    assert!((direct - stieltjes_semicircle(n, lam).unwrap()).abs() < 1e-10);
}

#[test]
fn stieltjes_matches_gue_resolvent() {
    let n = 200usize;
    let lam = 1.2 * (2.0 * n as f64).sqrt();
    let draws = 200;
    let mut acc = 0.0;
    for k in 0..draws {
        let mut rng = stream_rng(91, k);
        let spec = sample_gue_tridiagonal(n, &mut rng).spectrum().unwrap();
        acc += spec.values().iter().map(|a| 1.0 / (lam - a)).sum::<f64>();
    }
    let mc = acc / draws as f64;
    let pred = stieltjes_semicircle(n as f64, lam).unwrap();
    assert!(((mc - pred) / pred).abs() <= 0.02, "{mc} vs {pred}");
}

#[test]
fn classification_examples() {
    assert_eq!(classify(PhasePoint::new(0.0, 2.0).unwrap()), Separation::None);
    assert_eq!(classify(PhasePoint::new(2.0, 1.0).unwrap()), Separation::Largest);
    assert_eq!(classify(PhasePoint::new(0.0, 4.0).unwrap()), Separation::Both);
    assert!(PhasePoint::new(0.0, 0.0).is_err());
}

#[test]
fn outlier_reduces_at_unit_variance() {
    let n = 300;
    let r = (n as f64 / 2.0).sqrt();
    for k in 1..=30 {
        let c = 1.0 + 0.1 * k as f64;
        let v = outlier_location(PhasePoint::new(c, 1.0).unwrap(), n, Side::Largest).unwrap();
        assert!((v - r * (c + 1.0 / c)).abs() < 1e-12 * v, "c={c}");
    }
}

#[test]
fn outlier_continuous_at_threshold() {
    let n = 500;
    let edge = (2.0 * n as f64).sqrt();
    for c in [-0.5, 0.0, 0.3, 1.0, 1.7] {
        let s2 = 2.0 - c + 1e-8;
        let v = outlier_location(PhasePoint::new(c, s2).unwrap(), n, Side::Largest).unwrap();
        assert!((v - edge).abs() <= 1e-6 * edge, "c={c}: {v} vs {edge}");
    }
}

#[test]
fn outlier_location_monte_carlo() {
    let (n, s2) = (400usize, 3.0f64);
    let lmax: Vec<f64> = (0..400)
        .map(|k| {
            let mut rng = stream_rng(5, k);
            sample_bordered_r1_tridiagonal(n, 0.0, s2.sqrt(), &mut rng).unwrap().largest()
        })
        .collect();
    let (mean, _, _) = mean_std_se(&lmax);
    let pred = outlier_location(PhasePoint::new(0.0, s2).unwrap(), n, Side::Largest).unwrap();
    assert!((pred - (n as f64 / 2.0).sqrt() * s2 / (s2 - 1.0).sqrt()).abs() < 1e-12);
    assert!(((mean - pred) / pred).abs() <= 0.03, "{mean} vs {pred}");
}

#[test]
fn tuning_deformations() {
    let t = EdgeTuning::general(100, 1.0, 1.0, 0.0, 1.0).unwrap();
    assert!((t.s() - 1.0).abs() < 1e-15);
    assert_eq!(EdgeTuning::general(100, 0.4, 1.6, 0.0, 0.0).unwrap().s(), 0.0);
    assert!(EdgeTuning::general(1000, 0.5, 1.7, 0.0, 0.0).is_err());
    assert!(EdgeTuning::general(1000, 0.0, 2.0, 0.0, 0.0).is_err());
    for n in [10usize, 200, 5000] {
        let (mu, sigma) = EdgeTuning::Sigma1 { s: 0.7 }.params(n);
        assert_eq!(sigma, 1.0);
        assert!((s_from_mu_sigma1(n, mu) - 0.7).abs() < 1e-12);
        let (mu, sigma) = EdgeTuning::Mu0 { s: -0.4 }.params(n);
        assert_eq!(mu, 0.0);
        assert!((s_from_sigma2_mu0(n, sigma * sigma) + 0.4).abs() < 1e-12);
    }
}

#[test]
fn airy_kernel_diagonal_limit() {
    for x in [-4.0, -1.3, 0.0, 0.8, 3.0] {
        let a = airy(x).unwrap();
        let diag = a.ai_prime * a.ai_prime - x * a.ai * a.ai;
        assert!((airy_kernel(x, x).unwrap() - diag).abs() < 1e-15);
        // symmetric offsets cancel the first-order term
        for h in [1e-5, 1e-6] {
            let near = airy_kernel(x - 0.5 * h, x + 0.5 * h).unwrap();
            assert!((near - diag).abs() < 1e-8, "x={x} h={h}: {near} vs {diag}");
        }
    }
}

#[test]
fn tail_integral_at_zero_deformation() {
    for y in [-6.0, -1.0, 0.0, 2.5] {
        let upper = adaptive(|t| airy(t).unwrap().ai, y, 40.0, 1e-14, 1e-13).unwrap();
        assert!((airy_tail_integral(y, 0.0).unwrap() - (1.0 - upper)).abs() < 1e-10);
    }
    assert!((airy_tail_integral(12.0, 0.0).unwrap() - 1.0).abs() < 1e-10);
}

#[test]
fn tail_integral_branches_join() {
    for y in [-8.0, -2.0, 0.0, 1.5, 6.0] {
        let below = airy_tail_integral(y, 0.5 - 1e-12).unwrap();
        let above = airy_tail_integral(y, 0.5).unwrap();
        assert!((below - above).abs() < 1e-9 * above.abs().max(1.0), "y={y}: {below} vs {above}");
    }
}

#[test]
fn tail_table_matches_direct() {
    for s in [-1.5, 0.0, 0.8, 4.0] {
        let t = AiryTailTable::new(s, -10.0, 15.0, 0.01).unwrap();
        for k in 0..60 {
            let y = -9.95 + 0.41 * k as f64;
            let d = airy_tail_integral(y, s).unwrap();
            assert!((t.eval(y).unwrap() - d).abs() <= 1e-8 * d.abs().max(1e-2), "s={s} y={y}");
        }
    }
}

#[test]
fn large_deformation_correction_decays() {
    for i in 0..=8 {
        for j in 0..=8 {
            let x = -2.0 + 0.5 * i as f64;
            let y = -2.0 + 0.5 * j as f64;
            let c10 = deformed_airy_kernel(x, y, 10.0).unwrap() - airy_kernel(x, y).unwrap();
            let c50 = deformed_airy_kernel(x, y, 50.0).unwrap() - airy_kernel(x, y).unwrap();
            assert!(c10.abs() <= 0.11, "({x},{y}): {c10}");
            assert!(c50.abs() < c10.abs() || c10 == 0.0, "({x},{y})");
        }
    }
}

#[test]
fn tracy_widom_reference_values() {
    // F₂(-2) and F₂(0) for the GUE soft edge
    let cfg = FredholmConfig::default();
    let f = |xi: f64| fredholm_det(&AiryKernel, xi, &cfg).unwrap().value;
    assert!((f(-2.0) - 0.413_224_142_505_122_6).abs() < 1e-8);
    assert!((f(0.0) - 0.969_372_828_355_997).abs() < 1e-8);
    assert!(f(8.0) >= 1.0 - 1e-4);
}

#[test]
fn fredholm_self_convergence() {
    let v16 = nystrom(&AiryKernel, -2.0, 14.0, 16).unwrap();
    let v32 = nystrom(&AiryKernel, -2.0, 14.0, 32).unwrap();
    assert!((v16 - v32).abs() <= 1e-8, "{v16} vs {v32}");
    let cfg = FredholmConfig { length: Some(14.0), ..FredholmConfig::default() };
    let v = fredholm_det(&AiryKernel, -2.0, &cfg).unwrap();
    assert_eq!(v.order, 32);
    assert!(v.error_estimate <= 1e-8);
}

#[test]
fn fredholm_monotone_and_bounded() {
    let cfg = FredholmConfig::default();
    for s in [-1.0, 0.0, 2.0] {
        let mut prev = 0.0;
        for k in 0..12 {
            let xi = -5.0 + 0.75 * k as f64;
            let v = largest_cdf(xi, s, &cfg).unwrap();
            assert!((0.0..=1.0).contains(&v));
            assert!(v >= prev - 1e-10, "s={s} xi={xi}");
            prev = v;
        }
    }
}

#[test]
fn airy_law_matches_gue_largest_eigenvalue() {
    let n = 400usize;
    let map = EdgeMap::new(n as f64).unwrap();
    let draws = 10_000;
    let below = (0..draws)
        .filter(|&k| {
            let mut rng = stream_rng(77, k as u64);
            map.scale(sample_gue_tridiagonal(n, &mut rng).largest()) <= 0.0
        })
        .count();
    let p = below as f64 / draws as f64;
    let pred = fredholm_det(&AiryKernel, 0.0, &FredholmConfig::default()).unwrap().value;
    let se = (pred * (1.0 - pred) / draws as f64).sqrt();
    assert!((p - pred).abs() <= 3.0 * se, "{p} vs {pred} (se {se})");
}

#[test]
fn finite_kernels_approach_the_edge_limit() {
    let ns = [50, 100, 200];
    let mu0 = finite_to_edge_convergence(&EdgeTuning::Mu0 { s: 1.0 }, 0.0, 0.0, &ns).unwrap();
    let s1 = finite_to_edge_convergence(&EdgeTuning::Sigma1 { s: 0.5 }, 0.0, 0.0, &ns).unwrap();
    let general = EdgeTuning::general(200, 1.0, 1.0, 0.0, 1.0).unwrap();
    let gen = finite_to_edge_convergence(&general, 0.0, 0.0, &ns).unwrap();
    for rows in [&mu0, &s1, &gen] {
        assert!(rows.windows(2).all(|w| w[1].deviation < w[0].deviation), "{rows:?}");
    }
    assert!(gen[2].deviation <= 2.0 * mu0[2].deviation);
}

#[test]
fn general_deformation_formula_at_off_unit_slope() {
    // ĉ = 0.5: the finite kernels converge to the limit with s = (s₂ - s₁)/(2 - ĉ)
    let tuning = EdgeTuning::general(100, 0.5, 1.5, -1.0, 0.5).unwrap();
    let rows = finite_to_edge_convergence(&tuning, 0.0, 0.0, &[100, 400, 1600]).unwrap();
    assert!(rows.windows(2).all(|w| w[1].deviation < w[0].deviation));
    assert!(rows[2].deviation < 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn classification_boundary_flips(k in -190i32..127) {
        // dyadic c keeps σ² + c = 2 exact
        let c = k as f64 / 64.0;
        let s2 = 2.0 - c;
        let at = classify(PhasePoint::new(c, s2).unwrap());
        prop_assert!(!at.largest());
        prop_assert!(classify(PhasePoint::new(c, s2 + 1e-9).unwrap()).largest());
        prop_assert!(!classify(PhasePoint::new(c, s2 - 1e-9).unwrap()).largest());
    }

    #[test]
    fn edge_map_round_trip(n in 1.0f64..1e5, x in -50.0f64..50.0) {
        let m = EdgeMap::new(n).unwrap();
        prop_assert!((m.unscale(m.scale(x)) - x).abs() <= 1e-12 * x.abs().max(1.0));
    }
}
