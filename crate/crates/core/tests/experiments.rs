use bordered_gue::edge::{outlier_location, EdgeTuning, PhasePoint, Side};
use bordered_gue::experiments::*;

fn edge_cfg(tuning: EdgeTuning, seed: u64) -> EdgeExperimentConfig {
    EdgeExperimentConfig::new(200, tuning, 10_000, seed)
}

#[test]
fn density_matches_kernel() {
    let r = density_experiment(&DensityConfig::new(10, 0.0, 1.5f64.sqrt(), 100_000, 40, 11)).unwrap();
    assert!(r.passed);
    assert!((r.statistic("kernel_mass_in_range").unwrap() - 11.0).abs() < 1e-3);
}

#[test]
fn density_gue_baseline() {
    let r = density_experiment(&DensityConfig::new(10, 0.0, 1.0, 100_000, 40, 12)).unwrap();
    assert!(r.passed, "{}", r.to_json());
}

#[test]
fn density_negative_control_is_rejected() {
    let cfg = DensityConfig::new(10, 0.0, 1.5f64.sqrt(), 100_000, 40, 11).mismatched();
    let r = density_experiment(&cfg).unwrap();
    assert_eq!(r.id, "density_negative_control");
    assert!(r.statistic("p_value").unwrap() < 1e-6);
    assert!(r.passed);
}

#[test]
fn density_reports_reproduce_across_thread_counts() {
    let cfg = DensityConfig::new(6, 0.4, 1.1, 4_000, 20, 3);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| density_experiment(&cfg).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one.to_json(), density_experiment(&cfg).unwrap().to_json());
}

#[test]
fn phase_points_match_predictions() {
    let n = 400;
    let row = |c: f64, s2: f64, seed| phase_point(PhasePoint::new(c, s2).unwrap(), n, 400, seed, 0).unwrap();

    let sep = row(0.0, 3.0, 21);
    let pred = (n as f64 / 2.0).sqrt() * 3.0 / 2f64.sqrt();
    assert!((sep.predicted_largest - pred).abs() < 1e-9);
    assert!(((sep.largest_mean - pred) / pred).abs() <= 0.03, "{sep:?}");

    let spike = row(2.0, 1.0, 22);
    let pred = (n as f64 / 2.0).sqrt() * (2.0 + 0.5);
    assert!(((spike.largest_mean - pred) / pred).abs() <= 0.03, "{spike:?}");

    let bulk = row(0.0, 1.5, 23);
    let edge = (2.0 * n as f64).sqrt();
    assert!((bulk.largest_mean - edge).abs() <= 5.0 * (n as f64).powf(-1.0 / 6.0), "{bulk:?}");
    assert_eq!(bulk.predicted_largest, edge);
}

#[test]
fn phase_scan_finds_boundary() {
    let grid = PhaseGrid { c: vec![0.0, 0.5], sigma2: vec![1.0, 1.5, 2.0, 2.5, 3.0, 3.5] };
    let scan = phase_scan(&grid, 200, 100, 4).unwrap();
    assert_eq!(scan.rows.len(), 12);
    assert_eq!(scan.boundary.len(), 2);
    for b in &scan.boundary {
        // the mean crosses the edge just beyond the threshold, within one grid step
        assert!(b.sigma2 > b.predicted - 0.5 && b.sigma2 < b.predicted + 1.0, "{b:?}");
    }
    for r in scan.rows.iter().filter(|r| r.separation.smallest()) {
        let pred = outlier_location(PhasePoint::new(r.c, r.sigma2).unwrap(), 200, Side::Smallest).unwrap();
        assert_eq!(r.predicted_smallest, pred);
    }
}

#[test]
fn standard_errors_scale_with_draws() {
    let p = PhasePoint::new(0.5, 1.0).unwrap();
    let small = phase_point(p, 100, 500, 31, 0).unwrap();
    let large = phase_point(p, 100, 2_000, 32, 0).unwrap();
    let ratio = small.largest_se / large.largest_se;
    assert!((ratio / 2.0 - 1.0).abs() <= 0.2, "ratio {ratio}");
}

#[test]
fn edge_law_at_unit_variance() {
    let e = edge_fluctuation_experiment(&edge_cfg(EdgeTuning::Sigma1 { s: 0.0 }, 41)).unwrap();
    assert!(e.report.passed);
    assert_eq!(e.samples.len(), 10_000);
    assert!(e.cdf.windows(2).all(|w| w[0].empirical <= w[1].empirical && w[0].predicted <= w[1].predicted));
}

#[test]
fn edge_law_approaches_airy_deep_subcritical() {
    // the deformed law sits about 0.43/s from the pure Airy law, so the
    // empirical distance to pure Airy falls with s while the deformed fit holds
    let deformed = edge_fluctuation_experiment(&edge_cfg(EdgeTuning::Sigma1 { s: 4.0 }, 42)).unwrap();
    assert!(deformed.report.passed, "{}", deformed.report.to_json());
    let to_airy = |s: f64| {
        let mut cfg = edge_cfg(EdgeTuning::Sigma1 { s }, 42);
        cfg.reference = EdgeReference::PureAiry;
        edge_fluctuation_experiment(&cfg).unwrap().report
    };
    let (r4, r16) = (to_airy(4.0), to_airy(16.0));
    assert!(r16.statistic("ks").unwrap() < r4.statistic("ks").unwrap());
    assert!(r16.passed, "{}", r16.to_json());
}

#[test]
fn edge_law_universal_across_paths() {
    let unit = edge_fluctuation_experiment(&edge_cfg(EdgeTuning::Sigma1 { s: 0.0 }, 41)).unwrap();
    let mut cfg = edge_cfg(EdgeTuning::Mu0 { s: 1.0 }, 43);
    cfg.ks_bound = 0.07;
    let centred = edge_fluctuation_experiment(&cfg).unwrap();
    let (a, b) = (unit.report.statistic("ks").unwrap(), centred.report.statistic("ks").unwrap());
    assert!(centred.report.passed, "{}", centred.report.to_json());
    assert!(b <= 2.0 * a, "{b} vs {a}");
}

#[test]
fn border_equivalence() {
    let r = border_equivalence_experiment(&BorderConfig { n: 3, mu: 2.0, sigma: 1.3, draws: 100_000, seed: 51 })
        .unwrap();
    assert!(r.passed, "{}", r.to_json());
    assert_eq!(r.statistics.len(), 5);
}

#[test]
fn conditional_density() {
    let cfg = ConditionalConfig { a: 0.3, mu: 0.5, sigma: 1.2, draws: 100_000, bins: 40, seed: 61 };
    let r = conditional_density_experiment(&cfg).unwrap();
    assert!(r.passed, "{}", r.to_json());
    assert!((conditional_normalization(0.5, 1.2).unwrap() - 1.0).abs() < 1e-8);
}
