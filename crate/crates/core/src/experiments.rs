//! Monte Carlo experiments that set sampled spectra against the analytic
//! predictions of the kernel and edge modules.
//!
//! Every draw `k` of an experiment with seed `s` uses its own stream
//! `stream_rng(s, k)`, and reductions are sums or sorts, so reports are
//! identical for any number of worker threads.

use std::collections::BTreeMap;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::edge::{classify, outlier_location, CdfTable, EdgeMap, EdgeTuning, FredholmConfig, PhasePoint, Separation, Side};
use crate::ensemble::{
    border_diagonalized, border_once, eigenvalues, gue_ordered_pdf, joint_pdf_r1, sample_bordered_r1_tridiagonal,
    sample_gue, stream_rng,
};
use crate::error::{invalid, Result};
use crate::kernel::{Kernel, KernelSpec};
use crate::linalg::{HermitianMatrix, Spectrum};
use crate::quad::{adaptive, MappedRule};
use crate::stats::{chi_square, ks_one_sample, ks_two_sample, mean_std_se, Histogram};

/// Which side of a bound a statistic has to land on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    Above(f64),
    Below(f64),
}

impl Check {
    pub fn holds(self, value: f64) -> bool {
        match self {
            Self::Above(b) => value > b,
            Self::Below(b) => value <= b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub statistic: String,
    pub check: Check,
}

impl Tolerance {
    pub fn new(statistic: &str, check: Check) -> Self {
        Self { statistic: statistic.to_string(), check }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub id: String,
    pub seed: u64,
    pub parameters: serde_json::Value,
    pub statistics: BTreeMap<String, f64>,
    pub tolerance: Tolerance,
    pub passed: bool,
}

impl ExperimentReport {
    pub fn new<P: Serialize>(
        id: &str,
        seed: u64,
        parameters: &P,
        statistics: &[(&str, f64)],
        tolerance: Tolerance,
    ) -> Result<Self> {
        let statistics: BTreeMap<String, f64> = statistics.iter().map(|&(k, v)| (k.to_string(), v)).collect();
        let judged = statistics
            .get(&tolerance.statistic)
            .ok_or_else(|| invalid(format!("report has no statistic named {}", tolerance.statistic)))?;
        let passed = tolerance.check.holds(*judged);
        let parameters = serde_json::to_value(parameters).map_err(|e| invalid(e.to_string()))?;
        Ok(Self { id: id.to_string(), seed, parameters, statistics, tolerance, passed })
    }

    pub fn statistic(&self, name: &str) -> Option<f64> {
        self.statistics.get(name).copied()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports hold only plain data")
    }
}

/// Runs `f` once per draw on its own RNG stream, in parallel, keeping draw order.
pub fn par_draws<T, F>(seed: u64, offset: u64, draws: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> Result<T> + Sync + Send,
{
    (0..draws as u64).into_par_iter().map(|k| f(&mut stream_rng(seed, offset + k))).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityConfig {
    pub n: usize,
    pub mu: f64,
    pub sigma: f64,
    pub draws: usize,
    pub bins: usize,
    pub seed: u64,
    /// Kernel size used for the prediction; anything other than `n` is a
    /// negative control, and the report then passes only if the fit is rejected.
    pub kernel_n: Option<usize>,
}

impl DensityConfig {
    pub fn new(n: usize, mu: f64, sigma: f64, draws: usize, bins: usize, seed: u64) -> Self {
        Self { n, mu, sigma, draws, bins, seed, kernel_n: None }
    }

    pub fn mismatched(self) -> Self {
        Self { kernel_n: Some(self.n + 1), ..self }
    }

    fn is_control(&self) -> bool {
        self.kernel_n.is_some_and(|m| m != self.n)
    }
}

/// Pooled eigenvalue histogram of the bordered ensemble against
/// `draws · ∫_bin K(x,x) dx`, with one extra cell for everything outside the
/// binned range.
pub fn density_experiment(cfg: &DensityConfig) -> Result<ExperimentReport> {
    if cfg.n == 0 || cfg.draws == 0 || cfg.bins < 2 {
        return Err(invalid("density experiment needs n >= 1, draws >= 1 and bins >= 2"));
    }
    let kernel = Kernel::new(&KernelSpec::auto(cfg.kernel_n.unwrap_or(cfg.n), cfg.mu, cfg.sigma)?)?;
    let half = (2.0 * (cfg.n + 1) as f64).sqrt() + cfg.mu.abs() + 3.0 * cfg.sigma + 3.0;
    let template = Histogram::uniform(-half, half, cfg.bins)?;

    let spectra = par_draws(cfg.seed, 0, cfg.draws, |rng| {
        sample_bordered_r1_tridiagonal(cfg.n, cfg.mu, cfg.sigma, rng)?.spectrum()
    })?;
    let mut hist = template.clone();
    for s in &spectra {
        hist.extend(s.values().iter().copied());
    }

    let draws = cfg.draws as f64;
    let mut expected: Vec<f64> = hist
        .edges()
        .windows(2)
        .map(|w| draws * MappedRule::new(8, w[0], w[1]).integrate(|x| kernel.density(x)))
        .collect();
    let inside: f64 = expected.iter().sum();
    let mut observed: Vec<f64> = hist.counts().iter().map(|&c| c as f64).collect();
    observed.push(hist.outside() as f64);
    expected.push((draws * (cfg.n + 1) as f64 - inside).max(0.0));
    let chi = chi_square(&observed, &expected, 5.0)?;

    let tolerance = if cfg.is_control() {
        Tolerance::new("p_value", Check::Below(1e-6))
    } else {
        Tolerance::new("p_value", Check::Above(0.01))
    };
    ExperimentReport::new(
        if cfg.is_control() { "density_negative_control" } else { "density" },
        cfg.seed,
        cfg,
        &[
            ("chi2", chi.statistic),
            ("dof", chi.dof as f64),
            ("p_value", chi.p_value),
            ("bins_used", chi.bins_used as f64),
            ("kernel_mass_in_range", inside / draws),
            ("outside", hist.outside() as f64),
        ],
        tolerance,
    )
}

/// Grid of `(c, σ²)` points; `μ = c √(n/2)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseGrid {
    pub c: Vec<f64>,
    pub sigma2: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhaseRow {
    pub c: f64,
    pub sigma2: f64,
    pub mu: f64,
    pub separation: Separation,
    pub largest_mean: f64,
    pub largest_std: f64,
    pub largest_se: f64,
    pub smallest_mean: f64,
    pub smallest_std: f64,
    pub smallest_se: f64,
    /// Outlier location when separated, otherwise the edge `±√(2n)`.
    pub predicted_largest: f64,
    pub predicted_smallest: f64,
    /// Mean extreme eigenvalue on the soft-edge scale, measured outward.
    pub gap_largest: f64,
    pub gap_smallest: f64,
}

/// Interpolated σ² at which the largest-eigenvalue gap statistic first turns
/// positive along a line of constant `c`, next to the predicted `2 - c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryPoint {
    pub c: f64,
    pub sigma2: f64,
    pub predicted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseScan {
    pub n: usize,
    pub draws: usize,
    pub seed: u64,
    pub rows: Vec<PhaseRow>,
    pub boundary: Vec<BoundaryPoint>,
}

/// Statistics of the extreme eigenvalues at one phase point.
pub fn phase_point(point: PhasePoint, n: usize, draws: usize, seed: u64, offset: u64) -> Result<PhaseRow> {
    if n == 0 || draws < 2 {
        return Err(invalid("phase point needs n >= 1 and at least two draws"));
    }
    let mu = point.mu(n);
    let sigma = point.sigma2.sqrt();
    let extremes = par_draws(seed, offset, draws, |rng| {
        let t = sample_bordered_r1_tridiagonal(n, mu, sigma, rng)?;
        Ok((t.largest(), t.smallest()))
    })?;
    let (big, small): (Vec<f64>, Vec<f64>) = extremes.into_iter().unzip();
    let (largest_mean, largest_std, largest_se) = mean_std_se(&big);
    let (smallest_mean, smallest_std, smallest_se) = mean_std_se(&small);
    let separation = classify(point);
    let edge = (2.0 * n as f64).sqrt();
    let predicted_largest =
        if separation.largest() { outlier_location(point, n, Side::Largest)? } else { edge };
    let predicted_smallest =
        if separation.smallest() { outlier_location(point, n, Side::Smallest)? } else { -edge };
    let map = EdgeMap::new(n as f64)?;
    Ok(PhaseRow {
        c: point.c,
        sigma2: point.sigma2,
        mu,
        separation,
        largest_mean,
        largest_std,
        largest_se,
        smallest_mean,
        smallest_std,
        smallest_se,
        predicted_largest,
        predicted_smallest,
        gap_largest: map.scale(largest_mean),
        gap_smallest: map.scale(-smallest_mean),
    })
}

pub fn phase_scan(grid: &PhaseGrid, n: usize, draws: usize, seed: u64) -> Result<PhaseScan> {
    if grid.c.is_empty() || grid.sigma2.is_empty() {
        return Err(invalid("phase grid needs at least one c and one sigma^2"));
    }
    let mut rows = Vec::with_capacity(grid.c.len() * grid.sigma2.len());
    for &c in &grid.c {
        for &s2 in &grid.sigma2 {
            let offset = (rows.len() * draws) as u64;
            rows.push(phase_point(PhasePoint::new(c, s2)?, n, draws, seed, offset)?);
        }
    }
    let boundary = grid
        .c
        .iter()
        .filter_map(|&c| {
            let mut line: Vec<&PhaseRow> = rows.iter().filter(|r| r.c == c).collect();
            line.sort_by(|a, b| a.sigma2.total_cmp(&b.sigma2));
            line.windows(2).find(|w| w[0].gap_largest <= 0.0 && w[1].gap_largest > 0.0).map(|w| {
                let t = -w[0].gap_largest / (w[1].gap_largest - w[0].gap_largest);
                BoundaryPoint { c, sigma2: w[0].sigma2 + t * (w[1].sigma2 - w[0].sigma2), predicted: 2.0 - c }
            })
        })
        .collect();
    Ok(PhaseScan { n, draws, seed, rows, boundary })
}

/// Reference law for the scaled largest eigenvalue.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeReference {
    /// Fredholm determinant of the deformed Airy kernel at the tuning's `s`.
    Deformed,
    /// Fredholm determinant of the plain Airy kernel.
    PureAiry,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeExperimentConfig {
    pub n: usize,
    pub tuning: EdgeTuning,
    pub draws: usize,
    pub seed: u64,
    pub reference: EdgeReference,
    pub ks_bound: f64,
    pub grid_lo: f64,
    pub grid_hi: f64,
    pub grid_step: f64,
    pub fredholm: FredholmConfig,
}

impl EdgeExperimentConfig {
    pub fn new(n: usize, tuning: EdgeTuning, draws: usize, seed: u64) -> Self {
        Self {
            n,
            tuning,
            draws,
            seed,
            reference: EdgeReference::Deformed,
            ks_bound: 0.05,
            grid_lo: -8.0,
            grid_hi: 8.0,
            grid_step: 0.02,
            fredholm: FredholmConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdfRow {
    pub x: f64,
    pub empirical: f64,
    pub predicted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgeExperiment {
    pub report: ExperimentReport,
    /// Scaled largest eigenvalues, ascending.
    pub samples: Vec<f64>,
    pub cdf: Vec<CdfRow>,
}

/// Empirical law of the scaled largest eigenvalue at an edge tuning against
/// the Fredholm-determinant prediction.
pub fn edge_fluctuation_experiment(cfg: &EdgeExperimentConfig) -> Result<EdgeExperiment> {
    if cfg.n == 0 || cfg.draws == 0 {
        return Err(invalid("edge experiment needs n >= 1 and draws >= 1"));
    }
    let (mu, sigma) = cfg.tuning.params(cfg.n);
    let map = EdgeMap::new(cfg.n as f64)?;
    let mut samples = par_draws(cfg.seed, 0, cfg.draws, |rng| {
        Ok(map.scale(sample_bordered_r1_tridiagonal(cfg.n, mu, sigma, rng)?.largest()))
    })?;
    samples.sort_by(f64::total_cmp);

    let s = cfg.tuning.s();
    let table = match cfg.reference {
        EdgeReference::Deformed => CdfTable::new(s, cfg.grid_lo, cfg.grid_hi, cfg.grid_step, &cfg.fredholm)?,
        EdgeReference::PureAiry => CdfTable::airy(cfg.grid_lo, cfg.grid_hi, cfg.grid_step, &cfg.fredholm)?,
    };
    let ks = ks_one_sample(&samples, |x| table.cdf(x))?;
    let total = samples.len() as f64;
    let cdf = table
        .values
        .iter()
        .enumerate()
        .map(|(k, &predicted)| {
            let x = table.lo + k as f64 * table.step;
            let below = samples.partition_point(|&v| v <= x);
            CdfRow { x, empirical: below as f64 / total, predicted }
        })
        .collect();
    let (mean, std, _) = mean_std_se(&samples);
    let report = ExperimentReport::new(
        "edge_fluctuation",
        cfg.seed,
        &(cfg, ("mu", mu), ("sigma", sigma), ("s", s)),
        &[("ks", ks.statistic), ("ks_p_value", ks.p_value), ("mean", mean), ("std", std)],
        Tolerance::new("ks", Check::Below(cfg.ks_bound)),
    )?;
    Ok(EdgeExperiment { report, samples, cdf })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BorderConfig {
    pub n: usize,
    pub mu: f64,
    pub sigma: f64,
    pub draws: usize,
    pub seed: u64,
}

/// Borders one fixed GUE core directly and in diagonalized form, then
/// compares each ordered eigenvalue by a two-sample KS test. The report
/// carries the smallest p-value.
pub fn border_equivalence_experiment(cfg: &BorderConfig) -> Result<ExperimentReport> {
    if cfg.n == 0 || cfg.draws == 0 {
        return Err(invalid("border equivalence needs n >= 1 and draws >= 1"));
    }
    let core = sample_gue(cfg.n, &mut stream_rng(cfg.seed, u64::MAX));
    let spectra = |diagonalized: bool, offset: u64| {
        par_draws(cfg.seed, offset, cfg.draws, |rng| {
            let m = if diagonalized {
                border_diagonalized(&core, cfg.mu, cfg.sigma, rng)?
            } else {
                border_once(&core, cfg.mu, cfg.sigma, rng)?
            };
            Ok(eigenvalues(&m)?.into_vec())
        })
    };
    let full = spectra(false, 0)?;
    let diag = spectra(true, cfg.draws as u64)?;
    let mut stats = Vec::new();
    let mut min_p = 1.0f64;
    let names: Vec<String> = (0..=cfg.n).map(|k| format!("ks_p_value_{k}")).collect();
    for k in 0..=cfg.n {
        let a: Vec<f64> = full.iter().map(|v| v[k]).collect();
        let b: Vec<f64> = diag.iter().map(|v| v[k]).collect();
        let r = ks_two_sample(&a, &b)?;
        min_p = min_p.min(r.p_value);
        stats.push(r.p_value);
    }
    let mut pairs: Vec<(&str, f64)> = names.iter().map(String::as_str).zip(stats).collect();
    pairs.push(("min_p_value", min_p));
    ExperimentReport::new(
        "border_equivalence",
        cfg.seed,
        cfg,
        &pairs,
        Tolerance::new("min_p_value", Check::Above(0.01)),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionalConfig {
    /// Eigenvalue of the fixed 1×1 core.
    pub a: f64,
    pub mu: f64,
    pub sigma: f64,
    pub draws: usize,
    pub bins: usize,
    pub seed: u64,
}

/// Histogram of the larger eigenvalue after bordering the 1×1 core `[a]`
/// against the marginal of the exact conditional density.
pub fn conditional_density_experiment(cfg: &ConditionalConfig) -> Result<ExperimentReport> {
    if cfg.draws == 0 || cfg.bins < 2 {
        return Err(invalid("conditional experiment needs draws >= 1 and bins >= 2"));
    }
    let core = HermitianMatrix::from_real_diagonal(&[cfg.a]);
    let core_spec = Spectrum::new(vec![cfg.a])?;
    let reach = cfg.mu.abs() + 8.0 * cfg.sigma + 4.0;
    let mut hist = Histogram::uniform(cfg.a, cfg.a + reach, cfg.bins)?;
    let tops = par_draws(cfg.seed, 0, cfg.draws, |rng| {
        Ok(eigenvalues(&border_once(&core, cfg.mu, cfg.sigma, rng)?)?.largest())
    })?;
    hist.extend(tops);

    let pdf = |l1: f64, l2: f64| joint_pdf_r1(&Spectrum::new(vec![l1, l2])?, &core_spec, cfg.mu, cfg.sigma);
    let lower = MappedRule::composite(16, 8, cfg.a - reach, cfg.a);
    let marginal = |l1: f64| -> Result<f64> {
        lower.nodes.iter().zip(&lower.weights).map(|(&l2, &w)| Ok(w * pdf(l1, l2)?)).sum()
    };
    let expected = hist
        .edges()
        .windows(2)
        .map(|w| {
            let rule = MappedRule::new(8, w[0], w[1]);
            let mut acc = 0.0;
            for (&x, &wt) in rule.nodes.iter().zip(&rule.weights) {
                acc += wt * marginal(x)?;
            }
            Ok(cfg.draws as f64 * acc)
        })
        .collect::<Result<Vec<f64>>>()?;
    let observed: Vec<f64> = hist.counts().iter().map(|&c| c as f64).collect();
    let chi = chi_square(&observed, &expected, 5.0)?;
    ExperimentReport::new(
        "conditional_density",
        cfg.seed,
        cfg,
        &[
            ("chi2", chi.statistic),
            ("dof", chi.dof as f64),
            ("p_value", chi.p_value),
            ("outside", hist.outside() as f64),
        ],
        Tolerance::new("p_value", Check::Above(0.01)),
    )
}

/// `∫ p_GUE(a) ∫∫_{λ₁ > a > λ₂} p(λ | a) dλ da` for a 1×1 core, by nested
/// adaptive quadrature. Equals 1 when the conditional density is normalized.
pub fn conditional_normalization(mu: f64, sigma: f64) -> Result<f64> {
    let reach = mu.abs() + 10.0 * sigma + 4.0;
    let inner = |a: f64| -> Result<f64> {
        let core = Spectrum::new(vec![a])?;
        let mut failure = None;
        let v = adaptive(
            |l1: f64| {
                adaptive(
                    |l2: f64| {
                        Spectrum::new(vec![l1, l2])
                            .and_then(|l| joint_pdf_r1(&l, &core, mu, sigma))
                            .unwrap_or(f64::NAN)
                    },
                    a - reach,
                    a,
                    1e-14,
                    1e-12,
                )
                .unwrap_or_else(|e| {
                    failure = Some(e);
                    f64::NAN
                })
            },
            a,
            a + reach,
            1e-13,
            1e-11,
        )?;
        match failure {
            Some(e) => Err(e),
            None => Ok(v),
        }
    };
    let mut failure = None;
    let total = adaptive(
        |a: f64| {
            gue_ordered_pdf(&[a])
                * inner(a).unwrap_or_else(|e| {
                    failure = Some(e);
                    f64::NAN
                })
        },
        -7.0,
        7.0,
        1e-12,
        1e-11,
    )?;
    match failure {
        Some(e) => Err(e),
        None => Ok(total),
    }
}
