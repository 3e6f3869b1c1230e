//! The verification suite: eleven end-to-end checks, each reduced to a single
//! pass/fail line. Tolerances are fixed here; `Mode::Quick` only shrinks the
//! Monte Carlo draw counts.

use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::coefficients::{build_coeffs, gamma_finite, gamma_p, seed_alpha, seed_beta, GammaKind, GammaLimits};
use crate::edge::{finite_to_edge_convergence, EdgeTuning, PhasePoint};
use crate::error::Result;
use crate::experiments::{
    border_equivalence_experiment, conditional_density_experiment, conditional_normalization, density_experiment,
    edge_fluctuation_experiment, phase_point, BorderConfig, ConditionalConfig, DensityConfig, EdgeExperimentConfig,
};
use crate::kernel::{gram_check, kernel_gue, kernel_mu0, kernel_sigma1, kernel_sigma1_closed, Kernel, KernelPath, KernelSpec};
use crate::quad::{adaptive, panels_doubling};
use crate::scaled::Scaled;
use crate::specfun::{airy, airy_ai, hermite, plancherel_rotach, plancherel_rotach_limit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Quick,
    Full,
}

impl Mode {
    fn draws(self, full: usize) -> usize {
        match self {
            Self::Full => full,
            Self::Quick => (full / 5).max(1000),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionResult {
    pub id: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{tag}] {:>2} {:<28} {} ({:.1}s)", self.id, self.name, self.detail, self.seconds)
    }
}

/// Verdict and a one-line summary of the measured values.
type Outcome = Result<(bool, String)>;

const GRID5: [f64; 5] = [-2.0, -0.9, 0.0, 0.7, 1.8];

pub const CRITERIA: [(u8, &str); 11] = [
    (1, "border equivalence"),
    (2, "conditional density"),
    (3, "kernel trace"),
    (4, "reproducing property"),
    (5, "path coherence"),
    (6, "coefficients"),
    (7, "phase diagram"),
    (8, "edge universality"),
    (9, "gamma limits"),
    (10, "special functions"),
    (11, "negative control"),
];

/// Runs one criterion by id. Unknown ids are reported as failures.
pub fn run_criterion(id: u8, mode: Mode, seed: u64) -> CriterionResult {
    let name = CRITERIA.iter().find(|c| c.0 == id).map_or("unknown", |c| c.1);
    let seed = seed.wrapping_add(1000 * id as u64);
    let start = Instant::now();
    let outcome = match id {
        1 => border_equivalence(mode, seed),
        2 => conditional_density(mode, seed),
        3 => kernel_trace(),
        4 => reproducing(),
        5 => path_coherence(),
        6 => coefficients(),
        7 => phase_diagram(seed),
        8 => edge_universality(mode, seed),
        9 => gamma_limits(),
        10 => special_functions(),
        11 => negative_control(mode, seed),
        _ => Ok((false, format!("no criterion {id}"))),
    };
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult { id, name: name.to_string(), passed, detail, seconds: start.elapsed().as_secs_f64() }
}

pub fn run_all(mode: Mode, seed: u64) -> Vec<CriterionResult> {
    CRITERIA.iter().map(|&(id, _)| run_criterion(id, mode, seed)).collect()
}

fn border_equivalence(mode: Mode, seed: u64) -> Outcome {
    let cfg = BorderConfig { n: 3, mu: 2.0, sigma: 1.3, draws: mode.draws(100_000), seed };
    let r = border_equivalence_experiment(&cfg)?;
    let p = r.statistic("min_p_value").unwrap_or(f64::NAN);
    Ok((r.passed, format!("min KS p = {p:.3} over 4 ordered eigenvalues (need > 0.01)")))
}

fn conditional_density(mode: Mode, seed: u64) -> Outcome {
    let cfg = ConditionalConfig { a: 0.3, mu: 0.5, sigma: 1.2, draws: mode.draws(100_000), bins: 40, seed };
    let r = conditional_density_experiment(&cfg)?;
    let p = r.statistic("p_value").unwrap_or(f64::NAN);
    let norm = conditional_normalization(cfg.mu, cfg.sigma)?;
    let ok = r.passed && (norm - 1.0).abs() <= 1e-8;
    Ok((ok, format!("chi2 p = {p:.3} (need > 0.01), normalization - 1 = {:.1e} (need <= 1e-8)", norm - 1.0)))
}

fn half_width(size: usize, mu: f64) -> f64 {
    (2.0 * size as f64 + 1.0).sqrt() + 2.0 * mu.abs() + 10.0
}

fn kernel_trace() -> Outcome {
    let specs = [
        KernelSpec::new(10, 0.0, 1.0, KernelPath::Gue)?,
        KernelSpec::new(10, 0.0, 1.5f64.sqrt(), KernelPath::Mu0)?,
        KernelSpec::new(10, 1.0, 1.0, KernelPath::Sigma1)?,
        KernelSpec::new(10, 0.7, 1.5f64.sqrt(), KernelPath::General)?,
    ];
    let mut worst: f64 = 0.0;
    for spec in specs {
        let k = Kernel::new(&spec)?;
        let l = half_width(spec.size(), spec.mu);
        let t = panels_doubling(|x| k.density(x), -l, l, 1e-11, 1e-14)?;
        worst = worst.max((t - spec.size() as f64).abs());
    }
    Ok((worst <= 1e-6, format!("max |trace - (N+1)| = {worst:.1e} on 4 paths, N = 10 (need <= 1e-6)")))
}

fn reproducing() -> Outcome {
    let kernels = [
        Kernel::new(&KernelSpec::new(8, 0.7, 1.5f64.sqrt(), KernelPath::General)?)?,
        Kernel::new(&KernelSpec::new(8, 1.0, 1.0, KernelPath::Sigma1)?)?,
    ];
    let mut worst: f64 = 0.0;
    for k in &kernels {
        let l = half_width(9, k.spec().mu);
        for &x in &GRID5 {
            for &y in &GRID5 {
                let r = panels_doubling(|z| k.eval(x, z) * k.eval(z, y), -l, l, 1e-11, 1e-14)?;
                worst = worst.max((r - k.eval(x, y)).abs());
            }
        }
    }
    Ok((worst <= 1e-6, format!("max |K*K - K| = {worst:.1e} on 5x5 grid, N = 8 (need <= 1e-6)")))
}

/// `(1/2πi)∮ e^{-yz - z²/4} / (z^N (z + 2μ)) dz` on a circle enclosing both poles.
fn contour_gamma(n: usize, mu: f64, y: f64) -> f64 {
    let radius = 2.0 * mu.abs() + 1.5;
    let m = 512;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in 0..m {
        let z = Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / m as f64);
        acc += z * (-y * z - z * z / 4.0).exp() / (z.powu(n as u32) * (z + 2.0 * mu));
    }
    (acc / m as f64).re
}

fn path_coherence() -> Outcome {
    let mut mu0_gap: f64 = 0.0;
    for (n, s2) in [(6usize, 1.5f64), (7, 0.6), (10, 0.2)] {
        let general = Kernel::new(&KernelSpec::new(n, 0.0, s2.sqrt(), KernelPath::General)?)?;
        for &x in &GRID5 {
            for &y in &GRID5 {
                mu0_gap = mu0_gap.max((kernel_mu0(n, s2.sqrt(), x, y)? - general.eval(x, y)).abs());
            }
        }
    }

    let (n, mu) = (8, 0.5);
    let s1 = Kernel::new(&KernelSpec::new(n, mu, 1.0, KernelPath::Sigma1)?)?;
    let mut continuity: f64 = 0.0;
    for s2 in [1.0001f64, 0.9999] {
        let g = Kernel::new(&KernelSpec::new(n, mu, s2.sqrt(), KernelPath::General)?)?;
        for i in 0..=16 {
            for j in 0..=16 {
                let (x, y) = (-4.0 + 0.5 * i as f64, -4.0 + 0.5 * j as f64);
                let a = s1.eval(x, y);
                let scale = a.abs().max((s1.density(x) * s1.density(y)).abs().sqrt());
                continuity = continuity.max((a - g.eval(x, y)).abs() / scale);
            }
        }
    }

    let mut gue_gap: f64 = 0.0;
    let unit = Kernel::new(&KernelSpec::new(5, 0.0, 1.0, KernelPath::General)?)?;
    for &x in &GRID5 {
        for &y in &GRID5 {
            let g = kernel_gue(6, x, y);
            gue_gap = gue_gap.max((unit.eval(x, y) - g).abs()).max((kernel_sigma1(5, 0.0, x, y)? - g).abs());
        }
    }

    let mut dual: f64 = 0.0;
    for (n, mu, x, y) in [(6usize, 1.2f64, 0.3f64, -0.5f64), (6, -0.9, 1.1, 2.0), (3, 2.5, -1.0, 0.4)] {
        let a = kernel_sigma1(n, mu, x, y)?;
        dual = dual.max(((a - kernel_sigma1_closed(n, mu, x, y)?) / a).abs());
    }

    let (n, mu) = (4usize, 0.8f64);
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let mut contour: f64 = 0.0;
    for &x in &GRID5 {
        for &y in &GRID5 {
            let c = kernel_gue(n, x, y)
                + sign / std::f64::consts::PI.sqrt() * (-(x * x + y * y) / 2.0).exp() * hermite(n, x) * contour_gamma(n, mu, y);
            let k = kernel_sigma1(n, mu, x, y)?;
            contour = contour.max((k - c).abs() / k.abs().max(1e-2));
        }
    }

    let ok = mu0_gap <= 1e-9 && continuity <= 1e-3 && gue_gap <= 1e-10 && dual <= 1e-8 && contour <= 1e-8;
    Ok((
        ok,
        format!(
            "mu0/general {mu0_gap:.1e}, continuity {continuity:.1e}, GUE(N+1) {gue_gap:.1e}, dual {dual:.1e}, contour {contour:.1e}"
        ),
    ))
}

fn rel(a: Scaled, b: Scaled) -> f64 {
    (a.sub(&b) / b).to_f64().abs()
}

fn coefficients() -> Outcome {
    let mut seeds: f64 = 0.0;
    for (mu, s2) in [(0.7f64, 1.5f64), (0.4, 0.5), (-1.1, 0.8)] {
        let sigma = s2.sqrt();
        let t = build_coeffs(mu, sigma, 6)?;
        for p in 0..=6 {
            seeds = seeds.max(rel(t.tilde_beta(p), seed_beta(mu, sigma, p)?));
            seeds = seeds.max(rel(t.tilde_alpha(p), seed_alpha(mu, sigma, p)?));
        }
    }

    let ln_fact = |k: usize| ln_gamma(k as f64 + 1.0);
    let ln_sqrt_pi = 0.5 * std::f64::consts::PI.ln();
    let mut closed: f64 = 0.0;
    let mut parity = true;
    for s2 in [0.5f64, 1.5, 1.9] {
        let sigma = s2.sqrt();
        let t = build_coeffs(0.0, sigma, 41)?;
        let sign = |p: usize| if s2 < 1.0 && p % 2 == 1 { -1.0 } else { 1.0 };
        for p in 0..=20 {
            let ln_pow = p as f64 * (s2 - 1.0).abs().ln();
            let a = Scaled::from_ln(sign(p), ln_sqrt_pi + 2.0 * p as f64 * 2f64.ln() + ln_fact(p) + s2.ln() + ln_pow);
            let b = Scaled::from_ln(sign(p), ln_sqrt_pi + ln_fact(2 * p) - ln_fact(p) + sigma.ln() + ln_pow);
            closed = closed.max(rel(t.tilde_alpha(2 * p + 1), a)).max(rel(t.tilde_beta(2 * p), b));
            parity &= t.tilde_alpha(2 * p).is_zero() && t.tilde_beta(2 * p + 1).is_zero();
        }
    }

    let (mu, sigma) = (0.5, 1.3f64.sqrt());
    let spec = KernelSpec::new(4, mu, sigma, KernelPath::General)?;
    let gram = gram_check(&spec, &build_coeffs(mu, sigma, 6)?)?;

    let ok = seeds <= 1e-8 && closed <= 1e-10 && parity && gram.off_block_max <= 1e-8;
    Ok((
        ok,
        format!(
            "seeds {seeds:.1e}, mu=0 closed forms {closed:.1e}, parity {}, Gram off-block {:.1e}",
            if parity { "exact" } else { "broken" },
            gram.off_block_max
        ),
    ))
}

fn phase_diagram(seed: u64) -> Outcome {
    let n = 400;
    let r = (n as f64 / 2.0).sqrt();
    let row = |c: f64, s2: f64, k: u64| phase_point(PhasePoint::new(c, s2)?, n, 400, seed + k, 0);
    let sep = row(0.0, 3.0, 0)?;
    let e1 = (sep.largest_mean - r * 3.0 / 2f64.sqrt()).abs() / (r * 3.0 / 2f64.sqrt());
    let spike = row(2.0, 1.0, 1)?;
    let e2 = (spike.largest_mean - r * 2.5).abs() / (r * 2.5);
    let bulk = row(0.0, 1.5, 2)?;
    let e3 = (bulk.largest_mean - (2.0 * n as f64).sqrt()).abs();
    let window = 5.0 * (n as f64).powf(-1.0 / 6.0);
    let ok = e1 <= 0.03 && e2 <= 0.03 && e3 <= window;
    Ok((ok, format!("rel errors {e1:.4}, {e2:.4} (need <= 0.03); bulk offset {e3:.3} (need <= {window:.3})")))
}

fn edge_universality(mode: Mode, seed: u64) -> Outcome {
    let draws = mode.draws(10_000);
    let unit = edge_fluctuation_experiment(&EdgeExperimentConfig::new(200, EdgeTuning::Sigma1 { s: 0.0 }, draws, seed))?;
    let mut cfg = EdgeExperimentConfig::new(200, EdgeTuning::Mu0 { s: 1.0 }, draws, seed + 1);
    cfg.ks_bound = 0.07;
    let centred = edge_fluctuation_experiment(&cfg)?;
    let (ka, kb) = (unit.report.statistic("ks").unwrap_or(f64::NAN), centred.report.statistic("ks").unwrap_or(f64::NAN));

    let ns = [50, 100, 200];
    let tunings = [
        EdgeTuning::Sigma1 { s: 0.5 },
        EdgeTuning::Mu0 { s: 1.0 },
        EdgeTuning::general(200, 1.0, 1.0, 0.0, 1.0)?,
    ];
    let mut monotone = true;
    for t in &tunings {
        let rows = finite_to_edge_convergence(t, 0.0, 0.0, &ns)?;
        monotone &= rows.windows(2).all(|w| w[1].deviation < w[0].deviation);
    }
    let ok = unit.report.passed && centred.report.passed && monotone;
    Ok((
        ok,
        format!(
            "KS sigma1 {ka:.4} (<= 0.05), mu0 {kb:.4} (<= 0.07, ratio {:.2}), deviations {}",
            kb / ka,
            if monotone { "decreasing" } else { "not decreasing" }
        ),
    ))
}

fn gamma_limits() -> Outcome {
    let (n, c, s2) = (2000usize, 1.0f64, 0.8f64);
    let mu = c * (n as f64 / 2.0).sqrt();
    let limits = GammaLimits::new(c, s2)?;
    let mut worst: f64 = 0.0;
    for which in [GammaKind::First, GammaKind::Second] {
        for q in 0..=10 {
            worst = worst.max((gamma_finite(mu, s2.sqrt(), n, q, which)? - gamma_p(&limits, q, which)).abs());
        }
    }
    Ok((worst <= 1e-2, format!("max |gamma_N - gamma_limit| = {worst:.2e} at N = 2000 (need <= 1e-2)")))
}

/// `∫_{-∞}^{-t} Ai` for large `t` by integrating by parts with `Ai'' = x Ai`.
fn airy_left_tail(t: f64) -> Result<f64> {
    let a = airy(-t)?;
    Ok(-a.ai_prime / t + a.ai / t.powi(2) + 2.0 * (a.ai_prime / t.powi(4) - 4.0 * a.ai / t.powi(5)))
}

fn special_functions() -> Outcome {
    let h = 1e-3;
    let d = |x: f64| airy(x).map(|v| v.ai_prime);
    let mut ode: f64 = 0.0;
    let mut x = -9.9;
    while x <= 10.0 {
        let dp = (d(x - 2.0 * h)? - 8.0 * d(x - h)? + 8.0 * d(x + h)? - d(x + 2.0 * h)?) / (12.0 * h);
        ode = ode.max((dp - x * airy_ai(x)).abs());
        x += 0.25;
    }

    let mut laplace: f64 = 0.0;
    for s in [0.0f64, 0.5, 1.0, 2.0] {
        let f = |t: f64| (s * t).exp() * airy_ai(t);
        let body = adaptive(f, -40.0, 0.0, 1e-12, 1e-12)? + adaptive(f, 0.0, 30.0, 1e-12, 1e-12)?;
        let tail = if s == 0.0 { airy_left_tail(40.0)? } else { 0.0 };
        let exact = (s.powi(3) / 3.0).exp();
        laplace = laplace.max(((body + tail) - exact).abs() / exact);
    }

    let err = |n: usize| -> Result<f64> { Ok((plancherel_rotach(n, 1.0) - plancherel_rotach_limit(n, 1.0)?).abs()) };
    let (e100, e400) = (err(100)?, err(400)?);
    let ok = ode <= 1e-9 && laplace <= 1e-6 && e400 < e100;
    Ok((ok, format!("ODE residual {ode:.1e}, Laplace-Airy {laplace:.1e}, edge asymptotic error {e100:.1e} -> {e400:.1e}")))
}

fn negative_control(mode: Mode, seed: u64) -> Outcome {
    let cfg = DensityConfig::new(10, 0.0, 1.5f64.sqrt(), mode.draws(100_000), 40, seed);
    let matched = density_experiment(&cfg)?;
    let wrong = density_experiment(&cfg.mismatched())?;
    let (pm, pw) = (matched.statistic("p_value").unwrap_or(f64::NAN), wrong.statistic("p_value").unwrap_or(f64::NAN));
    Ok((matched.passed && wrong.passed, format!("matched kernel p = {pm:.3} (> 0.01), N+1 kernel p = {pw:.1e} (< 1e-6)")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_criterion_fails() {
        let r = run_criterion(99, Mode::Quick, 0);
        assert!(!r.passed);
        assert!(r.to_string().starts_with("[FAIL]"));
    }

    #[test]
    fn quick_mode_shrinks_draws() {
        assert_eq!(Mode::Full.draws(100_000), 100_000);
        assert_eq!(Mode::Quick.draws(100_000), 20_000);
        assert_eq!(Mode::Quick.draws(2_000), 1_000);
    }
}
