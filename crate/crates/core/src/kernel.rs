//! Correlation kernels of the rank-one bordered ensemble at finite `N`.
//!
//! All paths share one representation. With `ψ_j` the orthonormal Hermite
//! functions and `N` the core size, the kernel of the `N + 1` eigenvalues is
//!
//! `K(x,y) = Σ_{j<N-1} ψ_j(x)ψ_j(y) + ψ_{N-1}(x) Σ_q γ¹_q ψ_{N-1+q}(y) + ψ_N(x) Σ_q γ²_q ψ_{N-1+q}(y)`,
//!
//! and the paths differ only in how the sequences `γ¹`, `γ²` are produced.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::coefficients::{
    build_coeffs, gamma_finite_direct, scaled_recurrence, seed_alpha, seed_beta, CoeffTable,
    GammaKind,
};
use crate::error::{invalid, unsupported, Error, Result};
use crate::linalg::det;
use crate::quad;
use crate::specfun::{ln_hermite_norm, psi_sequence};

const LN_SQRT_PI: f64 = 0.572_364_942_924_700_1;

/// Evaluation regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelPath {
    General,
    Sigma1,
    Mu0,
    Gue,
}

/// How the general path obtains its γ-coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GammaRoute {
    /// Exact starting values pushed through the scaled coefficient recurrence.
    #[default]
    Propagated,
    /// Wronskian ratios of stored coefficient-table entries. Only accurate
    /// while the table differences do not cancel (small `N`, moderate `μ`).
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Truncation {
    /// Stop once the bound on the neglected terms falls below this.
    pub eps_tail: f64,
    /// Hard cap on the Hermite index; `None` means `20 N + 2000`.
    pub p_max: Option<usize>,
}

impl Default for Truncation {
    fn default() -> Self {
        Self { eps_tail: 1e-12, p_max: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    pub n: usize,
    pub mu: f64,
    pub sigma: f64,
    pub path: KernelPath,
    #[serde(default)]
    pub truncation: Truncation,
    #[serde(default)]
    pub gamma_route: GammaRoute,
}

impl KernelSpec {
    pub fn new(n: usize, mu: f64, sigma: f64, path: KernelPath) -> Result<Self> {
        let spec = Self {
            n,
            mu,
            sigma,
            path,
            truncation: Truncation::default(),
            gamma_route: GammaRoute::default(),
        };
        spec.validate()?;
        Ok(spec)
    }

    /// Picks the most specific path for `(μ, σ)`.
    pub fn auto(n: usize, mu: f64, sigma: f64) -> Result<Self> {
        let path = match (mu == 0.0, sigma == 1.0) {
            (true, true) => KernelPath::Gue,
            (false, true) => KernelPath::Sigma1,
            (true, false) => KernelPath::Mu0,
            (false, false) => KernelPath::General,
        };
        Self::new(n, mu, sigma, path)
    }

    pub fn with_truncation(mut self, truncation: Truncation) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn with_gamma_route(mut self, route: GammaRoute) -> Self {
        self.gamma_route = route;
        self
    }

    /// Number of eigenvalues described by the kernel.
    pub fn size(&self) -> usize {
        self.n + 1
    }

    pub fn p_cap(&self) -> usize {
        self.truncation.p_max.unwrap_or(20 * self.n + 2000)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("core size N must be >= 1"));
        }
        if !self.mu.is_finite() {
            return Err(invalid("mu must be finite"));
        }
        if !(self.sigma > 0.0) || !self.sigma.is_finite() {
            return Err(invalid(format!("sigma must be > 0 (got {})", self.sigma)));
        }
        if !(self.truncation.eps_tail > 0.0) {
            return Err(invalid("eps_tail must be positive"));
        }
        let s2 = self.sigma * self.sigma;
        match self.path {
            KernelPath::General | KernelPath::Mu0 => {
                if s2 >= 2.0 {
                    return Err(Error::DivergenceDetected(format!(
                        "correction series diverge for sigma^2 >= 2 (sigma^2 = {s2})"
                    )));
                }
                // the unit-variance zero-mean point is served by the plain GUE
                if s2 == 1.0 && !(self.path == KernelPath::General && self.mu == 0.0) {
                    return Err(unsupported("sigma = 1 needs the sigma1 path"));
                }
                if self.path == KernelPath::Mu0 && self.mu != 0.0 {
                    return Err(invalid("mu0 path requires mu = 0"));
                }
            }
            KernelPath::Sigma1 => {
                if self.sigma != 1.0 {
                    return Err(invalid("sigma1 path requires sigma = 1"));
                }
            }
            KernelPath::Gue => {
                if self.mu != 0.0 || self.sigma != 1.0 {
                    return Err(invalid("gue path requires mu = 0 and sigma = 1"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KernelValue {
    pub x: f64,
    pub y: f64,
    pub value: f64,
}

/// A kernel with its coefficient sequences resolved, ready for evaluation.
#[derive(Debug, Clone)]
pub struct Kernel {
    spec: KernelSpec,
    gamma1: Vec<f64>,
    gamma2: Vec<f64>,
}

impl Kernel {
    /// Resolves the coefficient sequences; the `Table` route builds its own table.
    pub fn new(spec: &KernelSpec) -> Result<Self> {
        spec.validate()?;
        if spec.mu == 0.0 && spec.sigma == 1.0 {
            return Ok(Self { spec: *spec, gamma1: vec![1.0], gamma2: vec![0.0, 1.0] });
        }
        if spec.path == KernelPath::General && spec.gamma_route == GammaRoute::Table {
            let (g1, _) = propagate(spec)?;
            let table = build_coeffs(spec.mu, spec.sigma, spec.n + g1.len())?;
            return Self::with_coeffs(spec, &table);
        }
        let (gamma1, gamma2) = match spec.path {
            KernelPath::General => propagate(spec)?,
            KernelPath::Mu0 => mu0_sequences(spec)?,
            KernelPath::Sigma1 => sigma1_sequences(spec)?,
            KernelPath::Gue => (vec![1.0], vec![0.0, 1.0]),
        };
        Ok(Self { spec: *spec, gamma1, gamma2 })
    }

    /// General path with an explicit coefficient table. Under the `Table`
    /// route the γ's are Wronskian ratios of its entries; otherwise the table
    /// is only checked for consistency.
    pub fn with_coeffs(spec: &KernelSpec, coeffs: &CoeffTable) -> Result<Self> {
        spec.validate()?;
        if spec.path != KernelPath::General || spec.sigma == 1.0 {
            return Self::new(spec);
        }
        if coeffs.mu() != spec.mu || coeffs.sigma() != spec.sigma {
            return Err(invalid(format!(
                "coefficient table built for (mu, sigma) = ({}, {}), kernel wants ({}, {})",
                coeffs.mu(),
                coeffs.sigma(),
                spec.mu,
                spec.sigma
            )));
        }
        if coeffs.p_max() < spec.n {
            return Err(invalid("coefficient table must reach index N"));
        }
        let (g1, g2) = propagate(spec)?;
        if spec.gamma_route == GammaRoute::Propagated {
            return Ok(Self { spec: *spec, gamma1: g1, gamma2: g2 });
        }
        let q_max = g1.len() - 1;
        if spec.n - 1 + q_max > coeffs.p_max() {
            return Err(invalid(format!(
                "coefficient table reaches p = {} but the series needs p = {}",
                coeffs.p_max(),
                spec.n - 1 + q_max
            )));
        }
        let mut gamma1 = Vec::with_capacity(q_max + 1);
        let mut gamma2 = Vec::with_capacity(q_max + 1);
        for q in 0..=q_max {
            gamma1.push(gamma_finite_direct(coeffs, spec.n, q, GammaKind::First)?);
            gamma2.push(gamma_finite_direct(coeffs, spec.n, q, GammaKind::Second)?);
        }
        Ok(Self { spec: *spec, gamma1, gamma2 })
    }

    pub fn spec(&self) -> &KernelSpec {
        &self.spec
    }

    pub fn gamma1(&self) -> &[f64] {
        &self.gamma1
    }

    pub fn gamma2(&self) -> &[f64] {
        &self.gamma2
    }

    /// Highest Hermite index entering an evaluation.
    pub fn max_index(&self) -> usize {
        self.spec.n - 1 + self.gamma1.len().max(self.gamma2.len()) - 1
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let n = self.spec.n;
        let px = psi_sequence(n, x);
        let py = psi_sequence(self.max_index(), y);
        let mut k: f64 = px[..n - 1].iter().zip(&py).map(|(a, b)| a * b).sum();
        let s1: f64 = self.gamma1.iter().zip(&py[n - 1..]).map(|(g, p)| g * p).sum();
        let s2: f64 = self.gamma2.iter().zip(&py[n - 1..]).map(|(g, p)| g * p).sum();
        k += px[n - 1] * s1 + px[n] * s2;
        k
    }

    pub fn density(&self, x: f64) -> f64 {
        self.eval(x, x)
    }

    /// `det[K(x_j, x_l)]`.
    pub fn correlation(&self, points: &[f64]) -> f64 {
        let k = points.len();
        if k == 0 {
            return 1.0;
        }
        let mut m = vec![0.0; k * k];
        for (j, &xj) in points.iter().enumerate() {
            for (l, &xl) in points.iter().enumerate() {
                m[j * k + l] = self.eval(xj, xl);
            }
        }
        det(&m, k)
    }

    /// Evaluates on the tensor grid `xs × ys`, row-major in `x`.
    pub fn grid(&self, xs: &[f64], ys: &[f64]) -> Vec<KernelValue> {
        let pairs: Vec<(f64, f64)> =
            xs.iter().flat_map(|&x| ys.iter().map(move |&y| (x, y))).collect();
        pairs
            .into_par_iter()
            .map(|(x, y)| KernelValue { x, y, value: self.eval(x, y) })
            .collect()
    }
}

/// Decides where to stop a pair of sequences obeying
/// `g_{q+1} = a g_q + b g_{q-1}` with `|a|` non-increasing from here on:
/// with `r` the positive root of `r² = |a| r + |b|` and
/// `M = max(|g_q|, r |g_{q-1}|)`, every later term is at most `M r^k`.
fn tail_bound(a: f64, b: f64, pairs: [(f64, f64); 2]) -> Option<f64> {
    let (a, b) = (a.abs(), b.abs());
    let r = 0.5 * (a + (a * a + 4.0 * b).sqrt());
    if r >= 1.0 {
        return None;
    }
    let m: f64 = pairs
        .iter()
        .map(|&(cur, prev)| cur.abs().max(r * prev.abs()))
        .sum();
    Some(m * r / (1.0 - r))
}

fn propagate(spec: &KernelSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = spec.n;
    let s2 = spec.sigma * spec.sigma;
    let cap = spec.p_cap();
    let mut g1: Vec<f64> = vec![1.0, 0.0];
    let mut g2: Vec<f64> = vec![0.0, 1.0];
    let mut q = 1;
    loop {
        let p_next = n + q;
        let (a, b) = scaled_recurrence(spec.mu, s2, p_next);
        if let Some(bound) = tail_bound(a, b, [(g1[q], g1[q - 1]), (g2[q], g2[q - 1])]) {
            if bound <= spec.truncation.eps_tail {
                return Ok((g1, g2));
            }
        }
        if p_next > cap {
            return Err(Error::DivergenceDetected(format!(
                "correction series not converged by p = {cap} (N = {n}, mu = {}, sigma^2 = {s2})",
                spec.mu
            )));
        }
        let v1 = a * g1[q] + b * g1[q - 1];
        let v2 = a * g2[q] + b * g2[q - 1];
        if !v1.is_finite() || !v2.is_finite() {
            return Err(Error::DivergenceDetected(format!(
                "correction coefficients overflowed at p = {p_next}"
            )));
        }
        g1.push(v1);
        g2.push(v2);
        q += 1;
    }
}

/// Zero-mean sequences from the explicit odd/even coefficient formulas. Each
/// sequence starts at 1 and advances two indices at a time with factor
/// `(σ²-1)·√((j-1)/j)` on reaching index `j`.
fn mu0_sequences(spec: &KernelSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = spec.n;
    let b = spec.sigma * spec.sigma - 1.0;
    let cap = spec.p_cap();
    let mut g1: Vec<f64> = vec![1.0, 0.0];
    let mut g2: Vec<f64> = vec![0.0, 1.0];
    // g1 lives on even q (index N-1+q), g2 on odd q
    let mut q = 2;
    loop {
        let tail = 2.0 * (g1[q - 2].abs() + g2[q - 1].abs()) * b.abs() / (1.0 - b.abs());
        if tail <= spec.truncation.eps_tail {
            return Ok((g1, g2));
        }
        if n - 1 + q > cap {
            return Err(Error::DivergenceDetected(format!(
                "zero-mean series not converged by p = {cap}"
            )));
        }
        let j1 = (n - 1 + q) as f64;
        let j2 = j1 + 1.0;
        g1.push(g1[q - 2] * b * ((j1 - 1.0) / j1).sqrt());
        g1.push(0.0);
        g2.push(0.0);
        g2.push(g2[q - 1] * b * ((j2 - 1.0) / j2).sqrt());
        q += 2;
    }
}

/// Unit-variance sequences: `γ¹ = δ_{q,0}` and `γ²_{1+k} = (2μ)^k √(𝒩_N/𝒩_{N+k})`.
fn sigma1_sequences(spec: &KernelSpec) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = spec.n;
    let cap = spec.p_cap();
    let mut g2: Vec<f64> = vec![0.0, 1.0];
    let mut p = n;
    loop {
        let a = (spec.mu * (2.0 / (p + 1) as f64).sqrt()).abs();
        if a < 1.0 && g2[g2.len() - 1].abs() * a / (1.0 - a) <= spec.truncation.eps_tail {
            return Ok((vec![1.0], g2));
        }
        if p >= cap {
            return Err(Error::DivergenceDetected(format!(
                "unit-variance series not converged by p = {cap}"
            )));
        }
        p += 1;
        let next = g2[g2.len() - 1] * spec.mu * (2.0 / p as f64).sqrt();
        g2.push(next);
    }
}

/// Plain GUE kernel `Σ_{j<n} ψ_j(x)ψ_j(y)`.
pub fn kernel_gue(n: usize, x: f64, y: f64) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let px = psi_sequence(n - 1, x);
    let py = psi_sequence(n - 1, y);
    px.iter().zip(&py).map(|(a, b)| a * b).sum()
}

/// General-path kernel with an explicit coefficient table. The unit-variance
/// zero-mean point is the plain GUE of size `N + 1`.
pub fn kernel_bordered(spec: &KernelSpec, coeffs: &CoeffTable, x: f64, y: f64) -> Result<f64> {
    if spec.mu == 0.0 && spec.sigma == 1.0 {
        return Ok(kernel_gue(spec.n + 1, x, y));
    }
    Ok(Kernel::with_coeffs(spec, coeffs)?.eval(x, y))
}

pub fn kernel_sigma1(n: usize, mu: f64, x: f64, y: f64) -> Result<f64> {
    if mu == 0.0 {
        return Ok(kernel_gue(n + 1, x, y));
    }
    Ok(Kernel::new(&KernelSpec::new(n, mu, 1.0, KernelPath::Sigma1)?)?.eval(x, y))
}

/// Unit-variance kernel through the complementary finite sum,
/// `K_N(x,y) + e^{-(x²+y²)/2} H_N(x) (2μ)^{-N} (e^{2μy-μ²}/√π - Σ_{p<N} (2μ)^p H_p(y)/𝒩_p)`.
/// The `1/√π` comes from `Σ_p (2μ)^p H_p(y)/𝒩_p = e^{2μy-μ²}/√π`.
///
/// Suffers cancellation when `|2μ|` is small compared with the Hermite scale;
/// [`kernel_sigma1`] uses the convergent series instead.
pub fn kernel_sigma1_closed(n: usize, mu: f64, x: f64, y: f64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("core size N must be >= 1"));
    }
    if mu == 0.0 {
        return Ok(kernel_gue(n + 1, x, y));
    }
    let two_mu = 2.0 * mu;
    let ln_2mu = two_mu.abs().ln();
    let px = psi_sequence(n, x);
    let py = psi_sequence(n - 1, y);
    let half_ln_nn = 0.5 * ln_hermite_norm(n);
    // e^{-y²/2} e^{2μy-μ²} √(𝒩_N/π) (2μ)^{-N}
    let sign_n = if two_mu < 0.0 && n % 2 == 1 { -1.0 } else { 1.0 };
    let ln_lead = -0.5 * y * y + two_mu * y - mu * mu + half_ln_nn - LN_SQRT_PI - n as f64 * ln_2mu;
    let lead = sign_n * ln_lead.exp();
    let mut sum = 0.0;
    for (p, &psi) in py.iter().enumerate() {
        // (2μ)^{p-N} √(𝒩_N/𝒩_p) ψ_p(y)
        let k = n - p;
        let sign = if two_mu < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
        let mag = (half_ln_nn - 0.5 * ln_hermite_norm(p) - k as f64 * ln_2mu).exp();
        sum += sign * mag * psi;
    }
    Ok(kernel_gue(n, x, y) + px[n] * (lead - sum))
}

/// Kernel with the zero-mean explicit coefficients.
pub fn kernel_mu0(n: usize, sigma: f64, x: f64, y: f64) -> Result<f64> {
    Ok(Kernel::new(&KernelSpec::new(n, 0.0, sigma, KernelPath::Mu0)?)?.eval(x, y))
}

pub fn density(spec: &KernelSpec, x: f64) -> Result<f64> {
    Ok(Kernel::new(spec)?.density(x))
}

pub fn correlations(spec: &KernelSpec, points: &[f64]) -> Result<f64> {
    Ok(Kernel::new(spec)?.correlation(points))
}

/// Quadrature check of the biorthogonal Gram matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramReport {
    pub n: usize,
    /// Row-major `(N+1) × (N+1)` matrix `∫ e^{-x²} ξ_j η_k`.
    pub matrix: Vec<f64>,
    /// Largest relative deviation of the leading diagonal from `𝒩_j`.
    pub diagonal_rel_err: f64,
    /// Largest relative deviation of the trailing block, rows divided by
    /// `𝒩_{N-1}` and `𝒩_N`, from `[[β_{N-1}, α_{N-1}], [β_N, α_N]]`.
    pub block_rel_err: f64,
    /// Largest off-block entry after dividing row `j` by `𝒩_j`.
    pub off_block_max: f64,
}

/// Forms the Gram matrix of `ξ_j = H_j` against `η_k = H_k` (`k < N-1`) and
/// the two tails `η_{N-1} = Σ_{p≥N-1} β_p H_p`, `η_N = Σ_{p≥N-1} α_p H_p`.
/// The tails are integrated as the full generating functions minus their
/// leading Hermite terms, so nothing here reuses the recurrences.
pub fn gram_check(spec: &KernelSpec, coeffs: &CoeffTable) -> Result<GramReport> {
    spec.validate()?;
    let n = spec.n;
    if n > 12 {
        return Err(invalid("gram_check is meant for N <= 12"));
    }
    if coeffs.p_max() < n || coeffs.mu() != spec.mu || coeffs.sigma() != spec.sigma {
        return Err(invalid("coefficient table does not match the kernel spec"));
    }
    let dim = n + 1;
    let half = (2.0 * dim as f64 + 1.0).sqrt() + 12.0;
    // Hermite inner products through ψ, rescaled by √(𝒩_j 𝒩_k)
    let mut herm = vec![0.0; dim * dim];
    for j in 0..dim {
        for k in 0..=j {
            let f = |x: f64| {
                let p = psi_sequence(j, x);
                p[j] * p[k]
            };
            let v = quad::panels_doubling(f, -half, half, 1e-13, 1e-15)?
                * (0.5 * (ln_hermite_norm(j) + ln_hermite_norm(k))).exp();
            herm[j * dim + k] = v;
            herm[k * dim + j] = v;
        }
    }
    let mut g = vec![0.0; dim * dim];
    for j in 0..dim {
        for k in 0..n - 1 {
            g[j * dim + k] = herm[j * dim + k];
        }
        let mut eb = seed_beta(spec.mu, spec.sigma, j)?.to_f64();
        let mut ea = seed_alpha(spec.mu, spec.sigma, j)?.to_f64();
        for p in 0..n - 1 {
            eb -= coeffs.beta(p).to_f64() * herm[j * dim + p];
            ea -= coeffs.alpha(p).to_f64() * herm[j * dim + p];
        }
        g[j * dim + n - 1] = eb;
        g[j * dim + n] = ea;
    }

    let rel = |a: f64, b: f64| (a - b).abs() / b.abs().max(f64::MIN_POSITIVE);
    let mut diagonal_rel_err: f64 = 0.0;
    for j in 0..n - 1 {
        diagonal_rel_err = diagonal_rel_err.max(rel(g[j * dim + j], ln_hermite_norm(j).exp()));
    }
    let mut block_rel_err: f64 = 0.0;
    for (row, p) in [(n - 1, n - 1), (n, n)] {
        let norm = ln_hermite_norm(p).exp();
        block_rel_err = block_rel_err
            .max(rel(g[row * dim + n - 1] / norm, coeffs.beta(p).to_f64()))
            .max(rel(g[row * dim + n] / norm, coeffs.alpha(p).to_f64()));
    }
    let mut off_block_max: f64 = 0.0;
    for j in 0..dim {
        let norm = ln_hermite_norm(j).exp();
        for k in 0..dim {
            let in_block = j >= n - 1 && k >= n - 1;
            if j == k || in_block {
                continue;
            }
            off_block_max = off_block_max.max((g[j * dim + k] / norm).abs());
        }
    }
    Ok(GramReport { n, matrix: g, diagonal_rel_err, block_rel_err, off_block_max })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_level_gue() {
        let (x, y) = (0.3, -1.1);
        let expected = (-(x * x + y * y) / 2.0f64).exp() / std::f64::consts::PI.sqrt();
        assert!((kernel_gue(1, x, y) - expected).abs() < 1e-15);
    }

    #[test]
    fn spec_validation() {
        assert!(matches!(
            KernelSpec::new(4, 0.3, 1.5, KernelPath::General),
            Err(Error::DivergenceDetected(_))
        ));
        assert!(matches!(
            KernelSpec::new(4, 0.3, 1.0, KernelPath::General),
            Err(Error::UnsupportedParameter(_))
        ));
        assert!(KernelSpec::new(4, 0.0, 1.0, KernelPath::General).is_ok());
        assert!(KernelSpec::new(4, 0.3, 1.2, KernelPath::Mu0).is_err());
        assert!(KernelSpec::new(4, 0.3, 1.2, KernelPath::Sigma1).is_err());
        assert!(KernelSpec::new(0, 0.3, 0.9, KernelPath::General).is_err());
        assert_eq!(KernelSpec::auto(3, 0.0, 1.0).unwrap().path, KernelPath::Gue);
        assert_eq!(KernelSpec::auto(3, 0.2, 1.0).unwrap().path, KernelPath::Sigma1);
        assert_eq!(KernelSpec::auto(3, 0.0, 1.1).unwrap().path, KernelPath::Mu0);
    }

    #[test]
    fn gue_path_is_larger_gue() {
        let k = Kernel::new(&KernelSpec::auto(5, 0.0, 1.0).unwrap()).unwrap();
        for (x, y) in [(0.0, 0.0), (1.2, -0.4), (-2.5, 3.0)] {
            assert!((k.eval(x, y) - kernel_gue(6, x, y)).abs() < 1e-14);
        }
    }

    #[test]
    fn tail_bound_is_none_outside_unit_root() {
        assert!(tail_bound(0.6, 0.5, [(1.0, 1.0), (0.0, 0.0)]).is_none());
        assert!(tail_bound(0.1, 0.5, [(1.0, 1.0), (0.0, 0.0)]).is_some());
    }
}
