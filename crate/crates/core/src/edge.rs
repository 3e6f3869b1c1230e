//! Macroscopic edge analysis and soft-edge limits: the semicircle, the
//! averaged secular equation, separation thresholds, outlier locations, the
//! edge scaling maps, the deformed Airy kernel and its Fredholm determinant.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::kernel::{Kernel, KernelPath, KernelSpec};
use crate::linalg::det;
use crate::quad::{gauss_legendre, MappedRule};
use crate::specfun::{airy, AIRY_MAX_ARG};

/// Wigner semicircle density for `n` eigenvalues, `√(2n)/π · √(1 - λ²/2n)`.
pub fn semicircle(n: f64, lambda: f64) -> f64 {
    let z = lambda * lambda / (2.0 * n);
    if z >= 1.0 {
        0.0
    } else {
        (2.0 * n).sqrt() / std::f64::consts::PI * (1.0 - z).sqrt()
    }
}

/// `∫ ρ_W(y)/(λ - y) dy = λ(1 - √(1 - 2n/λ²))` outside the support, the branch
/// that decays like `n/λ`.
pub fn stieltjes_semicircle(n: f64, lambda: f64) -> Result<f64> {
    let edge = (2.0 * n).sqrt();
    if !(lambda.abs() > edge) {
        return Err(invalid(format!(
            "Stieltjes transform needs |lambda| > sqrt(2n) = {edge} (got {lambda})"
        )));
    }
    let z = 2.0 * n / (lambda * lambda);
    // 1 - √(1-z) = z / (1 + √(1-z)) without cancellation
    Ok(lambda * z / (1.0 + (1.0 - z).sqrt()))
}

/// `(c, σ²)` with `μ = c √(N/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhasePoint {
    pub c: f64,
    pub sigma2: f64,
}

impl PhasePoint {
    pub fn new(c: f64, sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0) || !c.is_finite() || !sigma2.is_finite() {
            return Err(invalid("need finite c and sigma^2 > 0"));
        }
        Ok(Self { c, sigma2 })
    }

    pub fn from_mu(n: usize, mu: f64, sigma: f64) -> Result<Self> {
        Self::new(mu / (n as f64 / 2.0).sqrt(), sigma * sigma)
    }

    pub fn mu(&self, n: usize) -> f64 {
        self.c * (n as f64 / 2.0).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Separation {
    None,
    Largest,
    Smallest,
    Both,
}

impl Separation {
    pub fn largest(self) -> bool {
        matches!(self, Self::Largest | Self::Both)
    }

    pub fn smallest(self) -> bool {
        matches!(self, Self::Smallest | Self::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Largest,
    Smallest,
}

/// Largest eigenvalue separates iff `σ² + c > 2`, smallest iff `σ² - c > 2`.
pub fn classify(point: PhasePoint) -> Separation {
    let top = point.sigma2 + point.c > 2.0;
    let bottom = point.sigma2 - point.c > 2.0;
    match (top, bottom) {
        (true, true) => Separation::Both,
        (true, false) => Separation::Largest,
        (false, true) => Separation::Smallest,
        (false, false) => Separation::None,
    }
}

/// Leading-order position of a separated eigenvalue,
/// `√(N/2) (σ⁴ + c²) / ((1 - σ²/2) c ± σ² √((c/2)² - (1 - σ²)))`.
pub fn outlier_location(point: PhasePoint, n: usize, side: Side) -> Result<f64> {
    let sep = classify(point);
    let ok = match side {
        Side::Largest => sep.largest(),
        Side::Smallest => sep.smallest(),
    };
    if !ok {
        return Err(invalid(format!("{side:?} eigenvalue is not separated at {point:?}")));
    }
    let PhasePoint { c, sigma2: s2 } = point;
    let root = ((c / 2.0).powi(2) - (1.0 - s2)).max(0.0).sqrt();
    let sign = match side {
        Side::Largest => 1.0,
        Side::Smallest => -1.0,
    };
    let denom = (1.0 - s2 / 2.0) * c + sign * s2 * root;
    Ok((n as f64 / 2.0).sqrt() * (s2 * s2 + c * c) / denom)
}

/// Soft-edge coordinates about `√(2n)`: `x = √(2n) + X / (√2 n^{1/6})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgeMap {
    pub n: f64,
}

impl EdgeMap {
    pub fn new(n: f64) -> Result<Self> {
        if !(n >= 1.0) {
            return Err(invalid("edge map needs n >= 1"));
        }
        Ok(Self { n })
    }

    pub fn centre(&self) -> f64 {
        (2.0 * self.n).sqrt()
    }

    /// `dx/dX`.
    pub fn width(&self) -> f64 {
        1.0 / (std::f64::consts::SQRT_2 * self.n.powf(1.0 / 6.0))
    }

    pub fn scale(&self, x: f64) -> f64 {
        (x - self.centre()) / self.width()
    }

    pub fn unscale(&self, big_x: f64) -> f64 {
        self.centre() + big_x * self.width()
    }
}

/// A point in scaled coordinates together with its deformation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EdgePoint {
    pub x: f64,
    pub y: f64,
    pub s: f64,
    pub n: f64,
}

/// How the border parameters approach the critical point as `N` grows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum EdgeTuning {
    /// `σ = 1`, `μ = √(N/2)(1 - s/N^{1/3})`; larger `μ` pushes towards separation.
    Sigma1 { s: f64 },
    /// `μ = 0`, `σ² = 2 - 2s/N^{1/3}`.
    Mu0 { s: f64 },
    /// `c = ĉ + s₁/N^{1/3}`, `σ² = σ̂² - s₂/N^{1/3}`, `σ̂² + ĉ = 2`.
    General { c_hat: f64, s1: f64, s2: f64 },
}

impl EdgeTuning {
    /// General tuning after checking `σ̂² + ĉ = 2` within the `N^{-1/3}` window.
    pub fn general(n: usize, c_hat: f64, sigma_hat2: f64, s1: f64, s2: f64) -> Result<Self> {
        let window = (n as f64).powf(-1.0 / 3.0);
        if (sigma_hat2 + c_hat - 2.0).abs() > window {
            return Err(invalid(format!(
                "critical line sigma_hat^2 + c_hat = 2 violated: {} (window {window})",
                sigma_hat2 + c_hat
            )));
        }
        if !(c_hat > 0.0 && c_hat < 2.0) {
            return Err(invalid("general tuning needs 0 < c_hat < 2"));
        }
        Ok(Self::General { c_hat, s1, s2 })
    }

    /// Effective deformation of the limiting kernel. In the general case the
    /// near-unit root of `x² - cx - (σ²-1)` is `1 - (s₂ - s₁)/((2 - ĉ) N^{1/3})`,
    /// so `s = (s₂ - s₁)/(2 - ĉ)`.
    pub fn s(&self) -> f64 {
        match *self {
            Self::Sigma1 { s } | Self::Mu0 { s } => s,
            Self::General { c_hat, s1, s2 } => (s2 - s1) / (2.0 - c_hat),
        }
    }

    /// `(μ, σ)` at core size `n`.
    pub fn params(&self, n: usize) -> (f64, f64) {
        let nf = n as f64;
        let t = nf.powf(-1.0 / 3.0);
        match *self {
            Self::Sigma1 { s } => ((nf / 2.0).sqrt() * (1.0 - s * t), 1.0),
            Self::Mu0 { s } => (0.0, (2.0 - 2.0 * s * t).sqrt()),
            Self::General { c_hat, s1, s2 } => {
                let c = c_hat + s1 * t;
                let sigma2 = 2.0 - c_hat - s2 * t;
                (c * (nf / 2.0).sqrt(), sigma2.sqrt())
            }
        }
    }

    pub fn kernel_spec(&self, n: usize) -> Result<KernelSpec> {
        let (mu, sigma) = self.params(n);
        KernelSpec::auto(n, mu, sigma)
    }
}

/// `s` from `μ` at `σ = 1`.
pub fn s_from_mu_sigma1(n: usize, mu: f64) -> f64 {
    let nf = n as f64;
    nf.powf(1.0 / 3.0) * (1.0 - mu / (nf / 2.0).sqrt())
}

/// `s` from `σ²` at `μ = 0`.
pub fn s_from_sigma2_mu0(n: usize, sigma2: f64) -> f64 {
    (n as f64).powf(1.0 / 3.0) * (2.0 - sigma2) / 2.0
}

/// Airy kernel `(Ai(X)Ai'(Y) - Ai(Y)Ai'(X))/(X - Y)`, with `Ai'(X)² - X Ai(X)²` on the diagonal.
pub fn airy_kernel(x: f64, y: f64) -> Result<f64> {
    let a = airy(x)?;
    if (x - y).abs() < 1e-7 * (1.0 + x.abs()) {
        let m = 0.5 * (x + y);
        let b = airy(m)?;
        return Ok(b.ai_prime * b.ai_prime - m * b.ai * b.ai);
    }
    let b = airy(y)?;
    Ok((a.ai * b.ai_prime - b.ai * a.ai_prime) / (x - y))
}

/// `I(Y, s) = ∫_{-∞}^Y e^{-s(Y-t)} Ai(t) dt`, continued to all real `s` by
/// `I = e^{-sY + s³/3} - ∫_Y^∞ e^{-s(Y-t)} Ai(t) dt`.
pub fn airy_tail_integral(y: f64, s: f64) -> Result<f64> {
    if !y.is_finite() || !s.is_finite() {
        return Err(invalid("airy_tail_integral needs finite arguments"));
    }
    let ai = |t: f64| airy(t).map(|v| v.ai).unwrap_or(0.0);
    // quarter-unit panels resolve the oscillations down to t ≈ -AIRY_MAX_ARG
    let panels = |len: f64| (4.0 * len).ceil().max(1.0) as usize;
    if s >= 0.5 {
        // ∫_0^∞ e^{-su} Ai(Y-u) du; |Ai| ≤ 1 so the cut-off is set by the damping alone
        let u_max = 40.0 / s;
        if y - u_max < -AIRY_MAX_ARG {
            return Err(invalid("damped Airy integral leaves the supported range"));
        }
        let rule = MappedRule::composite(16, panels(u_max), 0.0, u_max);
        return Ok(rule.integrate(|u| (-s * u).exp() * ai(y - u)));
    }
    let lead = (-s * y + s * s * s / 3.0).exp();
    // ∫_0^∞ e^{su} Ai(Y+u) du; stop once (2/3)t^{3/2} - s u exceeds 45
    let mut u_max = 1.0;
    loop {
        let t = y + u_max;
        if (t > 0.0 && (2.0 / 3.0) * t.powf(1.5) - s * u_max > 45.0) || t + 1.0 > AIRY_MAX_ARG {
            break;
        }
        u_max += 1.0;
    }
    let rule = MappedRule::composite(16, panels(u_max), 0.0, u_max);
    Ok(lead - rule.integrate(|u| (s * u).exp() * ai(y + u)))
}

/// `I(·, s)` tabulated on `[lo, hi]` and interpolated by cubic Hermite
/// polynomials using `I' = Ai - s I`.
#[derive(Debug, Clone)]
pub struct AiryTailTable {
    s: f64,
    lo: f64,
    step: f64,
    values: Vec<f64>,
    ai: Vec<f64>,
}

impl AiryTailTable {
    pub fn new(s: f64, lo: f64, hi: f64, step: f64) -> Result<Self> {
        if !(hi > lo) || !(step > 0.0) {
            return Err(invalid("tail table needs lo < hi and step > 0"));
        }
        let count = ((hi - lo) / step).ceil() as usize + 1;
        let node = |k: usize| lo + k as f64 * step;
        let ai_at = |t: f64| airy(t).map(|v| v.ai).unwrap_or(0.0);
        let ai = (0..count).map(|k| airy(node(k)).map(|v| v.ai)).collect::<Result<Vec<_>>>()?;
        let mut values = vec![0.0; count];
        // sweep in the direction where e^{∓s h} damps earlier rounding
        if s >= 0.0 {
            // I(b) = e^{-s h} I(a) + ∫_a^b e^{-s(b-t)} Ai(t) dt
            let decay = (-s * step).exp();
            values[0] = airy_tail_integral(lo, s)?;
            for k in 1..count {
                let (a, b) = (node(k - 1), node(k));
                let panel = MappedRule::new(16, a, b).integrate(|t| (-s * (b - t)).exp() * ai_at(t));
                values[k] = decay * values[k - 1] + panel;
            }
        } else {
            // I(a) = e^{s h} I(b) - ∫_a^b e^{-s(a-t)} Ai(t) dt
            let decay = (s * step).exp();
            values[count - 1] = airy_tail_integral(node(count - 1), s)?;
            for k in (0..count - 1).rev() {
                let (a, b) = (node(k), node(k + 1));
                let panel = MappedRule::new(16, a, b).integrate(|t| (-s * (a - t)).exp() * ai_at(t));
                values[k] = decay * values[k + 1] - panel;
            }
        }
        Ok(Self { s, lo, step, values, ai })
    }

    pub fn hi(&self) -> f64 {
        self.lo + (self.values.len() - 1) as f64 * self.step
    }

    pub fn eval(&self, y: f64) -> Result<f64> {
        if y < self.lo || y > self.hi() {
            return airy_tail_integral(y, self.s);
        }
        let t = (y - self.lo) / self.step;
        let k = (t.floor() as usize).min(self.values.len() - 2);
        let u = t - k as f64;
        let h = self.step;
        let (p0, p1) = (self.values[k], self.values[k + 1]);
        let m0 = (self.ai[k] - self.s * p0) * h;
        let m1 = (self.ai[k + 1] - self.s * p1) * h;
        let (u2, u3) = (u * u, u * u * u);
        Ok((2.0 * u3 - 3.0 * u2 + 1.0) * p0
            + (u3 - 2.0 * u2 + u) * m0
            + (-2.0 * u3 + 3.0 * u2) * p1
            + (u3 - u2) * m1)
    }
}

/// Limiting kernel `K^soft(X,Y) + Ai(X) I(Y, s)`.
pub fn deformed_airy_kernel(x: f64, y: f64, s: f64) -> Result<f64> {
    Ok(airy_kernel(x, y)? + airy(x)?.ai * airy_tail_integral(y, s)?)
}

/// A kernel on the soft-edge scale.
pub trait EdgeKernel: Sync {
    fn eval(&self, x: f64, y: f64) -> Result<f64>;

    /// Row-major `K(x_i, x_j)`.
    fn matrix(&self, nodes: &[f64]) -> Result<Vec<f64>> {
        let m = nodes.len();
        let rows: Result<Vec<Vec<f64>>> = nodes
            .par_iter()
            .map(|&xi| nodes.iter().map(|&xj| self.eval(xi, xj)).collect())
            .collect();
        let flat: Vec<f64> = rows?.into_iter().flatten().collect();
        debug_assert_eq!(flat.len(), m * m);
        Ok(flat)
    }
}

/// The Airy kernel itself.
#[derive(Debug, Clone, Copy)]
pub struct AiryKernel;

impl EdgeKernel for AiryKernel {
    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        airy_kernel(x, y)
    }

    fn matrix(&self, nodes: &[f64]) -> Result<Vec<f64>> {
        DeformedAiry::new(0.0).assemble(nodes, false)
    }
}

/// Rank-one deformed Airy kernel with deformation `s`.
#[derive(Debug, Clone)]
pub struct DeformedAiry {
    pub s: f64,
    table: Option<AiryTailTable>,
}

impl DeformedAiry {
    pub fn new(s: f64) -> Self {
        Self { s, table: None }
    }

    /// Tail integral read from a table over `[lo, hi]`.
    pub fn tabulated(s: f64, lo: f64, hi: f64) -> Result<Self> {
        Ok(Self { s, table: Some(AiryTailTable::new(s, lo, hi, 0.01)?) })
    }

    fn tail(&self, y: f64) -> Result<f64> {
        match &self.table {
            Some(t) => t.eval(y),
            None => airy_tail_integral(y, self.s),
        }
    }

    /// Airy values and the tail integral once per node, then the pairwise formula.
    fn assemble(&self, nodes: &[f64], correction: bool) -> Result<Vec<f64>> {
        let m = nodes.len();
        let per_node: Result<Vec<(f64, f64, f64)>> = nodes
            .par_iter()
            .map(|&x| {
                let a = airy(x)?;
                let tail = if correction { self.tail(x)? } else { 0.0 };
                Ok((a.ai, a.ai_prime, tail))
            })
            .collect();
        let v = per_node?;
        let mut out = vec![0.0; m * m];
        for i in 0..m {
            for j in 0..m {
                let (ai, aip, _) = v[i];
                let (aj, ajp, tj) = v[j];
                let soft = if i == j || nodes[i] == nodes[j] {
                    aip * aip - nodes[i] * ai * ai
                } else {
                    (ai * ajp - aj * aip) / (nodes[i] - nodes[j])
                };
                out[i * m + j] = soft + ai * tj;
            }
        }
        Ok(out)
    }
}

impl EdgeKernel for DeformedAiry {
    fn eval(&self, x: f64, y: f64) -> Result<f64> {
        Ok(airy_kernel(x, y)? + airy(x)?.ai * self.tail(y)?)
    }

    fn matrix(&self, nodes: &[f64]) -> Result<Vec<f64>> {
        self.assemble(nodes, true)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FredholmConfig {
    /// Initial Gauss–Legendre order, doubled until converged.
    pub order: usize,
    /// Interval length; `None` means `12 + |s_lower|`.
    pub length: Option<f64>,
    pub tol: f64,
    pub max_order: usize,
}

impl Default for FredholmConfig {
    fn default() -> Self {
        Self { order: 16, length: None, tol: 1e-8, max_order: 256 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FredholmValue {
    pub value: f64,
    /// Change from the previous order, a Richardson-style error estimate.
    pub error_estimate: f64,
    pub order: usize,
}

// Grading strength of the node map x = a + L·sinh(g·u)/sinh(g), u ∈ [0, 1].
const NODE_GRADING: f64 = 2.0;

/// `det(I - K)` on `[a, a + length]` from a single `m`-point Nyström discretisation.
///
/// Gauss–Legendre nodes are placed in the variable `u` of a sinh map that
/// packs them toward `a`, where edge kernels carry their mass.
pub fn nystrom<K: EdgeKernel + ?Sized>(kernel: &K, a: f64, length: f64, m: usize) -> Result<f64> {
    let (x, w) = gauss_legendre(m);
    let g = NODE_GRADING;
    let scale = length / g.sinh();
    let nodes: Vec<f64> = x.iter().map(|t| a + scale * (0.5 * g * (t + 1.0)).sinh()).collect();
    let sw: Vec<f64> = x
        .iter()
        .zip(&w)
        .map(|(t, wi)| (0.5 * wi * scale * g * (0.5 * g * (t + 1.0)).cosh()).sqrt())
        .collect();
    let mut a = kernel.matrix(&nodes)?;
    for i in 0..m {
        for j in 0..m {
            let delta = if i == j { 1.0 } else { 0.0 };
            a[i * m + j] = delta - sw[i] * a[i * m + j] * sw[j];
        }
    }
    Ok(det(&a, m))
}

/// `det(I - K)` on `[s_lower, s_lower + L]` by Nyström discretization with
/// order doubling.
pub fn fredholm_det<K: EdgeKernel + ?Sized>(
    kernel: &K,
    s_lower: f64,
    cfg: &FredholmConfig,
) -> Result<FredholmValue> {
    if cfg.order < 8 {
        return Err(invalid("Fredholm order must be >= 8"));
    }
    let length = cfg.length.unwrap_or(12.0 + s_lower.abs());
    if !(length > 0.0) {
        return Err(invalid("Fredholm interval length must be positive"));
    }
    let mut m = cfg.order;
    let mut prev = nystrom(kernel, s_lower, length, m)?;
    while m < cfg.max_order {
        m *= 2;
        let cur = nystrom(kernel, s_lower, length, m)?;
        let change = (cur - prev).abs();
        if change <= cfg.tol {
            return Ok(FredholmValue { value: cur, error_estimate: change, order: m });
        }
        prev = cur;
    }
    Err(Error::NumericalFailure(format!(
        "Fredholm determinant at s = {s_lower} not converged by order {m}"
    )))
}

/// Limiting law of the scaled largest eigenvalue, `P(X_max ≤ ξ)`.
pub fn largest_cdf(xi: f64, s: f64, cfg: &FredholmConfig) -> Result<f64> {
    Ok(fredholm_det(&DeformedAiry::new(s), xi, cfg)?.value.clamp(0.0, 1.0))
}

/// `P(X_max ≤ ξ)` tabulated on a uniform grid, linearly interpolated between
/// nodes and clamped to 0 and 1 outside. `s = None` marks the pure Airy law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfTable {
    pub s: Option<f64>,
    pub lo: f64,
    pub step: f64,
    pub values: Vec<f64>,
}

impl CdfTable {
    pub fn new(s: f64, lo: f64, hi: f64, step: f64, cfg: &FredholmConfig) -> Result<Self> {
        let count = Self::count(lo, hi, step)?;
        let top = hi + cfg.length.unwrap_or(12.0 + hi.abs().max(lo.abs()));
        let kernel = DeformedAiry::tabulated(s, lo, top)?;
        let values = Self::tabulate(&kernel, lo, step, count, cfg)?;
        Ok(Self { s: Some(s), lo, step, values })
    }

    /// The undeformed Tracy–Widom (β = 2) distribution.
    pub fn airy(lo: f64, hi: f64, step: f64, cfg: &FredholmConfig) -> Result<Self> {
        let count = Self::count(lo, hi, step)?;
        let values = Self::tabulate(&AiryKernel, lo, step, count, cfg)?;
        Ok(Self { s: None, lo, step, values })
    }

    fn count(lo: f64, hi: f64, step: f64) -> Result<usize> {
        if !(hi > lo) || !(step > 0.0) {
            return Err(invalid("CDF table needs lo < hi and step > 0"));
        }
        Ok(((hi - lo) / step).ceil() as usize + 1)
    }

    fn tabulate<K: EdgeKernel>(kernel: &K, lo: f64, step: f64, count: usize, cfg: &FredholmConfig) -> Result<Vec<f64>> {
        (0..count)
            .map(|k| Ok(fredholm_det(kernel, lo + k as f64 * step, cfg)?.value.clamp(0.0, 1.0)))
            .collect()
    }

    pub fn hi(&self) -> f64 {
        self.lo + (self.values.len() - 1) as f64 * self.step
    }

    pub fn cdf(&self, xi: f64) -> f64 {
        if xi <= self.lo {
            return if self.values[0] < 1e-6 { 0.0 } else { self.values[0] };
        }
        let t = (xi - self.lo) / self.step;
        let k = t.floor() as usize;
        if k + 1 >= self.values.len() {
            return 1.0;
        }
        let f = t - k as f64;
        self.values[k] * (1.0 - f) + self.values[k + 1] * f
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub finite: f64,
    pub limit: f64,
    pub deviation: f64,
}

/// Finite-`N` kernel at `(X, Y)` under the edge map about `√(2N)`, rescaled
/// by `dx/dX`, against the deformed Airy kernel with the tuning's `s`.
pub fn finite_to_edge_convergence(
    tuning: &EdgeTuning,
    x: f64,
    y: f64,
    ns: &[usize],
) -> Result<Vec<ConvergenceRow>> {
    let limit = deformed_airy_kernel(x, y, tuning.s())?;
    ns.iter()
        .map(|&n| {
            let spec = tuning.kernel_spec(n)?;
            let kernel = Kernel::new(&spec)?;
            let map = EdgeMap::new(n as f64)?;
            let finite = kernel.eval(map.unscale(x), map.unscale(y)) * map.width();
            Ok(ConvergenceRow { n, finite, limit, deviation: (finite - limit).abs() })
        })
        .collect()
}

/// Path a tuning takes at size `n`.
pub fn tuning_path(tuning: &EdgeTuning, n: usize) -> Result<KernelPath> {
    Ok(tuning.kernel_spec(n)?.path)
}
