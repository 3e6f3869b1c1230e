//! Hermite expansion coefficients of the border weight and the γ-coefficients
//! that enter the rank-one correction of the correlation kernel.
//!
//! With `w(x) = e^{-σ⁻²x² + 2μσ⁻²x}` and `z(u) = e^{(σ⁻²-1)u² - 2μσ⁻²u}`,
//!
//! `β̃_p = ∫ w(x) H_p(x) dx`,  `α̃_p = ∫ w(x) H_p(x) ∫_0^x z(u) du dx`.
//!
//! Both satisfy `y_p = 2μ y_{p-1} + 2(p-1)(σ²-1) y_{p-2}`, with an extra
//! source `σ²√π` at `p = 1` for `α̃`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, unsupported, Error, Result};
use crate::quad;
use crate::scaled::Scaled;
use crate::specfun::{hermite, hilbert_hermite_sequence, ln_hermite_norm};

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(invalid(format!("sigma must be > 0 (got {sigma})")));
    }
    Ok(())
}

/// `β̃_p` by direct quadrature.
pub fn seed_beta(mu: f64, sigma: f64, p: usize) -> Result<Scaled> {
    check_sigma(sigma)?;
    let si2 = 1.0 / (sigma * sigma);
    let half = 12.0 * sigma + (2.0 * p as f64).sqrt() * sigma;
    // e^{-σ⁻²(x-μ)²} with e^{μ²/σ²} restored afterwards
    let f = |x: f64| (-si2 * (x - mu) * (x - mu)).exp() * hermite(p, x);
    // absolute floor sized to |H_p| over the bulk of the Gaussian
    let floor = 1e-15 * sigma * (2.0 * (mu.abs() + 3.0 * sigma) + 1.0).powi(p as i32);
    let v = quad::panels_doubling(f, mu - half, mu + half, 1e-13, floor)?;
    Ok(Scaled::from_ln(v.signum(), v.abs().ln() + mu * mu * si2))
}

/// `α̃_p` by nested quadrature.
///
/// The inner integrand `e^{E(u)}` with `E(u) = σ⁻²(u-μ)² - u²` can be as large
/// as `e^{μ²/σ²}`, so both levels are integrated after dividing out their
/// maximal exponent, which is restored in the returned [`Scaled`].
pub fn seed_alpha(mu: f64, sigma: f64, p: usize) -> Result<Scaled> {
    check_sigma(sigma)?;
    let si2 = 1.0 / (sigma * sigma);
    let e = move |u: f64| si2 * (u - mu) * (u - mu) - u * u;
    let vertex = if si2 != 1.0 { Some(si2 * mu / (si2 - 1.0)) } else { None };
    let inner_max = move |x: f64| {
        let mut m = e(0.0).max(e(x));
        if let Some(v) = vertex {
            if si2 < 1.0 && v > x.min(0.0) && v < x.max(0.0) {
                m = m.max(e(v));
            }
        }
        m
    };
    let outer_log = |x: f64| -si2 * (x - mu) * (x - mu) + inner_max(x);

    let spread = (2.0 * p as f64).sqrt() + 1.0;
    let lo = (mu - 12.0 * sigma).min(-12.0) - spread;
    let hi = (mu + 12.0 * sigma).max(12.0) + spread;
    let mut g = f64::NEG_INFINITY;
    for k in 0..=4000 {
        let x = lo + (hi - lo) * k as f64 / 4000.0;
        g = g.max(outer_log(x));
    }
    g = g.max(outer_log(mu)).max(outer_log(0.0));

    let inner_err = std::cell::Cell::new(None::<Error>);
    let integrand = |x: f64| {
        if x == 0.0 {
            return 0.0;
        }
        let m = inner_max(x);
        let (a, b) = if x > 0.0 { (0.0, x) } else { (x, 0.0) };
        let inner = match quad::adaptive(|u| (e(u) - m).exp(), a, b, 1e-17, 1e-13) {
            Ok(v) => v,
            Err(err) => {
                inner_err.set(Some(err));
                return 0.0;
            }
        };
        let signed = if x > 0.0 { inner } else { -inner };
        (outer_log(x) - g).exp() * hermite(p, x) * signed
    };
    let mut cuts = vec![lo, 0.0, hi];
    if mu > lo && mu < hi && mu != 0.0 {
        cuts.push(mu);
    }
    if let Some(v) = vertex {
        if v > lo && v < hi && v != 0.0 {
            cuts.push(v);
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += quad::adaptive(integrand, w[0], w[1], 1e-16, 1e-13)?;
    }
    if let Some(err) = inner_err.take() {
        return Err(err);
    }
    Ok(Scaled::from_ln(total.signum(), total.abs().ln() + g))
}

/// Tables of `β̃_p = 𝒩_p β_p`, `α̃_p = 𝒩_p α_p` and `ln 𝒩_p` for `p ≤ p_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffTable {
    mu: f64,
    sigma: f64,
    tilde_beta: Vec<Scaled>,
    tilde_alpha: Vec<Scaled>,
    ln_norms: Vec<f64>,
}

impl CoeffTable {
    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn p_max(&self) -> usize {
        self.tilde_beta.len() - 1
    }

    pub fn tilde_beta(&self, p: usize) -> Scaled {
        self.tilde_beta[p]
    }

    pub fn tilde_alpha(&self, p: usize) -> Scaled {
        self.tilde_alpha[p]
    }

    pub fn ln_norm(&self, p: usize) -> f64 {
        self.ln_norms[p]
    }

    /// `β_p` itself.
    pub fn beta(&self, p: usize) -> Scaled {
        self.tilde_beta[p] * Scaled::from_ln(1.0, -self.ln_norms[p])
    }

    pub fn alpha(&self, p: usize) -> Scaled {
        self.tilde_alpha[p] * Scaled::from_ln(1.0, -self.ln_norms[p])
    }

    /// `β̃_p / √𝒩_p`, the coefficient of `ψ_p` in the expansion.
    pub fn hat_beta(&self, p: usize) -> Scaled {
        self.tilde_beta[p] * Scaled::from_ln(1.0, -0.5 * self.ln_norms[p])
    }

    pub fn hat_alpha(&self, p: usize) -> Scaled {
        self.tilde_alpha[p] * Scaled::from_ln(1.0, -0.5 * self.ln_norms[p])
    }

    /// Copy with every `α̃_p` multiplied by `a` and every `β̃_p` by `b`.
    pub fn rescaled(&self, a: f64, b: f64) -> Self {
        let mut t = self.clone();
        t.tilde_alpha.iter_mut().for_each(|v| *v = v.scale(a));
        t.tilde_beta.iter_mut().for_each(|v| *v = v.scale(b));
        t
    }

    /// Largest `|y_p - 2μ y_{p-1} - 2(p-1)(σ²-1) y_{p-2}|` relative to the
    /// magnitude of the terms, over both tables (the `α̃` source included).
    pub fn max_recurrence_residual(&self) -> f64 {
        let s2m1 = self.sigma * self.sigma - 1.0;
        let mut worst: f64 = 0.0;
        for table in [&self.tilde_beta, &self.tilde_alpha] {
            for p in 2..table.len() {
                let a = table[p - 1].scale(2.0 * self.mu);
                let b = table[p - 2].scale(2.0 * (p as f64 - 1.0) * s2m1);
                let resid = table[p].sub(&a).sub(&b);
                let scale = [table[p].abs(), a.abs(), b.abs()]
                    .into_iter()
                    .max_by(|x, y| x.cmp_abs(y))
                    .expect("three entries");
                if !scale.is_zero() {
                    worst = worst.max((resid / scale).to_f64().abs());
                }
            }
        }
        worst
    }
}

/// Builds the coefficient tables from quadrature seeds at `p = 0, 1` and the
/// three-term recurrences. At `μ = 0` the parity zeros `α̃_{2p} = β̃_{2p+1} = 0`
/// are imposed exactly.
pub fn build_coeffs(mu: f64, sigma: f64, p_max: usize) -> Result<CoeffTable> {
    check_sigma(sigma)?;
    if !mu.is_finite() {
        return Err(invalid("mu must be finite"));
    }
    if p_max < 2 {
        return Err(invalid("p_max must be >= 2"));
    }
    if sigma == 1.0 {
        return Err(unsupported(
            "sigma = 1 makes the coefficient recurrences degenerate; use the sigma1 kernel path",
        ));
    }
    let s2m1 = sigma * sigma - 1.0;
    let (mut beta, mut alpha) = if mu == 0.0 {
        (
            vec![seed_beta(mu, sigma, 0)?, Scaled::ZERO],
            vec![Scaled::ZERO, seed_alpha(mu, sigma, 1)?],
        )
    } else {
        (
            vec![seed_beta(mu, sigma, 0)?, seed_beta(mu, sigma, 1)?],
            vec![seed_alpha(mu, sigma, 0)?, seed_alpha(mu, sigma, 1)?],
        )
    };
    for p in 2..=p_max {
        let k = 2.0 * (p as f64 - 1.0) * s2m1;
        let b = beta[p - 1].scale(2.0 * mu).add(&beta[p - 2].scale(k));
        let a = alpha[p - 1].scale(2.0 * mu).add(&alpha[p - 2].scale(k));
        beta.push(b);
        alpha.push(a);
    }
    if mu == 0.0 {
        for p in 0..=p_max {
            if p % 2 == 0 {
                alpha[p] = Scaled::ZERO;
            } else {
                beta[p] = Scaled::ZERO;
            }
        }
    }
    let ln_norms = (0..=p_max).map(ln_hermite_norm).collect();
    Ok(CoeffTable { mu, sigma, tilde_beta: beta, tilde_alpha: alpha, ln_norms })
}

/// Closed form `e^{(μ/σ)²} (1-σ²)^{p/2} H_p(μ/√(1-σ²))` for `σ² < 1`.
///
/// This differs from `β̃_p` by the global factor `σ√π`; it is kept as printed
/// and only ever compared up to that factor.
pub fn closed_form_beta(mu: f64, sigma: f64, p: usize) -> Result<f64> {
    check_sigma(sigma)?;
    let s2 = sigma * sigma;
    if s2 >= 1.0 {
        return Err(unsupported("closed forms need sigma^2 < 1 (real Hermite argument)"));
    }
    let r = (1.0 - s2).sqrt();
    Ok((mu * mu / s2).exp() * r.powi(p as i32) * hermite(p, mu / r))
}

/// Closed form `(1-σ²)^{p/2} (c₁ H_p(t) + c₂ h_p(t))`, `t = μ/√(1-σ²)`, for
/// `σ² < 1`, with `c₂ = -σ²/(2√(1-σ²))` and `c₁ = α̃_0 - c₂ h_0(t)`.
pub fn closed_form_alpha(mu: f64, sigma: f64, p: usize) -> Result<f64> {
    check_sigma(sigma)?;
    let s2 = sigma * sigma;
    if s2 >= 1.0 {
        return Err(unsupported("closed forms need sigma^2 < 1 (real Hermite argument)"));
    }
    let r = (1.0 - s2).sqrt();
    let t = mu / r;
    let h = hilbert_hermite_sequence(p.max(1), t)?;
    let c2 = -s2 / (2.0 * r);
    let c1 = seed_alpha(mu, sigma, 0)?.to_f64() - c2 * h[0];
    Ok(r.powi(p as i32) * (c1 * hermite(p, t) + c2 * h[p]))
}

/// Which of the two γ sequences.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GammaKind {
    /// Starts `γ_0 = 1, γ_1 = 0`.
    First,
    /// Starts `γ_0 = 0, γ_1 = 1`.
    Second,
}

/// Limiting γ-coefficients for `μ = c√(N/2)`, `N → ∞`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GammaLimits {
    pub c: f64,
    pub sigma2: f64,
    pub x_plus: Complex64,
    pub x_minus: Complex64,
}

impl GammaLimits {
    /// Roots `x± = (c ± √(c² - 4(1-σ²)))/2`, complex when the discriminant is negative.
    pub fn new(c: f64, sigma2: f64) -> Result<Self> {
        if !(sigma2 > 0.0) || !c.is_finite() {
            return Err(invalid("need sigma2 > 0 and finite c"));
        }
        let disc = c * c - 4.0 * (1.0 - sigma2);
        let scale = c * c + 4.0 * (1.0 - sigma2).abs();
        if disc.abs() <= 1e-14 * scale.max(1e-300) {
            return Err(unsupported(format!(
                "confluent roots: c^2 = 4(1 - sigma^2) at c = {c}, sigma^2 = {sigma2}"
            )));
        }
        let root = Complex64::new(disc, 0.0).sqrt();
        Ok(Self {
            c,
            sigma2,
            x_plus: (c + root) / 2.0,
            x_minus: (c - root) / 2.0,
        })
    }
}

/// `γ_p^{(1)} = (x₊^p x₋ - x₊ x₋^p)/(x₋ - x₊)`, `γ_p^{(2)} = (x₊^p - x₋^p)/(x₊ - x₋)`.
pub fn gamma_p(limits: &GammaLimits, p: usize, which: GammaKind) -> f64 {
    let (xp, xm) = (limits.x_plus, limits.x_minus);
    let pp = xp.powu(p as u32);
    let pm = xm.powu(p as u32);
    let v = match which {
        GammaKind::First => (pp * xm - xp * pm) / (xm - xp),
        GammaKind::Second => (pp - pm) / (xp - xm),
    };
    v.re
}

/// Coefficient `(a_p, b_p)` of the scaled recurrence
/// `ŷ_p = a_p ŷ_{p-1} + b_p ŷ_{p-2}` obeyed by `ŷ_p = ỹ_p / √𝒩_p` (`p ≥ 2`).
#[inline]
pub fn scaled_recurrence(mu: f64, sigma2: f64, p: usize) -> (f64, f64) {
    let pf = p as f64;
    (mu * (2.0 / pf).sqrt(), (sigma2 - 1.0) * ((pf - 1.0) / pf).sqrt())
}

/// Both finite-`N` γ sequences for `q = 0 ..= q_max`.
///
/// They are the normalized Wronskian combinations of the two coefficient
/// sequences, which obey the homogeneous scaled recurrence with indices
/// `p = N - 1 + q` and exact starting values, so they are propagated directly.
pub fn gamma_sequences(mu: f64, sigma: f64, n: usize, q_max: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    check_sigma(sigma)?;
    if n == 0 {
        return Err(invalid("N must be >= 1"));
    }
    let s2 = sigma * sigma;
    let mut g1 = vec![1.0, 0.0];
    let mut g2 = vec![0.0, 1.0];
    for q in 2..=q_max.max(1) {
        let (a, b) = scaled_recurrence(mu, s2, n - 1 + q);
        let v1 = a * g1[q - 1] + b * g1[q - 2];
        let v2 = a * g2[q - 1] + b * g2[q - 2];
        if !v1.is_finite() || !v2.is_finite() {
            return Err(Error::DivergenceDetected(format!(
                "gamma sequence overflowed at q = {q} (N = {n}, mu = {mu}, sigma = {sigma})"
            )));
        }
        g1.push(v1);
        g2.push(v2);
    }
    g1.truncate(q_max + 1);
    g2.truncate(q_max + 1);
    Ok((g1, g2))
}

/// Finite-`N` γ coefficient by propagation (see [`gamma_sequences`]).
pub fn gamma_finite(mu: f64, sigma: f64, n: usize, q: usize, which: GammaKind) -> Result<f64> {
    let (g1, g2) = gamma_sequences(mu, sigma, n, q)?;
    Ok(match which {
        GammaKind::First => g1[q],
        GammaKind::Second => g2[q],
    })
}

/// Finite-`N` γ coefficient formed from stored table entries,
///
/// `γ^{(1)}_q = (α̂_N β̂_{N-1+q} - β̂_N α̂_{N-1+q}) / (α̂_N β̂_{N-1} - β̂_N α̂_{N-1})`,
/// `γ^{(2)}_q = (β̂_{N-1} α̂_{N-1+q} - α̂_{N-1} β̂_{N-1+q}) / (β̂_{N-1} α̂_N - α̂_{N-1} β̂_N)`.
///
/// The differences cancel badly when `N` or `μ` is large; this exists to
/// cross-check [`gamma_finite`] where the table is accurate.
pub fn gamma_finite_direct(table: &CoeffTable, n: usize, q: usize, which: GammaKind) -> Result<f64> {
    if n == 0 || n - 1 + q > table.p_max() || n > table.p_max() {
        return Err(invalid(format!(
            "table with p_max = {} cannot serve N = {n}, q = {q}",
            table.p_max()
        )));
    }
    let (a0, b0) = (table.hat_alpha(n - 1), table.hat_beta(n - 1));
    let (a1, b1) = (table.hat_alpha(n), table.hat_beta(n));
    let (aq, bq) = (table.hat_alpha(n - 1 + q), table.hat_beta(n - 1 + q));
    let v = match which {
        GammaKind::First => (a1 * bq).sub(&(b1 * aq)) / (a1 * b0).sub(&(b1 * a0)),
        GammaKind::Second => (b0 * aq).sub(&(a0 * bq)) / (b0 * a1).sub(&(a0 * b1)),
    };
    Ok(v.to_f64())
}
