//! Hermite polynomials and functions, their Hilbert transforms, and the Airy
//! functions.

use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Result};
use crate::quad;

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// Raw physicists' Hermite polynomial `H_n(x)` by upward recurrence.
///
/// Overflows for large `n` or `|x|`; kernel code uses [`hermite_weighted`].
pub fn hermite(n: usize, x: f64) -> f64 {
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * x;
    for p in 1..n {
        let next = 2.0 * x * cur - 2.0 * p as f64 * prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `ln 𝒩_n` with `𝒩_n = 2^n n! √π`, the squared norm of `H_n` against `e^{-x²}`.
pub fn ln_hermite_norm(n: usize) -> f64 {
    n as f64 * std::f64::consts::LN_2 + ln_gamma(n as f64 + 1.0) + 0.5 * PI.ln()
}

const RESCALE: f64 = 1e150;

/// Orthonormal Hermite functions `ψ_0(x) … ψ_{n_max}(x)` with
/// `ψ_n(x) = e^{-x²/2} H_n(x) / √𝒩_n`.
///
/// The Gaussian factor is carried as a separate log-scale so that neither
/// it nor the polynomial growth overflows, whatever the degree.
pub fn psi_sequence(n_max: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(n_max + 1);
    let mut ln_scale = -0.5 * x * x;
    let mut prev = PI.powf(-0.25);
    out.push(prev * ln_scale.exp());
    if n_max == 0 {
        return out;
    }
    let mut cur = std::f64::consts::SQRT_2 * x * prev;
    out.push(cur * ln_scale.exp());
    for n in 1..n_max {
        let nf = n as f64;
        let next = x * (2.0 / (nf + 1.0)).sqrt() * cur - (nf / (nf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            ln_scale += RESCALE.ln();
        }
        out.push(cur * ln_scale.exp());
    }
    out
}

/// Single orthonormal Hermite function `ψ_n(x)`.
pub fn hermite_weighted(n: usize, x: f64) -> f64 {
    let mut ln_scale = -0.5 * x * x;
    let mut prev = PI.powf(-0.25);
    if n == 0 {
        return prev * ln_scale.exp();
    }
    let mut cur = std::f64::consts::SQRT_2 * x * prev;
    for k in 1..n {
        let kf = k as f64;
        let next = x * (2.0 / (kf + 1.0)).sqrt() * cur - (kf / (kf + 1.0)).sqrt() * prev;
        prev = cur;
        cur = next;
        if cur.abs() > RESCALE {
            cur /= RESCALE;
            prev /= RESCALE;
            ln_scale += RESCALE.ln();
        }
    }
    cur * ln_scale.exp()
}

/// Imaginary error function by its Maclaurin series; adequate for `|x| ≲ 5`.
pub fn erfi(x: f64) -> f64 {
    let x2 = x * x;
    let mut term = x;
    let mut sum = x;
    let mut k = 0.0;
    loop {
        k += 1.0;
        term *= x2 / k;
        let add = term / (2.0 * k + 1.0);
        sum += add;
        if add.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    2.0 / SQRT_PI * sum
}

/// `h_0(x) = PV ∫ e^{-u²} / (x - u) du`.
///
/// Folding the integrand about `u = x` removes the pole:
/// `h_0(x) = ∫_0^∞ (e^{-(x-t)²} - e^{-(x+t)²}) / t dt`.
fn hilbert_seed(x: f64) -> Result<f64> {
    let f = |t: f64| {
        if t < 1e-3 {
            // 2 e^{-x²-t²} sinh(2xt)/t, series in t to avoid 0/0
            let z = 2.0 * x * t;
            let sinhc = 1.0 + z * z / 6.0 + z.powi(4) / 120.0;
            2.0 * (-x * x - t * t).exp() * 2.0 * x * sinhc
        } else {
            ((-(x - t) * (x - t)).exp() - (-(x + t) * (x + t)).exp()) / t
        }
    };
    let upper = x.abs() + 40.0;
    let peak = x.abs();
    let lo = quad::adaptive(f, 0.0, peak.max(1.0), 1e-15, 1e-13)?;
    let hi = quad::adaptive(f, peak.max(1.0), upper, 1e-15, 1e-13)?;
    Ok(lo + hi)
}

/// Hilbert transforms `h_0(x) … h_{p_max}(x)` of the Hermite weights,
/// `h_p(x) = PV ∫ e^{-u²} H_p(u) / (x - u) du`.
pub fn hilbert_hermite_sequence(p_max: usize, x: f64) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(p_max + 1);
    let h0 = hilbert_seed(x)?;
    out.push(h0);
    if p_max == 0 {
        return Ok(out);
    }
    out.push(2.0 * x * h0 - 2.0 * SQRT_PI);
    for p in 1..p_max {
        let next = 2.0 * x * out[p] - 2.0 * p as f64 * out[p - 1];
        out.push(next);
    }
    Ok(out)
}

/// Single Hilbert transform `h_p(x)`.
pub fn hilbert_hermite(p: usize, x: f64) -> Result<f64> {
    Ok(hilbert_hermite_sequence(p, x)?[p])
}

/// Airy function value and derivative at `x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AiryValue {
    pub x: f64,
    pub ai: f64,
    pub ai_prime: f64,
}

/// Largest supported `|x|`.
pub const AIRY_MAX_ARG: f64 = 200.0;
// Maclaurin series on [SERIES_LO, SERIES_HI], a Gaussian-damped integral on
// (SERIES_HI, INTEGRAL_HI], asymptotic expansions elsewhere.
const SERIES_LO: f64 = -7.0;
const SERIES_HI: f64 = 2.0;
const INTEGRAL_HI: f64 = 15.0;

const AI0: f64 = 0.355_028_053_887_817_24;
const AIP0: f64 = 0.258_819_403_792_806_8;

/// Maclaurin series: returns `(Ai, Ai', Bi, Bi')`.
pub fn airy_series(x: f64) -> (f64, f64, f64, f64) {
    let x3 = x * x * x;
    let (mut f, mut g) = (1.0, x);
    let (mut fp, mut gp) = (0.0, 1.0);
    let (mut t, mut s) = (1.0, x);
    let (mut a, mut b) = (x * x / 2.0, 1.0);
    fp += a;
    for k in 1..200 {
        let kf = k as f64;
        t *= x3 / ((3.0 * kf - 1.0) * 3.0 * kf);
        s *= x3 / (3.0 * kf * (3.0 * kf + 1.0));
        a *= x3 / ((3.0 * kf + 2.0) * 3.0 * kf);
        b *= x3 / ((3.0 * kf) * (3.0 * kf - 2.0));
        f += t;
        g += s;
        fp += a;
        gp += b;
        let scale = f.abs() + g.abs() + fp.abs() + gp.abs();
        if (t.abs() + s.abs() + a.abs() + b.abs()) <= 1e-17 * scale {
            break;
        }
    }
    let sqrt3 = 3f64.sqrt();
    (
        AI0 * f - AIP0 * g,
        AI0 * fp - AIP0 * gp,
        sqrt3 * (AI0 * f + AIP0 * g),
        sqrt3 * (AI0 * fp + AIP0 * gp),
    )
}

/// Coefficients `u_k`, `v_k` of the large-argument expansions.
fn asymptotic_coeffs(count: usize) -> (Vec<f64>, Vec<f64>) {
    let mut u = vec![1.0];
    let mut v = vec![1.0];
    for k in 1..count {
        let kf = k as f64;
        let uk = u[k - 1] * (6.0 * kf - 5.0) * (6.0 * kf - 3.0) * (6.0 * kf - 1.0)
            / ((2.0 * kf - 1.0) * 216.0 * kf);
        u.push(uk);
        v.push(-(6.0 * kf + 1.0) / (6.0 * kf - 1.0) * uk);
    }
    (u, v)
}

/// Sums `Σ sign^k c_k / ζ^k` up to the smallest term.
fn truncated(c: &[f64], zeta: f64, alternate: bool, start: usize, step: usize) -> f64 {
    let mut sum = 0.0;
    let mut last = f64::INFINITY;
    let mut j = 0;
    let mut k = start;
    while k < c.len() {
        let sign = if alternate && j % 2 == 1 { -1.0 } else { 1.0 };
        let term = c[k] / zeta.powi(k as i32);
        if term.abs() > last {
            break;
        }
        sum += sign * term;
        last = term.abs();
        if last < 1e-17 * sum.abs() {
            break;
        }
        j += 1;
        k += step;
    }
    sum
}

/// Large-`|x|` expansions: returns `(Ai, Ai', Bi, Bi')`. `Bi` overflows to
/// infinity for large positive `x`.
pub fn airy_asymptotic(x: f64) -> (f64, f64, f64, f64) {
    let (u, v) = asymptotic_coeffs(60);
    let z = x.abs();
    let zeta = 2.0 / 3.0 * z.powf(1.5);
    let q = z.powf(0.25);
    if x > 0.0 {
        let su_alt = truncated(&u, zeta, true, 0, 1);
        let sv_alt = truncated(&v, zeta, true, 0, 1);
        let su = truncated(&u, zeta, false, 0, 1);
        let sv = truncated(&v, zeta, false, 0, 1);
        let decay = (-zeta).exp();
        let grow = zeta.exp();
        (
            decay / (2.0 * SQRT_PI * q) * su_alt,
            -q * decay / (2.0 * SQRT_PI) * sv_alt,
            grow / (SQRT_PI * q) * su,
            q * grow / SQRT_PI * sv,
        )
    } else {
        let u_even = truncated(&u, zeta, true, 0, 2);
        let u_odd = truncated(&u, zeta, true, 1, 2);
        let v_even = truncated(&v, zeta, true, 0, 2);
        let v_odd = truncated(&v, zeta, true, 1, 2);
        let (sn, cs) = (zeta - FRAC_PI_4).sin_cos();
        (
            (cs * u_even + sn * u_odd) / (SQRT_PI * q),
            q / SQRT_PI * (sn * v_even - cs * v_odd),
            (-sn * u_even + cs * u_odd) / (SQRT_PI * q),
            q / SQRT_PI * (cs * v_even + sn * v_odd),
        )
    }
}

/// `Ai` and `Ai'` for `x > 0` from
/// `Ai(x) = e^{-ζ}/π ∫_0^∞ exp(-√x t²) cos(t³/3) dt`, `ζ = (2/3) x^{3/2}`.
///
/// The integrand is smooth and decays like a Gaussian, so a fixed composite
/// Gauss–Legendre rule reaches full relative precision.
pub fn airy_integral(x: f64) -> (f64, f64) {
    let r = x.sqrt();
    let upper = (46.0 / r).sqrt();
    let rule = quad::MappedRule::composite(32, 8, 0.0, upper);
    let mut i0 = 0.0;
    let mut i2 = 0.0;
    for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
        let v = w * (-r * t * t).exp() * (t * t * t / 3.0).cos();
        i0 += v;
        i2 += v * t * t;
    }
    let pref = (-2.0 / 3.0 * x * r).exp() / PI;
    let ai = pref * i0;
    (ai, -r * ai - pref * i2 / (2.0 * r))
}

fn airy_all(x: f64) -> Result<(f64, f64, f64, f64)> {
    if !x.is_finite() || x.abs() > AIRY_MAX_ARG {
        return Err(invalid(format!(
            "Airy argument {x} outside supported range |x| <= {AIRY_MAX_ARG}"
        )));
    }
    if (SERIES_LO..=SERIES_HI).contains(&x) {
        Ok(airy_series(x))
    } else if x > SERIES_HI && x <= INTEGRAL_HI {
        let (ai, aip) = airy_integral(x);
        let (_, _, bi, bip) = if x <= 5.0 { airy_series(x) } else { airy_asymptotic(x) };
        Ok((ai, aip, bi, bip))
    } else {
        Ok(airy_asymptotic(x))
    }
}

/// `Ai(x)` and `Ai'(x)` for `|x| ≤ 200`.
pub fn airy(x: f64) -> Result<AiryValue> {
    let (ai, ai_prime, _, _) = airy_all(x)?;
    Ok(AiryValue { x, ai, ai_prime })
}

/// `Ai(x)` alone; panics outside the supported range.
pub fn airy_ai(x: f64) -> f64 {
    airy(x).expect("Airy argument within supported range").ai
}

/// `Bi(x)` and `Bi'(x)`, used to validate `Ai` through the Wronskian.
pub fn airy_bi(x: f64) -> Result<(f64, f64)> {
    let (_, _, bi, bip) = airy_all(x)?;
    Ok((bi, bip))
}

/// `ψ_n` at the soft edge, `x = √(2n) - u / (√2 n^{1/6})`.
pub fn plancherel_rotach(n: usize, u: f64) -> f64 {
    let nf = n as f64;
    let x = (2.0 * nf).sqrt() - u / (std::f64::consts::SQRT_2 * nf.powf(1.0 / 6.0));
    hermite_weighted(n, x)
}

/// Leading edge asymptotic `2^{1/4} n^{-1/12} Ai(-u)` of [`plancherel_rotach`].
pub fn plancherel_rotach_limit(n: usize, u: f64) -> Result<f64> {
    Ok(2f64.powf(0.25) * (n as f64).powf(-1.0 / 12.0) * airy(-u)?.ai)
}
