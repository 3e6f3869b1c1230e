//! Sampling of GUE and bordered GUE matrices and exact eigenvalue densities.
//!
//! A border appends a new first row and column: corner `N[μ, σ/√2]`,
//! off-diagonal entries `N[0, σ/2] + i N[0, σ/2]`. The previous matrix
//! becomes the trailing block.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Normal};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use crate::error::{invalid, Error, Result};
use crate::linalg::{self, HermitianMatrix, Spectrum};
use crate::quad;
use crate::specfun::hermite;

const LN_PI: f64 = 1.144_729_885_849_400_2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EnsembleParams {
    pub n: usize,
    pub r: usize,
    pub mu: f64,
    pub sigma: f64,
    pub seed: u64,
}

impl EnsembleParams {
    pub fn new(n: usize, r: usize, mu: f64, sigma: f64, seed: u64) -> Result<Self> {
        let p = Self { n, r, mu, sigma, seed };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(invalid("n must be >= 1"));
        }
        check_border(self.mu, self.sigma)
    }

    /// Size of the bordered matrix.
    pub fn dim(&self) -> usize {
        self.n + self.r
    }
}

fn check_border(mu: f64, sigma: f64) -> Result<()> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(invalid(format!("sigma must be > 0 (got {sigma})")));
    }
    if !mu.is_finite() {
        return Err(invalid(format!("mu must be finite (got {mu})")));
    }
    Ok(())
}

/// Independent generator for draw `stream` of an experiment seeded by `seed`.
///
/// Every draw owns its stream, so results do not depend on how draws are
/// distributed over worker threads.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn normal(std: f64) -> Normal<f64> {
    Normal::new(0.0, std).expect("finite positive standard deviation")
}

/// GUE matrix with density proportional to `exp(-Tr X²)`.
pub fn sample_gue<R: Rng + ?Sized>(n: usize, rng: &mut R) -> HermitianMatrix {
    let diag = normal(std::f64::consts::FRAC_1_SQRT_2);
    let off = normal(0.5);
    let mut m = HermitianMatrix::zeros(n);
    for i in 0..n {
        m.set_diagonal(i, diag.sample(rng));
        for j in (i + 1)..n {
            let z = Complex64::new(off.sample(rng), off.sample(rng));
            m.set_off_diagonal(i, j, z);
        }
    }
    m
}

/// Prepends one border row and column to `core`.
pub fn border_once<R: Rng + ?Sized>(
    core: &HermitianMatrix,
    mu: f64,
    sigma: f64,
    rng: &mut R,
) -> Result<HermitianMatrix> {
    check_border(mu, sigma)?;
    let n = core.dim();
    let mut m = HermitianMatrix::zeros(n + 1);
    m.set_diagonal(0, mu + normal(sigma * std::f64::consts::FRAC_1_SQRT_2).sample(rng));
    let off = normal(0.5 * sigma);
    for j in 1..=n {
        let z = Complex64::new(off.sample(rng), off.sample(rng));
        m.set_off_diagonal(0, j, z);
    }
    for i in 0..n {
        m.set_diagonal(i + 1, core.get(i, i).re);
        for j in (i + 1)..n {
            m.set_off_diagonal(i + 1, j + 1, core.get(i, j));
        }
    }
    Ok(m)
}

/// GUE core of size `n` bordered `r` times.
pub fn sample_bordered<R: Rng + ?Sized>(params: &EnsembleParams, rng: &mut R) -> Result<HermitianMatrix> {
    params.validate()?;
    let mut m = sample_gue(params.n, rng);
    for _ in 0..params.r {
        m = border_once(&m, params.mu, params.sigma, rng)?;
    }
    Ok(m)
}

/// Single border around the diagonal matrix of the core's eigenvalues.
///
/// Bordering a Hermitian core or its diagonalization gives the same
/// eigenvalue distribution, because the border column is unitarily invariant.
pub fn border_diagonalized<R: Rng + ?Sized>(
    core: &HermitianMatrix,
    mu: f64,
    sigma: f64,
    rng: &mut R,
) -> Result<HermitianMatrix> {
    let spec = linalg::eigenvalues(core)?;
    border_once(&HermitianMatrix::from_real_diagonal(spec.values()), mu, sigma, rng)
}

/// Full spectrum of a Hermitian matrix, descending.
pub fn eigenvalues(m: &HermitianMatrix) -> Result<Spectrum> {
    linalg::eigenvalues(m)
}

/// Symmetric tridiagonal matrix `(diagonal, off_diagonal)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl Tridiagonal {
    pub fn spectrum(&self) -> Result<Spectrum> {
        Spectrum::new(linalg::tridiagonal_eigenvalues(&self.diag, &self.off)?)
    }

    pub fn largest(&self) -> f64 {
        linalg::tridiagonal_kth_largest(&self.diag, &self.off, 0)
    }

    pub fn smallest(&self) -> f64 {
        linalg::tridiagonal_kth_largest(&self.diag, &self.off, self.diag.len() - 1)
    }
}

fn push_gue_tridiagonal<R: Rng + ?Sized>(n: usize, rng: &mut R, t: &mut Tridiagonal) {
    let diag = normal(std::f64::consts::FRAC_1_SQRT_2);
    for k in 0..n {
        t.diag.push(diag.sample(rng));
        let shape = (n - 1 - k) as f64;
        if shape > 0.0 {
            let g = Gamma::new(shape, 1.0).expect("positive shape");
            t.off.push((0.5 * g.sample(rng)).sqrt());
        }
    }
}

/// Tridiagonal model with the same eigenvalue law as an `n×n` GUE matrix.
///
/// Householder reduction of a GUE matrix leaves independent entries: the
/// diagonal stays `N[0, 1/√2]` and the `k`-th off-diagonal has squared
/// modulus `Gamma(n - k, 1) / 2`.
pub fn sample_gue_tridiagonal<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Tridiagonal {
    let mut t = Tridiagonal { diag: Vec::with_capacity(n), off: Vec::with_capacity(n) };
    push_gue_tridiagonal(n, rng, &mut t);
    t
}

/// Tridiagonal model of a GUE core of size `n` with one border.
///
/// Lanczos from the border direction gives corner `N[μ, σ/√2]`, first
/// off-diagonal `|w|` with `|w|² ~ σ² Gamma(n, 1) / 2`, and then, by unitary
/// invariance of the core, the GUE tridiagonal model of size `n`.
pub fn sample_bordered_r1_tridiagonal<R: Rng + ?Sized>(
    n: usize,
    mu: f64,
    sigma: f64,
    rng: &mut R,
) -> Result<Tridiagonal> {
    check_border(mu, sigma)?;
    let mut t = Tridiagonal { diag: Vec::with_capacity(n + 1), off: Vec::with_capacity(n) };
    t.diag.push(mu + normal(sigma * std::f64::consts::FRAC_1_SQRT_2).sample(rng));
    let g = Gamma::new(n as f64, 1.0).map_err(|e| invalid(e.to_string()))?;
    t.off.push(sigma * (0.5 * g.sample(rng)).sqrt());
    push_gue_tridiagonal(n, rng, &mut t);
    Ok(t)
}

/// `(sign, ln |Δ|)` with `Δ = ∏_{i<j} (x_i - x_j)`.
pub fn ln_vandermonde(x: &[f64]) -> (f64, f64) {
    let mut sign = 1.0;
    let mut ln = 0.0;
    for i in 0..x.len() {
        for j in (i + 1)..x.len() {
            let d = x[i] - x[j];
            if d == 0.0 {
                return (0.0, f64::NEG_INFINITY);
            }
            if d < 0.0 {
                sign = -sign;
            }
            ln += d.abs().ln();
        }
    }
    (sign, ln)
}

/// `ln Z_n` where `Z_n = π^{n/2} 2^{-n(n-1)/2} ∏_{j<n} j!` normalizes the
/// ordered GUE density `exp(-Σx²) Δ(x)²`.
pub fn ln_gue_ordered_norm(n: usize) -> f64 {
    let nf = n as f64;
    let mut ln = 0.5 * nf * LN_PI - 0.5 * nf * (nf - 1.0) * std::f64::consts::LN_2;
    for j in 1..n {
        ln += ln_gamma(j as f64 + 1.0);
    }
    ln
}

/// Ordered GUE eigenvalue density `exp(-Σx²) Δ(x)² / Z_n` for descending `x`.
pub fn gue_ordered_pdf(x: &[f64]) -> f64 {
    if x.windows(2).any(|w| w[0] <= w[1]) {
        return 0.0;
    }
    let (_, ln_d) = ln_vandermonde(x);
    let q: f64 = x.iter().map(|v| v * v).sum();
    (-q + 2.0 * ln_d - ln_gue_ordered_norm(x.len())).exp()
}

/// `true` iff `λ_1 > a_1 > λ_2 > … > a_N > λ_{N+1}`.
pub fn interlaces(lambda: &[f64], a: &[f64]) -> bool {
    if lambda.len() != a.len() + 1 {
        return false;
    }
    a.iter()
        .enumerate()
        .all(|(i, &ai)| lambda[i] > ai && ai > lambda[i + 1])
}

/// Conditional density of the bordered spectrum `λ` (size `N + 1`) given the
/// core spectrum `a` (size `N`), both descending:
///
/// `(2/σ²)^N / (σ√π) · exp(-σ⁻²Σλ² + σ⁻²Σa²) · exp((2μ(Σλ - Σa) - μ²)/σ²)
///  · Δ(λ)/Δ(a) · χ(λ ≻ a)`.
pub fn joint_pdf_r1(lambda: &Spectrum, a: &Spectrum, mu: f64, sigma: f64) -> Result<f64> {
    check_border(mu, sigma)?;
    let (l, av) = (lambda.values(), a.values());
    if l.len() != av.len() + 1 {
        return Err(invalid(format!(
            "expected {} bordered eigenvalues for a core of size {}, got {}",
            av.len() + 1,
            av.len(),
            l.len()
        )));
    }
    if !interlaces(l, av) {
        return Ok(0.0);
    }
    let n = av.len() as f64;
    let s2 = sigma * sigma;
    let sum_l: f64 = l.iter().sum();
    let sum_a: f64 = av.iter().sum();
    let sq_l: f64 = l.iter().map(|x| x * x).sum();
    let sq_a: f64 = av.iter().map(|x| x * x).sum();
    let (_, dl) = ln_vandermonde(l);
    let (_, da) = ln_vandermonde(av);
    let ln = n * (2.0 / s2).ln() - sigma.ln() - 0.5 * LN_PI + (sq_a - sq_l) / s2
        + (2.0 * mu * (sum_l - sum_a) - mu * mu) / s2
        + dl
        - da;
    Ok(ln.exp())
}

/// Polynomial family used inside the `h` integrals of [`joint_pdf_rborder`].
/// The density does not depend on the choice as long as the family is monic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolyFamily {
    Monomial,
    /// Monic family adapted to the border weight (needs `σ ≠ 1`).
    Adapted,
}

fn poly_value(family: PolyFamily, k: usize, u: f64, mu: f64, sigma: f64) -> f64 {
    match family {
        PolyFamily::Monomial => u.powi(k as i32),
        PolyFamily::Adapted => {
            if k == 0 {
                return 1.0;
            }
            let si2 = 1.0 / (sigma * sigma);
            let lower = if k >= 2 { 2.0 * (k as f64 - 1.0) * hermite(k - 2, u) } else { 0.0 };
            let mid = (2.0 * (si2 - 1.0) * u - 2.0 * mu * si2) * hermite(k - 1, u);
            -(0.5f64).powi(k as i32) / (1.0 - si2) * (lower + mid)
        }
    }
}

/// Marginal density of the ordered spectrum of a GUE core of size `N`
/// bordered `r ≥ 1` times, evaluated at `λ` (size `N + r`, descending):
///
/// `Pref · exp(-σ⁻²Σλ² + 2μσ⁻²Σλ) · Δ(λ) · |det[h_{k,r-1}(λ_j) | λ_j^{r-s}]| / ∏_{s<r} s!`
///
/// with `h_{k,m}(x) = ∫_L^x (x-u)^m/m! · exp((σ⁻²-1)u² - 2μσ⁻²u) p_k(u) du`
/// for `k < N`, `L = min λ`, and
/// `Pref = ∏_{s=1}^r (2/σ²)^{N+s-1}/(σ√π) · e^{-rμ²/σ²} / Z_N`.
pub fn joint_pdf_rborder(lambda: &Spectrum, params: &EnsembleParams, family: PolyFamily) -> Result<f64> {
    check_border(params.mu, params.sigma)?;
    joint_pdf_rborder_raw(lambda.values(), params.n, params.r, params.mu, params.sigma, family)
}

/// As [`joint_pdf_rborder`], allowing an empty core (`n = 0`).
pub fn joint_pdf_rborder_raw(
    l: &[f64],
    n: usize,
    r: usize,
    mu: f64,
    sigma: f64,
    family: PolyFamily,
) -> Result<f64> {
    check_border(mu, sigma)?;
    if r == 0 {
        return Err(invalid("joint_pdf_rborder needs r >= 1"));
    }
    if family == PolyFamily::Adapted && sigma == 1.0 {
        return Err(Error::UnsupportedParameter(
            "adapted polynomial family is singular at sigma = 1".into(),
        ));
    }
    let dim = n + r;
    if l.len() != dim {
        return Err(invalid(format!("expected {dim} eigenvalues, got {}", l.len())));
    }
    if l.windows(2).any(|w| w[0] <= w[1]) {
        return Ok(0.0);
    }
    let s2 = sigma * sigma;
    let si2 = 1.0 / s2;
    let lower = l[dim - 1];
    let m = r - 1;
    let fact_m = (ln_gamma(m as f64 + 1.0)).exp();
    let weight = |u: f64| ((si2 - 1.0) * u * u - 2.0 * mu * si2 * u).exp();

    let mut mat = vec![0.0; dim * dim];
    for (j, &x) in l.iter().enumerate() {
        for k in 0..n {
            let f = |u: f64| (x - u).powi(m as i32) / fact_m * weight(u) * poly_value(family, k, u, mu, sigma);
            let v = if x == lower {
                0.0
            } else {
                quad::panels_doubling(f, lower, x, 1e-12, 1e-300).map_err(|e| {
                    Error::NumericalFailure(format!("h integral k={k} at x={x}: {e}"))
                })?
            };
            mat[j * dim + k] = v;
        }
        for s in 1..=r {
            mat[j * dim + n + s - 1] = x.powi((r - s) as i32);
        }
    }
    let (sign, ln_det) = linalg::log_det(&mat, dim);
    if sign == 0.0 {
        return Ok(0.0);
    }
    let (_, ln_d) = ln_vandermonde(l);
    let sum: f64 = l.iter().sum();
    let sq: f64 = l.iter().map(|x| x * x).sum();
    let mut ln_pref = -(r as f64) * mu * mu * si2 - ln_gue_ordered_norm(n);
    for s in 1..=r {
        ln_pref += (n + s - 1) as f64 * (2.0 * si2).ln() - sigma.ln() - 0.5 * LN_PI;
    }
    let mut ln_fact = 0.0;
    for s in 1..r {
        ln_fact += ln_gamma(s as f64 + 1.0);
    }
    Ok((ln_pref - si2 * sq + 2.0 * mu * si2 * sum + ln_d + ln_det - ln_fact).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn border_keeps_core_as_trailing_block() {
        let mut rng = stream_rng(3, 0);
        let core = sample_gue(4, &mut rng);
        let b = border_once(&core, 0.3, 1.7, &mut rng).unwrap();
        assert_eq!(b.trailing_block(1), core);
        assert_eq!(b.dim(), 5);
    }

    #[test]
    fn invalid_sigma_rejected() {
        let mut rng = stream_rng(1, 0);
        let core = sample_gue(2, &mut rng);
        assert!(matches!(border_once(&core, 0.0, 0.0, &mut rng), Err(Error::InvalidParameter(_))));
        assert!(EnsembleParams::new(3, 1, 0.0, -1.0, 0).is_err());
        assert!(EnsembleParams::new(0, 1, 0.0, 1.0, 0).is_err());
    }

    #[test]
    fn interlacing_indicator() {
        let l = Spectrum::new(vec![1.0, 0.0]).unwrap();
        let a = Spectrum::new(vec![2.0]).unwrap();
        assert_eq!(joint_pdf_r1(&l, &a, 0.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: f64 = stream_rng(9, 4).random();
        let b: f64 = stream_rng(9, 4).random();
        let c: f64 = stream_rng(9, 5).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn gue_norm_small_cases() {
        assert!((ln_gue_ordered_norm(1) - 0.5 * LN_PI).abs() < 1e-15);
        assert!((ln_gue_ordered_norm(2) - (std::f64::consts::PI / 2.0).ln()).abs() < 1e-15);
    }
}
