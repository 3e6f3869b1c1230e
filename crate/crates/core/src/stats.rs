//! Goodness-of-fit statistics used to compare Monte Carlo output with
//! analytic predictions.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use crate::error::{invalid, Result};

/// Binned counts over ascending edges. Samples outside `[edges[0], edges[last])`
/// are tallied separately and do not enter `counts`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    edges: Vec<f64>,
    counts: Vec<u64>,
    total: u64,
    outside: u64,
}

impl Histogram {
    pub fn new(edges: Vec<f64>) -> Result<Self> {
        if edges.len() < 2 {
            return Err(invalid("histogram needs at least two edges"));
        }
        if edges.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid("histogram edges must be strictly ascending"));
        }
        let bins = edges.len() - 1;
        Ok(Self { edges, counts: vec![0; bins], total: 0, outside: 0 })
    }

    pub fn uniform(lo: f64, hi: f64, bins: usize) -> Result<Self> {
        if bins == 0 || !(lo < hi) {
            return Err(invalid(format!("bad histogram range [{lo}, {hi}) with {bins} bins")));
        }
        let h = (hi - lo) / bins as f64;
        let mut edges: Vec<f64> = (0..bins).map(|k| lo + k as f64 * h).collect();
        edges.push(hi);
        Self::new(edges)
    }

    pub fn add(&mut self, x: f64) {
        let last = self.edges[self.edges.len() - 1];
        if !(x >= self.edges[0] && x < last) {
            self.outside += 1;
            return;
        }
        // first edge strictly greater than x, minus one
        let idx = self.edges.partition_point(|&e| e <= x) - 1;
        self.counts[idx] += 1;
        self.total += 1;
    }

    pub fn extend<I: IntoIterator<Item = f64>>(&mut self, xs: I) {
        for x in xs {
            self.add(x);
        }
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of in-range samples, equal to the sum of `counts`.
    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn outside(&self) -> u64 {
        self.outside
    }

    pub fn bins(&self) -> usize {
        self.counts.len()
    }

    /// Sample density per bin, normalized by `norm` samples.
    pub fn density(&self, norm: f64) -> Vec<f64> {
        self.counts
            .iter()
            .zip(self.edges.windows(2))
            .map(|(&c, w)| c as f64 / (norm * (w[1] - w[0])))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChiSquareResult {
    pub statistic: f64,
    pub dof: usize,
    pub p_value: f64,
    /// Bins left after merging sparse neighbours.
    pub bins_used: usize,
}

/// Pearson χ² test of `observed` against `expected` counts. Adjacent bins are
/// merged left to right until every merged bin expects at least
/// `min_expected`; a short remainder is folded into the last merged bin.
pub fn chi_square(observed: &[f64], expected: &[f64], min_expected: f64) -> Result<ChiSquareResult> {
    if observed.len() != expected.len() || observed.is_empty() {
        return Err(invalid("observed and expected must be non-empty and of equal length"));
    }
    let mut merged: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&ob, &ex) in observed.iter().zip(expected) {
        o += ob;
        e += ex;
        if e >= min_expected {
            merged.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match merged.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => merged.push((o, e)),
        }
    }
    if merged.len() < 2 {
        return Err(invalid("fewer than two bins after merging"));
    }
    let statistic: f64 = merged.iter().map(|&(o, e)| (o - e) * (o - e) / e).sum();
    let dof = merged.len() - 1;
    let dist = ChiSquared::new(dof as f64).map_err(|err| invalid(err.to_string()))?;
    Ok(ChiSquareResult { statistic, dof, p_value: dist.sf(statistic), bins_used: merged.len() })
}

/// Kolmogorov survival function `Q(λ) = 2 Σ (-1)^{k-1} e^{-2k²λ²}`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let kf = k as f64;
        let term = (-2.0 * kf * kf * lambda * lambda).exp();
        sum += if k % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

fn ks_p_value(d: f64, n_eff: f64) -> f64 {
    let s = n_eff.sqrt();
    kolmogorov_sf((s + 0.12 + 0.11 / s) * d)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    pub statistic: f64,
    pub p_value: f64,
}

/// Two-sample Kolmogorov–Smirnov test with the asymptotic p-value.
pub fn ks_two_sample(a: &[f64], b: &[f64]) -> Result<KsResult> {
    if a.is_empty() || b.is_empty() {
        return Err(invalid("KS test needs non-empty samples"));
    }
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    x.sort_by(f64::total_cmp);
    y.sort_by(f64::total_cmp);
    let (n, m) = (x.len() as f64, y.len() as f64);
    let (mut i, mut j) = (0usize, 0usize);
    let mut d: f64 = 0.0;
    while i < x.len() && j < y.len() {
        let v = x[i].min(y[j]);
        while i < x.len() && x[i] <= v {
            i += 1;
        }
        while j < y.len() && y[j] <= v {
            j += 1;
        }
        d = d.max((i as f64 / n - j as f64 / m).abs());
    }
    Ok(KsResult { statistic: d, p_value: ks_p_value(d, n * m / (n + m)) })
}

/// One-sample KS distance between the empirical law of `samples` and `cdf`.
pub fn ks_one_sample<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<KsResult> {
    if samples.is_empty() {
        return Err(invalid("KS test needs a non-empty sample"));
    }
    let mut x = samples.to_vec();
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    let mut d: f64 = 0.0;
    for (k, &v) in x.iter().enumerate() {
        let f = cdf(v);
        d = d.max((f - k as f64 / n).abs()).max(((k + 1) as f64 / n - f).abs());
    }
    Ok(KsResult { statistic: d, p_value: ks_p_value(d, n) })
}

/// Mean, sample standard deviation and standard error of the mean.
pub fn mean_std_se(xs: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    let sd = var.sqrt();
    (mean, sd, sd / n.sqrt())
}
