//! Dense Hermitian matrices, the symmetric eigensolver (Householder
//! tridiagonalization + implicit QL with Wilkinson shifts) and pivoted
//! determinants.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Complex Hermitian matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl HermitianMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            entries: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.set_diagonal(i, d);
        }
        m
    }

    /// Builds from a full row-major array; the strict upper triangle is
    /// taken as authoritative and mirrored so Hermiticity is exact.
    pub fn from_upper(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::InvalidParameter(format!(
                "expected {} entries, got {}",
                dim * dim,
                entries.len()
            )));
        }
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set_diagonal(i, entries[i * dim + i].re);
            for j in (i + 1)..dim {
                m.set_off_diagonal(i, j, entries[i * dim + j]);
            }
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn set_diagonal(&mut self, i: usize, value: f64) {
        self.entries[i * self.dim + i] = Complex64::new(value, 0.0);
    }

    /// Sets entry `(i, j)` and its mirror `(j, i)` to the conjugate.
    pub fn set_off_diagonal(&mut self, i: usize, j: usize, value: Complex64) {
        assert_ne!(i, j, "use set_diagonal for diagonal entries");
        self.entries[i * self.dim + j] = value;
        self.entries[j * self.dim + i] = value.conj();
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i).re).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Trailing principal block obtained by deleting the first `k` rows and columns.
    pub fn trailing_block(&self, k: usize) -> Self {
        let n = self.dim - k;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.entries[i * n + j] = self.get(i + k, j + k);
            }
        }
        m
    }

    /// Copy with every off-diagonal entry of the trailing block starting at
    /// `k` zeroed, i.e. the block replaced by its diagonal.
    pub fn with_diagonal_trailing_block(&self, k: usize) -> Self {
        let mut m = self.clone();
        for i in k..self.dim {
            for j in k..self.dim {
                if i != j {
                    m.entries[i * self.dim + j] = Complex64::new(0.0, 0.0);
                }
            }
        }
        m
    }
}

/// Real eigenvalues sorted in descending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    /// Sorts the input descending. NaNs are rejected.
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidParameter("spectrum contains NaN".into()));
        }
        values.sort_by(|a, b| b.total_cmp(a));
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn largest(&self) -> f64 {
        self.values[0]
    }

    pub fn smallest(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.values
    }
}

/// Reduces a Hermitian matrix to a real symmetric tridiagonal matrix with
/// the same eigenvalues. Returns `(diagonal, off_diagonal)` where
/// `off_diagonal[k]` couples rows `k` and `k + 1`.
pub fn tridiagonalize(m: &HermitianMatrix) -> (Vec<f64>, Vec<f64>) {
    let n = m.dim();
    let mut a = m.entries.clone();
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n.saturating_sub(1)];
    let idx = |i: usize, j: usize| i * n + j;
    let mut v = vec![Complex64::new(0.0, 0.0); n];
    let mut p = vec![Complex64::new(0.0, 0.0); n];

    for k in 0..n.saturating_sub(2) {
        let start = k + 1;
        let xnorm = (start..n).map(|i| a[idx(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            off[k] = 0.0;
            continue;
        }
        let x0 = a[idx(start, k)];
        let phase = if x0.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        // alpha = -phase * |x| keeps v0 = x0 - alpha free of cancellation
        let alpha = -phase * xnorm;
        for i in start..n {
            v[i] = a[idx(i, k)];
        }
        v[start] -= alpha;
        let vnorm = (start..n).map(|i| v[i].norm_sqr()).sum::<f64>().sqrt();
        for vi in v.iter_mut().take(n).skip(start) {
            *vi /= vnorm;
        }
        // p = A v on the trailing block
        for i in start..n {
            let mut s = Complex64::new(0.0, 0.0);
            for j in start..n {
                s += a[idx(i, j)] * v[j];
            }
            p[i] = s;
        }
        let kappa: Complex64 = (start..n).map(|i| v[i].conj() * p[i]).sum();
        // w = p - (v^H p) v ; A <- A - 2 v w^H - 2 w v^H
        for i in start..n {
            p[i] -= kappa * v[i];
        }
        for i in start..n {
            for j in start..n {
                a[idx(i, j)] -= 2.0 * (v[i] * p[j].conj() + p[i] * v[j].conj());
            }
        }
        for i in start..n {
            a[idx(i, i)].im = 0.0;
        }
        off[k] = xnorm;
        a[idx(start, k)] = alpha;
        for i in (start + 1)..n {
            a[idx(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    if n >= 2 {
        off[n - 2] = a[idx(n - 1, n - 2)].norm();
    }
    for (i, d) in diag.iter_mut().enumerate() {
        *d = a[idx(i, i)].re;
    }
    (diag, off)
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with
/// Wilkinson shifts. Iteration cap is `30 * n` sweeps in total.
pub fn tridiagonal_eigenvalues(diag: &[f64], off: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    let mut d = diag.to_vec();
    let mut e = vec![0.0; n];
    e[..n.saturating_sub(1)].copy_from_slice(&off[..n.saturating_sub(1)]);
    let cap = 30 * n.max(1);
    let mut sweeps = 0usize;

    for l in 0..n {
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            sweeps += 1;
            if sweeps > cap {
                return Err(Error::NumericalFailure(format!(
                    "QL iteration exceeded {cap} sweeps"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(d)
}

/// Full spectrum of a Hermitian matrix, descending.
pub fn eigenvalues(m: &HermitianMatrix) -> Result<Spectrum> {
    let (d, e) = tridiagonalize(m);
    Spectrum::new(tridiagonal_eigenvalues(&d, &e)?)
}

/// Number of eigenvalues of the tridiagonal matrix strictly below `x`
/// (Sturm sequence count).
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = diag[0] - x;
    if q < 0.0 {
        count += 1;
    }
    for k in 1..diag.len() {
        let denom = if q == 0.0 { f64::EPSILON * (off[k - 1].abs() + 1.0) } else { q };
        q = diag[k] - x - off[k - 1] * off[k - 1] / denom;
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { off[i - 1].abs() } else { 0.0 } + if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

/// `k`-th largest eigenvalue (0-based) of a symmetric tridiagonal matrix by
/// Sturm bisection.
pub fn tridiagonal_kth_largest(diag: &[f64], off: &[f64], k: usize) -> f64 {
    let n = diag.len();
    assert!(k < n);
    let (mut lo, mut hi) = gershgorin(diag, off);
    let target = n - k; // want count(x) >= n-k  <=> x above the eigenvalue
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return mid;
        }
        if sturm_count(diag, off, mid) >= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
}

/// Sign and log-magnitude of a real square determinant (row-major), by LU
/// with partial pivoting. A singular matrix returns `(0.0, -inf)`.
pub fn log_det(matrix: &[f64], n: usize) -> (f64, f64) {
    assert_eq!(matrix.len(), n * n);
    let mut a = matrix.to_vec();
    let mut sign = 1.0;
    let mut log_abs = 0.0;
    for col in 0..n {
        let (piv, pmax) = (col..n)
            .map(|r| (r, a[r * n + col].abs()))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .expect("non-empty");
        if pmax == 0.0 {
            return (0.0, f64::NEG_INFINITY);
        }
        if piv != col {
            for j in 0..n {
                a.swap(col * n + j, piv * n + j);
            }
            sign = -sign;
        }
        let p = a[col * n + col];
        if p < 0.0 {
            sign = -sign;
        }
        log_abs += p.abs().ln();
        for r in (col + 1)..n {
            let factor = a[r * n + col] / p;
            if factor != 0.0 {
                for j in col..n {
                    a[r * n + j] -= factor * a[col * n + j];
                }
            }
        }
    }
    (sign, log_abs)
}

/// Real determinant via [`log_det`].
pub fn det(matrix: &[f64], n: usize) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let (s, l) = log_det(matrix, n);
    s * l.exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_spectrum() {
        let m = HermitianMatrix::from_real_diagonal(&[3.0, 1.0, 2.0]);
        assert_eq!(eigenvalues(&m).unwrap().values(), &[3.0, 2.0, 1.0]);
    }

    #[test]
    fn two_by_two_swap() {
        let mut m = HermitianMatrix::zeros(2);
        m.set_off_diagonal(0, 1, c(1.0, 0.0));
        let s = eigenvalues(&m).unwrap();
        assert!((s.values()[0] - 1.0).abs() < 1e-15);
        assert!((s.values()[1] + 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_two_by_two() {
        // [[1, i],[-i, 1]] has eigenvalues 2, 0
        let mut m = HermitianMatrix::from_real_diagonal(&[1.0, 1.0]);
        m.set_off_diagonal(0, 1, c(0.0, 1.0));
        let s = eigenvalues(&m).unwrap();
        assert!((s.values()[0] - 2.0).abs() < 1e-14);
        assert!(s.values()[1].abs() < 1e-14);
    }

    #[test]
    fn hermiticity_exact() {
        let mut m = HermitianMatrix::zeros(3);
        m.set_off_diagonal(0, 2, c(0.3, -0.7));
        assert_eq!(m.get(2, 0), c(0.3, 0.7));
    }

    #[test]
    fn tridiagonalization_preserves_trace_and_norm() {
        let mut m = HermitianMatrix::from_real_diagonal(&[0.5, -1.0, 2.0, 0.1, 0.0]);
        let mut t: f64 = 0.1;
        for i in 0..5 {
            for j in (i + 1)..5 {
                t += 0.37;
                m.set_off_diagonal(i, j, c(t.sin(), (2.0 * t).cos()));
            }
        }
        let (d, e) = tridiagonalize(&m);
        let tr: f64 = d.iter().sum();
        assert!((tr - m.trace()).abs() < 1e-12);
        let fro2: f64 = d.iter().map(|x| x * x).sum::<f64>() + 2.0 * e.iter().map(|x| x * x).sum::<f64>();
        assert!((fro2.sqrt() - m.norm()).abs() < 1e-12);
    }

    #[test]
    fn sturm_bisection_matches_ql() {
        let d = [0.3, -1.2, 2.5, 0.7, -0.4, 1.1];
        let e = [0.9, 0.4, 1.3, 0.2, 0.8];
        let mut ql = tridiagonal_eigenvalues(&d, &e).unwrap();
        ql.sort_by(|a, b| b.total_cmp(a));
        for (k, v) in ql.iter().enumerate() {
            let b = tridiagonal_kth_largest(&d, &e, k);
            assert!((b - v).abs() < 1e-12, "k={k}: {b} vs {v}");
        }
    }

    #[test]
    fn determinant_small() {
        let m = [2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0];
        assert!((det(&m, 3) - 18.0).abs() < 1e-12);
        let s = [1.0, 2.0, 2.0, 4.0];
        assert_eq!(det(&s, 2), 0.0);
        let neg = [0.0, 1.0, 1.0, 0.0];
        assert!((det(&neg, 2) + 1.0).abs() < 1e-15);
    }
}
