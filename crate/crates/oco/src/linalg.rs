//! Dense symmetric linear algebra: rank-1 inverse maintenance, Jacobi
//! eigendecomposition, matrix square root / pseudo-inverse, power iteration.
//!
//! Dimensions in this crate stay small (at most a few hundred), so the
//! kernels favour simplicity and numerical transparency over speed.

use crate::error::{OcoError, Result};
use crate::vecops;

/// Dense symmetric real matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SymMatrix {
    dim: usize,
    entries: Vec<f64>,
}

impl SymMatrix {
    pub fn zeros(dim: usize) -> Self {
        SymMatrix {
            dim,
            entries: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, 1.0);
        }
        m
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &v) in values.iter().enumerate() {
            m.set(i, i, v);
        }
        m
    }

    /// Build from a row-major slice, symmetrizing to wash out tiny asymmetry.
    pub fn from_rows(dim: usize, rows: &[f64]) -> Result<Self> {
        vecops::check_dim(dim * dim, rows.len())?;
        let mut m = SymMatrix {
            dim,
            entries: rows.to_vec(),
        };
        m.symmetrize();
        m.check_finite()?;
        Ok(m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.entries[i * self.dim + j] = v;
        self.entries[j * self.dim + i] = v;
    }

    fn symmetrize(&mut self) {
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                let avg = 0.5 * (self.get(i, j) + self.get(j, i));
                self.set(i, j, avg);
            }
        }
    }

    fn check_finite(&self) -> Result<()> {
        if self.entries.iter().any(|v| !v.is_finite()) {
            return Err(OcoError::DomainViolation(
                "non-finite matrix entry".into(),
            ));
        }
        Ok(())
    }

    pub fn matvec(&self, x: &[f64]) -> Result<Vec<f64>> {
        vecops::check_dim(self.dim, x.len())?;
        let mut out = vec![0.0; self.dim];
        for i in 0..self.dim {
            let row = &self.entries[i * self.dim..(i + 1) * self.dim];
            out[i] = vecops::dot(row, x);
        }
        Ok(out)
    }

    /// xᵀ M y
    pub fn quad_form(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        let my = self.matvec(y)?;
        vecops::check_dim(self.dim, x.len())?;
        Ok(vecops::dot(x, &my))
    }

    /// self += c · xxᵀ
    pub fn add_rank1(&mut self, c: f64, x: &[f64]) -> Result<()> {
        vecops::check_dim(self.dim, x.len())?;
        for i in 0..self.dim {
            for j in i..self.dim {
                let v = self.get(i, j) + c * x[i] * x[j];
                self.set(i, j, v);
            }
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, c: f64, other: &SymMatrix) -> Result<()> {
        vecops::check_dim(self.dim, other.dim)?;
        for (a, b) in self.entries.iter_mut().zip(&other.entries) {
            *a += c * b;
        }
        Ok(())
    }

    pub fn scale(&mut self, c: f64) {
        for a in self.entries.iter_mut() {
            *a *= c;
        }
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Frobenius inner product A • B.
    pub fn inner(&self, other: &SymMatrix) -> Result<f64> {
        vecops::check_dim(self.dim, other.dim)?;
        Ok(self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .sum())
    }

    /// A · B (result symmetrized only if the caller knows it commutes;
    /// here we return the raw product as a dense buffer).
    pub fn mul_dense(&self, other: &SymMatrix) -> Result<Vec<f64>> {
        vecops::check_dim(self.dim, other.dim)?;
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }
}

/// ‖A·B − I‖_F for symmetric A, B.
fn product_identity_drift(a: &SymMatrix, b: &SymMatrix) -> Result<f64> {
    let n = a.dim;
    let prod = a.mul_dense(b)?;
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            let d = prod[i * n + j] - target;
            acc += d * d;
        }
    }
    Ok(acc.sqrt())
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
///
/// Returns eigenvalues (unordered pairing with columns of `vectors`) and an
/// orthonormal matrix whose columns are eigenvectors: m = V diag(values) Vᵀ.
pub fn sym_eig(m: &SymMatrix) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
    let n = m.dim;
    let mut a = m.clone();
    // v[i] is the i-th eigenvector (a column of V).
    let mut v: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut e = vec![0.0; n];
            e[i] = 1.0;
            e
        })
        .collect();

    let scale = m.frobenius_norm().max(1.0);
    let tol = 1e-14 * scale;
    let max_sweeps = 100;
    for _sweep in 0..max_sweeps {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a.get(p, q).abs();
            }
        }
        if off <= tol {
            let values: Vec<f64> = (0..n).map(|i| a.get(i, i)).collect();
            return Ok((values, v));
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a.get(p, q);
                if apq.abs() <= tol / (n * n) as f64 {
                    continue;
                }
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta >= 0.0 {
                    1.0 / (theta + (1.0 + theta * theta).sqrt())
                } else {
                    -1.0 / (-theta + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;

                // Rotate rows/cols p,q of A: A ← JᵀAJ.
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, c * akp - s * akq);
                    a.set(k, q, s * akp + c * akq);
                }
                a.set(p, p, app - t * apq);
                a.set(q, q, aqq + t * apq);
                a.set(p, q, 0.0);

                // Accumulate eigenvectors.
                for k in 0..n {
                    let vkp = v[p][k];
                    let vkq = v[q][k];
                    v[p][k] = c * vkp - s * vkq;
                    v[q][k] = s * vkp + c * vkq;
                }
            }
        }
    }
    Err(OcoError::NoConvergence {
        iters: max_sweeps,
        residual: f64::NAN,
    })
}

/// Rebuild V f(diag) Vᵀ from an eigendecomposition with a spectral map.
fn from_spectrum(values: &[f64], vectors: &[Vec<f64>], f: impl Fn(f64) -> f64) -> SymMatrix {
    let n = values.len();
    let mut out = SymMatrix::zeros(n);
    for (lam, vec) in values.iter().zip(vectors) {
        let fl = f(*lam);
        if fl != 0.0 {
            out.add_rank1(fl, vec).expect("dims agree by construction");
        }
    }
    out
}

/// Matrix square root of a PSD matrix via eigendecomposition.
/// Eigenvalues in [−1e-10·scale, 0) are clamped to zero.
pub fn sqrt_psd(m: &SymMatrix) -> Result<SymMatrix> {
    let (values, vectors) = sym_eig(m)?;
    let lam_max = values.iter().cloned().fold(0.0, f64::max);
    check_psd(&values, lam_max)?;
    Ok(from_spectrum(&values, &vectors, |l| l.max(0.0).sqrt()))
}

/// Moore–Penrose pseudo-inverse of a PSD matrix.
/// `cutoff` of `None` uses 1e-12·λ_max; eigenvalues at or below the cutoff
/// are treated as zero.
pub fn pinv_psd(m: &SymMatrix, cutoff: Option<f64>) -> Result<SymMatrix> {
    let (values, vectors) = sym_eig(m)?;
    let lam_max = values.iter().cloned().fold(0.0, f64::max);
    check_psd(&values, lam_max)?;
    let cut = cutoff.unwrap_or(1e-12 * lam_max.max(1e-300));
    Ok(from_spectrum(&values, &vectors, |l| {
        if l > cut {
            1.0 / l
        } else {
            0.0
        }
    }))
}

fn check_psd(values: &[f64], lam_max: f64) -> Result<()> {
    let floor = -1e-6 * lam_max.max(1.0e-30);
    // Absolute slack of 1e-10 admits tiny negative round-off on near-zero
    // spectra, per the PSD-tolerance contract.
    for &l in values {
        if l < floor.min(-1e-10) {
            return Err(OcoError::NotPsd(l));
        }
    }
    Ok(())
}

/// Power iteration for the algebraically largest eigenpair.
///
/// The iterated matrix is m + sI with s = 1 + Σ|mᵢⱼ|, which is positive
/// definite with the same top eigenvector as m, so negative spectra and
/// sign-flipping are handled uniformly.
pub fn power_method(
    m: &SymMatrix,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<(f64, Vec<f64>)> {
    use rand::{Rng, SeedableRng};
    let n = m.dim;
    let shift = 1.0 + m.entries.iter().map(|v| v.abs()).sum::<f64>();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let nv = vecops::norm2(&v);
    for x in v.iter_mut() {
        *x /= nv;
    }

    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    for _ in 0..max_iter {
        let mut w = m.matvec(&v)?;
        vecops::axpy(&mut w, shift, &v);
        let nw = vecops::norm2(&w);
        if nw == 0.0 {
            // v is in the kernel of m + sI: impossible for PD shift, but
            // restart defensively.
            for x in v.iter_mut() {
                *x = rng.gen_range(-1.0..1.0);
            }
            let n2 = vecops::norm2(&v);
            for x in v.iter_mut() {
                *x /= n2;
            }
            continue;
        }
        for (a, b) in v.iter_mut().zip(&w) {
            *a = b / nw;
        }
        let mv = m.matvec(&v)?;
        let lam = vecops::dot(&v, &mv);
        let mut resid = mv.clone();
        vecops::axpy(&mut resid, -lam, &v);
        let r = vecops::norm2(&resid);
        if r <= tol * (1.0 + lam.abs()) {
            return Ok((lam, v));
        }
        if best.as_ref().map_or(true, |(_, _, br)| r < *br) {
            best = Some((lam, v.clone(), r));
        }
    }
    let residual = best.as_ref().map_or(f64::NAN, |(_, _, r)| *r);
    Err(OcoError::NoConvergence {
        iters: max_iter,
        residual,
    })
}

/// Dense inverse of a symmetric positive-definite matrix by Gaussian
/// elimination with partial pivoting.
pub fn invert_spd(m: &SymMatrix) -> Result<SymMatrix> {
    let n = m.dim;
    // Augmented [A | I].
    let mut a = vec![0.0; n * 2 * n];
    for i in 0..n {
        for j in 0..n {
            a[i * 2 * n + j] = m.get(i, j);
        }
        a[i * 2 * n + n + i] = 1.0;
    }
    let w = 2 * n;
    for col in 0..n {
        let mut piv = col;
        for r in (col + 1)..n {
            if a[r * w + col].abs() > a[piv * w + col].abs() {
                piv = r;
            }
        }
        if a[piv * w + col].abs() < 1e-300 {
            return Err(OcoError::SingularMatrix);
        }
        if piv != col {
            for k in 0..w {
                a.swap(col * w + k, piv * w + k);
            }
        }
        let d = a[col * w + col];
        for k in 0..w {
            a[col * w + k] /= d;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r * w + col];
            if f == 0.0 {
                continue;
            }
            for k in 0..w {
                a[r * w + k] -= f * a[col * w + k];
            }
        }
    }
    let mut rows = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            rows[i * n + j] = a[i * w + n + j];
        }
    }
    SymMatrix::from_rows(n, &rows)
}

/// Solve A x = b for symmetric positive-definite A (Gaussian elimination
/// with partial pivoting).
pub fn solve_spd(m: &SymMatrix, b: &[f64]) -> Result<Vec<f64>> {
    let n = m.dim;
    vecops::check_dim(n, b.len())?;
    let w = n + 1;
    let mut a = vec![0.0; n * w];
    for i in 0..n {
        for j in 0..n {
            a[i * w + j] = m.get(i, j);
        }
        a[i * w + n] = b[i];
    }
    for col in 0..n {
        let mut piv = col;
        for r in (col + 1)..n {
            if a[r * w + col].abs() > a[piv * w + col].abs() {
                piv = r;
            }
        }
        if a[piv * w + col].abs() < 1e-300 {
            return Err(OcoError::SingularMatrix);
        }
        if piv != col {
            for k in 0..w {
                a.swap(col * w + k, piv * w + k);
            }
        }
        let d = a[col * w + col];
        for k in col..w {
            a[col * w + k] /= d;
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let f = a[r * w + col];
            if f == 0.0 {
                continue;
            }
            for k in col..w {
                a[r * w + k] -= f * a[col * w + k];
            }
        }
    }
    Ok((0..n).map(|i| a[i * w + n]).collect())
}

/// Maintains A and A⁻¹ under rank-1 updates A ← A + xxᵀ via the matrix
/// inversion lemma, with periodic full re-inversion to bound drift.
#[derive(Debug, Clone)]
pub struct InverseTracker {
    base: SymMatrix,
    inverse: SymMatrix,
    updates_since_refresh: usize,
}

/// Full re-inversion every this many rank-1 updates.
const REFRESH_PERIOD: usize = 256;
/// ...or sooner, if ‖A·A⁻¹ − I‖_F exceeds this.
const REFRESH_DRIFT: f64 = 1e-8;

impl InverseTracker {
    /// Start from a positive-definite base matrix.
    pub fn new(base: SymMatrix) -> Result<Self> {
        let inverse = invert_spd(&base)?;
        Ok(InverseTracker {
            base,
            inverse,
            updates_since_refresh: 0,
        })
    }

    /// ε·I starting point, the usual second-order initialization.
    pub fn scaled_identity(dim: usize, eps: f64) -> Result<Self> {
        let mut base = SymMatrix::identity(dim);
        base.scale(eps);
        Self::new(base)
    }

    pub fn base(&self) -> &SymMatrix {
        &self.base
    }

    pub fn inverse(&self) -> &SymMatrix {
        &self.inverse
    }

    /// A ← A + xxᵀ, updating the cached inverse in O(dim²).
    pub fn sherman_morrison_update(&mut self, x: &[f64]) -> Result<()> {
        vecops::check_dim(self.base.dim, x.len())?;
        if x.iter().all(|&v| v == 0.0) {
            return Ok(());
        }
        let ax = self.inverse.matvec(x)?;
        let denom = 1.0 + vecops::dot(x, &ax);
        if denom <= 1e-14 {
            return Err(OcoError::DegenerateDenominator(denom));
        }
        self.base.add_rank1(1.0, x)?;
        self.inverse.add_rank1(-1.0 / denom, &ax)?;
        self.updates_since_refresh += 1;

        if self.updates_since_refresh >= REFRESH_PERIOD
            || product_identity_drift(&self.base, &self.inverse)? > REFRESH_DRIFT
        {
            self.refresh()?;
        }
        Ok(())
    }

    fn refresh(&mut self) -> Result<()> {
        self.inverse = invert_spd(&self.base)?;
        self.updates_since_refresh = 0;
        Ok(())
    }

    /// Current ‖A·A⁻¹ − I‖_F, exposed for invariant checks.
    pub fn drift(&self) -> Result<f64> {
        product_identity_drift(&self.base, &self.inverse)
    }
}
