//! Feasible sets (balls, boxes, simplex, spectral sets) with projections and
//! linear-optimization oracles, Bregman regularizers, and log barriers.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::error::{OcoError, Result};
use crate::linalg::{self, SymMatrix};
use crate::vecops;

/// Global projection-call counter. Projection-free algorithms are certified
/// by snapshotting this before/after a run.
static PROJECTION_CALLS: AtomicU64 = AtomicU64::new(0);

pub fn projection_call_count() -> u64 {
    PROJECTION_CALLS.load(Ordering::Relaxed)
}

fn note_projection_call() {
    PROJECTION_CALLS.fetch_add(1, Ordering::Relaxed);
}

#[derive(Debug, Clone)]
pub enum SetKind {
    /// { x : ‖x − center‖₂ ≤ radius }
    EuclideanBall { center: Vec<f64>, radius: f64 },
    /// Axis-aligned box with per-coordinate bounds.
    Box { lo: Vec<f64>, hi: Vec<f64> },
    /// Probability simplex { x ≥ 0, Σx = 1 }.
    Simplex,
    /// PSD d×d matrices with trace ≤ k, flattened row-major.
    Spectahedron { k: f64, d: usize },
    /// rows×cols matrices with nuclear norm ≤ k, flattened row-major.
    NuclearBall { k: f64, rows: usize, cols: usize },
}

#[derive(Debug, Clone)]
pub struct FeasibleSet {
    dim: usize,
    kind: SetKind,
    center: Vec<f64>,
}

impl FeasibleSet {
    pub fn ball(center: Vec<f64>, radius: f64) -> Result<Self> {
        if radius <= 0.0 {
            return Err(OcoError::ConfigInvalid("ball radius must be > 0".into()));
        }
        let dim = center.len();
        Ok(FeasibleSet {
            dim,
            center: center.clone(),
            kind: SetKind::EuclideanBall { center, radius },
        })
    }

    pub fn unit_ball(dim: usize) -> Self {
        Self::ball(vec![0.0; dim], 1.0).expect("unit radius is positive")
    }

    pub fn boxed(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        vecops::check_dim(lo.len(), hi.len())?;
        if lo.iter().zip(&hi).any(|(a, b)| a >= b) {
            return Err(OcoError::ConfigInvalid("box needs lo < hi".into()));
        }
        let center: Vec<f64> = lo.iter().zip(&hi).map(|(a, b)| 0.5 * (a + b)).collect();
        Ok(FeasibleSet {
            dim: lo.len(),
            center,
            kind: SetKind::Box { lo, hi },
        })
    }

    pub fn simplex(dim: usize) -> Self {
        FeasibleSet {
            dim,
            center: vec![1.0 / dim as f64; dim],
            kind: SetKind::Simplex,
        }
    }

    pub fn spectahedron(k: f64, d: usize) -> Result<Self> {
        if k <= 0.0 {
            return Err(OcoError::ConfigInvalid("trace bound must be > 0".into()));
        }
        // (k/2d)·I: strictly PD with trace k/2, strictly inside the bound.
        let mut center = vec![0.0; d * d];
        for i in 0..d {
            center[i * d + i] = 0.5 * k / d as f64;
        }
        Ok(FeasibleSet {
            dim: d * d,
            center,
            kind: SetKind::Spectahedron { k, d },
        })
    }

    pub fn nuclear_ball(k: f64, rows: usize, cols: usize) -> Result<Self> {
        if k <= 0.0 {
            return Err(OcoError::ConfigInvalid("nuclear bound must be > 0".into()));
        }
        Ok(FeasibleSet {
            dim: rows * cols,
            center: vec![0.0; rows * cols],
            kind: SetKind::NuclearBall { k, rows, cols },
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn kind(&self) -> &SetKind {
        &self.kind
    }

    pub fn interior_center(&self) -> &[f64] {
        &self.center
    }

    /// Upper bound on the Euclidean diameter.
    pub fn diameter(&self) -> f64 {
        match &self.kind {
            SetKind::EuclideanBall { radius, .. } => 2.0 * radius,
            SetKind::Box { lo, hi } => vecops::dist2(hi, lo),
            SetKind::Simplex => 2f64.sqrt(),
            // Frobenius distance between two orthogonal rank-1 extreme points.
            SetKind::Spectahedron { k, .. } => k * 2f64.sqrt(),
            SetKind::NuclearBall { k, .. } => 2.0 * k,
        }
    }

    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        if x.len() != self.dim {
            return false;
        }
        match &self.kind {
            SetKind::EuclideanBall { center, radius } => {
                vecops::dist2(x, center) <= radius + tol
            }
            SetKind::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .all(|(v, (a, b))| *v >= a - tol && *v <= b + tol),
            SetKind::Simplex => {
                x.iter().all(|v| *v >= -tol) && (x.iter().sum::<f64>() - 1.0).abs() <= tol
            }
            SetKind::Spectahedron { k, d } => {
                let m = match SymMatrix::from_rows(*d, x) {
                    Ok(m) => m,
                    Err(_) => return false,
                };
                // Row-major flattening must already be symmetric.
                for i in 0..*d {
                    for j in 0..*d {
                        if (x[i * d + j] - x[j * d + i]).abs() > 1e-9 {
                            return false;
                        }
                    }
                }
                let (values, _) = match linalg::sym_eig(&m) {
                    Ok(v) => v,
                    Err(_) => return false,
                };
                values.iter().all(|l| *l >= -tol) && values.iter().sum::<f64>() <= k + tol
            }
            SetKind::NuclearBall { k, rows, cols } => {
                match nuclear_norm(x, *rows, *cols) {
                    Ok(n) => n <= k + tol,
                    Err(_) => false,
                }
            }
        }
    }

    /// Uniform-ish random feasible point (for probes and tests).
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        match &self.kind {
            SetKind::EuclideanBall { center, radius } => {
                let u = sample_unit_ball(rng, center.len());
                center
                    .iter()
                    .zip(&u)
                    .map(|(c, v)| c + radius * v)
                    .collect()
            }
            SetKind::Box { lo, hi } => lo
                .iter()
                .zip(hi)
                .map(|(a, b)| rng.gen_range(*a..*b))
                .collect(),
            SetKind::Simplex => {
                // Dirichlet(1,…,1) via normalized exponentials.
                let mut x: Vec<f64> = (0..self.dim)
                    .map(|_| -(1.0 - rng.gen::<f64>()).ln())
                    .collect();
                let s: f64 = x.iter().sum();
                for v in x.iter_mut() {
                    *v /= s;
                }
                x
            }
            SetKind::Spectahedron { k, d } => {
                let mut m = SymMatrix::zeros(*d);
                for _ in 0..*d {
                    let v: Vec<f64> = (0..*d).map(|_| rng.gen_range(-1.0..1.0)).collect();
                    m.add_rank1(1.0, &v).expect("dims agree");
                }
                let t = m.trace().max(1e-12);
                let target = rng.gen_range(0.0..*k);
                m.scale(target / t);
                flatten_sym(&m)
            }
            SetKind::NuclearBall { k, rows, cols } => {
                let mut x: Vec<f64> = (0..self.dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let n = nuclear_norm(&x, *rows, *cols).unwrap_or(f64::INFINITY);
                let target = rng.gen_range(0.0..*k);
                let scale = if n > 0.0 { target / n } else { 0.0 };
                for v in x.iter_mut() {
                    *v *= scale;
                }
                x
            }
        }
    }

    /// Euclidean projection Π_K(y) = argmin_{x∈K} ‖x − y‖₂.
    pub fn project_euclidean(&self, y: &[f64]) -> Result<Vec<f64>> {
        vecops::check_dim(self.dim, y.len())?;
        note_projection_call();
        match &self.kind {
            SetKind::EuclideanBall { center, radius } => {
                let d = vecops::dist2(y, center);
                if d <= *radius {
                    Ok(y.to_vec())
                } else {
                    let s = radius / d;
                    Ok(center
                        .iter()
                        .zip(y)
                        .map(|(c, v)| c + s * (v - c))
                        .collect())
                }
            }
            SetKind::Box { lo, hi } => Ok(y
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(v, (a, b))| v.max(*a).min(*b))
                .collect()),
            SetKind::Simplex => Ok(project_simplex(y)),
            SetKind::Spectahedron { .. } | SetKind::NuclearBall { .. } => Err(
                OcoError::UnsupportedSet("spectral sets have no projection routine here"),
            ),
        }
    }

    /// argmin_{x∈K} (x−y)ᵀA(x−y) for PSD A, by projected gradient descent.
    /// Stops when the objective decrease per sweep falls below `tol`.
    pub fn project_matrix_norm(
        &self,
        y: &[f64],
        a: &SymMatrix,
        tol: f64,
    ) -> Result<Vec<f64>> {
        vecops::check_dim(self.dim, y.len())?;
        vecops::check_dim(self.dim, a.dim())?;
        note_projection_call();
        if self.contains(y, 1e-12) {
            return Ok(y.to_vec());
        }
        if matches!(self.kind, SetKind::Simplex) && self.dim <= 12 {
            // Small simplex: the active-set KKT system is exactly solvable,
            // and the gradient method below degrades badly when A is
            // ill-conditioned.
            if let Some(x) = simplex_matrix_norm_projection(y, a)? {
                return Ok(x);
            }
        }
        let (lam_max, _) = linalg::power_method(a, 1e-9, 100_000, 0x5EED)?;
        if lam_max < -1e-9 {
            return Err(OcoError::NotPsd(lam_max));
        }
        if lam_max <= 1e-14 {
            // A ≈ 0: every feasible point is optimal; return the Euclidean one.
            return self.project_euclidean_internal(y);
        }
        let step = 1.0 / (2.0 * lam_max);
        let mut x = self.project_euclidean_internal(y)?;
        let obj = |x: &[f64]| -> Result<f64> {
            let d = vecops::sub(x, y);
            a.quad_form(&d, &d)
        };
        let mut f_prev = obj(&x)?;
        let max_steps = 100_000;
        for _ in 0..max_steps {
            let d = vecops::sub(&x, y);
            let g = a.matvec(&d)?; // ∇ = 2A(x−y); factor folded into step
            let mut z = x.clone();
            vecops::axpy(&mut z, -2.0 * step, &g);
            x = self.project_euclidean_internal(&z)?;
            let f = obj(&x)?;
            if f_prev - f < tol {
                return Ok(x);
            }
            f_prev = f;
        }
        Err(OcoError::NoConvergence {
            iters: max_steps,
            residual: f_prev,
        })
    }

    /// project_euclidean without double-counting the instrumentation.
    fn project_euclidean_internal(&self, y: &[f64]) -> Result<Vec<f64>> {
        let before_ok = match &self.kind {
            SetKind::Spectahedron { .. } | SetKind::NuclearBall { .. } => false,
            _ => true,
        };
        if !before_ok {
            return Err(OcoError::UnsupportedSet(
                "spectral sets have no projection routine here",
            ));
        }
        match &self.kind {
            SetKind::EuclideanBall { center, radius } => {
                let d = vecops::dist2(y, center);
                if d <= *radius {
                    Ok(y.to_vec())
                } else {
                    let s = radius / d;
                    Ok(center
                        .iter()
                        .zip(y)
                        .map(|(c, v)| c + s * (v - c))
                        .collect())
                }
            }
            SetKind::Box { lo, hi } => Ok(y
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(v, (a, b))| v.max(*a).min(*b))
                .collect()),
            SetKind::Simplex => Ok(project_simplex(y)),
            _ => unreachable!(),
        }
    }

    /// Exact minimizer of ⟨c, x⟩ over the set (an extreme point).
    pub fn linear_opt(&self, c: &[f64]) -> Result<Vec<f64>> {
        vecops::check_dim(self.dim, c.len())?;
        match &self.kind {
            SetKind::Simplex => {
                let mut x = vec![0.0; self.dim];
                x[vecops::argmin(c)] = 1.0;
                Ok(x)
            }
            SetKind::EuclideanBall { center, radius } => {
                let n = vecops::norm2(c);
                if n == 0.0 {
                    return Ok(center.clone());
                }
                Ok(center
                    .iter()
                    .zip(c)
                    .map(|(m, v)| m - radius * v / n)
                    .collect())
            }
            SetKind::Box { lo, hi } => Ok(c
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(v, (a, b))| if *v >= 0.0 { *a } else { *b })
                .collect()),
            SetKind::Spectahedron { k, d } => {
                let cm = SymMatrix::from_rows(*d, c)?;
                let mut neg = cm;
                neg.scale(-1.0);
                let (lam, v) = top_eigenpair(&neg)?;
                if lam <= 0.0 {
                    // C ⪰ 0: the zero matrix (trace 0 ≤ k) is optimal.
                    return Ok(vec![0.0; self.dim]);
                }
                let mut out = SymMatrix::zeros(*d);
                out.add_rank1(*k, &v)?;
                Ok(flatten_sym(&out))
            }
            SetKind::NuclearBall { k, rows, cols } => {
                // Top singular pair of C via the symmetric dilation
                // [[0, C], [Cᵀ, 0]]; minimizer is −k·uvᵀ.
                let (n, m) = (*rows, *cols);
                let dd = n + m;
                let mut dil = SymMatrix::zeros(dd);
                for i in 0..n {
                    for j in 0..m {
                        dil.set(i, n + j, c[i * m + j]);
                    }
                }
                let (sigma, w) = top_eigenpair(&dil)?;
                if sigma <= 1e-14 {
                    return Ok(vec![0.0; self.dim]);
                }
                let u = &w[..n];
                let v = &w[n..];
                let (nu, nv) = (vecops::norm2(u), vecops::norm2(v));
                if nu < 1e-12 || nv < 1e-12 {
                    return Ok(vec![0.0; self.dim]);
                }
                let mut out = vec![0.0; self.dim];
                for i in 0..n {
                    for j in 0..m {
                        out[i * m + j] = -k * (u[i] / nu) * (v[j] / nv);
                    }
                }
                Ok(out)
            }
        }
    }

    /// Minkowski shrinkage about the interior center: c₀ + (1−δ)(K − c₀).
    /// Requires the set to contain the unit ball around c₀ (probe-validated).
    pub fn shrink(&self, delta: f64, probes: usize, probe_seed: u64) -> Result<FeasibleSet> {
        if !(0.0 < delta && delta < 1.0) {
            return Err(OcoError::ConfigInvalid(
                "shrinkage delta must lie in (0,1)".into(),
            ));
        }
        use rand::SeedableRng;
        let mut rng = ChaCha8Rng::seed_from_u64(probe_seed);
        for _ in 0..probes {
            let u = sample_unit_sphere(&mut rng, self.dim);
            let p = vecops::add(&self.center, &u);
            if !self.contains(&p, 1e-9) {
                return Err(OcoError::CenterNotInterior);
            }
        }
        let s = 1.0 - delta;
        match &self.kind {
            SetKind::EuclideanBall { center, radius } => {
                let new_center: Vec<f64> = self
                    .center
                    .iter()
                    .zip(center)
                    .map(|(c0, c)| c0 + s * (c - c0))
                    .collect();
                FeasibleSet::ball(new_center, s * radius)
            }
            SetKind::Box { lo, hi } => {
                let nl: Vec<f64> = self
                    .center
                    .iter()
                    .zip(lo)
                    .map(|(c0, a)| c0 + s * (a - c0))
                    .collect();
                let nh: Vec<f64> = self
                    .center
                    .iter()
                    .zip(hi)
                    .map(|(c0, b)| c0 + s * (b - c0))
                    .collect();
                FeasibleSet::boxed(nl, nh)
            }
            _ => Err(OcoError::UnsupportedSet(
                "shrinkage implemented for balls and boxes",
            )),
        }
    }
}

/// Euclidean projection onto the probability simplex (sort-then-threshold).
/// Algebraically largest eigenpair: power iteration first, falling back to
/// the full Jacobi decomposition when the top of the spectrum is too
/// degenerate for power iteration to separate.
fn top_eigenpair(m: &SymMatrix) -> Result<(f64, Vec<f64>)> {
    match linalg::power_method(m, 1e-10, 50_000, 0x5EED) {
        Ok(pair) => Ok(pair),
        Err(OcoError::NoConvergence { .. }) => {
            let (values, vectors) = linalg::sym_eig(m)?;
            let mut best = 0usize;
            for (i, v) in values.iter().enumerate() {
                if *v > values[best] {
                    best = i;
                }
            }
            Ok((values[best], vectors[best].clone()))
        }
        Err(e) => Err(e),
    }
}

/// Exact argmin_{x∈Δ} (x−y)ᵀA(x−y) by support enumeration. The optimum is
/// stationary for the equality-constrained problem restricted to its own
/// support, so solving that KKT system for every support and keeping the
/// feasible candidate with the smallest objective recovers it exactly.
/// Returns Ok(None) when every subsystem is numerically singular.
fn simplex_matrix_norm_projection(y: &[f64], a: &SymMatrix) -> Result<Option<Vec<f64>>> {
    let n = y.len();
    let ay = a.matvec(y)?;
    let mut best: Option<(f64, Vec<f64>)> = None;
    for mask in 1u32..(1u32 << n) {
        let support: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let k = support.len();
        let mut b = SymMatrix::zeros(k);
        for (p, &i) in support.iter().enumerate() {
            for (q, &j) in support.iter().enumerate() {
                b.set(p, q, a.get(i, j));
            }
        }
        let rhs: Vec<f64> = support.iter().map(|&i| ay[i]).collect();
        // Stationarity on the support: A_SS x_S = (Ay)_S + (μ/2)·1, with μ
        // fixed by Σx_S = 1.
        let (u, v) = match (linalg::solve_spd(&b, &rhs), linalg::solve_spd(&b, &vec![1.0; k])) {
            (Ok(u), Ok(v)) => (u, v),
            _ => continue,
        };
        let v_sum: f64 = v.iter().sum();
        if v_sum.abs() < 1e-14 {
            continue;
        }
        let half_mu = (1.0 - u.iter().sum::<f64>()) / v_sum;
        let mut x = vec![0.0; n];
        let mut feasible = true;
        for (p, &i) in support.iter().enumerate() {
            x[i] = (u[p] + half_mu * v[p]).max(0.0);
            if u[p] + half_mu * v[p] < -1e-10 {
                feasible = false;
                break;
            }
        }
        if !feasible {
            continue;
        }
        let d = vecops::sub(&x, y);
        let obj = a.quad_form(&d, &d)?;
        if best.as_ref().map_or(true, |(f, _)| obj < *f) {
            best = Some((obj, x));
        }
    }
    Ok(best.map(|(_, x)| x))
}

pub fn project_simplex(y: &[f64]) -> Vec<f64> {
    let mut sorted = y.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cum = 0.0;
    let mut theta = 0.0;
    let mut rho = 0;
    for (i, &v) in sorted.iter().enumerate() {
        cum += v;
        let t = (cum - 1.0) / (i + 1) as f64;
        if v - t > 0.0 {
            theta = t;
            rho = i + 1;
        }
    }
    debug_assert!(rho > 0);
    let _ = rho;
    y.iter().map(|v| (v - theta).max(0.0)).collect()
}

/// Nuclear norm of a flattened rows×cols matrix: Σ√(eig(XᵀX)).
pub fn nuclear_norm(x: &[f64], rows: usize, cols: usize) -> Result<f64> {
    vecops::check_dim(rows * cols, x.len())?;
    let mut gram = SymMatrix::zeros(cols);
    for i in 0..rows {
        let row = &x[i * cols..(i + 1) * cols];
        gram.add_rank1(1.0, row)?;
    }
    let (values, _) = linalg::sym_eig(&gram)?;
    Ok(values.iter().map(|l| l.max(0.0).sqrt()).sum())
}

pub fn flatten_sym(m: &SymMatrix) -> Vec<f64> {
    let d = m.dim();
    let mut out = vec![0.0; d * d];
    for i in 0..d {
        for j in 0..d {
            out[i * d + j] = m.get(i, j);
        }
    }
    out
}

/// Uniform point on the unit sphere (Gaussian draw, normalized).
pub fn sample_unit_sphere(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    use rand_distr_free::standard_normal;
    loop {
        let v: Vec<f64> = (0..n).map(|_| standard_normal(rng)).collect();
        let norm = vecops::norm2(&v);
        if norm > 1e-12 {
            return v.iter().map(|x| x / norm).collect();
        }
    }
}

/// Uniform point in the unit ball.
pub fn sample_unit_ball(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let s = sample_unit_sphere(rng, n);
    let r: f64 = rng.gen::<f64>().powf(1.0 / n as f64);
    s.iter().map(|x| r * x).collect()
}

/// Box–Muller standard normal (kept local; avoids pulling a distributions crate).
mod rand_distr_free {
    use rand::Rng;
    use rand_chacha::ChaCha8Rng;

    pub fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
        let u1: f64 = 1.0 - rng.gen::<f64>(); // (0,1]
        let u2: f64 = rng.gen();
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    }
}

#[derive(Debug, Clone)]
pub enum Regularizer {
    /// R(x) = ½‖x − anchor‖²
    EuclideanHalfSq { anchor: Vec<f64> },
    /// R(x) = Σ xᵢ ln xᵢ on the positive orthant.
    NegEntropy,
}

impl Regularizer {
    pub fn euclidean(dim: usize) -> Self {
        Regularizer::EuclideanHalfSq {
            anchor: vec![0.0; dim],
        }
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        match self {
            Regularizer::EuclideanHalfSq { anchor } => {
                vecops::check_dim(anchor.len(), x.len())?;
                Ok(0.5 * vecops::dist2(x, anchor).powi(2))
            }
            Regularizer::NegEntropy => {
                check_positive(x)?;
                Ok(x.iter().map(|v| v * v.ln()).sum())
            }
        }
    }

    pub fn grad(&self, x: &[f64]) -> Result<Vec<f64>> {
        match self {
            Regularizer::EuclideanHalfSq { anchor } => {
                vecops::check_dim(anchor.len(), x.len())?;
                Ok(vecops::sub(x, anchor))
            }
            Regularizer::NegEntropy => {
                check_positive(x)?;
                Ok(x.iter().map(|v| 1.0 + v.ln()).collect())
            }
        }
    }

    /// B_R(x‖y) = R(x) − R(y) − ∇R(y)ᵀ(x − y).
    pub fn bregman(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        vecops::check_dim(x.len(), y.len())?;
        match self {
            Regularizer::EuclideanHalfSq { .. } => {
                Ok(0.5 * vecops::dist2(x, y).powi(2))
            }
            Regularizer::NegEntropy => {
                check_positive(y)?;
                // Generalized KL; plain relative entropy when both sum to 1.
                let mut acc = 0.0;
                for (&xi, &yi) in x.iter().zip(y) {
                    if xi < 0.0 {
                        return Err(OcoError::DomainViolation(
                            "negative coordinate in entropy divergence".into(),
                        ));
                    }
                    if xi > 0.0 {
                        acc += xi * (xi / yi).ln();
                    }
                    acc += yi - xi;
                }
                Ok(acc)
            }
        }
    }

    /// argmin_{x∈K} B_R(x‖y).
    pub fn bregman_project(&self, set: &FeasibleSet, y: &[f64]) -> Result<Vec<f64>> {
        match (self, set.kind()) {
            (Regularizer::EuclideanHalfSq { .. }, _) => set.project_euclidean(y),
            (Regularizer::NegEntropy, SetKind::Simplex) => {
                check_positive(y)?;
                let s = vecops::norm1(y);
                Ok(y.iter().map(|v| v / s).collect())
            }
            (Regularizer::NegEntropy, _) => Err(OcoError::UnsupportedCombination(
                "entropy projection implemented for the simplex only",
            )),
        }
    }
}

fn check_positive(x: &[f64]) -> Result<()> {
    if x.iter().any(|v| *v <= 0.0) {
        return Err(OcoError::DomainViolation(
            "entropy domain requires strictly positive coordinates".into(),
        ));
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub enum Barrier {
    /// −log(1 − ‖x‖²) on the open unit ball; self-concordance parameter ν = 1.
    BallLog { dim: usize },
    /// −Σ [log(hiᵢ−xᵢ) + log(xᵢ−loᵢ)]; ν = 2·dim.
    BoxLog { lo: Vec<f64>, hi: Vec<f64> },
}

impl Barrier {
    pub fn nu(&self) -> f64 {
        match self {
            Barrier::BallLog { .. } => 1.0,
            Barrier::BoxLog { lo, .. } => 2.0 * lo.len() as f64,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Barrier::BallLog { dim } => *dim,
            Barrier::BoxLog { lo, .. } => lo.len(),
        }
    }

    /// Analytic center (∇R = 0).
    pub fn analytic_center(&self) -> Vec<f64> {
        match self {
            Barrier::BallLog { dim } => vec![0.0; *dim],
            Barrier::BoxLog { lo, hi } => {
                lo.iter().zip(hi).map(|(a, b)| 0.5 * (a + b)).collect()
            }
        }
    }

    pub fn eval(&self, x: &[f64]) -> Result<(f64, Vec<f64>, SymMatrix)> {
        vecops::check_dim(self.dim(), x.len())?;
        match self {
            Barrier::BallLog { dim } => {
                let n = *dim;
                let s = 1.0 - vecops::dot(x, x);
                if s <= 0.0 {
                    return Err(OcoError::BoundaryViolation);
                }
                let value = -s.ln();
                let grad = vecops::scale(x, 2.0 / s);
                let mut hess = SymMatrix::identity(n);
                hess.scale(2.0 / s);
                hess.add_rank1(4.0 / (s * s), x)?;
                Ok((value, grad, hess))
            }
            Barrier::BoxLog { lo, hi } => {
                let n = lo.len();
                let mut value = 0.0;
                let mut grad = vec![0.0; n];
                let mut hess = SymMatrix::zeros(n);
                for i in 0..n {
                    let up = hi[i] - x[i];
                    let dn = x[i] - lo[i];
                    if up <= 0.0 || dn <= 0.0 {
                        return Err(OcoError::BoundaryViolation);
                    }
                    value -= up.ln() + dn.ln();
                    grad[i] = 1.0 / up - 1.0 / dn;
                    hess.set(i, i, 1.0 / (up * up) + 1.0 / (dn * dn));
                }
                Ok((value, grad, hess))
            }
        }
    }

    pub fn contains_strictly(&self, x: &[f64]) -> bool {
        self.eval(x).is_ok()
    }
}
