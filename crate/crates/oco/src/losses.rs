//! Convex loss oracles with convexity metadata, plus ball smoothing.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{OcoError, Result};
use crate::geometry::sample_unit_ball;
use crate::linalg::{self, SymMatrix};
use crate::vecops;

/// Convexity metadata consumed by step-size rules and theorem bounds.
/// Fields left unknown use 0 (α, α_exp), ∞ (β), or a caller-supplied G.
#[derive(Debug, Clone, Copy)]
pub struct ConvexityMeta {
    /// Gradient bound on the working domain.
    pub g: f64,
    /// Strong convexity modulus (0 = none claimed).
    pub alpha: f64,
    /// Smoothness modulus (∞ = none claimed).
    pub beta: f64,
    /// Exp-concavity modulus (0 = none claimed).
    pub alpha_exp: f64,
}

#[derive(Debug, Clone)]
pub enum LossKind {
    /// f(x) = cᵀx
    Linear { c: Vec<f64> },
    /// f(x) = ½xᵀAx + bᵀx
    Quadratic { a: SymMatrix, b: Vec<f64> },
    /// f(x) = max{0, 1 − label·aᵀx}
    Hinge { a: Vec<f64>, label: f64 },
    /// f(x) = −log(rᵀx)
    LogReturn { r: Vec<f64> },
    /// f(X) = ½ Σ_{(i,j) observed} (X_ij − M_ij)² over flattened matrices.
    SquaredObserved {
        rows: usize,
        cols: usize,
        entries: Vec<(usize, usize, f64)>,
    },
    /// Monte-Carlo ball smoothing E_{v∼B}[f(x + δv)] with frozen draws.
    Smoothed {
        inner: Box<LossOracle>,
        delta: f64,
        draws: Vec<Vec<f64>>,
    },
    /// Weighted sum Σ wᵢ fᵢ (nonnegative weights).
    Sum { terms: Vec<(f64, LossOracle)> },
}

#[derive(Debug, Clone)]
pub struct LossOracle {
    pub kind: LossKind,
    pub meta: ConvexityMeta,
}

impl LossOracle {
    pub fn linear(c: Vec<f64>) -> Self {
        let g = vecops::norm2(&c);
        LossOracle {
            kind: LossKind::Linear { c },
            meta: ConvexityMeta {
                g,
                alpha: 0.0,
                beta: 0.0,
                alpha_exp: 0.0,
            },
        }
    }

    /// Quadratic with α/β taken from the extreme eigenvalues of A;
    /// G is domain-dependent and supplied by the caller.
    pub fn quadratic(a: SymMatrix, b: Vec<f64>, g: f64) -> Result<Self> {
        vecops::check_dim(a.dim(), b.len())?;
        let (values, _) = linalg::sym_eig(&a)?;
        let alpha = values.iter().cloned().fold(f64::INFINITY, f64::min).max(0.0);
        let beta = values.iter().cloned().fold(0.0, f64::max);
        Ok(LossOracle {
            kind: LossKind::Quadratic { a, b },
            meta: ConvexityMeta {
                g,
                alpha,
                beta,
                alpha_exp: 0.0,
            },
        })
    }

    pub fn hinge(a: Vec<f64>, label: f64) -> Result<Self> {
        if label != 1.0 && label != -1.0 {
            return Err(OcoError::ConfigInvalid("hinge label must be ±1".into()));
        }
        let g = vecops::norm2(&a);
        Ok(LossOracle {
            kind: LossKind::Hinge { a, label },
            meta: ConvexityMeta {
                g,
                alpha: 0.0,
                beta: f64::INFINITY,
                alpha_exp: 0.0,
            },
        })
    }

    /// Portfolio log-loss; G depends on the (shrunk) domain and is supplied.
    pub fn log_return(r: Vec<f64>, g: f64) -> Result<Self> {
        if let Some(&bad) = r.iter().find(|v| **v <= 0.0) {
            return Err(OcoError::NonpositiveReturn(bad));
        }
        Ok(LossOracle {
            kind: LossKind::LogReturn { r },
            meta: ConvexityMeta {
                g,
                alpha: 0.0,
                beta: f64::INFINITY,
                alpha_exp: 1.0,
            },
        })
    }

    pub fn squared_observed(
        rows: usize,
        cols: usize,
        entries: Vec<(usize, usize, f64)>,
        g: f64,
    ) -> Result<Self> {
        if entries.iter().any(|(i, j, _)| *i >= rows || *j >= cols) {
            return Err(OcoError::ConfigInvalid("observed index out of range".into()));
        }
        Ok(LossOracle {
            kind: LossKind::SquaredObserved { rows, cols, entries },
            meta: ConvexityMeta {
                g,
                alpha: 0.0,
                beta: 1.0,
                alpha_exp: 0.0,
            },
        })
    }

    /// Weighted sum of oracles; metadata combines additively.
    pub fn sum(terms: Vec<(f64, LossOracle)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(OcoError::ConfigInvalid("empty loss sum".into()));
        }
        if terms.iter().any(|(w, _)| *w < 0.0 || !w.is_finite()) {
            return Err(OcoError::ConfigInvalid(
                "loss-sum weights must be nonnegative and finite".into(),
            ));
        }
        let dim = terms[0].1.dim();
        for (_, f) in &terms {
            vecops::check_dim(dim, f.dim())?;
        }
        let g = terms.iter().map(|(w, f)| w * f.meta.g).sum();
        let alpha = terms.iter().map(|(w, f)| w * f.meta.alpha).sum();
        let beta = terms.iter().map(|(w, f)| w * f.meta.beta).sum();
        Ok(LossOracle {
            kind: LossKind::Sum { terms },
            meta: ConvexityMeta {
                g,
                alpha,
                beta,
                alpha_exp: 0.0,
            },
        })
    }

    pub fn dim(&self) -> usize {
        match &self.kind {
            LossKind::Linear { c } => c.len(),
            LossKind::Quadratic { b, .. } => b.len(),
            LossKind::Hinge { a, .. } => a.len(),
            LossKind::LogReturn { r } => r.len(),
            LossKind::SquaredObserved { rows, cols, .. } => rows * cols,
            LossKind::Smoothed { inner, .. } => inner.dim(),
            LossKind::Sum { terms } => terms[0].1.dim(),
        }
    }

    pub fn value(&self, x: &[f64]) -> Result<f64> {
        vecops::check_dim(self.dim(), x.len())?;
        match &self.kind {
            LossKind::Linear { c } => Ok(vecops::dot(c, x)),
            LossKind::Quadratic { a, b } => {
                Ok(0.5 * a.quad_form(x, x)? + vecops::dot(b, x))
            }
            LossKind::Hinge { a, label } => {
                Ok((1.0 - label * vecops::dot(a, x)).max(0.0))
            }
            LossKind::LogReturn { r } => {
                let w = vecops::dot(r, x);
                if w <= 0.0 {
                    return Err(OcoError::DomainViolation(format!(
                        "log-return argument {w} is nonpositive"
                    )));
                }
                Ok(-w.ln())
            }
            LossKind::SquaredObserved { cols, entries, .. } => Ok(entries
                .iter()
                .map(|(i, j, m)| {
                    let d = x[i * cols + j] - m;
                    0.5 * d * d
                })
                .sum()),
            LossKind::Smoothed { inner, delta, draws } => {
                let mut acc = 0.0;
                for v in draws {
                    let mut p = x.to_vec();
                    vecops::axpy(&mut p, *delta, v);
                    acc += inner.value(&p)?;
                }
                Ok(acc / draws.len() as f64)
            }
            LossKind::Sum { terms } => {
                let mut acc = 0.0;
                for (w, f) in terms {
                    acc += w * f.value(x)?;
                }
                Ok(acc)
            }
        }
    }

    pub fn subgradient(&self, x: &[f64]) -> Result<Vec<f64>> {
        vecops::check_dim(self.dim(), x.len())?;
        match &self.kind {
            LossKind::Linear { c } => Ok(c.clone()),
            LossKind::Quadratic { a, b } => {
                let mut g = a.matvec(x)?;
                vecops::axpy(&mut g, 1.0, b);
                Ok(g)
            }
            LossKind::Hinge { a, label } => {
                // At the kink (margin exactly 1) return the active branch
                // −label·a — a fixed valid subgradient, for replayability.
                if label * vecops::dot(a, x) <= 1.0 {
                    Ok(vecops::scale(a, -label))
                } else {
                    Ok(vec![0.0; a.len()])
                }
            }
            LossKind::LogReturn { r } => {
                let w = vecops::dot(r, x);
                if w <= 0.0 {
                    return Err(OcoError::DomainViolation(format!(
                        "log-return argument {w} is nonpositive"
                    )));
                }
                Ok(vecops::scale(r, -1.0 / w))
            }
            LossKind::SquaredObserved { rows, cols, entries } => {
                let mut g = vec![0.0; rows * cols];
                for (i, j, m) in entries {
                    g[i * cols + j] = x[i * cols + j] - m;
                }
                Ok(g)
            }
            LossKind::Smoothed { inner, delta, draws } => {
                let mut acc = vec![0.0; x.len()];
                for v in draws {
                    let mut p = x.to_vec();
                    vecops::axpy(&mut p, *delta, v);
                    let g = inner.subgradient(&p)?;
                    vecops::axpy(&mut acc, 1.0, &g);
                }
                let n = draws.len() as f64;
                Ok(vecops::scale(&acc, 1.0 / n))
            }
            LossKind::Sum { terms } => {
                let mut acc = vec![0.0; x.len()];
                for (w, f) in terms {
                    let g = f.subgradient(x)?;
                    vecops::axpy(&mut acc, *w, &g);
                }
                Ok(acc)
            }
        }
    }

    /// Ball-smoothed oracle f̂_δ(x) = E_{v∼B}[f(x + δv)], estimated with
    /// `samples` frozen uniform-ball draws (common random numbers, so the
    /// result is a deterministic function). Linear losses pass through
    /// unchanged — smoothing is the exact identity there.
    pub fn smooth(&self, delta: f64, samples: usize, seed: u64) -> Result<LossOracle> {
        if delta <= 0.0 {
            return Err(OcoError::ConfigInvalid("smoothing delta must be > 0".into()));
        }
        if samples == 0 {
            return Err(OcoError::ConfigInvalid("need at least one sample".into()));
        }
        if let LossKind::Linear { .. } = self.kind {
            return Ok(self.clone());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = self.dim();
        let draws: Vec<Vec<f64>> = (0..samples)
            .map(|_| sample_unit_ball(&mut rng, n))
            .collect();
        let mut meta = self.meta;
        // Smoothing preserves strong convexity and Lipschitzness and
        // introduces (dim·G/δ)-smoothness.
        meta.beta = meta.beta.min(n as f64 * meta.g / delta);
        Ok(LossOracle {
            kind: LossKind::Smoothed {
                inner: Box::new(self.clone()),
                delta,
                draws,
            },
            meta,
        })
    }
}
