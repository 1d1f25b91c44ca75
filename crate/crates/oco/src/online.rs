//! Full-information online learners sharing one decide→observe contract:
//! OGD, SGD, FTL/RFTL, OMD (lazy/agile), EG, full-matrix AdaGrad, ONS,
//! OCG, and follow-the-perturbed-leader.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{OcoError, Result};
use crate::geometry::{FeasibleSet, Regularizer, SetKind};
use crate::linalg::{self, InverseTracker, SymMatrix};
use crate::losses::LossOracle;
use crate::offline::StepRule;
use crate::vecops;

/// One decision per round: read `decision()`, then feed the revealed loss
/// to `observe`, which advances the state to the next round.
pub trait OnlineLearner {
    fn decision(&self) -> &[f64];
    fn observe(&mut self, f: &LossOracle) -> Result<()>;
}

fn debug_check_feasible(set: &FeasibleSet, x: &[f64]) {
    debug_assert!(set.contains(x, 1e-7), "emitted infeasible decision");
}

/// Online gradient descent: y_{t+1} = x_t − η_t ∇_t, x_{t+1} = Π_K(y_{t+1}).
pub struct Ogd {
    set: FeasibleSet,
    x: Vec<f64>,
    t: usize,
    rule: StepRule,
}

impl Ogd {
    pub fn new(set: FeasibleSet, x1: Vec<f64>, rule: StepRule) -> Result<Self> {
        if !set.contains(&x1, 1e-9) {
            return Err(OcoError::DomainViolation("x1 not feasible".into()));
        }
        Ok(Ogd {
            set,
            x: x1,
            t: 0,
            rule,
        })
    }

    /// η_t = D/(G√t) with D taken from the set.
    pub fn diminishing(set: FeasibleSet, x1: Vec<f64>, g: f64) -> Result<Self> {
        if g <= 0.0 || !g.is_finite() {
            return Err(OcoError::MetadataMissing("gradient bound G"));
        }
        let d = set.diameter();
        Self::new(set, x1, StepRule::DiminishingGeneral { d, g })
    }

    /// η_t = 1/(αt) for α-strongly-convex losses.
    pub fn strongly_convex(set: FeasibleSet, x1: Vec<f64>, alpha: f64) -> Result<Self> {
        if alpha <= 0.0 {
            return Err(OcoError::MetadataMissing("strong convexity alpha"));
        }
        Self::new(set, x1, StepRule::StronglyConvex { alpha })
    }
}

impl OnlineLearner for Ogd {
    fn decision(&self) -> &[f64] {
        &self.x
    }

    fn observe(&mut self, f: &LossOracle) -> Result<()> {
        self.t += 1;
        let g = f.subgradient(&self.x)?;
        let eta = self.rule.eta(self.t, f.meta.beta)?;
        let mut y = self.x.clone();
        vecops::axpy(&mut y, -eta, &g);
        self.x = self.set.project_euclidean(&y)?;
        debug_check_feasible(&self.set, &self.x);
        Ok(())
    }
}

/// Stochastic gradient descent over unbiased gradient estimates; returns the
/// plain iterate average x̄_T = (1/T)Σ x_t.
pub fn sgd<O>(
    mut oracle: O,
    set: &FeasibleSet,
    x1: &[f64],
    t_max: usize,
    rule: StepRule,
    seed: u64,
) -> Result<Vec<f64>>
where
    O: FnMut(&[f64], &mut ChaCha8Rng) -> Result<Vec<f64>>,
{
    if !set.contains(x1, 1e-9) {
        return Err(OcoError::DomainViolation("x1 not feasible".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = x1.to_vec();
    let mut avg = vec![0.0; x1.len()];
    for t in 1..=t_max {
        vecops::axpy(&mut avg, 1.0 / t_max as f64, &x);
        let g = oracle(&x, &mut rng)?;
        let eta = rule.eta(t, f64::INFINITY)?;
        let mut y = x.clone();
        vecops::axpy(&mut y, -eta, &g);
        x = set.project_euclidean(&y)?;
    }
    Ok(avg)
}

/// Follow-the-leader over the linearized losses (no regularization):
/// x_{t+1} = argmin_{x∈K} Σ_s ∇_sᵀ x. Kept as the instability witness.
pub struct Ftl {
    set: FeasibleSet,
    grad_sum: Vec<f64>,
    x: Vec<f64>,
}

impl Ftl {
    pub fn new(set: FeasibleSet, x1: Vec<f64>) -> Result<Self> {
        if !set.contains(&x1, 1e-9) {
            return Err(OcoError::DomainViolation("x1 not feasible".into()));
        }
        let grad_sum = vec![0.0; x1.len()];
        Ok(Ftl { set, grad_sum, x: x1 })
    }
}

impl OnlineLearner for Ftl {
    fn decision(&self) -> &[f64] {
        &self.x
    }

    fn observe(&mut self, f: &LossOracle) -> Result<()> {
        let g = f.subgradient(&self.x)?;
        vecops::axpy(&mut self.grad_sum, 1.0, &g);
        self.x = self.set.linear_opt(&self.grad_sum)?;
        Ok(())
    }
}

/// Regularized follow-the-leader:
/// x_{t+1} = argmin_{x∈K} { η Σ_s ∇_sᵀx + R(x) }.
///
/// The inner argmin uses exact closed forms: for the Euclidean regularizer
/// it is Π_K(anchor − η Σ∇) on any projectable set, and for negative entropy
/// over the simplex it is the softmax of −η Σ∇.
pub struct Rftl {
    set: FeasibleSet,
    reg: Regularizer,
    eta: f64,
    grad_sum: Vec<f64>,
    x: Vec<f64>,
}

impl Rftl {
    pub fn new(set: FeasibleSet, reg: Regularizer, eta: f64) -> Result<Self> {
        if eta <= 0.0 {
            return Err(OcoError::ConfigInvalid("eta must be > 0".into()));
        }
        let x1 = Self::argmin(&set, &reg, &vec![0.0; set.dim()], eta)?;
        let grad_sum = vec![0.0; set.dim()];
        Ok(Rftl {
            set,
            reg,
            eta,
            grad_sum,
            x: x1,
        })
    }

    fn argmin(
        set: &FeasibleSet,
        reg: &Regularizer,
        grad_sum: &[f64],
        eta: f64,
    ) -> Result<Vec<f64>> {
        match (reg, set.kind()) {
            (Regularizer::EuclideanHalfSq { anchor }, _) => {
                let mut y = anchor.clone();
                vecops::axpy(&mut y, -eta, grad_sum);
                set.project_euclidean(&y)
            }
            (Regularizer::NegEntropy, SetKind::Simplex) => {
                Ok(softmax_of_neg(grad_sum, eta))
            }
            (Regularizer::NegEntropy, _) => Err(OcoError::UnsupportedCombination(
                "entropy RFTL implemented for the simplex only",
            )),
        }
    }
}

/// x ∝ exp(−η·v), computed with max-subtraction for stability.
fn softmax_of_neg(v: &[f64], eta: f64) -> Vec<f64> {
    let m = v.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut x: Vec<f64> = v.iter().map(|g| (-eta * (g - m)).exp()).collect();
    let s: f64 = x.iter().sum();
    for xi in x.iter_mut() {
        *xi /= s;
    }
    x
}

impl OnlineLearner for Rftl {
    fn decision(&self) -> &[f64] {
        &self.x
    }

    fn observe(&mut self, f: &LossOracle) -> Result<()> {
        let g = f.subgradient(&self.x)?;
        vecops::axpy(&mut self.grad_sum, 1.0, &g);
        self.x = Self::argmin(&self.set, &self.reg, &self.grad_sum, self.eta)?;
        debug_check_feasible(&self.set, &self.x);
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OmdMode {
    Lazy,
    Agile,
}

/// Online mirror descent. Euclidean mirror map on any projectable set;
/// negative-entropy mirror map on the simplex (log-space, coordinates
/// floored at 1e-300 before taking logs in agile mode).
pub struct Omd {
    set: FeasibleSet,
    reg: Regularizer,
    eta: f64,
    mode: OmdMode,
    /// Euclidean: y_t itself. Entropy: ln y_t.
    dual: Vec<f64>,
    x: Vec<f64>,
}

impl Omd {
    pub fn new(
        set: FeasibleSet,
        reg: Regularizer,
        eta: f64,
        mode: OmdMode,
        x1: Vec<f64>,
    ) -> Result<Self> {
        if eta <= 0.0 {
            return Err(OcoError::ConfigInvalid("eta must be > 0".into()));
        }
        if !set.contains(&x1, 1e-9) {
            return Err(OcoError::DomainViolation("x1 not feasible".into()));
        }
        let dual = match &reg {
            Regularizer::EuclideanHalfSq { .. } => x1.clone(),
            Regularizer::NegEntropy => {
                if !matches!(set.kind(), SetKind::Simplex) {
                    return Err(OcoError::UnsupportedCombination(
                        "entropy OMD implemented for the simplex only",
                    ));
                }
                x1.iter().map(|v| v.max(1e-300).ln()).collect()
            }
        };
        Ok(Omd {
            set,
            reg,
            eta,
            mode,
            dual,
            x: x1,
        })
    }
}

impl OnlineLearner for Omd {
    fn decision(&self) -> &[f64] {
        &self.x
    }

    fn observe(&mut self, f: &LossOracle) -> Result<()> {
        let g = f.subgradient(&self.x)?;
        match &self.reg {
            Regularizer::EuclideanHalfSq { .. } => {
                if self.mode == OmdMode::Agile {
                    self.dual = self.x.clone();
                }
                vecops::axpy(&mut self.dual, -self.eta, &g);
                self.x = self.set.project_euclidean(&self.dual)?;
            }
            Regularizer::NegEntropy => {
                if self.mode == OmdMode::Agile {
                    self.dual = self.x.iter().map(|v| v.max(1e-300).ln()).collect();
                }
                vecops::axpy(&mut self.dual, -self.eta, &g);
                // Bregman projection onto the simplex = ℓ₁ normalization,
                // done in log-space.
                let m = self.dual.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let w: Vec<f64> = self.dual.iter().map(|l| (l - m).exp()).collect();
                let s: f64 = w.iter().sum();
                self.x = w.iter().map(|v| v / s).collect();
            }
        }
        debug_check_feasible(&self.set, &self.x);
        Ok(())
    }
}

/// Exponentiated gradient over the simplex, in log-space:
/// ln y_{t+1} = ln y_t − η ∇_t, x = y/‖y‖₁.
pub struct Eg {
    n: usize,
    eta: f64,
    log_w: Vec<f64>,
    x: Vec<f64>,
}

impl Eg {
    pub fn new(n: usize, eta: f64) -> Result<Self> {
        if eta <= 0.0 {
            return Err(OcoError::ConfigInvalid("eta must be > 0".into()));
        }
        Ok(Eg {
            n,
            eta,
            log_w: vec![0.0; n],
            x: vec![1.0 / n as f64; n],
        })
    }

    /// η = √(ln n / (2T·G∞²)).
    pub fn auto(n: usize, t_horizon: usize, g_inf: f64) -> Result<Self> {
        if g_inf <= 0.0 || !g_inf.is_finite() {
            return Err(OcoError::MetadataMissing("infinity-norm gradient bound"));
        }
        let eta = ((n as f64).ln() / (2.0 * t_horizon as f64 * g_inf * g_inf)).sqrt();
        Self::new(n, eta)
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }
}

impl OnlineLearner for Eg {
    fn decision(&self) -> &[f64] {
        &self.x
    }

    fn observe(&mut self, f: &LossOracle) -> Result<()> {
        let g = f.subgradient(&self.x)?;
        vecops::check_dim(self.n, g.len())?;
        vecops::axpy(&mut self.log_w, -self.eta, &g);
        let m = self.log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = self.log_w.iter().map(|l| (l - m).exp()).collect();
        let s: f64 = w.iter().sum();
        self.x = w.iter().map(|v| v / s).collect();
        Ok(())
    }
}

/// Full-matrix AdaGrad: S_t = S_{t-1} + ∇∇ᵀ, G_t = S_t^{1/2},
/// y = x − η G_t⁺ ∇, x = argmin_K ‖y − x‖²_{G_t}; η = D.
pub struct AdaGrad {
    set: FeasibleSet,
    x: Vec<f64>,
    s: SymMatrix,
    eta: f64,
    proj_tol: f64,
}

impl AdaGrad {
    pub fn new(set: FeasibleSet, x1: Vec<f64>) -> Result<Self> {
        if !set.contains(&x1, 1e-9) {
            return Err(OcoError::DomainViolation("x1 not feasible".into()));
        }
        let n = set.dim();
        let eta = set.diameter();
        Ok(AdaGrad {
            set,
            x: x1,
            s: SymMatrix::zeros(n),
            eta,
            proj_tol: 1e-12,
        })
    }

    /// Tr(G_T), the run-computed quantity in the regret guarantee.
    pub fn trace_gt(&self) -> Result<f64> {
        Ok(linalg::sqrt_psd(&self.s)?.trace())
    }
}

impl OnlineLearner for AdaGrad {
    fn decision(&self) -> &[f64] {
        &self.x
    }

    fn observe(&mut self, f: &LossOracle) -> Result<()> {
        let g = f.subgradient(&self.x)?;
        self.s.add_rank1(1.0, &g)?;
        let gt = linalg::sqrt_psd(&self.s)?;
        let pinv = linalg::pinv_psd(&gt, None)?;
        let step = pinv.matvec(&g)?;
        let mut y = self.x.clone();
        vecops::axpy(&mut y, -self.eta, &step);
        self.x = self.set.project_matrix_norm(&y, &gt, self.proj_tol)?;
        debug_check_feasible(&self.set, &self.x);
        Ok(())
    }
}

/// Online Newton step: A_t = A_{t-1} + ∇∇ᵀ (A₀ = εI),
/// y = x − (1/γ)A_t⁻¹∇, x = argmin_K ‖y − x‖²_{A_t};
/// γ = ½·min{1/(4GD), α}, ε = 1/(γ²D²).
pub struct Ons {
    set: FeasibleSet,
    x: Vec<f64>,
    tracker: InverseTracker,
    gamma: f64,
    proj_tol: f64,
}

impl Ons {
    pub fn new(set: FeasibleSet, x1: Vec<f64>, alpha_exp: f64, g: f64) -> Result<Self> {
        if alpha_exp <= 0.0 {
            return Err(OcoError::MetadataMissing("exp-concavity alpha"));
        }
        if g <= 0.0 || !g.is_finite() {
            return Err(OcoError::MetadataMissing("gradient bound G"));
        }
        let d = set.diameter();
        let gamma = 0.5 * (1.0 / (4.0 * g * d)).min(alpha_exp);
        let eps = 1.0 / (gamma * gamma * d * d);
        Self::with_parameters(set, x1, gamma, eps)
    }

    pub fn with_parameters(
        set: FeasibleSet,
        x1: Vec<f64>,
        gamma: f64,
        eps: f64,
    ) -> Result<Self> {
        if !set.contains(&x1, 1e-9) {
            return Err(OcoError::DomainViolation("x1 not feasible".into()));
        }
        let tracker = InverseTracker::scaled_identity(set.dim(), eps)?;
        Ok(Ons {
            set,
            x: x1,
            tracker,
            gamma,
            proj_tol: 1e-12,
        })
    }

    pub fn a_matrix(&self) -> &SymMatrix {
        self.tracker.base()
    }
}

impl OnlineLearner for Ons {
    fn decision(&self) -> &[f64] {
        &self.x
    }

    fn observe(&mut self, f: &LossOracle) -> Result<()> {
        let g = f.subgradient(&self.x)?;
        self.tracker.sherman_morrison_update(&g)?;
        let step = self.tracker.inverse().matvec(&g)?;
        let mut y = self.x.clone();
        vecops::axpy(&mut y, -1.0 / self.gamma, &step);
        self.x = self
            .set
            .project_matrix_norm(&y, self.tracker.base(), self.proj_tol)?;
        debug_check_feasible(&self.set, &self.x);
        Ok(())
    }
}

/// Online conditional gradient (projection-free):
/// F_t(x) = η Σ_{τ≤t} ∇_τᵀx + ‖x − x₁‖²,
/// v_t = argmin_K ⟨∇F_t(x_t), ·⟩, x_{t+1} = (1−σ_t)x_t + σ_t v_t,
/// with η = D/(2G·T^{3/4}) and σ_t = min{1, 2/√t}.
pub struct Ocg {
    set: FeasibleSet,
    x1: Vec<f64>,
    x: Vec<f64>,
    grad_sum: Vec<f64>,
    eta: f64,
    t: usize,
}

impl Ocg {
    pub fn new(set: FeasibleSet, x1: Vec<f64>, t_horizon: usize, g: f64) -> Result<Self> {
        if g <= 0.0 || !g.is_finite() {
            return Err(OcoError::MetadataMissing("gradient bound G"));
        }
        let d = set.diameter();
        let eta = d / (2.0 * g * (t_horizon as f64).powf(0.75));
        Self::with_eta(set, x1, eta)
    }

    pub fn with_eta(set: FeasibleSet, x1: Vec<f64>, eta: f64) -> Result<Self> {
        if !set.contains(&x1, 1e-9) {
            return Err(OcoError::DomainViolation("x1 not feasible".into()));
        }
        let n = set.dim();
        Ok(Ocg {
            set,
            x: x1.clone(),
            x1,
            grad_sum: vec![0.0; n],
            eta,
            t: 0,
        })
    }
}

impl OnlineLearner for Ocg {
    fn decision(&self) -> &[f64] {
        &self.x
    }

    fn observe(&mut self, f: &LossOracle) -> Result<()> {
        self.t += 1;
        let g = f.subgradient(&self.x)?;
        vecops::axpy(&mut self.grad_sum, 1.0, &g);
        // ∇F_t(x_t) = η Σ∇ + 2(x_t − x₁)
        let mut dir = vecops::scale(&self.grad_sum, self.eta);
        vecops::axpy(&mut dir, 2.0, &self.x);
        vecops::axpy(&mut dir, -2.0, &self.x1);
        let v = self.set.linear_opt(&dir)?;
        let sigma = (2.0 / (self.t as f64).sqrt()).min(1.0);
        for (xi, vi) in self.x.iter_mut().zip(&v) {
            *xi = (1.0 - sigma) * *xi + sigma * vi;
        }
        debug_check_feasible(&self.set, &self.x);
        Ok(())
    }
}

/// Follow-the-perturbed-leader for convex losses: the expectation
/// E_{n∼D}[argmin{η Σ∇ᵀx − nᵀx}] estimated by averaging the argmins over
/// `mc_samples` frozen hypercube draws (common random numbers).
pub struct FplConvex {
    set: FeasibleSet,
    eta: f64,
    grad_sum: Vec<f64>,
    draws: Vec<Vec<f64>>,
    x: Vec<f64>,
}

impl FplConvex {
    pub fn new(set: FeasibleSet, eta: f64, mc_samples: usize, seed: u64) -> Result<Self> {
        if eta <= 0.0 {
            return Err(OcoError::ConfigInvalid("eta must be > 0".into()));
        }
        if mc_samples == 0 {
            return Err(OcoError::ConfigInvalid("mc_samples must be >= 1".into()));
        }
        let n = set.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let draws: Vec<Vec<f64>> = (0..mc_samples)
            .map(|_| (0..n).map(|_| rng.gen::<f64>()).collect())
            .collect();
        let grad_sum = vec![0.0; n];
        let x = Self::decide(&set, eta, &grad_sum, &draws)?;
        Ok(FplConvex {
            set,
            eta,
            grad_sum,
            draws,
            x,
        })
    }

    fn decide(
        set: &FeasibleSet,
        eta: f64,
        grad_sum: &[f64],
        draws: &[Vec<f64>],
    ) -> Result<Vec<f64>> {
        let mut avg = vec![0.0; set.dim()];
        let scaled = vecops::scale(grad_sum, eta);
        for noise in draws {
            let c = vecops::sub(&scaled, noise);
            let v = set.linear_opt(&c)?;
            vecops::axpy(&mut avg, 1.0 / draws.len() as f64, &v);
        }
        Ok(avg)
    }
}

impl OnlineLearner for FplConvex {
    fn decision(&self) -> &[f64] {
        &self.x
    }

    fn observe(&mut self, f: &LossOracle) -> Result<()> {
        let g = f.subgradient(&self.x)?;
        vecops::axpy(&mut self.grad_sum, 1.0, &g);
        self.x = Self::decide(&self.set, self.eta, &self.grad_sum, &self.draws)?;
        debug_check_feasible(&self.set, &self.x);
        Ok(())
    }
}

/// FPL for linear losses: one noise draw n₀ at construction, replayed:
/// x̂_{t+1} = argmin_K {η Σgᵀx − n₀ᵀx}.
pub struct FplLinear {
    set: FeasibleSet,
    eta: f64,
    grad_sum: Vec<f64>,
    n0: Vec<f64>,
    x: Vec<f64>,
}

impl FplLinear {
    pub fn new(set: FeasibleSet, eta: f64, seed: u64) -> Result<Self> {
        if eta <= 0.0 {
            return Err(OcoError::ConfigInvalid("eta must be > 0".into()));
        }
        let n = set.dim();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n0: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
        let x = set.linear_opt(&vecops::scale(&n0, -1.0))?;
        Ok(FplLinear {
            set,
            eta,
            grad_sum: vec![0.0; n],
            n0,
            x,
        })
    }
}

impl OnlineLearner for FplLinear {
    fn decision(&self) -> &[f64] {
        &self.x
    }

    fn observe(&mut self, f: &LossOracle) -> Result<()> {
        let g = f.subgradient(&self.x)?;
        vecops::axpy(&mut self.grad_sum, 1.0, &g);
        let mut c = vecops::scale(&self.grad_sum, self.eta);
        vecops::axpy(&mut c, -1.0, &self.n0);
        self.x = self.set.linear_opt(&c)?;
        Ok(())
    }
}
