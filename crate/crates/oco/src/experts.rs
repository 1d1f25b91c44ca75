//! Prediction with expert advice and bandit feedback: weighted majority,
//! Hedge / randomized weighted majority, perturbed-leader experts, simple
//! explore-exploit bandits, EXP3, gradient estimators from function values,
//! and bandit convex optimization (FKM, barrier-based linear bandits).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{OcoError, Result};
use crate::geometry::{self, Barrier, FeasibleSet};
use crate::linalg::{self, SymMatrix};
use crate::losses::LossOracle;
use crate::vecops;

fn check_eps(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(OcoError::EpsilonOutOfRange(eps));
    }
    Ok(())
}

fn check_losses(losses: &[f64]) -> Result<()> {
    for &l in losses {
        if l < 0.0 {
            return Err(OcoError::NegativeLoss(l));
        }
    }
    Ok(())
}

/// Deterministic weighted majority over binary advice: predict by weighted
/// vote, multiply the weight of each wrong expert by (1 − ε).
pub struct WeightedMajority {
    weights: Vec<f64>,
    eps: f64,
}

impl WeightedMajority {
    pub fn new(n: usize, eps: f64) -> Result<Self> {
        check_eps(eps)?;
        Ok(WeightedMajority {
            weights: vec![1.0; n],
            eps,
        })
    }

    pub fn predict(&self, advice: &[bool]) -> Result<bool> {
        vecops::check_dim(self.weights.len(), advice.len())?;
        let mut yes = 0.0;
        let mut no = 0.0;
        for (w, &a) in self.weights.iter().zip(advice) {
            if a {
                yes += w;
            } else {
                no += w;
            }
        }
        Ok(yes >= no)
    }

    pub fn update(&mut self, advice: &[bool], outcome: bool) -> Result<()> {
        vecops::check_dim(self.weights.len(), advice.len())?;
        for (w, &a) in self.weights.iter_mut().zip(advice) {
            if a != outcome {
                *w *= 1.0 - self.eps;
            }
        }
        Ok(())
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Hedge: maintain log-weights ln w_{t+1}(i) = ln w_t(i) − ε·ℓ_t(i) and play
/// the normalized distribution. Losses must be nonnegative.
pub struct Hedge {
    log_w: Vec<f64>,
    eps: f64,
    dist: Vec<f64>,
}

impl Hedge {
    pub fn new(n: usize, eps: f64) -> Result<Self> {
        check_eps(eps)?;
        Ok(Hedge {
            log_w: vec![0.0; n],
            eps,
            dist: vec![1.0 / n as f64; n],
        })
    }

    pub fn distribution(&self) -> &[f64] {
        &self.dist
    }

    /// Sample an expert from the current distribution (randomized weighted
    /// majority).
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> usize {
        let u: f64 = rng.gen();
        let mut acc = 0.0;
        for (i, p) in self.dist.iter().enumerate() {
            acc += p;
            if u < acc {
                return i;
            }
        }
        self.dist.len() - 1
    }

    pub fn update(&mut self, losses: &[f64]) -> Result<()> {
        vecops::check_dim(self.log_w.len(), losses.len())?;
        check_losses(losses)?;
        vecops::axpy(&mut self.log_w, -self.eps, losses);
        let m = self.log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let w: Vec<f64> = self.log_w.iter().map(|l| (l - m).exp()).collect();
        let s: f64 = w.iter().sum();
        self.dist = w.iter().map(|v| v / s).collect();
        Ok(())
    }
}

/// Perturbed-leader experts: draw one exponential perturbation
/// n(i) = −ln(U_i)/η at construction and replay it; each round follow the
/// leader of the perturbed cumulative losses, breaking ties toward the
/// lowest index.
pub struct FplExperts {
    cum: Vec<f64>,
    noise: Vec<f64>,
    choice: usize,
}

impl FplExperts {
    pub fn new(n: usize, eta: f64, seed: u64) -> Result<Self> {
        if eta <= 0.0 {
            return Err(OcoError::ConfigInvalid("eta must be > 0".into()));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let noise: Vec<f64> = (0..n)
            .map(|_| -(1.0 - rng.gen::<f64>()).ln() / eta)
            .collect();
        let mut fpl = FplExperts {
            cum: vec![0.0; n],
            noise,
            choice: 0,
        };
        fpl.choice = fpl.leader();
        Ok(fpl)
    }

    fn leader(&self) -> usize {
        let perturbed: Vec<f64> = self
            .cum
            .iter()
            .zip(&self.noise)
            .map(|(c, n)| c - n)
            .collect();
        vecops::argmin(&perturbed)
    }

    pub fn choice(&self) -> usize {
        self.choice
    }

    pub fn update(&mut self, losses: &[f64]) -> Result<()> {
        vecops::check_dim(self.cum.len(), losses.len())?;
        check_losses(losses)?;
        vecops::axpy(&mut self.cum, 1.0, losses);
        self.choice = self.leader();
        Ok(())
    }
}

/// Importance-weighted loss estimate: a full vector that is zero except at
/// the played arm, where the observed loss is divided by the probability of
/// playing that arm. Unbiased for the true loss vector.
pub fn importance_estimate(dist: &[f64], arm: usize, loss: f64) -> Result<Vec<f64>> {
    if arm >= dist.len() {
        return Err(OcoError::ConfigInvalid("arm index out of range".into()));
    }
    if dist[arm] <= 0.0 {
        return Err(OcoError::DegenerateDenominator(dist[arm]));
    }
    let mut est = vec![0.0; dist.len()];
    est[arm] = loss / dist[arm];
    Ok(est)
}

/// Explore-exploit reduction from bandit to full information: with
/// probability δ explore a uniform arm and feed Hedge the scaled estimate
/// (n/δ)·ℓ(i)·e_i; otherwise exploit Hedge's sample and feed zero losses.
pub struct SimpleMab {
    hedge: Hedge,
    delta: f64,
    n: usize,
    rng: ChaCha8Rng,
    pending: Option<(usize, bool)>,
}

impl SimpleMab {
    pub fn new(n: usize, eps: f64, delta: f64, seed: u64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(OcoError::ConfigInvalid("delta must be in (0,1]".into()));
        }
        Ok(SimpleMab {
            hedge: Hedge::new(n, eps)?,
            delta,
            n,
            rng: ChaCha8Rng::seed_from_u64(seed),
            pending: None,
        })
    }

    /// Pick the arm for this round. Must be followed by `observe`.
    pub fn choose(&mut self) -> usize {
        let explore = self.rng.gen::<f64>() < self.delta;
        let arm = if explore {
            self.rng.gen_range(0..self.n)
        } else {
            self.hedge.sample(&mut self.rng)
        };
        self.pending = Some((arm, explore));
        arm
    }

    pub fn observe(&mut self, loss: f64) -> Result<()> {
        let (arm, explore) = self
            .pending
            .take()
            .ok_or(OcoError::ConfigInvalid("observe before choose".into()))?;
        if loss < 0.0 {
            return Err(OcoError::NegativeLoss(loss));
        }
        let mut est = vec![0.0; self.n];
        if explore {
            est[arm] = (self.n as f64 / self.delta) * loss;
        }
        self.hedge.update(&est)
    }

    pub fn distribution(&self) -> &[f64] {
        self.hedge.distribution()
    }
}

/// EXP3: sample the arm from the exponential-weights distribution itself and
/// feed back the importance-weighted estimate ℓ(i_t)/x_t(i_t)·e_{i_t}.
/// ε = √(ln n / (T·n)).
pub struct Exp3 {
    hedge: Hedge,
    rng: ChaCha8Rng,
    pending: Option<usize>,
}

impl Exp3 {
    pub fn new(n: usize, t_horizon: usize, seed: u64) -> Result<Self> {
        let eps = ((n as f64).ln() / (t_horizon as f64 * n as f64)).sqrt();
        Self::with_eps(n, eps, seed)
    }

    pub fn with_eps(n: usize, eps: f64, seed: u64) -> Result<Self> {
        Ok(Exp3 {
            hedge: Hedge::new(n, eps)?,
            rng: ChaCha8Rng::seed_from_u64(seed),
            pending: None,
        })
    }

    pub fn choose(&mut self) -> usize {
        let arm = self.hedge.sample(&mut self.rng);
        self.pending = Some(arm);
        arm
    }

    pub fn observe(&mut self, loss: f64) -> Result<()> {
        let arm = self
            .pending
            .take()
            .ok_or(OcoError::ConfigInvalid("observe before choose".into()))?;
        if loss < 0.0 {
            return Err(OcoError::NegativeLoss(loss));
        }
        let est = importance_estimate(self.hedge.distribution(), arm, loss)?;
        self.hedge.update(&est)
    }

    pub fn distribution(&self) -> &[f64] {
        self.hedge.distribution()
    }
}

/// Single-point gradient estimate from a function value on a sphere of
/// radius δ: g = (n/δ)·f(x + δu)·u for a unit vector u. Unbiased for the
/// gradient of the δ-smoothed function.
pub fn sphere_estimate(f: &LossOracle, x: &[f64], delta: f64, u: &[f64]) -> Result<Vec<f64>> {
    vecops::check_dim(x.len(), u.len())?;
    if delta <= 0.0 {
        return Err(OcoError::ConfigInvalid("delta must be > 0".into()));
    }
    let mut y = x.to_vec();
    vecops::axpy(&mut y, delta, u);
    let val = f.value(&y)?;
    let n = x.len() as f64;
    Ok(vecops::scale(u, n / delta * val))
}

/// Ellipsoidal variant: g = n·f(x + Au)·A⁻¹u, which is unbiased for the
/// gradient of the function smoothed uniformly over the ellipsoid {Av}.
pub fn ellipsoid_estimate(
    f: &LossOracle,
    x: &[f64],
    a: &SymMatrix,
    a_inv: &SymMatrix,
    u: &[f64],
) -> Result<Vec<f64>> {
    vecops::check_dim(x.len(), u.len())?;
    vecops::check_dim(x.len(), a.dim())?;
    let mut y = x.to_vec();
    let au = a.matvec(u)?;
    vecops::axpy(&mut y, 1.0, &au);
    let val = f.value(&y)?;
    let g = a_inv.matvec(u)?;
    Ok(vecops::scale(&g, x.len() as f64 * val))
}

/// Bandit gradient descent from function values only: play y_t = x_t + δu_t
/// with u_t uniform on the sphere, estimate the gradient with
/// `sphere_estimate`, and run projected gradient descent over the set shrunk
/// by δ so every play stays feasible. δ = T^{−1/4}, η = D/(n·T^{3/4}).
pub struct Fkm {
    full_set: FeasibleSet,
    inner_set: FeasibleSet,
    x: Vec<f64>,
    delta: f64,
    eta: f64,
    rng: ChaCha8Rng,
    pending: Option<Vec<f64>>,
}

impl Fkm {
    pub fn new(set: FeasibleSet, t_horizon: usize, seed: u64) -> Result<Self> {
        let delta = (t_horizon as f64).powf(-0.25);
        let n = set.dim() as f64;
        let eta = set.diameter() / (n * (t_horizon as f64).powf(0.75));
        Self::with_parameters(set, delta, eta, seed)
    }

    pub fn with_parameters(
        set: FeasibleSet,
        delta: f64,
        eta: f64,
        seed: u64,
    ) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(OcoError::ConfigInvalid(
                "shrinkage delta must be in (0,1)".into(),
            ));
        }
        if eta <= 0.0 {
            return Err(OcoError::ConfigInvalid("eta must be > 0".into()));
        }
        let inner_set = set.shrink(delta, 64, seed ^ 0xA11CE)?;
        let x = inner_set.interior_center().to_vec();
        Ok(Fkm {
            full_set: set,
            inner_set,
            x,
            delta,
            eta,
            rng: ChaCha8Rng::seed_from_u64(seed),
            pending: None,
        })
    }

    /// The point actually played this round: y = x + δu.
    pub fn play(&mut self) -> Result<Vec<f64>> {
        let u = geometry::sample_unit_sphere(&mut self.rng, self.x.len());
        let mut y = self.x.clone();
        vecops::axpy(&mut y, self.delta, &u);
        if !self.full_set.contains(&y, 1e-9) {
            return Err(OcoError::InfeasiblePlay);
        }
        self.pending = Some(u);
        Ok(y)
    }

    pub fn observe(&mut self, loss_value: f64) -> Result<()> {
        let u = self
            .pending
            .take()
            .ok_or(OcoError::ConfigInvalid("observe before play".into()))?;
        let n = self.x.len() as f64;
        let g = vecops::scale(&u, n / self.delta * loss_value);
        let mut y = self.x.clone();
        vecops::axpy(&mut y, -self.eta, &g);
        self.x = self.inner_set.project_euclidean(&y)?;
        Ok(())
    }

    pub fn base_point(&self) -> &[f64] {
        &self.x
    }
}

/// Bandit linear optimization with a self-concordant barrier: play
/// y = x + Au with A = [∇²R(x)]^{−1/2}, estimate g = n·f(y)·A⁻¹u, and take
/// the follow-the-regularized-leader step
/// x_{t+1} = argmin { η Σgᵀx + R(x) } by damped Newton iterations.
/// η = √(ν·ln T / (2 n² T)).
pub struct Scrible {
    barrier: Barrier,
    eta: f64,
    grad_sum: Vec<f64>,
    x: Vec<f64>,
    rng: ChaCha8Rng,
    pending: Option<(Vec<f64>, SymMatrix, SymMatrix)>,
}

impl Scrible {
    pub fn new(barrier: Barrier, t_horizon: usize, seed: u64) -> Result<Self> {
        let n = barrier.dim() as f64;
        let t = t_horizon as f64;
        let eta = (barrier.nu() * t.ln() / (2.0 * n * n * t)).sqrt();
        Self::with_eta(barrier, eta, seed)
    }

    pub fn with_eta(barrier: Barrier, eta: f64, seed: u64) -> Result<Self> {
        if eta <= 0.0 {
            return Err(OcoError::ConfigInvalid("eta must be > 0".into()));
        }
        let x = barrier.analytic_center();
        let grad_sum = vec![0.0; barrier.dim()];
        Ok(Scrible {
            barrier,
            eta,
            grad_sum,
            x,
            rng: ChaCha8Rng::seed_from_u64(seed),
            pending: None,
        })
    }

    pub fn base_point(&self) -> &[f64] {
        &self.x
    }

    /// y_t = x_t + [∇²R(x_t)]^{−1/2} u_t, u_t uniform on the sphere.
    pub fn play(&mut self) -> Result<Vec<f64>> {
        let (_, _, hess) = self.barrier.eval(&self.x)?;
        let hess_inv = linalg::invert_spd(&hess)?;
        let a = linalg::sqrt_psd(&hess_inv)?;
        let a_inv = linalg::sqrt_psd(&hess)?;
        let u = geometry::sample_unit_sphere(&mut self.rng, self.x.len());
        let mut y = self.x.clone();
        let au = a.matvec(&u)?;
        vecops::axpy(&mut y, 1.0, &au);
        if !self.barrier.contains_strictly(&y) {
            return Err(OcoError::InfeasiblePlay);
        }
        self.pending = Some((u, a_inv, hess_inv));
        Ok(y)
    }

    pub fn observe(&mut self, loss_value: f64) -> Result<()> {
        let (u, a_inv, hess_inv) = self
            .pending
            .take()
            .ok_or(OcoError::ConfigInvalid("observe before play".into()))?;
        let n = self.x.len() as f64;
        let g = vecops::scale(&a_inv.matvec(&u)?, n * loss_value);
        // Stability guard: the step is only valid while the estimate is
        // small in the local norm, η·‖g‖*_x ≤ ¼.
        let local = hess_inv.quad_form(&g, &g)?.sqrt();
        if self.eta * local > 0.25 {
            return Err(OcoError::EtaTooLarge(self.eta));
        }
        vecops::axpy(&mut self.grad_sum, 1.0, &g);
        self.x = self.ftrl_argmin()?;
        Ok(())
    }

    /// Damped Newton on Φ(x) = η·Σgᵀx + R(x), warm-started at the current
    /// point, until the Newton decrement drops below 1e-8.
    fn ftrl_argmin(&self) -> Result<Vec<f64>> {
        let mut x = self.x.clone();
        for _ in 0..200 {
            let (_, r_grad, hess) = self.barrier.eval(&x)?;
            let mut grad = vecops::scale(&self.grad_sum, self.eta);
            vecops::axpy(&mut grad, 1.0, &r_grad);
            let step = linalg::solve_spd(&hess, &grad)?;
            let lambda_sq = vecops::dot(&grad, &step);
            if lambda_sq < 1e-8 {
                return Ok(x);
            }
            let lambda = lambda_sq.max(0.0).sqrt();
            vecops::axpy(&mut x, -1.0 / (1.0 + lambda), &step);
        }
        Err(OcoError::NewtonNoConvergence)
    }
}
