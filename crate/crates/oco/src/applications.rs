//! End-to-end applications: universal portfolio selection over return
//! streams, low-rank matrix completion (offline and online, both
//! projection-free), and the online-to-batch conversion for stochastic
//! optimization.

use crate::error::{OcoError, Result};
use crate::geometry::FeasibleSet;
use crate::losses::LossOracle;
use crate::offline::{self, OfflineResult};
use crate::online::{Ocg, Ogd, OnlineLearner, Ons};
use crate::vecops;

/// Which regret minimizer drives the portfolio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PortfolioLearner {
    Gradient,
    Newton,
}

#[derive(Debug, Clone)]
pub struct PortfolioResult {
    /// The mixture actually traded each round (after flooring).
    pub weights: Vec<Vec<f64>>,
    /// ln(r_tᵀx̃_t) per round.
    pub per_round_log_return: Vec<f64>,
    pub log_wealth: f64,
    /// Best constant-rebalanced portfolio in hindsight.
    pub comparator_weights: Vec<f64>,
    pub comparator_log_wealth: f64,
    /// Comparator log-wealth minus achieved log-wealth.
    pub regret: f64,
}

fn validate_returns(returns: &[Vec<f64>]) -> Result<usize> {
    let n = returns
        .first()
        .ok_or(OcoError::ConfigInvalid("empty return stream".into()))?
        .len();
    for r in returns {
        vecops::check_dim(n, r.len())?;
        if let Some(&bad) = r.iter().find(|v| **v <= 0.0 || !v.is_finite()) {
            return Err(OcoError::NonpositiveReturn(bad));
        }
    }
    Ok(n)
}

/// Per-round log-loss seen by the learner once the floor is folded in: on
/// the simplex, (1−δ)rᵀx + (δ/n)Σᵢrᵢ = r̃ᵀx with
/// r̃ᵢ = (1−δ)rᵢ + (δ/n)Σⱼrⱼ, so the floored market is again a log-return
/// loss with adjusted returns.
fn floored_returns(r: &[f64], delta: f64) -> Vec<f64> {
    let mix = delta * r.iter().sum::<f64>() / r.len() as f64;
    r.iter().map(|v| (1.0 - delta) * v + mix).collect()
}

/// Trade a return stream with a regret minimizer over the simplex. Decisions
/// are floored, x̃ = (1−δ)x + δ/n, keeping every log-loss gradient bounded.
pub fn portfolio_backtest(
    returns: &[Vec<f64>],
    learner_kind: PortfolioLearner,
    delta_floor: f64,
) -> Result<PortfolioResult> {
    let n = validate_returns(returns)?;
    if !(delta_floor > 0.0 && delta_floor < 1.0) {
        return Err(OcoError::ConfigInvalid("floor must be in (0,1)".into()));
    }

    // Gradient bound over the whole stream, for the step schedules:
    // ‖∇(−ln r̃ᵀx)‖ ≤ ‖r̃‖₂ / minᵢ r̃ᵢ on the simplex.
    let mut g_bound: f64 = 1e-12;
    for r in returns {
        let rt = floored_returns(r, delta_floor);
        let lo = rt.iter().cloned().fold(f64::INFINITY, f64::min);
        g_bound = g_bound.max(vecops::norm2(&rt) / lo);
    }

    let set = FeasibleSet::simplex(n);
    let x1 = vec![1.0 / n as f64; n];
    let mut learner: Box<dyn OnlineLearner> = match learner_kind {
        PortfolioLearner::Gradient => Box::new(Ogd::diminishing(set, x1, g_bound)?),
        PortfolioLearner::Newton => Box::new(Ons::new(set, x1, 1.0, g_bound)?),
    };

    let mut weights = Vec::with_capacity(returns.len());
    let mut per_round = Vec::with_capacity(returns.len());
    for r in returns {
        let x = learner.decision();
        let traded: Vec<f64> = x
            .iter()
            .map(|v| (1.0 - delta_floor) * v + delta_floor / n as f64)
            .collect();
        per_round.push(vecops::dot(r, &traded).ln());
        weights.push(traded);
        let rt = floored_returns(r, delta_floor);
        learner.observe(&LossOracle::log_return(rt, g_bound)?)?;
    }
    let log_wealth: f64 = per_round.iter().sum();

    let comparator_weights = best_crp(returns, 20_000)?;
    let comparator_log_wealth = crp_log_wealth(returns, &comparator_weights)?;
    Ok(PortfolioResult {
        weights,
        per_round_log_return: per_round,
        log_wealth,
        comparator_weights,
        comparator_log_wealth,
        regret: comparator_log_wealth - log_wealth,
    })
}

/// Log-wealth of a constant-rebalanced portfolio: Σ_t ln(r_tᵀx).
pub fn crp_log_wealth(returns: &[Vec<f64>], x: &[f64]) -> Result<f64> {
    validate_returns(returns)?;
    let mut acc = 0.0;
    for r in returns {
        let v = vecops::dot(r, x);
        if v <= 0.0 {
            return Err(OcoError::NonpositiveReturn(v));
        }
        acc += v.ln();
    }
    Ok(acc)
}

/// Best constant-rebalanced portfolio in hindsight, by projected gradient
/// ascent on Σ ln(r_tᵀx) over the simplex with a curvature-matched step.
pub fn best_crp(returns: &[Vec<f64>], iters: usize) -> Result<Vec<f64>> {
    let n = validate_returns(returns)?;
    let set = FeasibleSet::simplex(n);
    let mut x = vec![1.0 / n as f64; n];
    // Projected gradient ascent with a backtracking line search; the step
    // from the previous iteration is retried (and allowed to grow) first.
    let mut eta = 1.0f64;
    let mut val = crp_log_wealth(returns, &x)?;
    let mut stall = 0usize;
    for _ in 0..iters {
        let mut grad = vec![0.0; n];
        for r in returns {
            let v = vecops::dot(r, &x);
            vecops::axpy(&mut grad, 1.0 / v, r);
        }
        eta = (eta * 2.0).min(1e6);
        let mut improved = false;
        for _ in 0..80 {
            let mut y = x.clone();
            vecops::axpy(&mut y, eta, &grad);
            let cand = set.project_euclidean(&y)?;
            // rᵀx > 0 anywhere on the simplex since returns are positive,
            // so the candidate is always evaluable.
            let cand_val = crp_log_wealth(returns, &cand)?;
            if cand_val > val {
                let gain = cand_val - val;
                x = cand;
                val = cand_val;
                improved = gain > 1e-13;
                break;
            }
            eta *= 0.5;
        }
        if improved {
            stall = 0;
        } else {
            stall += 1;
            if stall >= 5 {
                break;
            }
        }
    }
    Ok(x)
}

/// The two-asset alternating market: returns (2, ½), (½, 2), (2, ½), …
/// Each single asset ends where it started after an even number of rounds,
/// while the uniform mixture compounds ln(1.25) per round.
pub fn alternating_market(rounds: usize) -> Vec<Vec<f64>> {
    (0..rounds)
        .map(|t| {
            if t % 2 == 0 {
                vec![2.0, 0.5]
            } else {
                vec![0.5, 2.0]
            }
        })
        .collect()
}

/// Offline matrix completion: minimize ½Σ_obs (X_ij − M_ij)² over the
/// nuclear-norm ball of radius k, by conditional gradient — every iterate is
/// a convex combination of rank-one matrices, no projections.
pub fn complete_matrix_offline(
    rows: usize,
    cols: usize,
    observed: Vec<(usize, usize, f64)>,
    k: f64,
    t_max: usize,
) -> Result<OfflineResult> {
    let set = FeasibleSet::nuclear_ball(k, rows, cols)?;
    let m_max = observed
        .iter()
        .map(|(_, _, v)| v.abs())
        .fold(0.0, f64::max);
    // |X_ij| ≤ ‖X‖_nuc ≤ k inside the ball, so each residual is ≤ k + max|M|.
    let g = ((k + m_max).powi(2) * observed.len() as f64).sqrt();
    let f = LossOracle::squared_observed(rows, cols, observed, g)?;
    let x1 = vec![0.0; rows * cols];
    // The generic curvature default is far too pessimistic here and would
    // freeze the step at 1; the classic 2/t schedule converges properly.
    offline::frank_wolfe(&f, &set, &x1, t_max, Some(1.0))
}

#[derive(Debug, Clone)]
pub struct OnlineCompletionResult {
    /// Loss of the played iterate per round.
    pub losses: Vec<f64>,
    /// Final iterate, row-major.
    pub final_matrix: Vec<f64>,
    /// Total loss of the best fixed matrix in hindsight (conditional
    /// gradient on the summed losses).
    pub comparator_loss: f64,
    pub regret: f64,
}

/// Online matrix completion: a batch of observed entries arrives each round
/// and the learner pays the squared error of its current matrix on that
/// batch. Runs the projection-free online conditional gradient method over
/// the nuclear-norm ball.
pub fn complete_matrix_online(
    rows: usize,
    cols: usize,
    batches: &[Vec<(usize, usize, f64)>],
    k: f64,
) -> Result<OnlineCompletionResult> {
    if batches.is_empty() {
        return Err(OcoError::ConfigInvalid("no observation batches".into()));
    }
    let set = FeasibleSet::nuclear_ball(k, rows, cols)?;
    let m_max = batches
        .iter()
        .flatten()
        .map(|(_, _, v)| v.abs())
        .fold(0.0, f64::max);
    let batch_max = batches.iter().map(|b| b.len()).max().unwrap_or(1);
    let g = ((k + m_max).powi(2) * batch_max as f64).sqrt();

    let x1 = vec![0.0; rows * cols];
    let mut learner = Ocg::new(set, x1, batches.len(), g)?;
    let mut losses = Vec::with_capacity(batches.len());
    let mut all: Vec<(usize, usize, f64)> = Vec::new();
    for batch in batches {
        let f = LossOracle::squared_observed(rows, cols, batch.clone(), g)?;
        losses.push(f.value(learner.decision())?);
        all.extend_from_slice(batch);
        learner.observe(&f)?;
    }

    // Hindsight comparator: offline conditional gradient on the summed loss.
    let offline = complete_matrix_offline(rows, cols, all.clone(), k, 500)?;
    let f_all = LossOracle::squared_observed(rows, cols, all, g)?;
    let comparator_loss = f_all.value(&offline.final_point)?;
    let total: f64 = losses.iter().sum();
    Ok(OnlineCompletionResult {
        losses,
        final_matrix: learner.decision().to_vec(),
        comparator_loss,
        regret: total - comparator_loss,
    })
}

/// Online-to-batch conversion: run any online learner on a stream of
/// sampled losses and return the average decision h̄ = (1/T)Σ x_t, whose
/// expected risk is within regret/T + O(√(ln(1/δ)/T)) of the best fixed
/// decision.
pub fn online_to_batch<L, F>(learner: &mut L, mut sample_loss: F, t_max: usize) -> Result<Vec<f64>>
where
    L: OnlineLearner + ?Sized,
    F: FnMut(usize) -> Result<LossOracle>,
{
    if t_max == 0 {
        return Err(OcoError::ConfigInvalid("t_max must be >= 1".into()));
    }
    let mut avg = vec![0.0; learner.decision().len()];
    for t in 0..t_max {
        vecops::axpy(&mut avg, 1.0 / t_max as f64, learner.decision());
        let f = sample_loss(t)?;
        learner.observe(&f)?;
    }
    Ok(avg)
}

/// The deviation term in the batch risk guarantee:
/// √(8 ln(2/δ) / T) for confidence 1 − δ over losses in a unit range.
pub fn batch_deviation(t_max: usize, confidence_delta: f64) -> f64 {
    (8.0 * (2.0 / confidence_delta).ln() / t_max as f64).sqrt()
}
