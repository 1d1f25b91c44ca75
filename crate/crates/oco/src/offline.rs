//! Offline solvers: projected subgradient descent and its smoothing
//! reductions, strongly-convex averaging, Frank-Wolfe, and SVM training.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{OcoError, Result};
use crate::geometry::FeasibleSet;
use crate::linalg::SymMatrix;
use crate::losses::LossOracle;
use crate::vecops;

/// Step-size schedules, indexed from t = 1.
#[derive(Debug, Clone, Copy)]
pub enum StepRule {
    Constant(f64),
    /// η = 1/β (needs finite declared smoothness).
    InverseSmoothness,
    /// η_t = D/(G√t)
    DiminishingGeneral { d: f64, g: f64 },
    /// η_t = 1/(αt)
    StronglyConvex { alpha: f64 },
    /// η_t = 2/(α(t+1))
    StronglyConvexAvg { alpha: f64 },
}

impl StepRule {
    pub fn eta(&self, t: usize, beta: f64) -> Result<f64> {
        match self {
            StepRule::Constant(e) => Ok(*e),
            StepRule::InverseSmoothness => {
                if !beta.is_finite() || beta <= 0.0 {
                    return Err(OcoError::StepRuleRequiresMetadata(
                        "finite positive smoothness beta",
                    ));
                }
                Ok(1.0 / beta)
            }
            StepRule::DiminishingGeneral { d, g } => Ok(d / (g * (t as f64).sqrt())),
            StepRule::StronglyConvex { alpha } => Ok(1.0 / (alpha * t as f64)),
            StepRule::StronglyConvexAvg { alpha } => Ok(2.0 / (alpha * (t as f64 + 1.0))),
        }
    }

    fn describe(&self) -> String {
        match self {
            StepRule::Constant(e) => format!("constant({e})"),
            StepRule::InverseSmoothness => "inverse18smoothness".replace("18", "-"),
            StepRule::DiminishingGeneral { d, g } => format!("diminishing(D={d},G={g})"),
            StepRule::StronglyConvex { alpha } => format!("strongly-convex(alpha={alpha})"),
            StepRule::StronglyConvexAvg { alpha } => {
                format!("strongly-convex-avg(alpha={alpha})")
            }
        }
    }
}

#[derive(Debug, Clone)]
pub struct OfflineResult {
    /// x_1 … x_T (the evaluated iterates).
    pub iterates: Vec<Vec<f64>>,
    /// x_{T+1}, or an iterate average where the method prescribes one.
    pub final_point: Vec<f64>,
    /// f(x_t) for t = 1…T.
    pub objective_trace: Vec<f64>,
    /// Step rule / horizon / seed echo for reproducibility.
    pub config: String,
}

/// Projected (sub)gradient descent:
/// y_{t+1} = x_t − η_t ∇f(x_t), x_{t+1} = Π_K(y_{t+1}).
pub fn gd_basic(
    f: &LossOracle,
    set: &FeasibleSet,
    x1: &[f64],
    rule: StepRule,
    t_max: usize,
) -> Result<OfflineResult> {
    gd_with_objective(f, f, set, x1, rule, t_max)
}

/// As `gd_basic`, but steps along `grad_of`'s subgradients while the trace
/// records `objective_of`'s values (used by the surrogate reductions).
fn gd_with_objective(
    grad_of: &LossOracle,
    objective_of: &LossOracle,
    set: &FeasibleSet,
    x1: &[f64],
    rule: StepRule,
    t_max: usize,
) -> Result<OfflineResult> {
    if !set.contains(x1, 1e-9) {
        return Err(OcoError::DomainViolation("x1 not feasible".into()));
    }
    let mut x = x1.to_vec();
    let mut iterates = Vec::with_capacity(t_max);
    let mut trace = Vec::with_capacity(t_max);
    for t in 1..=t_max {
        iterates.push(x.clone());
        trace.push(objective_of.value(&x)?);
        let g = grad_of.subgradient(&x)?;
        let eta = rule.eta(t, grad_of.meta.beta)?;
        let mut y = x.clone();
        vecops::axpy(&mut y, -eta, &g);
        x = set.project_euclidean(&y)?;
    }
    Ok(OfflineResult {
        iterates,
        final_point: x,
        objective_trace: trace,
        config: format!("gd rule={} T={t_max}", rule.describe()),
    })
}

/// Smooth-to-strongly-convex reduction: minimize
/// g(x) = f(x) + (α̃/2)‖x − x₁‖² with α̃ = β·ln T/(D²·T), by constant-step
/// gradient descent with η = 1/(β + α̃). The trace records f, not g.
pub fn gd_smooth_reduction(
    f: &LossOracle,
    set: &FeasibleSet,
    x1: &[f64],
    t_max: usize,
) -> Result<OfflineResult> {
    let beta = f.meta.beta;
    if !beta.is_finite() || beta <= 0.0 {
        return Err(OcoError::StepRuleRequiresMetadata(
            "finite positive smoothness beta",
        ));
    }
    let d = set.diameter();
    let t_eff = t_max.max(2) as f64;
    let alpha_tilde = beta * t_eff.ln() / (d * d * t_eff);
    let n = x1.len();
    let mut ident = SymMatrix::identity(n);
    ident.scale(alpha_tilde);
    let anchor_term =
        LossOracle::quadratic(ident, vecops::scale(x1, -alpha_tilde), f.meta.g)?;
    let surrogate = LossOracle::sum(vec![(1.0, f.clone()), (1.0, anchor_term)])?;
    let mut res = gd_with_objective(
        &surrogate,
        f,
        set,
        x1,
        StepRule::Constant(1.0 / (beta + alpha_tilde)),
        t_max,
    )?;
    res.config = format!("gd-smooth-reduction alpha~={alpha_tilde} T={t_max}");
    Ok(res)
}

/// Nonsmooth-to-smooth reduction: run gradient descent on the ball-smoothed
/// f̂_δ with δ = dim·G·ln T/(α·T) and constant step η = δ.
pub fn gd_nonsmooth_reduction(
    f: &LossOracle,
    set: &FeasibleSet,
    x1: &[f64],
    t_max: usize,
    samples: usize,
    seed: u64,
) -> Result<OfflineResult> {
    let (alpha, g) = (f.meta.alpha, f.meta.g);
    if alpha <= 0.0 {
        return Err(OcoError::MetadataMissing("strong convexity alpha"));
    }
    if g <= 0.0 || !g.is_finite() {
        return Err(OcoError::MetadataMissing("gradient bound G"));
    }
    if samples == 0 {
        return Err(OcoError::ConfigInvalid("smoothing sample budget is zero".into()));
    }
    let n = x1.len() as f64;
    let t_eff = t_max.max(2) as f64;
    let delta = n * g * t_eff.ln() / (alpha * t_eff);
    let smoothed = f.smooth(delta, samples, seed)?;
    let mut res = gd_with_objective(
        &smoothed,
        f,
        set,
        x1,
        StepRule::Constant(delta),
        t_max,
    )?;
    res.config = format!(
        "gd-nonsmooth-reduction delta={delta} samples={samples} seed={seed} T={t_max}"
    );
    Ok(res)
}

/// α-strongly-convex GD with η_t = 2/(α(t+1)); returns the weighted average
/// Σ_t (2t/(T+1))·x_t / T.
pub fn gd_strongly_convex_avg(
    f: &LossOracle,
    set: &FeasibleSet,
    x1: &[f64],
    t_max: usize,
) -> Result<Vec<f64>> {
    let alpha = f.meta.alpha;
    if alpha <= 0.0 {
        return Err(OcoError::MetadataMissing("strong convexity alpha"));
    }
    let res = gd_basic(
        f,
        set,
        x1,
        StepRule::StronglyConvexAvg { alpha },
        t_max,
    )?;
    let mut avg = vec![0.0; x1.len()];
    let tt = t_max as f64;
    for (idx, x) in res.iterates.iter().enumerate() {
        let t = (idx + 1) as f64;
        vecops::axpy(&mut avg, 2.0 * t / ((tt + 1.0) * tt), x);
    }
    Ok(avg)
}

/// Frank-Wolfe (conditional gradient) with η_t = min{1, 2H/t}.
/// H defaults to max(1, G·D), a computable upper bound on the initial gap.
pub fn frank_wolfe(
    f: &LossOracle,
    set: &FeasibleSet,
    x1: &[f64],
    t_max: usize,
    h: Option<f64>,
) -> Result<OfflineResult> {
    if !set.contains(x1, 1e-9) {
        return Err(OcoError::DomainViolation("x1 not feasible".into()));
    }
    let h = h.unwrap_or_else(|| (f.meta.g * set.diameter()).max(1.0));
    if h < 1.0 {
        return Err(OcoError::ConfigInvalid("Frank-Wolfe needs H >= 1".into()));
    }
    let mut x = x1.to_vec();
    let mut iterates = Vec::with_capacity(t_max);
    let mut trace = Vec::with_capacity(t_max);
    for t in 1..=t_max {
        iterates.push(x.clone());
        trace.push(f.value(&x)?);
        let g = f.subgradient(&x)?;
        let v = set.linear_opt(&g)?;
        let eta = (2.0 * h / t as f64).min(1.0);
        for (xi, vi) in x.iter_mut().zip(&v) {
            *xi = (1.0 - eta) * *xi + eta * vi;
        }
    }
    Ok(OfflineResult {
        iterates,
        final_point: x,
        objective_trace: trace,
        config: format!("frank-wolfe H={h} T={t_max}"),
    })
}

/// Soft-margin SVM objective: λ·(1/m)Σ hinge(x; aᵢ,bᵢ) + ½‖x‖².
pub fn svm_objective(train: &[(Vec<f64>, f64)], lambda: f64, x: &[f64]) -> Result<f64> {
    let mut acc = 0.0;
    for (a, b) in train {
        let h = LossOracle::hinge(a.clone(), *b)?;
        acc += h.value(x)?;
    }
    Ok(lambda * acc / train.len() as f64 + 0.5 * vecops::dot(x, x))
}

fn svm_check(train: &[(Vec<f64>, f64)], lambda: f64) -> Result<usize> {
    if train.is_empty() {
        return Err(OcoError::EmptyTrainingSet);
    }
    if lambda <= 0.0 {
        return Err(OcoError::ConfigInvalid("lambda must be > 0".into()));
    }
    let d = train[0].0.len();
    for (a, b) in train {
        vecops::check_dim(d, a.len())?;
        if *b != 1.0 && *b != -1.0 {
            return Err(OcoError::ConfigInvalid("labels must be ±1".into()));
        }
    }
    Ok(d)
}

/// Deterministic SVM training by full subgradient descent:
/// ∇_t = λ·(1/m)Σᵢ hinge-subgradient + x_t, η_t = 2/(t+1),
/// output x̄ = Σ (2t/(T+1)) x_t / T.
pub fn svm_subgradient(
    train: &[(Vec<f64>, f64)],
    lambda: f64,
    t_max: usize,
) -> Result<Vec<f64>> {
    let d = svm_check(train, lambda)?;
    let m = train.len() as f64;
    let hinges: Vec<LossOracle> = train
        .iter()
        .map(|(a, b)| LossOracle::hinge(a.clone(), *b))
        .collect::<Result<_>>()?;
    // The optimum satisfies ½‖x*‖² ≤ f(0) = λ, so a radius-√(2λ) ball
    // contains it; projecting also keeps gradients bounded.
    let set = FeasibleSet::ball(vec![0.0; d], (2.0 * lambda).sqrt())?;
    let mut x = vec![0.0; d];
    let mut avg = vec![0.0; d];
    let tt = t_max as f64;
    for t in 1..=t_max {
        vecops::axpy(&mut avg, 2.0 * t as f64 / ((tt + 1.0) * tt), &x);
        let mut grad = x.clone(); // ∇½‖x‖²
        for hf in &hinges {
            let hg = hf.subgradient(&x)?;
            vecops::axpy(&mut grad, lambda / m, &hg);
        }
        let eta = 2.0 / (t as f64 + 1.0);
        let mut y = x.clone();
        vecops::axpy(&mut y, -eta, &grad);
        x = set.project_euclidean(&y)?;
    }
    Ok(avg)
}

/// SVM training by SGD: one uniformly random example per step,
/// ∇̃_t = λ·hinge-subgradient(i_t) + x_t; same schedule and averaging.
pub fn svm_sgd(
    train: &[(Vec<f64>, f64)],
    lambda: f64,
    t_max: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let d = svm_check(train, lambda)?;
    let hinges: Vec<LossOracle> = train
        .iter()
        .map(|(a, b)| LossOracle::hinge(a.clone(), *b))
        .collect::<Result<_>>()?;
    let set = FeasibleSet::ball(vec![0.0; d], (2.0 * lambda).sqrt())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x = vec![0.0; d];
    let mut avg = vec![0.0; d];
    let tt = t_max as f64;
    for t in 1..=t_max {
        vecops::axpy(&mut avg, 2.0 * t as f64 / ((tt + 1.0) * tt), &x);
        let i = rng.gen_range(0..hinges.len());
        let mut grad = x.clone();
        let hg = hinges[i].subgradient(&x)?;
        vecops::axpy(&mut grad, lambda, &hg);
        let eta = 2.0 / (t as f64 + 1.0);
        let mut y = x.clone();
        vecops::axpy(&mut y, -eta, &grad);
        x = set.project_euclidean(&y)?;
    }
    Ok(avg)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quad(diag: &[f64], b: Vec<f64>, g: f64) -> LossOracle {
        LossOracle::quadratic(SymMatrix::diag(diag), b, g).unwrap()
    }

    #[test]
    fn one_step_solve_of_scalar_quadratic() {
        // f = ½x² on [−10,10], x₁ = 1, η = 1/β = 1 → x₂ = 0.
        let f = quad(&[1.0], vec![0.0], 10.0);
        let set = FeasibleSet::boxed(vec![-10.0], vec![10.0]).unwrap();
        let res = gd_basic(&f, &set, &[1.0], StepRule::InverseSmoothness, 1).unwrap();
        assert_eq!(res.final_point, vec![0.0]);
    }

    #[test]
    fn projection_clamps_step() {
        // K = [−1,1], x = 0.9, ∇ = −1 (from f = −x), η = 0.5 → y = 1.4 → 1.
        let f = LossOracle::linear(vec![-1.0]);
        let set = FeasibleSet::boxed(vec![-1.0], vec![1.0]).unwrap();
        let res = gd_basic(&f, &set, &[0.9], StepRule::Constant(0.5), 1).unwrap();
        assert_eq!(res.final_point, vec![1.0]);
    }

    #[test]
    fn well_conditioned_linear_rate() {
        // f = ½xᵀdiag(1,4)x: γ = α/β = ¼; per-step decay of h_t should be
        // at least e^{−γ/4} on average.
        let f = quad(&[1.0, 4.0], vec![0.0, 0.0], 100.0);
        let set = FeasibleSet::boxed(vec![-10.0, -10.0], vec![10.0, 10.0]).unwrap();
        let t_max = 200;
        let res = gd_basic(&f, &set, &[5.0, 5.0], StepRule::InverseSmoothness, t_max)
            .unwrap();
        let gamma: f64 = 0.25;
        let h1 = res.objective_trace[0];
        for (idx, &h) in res.objective_trace.iter().enumerate() {
            let bound = h1 * (-gamma * idx as f64 / 4.0).exp();
            assert!(h <= bound + 1e-12, "t={idx}: h={h} > {bound}");
        }
        assert!(res.objective_trace[t_max - 1] < 1e-10);
    }

    #[test]
    fn smooth_reduction_rate_on_half_norm_squared() {
        // f = ½‖x‖² over Ball(0,1) from e₁: h_T ≤ 4·ln T/T at T = 10³.
        let f = quad(&[1.0, 1.0], vec![0.0, 0.0], 2.0);
        let set = FeasibleSet::unit_ball(2);
        let t_max = 1000;
        let res = gd_smooth_reduction(&f, &set, &[1.0, 0.0], t_max).unwrap();
        let h_t = res.objective_trace[t_max - 1]; // optimum is 0
        assert!(
            h_t <= 4.0 * (t_max as f64).ln() / t_max as f64,
            "h_T = {h_t}"
        );
    }

    #[test]
    fn smooth_reduction_rejects_unknown_beta() {
        let f = LossOracle::linear(vec![1.0, 1.0]); // beta = 0: no claim
        let set = FeasibleSet::unit_ball(2);
        assert!(matches!(
            gd_smooth_reduction(&f, &set, &[0.0, 0.0], 10),
            Err(OcoError::StepRuleRequiresMetadata(_))
        ));
    }

    #[test]
    fn surrogate_objective_shift_is_bounded() {
        // |h_t − h_t^g| ≤ α̃D² where g is the anchored surrogate.
        let f = quad(&[1.0, 2.0], vec![0.3, -0.2], 10.0);
        let set = FeasibleSet::unit_ball(2);
        let x1 = vec![0.5, 0.0];
        let t_max = 500;
        let d = set.diameter();
        let alpha_tilde = f.meta.beta * (t_max as f64).ln() / (d * d * t_max as f64);
        let res = gd_smooth_reduction(&f, &set, &x1, t_max).unwrap();
        for x in res.iterates.iter().step_by(50) {
            let fx = f.value(x).unwrap();
            let gx = fx + 0.5 * alpha_tilde * vecops::dist2(x, &x1).powi(2);
            assert!((gx - fx).abs() <= alpha_tilde * d * d + 1e-12);
        }
    }

    #[test]
    fn nonsmooth_reduction_absolute_value() {
        // Nonsmooth strongly convex instance: f(x) = ½x² + max(0, 1 − x)
        // on [−1, 1] — a kink along the whole descent path.
        let terms = vec![
            (
                1.0,
                LossOracle::quadratic(SymMatrix::diag(&[1.0]), vec![0.0], 2.0).unwrap(),
            ),
            (1.0, LossOracle::hinge(vec![1.0], 1.0).unwrap()),
        ];
        let mut f = LossOracle::sum(terms).unwrap();
        f.meta.alpha = 1.0;
        f.meta.g = 2.0;
        let set = FeasibleSet::boxed(vec![-1.0], vec![1.0]).unwrap();
        let res = gd_nonsmooth_reduction(&f, &set, &[-1.0], 10_000, 64, 3).unwrap();
        // Optimum of ½x² + max(0, 1−x) on [−1,1]: derivative x − 1 on x<1
        // vanishes at… x=1 boundary; f(1) = ½. Compare final objective.
        let f_opt = 0.5;
        let f_final = f.value(&res.final_point).unwrap();
        assert!(
            f_final - f_opt <= 0.05,
            "final objective {f_final} vs optimum {f_opt}"
        );
    }

    #[test]
    fn nonsmooth_reduction_linear_is_plain_gd() {
        let f = {
            let mut f = LossOracle::linear(vec![0.7]);
            f.meta.alpha = 1.0; // pretend-strong convexity just to pass the guard
            f
        };
        let set = FeasibleSet::boxed(vec![-1.0], vec![1.0]).unwrap();
        let t_max = 50;
        let n = 1.0;
        let t_eff = t_max as f64;
        let delta = n * f.meta.g * t_eff.ln() / (1.0 * t_eff);
        let red = gd_nonsmooth_reduction(&f, &set, &[0.0], t_max, 8, 5).unwrap();
        let plain = gd_basic(&f, &set, &[0.0], StepRule::Constant(delta), t_max).unwrap();
        for (a, b) in red.iterates.iter().zip(&plain.iterates) {
            assert!((a[0] - b[0]).abs() < 1e-12);
        }
    }

    #[test]
    fn strongly_convex_average_converges() {
        // f = ½(x−3)² on [0,10].
        let f = quad(&[1.0], vec![-3.0], 10.0);
        let avg = gd_strongly_convex_avg(
            &f,
            &FeasibleSet::boxed(vec![0.0], vec![10.0]).unwrap(),
            &[0.0],
            1000,
        )
        .unwrap();
        assert!((avg[0] - 3.0).abs() <= 0.1, "avg {}", avg[0]);
    }

    #[test]
    fn strongly_convex_average_t1_is_x1() {
        let f = quad(&[1.0], vec![0.0], 1.0);
        let avg = gd_strongly_convex_avg(
            &f,
            &FeasibleSet::boxed(vec![-1.0], vec![1.0]).unwrap(),
            &[0.7],
            1,
        )
        .unwrap();
        assert!((avg[0] - 0.7).abs() < 1e-12);
    }

    #[test]
    fn strongly_convex_average_respects_bound() {
        // f(avg) − f* ≤ 2G²/(α(T+1)) over several instances.
        for (c, t_max) in [(3.0, 100), (-2.0, 500), (0.5, 1000)] {
            let f = quad(&[1.0], vec![-c], 12.0);
            let set = FeasibleSet::boxed(vec![-10.0], vec![10.0]).unwrap();
            let avg = gd_strongly_convex_avg(&f, &set, &[-10.0], t_max).unwrap();
            let f_star = f.value(&[c.clamp(-10.0, 10.0)]).unwrap();
            let gap = f.value(&avg).unwrap() - f_star;
            let g = 12.0;
            let bound = 2.0 * g * g / (1.0 * (t_max as f64 + 1.0));
            assert!(gap <= bound, "gap {gap} > bound {bound}");
        }
    }

    #[test]
    fn frank_wolfe_rate_and_gap() {
        // f = ½‖x−c‖² with c interior of Ball(0,1).
        let c = vec![0.3, -0.2];
        let f = LossOracle::quadratic(
            SymMatrix::identity(2),
            vecops::scale(&c, -1.0),
            4.0,
        )
        .unwrap();
        let set = FeasibleSet::unit_ball(2);
        let t_max = 1000;
        let h = 1.0;
        let res = frank_wolfe(&f, &set, &[-0.5, 0.5], t_max, Some(h)).unwrap();
        let f_star = f.value(&c).unwrap();
        let beta = 1.0;
        let d = set.diameter();
        for (idx, &fv) in res.objective_trace.iter().enumerate().skip(1) {
            let t = idx + 1;
            let h_t = fv - f_star;
            assert!(
                h_t <= 2.0 * beta * h * d * d / t as f64 + 1e-12,
                "t={t}: h={h_t}"
            );
            // Per-iterate feasibility and FW-gap ≥ primal-gap.
            let x = &res.iterates[idx];
            assert!(set.contains(x, 1e-9));
            let g = f.subgradient(x).unwrap();
            let v = set.linear_opt(&g).unwrap();
            let fw_gap = vecops::dot(&g, &vecops::sub(x, &v));
            assert!(fw_gap >= h_t - 1e-9);
        }
    }

    #[test]
    fn frank_wolfe_stationary_start() {
        let c = vec![0.0, 0.0];
        let f = LossOracle::quadratic(SymMatrix::identity(2), c, 4.0).unwrap();
        let set = FeasibleSet::unit_ball(2);
        let res = frank_wolfe(&f, &set, &[0.0, 0.0], 100, Some(1.0)).unwrap();
        for fv in &res.objective_trace {
            assert!(fv.abs() < 1e-12);
        }
    }

    fn toy_separable() -> Vec<(Vec<f64>, f64)> {
        vec![
            (vec![1.0, 1.0], 1.0),
            (vec![1.5, 0.5], 1.0),
            (vec![-1.0, -1.0], -1.0),
            (vec![-0.5, -1.5], -1.0),
        ]
    }

    #[test]
    fn svm_separates_toy_data() {
        let train = toy_separable();
        let x = svm_subgradient(&train, 10.0, 10_000).unwrap();
        for (a, b) in &train {
            assert!(b * vecops::dot(a, &x) > 0.0, "misclassified {a:?}");
        }
    }

    #[test]
    fn svm_single_example_gradient() {
        let f = LossOracle::hinge(vec![1.0, 0.0], 1.0).unwrap();
        // While margin < 1 the hinge part contributes −e₁.
        assert_eq!(f.subgradient(&[0.2, 0.0]).unwrap(), vec![-1.0, 0.0]);
    }

    #[test]
    fn svm_sgd_close_to_full_gradient() {
        let train = toy_separable();
        let lambda = 1.0;
        let reference = svm_subgradient(&train, lambda, 100_000).unwrap();
        let ref_obj = svm_objective(&train, lambda, &reference).unwrap();
        let mut gaps = Vec::new();
        for seed in 0..10 {
            let x = svm_sgd(&train, lambda, 100_000, seed).unwrap();
            gaps.push(svm_objective(&train, lambda, &x).unwrap() - ref_obj);
        }
        let mean_gap = gaps.iter().sum::<f64>() / gaps.len() as f64;
        assert!(mean_gap.abs() <= 0.05, "mean objective gap {mean_gap}");
    }

    #[test]
    fn svm_empty_training_set_rejected() {
        assert!(matches!(
            svm_subgradient(&[], 1.0, 10),
            Err(OcoError::EmptyTrainingSet)
        ));
    }

    #[test]
    fn reduction_overhead_is_logarithmic() {
        // Smooth-reduction h_T vs direct strongly-convex GD on a shared
        // strongly convex instance: overhead at most an O(ln T) factor.
        let f = quad(&[1.0, 1.0], vec![0.0, 0.0], 4.0);
        let set = FeasibleSet::unit_ball(2);
        let t_max = 2000;
        let x1 = vec![1.0, 0.0];
        let reduced = gd_smooth_reduction(&f, &set, &x1, t_max).unwrap();
        let direct = gd_basic(&f, &set, &x1, StepRule::InverseSmoothness, t_max).unwrap();
        let h_red = reduced.objective_trace[t_max - 1];
        let h_dir = direct.objective_trace[t_max - 1].max(1e-300);
        // Direct GD converges linearly here, so just check the reduction is
        // within its own guaranteed envelope rather than a vacuous ratio.
        assert!(h_red <= 4.0 * f.meta.beta * (t_max as f64).ln() / t_max as f64);
        assert!(h_dir <= h_red + 1e-12);
    }
}
