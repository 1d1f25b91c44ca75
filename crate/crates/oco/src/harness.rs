//! Experiment orchestration: oblivious adversary generators, a regret
//! ledger with exact best-in-hindsight comparators, bound overlays, seed
//! management, flat key=value configs, and CSV emission.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::applications;
use crate::error::{OcoError, Result};
use crate::experts::Exp3;
use crate::geometry::{FeasibleSet, Regularizer, SetKind};
use crate::losses::{LossKind, LossOracle};
use crate::online::{
    AdaGrad, Eg, FplConvex, Ftl, Ocg, Ogd, Omd, OmdMode, OnlineLearner, Ons, Rftl,
};
use crate::vecops;

/// One master seed deterministically split into independent streams, so any
/// single component of a run can be replicated in isolation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedSplit {
    pub adversary: u64,
    pub learner: u64,
    pub estimator: u64,
}

pub fn split_seed(master: u64) -> SeedSplit {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    SeedSplit {
        adversary: rng.gen(),
        learner: rng.gen(),
        estimator: rng.gen(),
    }
}

/// Oblivious loss-sequence generators. The whole sequence is a function of
/// (kind, dimension, rounds, seed) and is materialized before any play, so
/// the adversary can never react to the learner.
#[derive(Debug, Clone)]
pub enum Adversary {
    /// Play exactly these linear losses.
    FixedSequence(Vec<Vec<f64>>),
    /// I.i.d. linear losses with coordinates uniform in [−1,1], rescaled to
    /// gradient norm at most `g`.
    StochasticLinear { g: f64 },
    /// Linear losses with i.i.d. ±1 coordinates (the regret lower-bound
    /// construction over the hypercube).
    HypercubeSigns,
    /// f₁ = x₁/2 followed by alternating ∓x₁ — the trap that forces linear
    /// regret on unregularized follow-the-leader.
    FtlTrap,
    /// Two-asset log-loss market alternating returns (2,½) and (½,2).
    ShannonMarket,
    /// Linear losses over the simplex with i.i.d. Bernoulli coordinates.
    BanditArms { means: Vec<f64> },
}

impl Adversary {
    pub fn materialize(&self, dim: usize, rounds: usize, seed: u64) -> Result<Vec<LossOracle>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match self {
            Adversary::FixedSequence(seq) => {
                if seq.len() < rounds {
                    return Err(OcoError::ConfigInvalid(
                        "fixed sequence shorter than the horizon".into(),
                    ));
                }
                seq[..rounds]
                    .iter()
                    .map(|c| {
                        vecops::check_dim(dim, c.len())?;
                        Ok(LossOracle::linear(c.clone()))
                    })
                    .collect()
            }
            Adversary::StochasticLinear { g } => {
                if !(g.is_finite() && *g > 0.0) {
                    return Err(OcoError::ConfigInvalid("need g > 0".into()));
                }
                (0..rounds)
                    .map(|_| {
                        let mut c: Vec<f64> =
                            (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect();
                        let n = vecops::norm2(&c);
                        if n > *g {
                            c = vecops::scale(&c, g / n);
                        }
                        Ok(LossOracle::linear(c))
                    })
                    .collect()
            }
            Adversary::HypercubeSigns => Ok((0..rounds)
                .map(|_| {
                    let c: Vec<f64> = (0..dim)
                        .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
                        .collect();
                    LossOracle::linear(c)
                })
                .collect()),
            Adversary::FtlTrap => {
                if dim != 1 {
                    return Err(OcoError::ConfigInvalid("trap sequence is 1-d".into()));
                }
                Ok((0..rounds)
                    .map(|t| {
                        let c = if t == 0 {
                            0.5
                        } else if t % 2 == 1 {
                            -1.0
                        } else {
                            1.0
                        };
                        LossOracle::linear(vec![c])
                    })
                    .collect())
            }
            Adversary::ShannonMarket => {
                if dim != 2 {
                    return Err(OcoError::ConfigInvalid("this market has 2 assets".into()));
                }
                applications::alternating_market(rounds)
                    .into_iter()
                    .map(|r| {
                        // ‖∇(−ln rᵀx)‖ ≤ ‖r‖/min r on the simplex.
                        let lo = r.iter().cloned().fold(f64::INFINITY, f64::min);
                        let g = vecops::norm2(&r) / lo;
                        LossOracle::log_return(r, g)
                    })
                    .collect()
            }
            Adversary::BanditArms { means } => {
                vecops::check_dim(dim, means.len())?;
                if means.iter().any(|m| !(0.0..=1.0).contains(m)) {
                    return Err(OcoError::ConfigInvalid("arm means must be in [0,1]".into()));
                }
                Ok((0..rounds)
                    .map(|_| {
                        let c: Vec<f64> = means
                            .iter()
                            .map(|m| if rng.gen::<f64>() < *m { 1.0 } else { 0.0 })
                            .collect();
                        LossOracle::linear(c)
                    })
                    .collect())
            }
        }
    }
}

/// How the best-in-hindsight point was obtained.
#[derive(Debug, Clone, PartialEq)]
pub enum ComparatorMethod {
    /// Exact minimizing vertex of the simplex.
    ExactVertex,
    /// Closed-form minimizer (linear losses over ball/box).
    ClosedForm,
    /// Numeric solve, with the reported objective tolerance.
    Numeric(f64),
}

#[derive(Debug, Clone)]
pub struct Comparator {
    pub point: Vec<f64>,
    pub total: f64,
    pub method: ComparatorMethod,
}

/// Best fixed decision in hindsight for a complete loss log. Linear losses
/// over the simplex/ball/box get the exact closed form (the sum of linear
/// losses is linear); anything else falls back to projected gradient with a
/// backtracking line search.
pub fn comparator(losses: &[LossOracle], set: &FeasibleSet) -> Result<Comparator> {
    if losses.is_empty() {
        return Err(OcoError::ConfigInvalid("empty loss log".into()));
    }
    let all_linear = losses
        .iter()
        .all(|f| matches!(f.kind, LossKind::Linear { .. }));
    if all_linear {
        let mut c = vec![0.0; set.dim()];
        for f in losses {
            if let LossKind::Linear { c: v } = &f.kind {
                vecops::axpy(&mut c, 1.0, v);
            }
        }
        let point = set.linear_opt(&c)?;
        let total = vecops::dot(&c, &point);
        let method = match set.kind() {
            SetKind::Simplex => ComparatorMethod::ExactVertex,
            _ => ComparatorMethod::ClosedForm,
        };
        return Ok(Comparator {
            point,
            total,
            method,
        });
    }
    numeric_comparator(losses, set, 20_000)
}

fn total_loss(losses: &[LossOracle], x: &[f64]) -> Result<f64> {
    let mut acc = 0.0;
    for f in losses {
        acc += f.value(x)?;
    }
    Ok(acc)
}

/// Projected gradient with backtracking on the summed loss, started from the
/// set's interior center.
pub fn numeric_comparator(
    losses: &[LossOracle],
    set: &FeasibleSet,
    iters: usize,
) -> Result<Comparator> {
    let mut x = set.interior_center().to_vec();
    let mut val = total_loss(losses, &x)?;
    let mut eta = 1.0f64;
    let mut last_gain = f64::INFINITY;
    let mut stall = 0usize;
    for _ in 0..iters {
        let mut grad = vec![0.0; set.dim()];
        for f in losses {
            let g = f.subgradient(&x)?;
            vecops::axpy(&mut grad, 1.0, &g);
        }
        eta = (eta * 2.0).min(1e6);
        let mut improved = false;
        for _ in 0..80 {
            let mut y = x.clone();
            vecops::axpy(&mut y, -eta, &grad);
            let cand = set.project_euclidean(&y)?;
            let cand_val = total_loss(losses, &cand)?;
            if cand_val < val {
                last_gain = val - cand_val;
                x = cand;
                val = cand_val;
                improved = last_gain > 1e-13;
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
    Ok(Comparator {
        point: x,
        total: val,
        method: ComparatorMethod::Numeric(last_gain.min(1e-9)),
    })
}

/// Per-round record of a run; the CSV schema is frozen as
/// round,loss,cum_loss,comparator_share,regret,bound_rhs.
#[derive(Debug, Clone)]
pub struct LedgerRow {
    pub round: usize,
    pub loss: f64,
    pub cum_loss: f64,
    /// The comparator's loss on this round's function.
    pub comparator_share: f64,
    pub regret: f64,
    pub bound_rhs: f64,
}

#[derive(Debug, Clone)]
pub struct RegretLedger {
    pub rows: Vec<LedgerRow>,
    pub comparator: Comparator,
    pub bound_name: String,
}

impl RegretLedger {
    pub fn final_regret(&self) -> f64 {
        self.rows.last().map(|r| r.regret).unwrap_or(0.0)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("round,loss,cum_loss,comparator_share,regret,bound_rhs\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{:.12e},{:.12e},{:.12e},{:.12e},{:.12e}\n",
                r.round, r.loss, r.cum_loss, r.comparator_share, r.regret, r.bound_rhs
            ));
        }
        out
    }

    /// Recompute the regret trace from the per-round columns alone and check
    /// it matches bit-exactly, as promised by the ledger contract.
    pub fn audit(&self) -> bool {
        let mut cum = 0.0;
        let mut share = 0.0;
        for r in &self.rows {
            cum += r.loss;
            share += r.comparator_share;
            if cum != r.cum_loss || cum - share != r.regret {
                return false;
            }
        }
        true
    }
}

/// Drive any full-information learner through a materialized loss sequence
/// and account regret against the hindsight comparator. `bound_rhs(t)` is
/// the theoretical overlay evaluated from run-visible quantities.
pub fn run_learner(
    learner: &mut dyn OnlineLearner,
    losses: &[LossOracle],
    set: &FeasibleSet,
    bound_name: &str,
    bound_rhs: &dyn Fn(usize) -> f64,
) -> Result<RegretLedger> {
    let comp = comparator(losses, set)?;
    let mut rows = Vec::with_capacity(losses.len());
    let mut cum = 0.0;
    let mut share = 0.0;
    for (i, f) in losses.iter().enumerate() {
        let loss = f.value(learner.decision())?;
        cum += loss;
        let s = f.value(&comp.point)?;
        share += s;
        rows.push(LedgerRow {
            round: i + 1,
            loss,
            cum_loss: cum,
            comparator_share: s,
            regret: cum - share,
            bound_rhs: bound_rhs(i + 1),
        });
        learner.observe(f)?;
    }
    Ok(RegretLedger {
        rows,
        comparator: comp,
        bound_name: bound_name.to_string(),
    })
}

/// Monte-Carlo estimate of the hindsight minimum against random ±1 linear
/// losses over the hypercube [−1,1]^n: E[min_x Σvᵀx] = −n·E|Σ±1| ≈ −n√(2T/π).
/// Any online decision has zero expected loss per round, so this statistic
/// lower-bounds every algorithm's expected regret.
#[derive(Debug, Clone, Copy)]
pub struct LowerBoundProbe {
    pub mean: f64,
    pub std_err: f64,
    /// −n·√(2T/π), the asymptotic value.
    pub theory: f64,
}

pub fn lower_bound_probe(n: usize, rounds: usize, trials: usize, seed: u64) -> LowerBoundProbe {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut samples = Vec::with_capacity(trials);
    for _ in 0..trials {
        let mut sums = vec![0i64; n];
        for _ in 0..rounds {
            for s in sums.iter_mut() {
                *s += if rng.gen::<bool>() { 1 } else { -1 };
            }
        }
        // min over the hypercube of Σ_t v_tᵀx = −Σ_i |Σ_t v_t(i)|.
        let m: i64 = sums.iter().map(|s| s.abs()).sum();
        samples.push(-(m as f64));
    }
    let mean = samples.iter().sum::<f64>() / trials as f64;
    let var = samples
        .iter()
        .map(|s| (s - mean) * (s - mean))
        .sum::<f64>()
        / (trials as f64 - 1.0).max(1.0);
    LowerBoundProbe {
        mean,
        std_err: (var / trials as f64).sqrt(),
        theory: -(n as f64) * (2.0 * rounds as f64 / std::f64::consts::PI).sqrt(),
    }
}

/// Flat key=value config text: one pair per line, '#' comments, blank lines
/// ignored. Keys must be unique.
pub fn parse_config(text: &str) -> Result<BTreeMap<String, String>> {
    let mut map = BTreeMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or_else(|| {
            OcoError::ConfigInvalid(format!("line {}: expected key=value", lineno + 1))
        })?;
        let key = k.trim().to_string();
        if map.insert(key.clone(), v.trim().to_string()).is_some() {
            return Err(OcoError::ConfigInvalid(format!("duplicate key {key:?}")));
        }
    }
    Ok(map)
}

fn get_parsed<T: std::str::FromStr>(
    map: &BTreeMap<String, String>,
    key: &str,
    default: Option<T>,
) -> Result<T> {
    match map.get(key) {
        Some(v) => v
            .parse()
            .map_err(|_| OcoError::ConfigInvalid(format!("bad value for {key}: {v:?}"))),
        None => default.ok_or_else(|| OcoError::ConfigInvalid(format!("missing key {key}"))),
    }
}

/// A fully-resolved experiment: learner × adversary × set × horizon × seed.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub learner: String,
    pub adversary: String,
    pub set: String,
    pub dim: usize,
    pub rounds: usize,
    pub seed: u64,
    pub eta: Option<f64>,
    pub g: f64,
    pub arm_means: Vec<f64>,
}

impl ExperimentConfig {
    pub fn from_map(map: &BTreeMap<String, String>) -> Result<Self> {
        let arm_means = match map.get("arm_means") {
            None => Vec::new(),
            Some(v) => v
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse()
                        .map_err(|_| OcoError::ConfigInvalid(format!("bad arm mean {t:?}")))
                })
                .collect::<Result<_>>()?,
        };
        Ok(ExperimentConfig {
            learner: get_parsed(map, "learner", None)?,
            adversary: get_parsed(map, "adversary", None)?,
            set: get_parsed(map, "set", Some("ball".to_string()))?,
            dim: get_parsed(map, "dim", Some(2))?,
            rounds: get_parsed(map, "T", None)?,
            seed: get_parsed(map, "seed", Some(0))?,
            eta: map
                .get("eta")
                .map(|v| {
                    v.parse().map_err(|_| {
                        OcoError::ConfigInvalid(format!("bad value for eta: {v:?}"))
                    })
                })
                .transpose()?,
            g: get_parsed(map, "g", Some(1.0))?,
            arm_means,
        })
    }

    /// Every effective setting, echoed for the run metadata.
    pub fn metadata(&self) -> String {
        let seeds = split_seed(self.seed);
        let mut out = String::new();
        out.push_str(&format!("learner={}\n", self.learner));
        out.push_str(&format!("adversary={}\n", self.adversary));
        out.push_str(&format!("set={}\n", self.set));
        out.push_str(&format!("dim={}\n", self.dim));
        out.push_str(&format!("T={}\n", self.rounds));
        out.push_str(&format!("seed={}\n", self.seed));
        out.push_str(&format!("seed_adversary={}\n", seeds.adversary));
        out.push_str(&format!("seed_learner={}\n", seeds.learner));
        out.push_str(&format!("seed_estimator={}\n", seeds.estimator));
        out.push_str(&format!("g={}\n", self.g));
        match self.eta {
            Some(e) => out.push_str(&format!("eta={e}\n")),
            None => out.push_str("eta=auto\n"),
        }
        if !self.arm_means.is_empty() {
            let s: Vec<String> = self.arm_means.iter().map(|m| m.to_string()).collect();
            out.push_str(&format!("arm_means={}\n", s.join(",")));
        }
        out
    }

    fn build_set(&self) -> Result<FeasibleSet> {
        match self.set.as_str() {
            "ball" => Ok(FeasibleSet::unit_ball(self.dim)),
            "simplex" => Ok(FeasibleSet::simplex(self.dim)),
            "box" => FeasibleSet::boxed(vec![-1.0; self.dim], vec![1.0; self.dim]),
            other => Err(OcoError::ConfigInvalid(format!("unknown set {other:?}"))),
        }
    }

    fn build_adversary(&self) -> Result<Adversary> {
        match self.adversary.as_str() {
            "stochastic-linear" => Ok(Adversary::StochasticLinear { g: self.g }),
            "hypercube" => Ok(Adversary::HypercubeSigns),
            "ftl-trap" => Ok(Adversary::FtlTrap),
            "shannon" => Ok(Adversary::ShannonMarket),
            "bandit-arms" => Ok(Adversary::BanditArms {
                means: self.arm_means.clone(),
            }),
            other => Err(OcoError::ConfigInvalid(format!(
                "unknown adversary {other:?}"
            ))),
        }
    }

    fn build_learner(
        &self,
        set: &FeasibleSet,
        g: f64,
        seed: u64,
    ) -> Result<(Box<dyn OnlineLearner>, String, Box<dyn Fn(usize) -> f64>)> {
        let d = set.diameter();
        let x1 = set.interior_center().to_vec();
        let n = set.dim() as f64;
        let t_horizon = self.rounds;
        let learner: Box<dyn OnlineLearner> = match self.learner.as_str() {
            "ogd" => Box::new(Ogd::diminishing(set.clone(), x1, g)?),
            "ftl" => Box::new(Ftl::new(set.clone(), x1)?),
            "rftl" => {
                let eta = self
                    .eta
                    .unwrap_or_else(|| d / (g * (t_horizon as f64).sqrt()));
                Box::new(Rftl::new(set.clone(), Regularizer::euclidean(set.dim()), eta)?)
            }
            "rftl-entropy" => {
                let eta = self
                    .eta
                    .unwrap_or_else(|| (n.ln() / (2.0 * t_horizon as f64)).sqrt() / g);
                Box::new(Rftl::new(set.clone(), Regularizer::NegEntropy, eta)?)
            }
            "omd-lazy" | "omd-agile" => {
                let eta = self
                    .eta
                    .unwrap_or_else(|| d / (g * (t_horizon as f64).sqrt()));
                let mode = if self.learner == "omd-lazy" {
                    OmdMode::Lazy
                } else {
                    OmdMode::Agile
                };
                Box::new(Omd::new(
                    set.clone(),
                    Regularizer::euclidean(set.dim()),
                    eta,
                    mode,
                    x1,
                )?)
            }
            "eg" => Box::new(Eg::auto(set.dim(), t_horizon, g)?),
            "adagrad" => Box::new(AdaGrad::new(set.clone(), x1)?),
            "ons" => Box::new(Ons::new(set.clone(), x1, 1.0, g)?),
            "ocg" => Box::new(Ocg::new(set.clone(), x1, t_horizon, g)?),
            "fpl" => {
                let sigma = n.sqrt();
                let eta = self
                    .eta
                    .unwrap_or_else(|| (sigma / (g * g * t_horizon as f64)).sqrt());
                Box::new(FplConvex::new(set.clone(), eta, 100, seed)?)
            }
            other => {
                return Err(OcoError::ConfigInvalid(format!(
                    "unknown learner {other:?}"
                )))
            }
        };
        let t = t_horizon as f64;
        let (name, rhs): (String, Box<dyn Fn(usize) -> f64>) = match self.learner.as_str() {
            "ogd" => (
                "1.5*G*D*sqrt(T)".into(),
                Box::new(move |tt| 1.5 * g * d * (tt as f64).sqrt()),
            ),
            "eg" => (
                "2*G*sqrt(2*T*ln n)".into(),
                Box::new(move |tt| 2.0 * g * (2.0 * tt as f64 * n.ln()).sqrt()),
            ),
            "ocg" => (
                "8*D*G*T^(3/4)".into(),
                Box::new(move |tt| 8.0 * d * g * (tt as f64).powf(0.75)),
            ),
            "ons" => (
                "5*(1/a+G*D)*n*ln T".into(),
                Box::new(move |tt| 5.0 * (1.0 + g * d) * n * (tt as f64).ln().max(0.0)),
            ),
            _ => (
                "none".into(),
                Box::new(move |_| f64::NAN * t / t),
            ),
        };
        Ok((learner, name, rhs))
    }
}

/// Run a configured experiment and return (csv, metadata).
pub fn run_experiment(config: &ExperimentConfig) -> Result<(String, String)> {
    if config.rounds == 0 {
        return Err(OcoError::ConfigInvalid("T must be >= 1".into()));
    }
    let seeds = split_seed(config.seed);
    let set = config.build_set()?;
    let adversary = config.build_adversary()?;
    let losses = adversary.materialize(config.dim, config.rounds, seeds.adversary)?;

    if config.learner == "exp3" {
        return run_bandit_experiment(config, &set, &losses, seeds.learner);
    }

    // Realized gradient bound: prefer the materialized metadata.
    let g = losses
        .iter()
        .map(|f| f.meta.g)
        .fold(config.g, f64::max)
        .max(1e-12);
    let (mut learner, bound_name, bound_rhs) = config.build_learner(&set, g, seeds.learner)?;
    let ledger = run_learner(learner.as_mut(), &losses, &set, &bound_name, &*bound_rhs)?;
    let mut metadata = config.metadata();
    metadata.push_str(&format!("bound={bound_name}\n"));
    metadata.push_str(&format!("comparator_method={:?}\n", ledger.comparator.method));
    metadata.push_str(&format!("final_regret={:.12e}\n", ledger.final_regret()));
    Ok((ledger.to_csv(), metadata))
}

/// Bandit-feedback path: the learner sees only the loss of its sampled arm.
fn run_bandit_experiment(
    config: &ExperimentConfig,
    set: &FeasibleSet,
    losses: &[LossOracle],
    learner_seed: u64,
) -> Result<(String, String)> {
    if !matches!(set.kind(), SetKind::Simplex) {
        return Err(OcoError::ConfigInvalid("exp3 needs set=simplex".into()));
    }
    let n = set.dim();
    let mut exp3 = Exp3::new(n, config.rounds, learner_seed)?;
    let comp = comparator(losses, set)?;
    let bound_name = "2*sqrt(T*n*ln n)".to_string();
    let mut rows = Vec::with_capacity(losses.len());
    let mut cum = 0.0;
    let mut share = 0.0;
    for (i, f) in losses.iter().enumerate() {
        let arm = exp3.choose();
        let mut e = vec![0.0; n];
        e[arm] = 1.0;
        let loss = f.value(&e)?;
        cum += loss;
        let s = f.value(&comp.point)?;
        share += s;
        let tt = (i + 1) as f64;
        rows.push(LedgerRow {
            round: i + 1,
            loss,
            cum_loss: cum,
            comparator_share: s,
            regret: cum - share,
            bound_rhs: 2.0 * (tt * n as f64 * (n as f64).ln()).sqrt(),
        });
        exp3.observe(loss)?;
    }
    let ledger = RegretLedger {
        rows,
        comparator: comp,
        bound_name: bound_name.clone(),
    };
    let mut metadata = config.metadata();
    metadata.push_str(&format!("bound={bound_name}\n"));
    metadata.push_str(&format!("comparator_method={:?}\n", ledger.comparator.method));
    metadata.push_str(&format!("final_regret={:.12e}\n", ledger.final_regret()));
    Ok((ledger.to_csv(), metadata))
}
