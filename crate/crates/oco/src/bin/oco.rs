//! Command-line harness: run regret experiments, solve zero-sum games,
//! backtest portfolios, complete matrices, and probe the regret lower bound.
//!
//! Exit codes: 0 success, 2 configuration error, 3 assertion/runtime failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use oco::applications::{self, PortfolioLearner};
use oco::games::{self, ColumnStrategy, GameMatrix};
use oco::harness::{self, ExperimentConfig};
use oco::{OcoError, Result};

#[derive(Parser)]
#[command(name = "oco", about = "Online convex optimization experiment harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment from a key=value config file and emit CSV.
    Run {
        /// Config file: learner, adversary, set, dim, T, seed, params.
        config: PathBuf,
        /// Directory for the CSV and metadata (stdout if omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Approximate a zero-sum game's value with a regret-based solver.
    SolveGame {
        /// Matrix file: "n m" then n rows of m entries.
        matrix: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        rounds: usize,
        /// Column player also runs multiplicative weights instead of
        /// best-responding.
        #[arg(long)]
        hedge_columns: bool,
        /// Fail (exit 3) if the duality gap exceeds this.
        #[arg(long)]
        max_gap: Option<f64>,
    },
    /// Backtest a portfolio learner on a return stream.
    Portfolio {
        /// Returns file: one round per line, whitespace-separated relatives.
        returns: PathBuf,
        #[arg(long, default_value = "newton")]
        learner: String,
        #[arg(long, default_value_t = 1e-3)]
        floor: f64,
    },
    /// Complete a partially observed matrix under a nuclear-norm bound.
    Complete {
        /// Observations file: "rows cols k" then "i j value" lines.
        file: PathBuf,
        #[arg(long, default_value_t = 500)]
        rounds: usize,
    },
    /// Estimate the hindsight-minimum statistic behind the √T regret
    /// lower bound.
    ProbeLowerBound {
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[arg(long, default_value_t = 10_000)]
        rounds: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Assertion(msg)) => {
            eprintln!("failure: {msg}");
            ExitCode::from(3)
        }
    }
}

enum Failure {
    Config(String),
    Assertion(String),
}

impl From<OcoError> for Failure {
    fn from(e: OcoError) -> Self {
        match e {
            OcoError::ConfigInvalid(_) | OcoError::Io(_) | OcoError::MetadataMissing(_) => {
                Failure::Config(e.to_string())
            }
            other => Failure::Assertion(other.to_string()),
        }
    }
}

fn read(path: &PathBuf) -> std::result::Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))
}

fn dispatch(cmd: Command) -> std::result::Result<(), Failure> {
    match cmd {
        Command::Run { config, out } => {
            let text = read(&config)?;
            let map = harness::parse_config(&text)?;
            let cfg = ExperimentConfig::from_map(&map)?;
            let (csv, metadata) = harness::run_experiment(&cfg)?;
            match out {
                None => {
                    print!("{metadata}");
                    print!("{csv}");
                }
                Some(dir) => {
                    std::fs::create_dir_all(&dir)
                        .map_err(|e| Failure::Config(e.to_string()))?;
                    let stem = format!("{}-{}-seed{}", cfg.learner, cfg.adversary, cfg.seed);
                    std::fs::write(dir.join(format!("{stem}.csv")), csv)
                        .map_err(|e| Failure::Assertion(e.to_string()))?;
                    std::fs::write(dir.join(format!("{stem}.meta")), metadata)
                        .map_err(|e| Failure::Assertion(e.to_string()))?;
                    println!("wrote {}/{stem}.csv", dir.display());
                }
            }
            Ok(())
        }
        Command::SolveGame {
            matrix,
            rounds,
            hedge_columns,
            max_gap,
        } => {
            let text = read(&matrix)?;
            let game = GameMatrix::parse(&text)?;
            let strategy = if hedge_columns {
                ColumnStrategy::Hedge
            } else {
                ColumnStrategy::BestResponse
            };
            let sol = games::solve(&game, rounds, strategy)?;
            println!("rounds: {}", sol.rounds);
            println!("row mixture: {}", fmt_vec(&sol.row_mixture));
            println!("col mixture: {}", fmt_vec(&sol.col_mixture));
            println!(
                "value in [{:.6}, {:.6}] (original units [{:.6}, {:.6}])",
                sol.value_lower,
                sol.value_upper,
                game.denormalize(sol.value_lower),
                game.denormalize(sol.value_upper)
            );
            println!("gap: {:.6} (guarantee {:.6})", sol.gap(), sol.gap_bound);
            if let Some(limit) = max_gap {
                if sol.gap() > limit {
                    return Err(Failure::Assertion(format!(
                        "duality gap {:.6} exceeds {limit}",
                        sol.gap()
                    )));
                }
            }
            Ok(())
        }
        Command::Portfolio {
            returns,
            learner,
            floor,
        } => {
            let text = read(&returns)?;
            let stream = parse_returns(&text)?;
            let kind = match learner.as_str() {
                "gradient" => PortfolioLearner::Gradient,
                "newton" => PortfolioLearner::Newton,
                other => {
                    return Err(Failure::Config(format!("unknown learner {other:?}")))
                }
            };
            let res = applications::portfolio_backtest(&stream, kind, floor)?;
            println!("rounds: {}", stream.len());
            println!("log wealth: {:.6}", res.log_wealth);
            println!(
                "best CRP log wealth: {:.6} at {}",
                res.comparator_log_wealth,
                fmt_vec(&res.comparator_weights)
            );
            println!("regret: {:.6}", res.regret);
            Ok(())
        }
        Command::Complete { file, rounds } => {
            let text = read(&file)?;
            let (r, c, k, obs) = parse_completion(&text)?;
            let n_obs = obs.len();
            let res = applications::complete_matrix_offline(r, c, obs, k, rounds)?;
            let final_obj = res.objective_trace.last().copied().unwrap_or(f64::NAN);
            println!("matrix: {r}x{c}, nuclear bound {k}, {n_obs} observed entries");
            println!("iterations: {}", res.objective_trace.len());
            println!("final squared error: {final_obj:.6e}");
            Ok(())
        }
        Command::ProbeLowerBound {
            dim,
            rounds,
            trials,
            seed,
        } => {
            if dim == 0 || rounds == 0 || trials == 0 {
                return Err(Failure::Config("dim, rounds, trials must be >= 1".into()));
            }
            let p = harness::lower_bound_probe(dim, rounds, trials, seed);
            println!(
                "hindsight minimum: {:.4} +/- {:.4} (asymptotic {:.4})",
                p.mean, p.std_err, p.theory
            );
            if (p.mean - p.theory).abs() > 5.0 * p.std_err.max(1e-12) {
                return Err(Failure::Assertion(
                    "estimate deviates from the asymptotic value".into(),
                ));
            }
            Ok(())
        }
    }
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.4}")).collect();
    format!("[{}]", parts.join(", "))
}

fn parse_returns(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let row: Vec<f64> = line
            .split(|ch: char| ch.is_whitespace() || ch == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>().map_err(|_| {
                    OcoError::ConfigInvalid(format!("line {}: bad return {t:?}", lineno + 1))
                })
            })
            .collect::<Result<_>>()?;
        out.push(row);
    }
    if out.is_empty() {
        return Err(OcoError::ConfigInvalid("no return rows".into()));
    }
    Ok(out)
}

#[allow(clippy::type_complexity)]
fn parse_completion(text: &str) -> Result<(usize, usize, f64, Vec<(usize, usize, f64)>)> {
    let mut tokens = text.split_whitespace();
    let mut next = |what: &str| {
        tokens
            .next()
            .ok_or_else(|| OcoError::ConfigInvalid(format!("missing {what}")))
    };
    let rows: usize = next("row count")?
        .parse()
        .map_err(|_| OcoError::ConfigInvalid("bad row count".into()))?;
    let cols: usize = next("column count")?
        .parse()
        .map_err(|_| OcoError::ConfigInvalid("bad column count".into()))?;
    let k: f64 = next("nuclear bound")?
        .parse()
        .map_err(|_| OcoError::ConfigInvalid("bad nuclear bound".into()))?;
    let rest: Vec<&str> = tokens.collect();
    if rest.is_empty() || rest.len() % 3 != 0 {
        return Err(OcoError::ConfigInvalid(
            "observations must be (i, j, value) triples".into(),
        ));
    }
    let mut obs = Vec::with_capacity(rest.len() / 3);
    for triple in rest.chunks(3) {
        let i: usize = triple[0]
            .parse()
            .map_err(|_| OcoError::ConfigInvalid(format!("bad row index {:?}", triple[0])))?;
        let j: usize = triple[1]
            .parse()
            .map_err(|_| OcoError::ConfigInvalid(format!("bad col index {:?}", triple[1])))?;
        let v: f64 = triple[2]
            .parse()
            .map_err(|_| OcoError::ConfigInvalid(format!("bad value {:?}", triple[2])))?;
        obs.push((i, j, v));
    }
    Ok((rows, cols, k, obs))
}
