//! Two-player zero-sum games solved by regret minimization: the row player
//! runs Hedge against best-responding (or Hedge-playing) columns, and the
//! average strategies approximate the game value from both sides.

use crate::error::{OcoError, Result};
use crate::experts::Hedge;
use crate::vecops;

/// A zero-sum game in which the row player pays A(i,j) to the column player.
/// Entries are affinely normalized into [0,1] at construction; the recorded
/// offset and scale make the map invertible so values can be reported in the
/// original units.
#[derive(Debug, Clone)]
pub struct GameMatrix {
    rows: usize,
    cols: usize,
    /// Normalized entries, row-major, in [0,1].
    a: Vec<f64>,
    offset: f64,
    scale: f64,
}

impl GameMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || entries.len() != rows * cols {
            return Err(OcoError::ConfigInvalid(
                "matrix shape does not match entry count".into(),
            ));
        }
        if entries.iter().any(|v| !v.is_finite()) {
            return Err(OcoError::ConfigInvalid("non-finite matrix entry".into()));
        }
        let lo = entries.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = entries.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let (offset, scale) = if hi > lo { (lo, hi - lo) } else { (lo, 1.0) };
        let a = entries.iter().map(|v| (v - offset) / scale).collect();
        Ok(GameMatrix {
            rows,
            cols,
            a,
            offset,
            scale,
        })
    }

    /// Parse the text format: first line "n m", then n rows of m numbers.
    pub fn parse(text: &str) -> Result<Self> {
        let mut tokens = text.split_whitespace();
        let rows: usize = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| OcoError::ConfigInvalid("missing row count".into()))?;
        let cols: usize = tokens
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or_else(|| OcoError::ConfigInvalid("missing column count".into()))?;
        let entries: Vec<f64> = tokens
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| OcoError::ConfigInvalid(format!("bad entry {t:?}")))
            })
            .collect::<Result<_>>()?;
        Self::new(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Normalized entry in [0,1].
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.a[i * self.cols + j]
    }

    /// Map a normalized value back to the original units.
    pub fn denormalize(&self, v: f64) -> f64 {
        self.offset + self.scale * v
    }

    /// Row player's loss vector against a column distribution: (A y)_i.
    pub fn row_losses(&self, y: &[f64]) -> Result<Vec<f64>> {
        vecops::check_dim(self.cols, y.len())?;
        Ok((0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j) * y[j]).sum())
            .collect())
    }

    /// Column player's payoff vector against a row distribution: (Aᵀ x)_j.
    pub fn col_payoffs(&self, x: &[f64]) -> Result<Vec<f64>> {
        vecops::check_dim(self.rows, x.len())?;
        Ok((0..self.cols)
            .map(|j| (0..self.rows).map(|i| self.at(i, j) * x[i]).sum())
            .collect())
    }

    pub fn value_of(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        Ok(vecops::dot(x, &self.row_losses(y)?))
    }

    /// The role-swapped game: the column player of A becomes the row player,
    /// paying 1 − A(j,i). Its value is 1 minus the value of A.
    pub fn swapped(&self) -> GameMatrix {
        let mut entries = Vec::with_capacity(self.a.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(1.0 - self.at(i, j));
            }
        }
        GameMatrix {
            rows: self.cols,
            cols: self.rows,
            a: entries,
            offset: 0.0,
            scale: 1.0,
        }
    }
}

/// Pure best response of the row player (minimizer) to a column mixture;
/// ties break toward the lowest index.
pub fn best_response_row(game: &GameMatrix, y: &[f64]) -> Result<usize> {
    Ok(vecops::argmin(&game.row_losses(y)?))
}

/// Pure best response of the column player (maximizer) to a row mixture.
pub fn best_response_col(game: &GameMatrix, x: &[f64]) -> Result<usize> {
    Ok(vecops::argmax(&game.col_payoffs(x)?))
}

/// How the column player behaves inside `solve`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ColumnStrategy {
    /// Pure best response to the row mixture each round.
    BestResponse,
    /// Hedge over payoffs (losses 1 − Aᵀx), seeded deterministically.
    Hedge,
}

/// Output of the regret-based solver, in normalized [0,1] units.
#[derive(Debug, Clone)]
pub struct GameSolution {
    pub row_mixture: Vec<f64>,
    pub col_mixture: Vec<f64>,
    /// max_j x̄ᵀA e_j — what the row mixture guarantees at worst.
    pub value_upper: f64,
    /// min_i e_iᵀA ȳ — what the column mixture forces at least.
    pub value_lower: f64,
    /// Average realized play value (1/T)Σ x_tᵀA y_t.
    pub play_value: f64,
    /// √(2 ln n / T), the guaranteed duality gap.
    pub gap_bound: f64,
    pub rounds: usize,
}

impl GameSolution {
    pub fn gap(&self) -> f64 {
        self.value_upper - self.value_lower
    }
}

/// Approximate the value of a zero-sum game by running Hedge for the row
/// player with ε = √(2 ln n / T) for T rounds. The averages satisfy
///
///   max_j x̄ᵀA e_j  ≤  (1/T)Σ x_tᵀA y_t  ≤  min_i e_iᵀA ȳ + √(2 ln n / T),
///
/// so both mixtures approximate the minimax value within the gap bound.
pub fn solve(game: &GameMatrix, rounds: usize, col: ColumnStrategy) -> Result<GameSolution> {
    if rounds == 0 {
        return Err(OcoError::ConfigInvalid("rounds must be >= 1".into()));
    }
    let n = game.rows();
    let m = game.cols();
    let t = rounds as f64;
    let eps = (2.0 * (n as f64).ln() / t).sqrt().min(0.5);
    let mut row = Hedge::new(n, eps)?;
    let mut col_hedge = match col {
        ColumnStrategy::Hedge => {
            let eps_c = (2.0 * (m as f64).ln() / t).sqrt().min(0.5);
            Some(Hedge::new(m, eps_c)?)
        }
        ColumnStrategy::BestResponse => None,
    };

    let mut x_avg = vec![0.0; n];
    let mut y_avg = vec![0.0; m];
    let mut play_value = 0.0;
    for _ in 0..rounds {
        let x = row.distribution().to_vec();
        let y: Vec<f64> = match &col_hedge {
            None => {
                let mut y = vec![0.0; m];
                y[best_response_col(game, &x)?] = 1.0;
                y
            }
            Some(h) => h.distribution().to_vec(),
        };
        vecops::axpy(&mut x_avg, 1.0 / t, &x);
        vecops::axpy(&mut y_avg, 1.0 / t, &y);
        play_value += game.value_of(&x, &y)? / t;

        row.update(&game.row_losses(&y)?)?;
        if let Some(h) = col_hedge.as_mut() {
            // The maximizer's loss is the complement of its payoff.
            let losses: Vec<f64> =
                game.col_payoffs(&x)?.iter().map(|p| 1.0 - p).collect();
            h.update(&losses)?;
        }
    }

    let value_upper = game
        .col_payoffs(&x_avg)?
        .iter()
        .cloned()
        .fold(f64::NEG_INFINITY, f64::max);
    let value_lower = game
        .row_losses(&y_avg)?
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    Ok(GameSolution {
        row_mixture: x_avg,
        col_mixture: y_avg,
        value_upper,
        value_lower,
        play_value,
        gap_bound: (2.0 * (n as f64).ln() / t).sqrt(),
        rounds,
    })
}

/// Rock-paper-scissors from the row player's perspective: loss 1 on a loss,
/// ½ on a draw, 0 on a win (the ±1 payoffs normalized into [0,1]).
pub fn rock_paper_scissors() -> GameMatrix {
    GameMatrix::new(3, 3, vec![0.0, 1.0, -1.0, -1.0, 0.0, 1.0, 1.0, -1.0, 0.0])
        .expect("static matrix is well formed")
}
