//! Long-run win rates and the critical bias.
//!
//! A policy's long-run one-play win probability is the stationary-weighted
//! average of the per-state win probabilities (total law of probabilities).
//! Periodic patterns are handled by lifting the chain to states
//! `(residue, pattern index)`, which makes the time-inhomogeneous schedule
//! homogeneous again.

use crate::games::{
    self, game_a_matrix, game_b_matrix, mixture_matrix, optimal_policy_matrix, Game, GameError,
    GameParams, WinProbabilityVector,
};
use crate::markov::{MarkovError, ProbabilityVector, TransitionMatrix};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error(transparent)]
    Markov(#[from] MarkovError),
    #[error(transparent)]
    Game(#[from] GameError),
    #[error("pattern is empty")]
    EmptyPattern,
    #[error("invalid pattern character '{0}' (expected 'A' or 'B')")]
    InvalidPatternChar(char),
    #[error("dimension mismatch: {vector} win probabilities for {matrix} states")]
    DimensionMismatch { vector: usize, matrix: usize },
    #[error("win rate minus 0.5 has no sign change on [0, 0.1) for gamma={gamma}")]
    NoSignChange { gamma: f64 },
    #[error("win rate is not strictly decreasing in alpha near alpha={alpha}")]
    NotMonotone { alpha: f64 },
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("sweep failed at alpha={alpha}: {source}")]
    SweepRow {
        alpha: f64,
        #[source]
        source: Box<AnalysisError>,
    },
}

/// One play of either game A or game B.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GameChoice {
    A,
    B,
}

/// Nonempty periodic schedule over `{A, B}`, applied cyclically from
/// index 0 (no phase averaging; the first play uses the first character).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatternPolicy {
    seq: Vec<GameChoice>,
}

impl PatternPolicy {
    pub fn new(pattern: &str) -> Result<Self, AnalysisError> {
        pattern.parse()
    }

    pub fn choices(&self) -> &[GameChoice] {
        &self.seq
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    /// Choice applied at (0-based) play index `t`.
    pub fn choice_at(&self, t: u64) -> GameChoice {
        self.seq[(t % self.seq.len() as u64) as usize]
    }
}

impl FromStr for PatternPolicy {
    type Err = AnalysisError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.is_empty() {
            return Err(AnalysisError::EmptyPattern);
        }
        let seq = s
            .chars()
            .map(|c| match c {
                'A' => Ok(GameChoice::A),
                'B' => Ok(GameChoice::B),
                other => Err(AnalysisError::InvalidPatternChar(other)),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Self { seq })
    }
}

impl fmt::Display for PatternPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.seq {
            f.write_str(match c {
                GameChoice::A => "A",
                GameChoice::B => "B",
            })?;
        }
        Ok(())
    }
}

/// Long-run result of a policy: the one-play win probability, the expected
/// profit per play (`2p − 1`, each play pays ±1), and the stationary vector
/// the average was taken over (lifted states for patterns).
#[derive(Debug, Clone, PartialEq)]
pub struct WinRateResult {
    pub win_probability: f64,
    pub expected_profit_per_play: f64,
    pub stationary_used: ProbabilityVector,
}

impl WinRateResult {
    fn from_rate(win_probability: f64, stationary_used: ProbabilityVector) -> Self {
        Self {
            win_probability,
            expected_profit_per_play: 2.0 * win_probability - 1.0,
            stationary_used,
        }
    }
}

/// Stationary-weighted one-play win probability: `Σ_i w_i · wins_i` with
/// `w` the stationary distribution of `matrix`.
pub fn long_run_win_rate(
    matrix: &TransitionMatrix,
    wins: &WinProbabilityVector,
) -> Result<WinRateResult, AnalysisError> {
    if wins.len() != matrix.n_states() {
        return Err(AnalysisError::DimensionMismatch {
            vector: wins.len(),
            matrix: matrix.n_states(),
        });
    }
    let (w, _) = matrix.stationary()?;
    let rate = w
        .as_slice()
        .iter()
        .zip(wins.as_slice())
        .map(|(&wi, &pi)| wi * pi)
        .sum();
    Ok(WinRateResult::from_rate(rate, w))
}

/// Long-run win rate of one of the named games at the given parameters.
pub fn game_win_rate(params: &GameParams, game: Game) -> Result<WinRateResult, AnalysisError> {
    let matrix = match game {
        Game::A => game_a_matrix(params),
        Game::B => game_b_matrix(params),
        Game::Mixture(gamma) => mixture_matrix(params, gamma)?,
        Game::Optimal => optimal_policy_matrix(params),
    };
    let wins = games::win_vector(params, game)?;
    long_run_win_rate(&matrix, &wins)
}

/// Long-run win rate of a periodic pattern, via the lifted chain on states
/// `(residue, pattern index)`: from `(i, t)` the chain moves by the matrix
/// of pattern character `t` on the residue and advances `t → t+1 mod k`.
/// Each lifted state contributes the win probability of the coin selected
/// by its character and residue. For contrived pattern/modulus combinations
/// the lifted chain can be reducible; that error is reported, not masked.
pub fn pattern_win_rate(
    pattern: &PatternPolicy,
    params: &GameParams,
) -> Result<WinRateResult, AnalysisError> {
    let k = pattern.len();
    let m = params.modulus();
    let a = game_a_matrix(params);
    let b = game_b_matrix(params);
    let n = k * m;
    // Lifted state (i, t) lives at index t*m + i.
    let mut rows = vec![vec![0.0; n]; n];
    for (t, &choice) in pattern.choices().iter().enumerate() {
        let step = match choice {
            GameChoice::A => &a,
            GameChoice::B => &b,
        };
        let next_block = ((t + 1) % k) * m;
        for i in 0..m {
            for j in 0..m {
                rows[t * m + i][next_block + j] = step.entry(i, j);
            }
        }
    }
    let lifted = TransitionMatrix::from_rows(rows).expect("lifted rows copy stochastic rows");
    let (w, _) = lifted.stationary()?;
    let mut rate = 0.0;
    for (t, &choice) in pattern.choices().iter().enumerate() {
        for i in 0..m {
            let win = match choice {
                GameChoice::A => params.coin_a_win(),
                GameChoice::B => {
                    if i == 0 {
                        params.coin_b1_win()
                    } else {
                        params.coin_b2_win()
                    }
                }
            };
            rate += w.get(t * m + i) * win;
        }
    }
    Ok(WinRateResult::from_rate(rate, w))
}

/// Root and diagnostics from [`critical_alpha`].
#[derive(Debug, Clone, PartialEq)]
pub struct CriticalAlpha {
    pub alpha_star: f64,
    /// Final bisection bracket containing the root.
    pub bracket: (f64, f64),
    /// `win_rate(alpha_star) − 0.5`.
    pub residual: f64,
    pub iterations: usize,
}

/// Largest admissible bias probed by the grid scan and bisection bracket.
const ALPHA_SUP: f64 = games::ALPHA_MAX - 1e-9;

/// Number of grid points in the pre-flight monotonicity scan.
const MONOTONICITY_GRID: usize = 50;

/// Bias at which the mixture game's long-run win rate crosses one half,
/// found by bisection on `[0, 0.1)`.
///
/// The scan first verifies on a 50-point grid that the win rate is strictly
/// decreasing in the bias (otherwise a bisection root would be ambiguous),
/// then requires a sign change of `rate − 0.5` across the bracket. A pure
/// game A mixture (`gamma = 1`) is fair only at zero bias, so it has no
/// crossing and reports [`AnalysisError::NoSignChange`].
pub fn critical_alpha(
    gamma: f64,
    modulus: usize,
    tol: f64,
) -> Result<CriticalAlpha, AnalysisError> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(AnalysisError::InvalidTolerance(tol));
    }
    let rate_at = |alpha: f64| -> Result<f64, AnalysisError> {
        let params = GameParams::new(alpha, modulus)?;
        Ok(game_win_rate(&params, Game::Mixture(gamma))?.win_probability)
    };

    let mut grid_rates = Vec::with_capacity(MONOTONICITY_GRID);
    for i in 0..MONOTONICITY_GRID {
        let alpha = ALPHA_SUP * i as f64 / (MONOTONICITY_GRID - 1) as f64;
        grid_rates.push((alpha, rate_at(alpha)?));
    }
    for pair in grid_rates.windows(2) {
        if pair[1].1 >= pair[0].1 {
            return Err(AnalysisError::NotMonotone { alpha: pair[0].0 });
        }
    }

    let f_low = grid_rates[0].1 - 0.5;
    let f_high = grid_rates[MONOTONICITY_GRID - 1].1 - 0.5;
    if !(f_low > 0.0 && f_high < 0.0) {
        return Err(AnalysisError::NoSignChange { gamma });
    }

    let (mut low, mut high) = (0.0f64, ALPHA_SUP);
    let mut iterations = 0;
    while high - low > tol {
        let mid = 0.5 * (low + high);
        let f_mid = rate_at(mid)? - 0.5;
        if f_mid > 0.0 {
            low = mid;
        } else {
            high = mid;
        }
        iterations += 1;
    }
    let alpha_star = 0.5 * (low + high);
    Ok(CriticalAlpha {
        alpha_star,
        bracket: (low, high),
        residual: rate_at(alpha_star)? - 0.5,
        iterations,
    })
}

/// Mixture win rate over a bias grid; one row per grid value, emitted in
/// input order. A failing row aborts the sweep with the offending bias
/// attached.
pub fn alpha_sweep(
    gamma: f64,
    modulus: usize,
    grid: &[f64],
) -> Result<Vec<(f64, WinRateResult)>, AnalysisError> {
    grid.iter()
        .map(|&alpha| {
            let row = GameParams::new(alpha, modulus)
                .map_err(AnalysisError::from)
                .and_then(|params| game_win_rate(&params, Game::Mixture(gamma)));
            match row {
                Ok(result) => Ok((alpha, result)),
                Err(source) => Err(AnalysisError::SweepRow {
                    alpha,
                    source: Box::new(source),
                }),
            }
        })
        .collect()
}
