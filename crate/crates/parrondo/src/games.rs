//! The coin-game family as Markov chains on capital residues mod `M`.
//!
//! Game A flips one biased coin (win probability `0.5 − α`). Game B picks a
//! coin by the current capital residue: coin 1 (win `0.1 − α`) when the
//! capital is a multiple of `M`, coin 2 (win `0.75 − α`) otherwise. A win
//! moves the capital +1, a loss −1, so on residues both games are ±1 walks
//! mod `M`. Residues always use the mathematical modulus, so negative
//! capital maps to `0..M-1` correctly.

use crate::markov::{ProbabilityVector, TransitionMatrix};
use thiserror::Error;

/// Exclusive upper bound of the supported bias range.
pub const ALPHA_MAX: f64 = 0.1;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("alpha out of range [0, 0.1): {0}")]
    AlphaOutOfRange(f64),
    #[error("modulus must be at least 2, got {0}")]
    ModulusTooSmall(usize),
    #[error("gamma out of range [0, 1]: {0}")]
    GammaOutOfRange(f64),
}

/// Bias and modulus of a game family instance. The three coin win
/// probabilities are derived from `alpha` and are all in `(0, 1)` for any
/// admitted bias.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameParams {
    alpha: f64,
    modulus: usize,
}

impl GameParams {
    /// Admits `0 ≤ alpha < 0.1` (the fair boundary `alpha = 0` included)
    /// and `modulus ≥ 2`. At `alpha = 0.1` coin 1 would never win.
    pub fn new(alpha: f64, modulus: usize) -> Result<Self, GameError> {
        if !alpha.is_finite() || !(0.0..ALPHA_MAX).contains(&alpha) {
            return Err(GameError::AlphaOutOfRange(alpha));
        }
        if modulus < 2 {
            return Err(GameError::ModulusTooSmall(modulus));
        }
        Ok(Self { alpha, modulus })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn modulus(&self) -> usize {
        self.modulus
    }

    /// Win probability of game A's single coin.
    pub fn coin_a_win(&self) -> f64 {
        0.5 - self.alpha
    }

    /// Win probability of game B's coin 1, tossed when the capital is a
    /// multiple of the modulus.
    pub fn coin_b1_win(&self) -> f64 {
        0.1 - self.alpha
    }

    /// Win probability of game B's coin 2, tossed at every other residue.
    pub fn coin_b2_win(&self) -> f64 {
        0.75 - self.alpha
    }
}

/// Which game a one-play analysis refers to.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Game {
    A,
    B,
    /// Play A with probability `gamma`, B otherwise, independently per play.
    Mixture(f64),
    /// Play A when the capital is a multiple of the modulus, B otherwise;
    /// coin 1 is never tossed.
    Optimal,
}

/// Per-residue probability of winning a single play: entry `i` applies when
/// the current capital ≡ `i` (mod `M`).
#[derive(Debug, Clone, PartialEq)]
pub struct WinProbabilityVector {
    per_state_win: Vec<f64>,
}

impl WinProbabilityVector {
    fn new(per_state_win: Vec<f64>) -> Self {
        debug_assert!(per_state_win.iter().all(|&p| 0.0 < p && p < 1.0));
        Self { per_state_win }
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.per_state_win
    }

    pub fn len(&self) -> usize {
        self.per_state_win.len()
    }

    pub fn is_empty(&self) -> bool {
        self.per_state_win.is_empty()
    }
}

/// ±1 walk on residues mod `m` with a residue-dependent win probability.
/// For `m = 2` the +1 and −1 destinations coincide and their masses merge.
fn walk_matrix(m: usize, win_at: impl Fn(usize) -> f64) -> TransitionMatrix {
    let mut rows = vec![vec![0.0; m]; m];
    for (i, row) in rows.iter_mut().enumerate() {
        let w = win_at(i);
        row[(i + 1) % m] += w;
        row[(i + m - 1) % m] += 1.0 - w;
    }
    TransitionMatrix::from_rows(rows).expect("±1 walk rows are stochastic")
}

/// Transition matrix of game A on capital residues.
pub fn game_a_matrix(params: &GameParams) -> TransitionMatrix {
    walk_matrix(params.modulus(), |_| params.coin_a_win())
}

/// Transition matrix of game B on capital residues: coin 1 from residue 0,
/// coin 2 from every other residue.
pub fn game_b_matrix(params: &GameParams) -> TransitionMatrix {
    walk_matrix(params.modulus(), |res| {
        if res == 0 {
            params.coin_b1_win()
        } else {
            params.coin_b2_win()
        }
    })
}

/// Elementwise blend `gamma·A + (1−gamma)·B`: the chain of choosing game A
/// with probability `gamma` independently at each play.
pub fn mixture_matrix(params: &GameParams, gamma: f64) -> Result<TransitionMatrix, GameError> {
    check_gamma(gamma)?;
    let a = game_a_matrix(params);
    let b = game_b_matrix(params);
    let m = params.modulus();
    let rows = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| gamma * a.entry(i, j) + (1.0 - gamma) * b.entry(i, j))
                .collect()
        })
        .collect();
    Ok(TransitionMatrix::from_rows(rows).expect("blend of stochastic rows is stochastic"))
}

/// Chain of the capital-aware policy: row 0 from game A, all other rows
/// from game B. Coin 1 is never tossed under this policy.
pub fn optimal_policy_matrix(params: &GameParams) -> TransitionMatrix {
    walk_matrix(params.modulus(), |res| {
        if res == 0 {
            params.coin_a_win()
        } else {
            params.coin_b2_win()
        }
    })
}

/// One-play win probability per residue for the given game.
pub fn win_vector(params: &GameParams, game: Game) -> Result<WinProbabilityVector, GameError> {
    let m = params.modulus();
    let at = |res: usize| -> Result<f64, GameError> {
        Ok(match game {
            Game::A => params.coin_a_win(),
            Game::B => {
                if res == 0 {
                    params.coin_b1_win()
                } else {
                    params.coin_b2_win()
                }
            }
            Game::Mixture(gamma) => {
                check_gamma(gamma)?;
                let b = if res == 0 {
                    params.coin_b1_win()
                } else {
                    params.coin_b2_win()
                };
                gamma * params.coin_a_win() + (1.0 - gamma) * b
            }
            Game::Optimal => {
                if res == 0 {
                    params.coin_a_win()
                } else {
                    params.coin_b2_win()
                }
            }
        })
    };
    let per_state = (0..m).map(at).collect::<Result<Vec<_>, _>>()?;
    Ok(WinProbabilityVector::new(per_state))
}

fn check_gamma(gamma: f64) -> Result<(), GameError> {
    if !gamma.is_finite() || !(0.0..=1.0).contains(&gamma) {
        return Err(GameError::GammaOutOfRange(gamma));
    }
    Ok(())
}

/// Stationary distribution of game B for `M = 3`, evaluated from the
/// closed-form rational functions in the bias. Shares the common
/// denominator `240α² − 16α + 169`.
pub fn closed_form_stationary_b(alpha: f64) -> Result<ProbabilityVector, GameError> {
    let params = GameParams::new(alpha, 3)?;
    let a = params.alpha();
    let d = 240.0 * a * a - 16.0 * a + 169.0;
    let v = vec![
        5.0 * (16.0 * a * a - 8.0 * a + 13.0) / d,
        2.0 * (40.0 * a * a + 6.0 * a + 13.0) / d,
        2.0 * (40.0 * a * a + 6.0 * a + 39.0) / d,
    ];
    Ok(pv_from_closed_form(v))
}

/// Stationary distribution of the 50/50 mixture for `M = 3`, from the
/// closed forms over the denominator `960α² − 32α + 709`.
pub fn closed_form_stationary_mix(alpha: f64) -> Result<ProbabilityVector, GameError> {
    let params = GameParams::new(alpha, 3)?;
    let a = params.alpha();
    let d = 960.0 * a * a - 32.0 * a + 709.0;
    let v = vec![
        (320.0 * a * a - 80.0 * a + 245.0) / d,
        (320.0 * a * a + 24.0 * a + 180.0) / d,
        (320.0 * a * a + 24.0 * a + 284.0) / d,
    ];
    Ok(pv_from_closed_form(v))
}

fn pv_from_closed_form(v: Vec<f64>) -> ProbabilityVector {
    // The numerators sum to the denominator identically, so only
    // floating-point rounding separates the sum from 1.
    ProbabilityVector::new(v).expect("closed form sums to 1")
}
