//! Seeded Monte Carlo simulation of the coin games.
//!
//! # Randomness contract
//!
//! The generator is ChaCha8 (`rand_chacha::ChaCha8Rng`), seeded with
//! `seed_from_u64(seed)`. Run `r` of a batch draws from stream `r` of the
//! same seed (`set_stream(r)`); a single [`simulate`] call is run 0. Every
//! Bernoulli draw consumes exactly one 64-bit generator output, converted
//! to a 53-bit uniform in `[0, 1)` and compared against the probability.
//! Within a play the policy draw (random mixtures only) comes first, then
//! the coin draw. Identical inputs therefore produce bit-identical results,
//! and trajectories are auditable given the generator.

use crate::analysis::{self, AnalysisError, GameChoice, PatternPolicy};
use crate::games::{Game, GameError, GameParams};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("n_plays must be positive")]
    ZeroPlays,
    #[error("n_runs must be positive")]
    ZeroRuns,
    #[error(transparent)]
    Game(#[from] GameError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error("unknown policy '{0}' (expected A, B, pattern:<AB...>, mix:<gamma>, or optimal)")]
    UnknownPolicy(String),
}

/// Strategy selecting which game to play at each step.
#[derive(Debug, Clone, PartialEq)]
pub enum Policy {
    PureA,
    PureB,
    /// Fixed periodic schedule, applied from its first character.
    Pattern(PatternPolicy),
    /// Play A with probability `gamma` at each step, independently.
    RandomMix {
        gamma: f64,
    },
    /// Play A when the capital is a multiple of the modulus, B otherwise.
    CapitalAware,
}

impl Policy {
    pub fn random_mix(gamma: f64) -> Result<Self, SimError> {
        if !gamma.is_finite() || !(0.0..=1.0).contains(&gamma) {
            return Err(SimError::Game(GameError::GammaOutOfRange(gamma)));
        }
        Ok(Policy::RandomMix { gamma })
    }

    /// Analytic counterpart evaluated by the analysis module.
    pub fn analytic_win_rate(&self, params: &GameParams) -> Result<f64, AnalysisError> {
        let result = match self {
            Policy::PureA => analysis::game_win_rate(params, Game::A)?,
            Policy::PureB => analysis::game_win_rate(params, Game::B)?,
            Policy::RandomMix { gamma } => analysis::game_win_rate(params, Game::Mixture(*gamma))?,
            Policy::CapitalAware => analysis::game_win_rate(params, Game::Optimal)?,
            Policy::Pattern(pattern) => analysis::pattern_win_rate(pattern, params)?,
        };
        Ok(result.win_probability)
    }
}

impl FromStr for Policy {
    type Err = SimError;

    /// Grammar: `A` | `B` | `pattern:<string over A/B>` | `mix:<gamma>` |
    /// `optimal`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "A" => return Ok(Policy::PureA),
            "B" => return Ok(Policy::PureB),
            "optimal" => return Ok(Policy::CapitalAware),
            _ => {}
        }
        if let Some(pattern) = s.strip_prefix("pattern:") {
            return Ok(Policy::Pattern(pattern.parse()?));
        }
        if let Some(gamma) = s.strip_prefix("mix:") {
            let gamma: f64 = gamma
                .parse()
                .map_err(|_| SimError::UnknownPolicy(s.to_string()))?;
            return Policy::random_mix(gamma);
        }
        Err(SimError::UnknownPolicy(s.to_string()))
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Policy::PureA => write!(f, "A"),
            Policy::PureB => write!(f, "B"),
            Policy::Pattern(p) => write!(f, "pattern:{p}"),
            Policy::RandomMix { gamma } => write!(f, "mix:{gamma}"),
            Policy::CapitalAware => write!(f, "optimal"),
        }
    }
}

/// Outcome of one simulated run. The capital starts at 0 and moves ±1 euro
/// per play, so `final_profit = 2·wins − n_plays` always holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SimResult {
    pub n_plays: u64,
    pub seed: u64,
    /// Stream index within the seed; 0 for single runs.
    pub run_index: u64,
    pub final_profit: i64,
    /// Profit after each play, recorded only when requested.
    pub profit_trajectory: Option<Vec<i64>>,
    pub wins: u64,
    pub empirical_win_rate: f64,
}

/// Simulates `n_plays` plays from capital 0 under `policy`, drawing from
/// stream 0 of `seed`.
pub fn simulate(
    policy: &Policy,
    params: &GameParams,
    n_plays: u64,
    seed: u64,
    record_trajectory: bool,
) -> Result<SimResult, SimError> {
    simulate_run(policy, params, n_plays, seed, 0, record_trajectory)
}

/// Like [`simulate`], drawing from stream `run_index` of `seed`; batch run
/// `r` is reproducible individually as `simulate_run(.., r, ..)`.
pub fn simulate_run(
    policy: &Policy,
    params: &GameParams,
    n_plays: u64,
    seed: u64,
    run_index: u64,
    record_trajectory: bool,
) -> Result<SimResult, SimError> {
    if n_plays == 0 {
        return Err(SimError::ZeroPlays);
    }
    if let Policy::RandomMix { gamma } = policy {
        if !gamma.is_finite() || !(0.0..=1.0).contains(gamma) {
            return Err(SimError::Game(GameError::GammaOutOfRange(*gamma)));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(run_index);
    let modulus = params.modulus() as i64;
    let mut capital: i64 = 0;
    let mut wins: u64 = 0;
    let mut trajectory = record_trajectory.then(|| Vec::with_capacity(n_plays as usize));
    for t in 0..n_plays {
        let choice = match policy {
            Policy::PureA => GameChoice::A,
            Policy::PureB => GameChoice::B,
            Policy::Pattern(pattern) => pattern.choice_at(t),
            Policy::RandomMix { gamma } => {
                if bernoulli(&mut rng, *gamma) {
                    GameChoice::A
                } else {
                    GameChoice::B
                }
            }
            Policy::CapitalAware => {
                if capital.rem_euclid(modulus) == 0 {
                    GameChoice::A
                } else {
                    GameChoice::B
                }
            }
        };
        let p_win = coin_win_probability(params, choice, capital);
        if bernoulli(&mut rng, p_win) {
            wins += 1;
            capital += 1;
        } else {
            capital -= 1;
        }
        if let Some(t) = trajectory.as_mut() {
            t.push(capital);
        }
    }
    Ok(SimResult {
        n_plays,
        seed,
        run_index,
        final_profit: capital,
        profit_trajectory: trajectory,
        wins,
        empirical_win_rate: wins as f64 / n_plays as f64,
    })
}

/// Win probability of the coin the rules select for `choice` at the given
/// capital. Game B reduces the capital with the mathematical modulus, so
/// capital −1 at modulus 3 sits at residue 2 and tosses coin 2.
pub fn coin_win_probability(params: &GameParams, choice: GameChoice, capital: i64) -> f64 {
    match choice {
        GameChoice::A => params.coin_a_win(),
        GameChoice::B => {
            if capital.rem_euclid(params.modulus() as i64) == 0 {
                params.coin_b1_win()
            } else {
                params.coin_b2_win()
            }
        }
    }
}

/// One Bernoulli draw from one 64-bit generator output: the top 53 bits
/// form a uniform in `[0, 1)`, which is compared against `p`.
#[inline]
fn bernoulli(rng: &mut ChaCha8Rng, p: f64) -> bool {
    let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    u < p
}

/// Aggregate over `n_runs` independent runs; run `r` draws from stream `r`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BatchSummary {
    pub n_runs: u64,
    pub n_plays: u64,
    pub seed: u64,
    pub mean_profit_per_play: f64,
    /// Sample standard deviation of the per-run final profits (0 for a
    /// single run).
    pub std_dev_final_profit: f64,
    pub final_profits: Vec<i64>,
    pub total_wins: u64,
    pub empirical_win_rate: f64,
}

pub fn batch(
    policy: &Policy,
    params: &GameParams,
    n_plays: u64,
    n_runs: u64,
    seed: u64,
) -> Result<BatchSummary, SimError> {
    if n_runs == 0 {
        return Err(SimError::ZeroRuns);
    }
    let mut final_profits = Vec::with_capacity(n_runs as usize);
    let mut total_wins = 0u64;
    for r in 0..n_runs {
        let run = simulate_run(policy, params, n_plays, seed, r, false)?;
        total_wins += run.wins;
        final_profits.push(run.final_profit);
    }
    let total_plays = (n_plays * n_runs) as f64;
    let mean_final: f64 = final_profits.iter().map(|&p| p as f64).sum::<f64>() / n_runs as f64;
    let std_dev_final_profit = if n_runs > 1 {
        let ss: f64 = final_profits
            .iter()
            .map(|&p| {
                let d = p as f64 - mean_final;
                d * d
            })
            .sum();
        (ss / (n_runs - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(BatchSummary {
        n_runs,
        n_plays,
        seed,
        mean_profit_per_play: mean_final / n_plays as f64,
        std_dev_final_profit,
        final_profits,
        total_wins,
        empirical_win_rate: total_wins as f64 / total_plays,
    })
}

/// Empirical win rate of a batch against the analytic rate of the same
/// policy, scored as a binomial z-statistic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub analytic_rate: f64,
    pub empirical_rate: f64,
    /// `(empirical − analytic) / √(analytic·(1 − analytic)/n_total)`.
    pub z_score: f64,
    pub n_total: u64,
}

pub fn empirical_vs_analytic(
    policy: &Policy,
    params: &GameParams,
    n_plays: u64,
    n_runs: u64,
    seed: u64,
) -> Result<ComparisonReport, SimError> {
    let analytic_rate = policy.analytic_win_rate(params)?;
    let summary = batch(policy, params, n_plays, n_runs, seed)?;
    let n_total = n_plays * n_runs;
    let se = (analytic_rate * (1.0 - analytic_rate) / n_total as f64).sqrt();
    Ok(ComparisonReport {
        analytic_rate,
        empirical_rate: summary.empirical_win_rate,
        z_score: (summary.empirical_win_rate - analytic_rate) / se,
        n_total,
    })
}
