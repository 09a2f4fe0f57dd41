//! Capital-dependent coin games on modular capital, analyzed exactly as
//! finite Markov chains and cross-checked by seeded Monte Carlo simulation.
//!
//! Two individually losing games — a biased coin flip and a two-coin game
//! whose coin choice depends on the current capital residue mod `M` — can be
//! combined, periodically or at random, into a winning game. This crate
//! computes the long-run win rates of the pure games, periodic patterns,
//! random mixtures, and the capital-aware policy from stationary
//! distributions; finds the critical bias where the random mixture stops
//! winning; and reproduces everything empirically with a deterministic
//! simulator.
//!
//! Modules:
//! - [`markov`]: transition matrices, evolution, classification, stationary
//!   distributions.
//! - [`games`]: the game family as chains on capital residues, plus the
//!   closed-form stationary distributions for `M = 3`.
//! - [`analysis`]: long-run win rates, periodic-pattern lifting, and the
//!   critical-bias root find.
//! - [`sim`]: seeded Monte Carlo runs, batches, and empirical-vs-analytic
//!   comparison.
//! - [`verify`]: the self-check suite behind `parrondo verify`.

pub mod analysis;
pub mod games;
pub mod markov;
pub mod sim;
pub mod verify;

pub use analysis::{
    alpha_sweep, critical_alpha, long_run_win_rate, pattern_win_rate, AnalysisError, CriticalAlpha,
    GameChoice, PatternPolicy, WinRateResult,
};
pub use games::{
    closed_form_stationary_b, closed_form_stationary_mix, game_a_matrix, game_b_matrix,
    mixture_matrix, optimal_policy_matrix, win_vector, Game, GameError, GameParams,
    WinProbabilityVector,
};
pub use markov::{ConvergenceReport, MarkovError, ProbabilityVector, TransitionMatrix};
pub use sim::{
    batch, empirical_vs_analytic, simulate, BatchSummary, ComparisonReport, Policy, SimError,
    SimResult,
};
