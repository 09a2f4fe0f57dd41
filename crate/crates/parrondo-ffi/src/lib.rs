//! C ABI over the parrondo library.
//!
//! Conventions: game parameters travel as an opaque handle created by
//! [`parrondo_params_new`] and released by [`parrondo_params_free`]; every
//! function returns a [`ParrondoStatus`] and writes results through out
//! pointers, which are touched only on `PARRONDO_STATUS_OK`. Strings are
//! NUL-terminated UTF-8 owned by the caller. The generated header lives at
//! `include/parrondo.h`.

use parrondo::analysis::{self, AnalysisError};
use parrondo::games::{Game, GameParams};
use parrondo::markov::MarkovError;
use parrondo::sim::{self, Policy, SimError};
use std::ffi::{c_char, CStr};

/// Status code of every FFI call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParrondoStatus {
    Ok = 0,
    /// A required pointer argument was NULL.
    NullPointer = 1,
    /// A parameter was out of its documented domain.
    InvalidArgument = 2,
    /// A policy or pattern string failed to parse.
    InvalidPolicy = 3,
    /// The chain has no unique stationary distribution.
    NotIrreducible = 4,
    /// The win rate never crosses one half on the bias range.
    NoSignChange = 5,
    /// The win rate is not strictly decreasing on the bias range.
    NotMonotone = 6,
    /// An output buffer was shorter than the modulus.
    BufferTooSmall = 7,
    /// A numeric solve degenerated.
    NumericalFailure = 8,
}

/// Opaque game-parameter handle (bias and modulus).
pub struct ParrondoParams {
    inner: GameParams,
}

/// Which game an analytic query refers to.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParrondoGame {
    A = 0,
    B = 1,
    /// Uses the `gamma` argument of the call.
    Mixture = 2,
    Optimal = 3,
}

/// Summary of one simulated run.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct ParrondoSimSummary {
    pub n_plays: u64,
    pub seed: u64,
    pub final_profit: i64,
    pub wins: u64,
    pub empirical_win_rate: f64,
}

fn status_of_analysis(err: &AnalysisError) -> ParrondoStatus {
    match err {
        AnalysisError::Markov(MarkovError::NotIrreducible) => ParrondoStatus::NotIrreducible,
        AnalysisError::Markov(_) => ParrondoStatus::NumericalFailure,
        AnalysisError::Game(_) | AnalysisError::InvalidTolerance(_) => {
            ParrondoStatus::InvalidArgument
        }
        AnalysisError::EmptyPattern | AnalysisError::InvalidPatternChar(_) => {
            ParrondoStatus::InvalidPolicy
        }
        AnalysisError::NoSignChange { .. } => ParrondoStatus::NoSignChange,
        AnalysisError::NotMonotone { .. } => ParrondoStatus::NotMonotone,
        AnalysisError::DimensionMismatch { .. } => ParrondoStatus::InvalidArgument,
        AnalysisError::SweepRow { source, .. } => status_of_analysis(source),
    }
}

fn status_of_sim(err: &SimError) -> ParrondoStatus {
    match err {
        SimError::ZeroPlays | SimError::ZeroRuns | SimError::Game(_) => {
            ParrondoStatus::InvalidArgument
        }
        SimError::Analysis(e) => status_of_analysis(e),
        SimError::UnknownPolicy(_) => ParrondoStatus::InvalidPolicy,
    }
}

fn game_of(game: ParrondoGame, gamma: f64) -> Game {
    match game {
        ParrondoGame::A => Game::A,
        ParrondoGame::B => Game::B,
        ParrondoGame::Mixture => Game::Mixture(gamma),
        ParrondoGame::Optimal => Game::Optimal,
    }
}

/// Creates a parameter handle for bias `alpha` in `[0, 0.1)` and modulus
/// `>= 2`. On success writes the handle to `out` and transfers ownership to
/// the caller, who must release it with `parrondo_params_free`.
///
/// # Safety
/// `out` must be a valid pointer to writable memory for one pointer.
#[no_mangle]
pub unsafe extern "C" fn parrondo_params_new(
    alpha: f64,
    modulus: u32,
    out: *mut *mut ParrondoParams,
) -> ParrondoStatus {
    if out.is_null() {
        return ParrondoStatus::NullPointer;
    }
    match GameParams::new(alpha, modulus as usize) {
        Ok(inner) => {
            *out = Box::into_raw(Box::new(ParrondoParams { inner }));
            ParrondoStatus::Ok
        }
        Err(_) => ParrondoStatus::InvalidArgument,
    }
}

/// Releases a handle created by `parrondo_params_new`. NULL is a no-op.
///
/// # Safety
/// `params` must be NULL or a pointer previously returned by
/// `parrondo_params_new` that has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn parrondo_params_free(params: *mut ParrondoParams) {
    if !params.is_null() {
        drop(Box::from_raw(params));
    }
}

/// Long-run one-play win probability of `game`. `gamma` is read only for
/// `PARRONDO_GAME_MIXTURE`.
///
/// # Safety
/// `params` must be a live handle; `out_rate` must point to a writable f64.
#[no_mangle]
pub unsafe extern "C" fn parrondo_win_rate(
    params: *const ParrondoParams,
    game: ParrondoGame,
    gamma: f64,
    out_rate: *mut f64,
) -> ParrondoStatus {
    if params.is_null() || out_rate.is_null() {
        return ParrondoStatus::NullPointer;
    }
    let params = &(*params).inner;
    match analysis::game_win_rate(params, game_of(game, gamma)) {
        Ok(result) => {
            *out_rate = result.win_probability;
            ParrondoStatus::Ok
        }
        Err(e) => status_of_analysis(&e),
    }
}

/// Stationary distribution of `game` over capital residues. Writes exactly
/// `modulus` doubles into `out_probs`; `len` is the buffer capacity.
///
/// # Safety
/// `params` must be a live handle; `out_probs` must point to at least `len`
/// writable doubles.
#[no_mangle]
pub unsafe extern "C" fn parrondo_stationary(
    params: *const ParrondoParams,
    game: ParrondoGame,
    gamma: f64,
    out_probs: *mut f64,
    len: usize,
) -> ParrondoStatus {
    if params.is_null() || out_probs.is_null() {
        return ParrondoStatus::NullPointer;
    }
    let params = &(*params).inner;
    if len < params.modulus() {
        return ParrondoStatus::BufferTooSmall;
    }
    match analysis::game_win_rate(params, game_of(game, gamma)) {
        Ok(result) => {
            let w = result.stationary_used.as_slice();
            std::ptr::copy_nonoverlapping(w.as_ptr(), out_probs, w.len());
            ParrondoStatus::Ok
        }
        Err(e) => status_of_analysis(&e),
    }
}

/// Long-run win rate of a periodic pattern such as `"AAB"`.
///
/// # Safety
/// `params` must be a live handle; `pattern` must be a NUL-terminated
/// string; `out_rate` must point to a writable f64.
#[no_mangle]
pub unsafe extern "C" fn parrondo_pattern_win_rate(
    params: *const ParrondoParams,
    pattern: *const c_char,
    out_rate: *mut f64,
) -> ParrondoStatus {
    if params.is_null() || pattern.is_null() || out_rate.is_null() {
        return ParrondoStatus::NullPointer;
    }
    let Ok(pattern) = CStr::from_ptr(pattern).to_str() else {
        return ParrondoStatus::InvalidPolicy;
    };
    let pattern: analysis::PatternPolicy = match pattern.parse() {
        Ok(p) => p,
        Err(_) => return ParrondoStatus::InvalidPolicy,
    };
    match analysis::pattern_win_rate(&pattern, &(*params).inner) {
        Ok(result) => {
            *out_rate = result.win_probability;
            ParrondoStatus::Ok
        }
        Err(e) => status_of_analysis(&e),
    }
}

/// Bias at which the `gamma`-mixture's win rate crosses one half, by
/// bisection to bracket width `tol`.
///
/// # Safety
/// `out_alpha` must point to a writable f64.
#[no_mangle]
pub unsafe extern "C" fn parrondo_critical_alpha(
    gamma: f64,
    modulus: u32,
    tol: f64,
    out_alpha: *mut f64,
) -> ParrondoStatus {
    if out_alpha.is_null() {
        return ParrondoStatus::NullPointer;
    }
    if modulus < 2 {
        return ParrondoStatus::InvalidArgument;
    }
    if !gamma.is_finite() || !(0.0..=1.0).contains(&gamma) {
        return ParrondoStatus::InvalidArgument;
    }
    match analysis::critical_alpha(gamma, modulus as usize, tol) {
        Ok(root) => {
            *out_alpha = root.alpha_star;
            ParrondoStatus::Ok
        }
        Err(e) => status_of_analysis(&e),
    }
}

/// Runs one seeded simulation. The policy string follows the CLI grammar:
/// `A` | `B` | `pattern:<AB...>` | `mix:<gamma>` | `optimal`.
///
/// # Safety
/// `params` must be a live handle; `policy` must be a NUL-terminated
/// string; `out` must point to a writable `ParrondoSimSummary`.
#[no_mangle]
pub unsafe extern "C" fn parrondo_simulate(
    params: *const ParrondoParams,
    policy: *const c_char,
    n_plays: u64,
    seed: u64,
    out: *mut ParrondoSimSummary,
) -> ParrondoStatus {
    if params.is_null() || policy.is_null() || out.is_null() {
        return ParrondoStatus::NullPointer;
    }
    let Ok(policy) = CStr::from_ptr(policy).to_str() else {
        return ParrondoStatus::InvalidPolicy;
    };
    let policy: Policy = match policy.parse() {
        Ok(p) => p,
        Err(e) => return status_of_sim(&e),
    };
    match sim::simulate(&policy, &(*params).inner, n_plays, seed, false) {
        Ok(result) => {
            *out = ParrondoSimSummary {
                n_plays: result.n_plays,
                seed: result.seed,
                final_profit: result.final_profit,
                wins: result.wins,
                empirical_win_rate: result.empirical_win_rate,
            };
            ParrondoStatus::Ok
        }
        Err(e) => status_of_sim(&e),
    }
}

/// Runs `n_runs` independent simulations (run `r` draws from stream `r` of
/// `seed`) and writes the mean per-play profit and the sample standard
/// deviation of the per-run final profits.
///
/// # Safety
/// `params` must be a live handle; `policy` must be a NUL-terminated
/// string; both out pointers must point to writable f64s.
#[no_mangle]
pub unsafe extern "C" fn parrondo_batch(
    params: *const ParrondoParams,
    policy: *const c_char,
    n_plays: u64,
    n_runs: u64,
    seed: u64,
    out_mean_profit_per_play: *mut f64,
    out_std_dev_final_profit: *mut f64,
) -> ParrondoStatus {
    if params.is_null()
        || policy.is_null()
        || out_mean_profit_per_play.is_null()
        || out_std_dev_final_profit.is_null()
    {
        return ParrondoStatus::NullPointer;
    }
    let Ok(policy) = CStr::from_ptr(policy).to_str() else {
        return ParrondoStatus::InvalidPolicy;
    };
    let policy: Policy = match policy.parse() {
        Ok(p) => p,
        Err(e) => return status_of_sim(&e),
    };
    match sim::batch(&policy, &(*params).inner, n_plays, n_runs, seed) {
        Ok(summary) => {
            *out_mean_profit_per_play = summary.mean_profit_per_play;
            *out_std_dev_final_profit = summary.std_dev_final_profit;
            ParrondoStatus::Ok
        }
        Err(e) => status_of_sim(&e),
    }
}

/// Static description of a status code; never NULL, never freed.
#[no_mangle]
pub extern "C" fn parrondo_status_message(status: ParrondoStatus) -> *const c_char {
    let message: &'static [u8] = match status {
        ParrondoStatus::Ok => b"ok\0",
        ParrondoStatus::NullPointer => b"required pointer argument was NULL\0",
        ParrondoStatus::InvalidArgument => b"argument out of its documented domain\0",
        ParrondoStatus::InvalidPolicy => b"policy or pattern string failed to parse\0",
        ParrondoStatus::NotIrreducible => b"chain has no unique stationary distribution\0",
        ParrondoStatus::NoSignChange => b"win rate never crosses one half on the bias range\0",
        ParrondoStatus::NotMonotone => b"win rate is not strictly decreasing on the bias range\0",
        ParrondoStatus::BufferTooSmall => b"output buffer shorter than the modulus\0",
        ParrondoStatus::NumericalFailure => b"numeric solve degenerated\0",
    };
    message.as_ptr() as *const c_char
}
