//! Self-check suite: closed forms against the numeric solver, the critical
//! bias, the paradox sign pattern, chain fixtures, and statistical agreement
//! between simulation and analysis. Backs the `verify` CLI command.
//!
//! Expected values on the analytic side come from routes independent of the
//! code under test: hard-coded rational functions in the bias for the win
//! rates, the closed-form stationary distributions, and fixed matrices for
//! the chain fixtures.

use crate::analysis;
use crate::games::{self, Game, GameParams};
use crate::markov::{ProbabilityVector, TransitionMatrix};
use crate::sim::{self, Policy};
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

/// One check: `pass` is true when `got` is within `tolerance` of
/// `expected`, except for checks whose name marks them as one-sided
/// (`_below_`/`_above_`), which compare against the bound directly.
#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: f64,
    pub got: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub fault: String,
    pub checks: Vec<Check>,
    pub passed: usize,
    pub failed: usize,
    pub all_passed: bool,
}

/// Deliberate defect injected into the suite's game-B construction, used to
/// demonstrate that the checks detect a miscoded game.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FaultInjection {
    #[default]
    None,
    /// Swap the coin assignment of game B: coin 2 at residue 0, coin 1
    /// elsewhere.
    SwapBCoins,
}

impl FaultInjection {
    fn label(&self) -> &'static str {
        match self {
            FaultInjection::None => "none",
            FaultInjection::SwapBCoins => "swap-b-coins",
        }
    }
}

struct Suite {
    checks: Vec<Check>,
    fault: FaultInjection,
}

impl Suite {
    fn eq_check(&mut self, name: &str, expected: f64, got: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            expected,
            got,
            tolerance,
            pass: (got - expected).abs() <= tolerance,
        });
    }

    fn below(&mut self, name: &str, bound: f64, got: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            expected: bound,
            got,
            tolerance: 0.0,
            pass: got < bound,
        });
    }

    fn above(&mut self, name: &str, bound: f64, got: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            expected: bound,
            got,
            tolerance: 0.0,
            pass: got > bound,
        });
    }

    /// Game-B chain as this suite tests it; the fault injection swaps the
    /// coin assignment to emulate a miscoded build.
    fn b_matrix(&self, params: &GameParams) -> TransitionMatrix {
        match self.fault {
            FaultInjection::None => games::game_b_matrix(params),
            FaultInjection::SwapBCoins => {
                let m = params.modulus();
                let mut rows = vec![vec![0.0; m]; m];
                for (i, row) in rows.iter_mut().enumerate() {
                    let w = if i == 0 {
                        params.coin_b2_win()
                    } else {
                        params.coin_b1_win()
                    };
                    row[(i + 1) % m] += w;
                    row[(i + m - 1) % m] += 1.0 - w;
                }
                TransitionMatrix::from_rows(rows).expect("swapped walk is stochastic")
            }
        }
    }
}

/// Win rate of game B from the closed-form rational in the bias.
fn rational_rate_b(a: f64) -> f64 {
    (-240.0 * a.powi(3) + 144.0 * a * a - 155.0 * a + 84.5) / (240.0 * a * a - 16.0 * a + 169.0)
}

/// Win rate of the 50/50 mixture from the closed-form rational.
fn rational_rate_mix(a: f64) -> f64 {
    (-1920.0 * a.powi(3) + 1056.0 * a * a - 1406.0 * a + 727.0)
        / (1920.0 * a * a - 64.0 * a + 1418.0)
}

fn alpha_grid(points: usize) -> impl Iterator<Item = f64> {
    (0..points).map(move |i| 0.099 * i as f64 / (points - 1) as f64)
}

fn max_component_deviation(a: &ProbabilityVector, b: &ProbabilityVector) -> f64 {
    a.as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Runs the full suite. `seed` drives the statistical checks; the analytic
/// checks are deterministic.
pub fn run(seed: u64, fault: FaultInjection) -> VerifyReport {
    let mut suite = Suite {
        checks: Vec::new(),
        fault,
    };

    check_game_a(&mut suite);
    check_game_b(&mut suite);
    check_mixture(&mut suite);
    check_threshold(&mut suite);
    check_paradox_signs(&mut suite);
    check_chain_fixtures(&mut suite, seed);
    check_monte_carlo(&mut suite, seed);

    let passed = suite.checks.iter().filter(|c| c.pass).count();
    let failed = suite.checks.len() - passed;
    VerifyReport {
        seed,
        fault: fault.label().to_string(),
        passed,
        failed,
        all_passed: failed == 0,
        checks: suite.checks,
    }
}

fn check_game_a(suite: &mut Suite) {
    let mut worst_stationary = 0.0f64;
    let mut worst_rate = 0.0f64;
    for &alpha in &[0.0, 0.005, 0.05, 0.099] {
        let params = GameParams::new(alpha, 3).expect("grid alpha is admissible");
        let (w, _) = games::game_a_matrix(&params)
            .stationary()
            .expect("game A chain is irreducible");
        for &e in w.as_slice() {
            worst_stationary = worst_stationary.max((e - 1.0 / 3.0).abs());
        }
        let rate = analysis::game_win_rate(&params, Game::A)
            .expect("game A analysis succeeds")
            .win_probability;
        worst_rate = worst_rate.max((rate - (0.5 - alpha)).abs());
    }
    suite.eq_check("a_stationary_uniform_max_dev", 0.0, worst_stationary, 1e-10);
    suite.eq_check(
        "a_win_rate_half_minus_alpha_max_dev",
        0.0,
        worst_rate,
        1e-12,
    );
}

fn check_game_b(suite: &mut Suite) {
    let mut worst_closed_form = 0.0f64;
    let mut max_positive_rate = f64::NEG_INFINITY;
    for alpha in alpha_grid(100) {
        let params = GameParams::new(alpha, 3).expect("grid alpha is admissible");
        let matrix = suite.b_matrix(&params);
        let (w, _) = matrix.stationary().expect("game B chain is irreducible");
        let closed = games::closed_form_stationary_b(alpha).expect("closed form in range");
        worst_closed_form = worst_closed_form.max(max_component_deviation(&w, &closed));
        let wins = games::win_vector(&params, Game::B).expect("win vector");
        let rate = analysis::long_run_win_rate(&matrix, &wins)
            .expect("rate computes")
            .win_probability;
        if alpha == 0.0 {
            suite.eq_check("b_win_rate_fair_at_zero_bias", 0.5, rate, 1e-12);
            suite.eq_check(
                "b_win_rate_matches_rational_at_zero",
                rational_rate_b(0.0),
                rate,
                1e-12,
            );
        } else {
            max_positive_rate = max_positive_rate.max(rate);
        }
    }
    suite.eq_check("b_closed_form_grid_max_dev", 0.0, worst_closed_form, 1e-10);
    suite.below(
        "b_win_rate_below_half_for_positive_alpha",
        0.5,
        max_positive_rate,
    );
}

fn check_mixture(suite: &mut Suite) {
    let mut worst_closed_form = 0.0f64;
    for alpha in alpha_grid(100) {
        let params = GameParams::new(alpha, 3).expect("grid alpha is admissible");
        let matrix = blend_with_a(suite, &params, 0.5);
        let (w, _) = matrix.stationary().expect("mixture chain is irreducible");
        let closed = games::closed_form_stationary_mix(alpha).expect("closed form in range");
        worst_closed_form = worst_closed_form.max(max_component_deviation(&w, &closed));
    }
    suite.eq_check(
        "mix_closed_form_grid_max_dev",
        0.0,
        worst_closed_form,
        1e-10,
    );

    let params = GameParams::new(0.005, 3).expect("headline bias is admissible");
    let rate = analysis::game_win_rate(&params, Game::Mixture(0.5))
        .expect("mixture analysis succeeds")
        .win_probability;
    suite.eq_check(
        "mix_win_rate_at_headline_bias",
        rational_rate_mix(0.005),
        rate,
        1e-10,
    );
    let rate0 = analysis::game_win_rate(
        &GameParams::new(0.0, 3).expect("zero bias"),
        Game::Mixture(0.5),
    )
    .expect("mixture analysis succeeds")
    .win_probability;
    suite.eq_check("mix_win_rate_at_zero_bias", 727.0 / 1418.0, rate0, 1e-10);
}

/// Blend of game A with the suite's (possibly faulted) game B.
fn blend_with_a(suite: &Suite, params: &GameParams, gamma: f64) -> TransitionMatrix {
    let a = games::game_a_matrix(params);
    let b = suite.b_matrix(params);
    let m = params.modulus();
    let rows = (0..m)
        .map(|i| {
            (0..m)
                .map(|j| gamma * a.entry(i, j) + (1.0 - gamma) * b.entry(i, j))
                .collect()
        })
        .collect();
    TransitionMatrix::from_rows(rows).expect("blend is stochastic")
}

fn check_threshold(suite: &mut Suite) {
    match analysis::critical_alpha(0.5, 3, 1e-7) {
        Ok(root) => suite.eq_check("critical_alpha", 0.013109, root.alpha_star, 1e-4),
        Err(_) => suite.eq_check("critical_alpha", 0.013109, f64::NAN, 1e-4),
    }
}

fn check_paradox_signs(suite: &mut Suite) {
    let params = GameParams::new(0.005, 3).expect("headline bias is admissible");
    let rate = |game| {
        analysis::game_win_rate(&params, game)
            .expect("analysis succeeds")
            .win_probability
    };
    let pattern_rate = |s: &str| {
        analysis::pattern_win_rate(&s.parse().expect("pattern parses"), &params)
            .expect("lifted chain is irreducible")
            .win_probability
    };
    suite.below("paradox_a_loses", 0.5, rate(Game::A));
    suite.below("paradox_b_loses", 0.5, rate(Game::B));
    suite.below("paradox_pattern_ab_loses", 0.5, pattern_rate("AB"));
    suite.below("paradox_pattern_bbba_loses", 0.5, pattern_rate("BBBA"));
    suite.above("paradox_pattern_aab_wins", 0.5, pattern_rate("AAB"));
    suite.above("paradox_pattern_abb_wins", 0.5, pattern_rate("ABB"));
    let mix = rate(Game::Mixture(0.5));
    suite.above("paradox_mixture_wins", 0.5, mix);
    suite.above("paradox_optimal_beats_mixture", mix, rate(Game::Optimal));
}

fn check_chain_fixtures(suite: &mut Suite, seed: u64) {
    let bookstore = TransitionMatrix::from_rows(vec![
        vec![0.25, 0.5, 0.25],
        vec![0.0, 0.5, 0.5],
        vec![0.33, 0.33, 0.34],
    ])
    .expect("fixture is stochastic");

    // Evolution fixture: one day from (0, 0.5, 0.5).
    let q = ProbabilityVector::new(vec![0.0, 0.5, 0.5]).expect("distribution");
    let q1 = q.evolve(&bookstore, 1).expect("dimensions agree");
    let expected = [0.165, 0.415, 0.420];
    let dev = q1
        .as_slice()
        .iter()
        .zip(expected)
        .map(|(got, want)| (got - want).abs())
        .fold(0.0, f64::max);
    suite.eq_check("fixture_evolve_one_step_max_dev", 0.0, dev, 1e-12);

    // Square fixture.
    let p2 = bookstore.pow(2);
    let expected_sq = [
        [0.145, 0.4575, 0.3975],
        [0.165, 0.415, 0.42],
        [0.1947, 0.4422, 0.3631],
    ];
    let mut dev = 0.0f64;
    for (i, expected_row) in expected_sq.iter().enumerate() {
        for (j, want) in expected_row.iter().enumerate() {
            dev = dev.max((p2.entry(i, j) - want).abs());
        }
    }
    suite.eq_check("fixture_matrix_square_max_dev", 0.0, dev, 1e-12);

    // Evolve agrees with the explicit power for a spread of step counts.
    let mut worst = 0.0f64;
    for steps in [0usize, 1, 2, 5, 10, 20] {
        let via_evolve = q.evolve(&bookstore, steps).expect("dimensions agree");
        let power = bookstore.pow(steps);
        for j in 0..3 {
            let direct: f64 = (0..3).map(|i| q.get(i) * power.entry(i, j)).sum();
            worst = worst.max((via_evolve.get(j) - direct).abs());
        }
    }
    suite.eq_check("evolve_vs_matrix_power_max_dev", 0.0, worst, 1e-10);

    // The two-state flip-flop is irreducible but not regular.
    let flip = TransitionMatrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]])
        .expect("fixture is stochastic");
    let classified = flip.is_irreducible() && !flip.is_regular();
    suite.eq_check(
        "fixture_flip_flop_irreducible_not_regular",
        1.0,
        classified as u8 as f64,
        0.0,
    );

    // Contraction envelope on 100 random strictly positive 3×3 matrices.
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0x6a70);
    let mut worst_violation = f64::NEG_INFINITY;
    for _ in 0..100 {
        let rows: Vec<Vec<f64>> = (0..3)
            .map(|_| {
                let raw: Vec<f64> = (0..3).map(|_| 0.05 + 0.95 * next_unit(&mut rng)).collect();
                let sum: f64 = raw.iter().sum();
                raw.into_iter().map(|e| e / sum).collect()
            })
            .collect();
        let matrix = TransitionMatrix::from_rows(rows).expect("normalized rows");
        let y: Vec<f64> = (0..3).map(|_| 2.0 * next_unit(&mut rng) - 1.0).collect();
        let report = matrix
            .contraction_diagnostics(&y, 8)
            .expect("entries are strictly positive");
        let factor = report
            .contraction_factor_bound
            .expect("all-positive matrix has a bound");
        let mut envelope = report.gaps[0];
        for &gap in &report.gaps[1..] {
            envelope *= factor;
            worst_violation = worst_violation.max(gap - envelope);
        }
    }
    suite.below(
        "lemma_contraction_envelope_worst_violation",
        1e-12,
        worst_violation,
    );
}

fn next_unit(rng: &mut rand_chacha::ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn check_monte_carlo(suite: &mut Suite, seed: u64) {
    let params = GameParams::new(0.005, 3).expect("headline bias is admissible");
    let policies = [
        ("pure_a", Policy::PureA),
        ("pure_b", Policy::PureB),
        (
            "pattern_aab",
            Policy::Pattern("AAB".parse().expect("pattern parses")),
        ),
        ("mix_half", Policy::RandomMix { gamma: 0.5 }),
        ("capital_aware", Policy::CapitalAware),
    ];
    for (label, policy) in policies {
        // 4 × 250,000 plays = 10⁶ per policy.
        match sim::empirical_vs_analytic(&policy, &params, 250_000, 4, seed) {
            Ok(report) => suite.below(
                &format!("mc_abs_z_below_4_{label}"),
                4.0,
                report.z_score.abs(),
            ),
            Err(_) => suite.below(&format!("mc_abs_z_below_4_{label}"), 4.0, f64::NAN),
        }
    }
}
