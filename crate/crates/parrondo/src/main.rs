//! Command-line interface: analytic game tables, the critical bias,
//! seeded simulations, bias sweeps, and the self-check suite.
//!
//! Exit codes are stable for scripting: 0 success, 1 verification failure,
//! 2 invalid input, 3 analysis has no result (e.g. no threshold crossing).

use clap::{Parser, Subcommand, ValueEnum};
use parrondo::analysis::{self, AnalysisError};
use parrondo::games::{self, Game, GameParams};
use parrondo::sim::{self, Policy};
use parrondo::verify::{self, FaultInjection};
use serde::Serialize;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_INVALID_INPUT: u8 = 2;
const EXIT_NO_RESULT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "parrondo",
    version,
    about = "Two losing coin games, one winning combination: exact chain analysis and seeded simulation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Stationary distribution, win probability, and per-play profit for
    /// games A, B, the random mixture, and the capital-aware policy.
    Analyze {
        #[arg(long, default_value_t = 0.005)]
        alpha: f64,
        #[arg(long, default_value_t = 3)]
        modulus: usize,
        /// Probability of choosing game A in the random mixture.
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        /// Write to a file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Bias at which the mixture's long-run win rate crosses one half.
    Threshold {
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        #[arg(long, default_value_t = 3)]
        modulus: usize,
        /// Bisection bracket width at which to stop.
        #[arg(long, default_value_t = 1e-7)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Seeded Monte Carlo runs. A single run emits its full profit
    /// trajectory; multiple runs emit one summary row each.
    Simulate {
        /// Policy: A | B | pattern:<string over A/B> | mix:<gamma> | optimal.
        #[arg(long)]
        policy: String,
        #[arg(long, default_value_t = 0.005)]
        alpha: f64,
        #[arg(long, default_value_t = 3)]
        modulus: usize,
        #[arg(long, default_value_t = 50_000)]
        n_plays: u64,
        #[arg(long, default_value_t = 1)]
        n_runs: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Win probability of each game over an evenly spaced bias grid.
    Sweep {
        #[arg(long, default_value_t = 0.5)]
        gamma: f64,
        #[arg(long, default_value_t = 3)]
        modulus: usize,
        #[arg(long, default_value_t = 0.0)]
        alpha_start: f64,
        #[arg(long, default_value_t = 0.099)]
        alpha_stop: f64,
        /// Number of grid points (1 emits only alpha-start).
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the self-check suite and emit a JSON report of every check.
    Verify {
        /// Seed for the statistical checks; analytic checks are unaffected.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Inject a deliberate defect to demonstrate the suite catches it.
        #[arg(long, value_enum)]
        mutate: Option<Mutation>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mutation {
    /// Swap game B's coin assignment between residue 0 and the rest.
    SwapBCoins,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.exit_code)
        }
    }
}

struct Failure {
    exit_code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Self {
            exit_code: EXIT_INVALID_INPUT,
            message: message.into(),
        }
    }

    fn no_result(message: impl Into<String>) -> Self {
        Self {
            exit_code: EXIT_NO_RESULT,
            message: message.into(),
        }
    }
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Analyze {
            alpha,
            modulus,
            gamma,
            format,
            output,
        } => cmd_analyze(alpha, modulus, gamma, format, output),
        Command::Threshold {
            gamma,
            modulus,
            tol,
            format,
            output,
        } => cmd_threshold(gamma, modulus, tol, format, output),
        Command::Simulate {
            policy,
            alpha,
            modulus,
            n_plays,
            n_runs,
            seed,
            format,
            output,
        } => cmd_simulate(
            &policy, alpha, modulus, n_plays, n_runs, seed, format, output,
        ),
        Command::Sweep {
            gamma,
            modulus,
            alpha_start,
            alpha_stop,
            steps,
            format,
            output,
        } => cmd_sweep(
            gamma,
            modulus,
            alpha_start,
            alpha_stop,
            steps,
            format,
            output,
        ),
        Command::Verify {
            seed,
            mutate,
            output,
        } => cmd_verify(seed, mutate, output),
    }
}

/// 12 significant digits; CSV values are for plotting, JSON carries the
/// full binary64 representation.
fn csv_num(x: f64) -> String {
    format!("{x:.11e}")
}

fn emit(text: String, output: Option<PathBuf>) -> Result<(), Failure> {
    match output {
        None => {
            use std::io::Write;
            // Downstream consumers like `head` close the pipe early; that
            // is not an error for a streaming CSV producer.
            match std::io::stdout().lock().write_all(text.as_bytes()) {
                Ok(()) => Ok(()),
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                Err(e) => Err(Failure::invalid(format!("cannot write to stdout: {e}"))),
            }
        }
        Some(path) => std::fs::write(&path, text)
            .map_err(|e| Failure::invalid(format!("cannot write {}: {e}", path.display()))),
    }
}

fn game_name(game: Game) -> &'static str {
    match game {
        Game::A => "A",
        Game::B => "B",
        Game::Mixture(_) => "mixture",
        Game::Optimal => "optimal",
    }
}

fn parse_params(alpha: f64, modulus: usize) -> Result<GameParams, Failure> {
    GameParams::new(alpha, modulus).map_err(|e| Failure::invalid(e.to_string()))
}

fn check_gamma(gamma: f64) -> Result<(), Failure> {
    if !gamma.is_finite() || !(0.0..=1.0).contains(&gamma) {
        return Err(Failure::invalid(format!(
            "gamma out of range [0, 1]: {gamma}"
        )));
    }
    Ok(())
}

#[derive(Serialize)]
struct GameReport {
    game: String,
    win_probability: f64,
    profit_per_play: f64,
    stationary: Vec<f64>,
}

#[derive(Serialize)]
struct AnalyzeReport {
    alpha: f64,
    modulus: usize,
    gamma: f64,
    games: Vec<GameReport>,
}

fn analyze_games(params: &GameParams, gamma: f64) -> Result<Vec<GameReport>, Failure> {
    [Game::A, Game::B, Game::Mixture(gamma), Game::Optimal]
        .into_iter()
        .map(|game| {
            let result = analysis::game_win_rate(params, game)
                .map_err(|e| Failure::invalid(e.to_string()))?;
            Ok(GameReport {
                game: game_name(game).to_string(),
                win_probability: result.win_probability,
                profit_per_play: result.expected_profit_per_play,
                stationary: result.stationary_used.as_slice().to_vec(),
            })
        })
        .collect()
}

fn cmd_analyze(
    alpha: f64,
    modulus: usize,
    gamma: f64,
    format: Format,
    output: Option<PathBuf>,
) -> Result<ExitCode, Failure> {
    let params = parse_params(alpha, modulus)?;
    check_gamma(gamma)?;
    let games = analyze_games(&params, gamma)?;
    let text = match format {
        Format::Json => {
            let report = AnalyzeReport {
                alpha,
                modulus,
                gamma,
                games,
            };
            to_json(&report)?
        }
        Format::Csv => {
            let mut out = String::from("game,win_probability,profit_per_play");
            for i in 0..modulus {
                write!(out, ",stationary_{i}").expect("string write");
            }
            out.push('\n');
            for row in &games {
                write!(
                    out,
                    "{},{},{}",
                    row.game,
                    csv_num(row.win_probability),
                    csv_num(row.profit_per_play)
                )
                .expect("string write");
                for &w in &row.stationary {
                    write!(out, ",{}", csv_num(w)).expect("string write");
                }
                out.push('\n');
            }
            out
        }
    };
    emit(text, output)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct ThresholdReport {
    gamma: f64,
    modulus: usize,
    tol: f64,
    alpha_star: f64,
    bracket_low: f64,
    bracket_high: f64,
    residual: f64,
    iterations: usize,
}

fn cmd_threshold(
    gamma: f64,
    modulus: usize,
    tol: f64,
    format: Format,
    output: Option<PathBuf>,
) -> Result<ExitCode, Failure> {
    check_gamma(gamma)?;
    if modulus < 2 {
        return Err(Failure::invalid(format!(
            "modulus must be at least 2, got {modulus}"
        )));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Failure::invalid(format!("tol must be positive, got {tol}")));
    }
    let root = analysis::critical_alpha(gamma, modulus, tol).map_err(|e| match e {
        AnalysisError::NoSignChange { .. } | AnalysisError::NotMonotone { .. } => {
            Failure::no_result(e.to_string())
        }
        other => Failure::invalid(other.to_string()),
    })?;
    let report = ThresholdReport {
        gamma,
        modulus,
        tol,
        alpha_star: root.alpha_star,
        bracket_low: root.bracket.0,
        bracket_high: root.bracket.1,
        residual: root.residual,
        iterations: root.iterations,
    };
    let text = match format {
        Format::Json => to_json(&report)?,
        Format::Csv => format!(
            "gamma,modulus,alpha_star,bracket_low,bracket_high,residual,iterations\n{},{},{},{},{},{},{}\n",
            csv_num(report.gamma),
            report.modulus,
            csv_num(report.alpha_star),
            csv_num(report.bracket_low),
            csv_num(report.bracket_high),
            csv_num(report.residual),
            report.iterations,
        ),
    };
    emit(text, output)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SimulateReport {
    policy: String,
    alpha: f64,
    modulus: usize,
    n_plays: u64,
    n_runs: u64,
    seed: u64,
    runs: Vec<sim::SimResult>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    policy_spec: &str,
    alpha: f64,
    modulus: usize,
    n_plays: u64,
    n_runs: u64,
    seed: u64,
    format: Format,
    output: Option<PathBuf>,
) -> Result<ExitCode, Failure> {
    let params = parse_params(alpha, modulus)?;
    let policy: Policy = policy_spec
        .parse()
        .map_err(|e: sim::SimError| Failure::invalid(e.to_string()))?;
    if n_plays == 0 {
        return Err(Failure::invalid("n_plays must be positive"));
    }
    if n_runs == 0 {
        return Err(Failure::invalid("n_runs must be positive"));
    }
    // A single run records its trajectory; multiple runs emit summaries.
    let record_trajectory = n_runs == 1;
    let runs = (0..n_runs)
        .map(|r| sim::simulate_run(&policy, &params, n_plays, seed, r, record_trajectory))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| Failure::invalid(e.to_string()))?;
    let text = match format {
        Format::Json => {
            let report = SimulateReport {
                policy: policy.to_string(),
                alpha,
                modulus,
                n_plays,
                n_runs,
                seed,
                runs,
            };
            to_json(&report)?
        }
        Format::Csv => {
            let mut out = String::new();
            if record_trajectory {
                out.push_str("play_index,profit\n");
                let trajectory = runs[0]
                    .profit_trajectory
                    .as_ref()
                    .expect("single run records its trajectory");
                for (i, &profit) in trajectory.iter().enumerate() {
                    writeln!(out, "{},{profit}", i + 1).expect("string write");
                }
            } else {
                out.push_str("run,n_plays,seed,final_profit,wins,empirical_win_rate\n");
                for run in &runs {
                    writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        run.run_index,
                        run.n_plays,
                        run.seed,
                        run.final_profit,
                        run.wins,
                        csv_num(run.empirical_win_rate)
                    )
                    .expect("string write");
                }
            }
            out
        }
    };
    emit(text, output)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct SweepRow {
    alpha: f64,
    game: String,
    win_probability: f64,
    profit_per_play: f64,
}

#[derive(Serialize)]
struct SweepReport {
    gamma: f64,
    modulus: usize,
    rows: Vec<SweepRow>,
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    gamma: f64,
    modulus: usize,
    alpha_start: f64,
    alpha_stop: f64,
    steps: usize,
    format: Format,
    output: Option<PathBuf>,
) -> Result<ExitCode, Failure> {
    check_gamma(gamma)?;
    if steps == 0 {
        return Err(Failure::invalid("steps must be positive"));
    }
    if !(0.0..games::ALPHA_MAX).contains(&alpha_start)
        || !(0.0..games::ALPHA_MAX).contains(&alpha_stop)
        || alpha_stop < alpha_start
    {
        return Err(Failure::invalid(format!(
            "alpha grid [{alpha_start}, {alpha_stop}] must lie within [0, 0.1) with stop >= start"
        )));
    }
    let grid: Vec<f64> = if steps == 1 {
        vec![alpha_start]
    } else {
        (0..steps)
            .map(|i| alpha_start + (alpha_stop - alpha_start) * i as f64 / (steps - 1) as f64)
            .collect()
    };
    let mut rows = Vec::with_capacity(grid.len() * 4);
    for &alpha in &grid {
        let params = parse_params(alpha, modulus)?;
        for game in [Game::A, Game::B, Game::Mixture(gamma), Game::Optimal] {
            let result = analysis::game_win_rate(&params, game)
                .map_err(|e| Failure::invalid(e.to_string()))?;
            rows.push(SweepRow {
                alpha,
                game: game_name(game).to_string(),
                win_probability: result.win_probability,
                profit_per_play: result.expected_profit_per_play,
            });
        }
    }
    let text = match format {
        Format::Json => to_json(&SweepReport {
            gamma,
            modulus,
            rows,
        })?,
        Format::Csv => {
            let mut out = String::from("alpha,game,win_probability,profit_per_play\n");
            for row in &rows {
                writeln!(
                    out,
                    "{},{},{},{}",
                    csv_num(row.alpha),
                    row.game,
                    csv_num(row.win_probability),
                    csv_num(row.profit_per_play)
                )
                .expect("string write");
            }
            out
        }
    };
    emit(text, output)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(
    seed: u64,
    mutate: Option<Mutation>,
    output: Option<PathBuf>,
) -> Result<ExitCode, Failure> {
    let fault = match mutate {
        None => FaultInjection::None,
        Some(Mutation::SwapBCoins) => FaultInjection::SwapBCoins,
    };
    let report = verify::run(seed, fault);
    let text = to_json(&report)?;
    emit(text, output)?;
    if report.all_passed {
        Ok(ExitCode::SUCCESS)
    } else {
        for check in report.checks.iter().filter(|c| !c.pass) {
            eprintln!(
                "FAIL {}: expected {} (tol {}), got {}",
                check.name, check.expected, check.tolerance, check.got
            );
        }
        Ok(ExitCode::from(EXIT_VERIFY_FAILED))
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|mut s| {
            s.push('\n');
            s
        })
        .map_err(|e| Failure::invalid(format!("serialization failed: {e}")))
}
