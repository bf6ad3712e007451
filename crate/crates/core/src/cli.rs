//! The `qgame` command line.
//!
//! Exit codes: 0 on success, 2 for bad input (unreadable or invalid game
//! files, strategy strings, flags), 3 when the simulator and the quadratic
//! form disagree by more than [`CONSISTENCY_TOL`].

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::casestudies::{chicken_sweep, linspace, SweepRow};
use crate::classical::{
    dominant_strategies, expected_payoffs, mixed_nash_indifference, pareto_optimal_profiles, pure_nash, BimatrixGame,
    ClassicalMixedProfile, Dominance, IndifferenceOutcome,
};
use crate::equilibrium::{search, SearchReport};
use crate::ewl::{final_state, outcome_probs, pure_payoffs, EntanglerSetting};
use crate::gamefile::{read_game_file, GameFile};
use crate::quadratic::{payoff_matrix_a, payoff_matrix_b};
use crate::report::{sweep_csv, to_json};
use crate::strategy_spec::{parse_angle, parse_strategy};
use crate::su2::Su2Element;

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INCONSISTENT: i32 = 3;
/// Largest tolerated gap between two independent payoff computations.
pub const CONSISTENCY_TOL: f64 = 1e-8;
pub const THREADS_ENV: &str = "QGAME_THREADS";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
        }
    }

    fn inconsistent(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INCONSISTENT,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for CliError {}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        Self::input(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "qgame", version, about = "Quantum 2x2 games under the EWL protocol")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Report format; CSV is only available for case-study sweeps.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn angle_arg(s: &str) -> Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

fn strategy_arg(s: &str) -> Result<Su2Element, String> {
    parse_strategy(s).map_err(|e| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pure and mixed Nash equilibria, dominance and Pareto set of the classical game.
    Classical {
        file: PathBuf,
        /// Accepted for a uniform interface; the classical analysis is not random.
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Payoffs of one pure quantum profile, by simulation and by quadratic form.
    Payoff {
        file: PathBuf,
        /// Entanglement in radians; overrides the file's `[quantum]` section.
        #[arg(long, value_parser = angle_arg, allow_hyphen_values = true)]
        gamma: Option<f64>,
        /// `angles:θ,α,β` or `vector:w,x,y,z`.
        #[arg(long, value_parser = strategy_arg, allow_hyphen_values = true)]
        ua: Su2Element,
        #[arg(long, value_parser = strategy_arg, allow_hyphen_values = true)]
        ub: Su2Element,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Search for certified equilibria of the quantum game.
    FindNe {
        file: PathBuf,
        /// Entanglement in radians; overrides the file's `[quantum]` section.
        #[arg(long, value_parser = angle_arg, allow_hyphen_values = true)]
        gamma: Option<f64>,
        /// Overrides `search.seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Overrides `search.epsilon`.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Overrides `search.max_iter`.
        #[arg(long)]
        max_iter: Option<usize>,
        /// Number of random starts for best-response dynamics.
        #[arg(long)]
        random_starts: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sweep B's counter-strategies against a classical A in Chicken.
    ChickenCaseStudy {
        /// Number of γ values on [0, π/2].
        #[arg(long, default_value_t = 50)]
        n_gamma: usize,
        /// Number of φ values on [0, π].
        #[arg(long, default_value_t = 50)]
        n_phi: usize,
        /// Single γ instead of a grid.
        #[arg(long, value_parser = angle_arg, allow_hyphen_values = true)]
        gamma: Option<f64>,
        /// Single φ instead of a grid.
        #[arg(long, value_parser = angle_arg, allow_hyphen_values = true)]
        phi: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PureNashEntry {
    pub profile: (usize, usize),
    pub label: String,
    pub payoffs: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalReport {
    pub game: BimatrixGame,
    pub pure_nash: Vec<PureNashEntry>,
    pub mixed_nash: IndifferenceOutcome,
    /// Expected payoffs at the mixed equilibrium, when there is one.
    pub mixed_payoffs: Option<(f64, f64)>,
    pub dominance: Dominance,
    pub pareto_optimal: Vec<PureNashEntry>,
}

pub fn cmd_classical(game: &BimatrixGame) -> ClassicalReport {
    let entry = |c: (usize, usize)| PureNashEntry {
        profile: c,
        label: game.profile_label(c),
        payoffs: expected_payoffs(game, ClassicalMixedProfile::pure(c)),
    };
    let mixed_nash = mixed_nash_indifference(game);
    ClassicalReport {
        game: game.clone(),
        pure_nash: pure_nash(game).into_iter().map(entry).collect(),
        mixed_payoffs: mixed_nash.profile().map(|p| expected_payoffs(game, p)),
        mixed_nash,
        dominance: dominant_strategies(game),
        pareto_optimal: pareto_optimal_profiles(game).into_iter().map(entry).collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PayoffReport {
    pub game: String,
    pub gamma: f64,
    pub u_a: Su2Element,
    pub u_b: Su2Element,
    /// Outcome probabilities `p_00, p_01, p_10, p_11`.
    pub probabilities: [f64; 4],
    pub payoff_a: f64,
    pub payoff_b: f64,
    /// `payoff_a - payoff_b`.
    pub difference: f64,
    pub quadratic_payoff_a: f64,
    pub quadratic_payoff_b: f64,
    /// Largest gap between simulated and quadratic-form payoffs.
    pub discrepancy: f64,
    pub form_a: [[f64; 4]; 4],
    pub form_b: [[f64; 4]; 4],
}

/// Fails with exit code 3 when the two payoff routes disagree.
pub fn cmd_payoff(
    game: &BimatrixGame,
    setting: EntanglerSetting,
    u_a: &Su2Element,
    u_b: &Su2Element,
) -> Result<PayoffReport, CliError> {
    let probabilities = outcome_probs(&final_state(setting, u_a, u_b));
    let (payoff_a, payoff_b) = pure_payoffs(game, setting, u_a, u_b);
    let form_a = payoff_matrix_a(game, setting, u_b);
    let form_b = payoff_matrix_b(game, setting, u_a);
    let quadratic_payoff_a = form_a.value(&u_a.to_vector());
    let quadratic_payoff_b = form_b.value(&u_b.to_vector());
    let discrepancy = (payoff_a - quadratic_payoff_a).abs().max((payoff_b - quadratic_payoff_b).abs());
    if !(discrepancy <= CONSISTENCY_TOL) {
        return Err(CliError::inconsistent(format!(
            "simulator and quadratic form disagree by {discrepancy:e}"
        )));
    }
    Ok(PayoffReport {
        game: game.name.clone(),
        gamma: setting.gamma(),
        u_a: *u_a,
        u_b: *u_b,
        probabilities,
        payoff_a,
        payoff_b,
        difference: payoff_a - payoff_b,
        quadratic_payoff_a,
        quadratic_payoff_b,
        discrepancy,
        form_a: form_a.rows(),
        form_b: form_b.rows(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseStudyReport {
    pub points: usize,
    pub max_difference: f64,
    pub max_simulator_discrepancy: f64,
    pub rows: Vec<SweepRow>,
}

pub fn cmd_chicken_case_study(gammas: &[f64], phis: &[f64]) -> Result<CaseStudyReport, CliError> {
    if gammas.is_empty() || phis.is_empty() {
        return Err(CliError::input("case-study grids must be nonempty"));
    }
    let rows = chicken_sweep(gammas, phis)?;
    let max_difference = rows.iter().map(|r| r.difference).fold(f64::NEG_INFINITY, f64::max);
    let max_simulator_discrepancy = rows.iter().map(|r| r.simulator_discrepancy).fold(0.0, f64::max);
    if !(max_simulator_discrepancy <= CONSISTENCY_TOL) {
        return Err(CliError::inconsistent(format!(
            "closed form and simulator disagree by {max_simulator_discrepancy:e}"
        )));
    }
    Ok(CaseStudyReport {
        points: rows.len(),
        max_difference,
        max_simulator_discrepancy,
        rows,
    })
}

fn load(path: &Path) -> Result<GameFile, CliError> {
    read_game_file(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn resolve_setting(flag: Option<f64>, file: &GameFile) -> Result<EntanglerSetting, CliError> {
    match (flag, file.setting) {
        (Some(g), _) => Ok(EntanglerSetting::new(g)?),
        (None, Some(s)) => Ok(s),
        (None, None) => Err(CliError::input("no gamma given: pass --gamma or add a [quantum] section")),
    }
}

fn json<T: Serialize>(value: &T) -> Result<String, CliError> {
    to_json(value).map_err(|e| CliError::input(format!("cannot serialize report: {e}")))
}

fn json_only(format: Format, command: &str) -> Result<(), CliError> {
    match format {
        Format::Json => Ok(()),
        Format::Csv => Err(CliError::input(format!("{command} only supports --format json"))),
    }
}

/// Execute a parsed command and return the rendered report and where it goes.
pub fn execute(command: &Command) -> Result<(String, Option<PathBuf>), CliError> {
    match command {
        Command::Classical { file, output, .. } => {
            json_only(output.format, "classical")?;
            let f = load(file)?;
            Ok((json(&cmd_classical(&f.game))?, output.out.clone()))
        }
        Command::Payoff {
            file, gamma, ua, ub, output, ..
        } => {
            json_only(output.format, "payoff")?;
            let f = load(file)?;
            let setting = resolve_setting(*gamma, &f)?;
            Ok((json(&cmd_payoff(&f.game, setting, ua, ub)?)?, output.out.clone()))
        }
        Command::FindNe {
            file,
            gamma,
            seed,
            epsilon,
            max_iter,
            random_starts,
            output,
        } => {
            json_only(output.format, "find-ne")?;
            let f = load(file)?;
            let setting = resolve_setting(*gamma, &f)?;
            let mut config = f.search.clone();
            if let Some(s) = seed {
                config.seed = *s;
            }
            if let Some(e) = epsilon {
                config.epsilon = *e;
            }
            if let Some(m) = max_iter {
                config.max_iter = *m;
            }
            if let Some(n) = random_starts {
                config.n_random_starts = *n;
            }
            let report: SearchReport = search(&f.game, setting, &config)?;
            Ok((json(&report)?, output.out.clone()))
        }
        Command::ChickenCaseStudy {
            n_gamma,
            n_phi,
            gamma,
            phi,
            output,
            ..
        } => {
            let gammas = gamma.map_or_else(|| linspace(0.0, FRAC_PI_2, *n_gamma), |g| vec![g]);
            let phis = phi.map_or_else(|| linspace(0.0, PI, *n_phi), |p| vec![p]);
            let report = cmd_chicken_case_study(&gammas, &phis)?;
            let text = match output.format {
                Format::Json => json(&report)?,
                Format::Csv => sweep_csv(&report.rows).map_err(|e| CliError::input(format!("cannot write CSV: {e}")))?,
            };
            Ok((text, output.out.clone()))
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| CliError::input(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    if n == 0 {
        return Err(CliError::input(format!("{THREADS_ENV} must be at least 1")));
    }
    // Only fails if a pool already exists, in which case it is kept.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Parse `std::env::args`, run, and return the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|()| execute(&cli.command));
    let result = outcome.and_then(|(text, out)| match out {
        Some(path) => std::fs::write(&path, text).map_err(|e| CliError::input(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}
