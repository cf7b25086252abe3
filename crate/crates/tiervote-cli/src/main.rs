//! `tiervote` — solver and simulator for two-tier costly-voting elections.
//!
//! Thin clap wrapper: flags are parsed into a [`RunSpec`], the library runs
//! the command, and the artifact goes to stdout or `--output`. Failures emit
//! a one-line JSON error record on stderr and exit nonzero (flag parse
//! errors exit 2 via clap). Parallel solves honour `RAYON_NUM_THREADS`.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use tiervote::montecarlo::CostModel;
use tiervote::{Rule, StrategyProfile, TieConvention};
use tiervote_cli::commands::{
    self, Command, ConfigSource, ObservedSource, OutputFormat, RunSpec, SimFlags, SolverFlags,
};
use tiervote_cli::CliError;

#[derive(Parser)]
#[command(
    name = "tiervote",
    version,
    about = "Two-tier costly-voting elections: exact pivot probabilities, cutpoint equilibria, \
             seeded Monte Carlo, welfare, and turnout-deviation analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// Output format: csv, json, or pretty-table
    #[arg(long, global = true, value_parser = parse_format, default_value = "pretty-table")]
    format: OutputFormat,
    /// Write the artifact to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct TargetArgs {
    /// Embedded configuration id (1-18) or path to a JSON config file
    #[arg(long, value_name = "ID|PATH")]
    config: String,
    /// Weight-allocation rule: wta (winner-take-all) or pr (proportional)
    #[arg(long, value_parser = parse_rule)]
    rule: Rule,
}

#[derive(Args)]
struct SolverArgs {
    /// Damping factor in (0,1] for the fixed-point iteration
    #[arg(long, default_value_t = 0.5)]
    damping: f64,
    /// Convergence tolerance on the cutpoint residual
    #[arg(long, default_value_t = 1e-7)]
    tolerance: f64,
    #[arg(long, default_value_t = 10_000)]
    max_iterations: u32,
    /// Uniform starting cutpoint in [0,1]
    #[arg(long, default_value_t = 0.5)]
    start: f64,
    /// In-group vote-tie convention under wta: coin-flip or half-split
    #[arg(long, value_parser = parse_tie, default_value = "coin-flip")]
    tie: TieConvention,
    /// Drop tally branches with probability below this threshold
    #[arg(long, default_value_t = 0.0)]
    prune: f64,
}

impl SolverArgs {
    fn to_flags(&self) -> Result<SolverFlags, CliError> {
        if !(0.0..=1.0).contains(&self.start) {
            return Err(CliError::InvalidFlag(format!(
                "--start must lie in [0,1], got {}",
                self.start
            )));
        }
        Ok(SolverFlags {
            damping: self.damping,
            tolerance: self.tolerance,
            max_iterations: self.max_iterations,
            start: self.start,
            tie: self.tie,
            prune: self.prune,
        })
    }
}

#[derive(Args)]
struct SimArgs {
    /// Number of simulated elections
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    /// Seed for the deterministic per-trial random streams
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Participation-cost draw: continuous or discrete
    #[arg(long, value_parser = parse_cost_model, default_value = "continuous")]
    cost_model: CostModel,
}

impl SimArgs {
    fn to_flags(&self) -> SimFlags {
        SimFlags {
            trials: self.trials,
            seed: self.seed,
            cost_model: self.cost_model,
        }
    }
}

#[derive(Subcommand)]
enum Sub {
    /// Solve the quasi-symmetric cutpoint equilibrium for one configuration
    Solve {
        #[command(flatten)]
        target: TargetArgs,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Re-derive the benchmark group-1 turnout table and report the gaps
    #[command(name = "reproduce-table4")]
    ReproduceTable4 {
        /// Restrict to one rule (default: both)
        #[arg(long, value_parser = parse_rule)]
        rule: Option<Rule>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Monte Carlo estimates of the win probability, welfare, and turnout
    Simulate {
        #[command(flatten)]
        target: TargetArgs,
        /// Cutpoints t1A,t1B,t2A,t2B,t3A,t3B in [0,1] (default: solved equilibrium)
        #[arg(long, value_delimiter = ',', value_name = "T1A,T1B,T2A,T2B,T3A,T3B")]
        profile: Option<Vec<f64>>,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        sim: SimArgs,
    },
    /// Exact expected welfare, camp aggregates, and the group-1 Gini
    Welfare {
        #[command(flatten)]
        target: TargetArgs,
        /// Cutpoints t1A,t1B,t2A,t2B,t3A,t3B in [0,1] (default: solved equilibrium)
        #[arg(long, value_delimiter = ',', value_name = "T1A,T1B,T2A,T2B,T3A,T3B")]
        profile: Option<Vec<f64>>,
        /// CSV of empirical cutpoint samples (cost units) overriding some types
        #[arg(long, value_name = "PATH")]
        samples: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Observed-minus-equilibrium group-1 turnout deviations by camp
    Deviations {
        /// CSV of observed group-1 turnout (default: bundled experimental values)
        #[arg(long, value_name = "PATH", conflicts_with = "embedded")]
        observed: Option<PathBuf>,
        /// Use the bundled experimental observations (the default)
        #[arg(long)]
        embedded: bool,
        /// Restrict to one rule (default: both)
        #[arg(long, value_parser = parse_rule)]
        rule: Option<Rule>,
    },
    /// Exact pivot probabilities at a given strategy profile
    Pivot {
        #[command(flatten)]
        target: TargetArgs,
        /// Cutpoints t1A,t1B,t2A,t2B,t3A,t3B in [0,1]
        #[arg(long, value_delimiter = ',', value_name = "T1A,T1B,T2A,T2B,T3A,T3B")]
        profile: Vec<f64>,
        /// In-group vote-tie convention under wta: coin-flip or half-split
        #[arg(long, value_parser = parse_tie, default_value = "coin-flip")]
        tie: TieConvention,
        /// Drop tally branches with probability below this threshold
        #[arg(long, default_value_t = 0.0)]
        prune: f64,
    },
}

fn parse_rule(s: &str) -> Result<Rule, String> {
    Rule::from_str(s).map_err(|e| e.to_string())
}

fn parse_tie(s: &str) -> Result<TieConvention, String> {
    match s.to_ascii_lowercase().as_str() {
        "coin-flip" | "coin" => Ok(TieConvention::CoinFlip),
        "half-split" | "half" => Ok(TieConvention::HalfSplit),
        other => Err(format!(
            "unknown tie convention {other:?} (expected coin-flip or half-split)"
        )),
    }
}

fn parse_cost_model(s: &str) -> Result<CostModel, String> {
    match s.to_ascii_lowercase().as_str() {
        "continuous" => Ok(CostModel::Continuous),
        "discrete" => Ok(CostModel::Discrete),
        other => Err(format!(
            "unknown cost model {other:?} (expected continuous or discrete)"
        )),
    }
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    match s.to_ascii_lowercase().as_str() {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        "pretty-table" | "pretty" | "table" => Ok(OutputFormat::PrettyTable),
        other => Err(format!(
            "unknown format {other:?} (expected csv, json, or pretty-table)"
        )),
    }
}

fn profile_from_values(values: &[f64]) -> Result<StrategyProfile, CliError> {
    if values.len() != 6 {
        return Err(CliError::InvalidFlag(format!(
            "--profile needs six comma-separated cutpoints, got {}",
            values.len()
        )));
    }
    let profile = StrategyProfile::from_flat([
        values[0], values[1], values[2], values[3], values[4], values[5],
    ]);
    if !profile.is_valid() {
        return Err(CliError::InvalidFlag(
            "--profile cutpoints must lie in [0,1]".to_string(),
        ));
    }
    Ok(profile)
}

fn build_spec(cli: Cli) -> Result<RunSpec, CliError> {
    let command = match cli.command {
        Sub::Solve { target, solver } => Command::Solve {
            config: ConfigSource::parse(&target.config),
            rule: target.rule,
            solver: solver.to_flags()?,
        },
        Sub::ReproduceTable4 { rule, solver } => Command::ReproduceTable4 {
            rule,
            solver: solver.to_flags()?,
        },
        Sub::Simulate {
            target,
            profile,
            solver,
            sim,
        } => Command::Simulate {
            config: ConfigSource::parse(&target.config),
            rule: target.rule,
            profile: profile.as_deref().map(profile_from_values).transpose()?,
            solver: solver.to_flags()?,
            sim: sim.to_flags(),
        },
        Sub::Welfare {
            target,
            profile,
            samples,
            solver,
        } => Command::Welfare {
            config: ConfigSource::parse(&target.config),
            rule: target.rule,
            profile: profile.as_deref().map(profile_from_values).transpose()?,
            samples,
            solver: solver.to_flags()?,
        },
        Sub::Deviations {
            observed,
            embedded: _,
            rule,
        } => Command::Deviations {
            observed: match observed {
                Some(path) => ObservedSource::File(path),
                None => ObservedSource::Embedded,
            },
            rule,
        },
        Sub::Pivot {
            target,
            profile,
            tie,
            prune,
        } => Command::Pivot {
            config: ConfigSource::parse(&target.config),
            rule: target.rule,
            profile: profile_from_values(&profile)?,
            tie,
            prune,
        },
    };
    Ok(RunSpec {
        command,
        format: cli.format,
        output: cli.output,
    })
}

fn fail(err: &CliError) -> ExitCode {
    eprintln!("{}", err.record());
    ExitCode::FAILURE
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let spec = match build_spec(cli) {
        Ok(spec) => spec,
        Err(err) => return fail(&err),
    };
    let outcome = match commands::run(&spec) {
        Ok(outcome) => outcome,
        Err(err) => return fail(&err),
    };
    for note in &outcome.notes {
        eprintln!("{note}");
    }
    let written = match &spec.output {
        Some(path) => std::fs::write(path, &outcome.stdout).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        }),
        None => {
            print!("{}", outcome.stdout);
            Ok(())
        }
    };
    if let Err(err) = written {
        return fail(&err);
    }
    match &outcome.failure {
        Some(err) => fail(err),
        None => ExitCode::SUCCESS,
    }
}
