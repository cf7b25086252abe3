//! Subcommand implementations and output rendering.
//!
//! Every command produces its artifact as a string in one of three formats —
//! `csv` (header row, fixed column order), `json`, or a plain aligned table —
//! so the binary stays a thin shell around [`run`]. All numeric output is
//! deterministic for a given invocation and seed.

use std::fmt::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::Serialize;

use tiervote::behavioral::{category_summary, deviation_table, Camp, DeviationRecord};
use tiervote::equilibrium::{solve, EquilibriumResult, SolveOptions};
use tiervote::montecarlo::{estimate, CostModel, SimOptions, SimReport};
use tiervote::pivot::{pivot_vector, EnumerationOptions, PivotVector};
use tiervote::welfare::{expected_welfare, welfare_from_sample, WelfareReport};
use tiervote::{Candidate, ElectorateConfig, Rule, StrategyProfile, TieConvention};

use crate::embedded::{self, GOLDEN_GAP_TOLERANCE};
use crate::{io, CliError};

/// Where the electorate comes from: a bundled configuration id or a JSON
/// file.
#[derive(Clone, Debug)]
pub enum ConfigSource {
    Embedded(u32),
    File(PathBuf),
}

impl ConfigSource {
    /// Ids 1–18 select embedded configurations; anything else is a path.
    pub fn parse(raw: &str) -> Self {
        match raw.parse::<u32>() {
            Ok(id) => ConfigSource::Embedded(id),
            Err(_) => ConfigSource::File(PathBuf::from(raw)),
        }
    }

    fn load(&self) -> Result<ElectorateConfig, CliError> {
        match self {
            ConfigSource::Embedded(id) => {
                embedded::electorate(*id).ok_or(CliError::UnknownConfiguration(*id))
            }
            ConfigSource::File(path) => io::load_config(path),
        }
    }
}

/// Solver flags shared by the equilibrium-based commands.
#[derive(Clone, Copy, Debug)]
pub struct SolverFlags {
    pub damping: f64,
    pub tolerance: f64,
    pub max_iterations: u32,
    pub start: f64,
    pub tie: TieConvention,
    pub prune: f64,
}

impl Default for SolverFlags {
    fn default() -> Self {
        let defaults = SolveOptions::default();
        Self {
            damping: defaults.damping,
            tolerance: defaults.tolerance,
            max_iterations: defaults.max_iterations,
            start: 0.5,
            tie: TieConvention::default(),
            prune: 0.0,
        }
    }
}

impl SolverFlags {
    fn to_options(self) -> SolveOptions {
        SolveOptions {
            damping: self.damping,
            tolerance: self.tolerance,
            max_iterations: self.max_iterations,
            start: StrategyProfile::uniform(self.start),
            enumeration: self.enumeration(),
        }
    }

    fn enumeration(self) -> EnumerationOptions {
        EnumerationOptions {
            tie: self.tie,
            prune_threshold: self.prune,
        }
    }
}

/// Simulation flags.
#[derive(Clone, Copy, Debug)]
pub struct SimFlags {
    pub trials: u64,
    pub seed: u64,
    pub cost_model: CostModel,
}

impl SimFlags {
    fn to_options(self) -> SimOptions {
        SimOptions {
            trials: self.trials,
            seed: self.seed,
            cost_model: self.cost_model,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
    PrettyTable,
}

/// Where the observed side of a deviation table comes from.
#[derive(Clone, Debug)]
pub enum ObservedSource {
    Embedded,
    File(PathBuf),
}

#[derive(Clone, Debug)]
pub enum Command {
    Solve {
        config: ConfigSource,
        rule: Rule,
        solver: SolverFlags,
    },
    ReproduceTable4 {
        rule: Option<Rule>,
        solver: SolverFlags,
    },
    Simulate {
        config: ConfigSource,
        rule: Rule,
        profile: Option<StrategyProfile>,
        solver: SolverFlags,
        sim: SimFlags,
    },
    Welfare {
        config: ConfigSource,
        rule: Rule,
        profile: Option<StrategyProfile>,
        samples: Option<PathBuf>,
        solver: SolverFlags,
    },
    Deviations {
        observed: ObservedSource,
        rule: Option<Rule>,
    },
    Pivot {
        config: ConfigSource,
        rule: Rule,
        profile: StrategyProfile,
        tie: TieConvention,
        prune: f64,
    },
}

/// A parsed invocation.
#[derive(Clone, Debug)]
pub struct RunSpec {
    pub command: Command,
    pub format: OutputFormat,
    pub output: Option<PathBuf>,
}

/// What a command produced: the artifact text, informational notes for
/// stderr, and — for checks that emit their table before failing — an error
/// to raise after the artifact is written.
pub struct RunOutcome {
    pub stdout: String,
    pub notes: Vec<String>,
    pub failure: Option<CliError>,
}

impl RunOutcome {
    fn ok(stdout: String) -> Self {
        Self {
            stdout,
            notes: Vec::new(),
            failure: None,
        }
    }
}

pub fn run(spec: &RunSpec) -> Result<RunOutcome, CliError> {
    match &spec.command {
        Command::Solve {
            config,
            rule,
            solver,
        } => solve_command(config, *rule, *solver, spec.format),
        Command::ReproduceTable4 { rule, solver } => {
            reproduce_command(*rule, *solver, spec.format)
        }
        Command::Simulate {
            config,
            rule,
            profile,
            solver,
            sim,
        } => simulate_command(config, *rule, *profile, *solver, *sim, spec.format),
        Command::Welfare {
            config,
            rule,
            profile,
            samples,
            solver,
        } => welfare_command(config, *rule, *profile, samples.as_deref(), *solver, spec.format),
        Command::Deviations { observed, rule } => {
            deviations_command(observed, *rule, spec.format)
        }
        Command::Pivot {
            config,
            rule,
            profile,
            tie,
            prune,
        } => pivot_command(config, *rule, *profile, *tie, *prune, spec.format),
    }
}

fn config_name(config: &ElectorateConfig) -> String {
    config.label.clone().unwrap_or_else(|| "custom".to_string())
}

fn describe(config: &ElectorateConfig) -> String {
    format!(
        "{} — sizes ({}, {}, {}), support ({}, {}, {}), benefit {}, cost cap {}",
        config_name(config),
        config.group_sizes[0],
        config.group_sizes[1],
        config.group_sizes[2],
        config.support_rates[0],
        config.support_rates[1],
        config.support_rates[2],
        config.benefit,
        config.cost_cap,
    )
}

/// Solve the equilibrium a command needs as a baseline, failing loudly if the
/// iteration did not converge (a best iterate is not an equilibrium).
fn solved_equilibrium(
    config: &ElectorateConfig,
    rule: Rule,
    solver: SolverFlags,
) -> Result<EquilibriumResult, CliError> {
    let result = solve(config, rule, config.benefit, config.cost_cap, &solver.to_options())?;
    if !result.converged {
        return Err(CliError::NotConverged(result.residual));
    }
    Ok(result)
}

// --- solve ---------------------------------------------------------------

#[derive(Serialize)]
struct SolveArtifact<'a> {
    config: &'a ElectorateConfig,
    rule: Rule,
    result: &'a EquilibriumResult,
}

fn solve_command(
    source: &ConfigSource,
    rule: Rule,
    solver: SolverFlags,
    format: OutputFormat,
) -> Result<RunOutcome, CliError> {
    let config = source.load()?;
    let result = solve(&config, rule, config.benefit, config.cost_cap, &solver.to_options())?;
    let name = config_name(&config);
    let stdout = match format {
        OutputFormat::Json => to_json(&SolveArtifact {
            config: &config,
            rule,
            result: &result,
        })?,
        OutputFormat::Csv => {
            let mut rows = vec![vec![
                "config".to_string(),
                "rule".to_string(),
                "group".to_string(),
                "candidate".to_string(),
                "cutpoint".to_string(),
                "corner".to_string(),
                "residual".to_string(),
                "iterations".to_string(),
                "converged".to_string(),
            ]];
            for g in 0..3 {
                for cand in Candidate::BOTH {
                    rows.push(vec![
                        name.clone(),
                        rule.to_string(),
                        (g + 1).to_string(),
                        cand.to_string(),
                        full(result.profile.get(g, cand)),
                        result.corner_flags[g][cand.idx()].to_string(),
                        full(result.residual),
                        result.iterations.to_string(),
                        result.converged.to_string(),
                    ]);
                }
            }
            to_csv(&rows)?
        }
        OutputFormat::PrettyTable => {
            let mut out = String::new();
            let _ = writeln!(out, "{} under {rule}", describe(&config));
            let _ = writeln!(out, "{:<7}{:<11}{:>12}  {}", "group", "candidate", "cutpoint", "corner");
            for g in 0..3 {
                for cand in Candidate::BOTH {
                    let corner = if result.corner_flags[g][cand.idx()] {
                        "corner"
                    } else {
                        ""
                    };
                    let _ = writeln!(
                        out,
                        "{:<7}{:<11}{:>12.6}  {}",
                        g + 1,
                        cand.to_string(),
                        result.profile.get(g, cand),
                        corner
                    );
                }
            }
            let status = if result.converged {
                "converged"
            } else {
                "DID NOT CONVERGE (best iterate shown)"
            };
            let _ = writeln!(
                out,
                "residual {:.3e} after {} iterations: {status}",
                result.residual, result.iterations
            );
            out
        }
    };
    Ok(RunOutcome::ok(stdout))
}

// --- reproduce-table4 ----------------------------------------------------

#[derive(Serialize)]
struct GoldenRow {
    config_id: u32,
    rule: Rule,
    reference: [f64; 2],
    solved: [f64; 2],
    gap: [f64; 2],
    converged: bool,
}

#[derive(Serialize)]
struct GoldenArtifact {
    tolerance: f64,
    max_gap: f64,
    within_tolerance: bool,
    rows: Vec<GoldenRow>,
}

fn reproduce_command(
    rule_filter: Option<Rule>,
    solver: SolverFlags,
    format: OutputFormat,
) -> Result<RunOutcome, CliError> {
    let mut cells = Vec::new();
    for row in &embedded::CONFIGURATIONS {
        for rule in Rule::BOTH {
            if rule_filter.is_none() || rule_filter == Some(rule) {
                cells.push((row.id, rule));
            }
        }
    }
    // The cells are independent; solve them in parallel and reorder after.
    let mut rows = cells
        .into_par_iter()
        .map(|(id, rule)| -> Result<GoldenRow, CliError> {
            let config = embedded::electorate(id).expect("embedded id");
            let result =
                solve(&config, rule, config.benefit, config.cost_cap, &solver.to_options())?;
            let (ref_a, ref_b) = embedded::equilibrium_turnout(id, rule).expect("embedded id");
            let solved = [
                result.profile.get(0, Candidate::A),
                result.profile.get(0, Candidate::B),
            ];
            Ok(GoldenRow {
                config_id: id,
                rule,
                reference: [ref_a, ref_b],
                solved,
                gap: [(solved[0] - ref_a).abs(), (solved[1] - ref_b).abs()],
                converged: result.converged,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    rows.sort_by_key(|row| (row.config_id, row.rule));
    let max_gap = rows
        .iter()
        .flat_map(|row| row.gap)
        .fold(0.0f64, f64::max);
    let within = max_gap <= GOLDEN_GAP_TOLERANCE;
    let summary = format!(
        "max |gap| = {:.6} (tolerance {GOLDEN_GAP_TOLERANCE}): {}",
        max_gap,
        if within { "within tolerance" } else { "EXCEEDED" }
    );

    let mut notes = Vec::new();
    let stdout = match format {
        OutputFormat::Json => to_json(&GoldenArtifact {
            tolerance: GOLDEN_GAP_TOLERANCE,
            max_gap,
            within_tolerance: within,
            rows,
        })?,
        OutputFormat::Csv => {
            let mut table = vec![vec![
                "config_id".to_string(),
                "rule".to_string(),
                "reference_t1a".to_string(),
                "reference_t1b".to_string(),
                "solved_t1a".to_string(),
                "solved_t1b".to_string(),
                "gap_t1a".to_string(),
                "gap_t1b".to_string(),
                "converged".to_string(),
            ]];
            for row in &rows {
                table.push(vec![
                    row.config_id.to_string(),
                    row.rule.to_string(),
                    full(row.reference[0]),
                    full(row.reference[1]),
                    full(row.solved[0]),
                    full(row.solved[1]),
                    full(row.gap[0]),
                    full(row.gap[1]),
                    row.converged.to_string(),
                ]);
            }
            notes.push(summary.clone());
            to_csv(&table)?
        }
        OutputFormat::PrettyTable => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{:<8}{:<6}{:>9}{:>9}{:>12}{:>12}{:>10}{:>10}",
                "config", "rule", "ref t1A", "ref t1B", "solved t1A", "solved t1B", "gap t1A",
                "gap t1B"
            );
            for row in &rows {
                let _ = writeln!(
                    out,
                    "{:<8}{:<6}{:>9.3}{:>9.3}{:>12.6}{:>12.6}{:>10.6}{:>10.6}",
                    row.config_id,
                    row.rule.to_string(),
                    row.reference[0],
                    row.reference[1],
                    row.solved[0],
                    row.solved[1],
                    row.gap[0],
                    row.gap[1],
                );
            }
            let _ = writeln!(out, "{summary}");
            out
        }
    };
    Ok(RunOutcome {
        stdout,
        notes,
        failure: (!within).then_some(CliError::GoldenMismatch {
            max_gap,
            tolerance: GOLDEN_GAP_TOLERANCE,
        }),
    })
}

// --- simulate -------------------------------------------------------------

#[derive(Serialize)]
struct SimulateArtifact<'a> {
    config: &'a ElectorateConfig,
    rule: Rule,
    profile: &'a StrategyProfile,
    trials: u64,
    seed: u64,
    cost_model: CostModel,
    report: &'a SimReport,
}

fn simulate_command(
    source: &ConfigSource,
    rule: Rule,
    profile: Option<StrategyProfile>,
    solver: SolverFlags,
    sim: SimFlags,
    format: OutputFormat,
) -> Result<RunOutcome, CliError> {
    let config = source.load()?;
    let profile = match profile {
        Some(profile) => profile,
        None => solved_equilibrium(&config, rule, solver)?.profile,
    };
    let report = estimate(&config, rule, &profile, &sim.to_options())?;
    let name = config_name(&config);
    let stdout = match format {
        OutputFormat::Json => to_json(&SimulateArtifact {
            config: &config,
            rule,
            profile: &profile,
            trials: sim.trials,
            seed: sim.seed,
            cost_model: sim.cost_model,
            report: &report,
        })?,
        OutputFormat::Csv => {
            let mut rows = vec![vec![
                "config".to_string(),
                "rule".to_string(),
                "quantity".to_string(),
                "group".to_string(),
                "candidate".to_string(),
                "mean".to_string(),
                "std_error".to_string(),
            ]];
            rows.push(vec![
                name.clone(),
                rule.to_string(),
                "win_prob_a".to_string(),
                String::new(),
                String::new(),
                full(report.win_prob_a.mean),
                full(report.win_prob_a.std_error),
            ]);
            for g in 0..3 {
                for cand in Candidate::BOTH {
                    let est = report.welfare[g][cand.idx()];
                    rows.push(vec![
                        name.clone(),
                        rule.to_string(),
                        "welfare".to_string(),
                        (g + 1).to_string(),
                        cand.to_string(),
                        full(est.mean),
                        full(est.std_error),
                    ]);
                }
            }
            for g in 0..3 {
                for cand in Candidate::BOTH {
                    rows.push(vec![
                        name.clone(),
                        rule.to_string(),
                        "turnout".to_string(),
                        (g + 1).to_string(),
                        cand.to_string(),
                        full(report.turnout[g][cand.idx()]),
                        String::new(),
                    ]);
                }
            }
            to_csv(&rows)?
        }
        OutputFormat::PrettyTable => {
            let mut out = String::new();
            let _ = writeln!(out, "{} under {rule}", describe(&config));
            let _ = writeln!(
                out,
                "{} trials, seed {}, {} costs",
                report.trials,
                sim.seed,
                match sim.cost_model {
                    CostModel::Continuous => "continuous",
                    CostModel::Discrete => "discrete",
                }
            );
            let _ = writeln!(
                out,
                "win probability of A: {:.6} ± {:.6}",
                report.win_prob_a.mean, report.win_prob_a.std_error
            );
            let _ = writeln!(
                out,
                "{:<7}{:<11}{:>12}{:>12}{:>12}",
                "group", "candidate", "welfare", "std error", "turnout"
            );
            for g in 0..3 {
                for cand in Candidate::BOTH {
                    let est = report.welfare[g][cand.idx()];
                    let _ = writeln!(
                        out,
                        "{:<7}{:<11}{:>12.6}{:>12.6}{:>12.6}",
                        g + 1,
                        cand.to_string(),
                        est.mean,
                        est.std_error,
                        report.turnout[g][cand.idx()],
                    );
                }
            }
            out
        }
    };
    Ok(RunOutcome::ok(stdout))
}

// --- welfare ---------------------------------------------------------------

#[derive(Serialize)]
struct WelfareArtifact<'a> {
    config: &'a ElectorateConfig,
    rule: Rule,
    profile: &'a StrategyProfile,
    report: &'a WelfareReport,
}

fn welfare_command(
    source: &ConfigSource,
    rule: Rule,
    profile: Option<StrategyProfile>,
    samples: Option<&std::path::Path>,
    solver: SolverFlags,
    format: OutputFormat,
) -> Result<RunOutcome, CliError> {
    let config = source.load()?;
    let enumeration = solver.enumeration();
    // Baseline cutpoints: an explicit profile if given, otherwise the solved
    // equilibrium. Samples then override the types they cover.
    let baseline = match profile {
        Some(profile) => profile,
        None => solved_equilibrium(&config, rule, solver)?.profile,
    };
    let (profile_used, report) = match samples {
        None => (
            baseline,
            expected_welfare(&config, rule, &baseline, &enumeration)?,
        ),
        Some(path) => {
            let id = match source {
                ConfigSource::Embedded(id) => *id,
                ConfigSource::File(_) => 0,
            };
            let samples = io::read_cutpoint_samples(path, id, rule)?;
            let mut profile = baseline;
            for sample in &samples {
                let mean: f64 =
                    sample.values.iter().sum::<f64>() / sample.values.len().max(1) as f64;
                profile.t[sample.group][sample.candidate.idx()] = mean / config.cost_cap;
            }
            (
                profile,
                welfare_from_sample(&config, rule, &samples, &baseline, &enumeration)?,
            )
        }
    };
    let name = config_name(&config);
    let stdout = match format {
        OutputFormat::Json => to_json(&WelfareArtifact {
            config: &config,
            rule,
            profile: &profile_used,
            report: &report,
        })?,
        OutputFormat::Csv => {
            let mut rows = vec![vec![
                "config".to_string(),
                "rule".to_string(),
                "quantity".to_string(),
                "group".to_string(),
                "candidate".to_string(),
                "value".to_string(),
            ]];
            for g in 0..3 {
                for cand in Candidate::BOTH {
                    rows.push(vec![
                        name.clone(),
                        rule.to_string(),
                        "welfare".to_string(),
                        (g + 1).to_string(),
                        cand.to_string(),
                        full(report.welfare[g][cand.idx()]),
                    ]);
                }
            }
            let mut scalar = |quantity: &str, value: Option<f64>| {
                rows.push(vec![
                    name.clone(),
                    rule.to_string(),
                    quantity.to_string(),
                    String::new(),
                    String::new(),
                    value.map(full).unwrap_or_default(),
                ]);
            };
            scalar("win_prob_a", Some(report.win_prob_a));
            scalar("majority_welfare", report.majority_welfare);
            scalar("minority_welfare", report.minority_welfare);
            scalar("gini", report.gini);
            to_csv(&rows)?
        }
        OutputFormat::PrettyTable => {
            let mut out = String::new();
            let _ = writeln!(out, "{} under {rule}", describe(&config));
            let _ = writeln!(out, "{:<7}{:<11}{:>12}", "group", "candidate", "welfare");
            for g in 0..3 {
                for cand in Candidate::BOTH {
                    let _ = writeln!(
                        out,
                        "{:<7}{:<11}{:>12.6}",
                        g + 1,
                        cand.to_string(),
                        report.welfare[g][cand.idx()]
                    );
                }
            }
            let _ = writeln!(out, "win probability of A: {:.6}", report.win_prob_a);
            if let (Some(majority), Some(minority)) =
                (report.majority_welfare, report.minority_welfare)
            {
                let _ = writeln!(
                    out,
                    "group-1 camps: majority {majority:.6}, minority {minority:.6}"
                );
            }
            match report.gini {
                Some(gini) => {
                    let _ = writeln!(out, "group-1 ex-ante Gini: {gini:.6}");
                }
                None => {
                    let _ = writeln!(out, "group-1 ex-ante Gini: undefined (negative welfare)");
                }
            }
            out
        }
    };
    Ok(RunOutcome::ok(stdout))
}

// --- deviations -------------------------------------------------------------

#[derive(Serialize)]
struct DeviationRow {
    config_id: u32,
    rule: Rule,
    camp: Camp,
    deviation: f64,
    effect: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    reference: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    gap: Option<f64>,
}

#[derive(Serialize)]
struct SummaryRow {
    category: String,
    rule: Rule,
    camp: Camp,
    mean_deviation: f64,
    count: usize,
}

#[derive(Serialize)]
struct DeviationsArtifact {
    records: Vec<DeviationRow>,
    summary: Vec<SummaryRow>,
}

fn deviations_command(
    observed: &ObservedSource,
    rule_filter: Option<Rule>,
    format: OutputFormat,
) -> Result<RunOutcome, CliError> {
    let configs = embedded::config_pairs();
    let theory = embedded::equilibrium_turnout_records();
    let observed_records = match observed {
        ObservedSource::Embedded => embedded::observed_turnout_records(),
        ObservedSource::File(path) => io::read_observed_turnout(path)?,
    };
    let records: Vec<DeviationRecord> = deviation_table(&configs, &theory, &observed_records)?
        .into_iter()
        .filter(|r| rule_filter.is_none() || rule_filter == Some(r.rule))
        .collect();
    let summary = category_summary(&configs, &records)?;
    let embedded_source = matches!(observed, ObservedSource::Embedded);

    let rows: Vec<DeviationRow> = records
        .iter()
        .map(|r| {
            let reference = embedded_source
                .then(|| embedded::reference_deviation(r.config_id, r.rule, r.camp))
                .flatten();
            DeviationRow {
                config_id: r.config_id,
                rule: r.rule,
                camp: r.camp,
                deviation: r.deviation,
                effect: r.effect.to_string(),
                reference,
                gap: reference.map(|v| (r.deviation - v).abs()),
            }
        })
        .collect();
    let summary_rows: Vec<SummaryRow> = summary
        .iter()
        .map(|s| SummaryRow {
            category: s.category.to_string(),
            rule: s.rule,
            camp: s.camp,
            mean_deviation: s.mean_deviation,
            count: s.count,
        })
        .collect();

    let stdout = match format {
        OutputFormat::Json => to_json(&DeviationsArtifact {
            records: rows,
            summary: summary_rows,
        })?,
        OutputFormat::Csv => {
            let mut table = vec![vec![
                "config_id".to_string(),
                "rule".to_string(),
                "camp".to_string(),
                "deviation".to_string(),
                "effect".to_string(),
                "reference".to_string(),
                "gap".to_string(),
            ]];
            for row in &rows {
                table.push(vec![
                    row.config_id.to_string(),
                    row.rule.to_string(),
                    row.camp.to_string(),
                    full(row.deviation),
                    row.effect.clone(),
                    row.reference.map(full).unwrap_or_default(),
                    row.gap.map(full).unwrap_or_default(),
                ]);
            }
            to_csv(&table)?
        }
        OutputFormat::PrettyTable => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "{:<8}{:<6}{:<10}{:>11}  {:<22}{:>11}",
                "config", "rule", "camp", "deviation", "effect", "reference"
            );
            for row in &rows {
                let reference = row
                    .reference
                    .map(|v| format!("{v:>11.3}"))
                    .unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{:<8}{:<6}{:<10}{:>11.3}  {:<22}{}",
                    row.config_id,
                    row.rule.to_string(),
                    row.camp.to_string(),
                    row.deviation,
                    row.effect,
                    reference
                );
            }
            let _ = writeln!(out);
            let _ = writeln!(
                out,
                "{:<9}{:<6}{:<10}{:>16}{:>7}",
                "category", "rule", "camp", "mean deviation", "n"
            );
            for s in &summary_rows {
                let _ = writeln!(
                    out,
                    "{:<9}{:<6}{:<10}{:>16.3}{:>7}",
                    s.category,
                    s.rule.to_string(),
                    s.camp.to_string(),
                    s.mean_deviation,
                    s.count
                );
            }
            out
        }
    };
    Ok(RunOutcome::ok(stdout))
}

// --- pivot -------------------------------------------------------------------

#[derive(Serialize)]
struct PivotArtifact<'a> {
    config: &'a ElectorateConfig,
    rule: Rule,
    profile: &'a StrategyProfile,
    pivot: &'a PivotVector,
}

fn pivot_command(
    source: &ConfigSource,
    rule: Rule,
    profile: StrategyProfile,
    tie: TieConvention,
    prune: f64,
    format: OutputFormat,
) -> Result<RunOutcome, CliError> {
    let config = source.load()?;
    let options = EnumerationOptions {
        tie,
        prune_threshold: prune,
    };
    let vector = pivot_vector(&config, rule, &profile, &options)?;
    let name = config_name(&config);
    let stdout = match format {
        OutputFormat::Json => to_json(&PivotArtifact {
            config: &config,
            rule,
            profile: &profile,
            pivot: &vector,
        })?,
        OutputFormat::Csv => {
            let mut rows = vec![vec![
                "config".to_string(),
                "rule".to_string(),
                "group".to_string(),
                "candidate".to_string(),
                "pivot".to_string(),
            ]];
            for g in 0..3 {
                for cand in Candidate::BOTH {
                    rows.push(vec![
                        name.clone(),
                        rule.to_string(),
                        (g + 1).to_string(),
                        cand.to_string(),
                        full(vector.pi[g][cand.idx()]),
                    ]);
                }
            }
            to_csv(&rows)?
        }
        OutputFormat::PrettyTable => {
            let mut out = String::new();
            let _ = writeln!(out, "{} under {rule}", describe(&config));
            let _ = writeln!(out, "{:<7}{:<11}{:>14}", "group", "candidate", "pivot");
            for g in 0..3 {
                for cand in Candidate::BOTH {
                    let _ = writeln!(
                        out,
                        "{:<7}{:<11}{:>14.9}",
                        g + 1,
                        cand.to_string(),
                        vector.pi[g][cand.idx()]
                    );
                }
            }
            out
        }
    };
    Ok(RunOutcome::ok(stdout))
}

// --- rendering helpers --------------------------------------------------------

/// Shortest round-trip decimal representation; locale-independent.
fn full(value: f64) -> String {
    format!("{value}")
}

fn to_json<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Render(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn to_csv(rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer
            .write_record(row)
            .map_err(|e| CliError::Render(e.to_string()))?;
    }
    let bytes = writer
        .into_inner()
        .map_err(|e| CliError::Render(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Render(e.to_string()))
}
