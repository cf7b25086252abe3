//! Damped fixed-point solver for quasi-symmetric cutpoint equilibria.
//!
//! An equilibrium is a profile of cost cutpoints ĉ_{g,I} with
//! ĉ_{g,I} = β·π_{g,I}(ĉ), clamped to [0, c̄]. In normalized form
//! (t = ĉ/c̄) the fixed point is t = clamp(β·π(t)/c̄, 0, 1). The map is
//! cheap to evaluate exactly (one pivot vector) and empirically contractive
//! under damping, so plain damped iteration suffices.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{ElectorateConfig, ModelError, Rule, StrategyProfile};
use crate::pivot::{pivot_vector, EnumerationOptions, PivotVector};

#[derive(Debug, Error)]
pub enum EquilibriumError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("invalid solver options: {0}")]
    InvalidOptions(String),
}

/// Solver controls. Defaults: damping ½, tolerance 1e-7 on the cutpoints,
/// at most 10,000 iterations, start at the interior point t = 0.5.
#[derive(Clone, Copy, Debug)]
pub struct SolveOptions {
    /// Damping factor λ ∈ (0, 1]: t ← (1−λ)·t + λ·best_response(t).
    pub damping: f64,
    /// Convergence tolerance on max |t − clamp(best response)|.
    pub tolerance: f64,
    pub max_iterations: u32,
    pub start: StrategyProfile,
    pub enumeration: EnumerationOptions,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            damping: 0.5,
            tolerance: 1e-7,
            max_iterations: 10_000,
            start: StrategyProfile::uniform(0.5),
            enumeration: EnumerationOptions::default(),
        }
    }
}

/// Outcome of one solve. `converged == false` means the iteration budget ran
/// out; the best iterate seen is still reported.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct EquilibriumResult {
    pub profile: StrategyProfile,
    /// Max-norm gap between the profile and its clamped best response.
    pub residual: f64,
    pub iterations: u32,
    pub converged: bool,
    /// Per component: the cutpoint sits at 0 or 1 while the unclamped best
    /// response points outside [0, 1].
    pub corner_flags: [[bool; 2]; 3],
}

/// Clamped best response to a profile: clamp(β·π_{g,I}(profile)/c̄, 0, 1)
/// componentwise, with β and c̄ taken from the configuration.
pub fn best_response(
    config: &ElectorateConfig,
    rule: Rule,
    profile: &StrategyProfile,
    options: &EnumerationOptions,
) -> Result<StrategyProfile, ModelError> {
    let pi = pivot_vector(config, rule, profile, options)?;
    let (clamped, _) = response_pair(&pi, config.benefit, config.cost_cap);
    Ok(clamped)
}

fn response_pair(pi: &PivotVector, beta: f64, cost_cap: f64) -> (StrategyProfile, [[f64; 2]; 3]) {
    let mut raw = [[0.0; 2]; 3];
    let mut clamped = StrategyProfile::uniform(0.0);
    for g in 0..3 {
        for i in 0..2 {
            let r = beta * pi.pi[g][i] / cost_cap;
            raw[g][i] = r;
            clamped.t[g][i] = r.clamp(0.0, 1.0);
        }
    }
    (clamped, raw)
}

fn max_gap(a: &StrategyProfile, b: &StrategyProfile) -> f64 {
    a.flat()
        .iter()
        .zip(b.flat())
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Solve for the equilibrium by damped iteration from `options.start`.
///
/// `beta` and `cost_cap` override the configuration's values (they enter only
/// through the ratio β/c̄). Hitting the iteration budget is not an `Err`: the
/// best iterate is returned with `converged == false`. Converged cutpoints
/// within tolerance of a binding corner are snapped to exactly 0 or 1 and the
/// result is re-evaluated there.
pub fn solve(
    config: &ElectorateConfig,
    rule: Rule,
    beta: f64,
    cost_cap: f64,
    options: &SolveOptions,
) -> Result<EquilibriumResult, EquilibriumError> {
    config.validate()?;
    if !(options.damping > 0.0 && options.damping <= 1.0) {
        return Err(EquilibriumError::InvalidOptions(format!(
            "damping must lie in (0,1], got {}",
            options.damping
        )));
    }
    if !(options.tolerance > 0.0) {
        return Err(EquilibriumError::InvalidOptions(format!(
            "tolerance must be positive, got {}",
            options.tolerance
        )));
    }
    if options.max_iterations == 0 {
        return Err(EquilibriumError::InvalidOptions(
            "max_iterations must be at least 1".into(),
        ));
    }
    if !options.start.is_valid() {
        return Err(EquilibriumError::InvalidOptions(format!(
            "start profile outside [0,1]: {:?}",
            options.start.flat()
        )));
    }
    if !(beta > 0.0) || !(cost_cap > 0.0) {
        return Err(EquilibriumError::InvalidOptions(format!(
            "benefit and cost cap must be positive, got beta={beta}, cost_cap={cost_cap}"
        )));
    }

    let mut t = options.start;
    let mut best = (f64::INFINITY, t, [[0.0; 2]; 3]);
    let mut outcome: Option<(StrategyProfile, f64, u32, [[f64; 2]; 3])> = None;
    for iter in 1..=options.max_iterations {
        let pi = pivot_vector(config, rule, &t, &options.enumeration)?;
        let (br, raw) = response_pair(&pi, beta, cost_cap);
        let residual = max_gap(&t, &br);
        if residual < best.0 {
            best = (residual, t, raw);
        }
        if residual <= options.tolerance {
            outcome = Some((t, residual, iter, raw));
            break;
        }
        for g in 0..3 {
            for i in 0..2 {
                t.t[g][i] =
                    (1.0 - options.damping) * t.t[g][i] + options.damping * br.t[g][i];
            }
        }
    }

    let (mut profile, mut residual, iterations, mut raw, mut converged) = match outcome {
        Some((p, r, it, raw)) => (p, r, it, raw, true),
        None => (best.1, best.0, options.max_iterations, best.2, false),
    };

    // Snap converged components resting against a binding corner.
    if converged {
        let mut snapped = false;
        for g in 0..3 {
            for i in 0..2 {
                if raw[g][i] > 1.0 && (1.0 - profile.t[g][i]).abs() <= options.tolerance {
                    snapped |= profile.t[g][i] != 1.0;
                    profile.t[g][i] = 1.0;
                } else if raw[g][i] < 0.0 && profile.t[g][i].abs() <= options.tolerance {
                    snapped |= profile.t[g][i] != 0.0;
                    profile.t[g][i] = 0.0;
                }
            }
        }
        if snapped {
            let pi = pivot_vector(config, rule, &profile, &options.enumeration)?;
            let (br, new_raw) = response_pair(&pi, beta, cost_cap);
            raw = new_raw;
            residual = max_gap(&profile, &br);
            converged = residual <= options.tolerance;
        }
    }

    let mut corner_flags = [[false; 2]; 3];
    for g in 0..3 {
        for i in 0..2 {
            let at_corner = profile.t[g][i] == 0.0 || profile.t[g][i] == 1.0;
            corner_flags[g][i] = at_corner && !(0.0..=1.0).contains(&raw[g][i]);
        }
    }

    Ok(EquilibriumResult {
        profile,
        residual,
        iterations,
        converged,
        corner_flags,
    })
}

/// Run the solver from every start in `grid`³ (one value per group, applied
/// to both candidates) and return the distinct converged fixed points,
/// sorted by t_{1,A}. Results closer than 1e-3 componentwise are considered
/// the same fixed point.
pub fn find_all_fixed_points(
    config: &ElectorateConfig,
    rule: Rule,
    beta: f64,
    cost_cap: f64,
    grid: &[f64],
    options: &SolveOptions,
) -> Result<Vec<EquilibriumResult>, EquilibriumError> {
    if grid.is_empty() {
        return Err(EquilibriumError::InvalidOptions(
            "start grid must be non-empty".into(),
        ));
    }
    if grid.iter().any(|x| !(0.0..=1.0).contains(x) || x.is_nan()) {
        return Err(EquilibriumError::InvalidOptions(format!(
            "start grid values must lie in [0,1]: {grid:?}"
        )));
    }
    let mut results: Vec<EquilibriumResult> = Vec::new();
    for &x1 in grid {
        for &x2 in grid {
            for &x3 in grid {
                let mut opts = *options;
                opts.start = StrategyProfile {
                    t: [[x1; 2], [x2; 2], [x3; 2]],
                };
                let result = solve(config, rule, beta, cost_cap, &opts)?;
                if !result.converged {
                    continue;
                }
                let duplicate = results
                    .iter()
                    .any(|r| max_gap(&r.profile, &result.profile) <= 1e-3);
                if !duplicate {
                    results.push(result);
                }
            }
        }
    }
    results.sort_by(|a, b| a.profile.t[0][0].total_cmp(&b.profile.t[0][0]));
    Ok(results)
}
