//! Seeded Monte Carlo simulation of full elections.
//!
//! Each trial draws, in a fixed order: every voter's preferred candidate and
//! voting cost (group by group), then one tie coin per group, then one
//! overall tie coin. All draws come from a ChaCha8 stream keyed by the seed
//! and the trial index, so trial `k` produces the same election no matter
//! when or on which thread it runs. The aggregator splits trials into
//! fixed-size chunks, sums each chunk sequentially, and merges the chunk
//! sums in index order with compensated summation — reports are therefore
//! bit-identical across thread counts.
//!
//! Weight ties are resolved by the drawn coins (not by half credits), so
//! every trial has a definite winner and well-defined realized payoffs;
//! the expectations coincide with the analytic half-credit convention.

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Candidate, ElectorateConfig, ModelError, Rule, StrategyProfile};
use crate::util::Accumulator;

/// How voting costs are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostModel {
    /// Uniform on the interval [0, c̄] (the theoretical model; default).
    Continuous,
    /// Uniform on the integers {0, 1, …, c̄} (the laboratory design).
    /// A cutpoint t then yields vote probability (⌊t·c̄⌋ + 1)/(c̄ + 1):
    /// with c̄ = 200 and t·200 integer, that is (t·200 + 1)/201.
    Discrete,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SimOptions {
    pub trials: u64,
    pub seed: u64,
    pub cost_model: CostModel,
}

impl Default for SimOptions {
    fn default() -> Self {
        Self {
            trials: 100_000,
            seed: 0,
            cost_model: CostModel::Continuous,
        }
    }
}

#[derive(Debug, Error)]
pub enum SimError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("trials must be at least 1")]
    ZeroTrials,
}

/// Sample mean with its standard error (sample standard deviation / √trials).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct SimReport {
    pub win_prob_a: Estimate,
    /// Realized welfare per type in units of the benefit: per trial,
    /// credit_I − cost_paid_{g,I} / (n_g·p_{g,I}·β). The cost divisor is the
    /// expected type mass, which makes the estimator unbiased for the
    /// analytic expected welfare; a zero-mass type contributes no cost.
    pub welfare: [[Estimate; 2]; 3],
    /// Mean share of group g's members casting a vote of type (g,I);
    /// expectation p_{g,I}·t_{g,I}.
    pub turnout: [[f64; 2]; 3],
    pub trials: u64,
}

/// One realized election.
#[derive(Clone, Copy, Debug)]
pub struct TrialOutcome {
    /// 1.0 if A won this trial, 0.0 otherwise (ties already coin-resolved).
    pub credit_a: f64,
    /// Σ over the type's realized members of β·win_indicator − cost·voted.
    pub payoff_sums: [[f64; 2]; 3],
    /// Realized supporter counts per type.
    pub members: [[u32; 2]; 3],
    /// Votes cast per type.
    pub votes: [[u32; 2]; 3],
    /// Total cost paid per type (members who voted).
    pub cost_paid: [[f64; 2]; 3],
}

#[derive(Clone, Copy, Debug, Default)]
struct Draws {
    members: [[u32; 2]; 3],
    votes: [[u32; 2]; 3],
    cost_paid: [[f64; 2]; 3],
    group_coins: [bool; 3],
    overall_coin: bool,
}

/// Draw a full trial in the canonical order. `exclude_first_of` removes the
/// first voter of that group from the aggregates (the paired pivot estimator
/// replaces her with a forced focal voter) while still consuming her draws.
fn draw_trial(
    config: &ElectorateConfig,
    profile: &StrategyProfile,
    cost_model: CostModel,
    exclude_first_of: Option<usize>,
    rng: &mut impl Rng,
) -> Draws {
    let mut draws = Draws::default();
    for g in 0..3 {
        let p = config.support_rates[g];
        for v in 0..config.group_sizes[g] {
            let prefers_a = rng.gen::<f64>() < p;
            let cost = match cost_model {
                CostModel::Continuous => rng.gen::<f64>() * config.cost_cap,
                CostModel::Discrete => {
                    rng.gen_range(0..=config.cost_cap.round() as u32) as f64
                }
            };
            if exclude_first_of == Some(g) && v == 0 {
                continue;
            }
            let i = if prefers_a { 0 } else { 1 };
            draws.members[g][i] += 1;
            if cost <= profile.t[g][i] * config.cost_cap {
                draws.votes[g][i] += 1;
                draws.cost_paid[g][i] += cost;
            }
        }
    }
    for coin in &mut draws.group_coins {
        *coin = rng.gen_bool(0.5);
    }
    draws.overall_coin = rng.gen_bool(0.5);
    draws
}

/// Winner credit for A from realized votes: group weights by the rule (group
/// ties under WTA go to the group's coin), overall ties to the overall coin.
/// `extra_vote` injects the forced focal vote of the paired estimator.
fn resolve(
    config: &ElectorateConfig,
    rule: Rule,
    votes: &[[u32; 2]; 3],
    extra_vote: Option<(usize, Candidate)>,
    group_coins: &[bool; 3],
    overall_coin: bool,
) -> f64 {
    let mut total_a = Rational64::from_integer(0);
    for g in 0..3 {
        let n = config.group_sizes[g] as i64;
        let mut a = votes[g][0];
        let mut b = votes[g][1];
        if let Some((eg, cand)) = extra_vote {
            if eg == g {
                match cand {
                    Candidate::A => a += 1,
                    Candidate::B => b += 1,
                }
            }
        }
        total_a += match rule {
            Rule::Wta => {
                let a_takes_all = if a != b { a > b } else { group_coins[g] };
                if a_takes_all {
                    Rational64::from_integer(n)
                } else {
                    Rational64::from_integer(0)
                }
            }
            Rule::Pr => {
                let cast = a + b;
                if cast == 0 {
                    Rational64::new(n, 2)
                } else {
                    Rational64::new(n * a as i64, cast as i64)
                }
            }
        };
    }
    let total = Rational64::from_integer(config.total_weight() as i64);
    match (total_a * 2).cmp(&total) {
        std::cmp::Ordering::Greater => 1.0,
        std::cmp::Ordering::Less => 0.0,
        std::cmp::Ordering::Equal => {
            if overall_coin {
                1.0
            } else {
                0.0
            }
        }
    }
}

/// Simulate one election with the given generator state.
pub fn simulate_election(
    config: &ElectorateConfig,
    rule: Rule,
    profile: &StrategyProfile,
    cost_model: CostModel,
    rng: &mut impl Rng,
) -> TrialOutcome {
    let draws = draw_trial(config, profile, cost_model, None, rng);
    let credit_a = resolve(
        config,
        rule,
        &draws.votes,
        None,
        &draws.group_coins,
        draws.overall_coin,
    );
    let mut payoff_sums = [[0.0; 2]; 3];
    for g in 0..3 {
        for i in 0..2 {
            let credit = if i == 0 { credit_a } else { 1.0 - credit_a };
            payoff_sums[g][i] =
                draws.members[g][i] as f64 * config.benefit * credit - draws.cost_paid[g][i];
        }
    }
    TrialOutcome {
        credit_a,
        payoff_sums,
        members: draws.members,
        votes: draws.votes,
        cost_paid: draws.cost_paid,
    }
}

const CHUNK: u64 = 4096;

#[derive(Clone, Copy, Default)]
struct ChunkStats {
    win: f64,
    welfare: [[f64; 2]; 3],
    welfare_sq: [[f64; 2]; 3],
    turnout: [[f64; 2]; 3],
}

fn validate(config: &ElectorateConfig, profile: &StrategyProfile) -> Result<(), ModelError> {
    config.validate()?;
    if !profile.is_valid() {
        return Err(ModelError::InvalidCutpoint(profile.flat()));
    }
    Ok(())
}

fn stream_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn finish(sum: f64, sum_sq: f64, trials: u64) -> Estimate {
    let t = trials as f64;
    let mean = sum / t;
    let std_error = if trials > 1 {
        let var = ((sum_sq - sum * sum / t) / (t - 1.0)).max(0.0);
        (var / t).sqrt()
    } else {
        0.0
    };
    Estimate { mean, std_error }
}

/// Average `simulate_election` over `options.trials` trials. Deterministic
/// for a fixed (seed, trials) regardless of how rayon schedules the chunks.
pub fn estimate(
    config: &ElectorateConfig,
    rule: Rule,
    profile: &StrategyProfile,
    options: &SimOptions,
) -> Result<SimReport, SimError> {
    validate(config, profile)?;
    if options.trials == 0 {
        return Err(SimError::ZeroTrials);
    }
    let beta = config.benefit;
    let chunks = options.trials.div_ceil(CHUNK);
    let stats: Vec<ChunkStats> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut s = ChunkStats::default();
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(options.trials);
            for trial in lo..hi {
                let mut rng = stream_rng(options.seed, trial);
                let out = simulate_election(config, rule, profile, options.cost_model, &mut rng);
                s.win += out.credit_a;
                for g in 0..3 {
                    for (i, cand) in Candidate::BOTH.into_iter().enumerate() {
                        let credit = if i == 0 { out.credit_a } else { 1.0 - out.credit_a };
                        let mass = config.type_mass(g, cand) * beta;
                        let x = if mass > 0.0 {
                            credit - out.cost_paid[g][i] / mass
                        } else {
                            credit
                        };
                        s.welfare[g][i] += x;
                        s.welfare_sq[g][i] += x * x;
                        s.turnout[g][i] +=
                            out.votes[g][i] as f64 / config.group_sizes[g] as f64;
                    }
                }
            }
            s
        })
        .collect();

    let mut win = Accumulator::new();
    let mut welfare = [[(Accumulator::new(), Accumulator::new()); 2]; 3];
    let mut turnout = [[Accumulator::new(); 2]; 3];
    for s in &stats {
        win.add(s.win);
        for g in 0..3 {
            for i in 0..2 {
                welfare[g][i].0.add(s.welfare[g][i]);
                welfare[g][i].1.add(s.welfare_sq[g][i]);
                turnout[g][i].add(s.turnout[g][i]);
            }
        }
    }

    let trials = options.trials;
    let win_sum = win.total();
    // Credits are 0/1, so the sum of squares equals the sum.
    let win_prob_a = finish(win_sum, win_sum, trials);
    let mut welfare_out = [[Estimate::default(); 2]; 3];
    let mut turnout_out = [[0.0; 2]; 3];
    for g in 0..3 {
        for i in 0..2 {
            welfare_out[g][i] = finish(welfare[g][i].0.total(), welfare[g][i].1.total(), trials);
            turnout_out[g][i] = turnout[g][i].total() / trials as f64;
        }
    }
    Ok(SimReport {
        win_prob_a,
        welfare: welfare_out,
        turnout: turnout_out,
        trials,
    })
}

/// Paired pivot estimator: per trial, all non-focal draws are shared and the
/// focal group-`g` voter of type `candidate` is forced to vote and then to
/// abstain; the estimate is the mean credit difference. Tie coins are shared
/// across the two resolutions, so the per-trial difference lies in {0, 1} and
/// a dominated voter yields exactly zero with zero variance.
pub fn estimate_pivot(
    config: &ElectorateConfig,
    rule: Rule,
    profile: &StrategyProfile,
    g: usize,
    candidate: Candidate,
    options: &SimOptions,
) -> Result<Estimate, SimError> {
    validate(config, profile)?;
    if g >= 3 {
        return Err(SimError::Model(ModelError::InvalidGroupIndex(g)));
    }
    if options.trials == 0 {
        return Err(SimError::ZeroTrials);
    }
    let chunks = options.trials.div_ceil(CHUNK);
    let stats: Vec<(f64, f64)> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut sum = 0.0;
            let mut sum_sq = 0.0;
            let lo = chunk * CHUNK;
            let hi = (lo + CHUNK).min(options.trials);
            for trial in lo..hi {
                let mut rng = stream_rng(options.seed, trial);
                let draws = draw_trial(config, profile, options.cost_model, Some(g), &mut rng);
                let voted = resolve(
                    config,
                    rule,
                    &draws.votes,
                    Some((g, candidate)),
                    &draws.group_coins,
                    draws.overall_coin,
                );
                let abstained = resolve(
                    config,
                    rule,
                    &draws.votes,
                    None,
                    &draws.group_coins,
                    draws.overall_coin,
                );
                let x = match candidate {
                    Candidate::A => voted - abstained,
                    Candidate::B => (1.0 - voted) - (1.0 - abstained),
                };
                sum += x;
                sum_sq += x * x;
            }
            (sum, sum_sq)
        })
        .collect();
    let mut sum = Accumulator::new();
    let mut sum_sq = Accumulator::new();
    for &(s, q) in &stats {
        sum.add(s);
        sum_sq.add(q);
    }
    Ok(finish(sum.total(), sum_sq.total(), options.trials))
}
