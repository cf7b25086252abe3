//! Brute-force oracle that enumerates every voter's state individually.
//!
//! Each voter independently votes for A, votes for B, or abstains; this
//! module walks the full product space (3^m leaves for m voters) and derives
//! the group weights and the winner from first principles at every leaf. It
//! deliberately shares none of the tally-distribution machinery with
//! [`crate::pivot`], so agreement between the two is a real cross-check and
//! not a tautology. Only practical for small electorates (say m ≤ 16).

use num_rational::Rational64;

use crate::model::{
    Candidate, ElectorateConfig, ModelError, Rule, StrategyProfile, TieConvention,
};

/// Up to two (weight, probability) outcomes for one group, re-derived here
/// rather than imported.
struct Branches {
    items: [(Rational64, f64); 2],
    len: usize,
}

fn weight_branches(
    n: u32,
    votes_for: u32,
    votes_against: u32,
    rule: Rule,
    tie: TieConvention,
) -> Branches {
    let full = Rational64::from_integer(n as i64);
    let zero = Rational64::from_integer(0);
    let single = |w| Branches {
        items: [(w, 1.0), (zero, 0.0)],
        len: 1,
    };
    match rule {
        Rule::Wta => {
            if votes_for > votes_against {
                single(full)
            } else if votes_against > votes_for {
                single(zero)
            } else {
                match tie {
                    TieConvention::CoinFlip => Branches {
                        items: [(full, 0.5), (zero, 0.5)],
                        len: 2,
                    },
                    TieConvention::HalfSplit => single(full / 2),
                }
            }
        }
        Rule::Pr => {
            let cast = votes_for + votes_against;
            if cast == 0 {
                single(full / 2)
            } else {
                single(Rational64::new(
                    n as i64 * votes_for as i64,
                    cast as i64,
                ))
            }
        }
    }
}

/// Recursively assign a state to each remaining voter, accumulating the
/// candidate's expected win credit at the leaves.
fn walk(
    voters: &[(usize, f64, f64)],
    counts: &mut [[u32; 2]; 3],
    prob: f64,
    config: &ElectorateConfig,
    rule: Rule,
    tie: TieConvention,
    candidate: Candidate,
    credit_sum: &mut f64,
) {
    if let Some(&(g, vote_a, vote_b)) = voters.first() {
        let rest = &voters[1..];
        if vote_a > 0.0 {
            counts[g][0] += 1;
            walk(rest, counts, prob * vote_a, config, rule, tie, candidate, credit_sum);
            counts[g][0] -= 1;
        }
        if vote_b > 0.0 {
            counts[g][1] += 1;
            walk(rest, counts, prob * vote_b, config, rule, tie, candidate, credit_sum);
            counts[g][1] -= 1;
        }
        let abstain = 1.0 - vote_a - vote_b;
        if abstain > 0.0 {
            walk(rest, counts, prob * abstain, config, rule, tie, candidate, credit_sum);
        }
        return;
    }

    // Leaf: realized counts for all three groups. Award weights (with coin
    // branches where needed) and compare the candidate's total to half the
    // electorate weight.
    let total = Rational64::from_integer(config.total_weight() as i64);
    let branches: Vec<Branches> = (0..3)
        .map(|g| {
            let (f, a) = match candidate {
                Candidate::A => (counts[g][0], counts[g][1]),
                Candidate::B => (counts[g][1], counts[g][0]),
            };
            weight_branches(config.group_sizes[g], f, a, rule, tie)
        })
        .collect();
    for &(w1, p1) in &branches[0].items[..branches[0].len] {
        for &(w2, p2) in &branches[1].items[..branches[1].len] {
            for &(w3, p3) in &branches[2].items[..branches[2].len] {
                let weight = w1 + w2 + w3;
                let credit = match (weight * 2).cmp(&total) {
                    std::cmp::Ordering::Greater => 1.0,
                    std::cmp::Ordering::Equal => 0.5,
                    std::cmp::Ordering::Less => 0.0,
                };
                if credit > 0.0 {
                    *credit_sum += prob * p1 * p2 * p3 * credit;
                }
            }
        }
    }
}

fn population(config: &ElectorateConfig, profile: &StrategyProfile) -> Vec<(usize, f64, f64)> {
    let mut voters = Vec::with_capacity(config.total_weight() as usize);
    for g in 0..3 {
        let p = config.support_rates[g];
        let vote_a = p * profile.get(g, Candidate::A);
        let vote_b = (1.0 - p) * profile.get(g, Candidate::B);
        for _ in 0..config.group_sizes[g] {
            voters.push((g, vote_a, vote_b));
        }
    }
    voters
}

/// Probability that `candidate` wins, by exhaustive voter-state enumeration.
pub fn win_probability(
    config: &ElectorateConfig,
    rule: Rule,
    profile: &StrategyProfile,
    candidate: Candidate,
    tie: TieConvention,
) -> Result<f64, ModelError> {
    config.validate()?;
    if !profile.is_valid() {
        return Err(ModelError::InvalidCutpoint(profile.flat()));
    }
    let voters = population(config, profile);
    let mut counts = [[0u32; 2]; 3];
    let mut credit = 0.0;
    walk(
        &voters, &mut counts, 1.0, config, rule, tie, candidate, &mut credit,
    );
    Ok(credit)
}

pub fn win_probability_a(
    config: &ElectorateConfig,
    rule: Rule,
    profile: &StrategyProfile,
    tie: TieConvention,
) -> Result<f64, ModelError> {
    win_probability(config, rule, profile, Candidate::A, tie)
}

/// Pivot probability of a focal group-`g` supporter of `candidate`: expected
/// win credit of her candidate if she votes minus if she abstains, with the
/// other voters enumerated exhaustively.
pub fn pivot_probability(
    config: &ElectorateConfig,
    rule: Rule,
    profile: &StrategyProfile,
    g: usize,
    candidate: Candidate,
    tie: TieConvention,
) -> Result<f64, ModelError> {
    config.validate()?;
    if !profile.is_valid() {
        return Err(ModelError::InvalidCutpoint(profile.flat()));
    }
    if g >= 3 {
        return Err(ModelError::InvalidGroupIndex(g));
    }
    // Peers: the full population minus one group-g voter.
    let mut voters = population(config, profile);
    let focal_at = voters.iter().position(|&(h, _, _)| h == g).expect("n_g >= 1");
    voters.remove(focal_at);

    let mut votes = 0.0;
    let mut counts = [[0u32; 2]; 3];
    counts[g][candidate.idx()] = 1;
    walk(
        &voters, &mut counts, 1.0, config, rule, tie, candidate, &mut votes,
    );

    let mut abstains = 0.0;
    let mut counts = [[0u32; 2]; 3];
    walk(
        &voters, &mut counts, 1.0, config, rule, tie, candidate, &mut abstains,
    );
    Ok(votes - abstains)
}
