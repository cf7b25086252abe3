//! Exact pivot and win probabilities by enumeration of the trinomial group
//! tallies induced by cutpoint strategies.
//!
//! A voter in group `g` votes for A with probability `p_g * t_{g,A}`, for B
//! with probability `(1 - p_g) * t_{g,B}`, and abstains otherwise, all
//! independently, so each group tally follows a trinomial law. Group weights
//! follow from the aggregation rule and a candidate wins on a strict majority
//! of the total weight, with an exact tie worth credit ½ (a fair coin).
//!
//! The pivot probability of a type is the marginal effect of its vote: the
//! expected win credit of its candidate when the focal voter votes minus when
//! she abstains, with the remaining `n_g - 1` group members and the other two
//! groups integrated out exactly. Everything here is an exact sum over the
//! full joint support; nothing is sampled.
//!
//! Candidate B's side is computed by relabelling: swapping the per-group
//! (vote-for-A, vote-for-B) probability pairs turns a B-focal question into
//! an A-focal one. Because the swap moves the already-rounded products
//! `p*t_A` and `(1-p)*t_B` without touching them, label-swap symmetry holds
//! bit for bit whenever `1 - p` is exact.

use std::borrow::Cow;
use std::collections::BTreeMap;

use num_rational::Rational64;
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};

use crate::model::{
    allocation_branches, Candidate, ElectorateConfig, GroupTally, ModelError, Rule,
    StrategyProfile, TieConvention,
};
use crate::util::Accumulator;

/// The six pivot probabilities, indexed `[group][candidate]` (0-based groups).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PivotVector {
    pub pi: [[f64; 2]; 3],
}

impl PivotVector {
    pub fn get(&self, g: usize, candidate: Candidate) -> f64 {
        self.pi[g][candidate.idx()]
    }

    /// Flat order (π1A, π1B, π2A, π2B, π3A, π3B).
    pub fn flat(&self) -> [f64; 6] {
        [
            self.pi[0][0], self.pi[0][1], self.pi[1][0], self.pi[1][1], self.pi[2][0],
            self.pi[2][1],
        ]
    }
}

/// Options for the enumeration backend.
#[derive(Clone, Copy, Debug)]
pub struct EnumerationOptions {
    /// Resolution of tied winner-take-all group counts.
    pub tie: TieConvention,
    /// Drop tally outcomes with probability mass below this threshold.
    /// 0 disables pruning (the default; exact enumeration).
    pub prune_threshold: f64,
}

impl Default for EnumerationOptions {
    fn default() -> Self {
        Self {
            tie: TieConvention::CoinFlip,
            prune_threshold: 0.0,
        }
    }
}

impl EnumerationOptions {
    pub fn with_tie(tie: TieConvention) -> Self {
        Self {
            tie,
            ..Self::default()
        }
    }
}

/// Exact distribution of one group's (votes for A, votes for B) tally.
#[derive(Clone, Debug)]
pub struct TallyDistribution {
    pub group: usize,
    /// Support entries only; probabilities sum to 1 within 1e-12.
    pub entries: Vec<(GroupTally, f64)>,
}

/// Trinomial tally law for `n` voters with support rate `p` and cutpoints
/// `t_a`, `t_b`: each voter votes A with probability `p*t_a`, B with
/// probability `(1-p)*t_b`, and abstains otherwise.
pub fn tally_distribution(n: u32, p: f64, t_a: f64, t_b: f64) -> TallyDistribution {
    debug_assert!((0.0..=1.0).contains(&p));
    debug_assert!((0.0..=1.0).contains(&t_a) && (0.0..=1.0).contains(&t_b));
    let mut entries = Vec::new();
    for_each_tally(n, p * t_a, (1.0 - p) * t_b, 0.0, |a, b, prob| {
        entries.push((
            GroupTally {
                group: 0,
                votes_a: a,
                votes_b: b,
            },
            prob,
        ));
    });
    TallyDistribution { group: 0, entries }
}

/// Per-group (vote-for-A, vote-for-B) probabilities of a single voter under
/// the profile: `(p_g * t_{g,A}, (1 - p_g) * t_{g,B})`.
pub fn vote_probabilities(
    config: &ElectorateConfig,
    profile: &StrategyProfile,
) -> [(f64, f64); 3] {
    let mut qs = [(0.0, 0.0); 3];
    for g in 0..3 {
        let p = config.support_rates[g];
        qs[g] = (
            p * profile.get(g, Candidate::A),
            (1.0 - p) * profile.get(g, Candidate::B),
        );
    }
    qs
}

/// Probability that candidate A wins (exact ties counted at ½) under the
/// profile, by exact enumeration of the three group tallies.
pub fn win_probability_a(
    config: &ElectorateConfig,
    rule: Rule,
    profile: &StrategyProfile,
    options: &EnumerationOptions,
) -> Result<f64, ModelError> {
    win_probability(config, rule, profile, Candidate::A, options)
}

/// Win probability of either candidate; B is computed by relabelling.
pub fn win_probability(
    config: &ElectorateConfig,
    rule: Rule,
    profile: &StrategyProfile,
    candidate: Candidate,
    options: &EnumerationOptions,
) -> Result<f64, ModelError> {
    validate(config, profile)?;
    let qs = oriented_vote_probabilities(config, profile, candidate);
    Ok(win_probability_core(
        &config.group_sizes,
        &qs,
        rule,
        options,
    ))
}

/// π_{g,I}: expected win credit of candidate `I` when a focal group-`g` voter
/// of type `I` votes, minus the same expectation when she abstains.
pub fn pivot_probability(
    config: &ElectorateConfig,
    rule: Rule,
    profile: &StrategyProfile,
    g: usize,
    candidate: Candidate,
    options: &EnumerationOptions,
) -> Result<f64, ModelError> {
    validate(config, profile)?;
    if g >= 3 {
        return Err(ModelError::InvalidGroupIndex(g));
    }
    let qs = oriented_vote_probabilities(config, profile, candidate);
    let dists = group_weight_dists(&config.group_sizes, &qs, rule, options);
    let total = config.total_weight();
    let table = rest_credit_table(&dists, g, total);
    Ok(focal_pivot(
        config.group_sizes[g],
        qs[g],
        rule,
        options,
        &table,
    ))
}

/// All six pivot probabilities. Shares the per-candidate weight tables across
/// the three groups, so this is cheaper than six `pivot_probability` calls.
pub fn pivot_vector(
    config: &ElectorateConfig,
    rule: Rule,
    profile: &StrategyProfile,
    options: &EnumerationOptions,
) -> Result<PivotVector, ModelError> {
    validate(config, profile)?;
    let qs = vote_probabilities(config, profile);
    let side_a = pivots_one_side(&config.group_sizes, &qs, rule, options);
    let swapped = qs.map(|(qa, qb)| (qb, qa));
    let side_b = pivots_one_side(&config.group_sizes, &swapped, rule, options);
    Ok(PivotVector {
        pi: [
            [side_a[0], side_b[0]],
            [side_a[1], side_b[1]],
            [side_a[2], side_b[2]],
        ],
    })
}

fn validate(config: &ElectorateConfig, profile: &StrategyProfile) -> Result<(), ModelError> {
    config.validate()?;
    if !profile.is_valid() {
        return Err(ModelError::InvalidCutpoint(profile.flat()));
    }
    Ok(())
}

/// Vote-probability pairs seen from `candidate`'s perspective: for B, the
/// pairs are swapped so the enumeration core can always treat the focal
/// candidate as "A".
fn oriented_vote_probabilities(
    config: &ElectorateConfig,
    profile: &StrategyProfile,
    candidate: Candidate,
) -> [(f64, f64); 3] {
    let qs = vote_probabilities(config, profile);
    match candidate {
        Candidate::A => qs,
        Candidate::B => qs.map(|(qa, qb)| (qb, qa)),
    }
}

// ---------------------------------------------------------------------------
// Enumeration core. Everything below works on per-group pairs
// (vote-for-focal, vote-for-other) and rational weights for the focal side.
// ---------------------------------------------------------------------------

type WeightDist = BTreeMap<Rational64, f64>;

const PASCAL_ROWS: usize = 128;

static PASCAL: Lazy<Vec<Vec<f64>>> = Lazy::new(|| {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(PASCAL_ROWS);
    rows.push(vec![1.0]);
    for n in 1..PASCAL_ROWS {
        let prev = &rows[n - 1];
        let mut row = vec![1.0; n + 1];
        for k in 1..n {
            row[k] = prev[k - 1] + prev[k];
        }
        rows.push(row);
    }
    rows
});

fn binomial_row(n: usize) -> Cow<'static, [f64]> {
    if n < PASCAL_ROWS {
        Cow::Borrowed(&PASCAL[n])
    } else {
        let mut row = vec![1.0];
        for m in 1..=n {
            let mut next = vec![1.0; m + 1];
            for k in 1..m {
                next[k] = row[k - 1] + row[k];
            }
            row = next;
        }
        Cow::Owned(row)
    }
}

/// Visit every tally (a, b) of `n` voters with per-voter vote probabilities
/// (`vote_a`, `vote_b`), passing the exact trinomial probability. Zero-mass
/// entries and entries below `prune` are skipped.
fn for_each_tally<F: FnMut(u32, u32, f64)>(
    n: u32,
    vote_a: f64,
    vote_b: f64,
    prune: f64,
    mut f: F,
) {
    let abstain = (1.0 - vote_a - vote_b).max(0.0);
    let row_n = binomial_row(n as usize);
    for a in 0..=n {
        let rest = n - a;
        let a_factor = row_n[a as usize] * vote_a.powi(a as i32);
        if a_factor == 0.0 {
            continue;
        }
        let row_rest = binomial_row(rest as usize);
        for b in 0..=rest {
            let prob = a_factor
                * row_rest[b as usize]
                * vote_b.powi(b as i32)
                * abstain.powi((rest - b) as i32);
            if prob == 0.0 || prob < prune {
                continue;
            }
            f(a, b, prob);
        }
    }
}

/// Distribution of the focal candidate's weight from one full group.
fn group_weight_dist(
    n: u32,
    q: (f64, f64),
    rule: Rule,
    options: &EnumerationOptions,
) -> WeightDist {
    let mut dist = WeightDist::new();
    for_each_tally(n, q.0, q.1, options.prune_threshold, |a, b, prob| {
        for (w, branch_prob) in allocation_branches(a, b, n, rule, options.tie).iter() {
            *dist.entry(w).or_insert(0.0) += prob * branch_prob;
        }
    });
    dist
}

fn group_weight_dists(
    sizes: &[u32; 3],
    qs: &[(f64, f64); 3],
    rule: Rule,
    options: &EnumerationOptions,
) -> [WeightDist; 3] {
    [0, 1, 2].map(|g| group_weight_dist(sizes[g], qs[g], rule, options))
}

fn convolve(d1: &WeightDist, d2: &WeightDist) -> WeightDist {
    let mut out = WeightDist::new();
    for (&w1, &p1) in d1 {
        for (&w2, &p2) in d2 {
            *out.entry(w1 + w2).or_insert(0.0) += p1 * p2;
        }
    }
    out
}

/// Majority-credit lookup against a fixed "rest of the electorate" weight
/// distribution: credit(w) = P(rest + w > N/2) + ½·P(rest + w = N/2).
struct CreditTable {
    weights: Vec<Rational64>,
    probs: Vec<f64>,
    /// suffix[i] = Σ_{j ≥ i} probs[j]
    suffix: Vec<f64>,
    half: Rational64,
}

impl CreditTable {
    fn new(dist: &WeightDist, total_weight: u32) -> Self {
        let weights: Vec<Rational64> = dist.keys().copied().collect();
        let probs: Vec<f64> = dist.values().copied().collect();
        let mut suffix = vec![0.0; weights.len() + 1];
        for i in (0..weights.len()).rev() {
            suffix[i] = suffix[i + 1] + probs[i];
        }
        Self {
            weights,
            probs,
            suffix,
            half: Rational64::new(total_weight as i64, 2),
        }
    }

    fn credit(&self, w: Rational64) -> f64 {
        let threshold = self.half - w;
        let i = self.weights.partition_point(|&x| x <= threshold);
        let mut credit = self.suffix[i];
        if i > 0 && self.weights[i - 1] == threshold {
            credit += 0.5 * self.probs[i - 1];
        }
        credit
    }
}

/// Credit table for the convolution of the two groups other than `g`.
fn rest_credit_table(dists: &[WeightDist; 3], g: usize, total_weight: u32) -> CreditTable {
    let (i, j) = match g {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    };
    CreditTable::new(&convolve(&dists[i], &dists[j]), total_weight)
}

/// Marginal effect of the focal vote, enumerating the `n - 1` peers. The
/// focal vote adds one count to the focal candidate before allocation.
fn focal_pivot(
    n: u32,
    q: (f64, f64),
    rule: Rule,
    options: &EnumerationOptions,
    rest: &CreditTable,
) -> f64 {
    let mut acc = Accumulator::new();
    for_each_tally(n - 1, q.0, q.1, options.prune_threshold, |a, b, prob| {
        let mut credit_vote = 0.0;
        for (w, bp) in allocation_branches(a + 1, b, n, rule, options.tie).iter() {
            credit_vote += bp * rest.credit(w);
        }
        let mut credit_abstain = 0.0;
        for (w, bp) in allocation_branches(a, b, n, rule, options.tie).iter() {
            credit_abstain += bp * rest.credit(w);
        }
        acc.add(prob * (credit_vote - credit_abstain));
    });
    // A vote for the focal candidate can only help her (weights are monotone
    // in her count under both rules), so the true value is nonnegative; the
    // clamp only removes summation noise.
    acc.total().clamp(0.0, 1.0)
}

fn pivots_one_side(
    sizes: &[u32; 3],
    qs: &[(f64, f64); 3],
    rule: Rule,
    options: &EnumerationOptions,
) -> [f64; 3] {
    let dists = group_weight_dists(sizes, qs, rule, options);
    let total: u32 = sizes.iter().sum();
    [0, 1, 2].map(|g| {
        let table = rest_credit_table(&dists, g, total);
        focal_pivot(sizes[g], qs[g], rule, options, &table)
    })
}

fn win_probability_core(
    sizes: &[u32; 3],
    qs: &[(f64, f64); 3],
    rule: Rule,
    options: &EnumerationOptions,
) -> f64 {
    let dists = group_weight_dists(sizes, qs, rule, options);
    let joint = convolve(&convolve(&dists[0], &dists[1]), &dists[2]);
    let total: u32 = sizes.iter().sum();
    let table = CreditTable::new(&joint, total);
    table.credit(Rational64::from_integer(0)).clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(sizes: [u32; 3], rates: [f64; 3]) -> ElectorateConfig {
        ElectorateConfig::new(sizes, rates).unwrap()
    }

    fn lookup(dist: &TallyDistribution, a: u32, b: u32) -> Option<f64> {
        dist.entries
            .iter()
            .find(|(t, _)| t.votes_a == a && t.votes_b == b)
            .map(|&(_, p)| p)
    }

    #[test]
    fn tally_binomial_no_abstention() {
        let d = tally_distribution(2, 0.5, 1.0, 1.0);
        assert_eq!(d.entries.len(), 3);
        assert_eq!(lookup(&d, 2, 0), Some(0.25));
        assert_eq!(lookup(&d, 1, 1), Some(0.5));
        assert_eq!(lookup(&d, 0, 2), Some(0.25));
    }

    #[test]
    fn tally_nobody_votes() {
        let d = tally_distribution(5, 0.37, 0.0, 0.0);
        assert_eq!(d.entries.len(), 1);
        assert_eq!(lookup(&d, 0, 0), Some(1.0));
    }

    #[test]
    fn tally_one_sided_is_binomial() {
        let d = tally_distribution(3, 0.5, 1.0, 0.0);
        assert_eq!(d.entries.len(), 4);
        assert_eq!(lookup(&d, 0, 0), Some(0.125));
        assert_eq!(lookup(&d, 1, 0), Some(0.375));
        assert_eq!(lookup(&d, 2, 0), Some(0.375));
        assert_eq!(lookup(&d, 3, 0), Some(0.125));
    }

    #[test]
    fn tally_mass_and_support_bounds() {
        for &(n, p, ta, tb) in &[
            (21u32, 0.3, 0.55, 0.8),
            (35, 0.62, 0.17, 0.9),
            (7, 0.5, 1.0, 1.0),
            (63, 0.45, 0.73, 0.21),
        ] {
            let d = tally_distribution(n, p, ta, tb);
            let mass: f64 = d.entries.iter().map(|&(_, pr)| pr).sum();
            assert!(
                (mass - 1.0).abs() <= 1e-12,
                "mass {mass} for n={n}, p={p}, t=({ta},{tb})"
            );
            let bound = ((n + 1) * (n + 2) / 2) as usize;
            assert!(d.entries.len() <= bound);
            for &(t, pr) in &d.entries {
                assert!(t.votes_a + t.votes_b <= n);
                assert!(pr > 0.0);
            }
        }
    }

    #[test]
    fn tally_entry_matches_direct_product() {
        // Spot-check one entry against an independently coded product.
        let n = 21u32;
        let (p, ta, tb) = (0.3, 0.55, 0.8);
        let d = tally_distribution(n, p, ta, tb);
        let (qa, qb) = (p * ta, (1.0 - p) * tb);
        let q0 = 1.0 - qa - qb;
        // C(21,4)*C(17,9) computed exactly: 5985 * 24310.
        let expected = 5985.0 * 24310.0 * qa.powi(4) * qb.powi(9) * q0.powi(8);
        let got = lookup(&d, 4, 9).unwrap();
        assert!((got - expected).abs() <= 1e-12 * expected);
    }

    #[test]
    fn win_probability_symmetric_is_half() {
        let config = cfg([21, 21, 21], [0.5, 0.5, 0.5]);
        let profile = StrategyProfile::uniform(0.359);
        for rule in Rule::BOTH {
            let w = win_probability_a(&config, rule, &profile, &EnumerationOptions::default())
                .unwrap();
            assert!((w - 0.5).abs() <= 1e-12, "rule {rule}: {w}");
        }
    }

    #[test]
    fn win_probability_unanimous() {
        let config = cfg([1, 1, 1], [1.0, 1.0, 1.0]);
        let profile = StrategyProfile::uniform(1.0);
        let w =
            win_probability_a(&config, Rule::Wta, &profile, &EnumerationOptions::default())
                .unwrap();
        assert_eq!(w, 1.0);
    }

    #[test]
    fn win_probability_three_coins() {
        // Three single-voter groups, everyone votes, p = 1/2: eight equally
        // likely sign patterns, A wins on weight majority.
        let config = cfg([1, 1, 1], [0.5, 0.5, 0.5]);
        let profile = StrategyProfile::uniform(1.0);
        let w =
            win_probability_a(&config, Rule::Wta, &profile, &EnumerationOptions::default())
                .unwrap();
        assert!((w - 0.5).abs() <= 1e-15);
    }

    #[test]
    fn pivot_three_single_voter_groups() {
        // Focal A-supporter in group 1; everyone else votes for sure.
        // Voting: A wins iff at least one other group votes A (prob 3/4).
        // Abstaining: group 1 weight splits by coin, so each other-group
        // pattern leaves a fair outcome on average (prob 1/2).
        let config = cfg([1, 1, 1], [0.5, 0.5, 0.5]);
        let profile = StrategyProfile::uniform(1.0);
        let pi = pivot_probability(
            &config,
            Rule::Wta,
            &profile,
            0,
            Candidate::A,
            &EnumerationOptions::default(),
        )
        .unwrap();
        assert!((pi - 0.25).abs() <= 1e-15, "{pi}");
    }

    #[test]
    fn pivot_all_silent_closed_forms() {
        // Nobody else votes. Under WTA with coin ties and equal group sizes,
        // voting secures the own group and leaves two fair coins (win prob
        // 3/4); abstaining leaves three coins (1/2); the margin is 1/4.
        let coin = EnumerationOptions::default();
        let profile = StrategyProfile::uniform(0.0);
        for config in [
            cfg([21, 21, 21], [0.5, 0.5, 0.5]),
            cfg([5, 5, 5], [0.3, 0.5, 0.7]),
        ] {
            let v = pivot_vector(&config, Rule::Wta, &profile, &coin).unwrap();
            for x in v.flat() {
                assert!((x - 0.25).abs() <= 1e-15, "{x}");
            }
        }
        // With one group above half the total weight, that group's coin
        // decides the election alone: its members gain 1/2 by voting, the
        // dominated groups exactly nothing.
        let lopsided = cfg([7, 21, 35], [0.3, 0.5, 0.7]);
        let v = pivot_vector(&lopsided, Rule::Wta, &profile, &coin).unwrap();
        for g in 0..3 {
            let expected = if g == 2 { 0.5 } else { 0.0 };
            for i in 0..2 {
                let x = v.pi[g][i];
                assert!((x - expected).abs() <= 1e-15, "group {g}: {x}");
            }
        }
        // Under PR a zero-vote group splits evenly, so a single vote swings
        // the focal group entirely: win prob 1 versus an exact overall tie
        // (1/2) when abstaining. This holds for any group sizes.
        for config in [
            cfg([21, 21, 21], [0.5, 0.5, 0.5]),
            cfg([7, 21, 35], [0.3, 0.5, 0.7]),
        ] {
            let v = pivot_vector(&config, Rule::Pr, &profile, &coin).unwrap();
            for x in v.flat() {
                assert!((x - 0.5).abs() <= 1e-15, "{x}");
            }
        }
        // Half-split ties: abstaining leaves every group split, an exact
        // overall tie; voting wins outright. Margin 1/2.
        let split = EnumerationOptions::with_tie(TieConvention::HalfSplit);
        let v = pivot_vector(&cfg([21, 21, 21], [0.5, 0.5, 0.5]), Rule::Wta, &profile, &split)
            .unwrap();
        for x in v.flat() {
            assert!((x - 0.5).abs() <= 1e-15, "{x}");
        }
    }

    #[test]
    fn pivot_dominated_weight_is_exactly_zero() {
        // Groups 2 and 3 vote deterministically against A; their combined 42
        // weight beats any group-1 outcome, so a group-1 A-vote never matters.
        let config = cfg([1, 21, 21], [0.5, 0.0, 0.0]);
        let profile = StrategyProfile::from_flat([1.0, 1.0, 0.0, 1.0, 0.0, 1.0]);
        for rule in Rule::BOTH {
            let pi = pivot_probability(
                &config,
                rule,
                &profile,
                0,
                Candidate::A,
                &EnumerationOptions::default(),
            )
            .unwrap();
            assert_eq!(pi, 0.0, "rule {rule}");
        }
    }

    #[test]
    fn pivot_bounds_hold() {
        let config = cfg([3, 2, 3], [0.4, 0.6, 0.5]);
        let profile = StrategyProfile::from_flat([0.3, 0.7, 0.5, 0.2, 0.9, 0.1]);
        for rule in Rule::BOTH {
            for tie in [TieConvention::CoinFlip, TieConvention::HalfSplit] {
                let opts = EnumerationOptions::with_tie(tie);
                let v = pivot_vector(&config, rule, &profile, &opts).unwrap();
                for x in v.flat() {
                    assert!((0.0..=1.0).contains(&x));
                }
            }
        }
    }

    #[test]
    fn label_swap_is_bitwise_exact_for_dyadic_rates() {
        // 1 - p is exact for dyadic p, so the mirrored computation performs
        // identical floating-point operations.
        let config = cfg([5, 3, 4], [0.25, 0.5, 0.75]);
        let mirrored = config.mirrored();
        let profile = StrategyProfile::from_flat([0.3, 0.7, 0.55, 0.2, 0.9, 0.15]);
        let swapped = profile.swapped();
        for rule in Rule::BOTH {
            let fwd =
                pivot_vector(&config, rule, &profile, &EnumerationOptions::default()).unwrap();
            let rev =
                pivot_vector(&mirrored, rule, &swapped, &EnumerationOptions::default()).unwrap();
            for g in 0..3 {
                assert_eq!(fwd.get(g, Candidate::A), rev.get(g, Candidate::B));
                assert_eq!(fwd.get(g, Candidate::B), rev.get(g, Candidate::A));
            }
        }
    }

    #[test]
    fn label_swap_holds_for_general_rates() {
        let config = cfg([5, 3, 4], [0.3, 0.62, 0.55]);
        let mirrored = config.mirrored();
        let profile = StrategyProfile::from_flat([0.3, 0.7, 0.55, 0.2, 0.9, 0.15]);
        let swapped = profile.swapped();
        for rule in Rule::BOTH {
            let fwd =
                pivot_vector(&config, rule, &profile, &EnumerationOptions::default()).unwrap();
            let rev =
                pivot_vector(&mirrored, rule, &swapped, &EnumerationOptions::default()).unwrap();
            for g in 0..3 {
                assert!(
                    (fwd.get(g, Candidate::A) - rev.get(g, Candidate::B)).abs() <= 1e-12
                );
                assert!(
                    (fwd.get(g, Candidate::B) - rev.get(g, Candidate::A)).abs() <= 1e-12
                );
            }
        }
    }

    #[test]
    fn symmetric_config_gives_symmetric_pivots() {
        // p = 1/2 everywhere and t_A = t_B per group: the swapped pairs are
        // bitwise identical, so both sides must agree exactly.
        let config = cfg([7, 21, 21], [0.5, 0.5, 0.5]);
        let profile = StrategyProfile::from_flat([0.4, 0.4, 0.6, 0.6, 0.25, 0.25]);
        for rule in Rule::BOTH {
            let v = pivot_vector(&config, rule, &profile, &EnumerationOptions::default())
                .unwrap();
            for g in 0..3 {
                assert_eq!(v.get(g, Candidate::A), v.get(g, Candidate::B));
            }
        }
    }

    #[test]
    fn win_probability_decomposes_over_focal_voter() {
        // Integrating a focal group-g voter's action out of the full win
        // probability must recover it: P(win) = qa·E[win|votes A]
        // + qb·E[win|votes B] + (1-qa-qb)·E[win|abstains].
        let config = cfg([5, 3, 4], [0.4, 0.6, 0.5]);
        let profile = StrategyProfile::from_flat([0.3, 0.7, 0.5, 0.2, 0.9, 0.1]);
        let opts = EnumerationOptions::default();
        for rule in Rule::BOTH {
            let full = win_probability_a(&config, rule, &profile, &opts).unwrap();
            let qs = vote_probabilities(&config, &profile);
            let dists = group_weight_dists(&config.group_sizes, &qs, rule, &opts);
            let total = config.total_weight();
            for g in 0..3 {
                let table = rest_credit_table(&dists, g, total);
                let n = config.group_sizes[g];
                let (qa, qb) = qs[g];
                let credit_when = |da: u32, db: u32, a: u32, b: u32| {
                    let mut c = 0.0;
                    for (w, bp) in
                        allocation_branches(a + da, b + db, n, rule, opts.tie).iter()
                    {
                        c += bp * table.credit(w);
                    }
                    c
                };
                let mut mixed = Accumulator::new();
                for_each_tally(n - 1, qa, qb, 0.0, |a, b, prob| {
                    let vote_a = credit_when(1, 0, a, b);
                    let vote_b = credit_when(0, 1, a, b);
                    let abstain = credit_when(0, 0, a, b);
                    mixed.add(
                        prob * (qa * vote_a + qb * vote_b + (1.0 - qa - qb) * abstain),
                    );
                });
                assert!(
                    (mixed.total() - full).abs() <= 1e-10,
                    "rule {rule}, group {g}: {} vs {full}",
                    mixed.total()
                );
            }
        }
    }

    #[test]
    fn pruning_stays_close_to_exact() {
        let config = cfg([21, 21, 21], [0.45, 0.5, 0.55]);
        let profile = StrategyProfile::uniform(0.4);
        let exact = EnumerationOptions::default();
        let pruned = EnumerationOptions {
            prune_threshold: 1e-15,
            ..Default::default()
        };
        for rule in Rule::BOTH {
            let a = pivot_vector(&config, rule, &profile, &exact).unwrap();
            let b = pivot_vector(&config, rule, &profile, &pruned).unwrap();
            for (x, y) in a.flat().iter().zip(b.flat()) {
                assert!((x - y).abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn rejects_invalid_inputs() {
        let config = cfg([3, 3, 3], [0.5, 0.5, 0.5]);
        let bad = StrategyProfile::uniform(1.5);
        assert!(pivot_vector(&config, Rule::Wta, &bad, &EnumerationOptions::default()).is_err());
        let profile = StrategyProfile::uniform(0.5);
        assert!(pivot_probability(
            &config,
            Rule::Wta,
            &profile,
            3,
            Candidate::A,
            &EnumerationOptions::default()
        )
        .is_err());
    }
}
