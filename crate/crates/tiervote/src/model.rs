//! Domain types shared by every other module: electorate configuration,
//! aggregation rules, cutpoint strategy profiles, and the weight-allocation
//! and winner-determination primitives with their tie conventions.

use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// One of the two candidates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Candidate {
    A,
    B,
}

impl Candidate {
    pub const BOTH: [Candidate; 2] = [Candidate::A, Candidate::B];

    /// Array slot for per-type storage: A -> 0, B -> 1.
    pub fn idx(self) -> usize {
        match self {
            Candidate::A => 0,
            Candidate::B => 1,
        }
    }

    pub fn other(self) -> Candidate {
        match self {
            Candidate::A => Candidate::B,
            Candidate::B => Candidate::A,
        }
    }
}

impl std::fmt::Display for Candidate {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Candidate::A => "A",
            Candidate::B => "B",
        })
    }
}

/// How group weights are awarded from the group's vote tally.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Rule {
    /// Winner-take-all: the whole group weight goes to the in-group vote winner.
    Wta,
    /// Proportional: the weight is split according to in-group vote shares.
    Pr,
}

impl Rule {
    pub const BOTH: [Rule; 2] = [Rule::Wta, Rule::Pr];
}

impl std::fmt::Display for Rule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Rule::Wta => "wta",
            Rule::Pr => "pr",
        })
    }
}

impl std::str::FromStr for Rule {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "wta" | "winner-take-all" => Ok(Rule::Wta),
            "pr" | "proportional" => Ok(Rule::Pr),
            other => Err(ModelError::UnknownRule(other.to_string())),
        }
    }
}

/// Resolution of a tied in-group vote count under winner-take-all.
///
/// The two conventions are *not* interchangeable: the winner determination is
/// nonlinear in the weights, so awarding half the weight to each side is not
/// the same as awarding the whole weight by a fair coin. Reproduction of the
/// reference equilibrium table singles out `CoinFlip`; `HalfSplit` is kept so
/// the arbitration can be re-run (see the acceptance tests).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieConvention {
    /// Enumerate both coin outcomes: whole weight to A or to B, probability ½ each.
    #[default]
    CoinFlip,
    /// Deterministically award half the group weight to each candidate.
    HalfSplit,
}

/// Which support pattern a configuration represents, following the reference
/// classification: IC (impartial culture, balanced everywhere), Global
/// (balanced in group 1, minority overall), Local (minority in group 1,
/// balanced overall), or Both.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Category {
    Ic,
    Global,
    Local,
    Both,
}

impl std::fmt::Display for Category {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Category::Ic => "IC",
            Category::Global => "Global",
            Category::Local => "Local",
            Category::Both => "Both",
        })
    }
}

/// Tolerance used when classifying support rates as "balanced" (p = 0.5).
/// Published rates are rounded, so exact comparisons would misclassify.
pub const CATEGORY_TOLERANCE: f64 = 0.005;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("group sizes must be at least 1, got {0:?}")]
    InvalidGroupSize([u32; 3]),
    #[error("support rates must lie in [0,1], got {0:?}")]
    InvalidSupportRate([f64; 3]),
    #[error("benefit must be positive, got {0}")]
    InvalidBenefit(f64),
    #[error("cost cap must be positive, got {0}")]
    InvalidCostCap(f64),
    #[error("unknown rule '{0}' (expected 'wta' or 'pr')")]
    UnknownRule(String),
    #[error("cutpoints must lie in [0,1], got {0:?}")]
    InvalidCutpoint([f64; 6]),
    #[error("group index must be 0, 1, or 2, got {0}")]
    InvalidGroupIndex(usize),
    #[error("configuration outside the studied region: requires p1 <= 0.5 and mean support <= 0.5 (got p1={p1}, mean={p_bar})")]
    OutsideStudiedRegion { p1: f64, p_bar: f64 },
}

/// One voting configuration: three groups whose voting weight equals their
/// size, per-group probabilities of preferring candidate A, the benefit from
/// one's candidate winning, and the cap of the uniform cost distribution.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ElectorateConfig {
    pub group_sizes: [u32; 3],
    pub support_rates: [f64; 3],
    pub benefit: f64,
    pub cost_cap: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

pub const DEFAULT_BENEFIT: f64 = 1000.0;
pub const DEFAULT_COST_CAP: f64 = 200.0;

impl ElectorateConfig {
    /// Configuration with the default benefit (1000) and cost cap (200).
    pub fn new(group_sizes: [u32; 3], support_rates: [f64; 3]) -> Result<Self, ModelError> {
        let cfg = Self {
            group_sizes,
            support_rates,
            benefit: DEFAULT_BENEFIT,
            cost_cap: DEFAULT_COST_CAP,
            label: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.group_sizes.iter().any(|&n| n == 0) {
            return Err(ModelError::InvalidGroupSize(self.group_sizes));
        }
        if self
            .support_rates
            .iter()
            .any(|p| !(0.0..=1.0).contains(p) || p.is_nan())
        {
            return Err(ModelError::InvalidSupportRate(self.support_rates));
        }
        if !(self.benefit > 0.0) {
            return Err(ModelError::InvalidBenefit(self.benefit));
        }
        if !(self.cost_cap > 0.0) {
            return Err(ModelError::InvalidCostCap(self.cost_cap));
        }
        Ok(())
    }

    /// Total voting weight N; a candidate needs strictly more than N/2 to win.
    pub fn total_weight(&self) -> u32 {
        self.group_sizes.iter().sum()
    }

    /// Share of the whole electorate expected to prefer A:
    /// (p1 n1 + p2 n2 + p3 n3) / N.
    pub fn overall_support_rate(&self) -> f64 {
        let num: f64 = self
            .group_sizes
            .iter()
            .zip(&self.support_rates)
            .map(|(&n, &p)| p * n as f64)
            .sum();
        num / self.total_weight() as f64
    }

    /// Probability that a voter of group `g` (0-based) prefers `candidate`.
    pub fn type_rate(&self, g: usize, candidate: Candidate) -> f64 {
        match candidate {
            Candidate::A => self.support_rates[g],
            Candidate::B => 1.0 - self.support_rates[g],
        }
    }

    /// Expected number of (group, candidate)-type voters: n_g * p_{g,I}.
    pub fn type_mass(&self, g: usize, candidate: Candidate) -> f64 {
        self.group_sizes[g] as f64 * self.type_rate(g, candidate)
    }

    /// Classify the support pattern. Only configurations with p1 <= 0.5 and
    /// overall rate <= 0.5 (up to the rounding tolerance) are classified;
    /// anything else lies outside the studied region and is rejected.
    pub fn categorize(&self) -> Result<Category, ModelError> {
        let p1 = self.support_rates[0];
        let p_bar = self.overall_support_rate();
        let balanced = |p: f64| (p - 0.5).abs() <= CATEGORY_TOLERANCE;
        if p1 > 0.5 + CATEGORY_TOLERANCE || p_bar > 0.5 + CATEGORY_TOLERANCE {
            return Err(ModelError::OutsideStudiedRegion { p1, p_bar });
        }
        Ok(match (balanced(p1), balanced(p_bar)) {
            (true, true) => Category::Ic,
            (true, false) => Category::Global,
            (false, true) => Category::Local,
            (false, false) => Category::Both,
        })
    }

    /// The A<->B relabelling of this configuration (support rates complemented).
    pub fn mirrored(&self) -> Self {
        let mut out = self.clone();
        for p in &mut out.support_rates {
            *p = 1.0 - *p;
        }
        out
    }
}

/// Normalized cutpoints t_{g,I} = c_{g,I} / cost_cap, indexed by group
/// (0-based) and candidate. With uniform costs, t is also the type's vote
/// probability.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct StrategyProfile {
    pub t: [[f64; 2]; 3],
}

impl StrategyProfile {
    pub fn uniform(value: f64) -> Self {
        Self {
            t: [[value; 2]; 3],
        }
    }

    /// Build from the flat order (t1A, t1B, t2A, t2B, t3A, t3B).
    pub fn from_flat(values: [f64; 6]) -> Self {
        Self {
            t: [
                [values[0], values[1]],
                [values[2], values[3]],
                [values[4], values[5]],
            ],
        }
    }

    pub fn get(&self, g: usize, candidate: Candidate) -> f64 {
        self.t[g][candidate.idx()]
    }

    pub fn set(&mut self, g: usize, candidate: Candidate, value: f64) {
        self.t[g][candidate.idx()] = value;
    }

    pub fn is_valid(&self) -> bool {
        self.t
            .iter()
            .flatten()
            .all(|t| (0.0..=1.0).contains(t) && !t.is_nan())
    }

    /// Swap the A and B cutpoints within every group (the strategy half of
    /// the A<->B relabelling).
    pub fn swapped(&self) -> Self {
        Self {
            t: [
                [self.t[0][1], self.t[0][0]],
                [self.t[1][1], self.t[1][0]],
                [self.t[2][1], self.t[2][0]],
            ],
        }
    }

    pub fn flat(&self) -> [f64; 6] {
        [
            self.t[0][0], self.t[0][1], self.t[1][0], self.t[1][1], self.t[2][0], self.t[2][1],
        ]
    }
}

/// Realized or enumerated vote counts in one group (`group` is 0-based;
/// display layers print it 1-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupTally {
    pub group: usize,
    pub votes_a: u32,
    pub votes_b: u32,
}

/// Split of one group's weight between the candidates. Weights are exact
/// rationals: under PR the share n*a/(a+b) is generally fractional, and the
/// final majority comparison must not be done in floating point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightAllocation {
    pub group: usize,
    pub weight_a: Rational64,
    pub weight_b: Rational64,
}

/// Deterministic weight allocation for a tally.
///
/// WTA awards the whole weight to the strict-majority side; a tied count
/// (including 0-0) is encoded as an even split, i.e. the expected weight of a
/// fair-coin award. Exact computations that need the coin's two outcomes
/// separately use [`allocation_branches`] instead. PR splits proportionally
/// to the vote shares, with a zero-vote tally treated as a tie.
pub fn allocate_weights(tally: &GroupTally, rule: Rule, group_size: u32) -> WeightAllocation {
    debug_assert!(tally.votes_a + tally.votes_b <= group_size);
    let n = Rational64::from_integer(group_size as i64);
    let weight_a = match rule {
        Rule::Wta => {
            if tally.votes_a > tally.votes_b {
                n
            } else if tally.votes_b > tally.votes_a {
                Rational64::from_integer(0)
            } else {
                n / 2
            }
        }
        Rule::Pr => {
            let total = tally.votes_a + tally.votes_b;
            if total == 0 {
                n / 2
            } else {
                Rational64::new(
                    group_size as i64 * tally.votes_a as i64,
                    total as i64,
                )
            }
        }
    };
    WeightAllocation {
        group: tally.group,
        weight_a,
        weight_b: n - weight_a,
    }
}

/// Up to two probability-weighted outcomes of a weight allocation.
#[derive(Clone, Copy, Debug)]
pub struct AllocationBranches {
    items: [(Rational64, f64); 2],
    len: usize,
}

impl AllocationBranches {
    fn one(weight_a: Rational64) -> Self {
        Self {
            items: [(weight_a, 1.0), (weight_a, 0.0)],
            len: 1,
        }
    }

    fn coin(first: Rational64, second: Rational64) -> Self {
        Self {
            items: [(first, 0.5), (second, 0.5)],
            len: 2,
        }
    }

    /// (weight to A, probability) pairs; probabilities sum to 1.
    pub fn iter(&self) -> impl Iterator<Item = (Rational64, f64)> + '_ {
        self.items[..self.len].iter().copied()
    }
}

/// Weight outcomes of a tally under the given tie convention. Non-tied WTA
/// tallies and all PR tallies have a single branch; a tied WTA tally yields
/// either one half-split branch (`HalfSplit`) or the two coin outcomes
/// (`CoinFlip`).
pub fn allocation_branches(
    votes_a: u32,
    votes_b: u32,
    group_size: u32,
    rule: Rule,
    tie: TieConvention,
) -> AllocationBranches {
    let n = Rational64::from_integer(group_size as i64);
    match rule {
        Rule::Wta => {
            if votes_a > votes_b {
                AllocationBranches::one(n)
            } else if votes_b > votes_a {
                AllocationBranches::one(Rational64::from_integer(0))
            } else {
                match tie {
                    TieConvention::CoinFlip => {
                        AllocationBranches::coin(n, Rational64::from_integer(0))
                    }
                    TieConvention::HalfSplit => AllocationBranches::one(n / 2),
                }
            }
        }
        Rule::Pr => {
            let total = votes_a + votes_b;
            if total == 0 {
                AllocationBranches::one(n / 2)
            } else {
                AllocationBranches::one(Rational64::new(
                    group_size as i64 * votes_a as i64,
                    total as i64,
                ))
            }
        }
    }
}

/// Win credit for candidate A given her total weight: 1 above N/2, 0 below,
/// and ½ at an exact tie (a fair coin in expectation). The comparison is
/// exact: 2*weight_a is compared with N as rationals.
pub fn win_credit_a(total_weight_a: Rational64, total_weight: u32) -> f64 {
    let doubled = total_weight_a * 2;
    let n = Rational64::from_integer(total_weight as i64);
    match doubled.cmp(&n) {
        std::cmp::Ordering::Greater => 1.0,
        std::cmp::Ordering::Equal => 0.5,
        std::cmp::Ordering::Less => 0.0,
    }
}
