//! Expected welfare per voter type and ex-ante Gini coefficients.
//!
//! Welfare is reported in units of the benefit β: a type's expected welfare
//! is the probability that its candidate wins minus the expected voting cost,
//! w_{g,I} = P(I wins) − ĉ²/(2·c̄·β) with ĉ = t_{g,I}·c̄. Both terms are
//! ex ante: the win probability is the plain equilibrium winning probability
//! under the profile, and the cost term integrates the uniform cost below
//! the cutpoint.
//!
//! The inequality measure is the ex-ante Gini over the two supporter types
//! of group 1 — the group whose support rate carries the local asymmetry —
//! weighted by their expected masses. A Gini over all six types is also
//! provided for diagnostics.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Candidate, Category, ElectorateConfig, ModelError, Rule, StrategyProfile};
use crate::pivot::{win_probability, EnumerationOptions};

#[derive(Debug, Error)]
pub enum WelfareError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("cutpoint sample for group {group}, candidate {candidate} is empty")]
    EmptySample { group: usize, candidate: Candidate },
    #[error("cutpoint sample value {0} outside [0, cost cap]")]
    InvalidSampleValue(f64),
    #[error("Gini is undefined for negative welfare {0} without a shift")]
    NegativeWelfare(f64),
    #[error("population masses must be positive and finite, got {0}")]
    InvalidMass(f64),
}

/// Observed cutpoints (in cost units, i.e. in [0, c̄]) for one voter type.
/// Voters draw independently from the empirical distribution, so only the
/// first two moments matter: the mean sets the vote probability, the second
/// moment the expected cost.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CutpointSample {
    pub group: usize,
    pub candidate: Candidate,
    pub values: Vec<f64>,
}

impl CutpointSample {
    /// Point mass at a single cutpoint (cost units).
    pub fn degenerate(group: usize, candidate: Candidate, value: f64) -> Self {
        Self {
            group,
            candidate,
            values: vec![value],
        }
    }

    fn validate(&self, cost_cap: f64) -> Result<(), WelfareError> {
        if self.group >= 3 {
            return Err(WelfareError::Model(ModelError::InvalidGroupIndex(
                self.group,
            )));
        }
        if self.values.is_empty() {
            return Err(WelfareError::EmptySample {
                group: self.group,
                candidate: self.candidate,
            });
        }
        for &v in &self.values {
            if !(0.0..=cost_cap).contains(&v) || v.is_nan() {
                return Err(WelfareError::InvalidSampleValue(v));
            }
        }
        Ok(())
    }

    fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    fn mean_square(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>() / self.values.len() as f64
    }
}

/// Per-type expected welfare in units of β, plus the group-1 camp aggregates
/// and the ex-ante Gini used in the reference comparisons.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct WelfareReport {
    /// w_{g,I}, indexed `[group][candidate]`.
    pub welfare: [[f64; 2]; 3],
    pub win_prob_a: f64,
    /// Group 1's ex-ante majority camp welfare (candidate B's supporters for
    /// every non-balanced configuration); `None` under impartial culture.
    pub majority_welfare: Option<f64>,
    /// Group 1's minority camp welfare (candidate A's supporters).
    pub minority_welfare: Option<f64>,
    /// Ex-ante Gini over group 1's two types; `None` when some welfare level
    /// is negative (the Gini is undefined without a shift).
    pub gini: Option<f64>,
}

fn cost_term(cutpoint_cost: f64, cost_cap: f64, benefit: f64) -> f64 {
    cutpoint_cost * cutpoint_cost / (2.0 * cost_cap * benefit)
}

fn report_from_parts(
    config: &ElectorateConfig,
    win_a: f64,
    win_b: f64,
    cost_terms: &[[f64; 2]; 3],
) -> Result<WelfareReport, WelfareError> {
    let mut welfare = [[0.0; 2]; 3];
    for g in 0..3 {
        for i in 0..2 {
            let p_win = if i == 0 { win_a } else { win_b };
            welfare[g][i] = p_win - cost_terms[g][i];
        }
    }
    let gini = match ex_ante_gini_values(config, &welfare) {
        Ok(value) => Some(value),
        Err(WelfareError::NegativeWelfare(_)) => None,
        Err(other) => return Err(other),
    };
    let (majority_welfare, minority_welfare) = match config.categorize() {
        Ok(Category::Ic) | Err(_) => (None, None),
        Ok(_) => (Some(welfare[0][1]), Some(welfare[0][0])),
    };
    Ok(WelfareReport {
        welfare,
        win_prob_a: win_a,
        majority_welfare,
        minority_welfare,
        gini,
    })
}

/// Expected welfare of every type under the profile.
pub fn expected_welfare(
    config: &ElectorateConfig,
    rule: Rule,
    profile: &StrategyProfile,
    options: &EnumerationOptions,
) -> Result<WelfareReport, WelfareError> {
    let win_a = win_probability(config, rule, profile, Candidate::A, options)?;
    let win_b = win_probability(config, rule, profile, Candidate::B, options)?;
    let mut cost_terms = [[0.0; 2]; 3];
    for g in 0..3 {
        for i in 0..2 {
            let cutpoint_cost = profile.t[g][i] * config.cost_cap;
            cost_terms[g][i] = cost_term(cutpoint_cost, config.cost_cap, config.benefit);
        }
    }
    report_from_parts(config, win_a, win_b, &cost_terms)
}

/// Expected welfare when some types play an empirical mixed cutpoint
/// strategy. Sampled types vote with probability mean(values)/c̄ (voters draw
/// cutpoints independently, so only the first moment enters the tally law)
/// and pay mean(values²)/(2·c̄·β) in expectation; all other types follow
/// `computer_profile`.
pub fn welfare_from_sample(
    config: &ElectorateConfig,
    rule: Rule,
    samples: &[CutpointSample],
    computer_profile: &StrategyProfile,
    options: &EnumerationOptions,
) -> Result<WelfareReport, WelfareError> {
    config.validate().map_err(WelfareError::Model)?;
    let mut profile = *computer_profile;
    let mut cost_terms = [[0.0; 2]; 3];
    let mut sampled = [[false; 2]; 3];
    for sample in samples {
        sample.validate(config.cost_cap)?;
        let (g, i) = (sample.group, sample.candidate.idx());
        profile.t[g][i] = sample.mean() / config.cost_cap;
        cost_terms[g][i] = sample.mean_square() / (2.0 * config.cost_cap * config.benefit);
        sampled[g][i] = true;
    }
    for g in 0..3 {
        for i in 0..2 {
            if !sampled[g][i] {
                let cutpoint_cost = profile.t[g][i] * config.cost_cap;
                cost_terms[g][i] = cost_term(cutpoint_cost, config.cost_cap, config.benefit);
            }
        }
    }
    let win_a = win_probability(config, rule, &profile, Candidate::A, options)?;
    let win_b = win_probability(config, rule, &profile, Candidate::B, options)?;
    report_from_parts(config, win_a, win_b, &cost_terms)
}

/// Population-weighted Gini coefficient over (welfare, mass) pairs:
/// ΣΣ m_i·m_j·|w_i − w_j| / (2·(Σm)²·w̄). Requires nonnegative welfare.
pub fn gini(values: &[(f64, f64)]) -> Result<f64, WelfareError> {
    for &(w, m) in values {
        if w < 0.0 || w.is_nan() {
            return Err(WelfareError::NegativeWelfare(w));
        }
        if !(m > 0.0) || !m.is_finite() {
            return Err(WelfareError::InvalidMass(m));
        }
    }
    let total_mass: f64 = values.iter().map(|&(_, m)| m).sum();
    if total_mass <= 0.0 {
        return Err(WelfareError::InvalidMass(total_mass));
    }
    let mean: f64 = values.iter().map(|&(w, m)| w * m).sum::<f64>() / total_mass;
    if mean == 0.0 {
        // All welfare levels are zero: perfect equality.
        return Ok(0.0);
    }
    let mut spread = 0.0;
    for &(wi, mi) in values {
        for &(wj, mj) in values {
            spread += mi * mj * (wi - wj).abs();
        }
    }
    Ok(spread / (2.0 * total_mass * total_mass * mean))
}

fn ex_ante_gini_values(
    config: &ElectorateConfig,
    welfare: &[[f64; 2]; 3],
) -> Result<f64, WelfareError> {
    let mut pairs = Vec::with_capacity(2);
    for (i, cand) in Candidate::BOTH.into_iter().enumerate() {
        let mass = config.type_mass(0, cand);
        if mass > 0.0 {
            pairs.push((welfare[0][i], mass));
        }
    }
    if pairs.is_empty() {
        return Ok(0.0);
    }
    gini(&pairs)
}

/// Ex-ante Gini over group 1's two supporter types, weighted by expected
/// masses n₁p₁ and n₁(1−p₁). This is the inequality measure the reference
/// comparisons track (group 1 carries the support-rate asymmetry).
pub fn ex_ante_gini(
    config: &ElectorateConfig,
    report: &WelfareReport,
) -> Result<f64, WelfareError> {
    ex_ante_gini_values(config, &report.welfare)
}

/// Diagnostic Gini over all six types, weighted by n_g·p_{g,I}. Zero-mass
/// types are excluded.
pub fn population_gini(
    config: &ElectorateConfig,
    report: &WelfareReport,
) -> Result<f64, WelfareError> {
    let mut pairs = Vec::with_capacity(6);
    for g in 0..3 {
        for (i, cand) in Candidate::BOTH.into_iter().enumerate() {
            let mass = config.type_mass(g, cand);
            if mass > 0.0 {
                pairs.push((report.welfare[g][i], mass));
            }
        }
    }
    if pairs.is_empty() {
        return Ok(0.0);
    }
    gini(&pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(sizes: [u32; 3], rates: [f64; 3]) -> ElectorateConfig {
        ElectorateConfig::new(sizes, rates).unwrap()
    }

    #[test]
    fn zero_cutpoint_welfare_is_the_win_probability() {
        let config = cfg([5, 3, 4], [0.4, 0.6, 0.5]);
        let profile = StrategyProfile::uniform(0.0);
        let opts = EnumerationOptions::default();
        for rule in Rule::BOTH {
            let report = expected_welfare(&config, rule, &profile, &opts).unwrap();
            for g in 0..3 {
                assert_eq!(report.welfare[g][0], report.win_prob_a);
                assert_eq!(report.welfare[g][1], 1.0 - report.win_prob_a);
            }
        }
    }

    #[test]
    fn symmetric_profile_gives_symmetric_welfare() {
        let config = cfg([21, 21, 21], [0.5, 0.5, 0.5]);
        let profile = StrategyProfile::uniform(0.36);
        let opts = EnumerationOptions::default();
        for rule in Rule::BOTH {
            let report = expected_welfare(&config, rule, &profile, &opts).unwrap();
            for g in 0..3 {
                assert_eq!(report.welfare[g][0], report.welfare[g][1]);
            }
            assert!(report.gini.unwrap() <= 1e-15);
        }
    }

    #[test]
    fn welfare_bounds_hold() {
        let config = cfg([7, 21, 35], [0.3, 0.5, 0.62]);
        let lower = -(200.0 / 1000.0) / 2.0;
        let opts = EnumerationOptions::default();
        for profile in [
            StrategyProfile::uniform(1.0),
            StrategyProfile::uniform(0.5),
            StrategyProfile::from_flat([0.9, 0.1, 0.3, 0.8, 0.0, 1.0]),
        ] {
            for rule in Rule::BOTH {
                let report = expected_welfare(&config, rule, &profile, &opts).unwrap();
                for w in report.welfare.iter().flatten() {
                    assert!(*w > lower && *w <= 1.0, "welfare {w}");
                }
                let group_one_negative = report.welfare[0].iter().any(|w| *w < 0.0);
                assert_eq!(report.gini.is_none(), group_one_negative);
            }
        }
    }

    #[test]
    fn gini_closed_forms() {
        assert_eq!(gini(&[(0.4, 1.0), (0.4, 2.5), (0.4, 7.0)]).unwrap(), 0.0);
        let g = gini(&[(0.6, 1.0), (0.3, 1.0)]).unwrap();
        assert!((g - 1.0 / 6.0).abs() <= 1e-15, "{g}");
        assert_eq!(gini(&[(0.0, 1.0), (0.0, 3.0)]).unwrap(), 0.0);
    }

    #[test]
    fn gini_is_scale_invariant_and_rejects_negatives() {
        let base = [(0.61, 10.5), (0.34, 31.5), (0.52, 21.0)];
        let scaled: Vec<(f64, f64)> = base.iter().map(|&(w, m)| (w * 7.3, m)).collect();
        let g1 = gini(&base).unwrap();
        let g2 = gini(&scaled).unwrap();
        assert!((g1 - g2).abs() <= 1e-12);
        assert!(g1 > 0.0);
        assert!(matches!(
            gini(&[(0.5, 1.0), (-0.1, 1.0)]),
            Err(WelfareError::NegativeWelfare(_))
        ));
        assert!(matches!(
            gini(&[(0.5, 0.0)]),
            Err(WelfareError::InvalidMass(_))
        ));
    }

    #[test]
    fn point_mass_sample_equals_expected_welfare() {
        let config = cfg([7, 21, 21], [0.1, 0.57, 0.57]);
        let equilibrium_like = StrategyProfile::from_flat([0.44, 0.52, 0.38, 0.41, 0.38, 0.41]);
        let opts = EnumerationOptions::default();
        // Degenerate samples at exactly t·c̄ for both group-1 types.
        let samples = [
            CutpointSample::degenerate(0, Candidate::A, 0.44 * 200.0),
            CutpointSample::degenerate(0, Candidate::B, 0.52 * 200.0),
        ];
        for rule in Rule::BOTH {
            let direct = expected_welfare(&config, rule, &equilibrium_like, &opts).unwrap();
            let sampled =
                welfare_from_sample(&config, rule, &samples, &equilibrium_like, &opts).unwrap();
            for g in 0..3 {
                for i in 0..2 {
                    assert!(
                        (direct.welfare[g][i] - sampled.welfare[g][i]).abs() <= 1e-10,
                        "({g},{i}): {} vs {}",
                        direct.welfare[g][i],
                        sampled.welfare[g][i]
                    );
                }
            }
            assert!((direct.gini.unwrap() - sampled.gini.unwrap()).abs() <= 1e-10);
        }
    }

    #[test]
    fn spread_sample_pays_more_than_point_mass() {
        // {0, c̄} has the same mean as a point mass at c̄/2 but twice the
        // second moment: cost c̄/(4β) versus c̄/(8β).
        let config = cfg([5, 5, 5], [0.5, 0.5, 0.5]);
        let profile = StrategyProfile::uniform(0.5);
        let opts = EnumerationOptions::default();
        let spread = [
            CutpointSample {
                group: 0,
                candidate: Candidate::A,
                values: vec![0.0, 200.0],
            },
            CutpointSample {
                group: 0,
                candidate: Candidate::B,
                values: vec![0.0, 200.0],
            },
        ];
        let report =
            welfare_from_sample(&config, Rule::Wta, &spread, &profile, &opts).unwrap();
        let baseline = expected_welfare(&config, Rule::Wta, &profile, &opts).unwrap();
        // Same vote probabilities, same win probability.
        assert_eq!(report.win_prob_a, baseline.win_prob_a);
        let expected_gap = 200.0 / (4.0 * 1000.0) - 200.0 / (8.0 * 1000.0);
        for i in 0..2 {
            let gap = baseline.welfare[0][i] - report.welfare[0][i];
            assert!((gap - expected_gap).abs() <= 1e-12, "gap {gap}");
        }
    }

    #[test]
    fn empty_and_invalid_samples_are_rejected() {
        let config = cfg([5, 5, 5], [0.5, 0.5, 0.5]);
        let profile = StrategyProfile::uniform(0.5);
        let opts = EnumerationOptions::default();
        let empty = [CutpointSample {
            group: 0,
            candidate: Candidate::A,
            values: vec![],
        }];
        assert!(matches!(
            welfare_from_sample(&config, Rule::Wta, &empty, &profile, &opts),
            Err(WelfareError::EmptySample { .. })
        ));
        let out_of_range = [CutpointSample {
            group: 0,
            candidate: Candidate::A,
            values: vec![100.0, 250.0],
        }];
        assert!(matches!(
            welfare_from_sample(&config, Rule::Wta, &out_of_range, &profile, &opts),
            Err(WelfareError::InvalidSampleValue(_))
        ));
    }

    #[test]
    fn camp_aggregates_follow_the_category() {
        let opts = EnumerationOptions::default();
        let ic = cfg([21, 21, 21], [0.5, 0.5, 0.5]);
        let report =
            expected_welfare(&ic, Rule::Wta, &StrategyProfile::uniform(0.3), &opts).unwrap();
        assert!(report.majority_welfare.is_none());
        assert!(report.minority_welfare.is_none());

        let local = cfg([7, 21, 21], [0.1, 0.57, 0.57]);
        let report =
            expected_welfare(&local, Rule::Wta, &StrategyProfile::uniform(0.3), &opts).unwrap();
        assert_eq!(report.majority_welfare, Some(report.welfare[0][1]));
        assert_eq!(report.minority_welfare, Some(report.welfare[0][0]));
    }
}
