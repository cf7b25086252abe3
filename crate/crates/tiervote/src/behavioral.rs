//! Deviation of observed turnout from equilibrium: the bandwagon effect
//! (majority camp turning out above prediction) and the Titanic effect
//! (minority camp turning out below prediction).
//!
//! Camps are ex ante: in every studied non-balanced configuration the group-1
//! support rate and the overall support rate point the same way, so candidate
//! A's supporters form the minority camp and candidate B's the majority camp.
//! Balanced (impartial-culture) configurations have no camps and are skipped.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::model::{Candidate, Category, ElectorateConfig, ModelError, Rule};

#[derive(Debug, Error)]
pub enum BehavioralError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("no {what} entry for configuration {config_id} under rule {rule}")]
    MissingKey {
        config_id: u32,
        rule: Rule,
        what: &'static str,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Camp {
    Majority,
    Minority,
}

impl std::fmt::Display for Camp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Camp::Majority => "majority",
            Camp::Minority => "minority",
        })
    }
}

/// Sign-based classification of a turnout deviation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DeviationEffect {
    /// Majority camp turns out more than predicted.
    BehavioralBandwagon,
    /// Minority camp turns out less than predicted (deserting the sinking ship).
    Titanic,
    None,
}

impl std::fmt::Display for DeviationEffect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DeviationEffect::BehavioralBandwagon => "behavioral_bandwagon",
            DeviationEffect::Titanic => "titanic",
            DeviationEffect::None => "none",
        })
    }
}

/// Group-1 turnout cutpoints for one (configuration, rule) cell — used both
/// for theoretical equilibrium values and for observed averages.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObservedTurnout {
    pub config_id: u32,
    pub rule: Rule,
    /// Normalized cutpoint of candidate A's supporters, t_{1,A} ∈ [0,1].
    pub t_a: f64,
    /// Normalized cutpoint of candidate B's supporters, t_{1,B} ∈ [0,1].
    pub t_b: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeviationRecord {
    pub config_id: u32,
    pub rule: Rule,
    pub camp: Camp,
    /// observed − theory.
    pub deviation: f64,
    pub effect: DeviationEffect,
}

/// Mean deviation per (category, rule, camp) cell.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CategorySummary {
    pub category: Category,
    pub rule: Rule,
    pub camp: Camp,
    pub mean_deviation: f64,
    pub count: usize,
}

/// Ex-ante camp of a candidate's supporters, or `None` under impartial
/// culture. Only defined inside the studied region (p₁ ≤ ½, overall ≤ ½).
pub fn camp_of(
    config: &ElectorateConfig,
    candidate: Candidate,
) -> Result<Option<Camp>, ModelError> {
    match config.categorize()? {
        Category::Ic => Ok(None),
        _ => Ok(Some(match candidate {
            Candidate::A => Camp::Minority,
            Candidate::B => Camp::Majority,
        })),
    }
}

/// Sign rule for effects: a positive majority deviation is a bandwagon, a
/// negative minority deviation is a Titanic effect, anything else is neither.
pub fn classify(camp: Camp, deviation: f64) -> DeviationEffect {
    match camp {
        Camp::Majority if deviation > 0.0 => DeviationEffect::BehavioralBandwagon,
        Camp::Minority if deviation < 0.0 => DeviationEffect::Titanic,
        _ => DeviationEffect::None,
    }
}

fn find<'a>(
    rows: &'a [ObservedTurnout],
    config_id: u32,
    rule: Rule,
) -> Option<&'a ObservedTurnout> {
    rows.iter()
        .find(|r| r.config_id == config_id && r.rule == rule)
}

/// Per-camp deviations (observed − theory) for every observed cell. Balanced
/// configurations are skipped (no camps); each non-balanced cell yields a
/// majority record followed by a minority record.
pub fn deviation_table(
    configs: &[(u32, ElectorateConfig)],
    theory: &[ObservedTurnout],
    observed: &[ObservedTurnout],
) -> Result<Vec<DeviationRecord>, BehavioralError> {
    let mut records = Vec::with_capacity(observed.len() * 2);
    for obs in observed {
        let config = configs
            .iter()
            .find(|(id, _)| *id == obs.config_id)
            .map(|(_, c)| c)
            .ok_or(BehavioralError::MissingKey {
                config_id: obs.config_id,
                rule: obs.rule,
                what: "configuration",
            })?;
        let reference =
            find(theory, obs.config_id, obs.rule).ok_or(BehavioralError::MissingKey {
                config_id: obs.config_id,
                rule: obs.rule,
                what: "theory",
            })?;
        if camp_of(config, Candidate::A)?.is_none() {
            continue;
        }
        let majority = obs.t_b - reference.t_b;
        let minority = obs.t_a - reference.t_a;
        records.push(DeviationRecord {
            config_id: obs.config_id,
            rule: obs.rule,
            camp: Camp::Majority,
            deviation: majority,
            effect: classify(Camp::Majority, majority),
        });
        records.push(DeviationRecord {
            config_id: obs.config_id,
            rule: obs.rule,
            camp: Camp::Minority,
            deviation: minority,
            effect: classify(Camp::Minority, minority),
        });
    }
    Ok(records)
}

/// Mean deviation per (category, rule, camp), ordered by category, rule,
/// camp. Records whose configuration id is unknown raise `MissingKey`.
pub fn category_summary(
    configs: &[(u32, ElectorateConfig)],
    records: &[DeviationRecord],
) -> Result<Vec<CategorySummary>, BehavioralError> {
    use std::collections::BTreeMap;
    let mut cells: BTreeMap<(Category, Rule, Camp), (f64, usize)> = BTreeMap::new();
    for record in records {
        let config = configs
            .iter()
            .find(|(id, _)| *id == record.config_id)
            .map(|(_, c)| c)
            .ok_or(BehavioralError::MissingKey {
                config_id: record.config_id,
                rule: record.rule,
                what: "configuration",
            })?;
        let category = config.categorize().map_err(ModelError::from)?;
        let cell = cells
            .entry((category, record.rule, record.camp))
            .or_insert((0.0, 0));
        cell.0 += record.deviation;
        cell.1 += 1;
    }
    Ok(cells
        .into_iter()
        .map(|((category, rule, camp), (sum, count))| CategorySummary {
            category,
            rule,
            camp,
            mean_deviation: sum / count as f64,
            count,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(sizes: [u32; 3], rates: [f64; 3]) -> ElectorateConfig {
        ElectorateConfig::new(sizes, rates).unwrap()
    }

    #[test]
    fn camps_follow_the_support_pattern() {
        let ic = cfg([21, 21, 21], [0.5, 0.5, 0.5]);
        assert_eq!(camp_of(&ic, Candidate::A).unwrap(), None);
        assert_eq!(camp_of(&ic, Candidate::B).unwrap(), None);

        // Globally unbalanced but locally balanced: camps still defined.
        let global = cfg([21, 21, 21], [0.5, 0.5, 0.35]);
        assert_eq!(camp_of(&global, Candidate::A).unwrap(), Some(Camp::Minority));
        assert_eq!(camp_of(&global, Candidate::B).unwrap(), Some(Camp::Majority));

        let local = cfg([7, 21, 21], [0.1, 0.57, 0.57]);
        assert_eq!(camp_of(&local, Candidate::A).unwrap(), Some(Camp::Minority));

        let outside = cfg([21, 21, 21], [0.7, 0.5, 0.5]);
        assert!(camp_of(&outside, Candidate::A).is_err());
    }

    #[test]
    fn classification_is_antisymmetric_under_camp_swap() {
        for deviation in [-0.3, -0.001, 0.0, 0.001, 0.3] {
            let majority = classify(Camp::Majority, deviation);
            let mirrored = classify(Camp::Minority, -deviation);
            assert_eq!(
                majority == DeviationEffect::BehavioralBandwagon,
                mirrored == DeviationEffect::Titanic,
                "deviation {deviation}"
            );
        }
        assert_eq!(classify(Camp::Majority, 0.0), DeviationEffect::None);
        assert_eq!(classify(Camp::Minority, 0.0), DeviationEffect::None);
        assert_eq!(classify(Camp::Majority, -0.1), DeviationEffect::None);
        assert_eq!(classify(Camp::Minority, 0.1), DeviationEffect::None);
    }

    #[test]
    fn deviation_table_joins_and_classifies() {
        let configs = vec![
            (1, cfg([21, 21, 21], [0.5, 0.5, 0.5])),
            (5, cfg([7, 21, 21], [0.1, 0.57, 0.57])),
        ];
        let theory = vec![
            ObservedTurnout {
                config_id: 5,
                rule: Rule::Pr,
                t_a: 0.753,
                t_b: 0.249,
            },
            ObservedTurnout {
                config_id: 1,
                rule: Rule::Pr,
                t_a: 0.370,
                t_b: 0.370,
            },
        ];
        let observed = vec![
            ObservedTurnout {
                config_id: 1,
                rule: Rule::Pr,
                t_a: 0.500,
                t_b: 0.480,
            },
            ObservedTurnout {
                config_id: 5,
                rule: Rule::Pr,
                t_a: 0.103,
                t_b: 0.457,
            },
        ];
        let records = deviation_table(&configs, &theory, &observed).unwrap();
        // The balanced configuration is skipped; config 5 yields two records.
        assert_eq!(records.len(), 2);
        assert_eq!(records[0].camp, Camp::Majority);
        assert!((records[0].deviation - 0.208).abs() <= 1e-12);
        assert_eq!(records[0].effect, DeviationEffect::BehavioralBandwagon);
        assert_eq!(records[1].camp, Camp::Minority);
        assert!((records[1].deviation + 0.650).abs() <= 1e-12);
        assert_eq!(records[1].effect, DeviationEffect::Titanic);
    }

    #[test]
    fn missing_keys_are_reported() {
        let configs = vec![(5, cfg([7, 21, 21], [0.1, 0.57, 0.57]))];
        let observed = vec![ObservedTurnout {
            config_id: 5,
            rule: Rule::Wta,
            t_a: 0.2,
            t_b: 0.4,
        }];
        let err = deviation_table(&configs, &[], &observed).unwrap_err();
        assert!(matches!(err, BehavioralError::MissingKey { what: "theory", .. }));
        let theory = vec![ObservedTurnout {
            config_id: 5,
            rule: Rule::Wta,
            t_a: 0.3,
            t_b: 0.3,
        }];
        let orphan = vec![ObservedTurnout {
            config_id: 9,
            rule: Rule::Wta,
            t_a: 0.2,
            t_b: 0.4,
        }];
        let err = deviation_table(&configs, &theory, &orphan).unwrap_err();
        assert!(matches!(
            err,
            BehavioralError::MissingKey {
                what: "configuration",
                ..
            }
        ));
    }

    #[test]
    fn summary_groups_by_category_rule_and_camp() {
        let configs = vec![
            (5, cfg([7, 21, 21], [0.1, 0.57, 0.57])),
            (6, cfg([7, 21, 21], [0.1, 0.57, 0.57])),
        ];
        let records = vec![
            DeviationRecord {
                config_id: 5,
                rule: Rule::Pr,
                camp: Camp::Minority,
                deviation: -0.6,
                effect: DeviationEffect::Titanic,
            },
            DeviationRecord {
                config_id: 6,
                rule: Rule::Pr,
                camp: Camp::Minority,
                deviation: -0.2,
                effect: DeviationEffect::Titanic,
            },
            DeviationRecord {
                config_id: 5,
                rule: Rule::Pr,
                camp: Camp::Majority,
                deviation: 0.1,
                effect: DeviationEffect::BehavioralBandwagon,
            },
        ];
        let summary = category_summary(&configs, &records).unwrap();
        assert_eq!(summary.len(), 2);
        let minority = summary
            .iter()
            .find(|s| s.camp == Camp::Minority)
            .unwrap();
        assert_eq!(minority.count, 2);
        assert!((minority.mean_deviation + 0.4).abs() <= 1e-12);
        let majority = summary
            .iter()
            .find(|s| s.camp == Camp::Majority)
            .unwrap();
        assert_eq!(majority.count, 1);
    }
}
