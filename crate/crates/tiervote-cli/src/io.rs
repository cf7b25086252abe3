//! File ingestion: JSON electorate descriptions and the flat CSV schema
//! shared by observed-turnout and cutpoint-sample inputs.
//!
//! The CSV schema is `config_id, rule, group, candidate, value`, one record
//! per datum, with a header row. Groups are 1-based in files and displays;
//! candidates are `A`/`B` (case-insensitive); rules are `wta`/`pr`.

use std::collections::BTreeMap;
use std::path::Path;
use std::str::FromStr;

use serde::Deserialize;
use tiervote::behavioral::ObservedTurnout;
use tiervote::model::{DEFAULT_BENEFIT, DEFAULT_COST_CAP};
use tiervote::welfare::CutpointSample;
use tiervote::{Candidate, ElectorateConfig, Rule};

use crate::CliError;

fn default_benefit() -> f64 {
    DEFAULT_BENEFIT
}

fn default_cost_cap() -> f64 {
    DEFAULT_COST_CAP
}

/// On-disk electorate description. `benefit` and `cost_cap` default to the
/// studied values (1000 and 200) when omitted.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    group_sizes: [u32; 3],
    support_rates: [f64; 3],
    #[serde(default = "default_benefit")]
    benefit: f64,
    #[serde(default = "default_cost_cap")]
    cost_cap: f64,
    #[serde(default)]
    label: Option<String>,
}

/// Load and validate an electorate from a JSON file.
pub fn load_config(path: &Path) -> Result<ElectorateConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let file: ConfigFile = serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let config = ElectorateConfig {
        group_sizes: file.group_sizes,
        support_rates: file.support_rates,
        benefit: file.benefit,
        cost_cap: file.cost_cap,
        label: file.label,
    };
    config.validate().map_err(|e| CliError::Validation {
        field: validation_field(&e).to_string(),
        message: e.to_string(),
    })?;
    Ok(config)
}

/// The config-file field a validation error points at.
fn validation_field(error: &tiervote::model::ModelError) -> &'static str {
    use tiervote::model::ModelError::*;
    match error {
        InvalidGroupSize(_) => "group_sizes",
        InvalidSupportRate(_) => "support_rates",
        InvalidBenefit(_) => "benefit",
        InvalidCostCap(_) => "cost_cap",
        _ => "config",
    }
}

/// Serialize an electorate in the config file format; [`load_config`] on the
/// result reproduces the electorate exactly.
pub fn config_to_json(config: &ElectorateConfig) -> String {
    let mut text = serde_json::to_string_pretty(config).expect("config serializes");
    text.push('\n');
    text
}

#[derive(Debug, Deserialize)]
struct CsvRecord {
    config_id: u32,
    rule: String,
    group: u32,
    candidate: String,
    value: f64,
}

fn read_records(path: &Path) -> Result<Vec<CsvRecord>, CliError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    let mut records = Vec::new();
    for row in reader.deserialize() {
        let record: CsvRecord = row.map_err(|e| CliError::Parse {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        records.push(record);
    }
    Ok(records)
}

fn parse_candidate(s: &str) -> Result<Candidate, CliError> {
    match s.trim().to_ascii_lowercase().as_str() {
        "a" => Ok(Candidate::A),
        "b" => Ok(Candidate::B),
        other => Err(CliError::Validation {
            field: "candidate".to_string(),
            message: format!("expected A or B, got '{other}'"),
        }),
    }
}

fn parse_rule(s: &str) -> Result<Rule, CliError> {
    Rule::from_str(s).map_err(|e| CliError::Validation {
        field: "rule".to_string(),
        message: e.to_string(),
    })
}

/// Read observed group-1 turnout cells. Multiple rows for the same
/// `(config_id, rule, candidate)` cell are averaged (they are session-level
/// means of the same quantity); each cell must end up with both candidates.
pub fn read_observed_turnout(path: &Path) -> Result<Vec<ObservedTurnout>, CliError> {
    let mut cells: BTreeMap<(u32, Rule), [(f64, usize); 2]> = BTreeMap::new();
    for record in read_records(path)? {
        let rule = parse_rule(&record.rule)?;
        let candidate = parse_candidate(&record.candidate)?;
        if record.group != 1 {
            return Err(CliError::Validation {
                field: "group".to_string(),
                message: format!(
                    "observed turnout covers group 1 only, got group {}",
                    record.group
                ),
            });
        }
        if !(0.0..=1.0).contains(&record.value) {
            return Err(CliError::Validation {
                field: "value".to_string(),
                message: format!("turnout must lie in [0,1], got {}", record.value),
            });
        }
        let cell = cells
            .entry((record.config_id, rule))
            .or_insert([(0.0, 0); 2]);
        let slot = &mut cell[candidate.idx()];
        slot.0 += record.value;
        slot.1 += 1;
    }
    if cells.is_empty() {
        return Err(CliError::MissingData(format!(
            "{}: no observed turnout records",
            path.display()
        )));
    }
    let mut out = Vec::with_capacity(cells.len());
    for ((config_id, rule), [a, b]) in cells {
        if a.1 == 0 || b.1 == 0 {
            return Err(CliError::MissingData(format!(
                "configuration {config_id} {rule}: needs rows for both candidates"
            )));
        }
        out.push(ObservedTurnout {
            config_id,
            rule,
            t_a: a.0 / a.1 as f64,
            t_b: b.0 / b.1 as f64,
        });
    }
    Ok(out)
}

/// Read cutpoint samples (cost units) for one configuration and rule; rows
/// for other configurations or the other rule are ignored so one file can
/// hold a whole session.
pub fn read_cutpoint_samples(
    path: &Path,
    config_id: u32,
    rule: Rule,
) -> Result<Vec<CutpointSample>, CliError> {
    let mut cells: BTreeMap<(u32, Candidate), Vec<f64>> = BTreeMap::new();
    let mut matched = false;
    for record in read_records(path)? {
        if record.config_id != config_id || parse_rule(&record.rule)? != rule {
            continue;
        }
        matched = true;
        let candidate = parse_candidate(&record.candidate)?;
        if !(1..=3).contains(&record.group) {
            return Err(CliError::Validation {
                field: "group".to_string(),
                message: format!("group must be 1, 2, or 3, got {}", record.group),
            });
        }
        cells
            .entry((record.group - 1, candidate))
            .or_default()
            .push(record.value);
    }
    if !matched {
        return Err(CliError::MissingData(format!(
            "{}: no cutpoint samples for configuration {config_id} under {rule}",
            path.display()
        )));
    }
    Ok(cells
        .into_iter()
        .map(|((group, candidate), values)| CutpointSample {
            group: group as usize,
            candidate,
            values,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn temp_file(contents: &str) -> tempfile::NamedTempFile {
        let mut file = tempfile::NamedTempFile::new().unwrap();
        file.write_all(contents.as_bytes()).unwrap();
        file
    }

    #[test]
    fn config_defaults_apply() {
        let file = temp_file(
            r#"{"group_sizes": [21, 21, 21], "support_rates": [0.5, 0.5, 0.5]}"#,
        );
        let config = load_config(file.path()).unwrap();
        assert_eq!(config.benefit, 1000.0);
        assert_eq!(config.cost_cap, 200.0);
        assert_eq!(config.label, None);
    }

    #[test]
    fn config_round_trips() {
        let mut config = ElectorateConfig::new([7, 21, 21], [0.15, 0.5, 0.5]).unwrap();
        config.label = Some("test".to_string());
        let file = temp_file(&config_to_json(&config));
        assert_eq!(load_config(file.path()).unwrap(), config);
    }

    #[test]
    fn config_errors_carry_the_field() {
        let file = temp_file(
            r#"{"group_sizes": [21, 21, 21], "support_rates": [1.2, 0.5, 0.5]}"#,
        );
        match load_config(file.path()) {
            Err(CliError::Validation { field, .. }) => assert_eq!(field, "support_rates"),
            other => panic!("expected validation error, got {other:?}"),
        }
        let file = temp_file(r#"{"group_sizes": [21, 21]}"#);
        assert!(matches!(load_config(file.path()), Err(CliError::Parse { .. })));
    }

    #[test]
    fn observed_turnout_reads_and_averages() {
        let file = temp_file(
            "config_id,rule,group,candidate,value\n\
             5,pr,1,A,0.10\n\
             5,pr,1,a,0.12\n\
             5,pr,1,B,0.45\n",
        );
        let records = read_observed_turnout(file.path()).unwrap();
        assert_eq!(records.len(), 1);
        assert!((records[0].t_a - 0.11).abs() < 1e-12);
        assert!((records[0].t_b - 0.45).abs() < 1e-12);
        assert_eq!(records[0].rule, Rule::Pr);
    }

    #[test]
    fn observed_turnout_rejects_incomplete_cells() {
        let file = temp_file("config_id,rule,group,candidate,value\n5,pr,1,A,0.10\n");
        assert!(matches!(
            read_observed_turnout(file.path()),
            Err(CliError::MissingData(_))
        ));
        let file = temp_file("config_id,rule,group,candidate,value\n5,pr,2,A,0.10\n");
        assert!(matches!(
            read_observed_turnout(file.path()),
            Err(CliError::Validation { .. })
        ));
    }

    #[test]
    fn cutpoint_samples_group_by_type_and_filter() {
        let file = temp_file(
            "config_id,rule,group,candidate,value\n\
             6,pr,1,A,43.6\n\
             6,pr,1,A,50.0\n\
             6,pr,1,B,104.4\n\
             6,wta,1,A,36.8\n\
             3,pr,1,A,99.0\n",
        );
        let samples = read_cutpoint_samples(file.path(), 6, Rule::Pr).unwrap();
        assert_eq!(samples.len(), 2);
        let a = samples
            .iter()
            .find(|s| s.candidate == Candidate::A)
            .unwrap();
        assert_eq!(a.values, vec![43.6, 50.0]);
        assert!(matches!(
            read_cutpoint_samples(file.path(), 9, Rule::Pr),
            Err(CliError::MissingData(_))
        ));
    }
}
