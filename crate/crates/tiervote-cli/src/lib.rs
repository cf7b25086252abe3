//! Command-line front end for the election solver/simulator.
//!
//! The library half parses configuration files, carries the bundled
//! benchmark data, and turns subcommands into rendered artifacts; the binary
//! in `main.rs` is a thin clap wrapper. Errors funnel into [`CliError`] so
//! the binary can emit one machine-readable record on stderr and exit
//! nonzero.

use thiserror::Error;

pub mod commands;
pub mod embedded;
pub mod io;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Model(#[from] tiervote::model::ModelError),
    #[error(transparent)]
    Equilibrium(#[from] tiervote::equilibrium::EquilibriumError),
    #[error(transparent)]
    Sim(#[from] tiervote::montecarlo::SimError),
    #[error(transparent)]
    Welfare(#[from] tiervote::welfare::WelfareError),
    #[error(transparent)]
    Behavioral(#[from] tiervote::behavioral::BehavioralError),
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid {field}: {message}")]
    Validation { field: String, message: String },
    #[error("{0}")]
    InvalidFlag(String),
    #[error("no embedded configuration with id {0} (valid ids are 1-18)")]
    UnknownConfiguration(u32),
    #[error("{0}")]
    MissingData(String),
    #[error("fixed-point iteration did not converge (final residual {0:.3e}); raise --max-iterations or adjust --damping")]
    NotConverged(f64),
    #[error("benchmark mismatch: max |gap| {max_gap:.6} exceeds tolerance {tolerance}")]
    GoldenMismatch { max_gap: f64, tolerance: f64 },
    #[error("failed to render output: {0}")]
    Render(String),
}

impl CliError {
    /// Stable machine-readable discriminant for the stderr error record.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Model(_) => "model",
            CliError::Equilibrium(_) => "equilibrium",
            CliError::Sim(_) => "simulation",
            CliError::Welfare(_) => "welfare",
            CliError::Behavioral(_) => "behavioral",
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Validation { .. } => "validation",
            CliError::InvalidFlag(_) => "invalid_flag",
            CliError::UnknownConfiguration(_) => "unknown_configuration",
            CliError::MissingData(_) => "missing_data",
            CliError::NotConverged(_) => "not_converged",
            CliError::GoldenMismatch { .. } => "benchmark_mismatch",
            CliError::Render(_) => "render",
        }
    }

    /// One-line JSON record written to stderr before a nonzero exit.
    pub fn record(&self) -> String {
        serde_json::json!({
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
            }
        })
        .to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn error_records_are_single_line_json() {
        let err = CliError::UnknownConfiguration(99);
        let record = err.record();
        assert!(!record.contains('\n'));
        let parsed: serde_json::Value = serde_json::from_str(&record).unwrap();
        assert_eq!(parsed["error"]["kind"], "unknown_configuration");
        assert!(parsed["error"]["message"]
            .as_str()
            .unwrap()
            .contains("99"));
    }

    #[test]
    fn kinds_are_distinct_for_the_file_errors() {
        let io = CliError::Io {
            path: "x".into(),
            message: "m".into(),
        };
        let parse = CliError::Parse {
            path: "x".into(),
            message: "m".into(),
        };
        assert_ne!(io.kind(), parse.kind());
    }
}
