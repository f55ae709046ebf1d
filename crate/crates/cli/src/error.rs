use std::path::Path;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Expectation(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> CliError {
        CliError::Io { path: path.display().to_string(), source }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Validation(_) => "validation",
            CliError::Io { .. } => "io",
            CliError::Expectation(_) => "expectation",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Expectation(_) => 2,
            CliError::Io { .. } => 3,
        }
    }

    /// One-line JSON record written to stderr.
    pub fn record(&self) -> String {
        #[derive(Serialize)]
        struct Inner<'a> {
            kind: &'a str,
            message: String,
        }
        #[derive(Serialize)]
        struct Record<'a> {
            error: Inner<'a>,
        }
        let r = Record { error: Inner { kind: self.kind(), message: self.to_string() } };
        serde_json::to_string(&r).expect("error record serializes")
    }
}

macro_rules! validation_from {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Validation(e.to_string())
            }
        })*
    };
}

validation_from!(
    mtkit::text::TextError,
    mtkit::alignment::AlignmentError,
    mtkit::lm::LmError,
    mtkit::metrics::MetricError,
    mtkit::stats::StatsError,
    serde_json::Error
);
