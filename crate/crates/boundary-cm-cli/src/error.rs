//! Failure reporting. Every error leaves the process as a single JSON
//! object on the error stream, {"error":{"kind":...,"message":...}}, so
//! callers never have to scrape prose.

use boundary_cm::classify::ClassifyError;
use boundary_cm::cmmod::CmError;
use boundary_cm::combinat::CombinatError;
use boundary_cm::oracle::OracleError;
use boundary_cm::series::SeriesError;

/// What went wrong, bucketed for machine consumption.
///
/// Kinds: "usage" for command-line problems, "io" for file system
/// failures, "json" for malformed spec files, "invalid-input" for inputs
/// that parse but violate a mathematical precondition. Panics are
/// reported separately as "internal" with exit code 2.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
}

impl CliError {
    pub fn usage(message: impl Into<String>) -> Self {
        CliError {
            kind: "usage",
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        CliError {
            kind: "io",
            message: message.into(),
        }
    }

    pub fn json(message: impl Into<String>) -> Self {
        CliError {
            kind: "json",
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::json!({
            "error": { "kind": self.kind, "message": self.message }
        })
        .to_string()
    }
}

macro_rules! invalid_input_from {
    ($($ty:ty),* $(,)?) => {$(
        impl From<$ty> for CliError {
            fn from(err: $ty) -> Self {
                CliError { kind: "invalid-input", message: err.to_string() }
            }
        }
    )*};
}

invalid_input_from!(SeriesError, CombinatError, CmError, ClassifyError, OracleError);
