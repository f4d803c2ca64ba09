use std::fmt;

use hkcalc_core::Error;
use serde::Serialize;
use serde_json::Value;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// A failure with its machine-readable classification.
#[derive(Clone, Debug, Serialize)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub line: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub column: Option<usize>,
    pub exit_code: u8,
}

impl CliError {
    pub fn input(kind: &'static str, message: impl Into<String>) -> Self {
        CliError {
            kind,
            message: message.into(),
            line: None,
            column: None,
            exit_code: 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let message = e.to_string();
        let (kind, line, column) = match &e {
            Error::BudgetExceeded { .. } => ("budget_exceeded", None, None),
            Error::NotMPrimary => ("not_m_primary", None, None),
            Error::InfiniteColength => ("infinite_colength", None, None),
            Error::NotPrime(_) => ("non_prime_characteristic", None, None),
            Error::Syntax { column, .. } => ("syntax", None, Some(*column)),
            Error::UnknownVariable { column, .. } => ("unknown_variable", None, Some(*column)),
            Error::Problem { line, column, message } => {
                let kind = if message.starts_with("non-prime characteristic") {
                    "non_prime_characteristic"
                } else {
                    "problem_file"
                };
                (kind, Some(*line), Some(*column))
            }
            Error::DuplicateName(_) => ("duplicate_name", None, None),
            Error::UnknownReference(_) => ("unknown_reference", None, None),
            Error::ExponentOverflow => ("exponent_overflow", None, None),
            Error::RingMismatch | Error::RankMismatch(_) | Error::Invalid(_) => ("invalid_input", None, None),
        };
        CliError {
            kind,
            message,
            line,
            column,
            exit_code: if e.is_budget() { 2 } else { 1 },
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RingInfo {
    pub p: u32,
    pub vars: Vec<String>,
    pub quotient: Vec<String>,
    pub order: &'static str,
    pub dim: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct BudgetInfo {
    pub max_pairs: usize,
    pub max_basis: usize,
    pub max_minors: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryFailure {
    pub n: u32,
    pub error: CliError,
}

#[derive(Clone, Debug, Serialize)]
pub struct Diagnostics {
    pub budget: BudgetInfo,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub failures: Vec<EntryFailure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: &'static str,
    pub version: &'static str,
    pub input_digest: String,
    pub input: String,
    pub ring: RingInfo,
    pub parameters: Value,
    pub results: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<Value>,
    pub diagnostics: Diagnostics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<CliError>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
}

/// Emitted when no report could be assembled.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    pub command: &'static str,
    pub version: &'static str,
    pub error: CliError,
}

pub fn hex_digest(bytes: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}
