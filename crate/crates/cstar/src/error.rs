use std::path::PathBuf;

use thiserror::Error;

use cstar_core::analysis::AnalysisError;
use cstar_core::constructions::ConstructionError;
use cstar_core::encoding::EncodingError;
use cstar_core::quantum::QuantumError;
use cstar_core::NumError;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("malformed {what}: {source}")]
    Parse {
        what: &'static str,
        source: serde_json::Error,
    },
    #[error("invalid input: {0}")]
    Invariant(String),
    #[error("verification failed: {check}")]
    Verification { check: String },
}

impl CliError {
    /// 1 verification failure, 2 unreadable or malformed input, 3 input that
    /// parses but violates an invariant.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Verification { .. } => 1,
            CliError::Read { .. } | CliError::Write { .. } | CliError::Parse { .. } => 2,
            CliError::Invariant(_) => 3,
        }
    }
}

macro_rules! invariant_from {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Invariant(e.to_string())
            }
        })*
    };
}

invariant_from!(NumError, QuantumError, EncodingError, ConstructionError, AnalysisError);
