use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::dsl::ParseError;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    /// Success, or the property holds.
    Holds = 0,
    /// A valid negative answer.
    DoesNotHold = 1,
    Usage = 2,
    /// Exact and numerical results disagree.
    Inconsistent = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}", .err.render(.input))]
    Parse { input: String, err: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] pairwalk::Error),
    #[error("writing {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn exit(&self) -> Exit {
        match self {
            // the theorem's hypothesis on H fails: a mathematical answer
            CliError::Core(pairwalk::Error::HNoPST(_)) => Exit::DoesNotHold,
            _ => Exit::Usage,
        }
    }
}

/// What a command hands back before timing and the command echo are added.
pub struct Outcome {
    pub inputs: Value,
    pub result: Value,
    pub warnings: Vec<String>,
    /// Human-readable rendering.
    pub text: String,
    pub exit: Exit,
}

#[derive(Debug, Clone, PartialEq, Serialize, serde::Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Value,
    pub result: Value,
    pub warnings: Vec<String>,
    pub wall_time_ms: f64,
    pub exit_code: i32,
}

pub fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report values serialize")
}
