use crate::chain::ChainState;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// The state is outside the model's reachable range.
    #[error("state {state} is not reachable for model `{model}`")]
    Unreachable { model: String, state: ChainState },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid urn specification: {0}")]
    InvalidSpec(String),

    /// alpha1 <= -1/2: the fluctuations are not of order sqrt(n).
    #[error("small-urn condition violated: alpha1 = {alpha1} is not > -1/2")]
    SmallUrn { alpha1: f64 },

    /// D <= 0: the Gaussian limit collapses.
    #[error("degenerate limit: D = {d}")]
    Degenerate { d: f64 },

    #[error("DP budget exceeded: {cells} cells needed, budget is {budget}")]
    Budget { cells: u64, budget: u64 },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("Gamma pole at {0}")]
    Pole(f64),

    #[error("invalid configuration: {0}")]
    Config(String),
}

impl Error {
    /// Stable process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SmallUrn { .. } | Error::Degenerate { .. } => 3,
            Error::Budget { .. } => 4,
            _ => 2,
        }
    }
}
