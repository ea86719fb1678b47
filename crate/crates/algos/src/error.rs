use lrmr_core::CoreError;
use lrmr_engine::{AttemptRecord, EngineError, Trace};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum AlgoError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error("epsilon must be positive, got {0}")]
    InvalidEpsilon(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("retries exhausted after {} attempts", attempts.len())]
    RetriesExhausted { attempts: Vec<AttemptRecord>, trace: Box<Trace> },
}

impl AlgoError {
    /// The trace of the last attempt, when the run got that far.
    pub fn trace(&self) -> Option<&Trace> {
        match self {
            AlgoError::RetriesExhausted { trace, .. } => Some(trace),
            _ => None,
        }
    }
}
