use serde::Serialize;
use thiserror::Error;

/// A fault raised while executing a round.
#[derive(Debug, Error, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EngineError {
    #[error("round {round}: machine {machine} needs {words} words, budget {budget}")]
    MemoryExceeded { round: usize, machine: usize, words: usize, budget: usize },
    #[error("round {round}: machine {machine} emitted {words} words, budget {budget}")]
    OversizedMessage { round: usize, machine: usize, words: usize, budget: usize },
    #[error("round {round}: machine {machine} addressed machine {to} of {machines}")]
    InvalidDestination { round: usize, machine: usize, to: usize, machines: usize },
    #[error("invalid cluster configuration: {0}")]
    InvalidConfig(String),
}

impl EngineError {
    /// Short machine-readable tag, used in trace records.
    pub fn tag(&self) -> &'static str {
        match self {
            EngineError::MemoryExceeded { .. } => "memory_exceeded",
            EngineError::OversizedMessage { .. } => "oversized_message",
            EngineError::InvalidDestination { .. } => "invalid_destination",
            EngineError::InvalidConfig(_) => "invalid_config",
        }
    }
}
