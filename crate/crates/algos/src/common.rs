//! Pieces shared by every driver: the retry loop, contiguous sharding and
//! exponent thresholds.

use std::ops::Range;

use lrmr_engine::{
    ceil_pow, run_with_retries, AttemptError, ClusterConfig, ClusterParams, EngineError, RetryError, Scale, Trace,
};
use serde::Serialize;

use crate::error::AlgoError;

/// A solution together with the accounting of the attempt that produced it.
#[derive(Debug, Clone)]
pub struct Outcome<T> {
    pub solution: T,
    pub trace: Trace,
    /// Main-loop iterations of the successful attempt.
    pub iterations: usize,
}

/// Why an attempt stopped early. Both kinds are retried with the next seed.
#[derive(Debug)]
pub(crate) enum Failure {
    Declared(String),
    Engine(EngineError),
}

impl From<EngineError> for Failure {
    fn from(err: EngineError) -> Self {
        Failure::Engine(err)
    }
}

pub(crate) type Attempt<T> = (Result<(T, usize), Failure>, Trace);

/// Resolves the cluster for every seed and retries failed attempts.
pub(crate) fn drive<T>(
    params: &ClusterParams,
    scale: &Scale,
    mut attempt: impl FnMut(ClusterConfig) -> Attempt<T>,
) -> Result<Outcome<T>, AlgoError> {
    let result = run_with_retries(params.seed, params.retries, |seed, _| {
        let config = params.clone().with_seed(seed).resolve(scale).map_err(|e| AttemptError::Fatal(e.into()))?;
        let (result, mut trace) = attempt(config);
        match result {
            Ok((solution, iterations)) => {
                let rounds = trace.total_rounds;
                Ok(((solution, iterations, trace), rounds))
            }
            Err(Failure::Declared(reason)) => {
                trace.failures.push(reason.clone());
                Err(AttemptError::Retryable { reason, trace: Box::new(trace) })
            }
            Err(Failure::Engine(e)) => {
                Err(AttemptError::Retryable { reason: format!("{}: {e}", e.tag()), trace: Box::new(trace) })
            }
        }
    });
    match result {
        Ok(((solution, iterations, mut trace), attempts)) => {
            trace.attempts = attempts;
            Ok(Outcome { solution, trace, iterations })
        }
        Err(RetryError::Exhausted { attempts, mut last_trace }) => {
            last_trace.attempts = attempts.clone();
            Err(AlgoError::RetriesExhausted { attempts, trace: last_trace })
        }
        Err(RetryError::Fatal(e)) => Err(e),
    }
}

/// Contiguous split of `items` ids over `machines`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Shards {
    pub items: usize,
    pub machines: usize,
}

impl Shards {
    pub fn new(items: usize, machines: usize) -> Self {
        Shards { items, machines: machines.max(1) }
    }

    pub fn owner(&self, item: usize) -> usize {
        ((item as u128 * self.machines as u128) / self.items.max(1) as u128) as usize
    }

    pub fn range(&self, machine: usize) -> Range<usize> {
        let at = |k: usize| ((k as u128 * self.items as u128).div_ceil(self.machines as u128)) as usize;
        at(machine)..at(machine + 1)
    }
}

/// `ceil(base^x)`, at least 1: the integer form of `d >= base^x`.
pub fn threshold(base: usize, x: f64) -> usize {
    ceil_pow(base.max(1) as f64, x)
}

pub(crate) fn note<T: Serialize>(trace: &mut Trace, key: &str, value: T) {
    trace.note(key, serde_json::to_value(value).expect("note serializes"));
}
