//! Whole-run retries on declared failures.

use crate::trace::{AttemptRecord, Trace};

/// Why one attempt did not produce a result.
#[derive(Debug)]
pub enum AttemptError<E> {
    /// A declared w.h.p. failure or an engine fault; the run is repeated
    /// with the next seed.
    Retryable { reason: String, trace: Box<Trace> },
    /// Not worth repeating (bad input or parameters).
    Fatal(E),
}

#[derive(Debug)]
pub enum RetryError<E> {
    Exhausted { attempts: Vec<AttemptRecord>, last_trace: Box<Trace> },
    Fatal(E),
}

/// Runs `attempt(seed, index)` with `seed`, `seed + 1`, ... until it
/// succeeds or `retries` repeats have failed. Every attempt is recorded.
pub fn run_with_retries<T, E>(
    seed: u64,
    retries: usize,
    mut attempt: impl FnMut(u64, usize) -> Result<(T, usize), AttemptError<E>>,
) -> Result<(T, Vec<AttemptRecord>), RetryError<E>> {
    let mut attempts = Vec::new();
    let mut index = 0;
    loop {
        let s = seed.wrapping_add(index as u64);
        match attempt(s, index) {
            Ok((value, rounds)) => {
                attempts.push(AttemptRecord { attempt: index, seed: s, rounds, outcome: "ok".into() });
                return Ok((value, attempts));
            }
            Err(AttemptError::Fatal(e)) => return Err(RetryError::Fatal(e)),
            Err(AttemptError::Retryable { reason, trace }) => {
                attempts.push(AttemptRecord { attempt: index, seed: s, rounds: trace.total_rounds, outcome: reason });
                if index >= retries {
                    return Err(RetryError::Exhausted { attempts, last_trace: trace });
                }
            }
        }
        index += 1;
    }
}
