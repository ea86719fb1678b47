use lrmr_core::{Rational, Weight};
use lrmr_engine::{ClusterConfig, Trace};
use serde::Serialize;

/// A rational printed both exactly and to six decimals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Exact {
    pub exact: String,
    pub decimal: String,
}

impl Exact {
    pub fn new(x: &Rational) -> Self {
        Exact { exact: x.to_string(), decimal: decimal(x) }
    }

    pub fn unbounded() -> Self {
        Exact { exact: "inf".into(), decimal: "inf".into() }
    }

    pub fn from_ratio(r: Option<&Rational>) -> Self {
        r.map_or_else(Exact::unbounded, Exact::new)
    }
}

/// Rounds half away from zero.
pub fn decimal(x: &Rational) -> String {
    let scaled = (x.clone() * Rational::from_count(1_000_000)).round().to_integer().to_string();
    let (sign, digits) = match scaled.strip_prefix('-') {
        Some(rest) => ("-", rest),
        None => ("", scaled.as_str()),
    };
    let digits = format!("{digits:0>7}");
    let (int, frac) = digits.split_at(digits.len() - 6);
    format!("{sign}{int}.{frac}")
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum OracleValue {
    Value(Exact),
    Unavailable { notice: String },
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub schema: u32,
    pub algorithm: &'static str,
    pub operation: &'static str,
    pub bound: &'static str,
    pub digest: String,
    pub config: ClusterConfig,
    pub rounds: usize,
    pub iterations: usize,
    pub peak_memory: usize,
    pub peak_per_machine: Vec<usize>,
    pub attempts: usize,
    pub verdict: String,
    pub objective: Option<Exact>,
    pub oracle: Option<OracleValue>,
    pub ratio: Option<Exact>,
    pub factor: Option<Exact>,
    pub within_factor: Option<bool>,
}

impl RunReport {
    pub fn from_trace(algorithm: &crate::Algorithm, digest: String, trace: &Trace, iterations: usize) -> Self {
        RunReport {
            schema: 1,
            algorithm: algorithm.name(),
            operation: algorithm.operation(),
            bound: algorithm.bound(),
            digest,
            config: trace.config.clone(),
            rounds: trace.total_rounds,
            iterations,
            peak_memory: trace.peak_memory,
            peak_per_machine: trace.peak_per_machine.clone(),
            attempts: trace.attempts.len(),
            verdict: String::new(),
            objective: None,
            oracle: None,
            ratio: None,
            factor: None,
            within_factor: None,
        }
    }
}
