use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::config::ClusterConfig;

/// How much per-round detail a trace keeps (`MPC_TRACE`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TraceLevel {
    /// Per-machine arrays in every round record.
    Verbose,
    /// Round records with maxima only.
    #[default]
    Summary,
    /// Totals only.
    Off,
}

impl TraceLevel {
    pub fn parse(text: &str) -> Option<Self> {
        match text.trim().to_ascii_lowercase().as_str() {
            "verbose" => Some(TraceLevel::Verbose),
            "summary" => Some(TraceLevel::Summary),
            "off" => Some(TraceLevel::Off),
            _ => None,
        }
    }

    /// Reads `MPC_TRACE`; unset or unrecognised means summary.
    pub fn from_env() -> Self {
        std::env::var("MPC_TRACE").ok().and_then(|v| Self::parse(&v)).unwrap_or_default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round: usize,
    pub label: String,
    /// Excluded from the round total (free broadcast ablation).
    pub free: bool,
    pub messages: usize,
    pub words_sent: usize,
    pub max_received: usize,
    pub max_sent: usize,
    pub max_peak: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub received: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sent: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub peak: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttemptRecord {
    pub attempt: usize,
    pub seed: u64,
    pub rounds: usize,
    pub outcome: String,
}

/// One run's accounting, exported as JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub schema: u32,
    pub config: ClusterConfig,
    pub rounds: Vec<RoundRecord>,
    pub total_rounds: usize,
    /// Rounds executed, free ones included.
    pub executed_rounds: usize,
    pub peak_memory: usize,
    pub peak_per_machine: Vec<usize>,
    pub failures: Vec<String>,
    pub attempts: Vec<AttemptRecord>,
    /// Algorithm instrumentation (iteration sizes, potentials, ...).
    pub notes: BTreeMap<String, serde_json::Value>,
}

impl Trace {
    pub fn new(config: ClusterConfig) -> Self {
        let machines = config.machines;
        Trace {
            schema: 1,
            config,
            rounds: Vec::new(),
            total_rounds: 0,
            executed_rounds: 0,
            peak_memory: 0,
            peak_per_machine: vec![0; machines],
            failures: Vec::new(),
            attempts: Vec::new(),
            notes: BTreeMap::new(),
        }
    }

    /// Folds one round's per-machine figures in, honouring the trace level.
    #[allow(clippy::too_many_arguments)]
    pub(crate) fn record(
        &mut self,
        label: &str,
        free: bool,
        messages: usize,
        received: Vec<usize>,
        sent: Vec<usize>,
        peak: Vec<usize>,
        failure: Option<String>,
    ) {
        self.executed_rounds += 1;
        if !free {
            self.total_rounds += 1;
        }
        self.observe_peaks(&peak);
        if let Some(f) = &failure {
            self.failures.push(f.clone());
        }
        let level = self.config.trace;
        if level == TraceLevel::Off {
            return;
        }
        let max = |v: &[usize]| v.iter().copied().max().unwrap_or(0);
        let mut record = RoundRecord {
            round: self.executed_rounds,
            label: label.to_string(),
            free,
            messages,
            words_sent: sent.iter().sum(),
            max_received: max(&received),
            max_sent: max(&sent),
            max_peak: max(&peak),
            received: Vec::new(),
            sent: Vec::new(),
            peak: Vec::new(),
            failure,
        };
        if level == TraceLevel::Verbose {
            record.received = received;
            record.sent = sent;
            record.peak = peak;
        }
        self.rounds.push(record);
    }

    pub(crate) fn observe_peaks(&mut self, peak: &[usize]) {
        for (slot, &p) in self.peak_per_machine.iter_mut().zip(peak) {
            *slot = (*slot).max(p);
            self.peak_memory = self.peak_memory.max(p);
        }
    }

    pub fn note(&mut self, key: &str, value: serde_json::Value) {
        self.notes.insert(key.to_string(), value);
    }

    /// Peak words never exceeded the budget, or the run recorded a failure.
    pub fn within_budget_or_failed(&self) -> bool {
        self.peak_memory <= self.config.memory_budget || !self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("trace serializes")
    }
}
