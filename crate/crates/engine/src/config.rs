use serde::{Deserialize, Serialize};

use crate::error::EngineError;
use crate::trace::TraceLevel;

/// User-facing cluster settings. Anything left `None` is derived from the
/// instance when the cluster is built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterParams {
    pub mu: f64,
    pub c: Option<f64>,
    pub eta: Option<usize>,
    pub machines: Option<usize>,
    pub memory_budget: Option<usize>,
    pub fanout: Option<usize>,
    /// Constant in front of the default budget `K * n^{1+μ}`.
    pub k: usize,
    pub seed: u64,
    /// Tree rounds still run but are not added to the round total.
    pub free_broadcast: bool,
    /// Budget `K * ceil(N / M)` for input size `N` instead of `K * n^{1+μ}`.
    pub strict_mpc: bool,
    pub retries: usize,
    pub trace: TraceLevel,
}

impl Default for ClusterParams {
    fn default() -> Self {
        ClusterParams {
            mu: 0.2,
            c: None,
            eta: None,
            machines: None,
            memory_budget: None,
            fanout: None,
            k: 8,
            seed: 0,
            free_broadcast: false,
            strict_mpc: false,
            retries: 3,
            trace: TraceLevel::Summary,
        }
    }
}

impl ClusterParams {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_mu(mut self, mu: f64) -> Self {
        self.mu = mu;
        self
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = Some(c);
        self
    }

    pub fn with_eta(mut self, eta: usize) -> Self {
        self.eta = Some(eta);
        self
    }

    pub fn with_machines(mut self, machines: usize) -> Self {
        self.machines = Some(machines);
        self
    }

    pub fn with_budget(mut self, words: usize) -> Self {
        self.memory_budget = Some(words);
        self
    }

    pub fn with_fanout(mut self, fanout: usize) -> Self {
        self.fanout = Some(fanout);
        self
    }

    pub fn with_retries(mut self, retries: usize) -> Self {
        self.retries = retries;
        self
    }

    pub fn with_trace(mut self, trace: TraceLevel) -> Self {
        self.trace = trace;
        self
    }

    /// Fills every derived field for an instance of the given scale.
    pub fn resolve(&self, scale: &Scale) -> Result<ClusterConfig, EngineError> {
        if !self.mu.is_finite() || self.mu < 0.0 {
            return Err(EngineError::InvalidConfig(format!("mu = {} must be finite and >= 0", self.mu)));
        }
        let n = scale.n.max(1) as f64;
        let c = self.c.unwrap_or(scale.c);
        if !c.is_finite() {
            return Err(EngineError::InvalidConfig(format!("c = {c} is not finite")));
        }
        let base = ceil_pow(n, 1.0 + self.mu);
        let eta = self.eta.unwrap_or(base);
        let machines = self.machines.unwrap_or_else(|| ceil_pow(n, c - self.mu));
        let fanout_base = scale.fanout_base.max(1) as f64;
        let fanout = self.fanout.unwrap_or_else(|| ceil_pow(fanout_base, self.mu).max(2));
        let space_factor = scale.space_factor.max(1);
        let memory_budget = match self.memory_budget {
            Some(words) => words,
            None if self.strict_mpc => self.k * scale.input_words.div_ceil(machines.max(1)).max(1) * space_factor,
            None => self.k * base * space_factor,
        };
        let config = ClusterConfig {
            n: scale.n,
            mu: self.mu,
            c,
            eta,
            machines,
            memory_budget,
            fanout,
            k: self.k,
            space_factor,
            seed: self.seed,
            free_broadcast: self.free_broadcast,
            strict_mpc: self.strict_mpc,
            trace: self.trace,
        };
        config.check()?;
        Ok(config)
    }
}

/// How an algorithm sizes its cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct Scale {
    /// Problem scale `n` in `n^{1+μ}`.
    pub n: usize,
    /// Density exponent used when none is configured.
    pub c: f64,
    /// Base of the default fanout `ceil(base^μ)`.
    pub fanout_base: usize,
    /// Multiplier on the default budget.
    pub space_factor: usize,
    /// Input size in words, for the strict budget.
    pub input_words: usize,
}

impl Scale {
    /// `c = log_n(size) - 1`, clamped at zero.
    pub fn new(n: usize, size: usize) -> Self {
        Scale { n, c: density_exponent(n, size), fanout_base: n, space_factor: 1, input_words: size }
    }

    pub fn with_space_factor(mut self, factor: usize) -> Self {
        self.space_factor = factor;
        self
    }

    pub fn with_fanout_base(mut self, base: usize) -> Self {
        self.fanout_base = base;
        self
    }

    pub fn with_input_words(mut self, words: usize) -> Self {
        self.input_words = words;
        self
    }
}

/// `c` with `size = n^{1+c}`.
pub fn density_exponent(n: usize, size: usize) -> f64 {
    if n < 2 || size <= 1 {
        return 0.0;
    }
    ((size as f64).ln() / (n as f64).ln() - 1.0).max(0.0)
}

/// The fully resolved regime of one simulated cluster.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterConfig {
    pub n: usize,
    pub mu: f64,
    pub c: f64,
    pub eta: usize,
    pub machines: usize,
    pub memory_budget: usize,
    pub fanout: usize,
    pub k: usize,
    pub space_factor: usize,
    pub seed: u64,
    pub free_broadcast: bool,
    pub strict_mpc: bool,
    pub trace: TraceLevel,
}

impl ClusterConfig {
    /// Directly specified configuration, mostly for tests.
    pub fn fixed(machines: usize, memory_budget: usize, fanout: usize, seed: u64) -> Self {
        ClusterConfig {
            n: machines,
            mu: 0.0,
            c: 0.0,
            eta: memory_budget,
            machines,
            memory_budget,
            fanout,
            k: 1,
            space_factor: 1,
            seed,
            free_broadcast: false,
            strict_mpc: false,
            trace: TraceLevel::Verbose,
        }
    }

    pub fn check(&self) -> Result<(), EngineError> {
        if self.machines == 0 {
            return Err(EngineError::InvalidConfig("at least one machine is required".into()));
        }
        if self.fanout < 2 {
            return Err(EngineError::InvalidConfig(format!("fanout {} must be at least 2", self.fanout)));
        }
        if self.memory_budget == 0 {
            return Err(EngineError::InvalidConfig("memory budget must be positive".into()));
        }
        Ok(())
    }

    /// `n^x` for thresholds in the algorithms.
    pub fn n_pow(&self, x: f64) -> f64 {
        (self.n.max(1) as f64).powf(x)
    }
}

/// `ceil(base^exponent)`, at least 1, ignoring float noise around integers.
pub fn ceil_pow(base: f64, exponent: f64) -> usize {
    let v = base.powf(exponent);
    let r = v.round();
    let c = if (v - r).abs() < 1e-9 { r } else { v.ceil() };
    c.max(1.0) as usize
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_follow_exponents() {
        let scale = Scale::new(1024, 1 << 14);
        let cfg = ClusterParams::default().resolve(&scale).unwrap();
        assert!((cfg.c - 0.4).abs() < 1e-12);
        assert_eq!(cfg.eta, 4096);
        assert_eq!(cfg.machines, 4);
        assert_eq!(cfg.fanout, 4);
        assert_eq!(cfg.memory_budget, 8 * 4096);
    }

    #[test]
    fn overrides_win() {
        let scale = Scale::new(100, 1000);
        let cfg = ClusterParams::default().with_eta(100).with_machines(7).with_fanout(3).resolve(&scale).unwrap();
        assert_eq!((cfg.eta, cfg.machines, cfg.fanout), (100, 7, 3));
    }

    #[test]
    fn sparse_inputs_get_one_machine_and_fanout_two() {
        let cfg = ClusterParams::default().with_mu(0.0).resolve(&Scale::new(5, 3)).unwrap();
        assert_eq!(cfg.machines, 1);
        assert_eq!(cfg.fanout, 2);
    }

    #[test]
    fn strict_budget_divides_input() {
        let mut params = ClusterParams::default().with_machines(10);
        params.strict_mpc = true;
        let cfg = params.resolve(&Scale::new(100, 1000)).unwrap();
        assert_eq!(cfg.memory_budget, 8 * 100);
    }

    #[test]
    fn rejects_bad_values() {
        assert!(ClusterParams::default().with_mu(-1.0).resolve(&Scale::new(10, 10)).is_err());
        assert!(ClusterParams::default().with_fanout(1).resolve(&Scale::new(10, 10)).is_err());
        assert!(ClusterParams::default().with_machines(0).resolve(&Scale::new(10, 10)).is_err());
    }
}
