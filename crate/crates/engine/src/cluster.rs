use std::sync::Mutex;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::config::ClusterConfig;
use crate::error::EngineError;
use crate::trace::Trace;
use crate::tree::Tree;
use crate::words::Words;

/// A delivered message. Inboxes are ordered by `(from, key)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Envelope<M> {
    pub from: usize,
    pub key: u64,
    pub msg: M,
}

/// Messages in flight between two rounds, one box per destination.
#[derive(Debug, Clone, PartialEq)]
pub struct Mailbox<M> {
    boxes: Vec<Vec<Envelope<M>>>,
}

impl<M: Words> Mailbox<M> {
    pub fn empty(machines: usize) -> Self {
        Mailbox { boxes: (0..machines).map(|_| Vec::new()).collect() }
    }

    pub fn is_empty(&self) -> bool {
        self.boxes.iter().all(Vec::is_empty)
    }

    pub fn count(&self) -> usize {
        self.boxes.iter().map(Vec::len).sum()
    }

    /// Words waiting for machine `id`.
    pub fn words_for(&self, id: usize) -> usize {
        self.boxes[id].iter().map(|e| e.msg.words()).sum()
    }

    pub fn inbox(&self, id: usize) -> &[Envelope<M>] {
        &self.boxes[id]
    }
}

/// Per-machine view during one step.
pub struct Ctx<M> {
    pub id: usize,
    pub round: usize,
    pub machines: usize,
    rng: ChaCha8Rng,
    outbox: Vec<(usize, u64, M)>,
    emitted: u64,
    scratch: usize,
}

impl<M: Words> Ctx<M> {
    fn new(id: usize, round: usize, machines: usize, rng: ChaCha8Rng) -> Self {
        Ctx { id, round, machines, rng, outbox: Vec::new(), emitted: 0, scratch: 0 }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn is_central(&self) -> bool {
        self.id == 0
    }

    /// Sends with the emission index as ordering key.
    pub fn send(&mut self, to: usize, msg: M) {
        let key = self.emitted;
        self.send_keyed(to, key, msg);
    }

    pub fn send_keyed(&mut self, to: usize, key: u64, msg: M) {
        self.emitted += 1;
        self.outbox.push((to, key, msg));
    }

    /// Declares a temporary footprint of `words` during this step. The
    /// largest declaration is added on top of the resident peak.
    pub fn scratch(&mut self, words: usize) {
        self.scratch = self.scratch.max(words);
    }

    pub fn outbox_words(&self) -> usize {
        self.outbox.iter().map(|(_, _, m)| m.words()).sum()
    }
}

/// Seed for machine `id` in `round`: SHA-256 of the three values.
pub fn machine_seed(seed: u64, round: usize, id: usize, domain: u8) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(seed.to_le_bytes());
    h.update((round as u64).to_le_bytes());
    h.update((id as u64).to_le_bytes());
    h.update([domain]);
    h.finalize().into()
}

struct StepResult<O> {
    outbox: Vec<(usize, u64, O)>,
    received: usize,
    sent: usize,
    peak: usize,
}

/// A fleet of machines with resident state `S`, executed round by round.
pub struct Cluster<S> {
    config: ClusterConfig,
    states: Vec<S>,
    trace: Trace,
    tree: Tree,
}

impl<S: Words + Send + Sync> Cluster<S> {
    /// Builds machine states. Call [`Cluster::check_load`] before the first
    /// round so an oversized initial shard is recorded in the trace.
    pub fn new(config: ClusterConfig, init: impl FnMut(usize) -> S) -> Result<Self, EngineError> {
        config.check()?;
        let states: Vec<S> = (0..config.machines).map(init).collect();
        let tree = Tree::new(config.machines, config.fanout);
        let trace = Trace::new(config.clone());
        Ok(Cluster { config, states, trace, tree })
    }

    /// Checks the resident state of every machine against the budget.
    pub fn check_load(&mut self, label: &str) -> Result<(), EngineError> {
        let mailbox: Mailbox<()> = self.empty();
        self.local(label, mailbox, |_, _, _| {})
    }

    pub fn config(&self) -> &ClusterConfig {
        &self.config
    }

    pub fn machines(&self) -> usize {
        self.config.machines
    }

    pub fn tree(&self) -> Tree {
        self.tree
    }

    /// Read-only view of every machine, for output collection and
    /// instrumentation.
    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn central(&self) -> &S {
        &self.states[0]
    }

    /// Rounds counted so far.
    pub fn rounds(&self) -> usize {
        self.trace.total_rounds
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    pub fn trace_mut(&mut self) -> &mut Trace {
        &mut self.trace
    }

    pub fn into_trace(self) -> Trace {
        self.trace
    }

    pub fn empty<M: Words>(&self) -> Mailbox<M> {
        Mailbox::empty(self.machines())
    }

    /// One synchronous round: every machine runs `step` on its state and
    /// inbox; the returned mailbox is delivered at the next round.
    pub fn round<I, O, F>(&mut self, label: &str, inbox: Mailbox<I>, step: F) -> Result<Mailbox<O>, EngineError>
    where
        I: Words + Send,
        O: Words + Send,
        F: Fn(&mut S, Vec<Envelope<I>>, &mut Ctx<O>) + Sync,
    {
        self.execute(label, false, inbox, step)
    }

    fn execute<I, O, F>(
        &mut self,
        label: &str,
        free: bool,
        inbox: Mailbox<I>,
        step: F,
    ) -> Result<Mailbox<O>, EngineError>
    where
        I: Words + Send,
        O: Words + Send,
        F: Fn(&mut S, Vec<Envelope<I>>, &mut Ctx<O>) + Sync,
    {
        let round = self.trace.executed_rounds + 1;
        let machines = self.machines();
        let seed = self.config.seed;
        let results: Vec<StepResult<O>> = self
            .states
            .par_iter_mut()
            .zip(inbox.boxes.into_par_iter())
            .enumerate()
            .map(|(id, (state, messages))| {
                let received: usize = messages.iter().map(|e| e.msg.words()).sum();
                let before = state.words();
                let rng = ChaCha8Rng::from_seed(machine_seed(seed, round, id, 0));
                let mut ctx = Ctx::new(id, round, machines, rng);
                step(state, messages, &mut ctx);
                let sent = ctx.outbox_words();
                let peak = (before + received).max(state.words() + sent) + ctx.scratch;
                StepResult { outbox: ctx.outbox, received, sent, peak }
            })
            .collect();
        self.deliver(label, free, round, results)
    }

    fn deliver<O: Words>(
        &mut self,
        label: &str,
        free: bool,
        round: usize,
        results: Vec<StepResult<O>>,
    ) -> Result<Mailbox<O>, EngineError> {
        let budget = self.config.memory_budget;
        let machines = self.machines();
        let mut fault = None;
        for (id, r) in results.iter().enumerate() {
            if let Some(&(to, _, _)) = r.outbox.iter().find(|(to, _, _)| *to >= machines) {
                fault = Some(EngineError::InvalidDestination { round, machine: id, to, machines });
            } else if r.sent > budget {
                fault = Some(EngineError::OversizedMessage { round, machine: id, words: r.sent, budget });
            } else if r.peak > budget {
                fault = Some(EngineError::MemoryExceeded { round, machine: id, words: r.peak, budget });
            }
            if fault.is_some() {
                break;
            }
        }
        let messages = results.iter().map(|r| r.outbox.len()).sum();
        let received = results.iter().map(|r| r.received).collect();
        let sent = results.iter().map(|r| r.sent).collect();
        let peak = results.iter().map(|r| r.peak).collect();
        self.trace.record(label, free, messages, received, sent, peak, fault.as_ref().map(|f| f.to_string()));
        if let Some(f) = fault {
            return Err(f);
        }
        let mut mailbox = Mailbox::empty(machines);
        for (from, r) in results.into_iter().enumerate() {
            for (to, key, msg) in r.outbox {
                mailbox.boxes[to].push(Envelope { from, key, msg });
            }
        }
        for b in &mut mailbox.boxes {
            b.sort_by_key(|e| (e.from, e.key));
        }
        Ok(mailbox)
    }

    /// Local computation on delivered messages without a communication
    /// round. Memory is still checked; nothing may be sent.
    pub fn local<I, F>(&mut self, label: &str, inbox: Mailbox<I>, step: F) -> Result<(), EngineError>
    where
        I: Words + Send,
        F: Fn(&mut S, Vec<Envelope<I>>, &mut Ctx<()>) + Sync,
    {
        let round = self.trace.executed_rounds;
        let machines = self.machines();
        let seed = self.config.seed;
        let budget = self.config.memory_budget;
        let peaks: Vec<usize> = self
            .states
            .par_iter_mut()
            .zip(inbox.boxes.into_par_iter())
            .enumerate()
            .map(|(id, (state, messages))| {
                let received: usize = messages.iter().map(|e| e.msg.words()).sum();
                let before = state.words();
                let rng = ChaCha8Rng::from_seed(machine_seed(seed, round, id, 1));
                let mut ctx = Ctx::new(id, round, machines, rng);
                step(state, messages, &mut ctx);
                assert!(ctx.outbox.is_empty(), "local pass `{label}` tried to send");
                (before + received).max(state.words()) + ctx.scratch
            })
            .collect();
        self.trace.observe_peaks(&peaks);
        if let Some((machine, &words)) = peaks.iter().enumerate().find(|(_, &p)| p > budget) {
            let err = EngineError::MemoryExceeded { round, machine, words, budget };
            self.trace.failures.push(format!("{label}: {err}"));
            return Err(err);
        }
        Ok(())
    }

    /// Central computation between rounds (machine 0 only).
    pub fn central_step(&mut self, label: &str, step: impl FnOnce(&mut S) -> usize) -> Result<(), EngineError> {
        let before = self.states[0].words();
        let scratch = step(&mut self.states[0]);
        let peak = before.max(self.states[0].words()) + scratch;
        let mut peaks = vec![0; self.machines()];
        peaks[0] = peak;
        self.trace.observe_peaks(&peaks);
        if peak > self.config.memory_budget {
            let err = EngineError::MemoryExceeded {
                round: self.trace.executed_rounds,
                machine: 0,
                words: peak,
                budget: self.config.memory_budget,
            };
            self.trace.failures.push(format!("{label}: {err}"));
            return Err(err);
        }
        Ok(())
    }

    /// Sends `payload` from the central machine down the tree; `install`
    /// runs once on every machine (central included). Returns rounds used.
    pub fn broadcast<P, F>(&mut self, label: &str, payload: P, install: F) -> Result<usize, EngineError>
    where
        P: Words + Clone + Send + Sync,
        F: Fn(&mut S, &P) + Sync,
    {
        let tree = self.tree;
        let depth = tree.depth();
        let free = self.config.free_broadcast;
        let mut mailbox: Mailbox<P> = self.empty();
        for level in 1..=depth {
            let label = format!("{label}/broadcast:{level}");
            mailbox = self.execute(&label, free, mailbox, |state, inbox, ctx| {
                let held = if ctx.id == 0 && level == 1 {
                    Some(payload.clone())
                } else {
                    inbox.into_iter().next().map(|e| e.msg)
                };
                if let Some(p) = held {
                    install(state, &p);
                    for child in tree.children(ctx.id) {
                        ctx.send(child, p.clone());
                    }
                }
            })?;
        }
        let root_pending = depth == 0;
        self.local(&format!("{label}/install"), mailbox, |state, inbox, ctx| {
            if let Some(e) = inbox.into_iter().next() {
                install(state, &e.msg);
            } else if root_pending && ctx.id == 0 {
                install(state, &payload);
            }
        })?;
        Ok(depth)
    }

    /// Folds `local(state)` over all machines up the tree; the result ends
    /// at the central machine and is returned with the rounds used.
    pub fn aggregate<V, L, C>(&mut self, label: &str, local: L, combine: C) -> Result<(V, usize), EngineError>
    where
        V: Words + Clone + Send + Sync + PartialEq + std::fmt::Debug,
        L: Fn(&S) -> V + Sync,
        C: Fn(&V, &V) -> V + Sync,
    {
        if cfg!(debug_assertions) {
            self.probe_combine(&local, &combine);
        }
        let tree = self.tree;
        let depth = tree.depth();
        let free = self.config.free_broadcast;
        let mut mailbox: Mailbox<V> = self.empty();
        for r in 1..=depth {
            let sending = depth + 1 - r;
            let label = format!("{label}/aggregate:{r}");
            mailbox = self.execute(&label, free, mailbox, |state, inbox, ctx| {
                if tree.level(ctx.id) == sending {
                    let value = inbox.iter().fold(local(state), |acc, e| combine(&acc, &e.msg));
                    let parent = tree.parent(ctx.id).expect("non-root has a parent");
                    ctx.send(parent, value);
                }
            })?;
        }
        let result = Mutex::new(None);
        self.local(&format!("{label}/fold"), mailbox, |state, inbox, ctx| {
            if ctx.id == 0 {
                let value = inbox.iter().fold(local(state), |acc, e| combine(&acc, &e.msg));
                *result.lock().expect("result lock") = Some(value);
            }
        })?;
        let value = result.into_inner().expect("result lock").expect("root folded");
        Ok((value, depth))
    }

    fn probe_combine<V, L, C>(&self, local: &L, combine: &C)
    where
        V: PartialEq + std::fmt::Debug,
        L: Fn(&S) -> V,
        C: Fn(&V, &V) -> V,
    {
        let pick = |i: usize| local(&self.states[i % self.states.len()]);
        let (a, b, c) = (pick(0), pick(1), pick(2));
        let left = combine(&combine(&a, &b), &c);
        let right = combine(&a, &combine(&c, &b));
        assert_eq!(left, right, "aggregate combine is not associative and commutative");
    }
}
