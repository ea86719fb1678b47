//! Randomized local ratio for maximum weight matching and b-matching.
//!
//! The central machine keeps `φ(v)`, the total reduction applied at `v`, and
//! a stack of pushed edges. Every shard keeps a copy of `φ` so an alive edge
//! can test its modified weight `w - φ(u) - φ(v)` without a round trip.

use lrmr_core::{Graph, Matching, Weight};
use lrmr_engine::{Cluster, ClusterConfig, ClusterParams, Mailbox, Scale, TraceLevel, Words};
use rand::seq::index;
use rand::Rng;
use serde_json::json;

use crate::common::{drive, note, Attempt, Failure, Outcome, Shards};
use crate::error::AlgoError;

/// An alive edge shipped to the central machine. Bit 0 of `mask` puts it in
/// `E'_u`, bit 1 in `E'_v`. Counted as four words: the mask packs into the id.
#[derive(Debug, Clone)]
struct Sampled<W> {
    id: usize,
    u: usize,
    v: usize,
    w: W,
    mask: u8,
}

impl<W> Words for Sampled<W> {
    fn words(&self) -> usize {
        4
    }
}

/// New `φ` values for touched vertices and the edges pushed this iteration.
#[derive(Debug, Clone)]
struct Update<W> {
    phi: Vec<(usize, W)>,
    pushed: Vec<usize>,
}

impl<W> Words for Update<W> {
    fn words(&self) -> usize {
        2 * self.phi.len() + self.pushed.len()
    }
}

/// Central bookkeeping shared by both variants.
struct Central<W> {
    stack: Vec<(usize, usize, usize)>,
    update: Update<W>,
    failed: Option<String>,
    chosen: Vec<usize>,
}

impl<W> Central<W> {
    fn new() -> Self {
        Central {
            stack: Vec::new(),
            update: Update { phi: Vec::new(), pushed: Vec::new() },
            failed: None,
            chosen: Vec::new(),
        }
    }

    fn words(&self) -> usize {
        3 * self.stack.len() + self.update.words() + self.chosen.len()
    }
}

/// Greedy unwind of the stack, newest first, respecting capacities `b`.
fn unwind(stack: &[(usize, usize, usize)], b: impl Fn(usize) -> usize, n: usize) -> Vec<usize> {
    let mut load = vec![0usize; n];
    let mut chosen = Vec::new();
    for &(id, u, v) in stack.iter().rev() {
        if load[u] < b(u) && load[v] < b(v) {
            load[u] += 1;
            load[v] += 1;
            chosen.push(id);
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Touched vertices with their current `φ`, ascending.
fn touched<W: Clone>(phi: &[W], mut vertices: Vec<usize>) -> Vec<(usize, W)> {
    vertices.sort_unstable();
    vertices.dedup();
    vertices.into_iter().map(|x| (x, phi[x].clone())).collect()
}

/// Pairs each sampled edge end with its sample index, sorted by vertex then edge id.
fn per_vertex<W>(samples: &[Sampled<W>]) -> Vec<(usize, usize)> {
    let mut rows = Vec::with_capacity(2 * samples.len());
    for (i, s) in samples.iter().enumerate() {
        if s.mask & 1 != 0 {
            rows.push((s.u, i));
        }
        if s.mask & 2 != 0 {
            rows.push((s.v, i));
        }
    }
    rows.sort_by_key(|&(x, i)| (x, samples[i].id));
    rows
}

fn max_alive_degree(n: usize, edges: impl Iterator<Item = (usize, usize)>) -> usize {
    let mut deg = vec![0usize; n];
    for (u, v) in edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    deg.into_iter().max().unwrap_or(0)
}

// ---------------------------------------------------------------------------
// Matching

struct MatchMachine<W> {
    /// Alive edges `(id, u, v, w)`.
    edges: Vec<(usize, usize, usize, W)>,
    phi: Vec<W>,
    alive_total: usize,
    central: Option<Central<W>>,
}

impl<W> Words for MatchMachine<W> {
    fn words(&self) -> usize {
        4 * self.edges.len() + self.phi.len() + 1 + self.central.as_ref().map_or(0, Central::words)
    }
}

/// Maximum weight matching within factor 2.
pub fn approx_max_matching<W: Weight>(
    graph: &Graph<W>,
    params: &ClusterParams,
) -> Result<Outcome<Matching>, AlgoError> {
    let scale = Scale::new(graph.n(), graph.m()).with_input_words(4 * graph.m()).with_space_factor(6);
    let outcome = drive(params, &scale, |config| match_attempt(graph, config))?;
    Ok(Outcome {
        solution: Matching::from_edges(graph, outcome.solution),
        trace: outcome.trace,
        iterations: outcome.iterations,
    })
}

fn match_attempt<W: Weight>(graph: &Graph<W>, config: ClusterConfig) -> Attempt<Vec<usize>> {
    let shards = Shards::new(graph.m(), config.machines);
    let init = |id: usize| MatchMachine {
        edges: shards
            .range(id)
            .map(|e| (e, graph.edge(e)))
            .filter(|(_, e)| e.w > W::zero())
            .map(|(id, e)| (id, e.u, e.v, e.w.clone()))
            .collect(),
        phi: vec![W::zero(); graph.n()],
        alive_total: 0,
        central: (id == 0).then(Central::new),
    };
    let mut cluster = Cluster::new(config, init).expect("resolved config is valid");
    let result = match_iterate(&mut cluster, graph.n());
    (result, cluster.into_trace())
}

fn match_iterate<W: Weight>(cluster: &mut Cluster<MatchMachine<W>>, n: usize) -> Result<(Vec<usize>, usize), Failure> {
    let eta = cluster.config().eta;
    let verbose = cluster.config().trace == TraceLevel::Verbose;
    cluster.check_load("load")?;
    let degree = |c: &Cluster<MatchMachine<W>>| {
        max_alive_degree(n, c.states().iter().flat_map(|s| s.edges.iter().map(|e| (e.1, e.2))))
    };
    let mut alive = count_edges(cluster)?;
    let mut degrees = vec![degree(cluster)];
    let mut history = Vec::new();
    let mut iterations = 0;
    while alive > 0 {
        iterations += 1;
        let sampled: Mailbox<Sampled<W>> = cluster.round("match/sample", cluster.empty::<()>(), |s, _, ctx| {
            let full = s.alive_total < 4 * eta;
            let p = (eta as f64 / s.alive_total as f64).min(1.0);
            for (id, u, v, w) in &s.edges {
                let mask = if full || p >= 1.0 {
                    3
                } else {
                    let rng = ctx.rng();
                    (rng.random_bool(p) as u8) | ((rng.random_bool(p) as u8) << 1)
                };
                if mask != 0 {
                    ctx.send(0, Sampled { id: *id, u: *u, v: *v, w: w.clone(), mask });
                }
            }
        })?;
        let mut bits = 0;
        for e in sampled.inbox(0) {
            bits += e.msg.mask.count_ones() as usize;
        }
        cluster.local("match/local-ratio", sampled, |s, inbox, ctx| {
            if !ctx.is_central() {
                return;
            }
            let samples: Vec<Sampled<W>> = inbox.into_iter().map(|e| e.msg).collect();
            let rows = per_vertex(&samples);
            ctx.scratch(2 * rows.len());
            let c = s.central.as_mut().expect("central state");
            c.update = Update { phi: Vec::new(), pushed: Vec::new() };
            let bits: usize = samples.iter().map(|x| x.mask.count_ones() as usize).sum();
            if bits > 8 * eta {
                c.failed = Some(format!("{bits} sampled edge ends exceed {}", 8 * eta));
                return;
            }
            let phi = &mut s.phi;
            let mut changed = Vec::new();
            let mut start = 0;
            while start < rows.len() {
                let x = rows[start].0;
                let end = start + rows[start..].iter().take_while(|r| r.0 == x).count();
                let mut best: Option<(W, usize, usize, usize)> = None;
                for &(_, i) in &rows[start..end] {
                    let Sampled { id, u, v, w, .. } = &samples[i];
                    let g = w.clone() - phi[*u].clone() - phi[*v].clone();
                    if g > W::zero() && best.as_ref().is_none_or(|b| g > b.0) {
                        best = Some((g, *id, *u, *v));
                    }
                }
                if let Some((g, id, u, v)) = best {
                    phi[u] = phi[u].clone() + g.clone();
                    phi[v] = phi[v].clone() + g;
                    c.stack.push((id, u, v));
                    c.update.pushed.push(id);
                    changed.extend([u, v]);
                }
                start = end;
            }
            c.update.phi = touched(phi, changed);
            c.update.pushed.sort_unstable();
        })?;
        let central = cluster.central().central.as_ref().expect("central state");
        if let Some(reason) = &central.failed {
            return Err(Failure::Declared(reason.clone()));
        }
        let update = central.update.clone();
        let pushed = update.pushed.len();
        cluster.broadcast("match/phi", update, |s, up| {
            for (x, val) in &up.phi {
                s.phi[*x] = val.clone();
            }
            let phi = &s.phi;
            s.edges.retain(|(id, u, v, w)| {
                up.pushed.binary_search(id).is_err() && w.clone() - phi[*u].clone() - phi[*v].clone() > W::zero()
            });
        })?;
        let next = count_edges(cluster)?;
        degrees.push(degree(cluster));
        history.push(json!({
            "edges": alive,
            "p": (eta as f64 / alive as f64).min(1.0),
            "full": alive < 4 * eta,
            "sampled": bits,
            "pushed": pushed,
            "next": next,
        }));
        alive = next;
    }
    cluster.central_step("match/unwind", |s| {
        let c = s.central.as_mut().expect("central state");
        c.chosen = unwind(&c.stack, |_| 1, n);
        n
    })?;
    let central = cluster.central().central.as_ref().expect("central state");
    let chosen = central.chosen.clone();
    let stack: Vec<usize> = central.stack.iter().map(|e| e.0).collect();
    let trace = cluster.trace_mut();
    note(trace, "iterations", iterations);
    note(trace, "max_degree", &degrees);
    note(trace, "match_iterations", history);
    note(trace, "stack_size", stack.len());
    if verbose {
        note(trace, "stack", stack);
    }
    Ok((chosen, iterations))
}

fn count_edges<W: Weight>(cluster: &mut Cluster<MatchMachine<W>>) -> Result<usize, Failure> {
    let (total, _) = cluster.aggregate("match/count", |s| s.edges.len(), |a, b| a + b)?;
    cluster.broadcast("match/count", total, |s, &t| s.alive_total = t)?;
    Ok(total)
}

// ---------------------------------------------------------------------------
// b-matching

/// `(id, u, v, w)`.
type EdgeRow<W> = (usize, usize, usize, W);

struct BMachine<W> {
    /// Owned vertices with their alive incident edges `(id, u, v, w)`.
    incident: Vec<(usize, Vec<EdgeRow<W>>)>,
    phi: Vec<W>,
    b: Vec<usize>,
    alive_total: usize,
    central: Option<Central<W>>,
}

impl<W> Words for BMachine<W> {
    fn words(&self) -> usize {
        let lists: usize = self.incident.iter().map(|(_, l)| 1 + 4 * l.len()).sum();
        lists + self.phi.len() + self.b.len() + 1 + self.central.as_ref().map_or(0, Central::words)
    }
}

#[derive(Clone, Copy)]
struct BParams {
    eta: usize,
    /// `ln(1/δ)` with `δ = ε/(1+ε)`.
    log_inv_delta: f64,
    n_mu: f64,
    b_max: usize,
}

impl BParams {
    fn full(&self, alive: usize) -> bool {
        (alive as f64) < 2.0 * self.b_max as f64 * self.log_inv_delta * self.eta as f64
    }

    fn sample_size(&self, b: usize) -> usize {
        (b as f64 * self.log_inv_delta * self.n_mu).ceil() as usize
    }

    fn push_cap(&self, b: usize) -> usize {
        (b as f64 * self.log_inv_delta).ceil().max(1.0) as usize
    }
}

/// Maximum weight b-matching within factor `3 - 2/max(2, b) + 2ε`.
pub fn approx_b_matching<W: Weight>(
    graph: &Graph<W>,
    b: &[usize],
    epsilon: W,
    params: &ClusterParams,
) -> Result<Outcome<Matching>, AlgoError> {
    if epsilon <= W::zero() {
        return Err(AlgoError::InvalidEpsilon(epsilon.to_string()));
    }
    if b.len() != graph.n() || b.contains(&0) {
        return Err(AlgoError::InvalidParameter(format!(
            "need one capacity of at least 1 per vertex, got {} for {} vertices",
            b.len(),
            graph.n()
        )));
    }
    let one_plus = W::one() + epsilon.clone();
    let log_inv_delta = (one_plus.clone() / epsilon).approx().ln();
    let b_max = b.iter().copied().max().unwrap_or(1);
    let factor = (3.0 * b_max as f64 * log_inv_delta).ceil().max(1.0) as usize;
    let scale = Scale::new(graph.n(), graph.m()).with_input_words(8 * graph.m()).with_space_factor(factor);
    let outcome = drive(params, &scale, |config| {
        let bp = BParams { eta: config.eta, log_inv_delta, n_mu: config.n_pow(config.mu), b_max };
        b_attempt(graph, b, &one_plus, bp, config)
    })?;
    let mut solution = Matching::from_edges(graph, outcome.solution);
    solution.load = {
        let mut load = vec![0; graph.n()];
        for &id in &solution.edges {
            load[graph.edge(id).u] += 1;
            load[graph.edge(id).v] += 1;
        }
        load
    };
    Ok(Outcome { solution, trace: outcome.trace, iterations: outcome.iterations })
}

fn b_attempt<W: Weight>(
    graph: &Graph<W>,
    b: &[usize],
    one_plus: &W,
    bp: BParams,
    config: ClusterConfig,
) -> Attempt<Vec<usize>> {
    let shards = Shards::new(graph.n(), config.machines);
    let init = |id: usize| BMachine {
        incident: shards
            .range(id)
            .map(|x| {
                let list = graph
                    .incident(x)
                    .iter()
                    .map(|&e| (e, graph.edge(e)))
                    .filter(|(_, e)| e.w > W::zero())
                    .map(|(id, e)| (id, e.u, e.v, e.w.clone()))
                    .collect();
                (x, list)
            })
            .collect(),
        phi: vec![W::zero(); graph.n()],
        b: b.to_vec(),
        alive_total: 0,
        central: (id == 0).then(Central::new),
    };
    let mut cluster = Cluster::new(config, init).expect("resolved config is valid");
    let result = b_iterate(&mut cluster, graph.n(), one_plus, bp);
    (result, cluster.into_trace())
}

fn b_iterate<W: Weight>(
    cluster: &mut Cluster<BMachine<W>>,
    n: usize,
    one_plus: &W,
    bp: BParams,
) -> Result<(Vec<usize>, usize), Failure> {
    let verbose = cluster.config().trace == TraceLevel::Verbose;
    cluster.check_load("load")?;
    let mut alive = count_b_edges(cluster)?;
    let mut history = Vec::new();
    let mut iterations = 0;
    while alive > 0 {
        iterations += 1;
        let full = bp.full(alive);
        let sampled: Mailbox<Sampled<W>> = cluster.round("bmatch/sample", cluster.empty::<()>(), |s, _, ctx| {
            let full = bp.full(s.alive_total);
            for (x, list) in &s.incident {
                let picks: Vec<usize> = if full {
                    (0..list.len()).filter(|&k| list[k].1.min(list[k].2) == *x).collect()
                } else {
                    let k = bp.sample_size(s.b[*x]).min(list.len());
                    let mut picks = index::sample(ctx.rng(), list.len(), k).into_vec();
                    picks.sort_unstable();
                    picks
                };
                for k in picks {
                    let (id, u, v, w) = &list[k];
                    let mask = if full {
                        3
                    } else if *u == *x {
                        1
                    } else {
                        2
                    };
                    ctx.send(0, Sampled { id: *id, u: *u, v: *v, w: w.clone(), mask });
                }
            }
        })?;
        let records = sampled.count();
        cluster.local("bmatch/local-ratio", sampled, |s, inbox, ctx| {
            if !ctx.is_central() {
                return;
            }
            let mut samples: Vec<Sampled<W>> = inbox.into_iter().map(|e| e.msg).collect();
            samples.sort_by_key(|x| x.id);
            samples.dedup_by(|later, first| {
                if later.id == first.id {
                    first.mask |= later.mask;
                    true
                } else {
                    false
                }
            });
            let rows = per_vertex(&samples);
            ctx.scratch(2 * rows.len());
            let c = s.central.as_mut().expect("central state");
            c.update = Update { phi: Vec::new(), pushed: Vec::new() };
            let phi = &mut s.phi;
            let b = &s.b;
            let mut pushed_ids: Vec<usize> = Vec::new();
            let mut changed = Vec::new();
            let mut start = 0;
            while start < rows.len() {
                let x = rows[start].0;
                let end = start + rows[start..].iter().take_while(|r| r.0 == x).count();
                let cap = if full { usize::MAX } else { bp.push_cap(b[x]) };
                let mut pops = 0;
                while pops < cap {
                    let mut best: Option<(W, usize, usize, usize)> = None;
                    for &(_, i) in &rows[start..end] {
                        let Sampled { id, u, v, w, .. } = &samples[i];
                        if pushed_ids.contains(id) {
                            continue;
                        }
                        let sum = phi[*u].clone() + phi[*v].clone();
                        if *w <= one_plus.clone() * sum.clone() {
                            continue;
                        }
                        let g = w.clone() - sum;
                        if best.as_ref().is_none_or(|bst| g > bst.0) {
                            best = Some((g, *id, *u, *v));
                        }
                    }
                    let Some((g, id, u, v)) = best else { break };
                    phi[u] = phi[u].clone() + g.clone() / W::from_count(b[u]);
                    phi[v] = phi[v].clone() + g / W::from_count(b[v]);
                    c.stack.push((id, u, v));
                    pushed_ids.push(id);
                    changed.extend([u, v]);
                    pops += 1;
                }
                start = end;
            }
            pushed_ids.sort_unstable();
            c.update = Update { phi: touched(phi, changed), pushed: pushed_ids };
        })?;
        let update = cluster.central().central.as_ref().expect("central state").update.clone();
        let pushed = update.pushed.len();
        cluster.broadcast("bmatch/phi", update, |s, up| {
            for (x, val) in &up.phi {
                s.phi[*x] = val.clone();
            }
            let phi = &s.phi;
            for (_, list) in &mut s.incident {
                list.retain(|(id, u, v, w)| {
                    up.pushed.binary_search(id).is_err() && *w > one_plus.clone() * (phi[*u].clone() + phi[*v].clone())
                });
            }
        })?;
        let next = count_b_edges(cluster)?;
        history.push(json!({
            "edges": alive,
            "full": full,
            "sampled": records,
            "pushed": pushed,
            "next": next,
        }));
        alive = next;
    }
    cluster.central_step("bmatch/unwind", |s| {
        let c = s.central.as_mut().expect("central state");
        let b = &s.b;
        c.chosen = unwind(&c.stack, |x| b[x], n);
        n
    })?;
    let central = cluster.central().central.as_ref().expect("central state");
    let chosen = central.chosen.clone();
    let stack: Vec<usize> = central.stack.iter().map(|e| e.0).collect();
    let trace = cluster.trace_mut();
    note(trace, "iterations", iterations);
    note(trace, "bmatch_iterations", history);
    if verbose {
        note(trace, "stack", stack);
    }
    Ok((chosen, iterations))
}

fn count_b_edges<W: Weight>(cluster: &mut Cluster<BMachine<W>>) -> Result<usize, Failure> {
    let local = |s: &BMachine<W>| {
        s.incident.iter().map(|(x, list)| list.iter().filter(|e| e.1.min(e.2) == *x).count()).sum::<usize>()
    };
    let (total, _) = cluster.aggregate("bmatch/count", local, |a, b| a + b)?;
    cluster.broadcast("bmatch/count", total, |s, &t| s.alive_total = t)?;
    Ok(total)
}
