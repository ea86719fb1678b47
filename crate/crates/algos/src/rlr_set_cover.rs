//! Randomized local ratio `f`-approximation for weighted set cover, and its
//! vertex-cover specialization.
//!
//! Elements are sharded with their covering lists `T_j`. Each iteration
//! samples the alive elements, runs local ratio on the sample at the central
//! machine and tells every shard which sets reached zero residual.

use lrmr_core::{Cover, Graph, SetCoverInstance, Weight};
use lrmr_engine::{Cluster, ClusterConfig, ClusterParams, Mailbox, Scale, TraceLevel, Words};
use rand::Rng;
use serde_json::json;

use crate::common::{drive, note, Attempt, Failure, Outcome, Shards};
use crate::error::AlgoError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScOptions {
    /// An iteration fails when the sample exceeds `fail_multiplier * 2η`.
    pub fail_multiplier: usize,
}

impl Default for ScOptions {
    fn default() -> Self {
        ScOptions { fail_multiplier: 3 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Spread {
    /// Zeroed sets go down the broadcast tree.
    Broadcast,
    /// Central tells each zeroed set's owner, which forwards to its elements.
    Notify,
}

struct Central<W> {
    residual: Vec<W>,
    processed: Vec<usize>,
    fresh: Vec<usize>,
    failed: Option<String>,
}

struct Machine<W> {
    /// Alive elements with their covering sets.
    elements: Vec<(usize, Vec<usize>)>,
    /// Owned sets with their elements (notify mode only).
    sets: Vec<(usize, Vec<usize>)>,
    alive_total: usize,
    central: Option<Central<W>>,
}

impl<W> Words for Machine<W> {
    fn words(&self) -> usize {
        let lists = |v: &[(usize, Vec<usize>)]| v.iter().map(|(_, l)| 1 + l.len()).sum::<usize>();
        let central = self.central.as_ref().map_or(0, |c| c.residual.len() + c.processed.len() + c.fresh.len());
        lists(&self.elements) + lists(&self.sets) + 1 + central
    }
}

/// Sampling probability `min(1, 2η/|U_r|)`.
pub fn sample_probability(eta: usize, alive: usize) -> f64 {
    if alive == 0 {
        1.0
    } else {
        (2.0 * eta as f64 / alive as f64).min(1.0)
    }
}

/// Weighted set cover within factor `f`, the maximum element frequency.
pub fn approx_sc_f<W: Weight>(
    inst: &SetCoverInstance<W>,
    params: &ClusterParams,
    opts: &ScOptions,
) -> Result<Outcome<Cover>, AlgoError> {
    run(inst, params, opts, Spread::Broadcast)
}

/// Weighted vertex cover within factor 2. Vertices are the sets, edges the
/// elements.
pub fn vertex_cover_2approx<V: Weight, W: Weight>(
    graph: &Graph<V>,
    vertex_weights: Vec<W>,
    params: &ClusterParams,
) -> Result<Outcome<Cover>, AlgoError> {
    let inst = SetCoverInstance::from_vertex_cover(graph, vertex_weights)?;
    run(&inst, params, &ScOptions::default(), Spread::Notify)
}

fn run<W: Weight>(
    inst: &SetCoverInstance<W>,
    params: &ClusterParams,
    opts: &ScOptions,
    spread: Spread,
) -> Result<Outcome<Cover>, AlgoError> {
    inst.ensure_coverable()?;
    if opts.fail_multiplier == 0 {
        return Err(AlgoError::InvalidParameter("fail_multiplier must be at least 1".into()));
    }
    let f = inst.frequency().max(1);
    let words: usize = inst.dual().iter().map(|t| 1 + t.len()).sum();
    let scale = Scale::new(inst.n(), inst.m()).with_input_words(words).with_space_factor(2 * (1 + f));
    drive(params, &scale, |config| attempt(inst, config, opts, spread))
}

fn attempt<W: Weight>(
    inst: &SetCoverInstance<W>,
    config: ClusterConfig,
    opts: &ScOptions,
    spread: Spread,
) -> Attempt<Cover> {
    let elements = Shards::new(inst.m(), config.machines);
    let sets = Shards::new(inst.n(), config.machines);
    let init = |id: usize| Machine {
        elements: elements.range(id).map(|j| (j, inst.covering(j).to_vec())).collect(),
        sets: match spread {
            Spread::Notify => sets.range(id).map(|i| (i, inst.set(i).to_vec())).collect(),
            Spread::Broadcast => Vec::new(),
        },
        alive_total: 0,
        central: (id == 0).then(|| Central {
            residual: inst.weights().to_vec(),
            processed: Vec::new(),
            fresh: Vec::new(),
            failed: None,
        }),
    };
    let mut cluster = Cluster::new(config, init).expect("resolved config is valid");
    let result = iterate(&mut cluster, opts, spread, elements, sets);
    (result, cluster.into_trace())
}

fn iterate<W: Weight>(
    cluster: &mut Cluster<Machine<W>>,
    opts: &ScOptions,
    spread: Spread,
    elements: Shards,
    sets: Shards,
) -> Result<(Cover, usize), Failure> {
    let eta = cluster.config().eta;
    let limit = opts.fail_multiplier * 2 * eta;
    let verbose = cluster.config().trace == TraceLevel::Verbose;
    cluster.check_load("load")?;
    let mut alive = count_alive(cluster)?;
    let mut iterations = 0;
    let mut history = Vec::new();
    let mut order = Vec::new();
    while alive > 0 {
        iterations += 1;
        let sampled: Mailbox<(usize, Vec<usize>)> =
            cluster.round("sc/sample", cluster.empty::<()>(), |s, _, ctx| {
                let p = sample_probability(eta, s.alive_total);
                for (j, t) in &s.elements {
                    if p >= 1.0 || ctx.rng().random_bool(p) {
                        ctx.send(0, (*j, t.clone()));
                    }
                }
            })?;
        let size = sampled.count();
        cluster.local("sc/local-ratio", sampled, |s, inbox, ctx| {
            if !ctx.is_central() {
                return;
            }
            let c = s.central.as_mut().expect("central state");
            c.processed.clear();
            c.fresh.clear();
            if inbox.len() > limit {
                c.failed = Some(format!("sample of {} elements exceeds {limit}", inbox.len()));
                return;
            }
            let mut batch: Vec<(usize, Vec<usize>)> = inbox.into_iter().map(|e| e.msg).collect();
            batch.sort_by_key(|(j, _)| *j);
            for (j, t) in &batch {
                c.processed.push(*j);
                reduce(&mut c.residual, t, &mut c.fresh);
            }
            c.fresh.sort_unstable();
        })?;
        let central = cluster.central().central.as_ref().expect("central state");
        if let Some(reason) = &central.failed {
            return Err(Failure::Declared(reason.clone()));
        }
        if verbose {
            order.extend_from_slice(&central.processed);
        }
        match spread {
            Spread::Broadcast => {
                let fresh = central.fresh.clone();
                cluster.broadcast("sc/zeroed", fresh, |s, fresh| drop_hit(&mut s.elements, fresh))?;
            }
            Spread::Notify => notify(cluster, elements, sets)?,
        }
        let next = count_alive(cluster)?;
        history.push(json!({
            "u": alive,
            "p": sample_probability(eta, alive),
            "sampled": size,
            "next": next,
        }));
        alive = next;
    }
    let residual = &cluster.central().central.as_ref().expect("central state").residual;
    let cover = Cover::new((0..residual.len()).filter(|&i| residual[i].is_zero()));
    let trace = cluster.trace_mut();
    note(trace, "iterations", iterations);
    note(trace, "sc_iterations", history);
    if verbose {
        note(trace, "order", order);
    }
    Ok((cover, iterations))
}

/// One local-ratio step on an element covered by `t`: subtract the smallest
/// residual from every covering set, provided all are still positive.
fn reduce<W: Weight>(residual: &mut [W], t: &[usize], fresh: &mut Vec<usize>) {
    if t.is_empty() || t.iter().any(|&i| residual[i] <= W::zero()) {
        return;
    }
    let eps = t.iter().map(|&i| &residual[i]).fold(&residual[t[0]], |a, b| if b < a { b } else { a }).clone();
    for &i in t {
        residual[i] = residual[i].clone() - eps.clone();
        if residual[i].is_zero() {
            fresh.push(i);
        }
    }
}

/// Drops every element covered by one of the sorted `zeroed` sets.
fn drop_hit(elements: &mut Vec<(usize, Vec<usize>)>, zeroed: &[usize]) {
    if !zeroed.is_empty() {
        elements.retain(|(_, t)| !t.iter().any(|i| zeroed.binary_search(i).is_ok()));
    }
}

fn count_alive<W: Weight>(cluster: &mut Cluster<Machine<W>>) -> Result<usize, Failure> {
    let (total, _) = cluster.aggregate("sc/count", |s| s.elements.len(), |a, b| a + b)?;
    cluster.broadcast("sc/count", total, |s, &t| s.alive_total = t)?;
    Ok(total)
}

/// Central sends one id per zeroed set to its owner; the owner forwards it
/// once to every machine holding one of the set's elements.
fn notify<W: Weight>(cluster: &mut Cluster<Machine<W>>, elements: Shards, sets: Shards) -> Result<(), Failure> {
    let notified: Mailbox<usize> = cluster.round("vc/notify", cluster.empty::<()>(), |s, _, ctx| {
        if let Some(c) = &s.central {
            for &v in &c.fresh {
                ctx.send(sets.owner(v), v);
            }
        }
    })?;
    let forwarded: Mailbox<usize> = cluster.round("vc/forward", notified, |s, inbox, ctx| {
        for e in inbox {
            let v = e.msg;
            let Ok(at) = s.sets.binary_search_by_key(&v, |(i, _)| *i) else { continue };
            let mut dests: Vec<usize> = s.sets[at].1.iter().map(|&j| elements.owner(j)).collect();
            dests.dedup();
            for d in dests {
                ctx.send(d, v);
            }
        }
    })?;
    cluster.local("vc/drop", forwarded, |s, inbox, _| {
        let mut zeroed: Vec<usize> = inbox.into_iter().map(|e| e.msg).collect();
        zeroed.sort_unstable();
        drop_hit(&mut s.elements, &zeroed);
    })?;
    Ok(())
}
