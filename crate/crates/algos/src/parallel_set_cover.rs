//! Bucketed `(1+ε)H_Δ` set cover for few elements and many sets.
//!
//! Sets are sharded with their uncovered elements and every machine keeps a
//! copy of the covered set `C`. For a fixed level `L` a census stratifies the
//! profitable sets (`|S \ C| / w >= L/(1+ε)`) by uncovered size, each machine
//! samples its members into groups, and the central machine walks the groups
//! in order, adding one qualifying set per group. `L` drops by `1+ε` once no
//! set is profitable.

use std::collections::HashMap;

use lrmr_core::{Cover, SetCoverInstance, Weight};
use lrmr_engine::{Cluster, ClusterConfig, ClusterParams, Scale, TraceLevel, Words};
use rand::seq::index;
use rand_distr::{Binomial, Distribution};
use serde_json::json;

use crate::common::{drive, note, threshold, Attempt, Failure, Outcome, Shards};
use crate::error::AlgoError;

/// `Φ = Σ |S \ C|` over the sets with `|S \ C| / w >= L/(1+ε)`.
pub fn potential_phi<W: Weight>(inst: &SetCoverInstance<W>, covered: &[bool], level: &W, epsilon: &W) -> usize {
    let scale = W::one() + epsilon.clone();
    (0..inst.n())
        .map(|i| (i, inst.set(i).iter().filter(|&&j| !covered[j]).count()))
        .filter(|&(i, u)| profitable(u, inst.weight(i), level, &scale))
        .map(|(_, u)| u)
        .sum()
}

fn profitable<W: Weight>(u: usize, w: &W, level: &W, scale: &W) -> bool {
    u > 0 && W::from_count(u) * scale.clone() >= level.clone() * w.clone()
}

/// Classes, group counts and the two size rules for one run.
#[derive(Debug, Clone)]
struct Strata {
    m: usize,
    lo: Vec<usize>,
    hi: Vec<usize>,
    groups: Vec<usize>,
    /// `m^{1-(i+1)α}`; a set may be added once `2|S \ C|` reaches it.
    add: Vec<f64>,
    /// `m^{μ/2}`: target group size.
    target: f64,
    /// `4 m^{μ/2}`: largest allowed group.
    cap: f64,
}

impl Strata {
    fn new(m: usize, mu: f64) -> Self {
        let alpha = mu / 8.0;
        let classes = (1.0 / alpha - 1e-9).ceil() as usize;
        let mf = m.max(1) as f64;
        let mut s = Strata {
            m,
            lo: Vec::new(),
            hi: Vec::new(),
            groups: Vec::new(),
            add: Vec::new(),
            target: mf.powf(mu / 2.0),
            cap: 4.0 * mf.powf(mu / 2.0),
        };
        for i in 1..=classes {
            let x = i as f64 * alpha;
            s.lo.push(threshold(m, 1.0 - x));
            s.hi.push(if i == 1 { usize::MAX } else { threshold(m, 1.0 - x + alpha) });
            s.groups.push((2.0 * mf.powf(x + alpha)).ceil() as usize);
            s.add.push(mf.powf(1.0 - x - alpha));
        }
        s
    }

    fn classes(&self) -> usize {
        self.lo.len()
    }

    fn class(&self, u: usize) -> Option<usize> {
        (0..self.classes()).find(|&c| self.lo[c] <= u && u < self.hi[c])
    }

    fn probability(&self, total: usize) -> f64 {
        if total == 0 {
            0.0
        } else {
            (self.target / total as f64).min(1.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Census<W> {
    counts: Vec<usize>,
    phi: usize,
    /// `(|S \ C|, w)` of a set with the largest ratio among sets with
    /// uncovered elements.
    best: Option<(usize, W)>,
}

impl<W> Words for Census<W> {
    fn words(&self) -> usize {
        sparse_words(&self.counts) + 2
    }
}

/// Most classes are empty, so class vectors travel as `(index, value)` pairs.
fn sparse_words(v: &[usize]) -> usize {
    1 + 2 * v.iter().filter(|&&x| x > 0).count()
}

#[derive(Debug, Clone, PartialEq)]
struct Sparse(Vec<usize>);

impl Words for Sparse {
    fn words(&self) -> usize {
        sparse_words(&self.0)
    }
}

impl<W: Weight> Census<W> {
    fn combine(a: &Self, b: &Self) -> Self {
        let best = match (&a.best, &b.best) {
            (Some(x), Some(y)) => Some(if better(x, y) { x.clone() } else { y.clone() }),
            (x, y) => x.clone().or_else(|| y.clone()),
        };
        Census { counts: a.counts.iter().zip(&b.counts).map(|(x, y)| x + y).collect(), phi: a.phi + b.phi, best }
    }
}

/// Larger ratio, then larger size.
fn better<W: Weight>(x: &(usize, W), y: &(usize, W)) -> bool {
    let lhs = W::from_count(x.0) * y.1.clone();
    let rhs = W::from_count(y.0) * x.1.clone();
    lhs > rhs || (lhs == rhs && x.0 >= y.0)
}

#[derive(Debug, Clone)]
struct Level<W>(W);

impl<W> Words for Level<W> {
    fn words(&self) -> usize {
        1
    }
}

struct Owned<W> {
    id: usize,
    w: W,
    uncovered: Vec<usize>,
}

/// A sampled set: its class and the groups it joined, `None` for all of them.
struct Pick {
    at: usize,
    class: usize,
    groups: Option<Vec<usize>>,
}

struct Shipped<W> {
    id: usize,
    w: W,
    list: Vec<usize>,
    class: usize,
    groups: Option<Vec<usize>>,
}

impl<W> Words for Shipped<W> {
    fn words(&self) -> usize {
        4 + self.list.len() + self.groups.as_ref().map_or(0, Vec::len)
    }
}

struct Addition<W> {
    set: usize,
    uncovered: usize,
    weight: W,
    level: W,
}

struct Central<W> {
    chosen: Vec<usize>,
    fresh: Vec<usize>,
    count: usize,
    additions: Vec<Addition<W>>,
}

struct Machine<W> {
    sets: Vec<Owned<W>>,
    covered: Vec<bool>,
    level: Option<W>,
    scale: W,
    totals: Vec<usize>,
    picks: Vec<Pick>,
    central: Option<Central<W>>,
}

impl<W> Words for Machine<W> {
    fn words(&self) -> usize {
        let sets: usize = self.sets.iter().map(|s| 2 + s.uncovered.len()).sum();
        let picks: usize = self.picks.iter().map(|p| 2 + p.groups.as_ref().map_or(0, Vec::len)).sum();
        let central = self.central.as_ref().map_or(0, |c| 1 + c.chosen.len() + c.fresh.len() + 4 * c.additions.len());
        sets + self.covered.len() + 2 + sparse_words(&self.totals) + picks + central
    }
}

impl<W: Weight> Machine<W> {
    fn census(&self, strata: &Strata) -> Census<W> {
        let mut out = Census { counts: vec![0; strata.classes()], phi: 0, best: None };
        for s in &self.sets {
            let u = s.uncovered.len();
            if u == 0 {
                continue;
            }
            let cand = (u, s.w.clone());
            if out.best.as_ref().is_none_or(|b| better(&cand, b)) {
                out.best = Some(cand);
            }
            if let Some(level) = &self.level {
                if profitable(u, &s.w, level, &self.scale) {
                    if let Some(c) = strata.class(u) {
                        out.counts[c] += 1;
                    }
                    out.phi += u;
                }
            }
        }
        out
    }

    /// Local indices of profitable sets, per class.
    fn members(&self, strata: &Strata) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); strata.classes()];
        let Some(level) = &self.level else { return out };
        for (at, s) in self.sets.iter().enumerate() {
            let u = s.uncovered.len();
            if profitable(u, &s.w, level, &self.scale) {
                if let Some(c) = strata.class(u) {
                    out[c].push(at);
                }
            }
        }
        out
    }

    fn cover(&mut self, fresh: &[usize]) {
        for &j in fresh {
            self.covered[j] = true;
        }
        let covered = &self.covered;
        for s in &mut self.sets {
            s.uncovered.retain(|&j| !covered[j]);
        }
        self.picks.clear();
    }
}

/// Weighted set cover within `(1+ε)H_Δ`.
pub fn approx_sc_ln_delta<W: Weight>(
    inst: &SetCoverInstance<W>,
    epsilon: &W,
    params: &ClusterParams,
) -> Result<Outcome<Cover>, AlgoError> {
    if *epsilon <= W::zero() {
        return Err(AlgoError::InvalidEpsilon(format!("epsilon = {epsilon} must be positive")));
    }
    if params.mu.is_nan() || params.mu <= 0.0 {
        return Err(AlgoError::InvalidParameter(format!("mu = {} must be positive here", params.mu)));
    }
    inst.ensure_coverable()?;
    let size: usize = inst.sets().iter().map(Vec::len).sum();
    let log_n = (inst.n().max(2) as f64).log2().ceil() as usize;
    let scale = Scale::new(inst.m().max(2), size.max(1))
        .with_input_words(size + 2 * inst.n())
        .with_fanout_base(inst.m())
        .with_space_factor(log_n);
    drive(params, &scale, |config| attempt(inst, epsilon, config))
}

fn attempt<W: Weight>(inst: &SetCoverInstance<W>, epsilon: &W, config: ClusterConfig) -> Attempt<Cover> {
    let shards = Shards::new(inst.n(), config.machines);
    let strata = Strata::new(inst.m(), config.mu);
    let scale = W::one() + epsilon.clone();
    let init = |id: usize| Machine {
        sets: shards
            .range(id)
            .map(|i| Owned { id: i, w: inst.weight(i).clone(), uncovered: inst.set(i).to_vec() })
            .collect(),
        covered: vec![false; inst.m()],
        level: None,
        scale: scale.clone(),
        totals: Vec::new(),
        picks: Vec::new(),
        central: (id == 0).then(|| Central { chosen: Vec::new(), fresh: Vec::new(), count: 0, additions: Vec::new() }),
    };
    let mut cluster = Cluster::new(config, init).expect("resolved config is valid");
    let result = levels(&mut cluster, &strata, &scale);
    (result, cluster.into_trace())
}

fn central<W>(cluster: &Cluster<Machine<W>>) -> &Central<W>
where
    Machine<W>: Words + Send + Sync,
{
    cluster.central().central.as_ref().expect("central state")
}

fn levels<W: Weight>(cluster: &mut Cluster<Machine<W>>, strata: &Strata, scale: &W) -> Result<(Cover, usize), Failure> {
    cluster.check_load("load")?;
    let verbose = cluster.config().trace == TraceLevel::Verbose;
    let m = strata.m;
    let (mut census, _) = cluster.aggregate("psc/census", |s| s.census(strata), Census::combine)?;
    let mut iterations = 0;
    let mut history = Vec::new();
    let mut snapshots = Vec::new();
    let mut skipped = 0;
    let Some((u, w)) = census.best.clone() else {
        return Ok((Cover::new(Vec::new()), 0));
    };
    let mut level = W::from_count(u) / w;
    cluster.broadcast("psc/level", Level(level.clone()), |s, l| s.level = Some(l.0.clone()))?;
    while central(cluster).count < m {
        let mut phi = Vec::new();
        let mut resamples = 0;
        let mut k = 0;
        loop {
            census = cluster.aggregate("psc/census", |s| s.census(strata), Census::combine)?.0;
            phi.push(census.phi);
            if verbose {
                let covered: Vec<usize> = (0..m).filter(|&j| cluster.central().covered[j]).collect();
                snapshots.push(json!({ "level": level.to_string(), "phi": census.phi, "covered": covered }));
            }
            if census.phi == 0 {
                break;
            }
            k += 1;
            iterations += 1;
            if !sample(cluster, strata, &census.counts)? {
                resamples += 1;
                continue;
            }
            select(cluster, strata)?;
        }
        history.push(json!({ "level": level.to_string(), "iterations": k, "resamples": resamples, "phi": phi }));
        if central(cluster).count >= m {
            break;
        }
        let Some((u, w)) = census.best.clone() else {
            return Err(Failure::Declared("uncovered elements but no set left to cover them".into()));
        };
        // Empty levels change nothing, so jump straight to the next one
        // with a profitable set.
        level = level / scale.clone();
        while W::from_count(u) * scale.clone() < level.clone() * w.clone() {
            level = level / scale.clone();
            skipped += 1;
        }
        cluster.broadcast("psc/level", Level(level.clone()), |s, l| s.level = Some(l.0.clone()))?;
    }
    let c = central(cluster);
    let chosen = c.chosen.clone();
    let additions: Vec<_> = c
        .additions
        .iter()
        .map(|a| json!({ "set": a.set, "uncovered": a.uncovered, "weight": a.weight.to_string(), "level": a.level.to_string() }))
        .collect();
    let trace = cluster.trace_mut();
    note(trace, "iterations", iterations);
    note(trace, "levels", history);
    note(trace, "skipped_levels", skipped);
    note(trace, "additions", additions);
    if verbose {
        note(trace, "snapshots", snapshots);
    }
    Ok((Cover::new(chosen), iterations))
}

/// Draws the groups `X_{i,j}`. Returns false when some group is too large.
fn sample<W: Weight>(cluster: &mut Cluster<Machine<W>>, strata: &Strata, totals: &[usize]) -> Result<bool, Failure> {
    cluster.broadcast("psc/totals", Sparse(totals.to_vec()), |s, t| s.totals = t.0.clone())?;
    cluster.local("psc/sample", cluster.empty::<()>(), |s, _, ctx| {
        let members = s.members(strata);
        let mut picks: Vec<Pick> = Vec::new();
        for (class, list) in members.iter().enumerate() {
            let q = strata.probability(s.totals[class]);
            if list.is_empty() || q == 0.0 {
                continue;
            }
            if q >= 1.0 {
                picks.extend(list.iter().map(|&at| Pick { at, class, groups: None }));
                continue;
            }
            let mut joined: Vec<Vec<usize>> = vec![Vec::new(); list.len()];
            let draw = Binomial::new(list.len() as u64, q).expect("probability in range");
            for j in 0..strata.groups[class] {
                let k = draw.sample(ctx.rng()) as usize;
                for x in index::sample(ctx.rng(), list.len(), k) {
                    joined[x].push(j);
                }
            }
            for (x, groups) in joined.into_iter().enumerate() {
                if !groups.is_empty() {
                    picks.push(Pick { at: list[x], class, groups: Some(groups) });
                }
            }
        }
        s.picks = picks;
    })?;
    // Classes sampled with probability one put every member in every group
    // and cannot overflow; the others report their group sizes.
    let offsets: Vec<Option<usize>> = {
        let mut at = 0;
        (0..strata.classes())
            .map(|c| {
                let q = strata.probability(totals[c]);
                (q > 0.0 && q < 1.0).then(|| {
                    let here = at;
                    at += strata.groups[c];
                    here
                })
            })
            .collect()
    };
    let width = (0..strata.classes()).filter_map(|c| offsets[c].map(|o| o + strata.groups[c])).max().unwrap_or(0);
    let (sizes, _) = cluster.aggregate(
        "psc/group-sizes",
        |s| {
            let mut sizes = vec![0usize; width];
            for p in &s.picks {
                if let (Some(groups), Some(o)) = (&p.groups, offsets[p.class]) {
                    for j in groups {
                        sizes[o + j] += 1;
                    }
                }
            }
            Sparse(sizes)
        },
        |a, b| Sparse(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect()),
    )?;
    let sizes = sizes.0;
    let ok = sizes.iter().all(|&x| x as f64 <= strata.cap);
    cluster.broadcast("psc/verdict", ok as usize, |s, ok| {
        if *ok == 0 {
            s.picks.clear();
        }
    })?;
    if !ok {
        let largest = sizes.iter().max().copied().unwrap_or(0);
        cluster.trace_mut().failures.push(format!("group of {largest} sets exceeds {:.1}; resampled", strata.cap));
    }
    Ok(ok)
}

/// Ships the groups to the central machine, which adds one qualifying set
/// per group, then spreads the newly covered elements.
fn select<W: Weight>(cluster: &mut Cluster<Machine<W>>, strata: &Strata) -> Result<(), Failure> {
    let shipped = cluster.round("psc/gather", cluster.empty::<()>(), |s, _, ctx| {
        for p in std::mem::take(&mut s.picks) {
            let set = &s.sets[p.at];
            ctx.send(
                0,
                Shipped { id: set.id, w: set.w.clone(), list: set.uncovered.clone(), class: p.class, groups: p.groups },
            );
        }
    })?;
    cluster.local("psc/select", shipped, |s, inbox, ctx| {
        let Some(c) = s.central.as_mut() else { return };
        let level = s.level.clone().expect("level installed");
        c.fresh.clear();
        let mut sets: Vec<Shipped<W>> = inbox.into_iter().map(|e| e.msg).collect();
        sets.sort_by_key(|x| x.id);
        let mut every: Vec<Vec<usize>> = vec![Vec::new(); strata.classes()];
        let mut groups: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for (at, x) in sets.iter().enumerate() {
            match &x.groups {
                None => every[x.class].push(at),
                Some(js) => {
                    for &j in js {
                        groups.entry((x.class, j)).or_default().push(at);
                    }
                }
            }
        }
        ctx.scratch(2 * sets.len() + groups.values().map(Vec::len).sum::<usize>());
        for (class, whole) in every.iter().enumerate() {
            for j in 0..strata.groups[class] {
                let members: &[usize] = if whole.is_empty() {
                    groups.get(&(class, j)).map_or(&[], Vec::as_slice)
                } else {
                    whole
                };
                let found = members.iter().copied().find_map(|at| {
                    let x = &sets[at];
                    let u = x.list.iter().filter(|&&e| !s.covered[e]).count();
                    let large = 2.0 * u as f64 >= strata.add[class];
                    (large && profitable(u, &x.w, &level, &s.scale)).then_some((at, u))
                });
                let Some((at, u)) = found else {
                    if !whole.is_empty() {
                        // Every group of this class is the same.
                        break;
                    }
                    continue;
                };
                let x = &sets[at];
                c.chosen.push(x.id);
                c.additions.push(Addition { set: x.id, uncovered: u, weight: x.w.clone(), level: level.clone() });
                for &e in &x.list {
                    if !s.covered[e] {
                        s.covered[e] = true;
                        c.fresh.push(e);
                        c.count += 1;
                    }
                }
            }
        }
    })?;
    let fresh = central(cluster).fresh.clone();
    cluster.broadcast("psc/covered", fresh, |s, fresh| s.cover(fresh))?;
    Ok(())
}

/// Result of weight preprocessing. Ids in `instance` index into `set_ids`
/// and `element_ids`.
#[derive(Debug, Clone)]
pub struct Preprocessed<W> {
    pub instance: SetCoverInstance<W>,
    pub set_ids: Vec<usize>,
    pub element_ids: Vec<usize>,
    pub forced: Vec<usize>,
    pub deleted: Vec<usize>,
    pub gamma: W,
    pub rounds: usize,
}

#[derive(Debug, Clone, PartialEq)]
struct Minima<W>(Vec<Option<W>>);

impl<W> Words for Minima<W> {
    fn words(&self) -> usize {
        self.0.len()
    }
}

struct Holder<W> {
    sets: Vec<(usize, W, Vec<usize>)>,
    gamma: Option<W>,
}

impl<W> Words for Holder<W> {
    fn words(&self) -> usize {
        self.sets.iter().map(|s| 2 + s.2.len()).sum::<usize>() + 1
    }
}

/// Forces sets with `w <= γε/n` into the cover and deletes sets with
/// `w > mγ`, where `γ = max_j min_{S ∋ j} w(S)`.
pub fn preprocess_weights<W: Weight>(
    inst: &SetCoverInstance<W>,
    epsilon: &W,
    params: &ClusterParams,
) -> Result<Outcome<Preprocessed<W>>, AlgoError> {
    if *epsilon <= W::zero() {
        return Err(AlgoError::InvalidEpsilon(format!("epsilon = {epsilon} must be positive")));
    }
    inst.ensure_coverable()?;
    let size: usize = inst.sets().iter().map(Vec::len).sum();
    let scale =
        Scale::new(inst.m().max(2), size.max(1)).with_input_words(size + 2 * inst.n()).with_fanout_base(inst.m());
    drive(params, &scale, |config| {
        let shards = Shards::new(inst.n(), config.machines);
        let init = |id: usize| Holder {
            sets: shards.range(id).map(|i| (i, inst.weight(i).clone(), inst.set(i).to_vec())).collect(),
            gamma: None,
        };
        let mut cluster = Cluster::new(config, init).expect("resolved config is valid");
        let result = preprocess(&mut cluster, inst, epsilon);
        (result, cluster.into_trace())
    })
}

fn preprocess<W: Weight>(
    cluster: &mut Cluster<Holder<W>>,
    inst: &SetCoverInstance<W>,
    epsilon: &W,
) -> Result<(Preprocessed<W>, usize), Failure> {
    cluster.check_load("load")?;
    let m = inst.m();
    let (minima, _) = cluster.aggregate(
        "pre/minima",
        |s| {
            let mut out: Vec<Option<W>> = vec![None; m];
            for (_, w, set) in &s.sets {
                for &j in set {
                    if out[j].as_ref().is_none_or(|x| w < x) {
                        out[j] = Some(w.clone());
                    }
                }
            }
            Minima(out)
        },
        |a, b| {
            Minima(
                a.0.iter()
                    .zip(&b.0)
                    .map(|(x, y)| match (x, y) {
                        (Some(x), Some(y)) => Some(if x <= y { x.clone() } else { y.clone() }),
                        (x, y) => x.clone().or_else(|| y.clone()),
                    })
                    .collect(),
            )
        },
    )?;
    let gamma = minima.0.into_iter().flatten().fold(None, |acc: Option<W>, w| match acc {
        Some(a) if a >= w => Some(a),
        _ => Some(w),
    });
    let Some(gamma) = gamma else {
        return Err(Failure::Declared("empty ground set".into()));
    };
    cluster.broadcast("pre/gamma", Level(gamma.clone()), |s, g| s.gamma = Some(g.0.clone()))?;
    let low = gamma.clone() * epsilon.clone() / W::from_count(inst.n());
    let high = W::from_count(m) * gamma.clone();
    let mut forced = Vec::new();
    let mut deleted = Vec::new();
    for s in cluster.states() {
        for (i, w, _) in &s.sets {
            if *w <= low {
                forced.push(*i);
            } else if *w > high {
                deleted.push(*i);
            }
        }
    }
    let mut covered = vec![false; m];
    for &i in &forced {
        for &j in inst.set(i) {
            covered[j] = true;
        }
    }
    let element_ids: Vec<usize> = (0..m).filter(|&j| !covered[j]).collect();
    let mut index = vec![usize::MAX; m];
    for (new, &j) in element_ids.iter().enumerate() {
        index[j] = new;
    }
    let mut set_ids = Vec::new();
    let mut sets = Vec::new();
    let mut weights = Vec::new();
    for i in 0..inst.n() {
        if forced.binary_search(&i).is_ok() || deleted.binary_search(&i).is_ok() {
            continue;
        }
        let rest: Vec<usize> = inst.set(i).iter().filter(|&&j| !covered[j]).map(|&j| index[j]).collect();
        if !rest.is_empty() {
            set_ids.push(i);
            sets.push(rest);
            weights.push(inst.weight(i).clone());
        }
    }
    let instance =
        SetCoverInstance::new(element_ids.len(), sets, weights).map_err(|e| Failure::Declared(e.to_string()))?;
    let rounds = cluster.rounds();
    Ok((Preprocessed { instance, set_ids, element_ids, forced, deleted, gamma, rounds }, 0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use lrmr_core::generate::generate_set_cover;
    use lrmr_core::oracles::brute_force::min_set_cover;
    use lrmr_core::{harmonic, ratio, rational, Rational};

    fn params(seed: u64) -> ClusterParams {
        ClusterParams::default().with_seed(seed)
    }

    fn four_sets() -> SetCoverInstance<Rational> {
        SetCoverInstance::new(
            3,
            vec![vec![0, 1, 2], vec![0], vec![1], vec![2]],
            vec![rational(1), ratio(2, 5), ratio(2, 5), ratio(2, 5)],
        )
        .unwrap()
    }

    #[test]
    fn single_set_is_taken_at_the_first_level() {
        let inst = SetCoverInstance::new(5, vec![(0..5).collect()], vec![rational(7)]).unwrap();
        let out = approx_sc_ln_delta(&inst, &ratio(1, 10), &params(0)).unwrap();
        assert_eq!(out.solution.sets, vec![0]);
        assert_eq!(out.trace.notes["levels"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn four_sets_take_the_big_one() {
        let out = approx_sc_ln_delta(&four_sets(), &ratio(1, 10), &params(2)).unwrap();
        assert_eq!(out.solution.sets, vec![0]);
    }

    #[test]
    fn potential_matches_the_definition() {
        let inst = four_sets();
        let eps = ratio(1, 10);
        assert_eq!(potential_phi(&inst, &[true; 3], &rational(3), &eps), 0);
        // ratios 3, 5/2, 5/2, 5/2: only S1 reaches 3/1.1
        assert_eq!(potential_phi(&inst, &[false; 3], &rational(3), &eps), 3);
        assert_eq!(potential_phi(&inst, &[false; 3], &ratio(5, 2), &eps), 6);
        assert_eq!(potential_phi(&inst, &[true, false, false], &ratio(5, 2), &eps), 2);
    }

    #[test]
    fn random_instances_within_harmonic_bound() {
        let eps = ratio(1, 10);
        for seed in 0..15 {
            let inst: SetCoverInstance<Rational> = generate_set_cover(12, 8, 0.3, (1, 10), seed).unwrap();
            let (opt, _) = min_set_cover(&inst).unwrap();
            let bound = (rational(1) + eps.clone()) * harmonic::<Rational>(inst.max_set_size()) * opt;
            let out = approx_sc_ln_delta(&inst, &eps, &params(seed)).unwrap();
            let w = inst.total_weight(out.solution.sets.iter().copied());
            assert!(w <= bound, "seed {seed}: {w} > {bound}");
        }
    }

    #[test]
    fn additions_meet_the_level() {
        let eps = ratio(1, 10);
        let inst: SetCoverInstance<Rational> = generate_set_cover(40, 30, 0.2, (1, 20), 5).unwrap();
        let out = approx_sc_ln_delta(&inst, &eps, &params(5).with_trace(TraceLevel::Verbose)).unwrap();
        for a in out.trace.notes["additions"].as_array().unwrap() {
            let u = rational(a["uncovered"].as_i64().unwrap());
            let w: Rational = a["weight"].as_str().unwrap().parse().unwrap();
            let level: Rational = a["level"].as_str().unwrap().parse().unwrap();
            assert!(u * (rational(1) + eps.clone()) >= level * w);
        }
        for snap in out.trace.notes["snapshots"].as_array().unwrap() {
            let mut covered = vec![false; inst.m()];
            for j in snap["covered"].as_array().unwrap() {
                covered[j.as_u64().unwrap() as usize] = true;
            }
            let level: Rational = snap["level"].as_str().unwrap().parse().unwrap();
            assert_eq!(snap["phi"].as_u64().unwrap() as usize, potential_phi(&inst, &covered, &level, &eps));
        }
    }

    #[test]
    fn preprocessing_forces_tiny_sets() {
        let inst = SetCoverInstance::new(2, vec![vec![0], vec![0, 1]], vec![ratio(1, 1_000_000), rational(1)]).unwrap();
        let out = preprocess_weights(&inst, &ratio(1, 2), &params(0)).unwrap().solution;
        assert_eq!(out.gamma, rational(1));
        assert_eq!(out.forced, vec![0]);
        assert!(out.deleted.is_empty());
        assert_eq!(out.element_ids, vec![1]);
        assert_eq!(out.set_ids, vec![1]);
        assert_eq!(out.instance.sets(), &[vec![0]]);
    }

    #[test]
    fn preprocessing_deletes_huge_sets() {
        let inst = SetCoverInstance::new(
            2,
            vec![vec![0, 1], vec![0], vec![1]],
            vec![rational(1_000_000_000), rational(1), rational(1)],
        )
        .unwrap();
        let out = preprocess_weights(&inst, &ratio(1, 2), &params(0)).unwrap().solution;
        assert_eq!(out.deleted, vec![0]);
        assert!(out.forced.is_empty());
        let w_max = out.instance.w_max().unwrap().clone();
        let w_min = out.instance.w_min().unwrap().clone();
        assert!(w_max / w_min <= rational(2 * 3) / ratio(1, 2));
    }

    #[test]
    fn bad_epsilon_is_rejected() {
        assert!(matches!(
            approx_sc_ln_delta(&four_sets(), &rational(0), &params(0)),
            Err(AlgoError::InvalidEpsilon(_))
        ));
    }
}
