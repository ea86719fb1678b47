//! Hungry-greedy maximal independent set and maximal clique.
//!
//! Vertices are sharded with their alive neighbour lists. A pass counts the
//! heavy vertices, lets the central machine draw groups of them, and adds the
//! first vertex of each group that is still heavy when its turn comes. The
//! other shards then learn which vertices entered `N+(I)` by asking their
//! neighbours.
//!
//! The clique variant runs the same passes on the complement graph without
//! building it: active vertices carry labels in `[k]`, so a vertex can list
//! its complement neighbours as `[k]` minus the labels of its neighbours.

use std::collections::HashMap;

use lrmr_core::{Graph, VertexSet, Weight};
use lrmr_engine::{Cluster, ClusterConfig, ClusterParams, Envelope, Mailbox, Scale, Words};
use rand::seq::index;
use serde_json::json;

use crate::common::{drive, note, threshold, Attempt, Failure, Outcome, Shards};
use crate::error::AlgoError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    Mis1,
    Mis2,
    Clique,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Mis1 => "mis1",
            Mode::Mis2 => "mis2",
            Mode::Clique => "clique",
        }
    }
}

/// Request for every member of a class rather than one rank.
const ALL: usize = usize::MAX;

struct Vertex {
    id: usize,
    /// Alive neighbours (MIS) or active neighbours (clique), ascending.
    live: Vec<usize>,
    /// Labels of `live`, clique only.
    labels: Vec<usize>,
    label: usize,
    removed: bool,
    joined: bool,
}

impl Words for Vertex {
    fn words(&self) -> usize {
        4 + self.live.len() + self.labels.len()
    }
}

enum Group {
    /// The class is no larger than a group: every group is the whole class.
    Whole {
        class: usize,
        times: usize,
    },
    Ranks {
        class: usize,
        ranks: Vec<usize>,
    },
}

impl Group {
    fn words(&self) -> usize {
        match self {
            Group::Whole { .. } => 2,
            Group::Ranks { ranks, .. } => 1 + ranks.len(),
        }
    }
}

struct Central {
    /// `N+(I)` for MIS, inactive vertices for clique.
    removed: Vec<bool>,
    chosen: Vec<usize>,
    fresh: Vec<usize>,
    /// Per machine: count per class, then the degree sum.
    census: Vec<Vec<usize>>,
    groups: Vec<Group>,
    sigma: Vec<usize>,
    k: usize,
}

impl Central {
    fn words(&self) -> usize {
        self.removed.len()
            + self.chosen.len()
            + self.fresh.len()
            + self.census.iter().map(Vec::len).sum::<usize>()
            + self.groups.iter().map(Group::words).sum::<usize>()
            + self.sigma.len()
            + 1
    }

    fn mark(&mut self, v: usize) {
        if !self.removed[v] {
            self.removed[v] = true;
            self.fresh.push(v);
        }
    }

    /// Vertex behind a list entry: an id, or a label in clique mode.
    fn resolve(&self, inverse: &[usize], x: usize) -> usize {
        if inverse.is_empty() {
            x
        } else {
            inverse[x - 1]
        }
    }

    fn add(&mut self, inverse: &[usize], v: usize, list: &[usize]) {
        self.chosen.push(v);
        self.mark(v);
        for &x in list {
            let u = self.resolve(inverse, x);
            self.mark(u);
        }
    }

    fn inverse(&self, mode: Mode) -> Vec<usize> {
        if mode != Mode::Clique {
            return Vec::new();
        }
        let mut inv = vec![0; self.k];
        for (v, &s) in self.sigma.iter().enumerate() {
            if s >= 1 && s <= self.k {
                inv[s - 1] = v;
            }
        }
        inv
    }
}

struct Machine {
    vertices: Vec<Vertex>,
    start: usize,
    k: usize,
    central: Option<Central>,
}

impl Words for Machine {
    fn words(&self) -> usize {
        self.vertices.words() + 2 + self.central.as_ref().map_or(0, Central::words)
    }
}

impl Machine {
    fn degree(&self, v: &Vertex, mode: Mode) -> usize {
        if v.removed {
            0
        } else if mode == Mode::Clique {
            self.k - 1 - v.live.len()
        } else {
            v.live.len()
        }
    }

    /// Members of `class`, ascending id.
    fn members<'a>(&'a self, plan: &'a Plan, mode: Mode, class: usize) -> impl Iterator<Item = &'a Vertex> + 'a {
        self.vertices.iter().filter(move |v| plan.class(self.degree(v, mode)) == Some(class))
    }

    /// The list a sampled vertex ships: alive neighbours, or complement
    /// neighbour labels in clique mode.
    fn list(&self, v: &Vertex, mode: Mode) -> Vec<usize> {
        if mode != Mode::Clique {
            return v.live.clone();
        }
        let mut taken = v.labels.clone();
        taken.push(v.label);
        taken.sort_unstable();
        (1..=self.k).filter(|x| taken.binary_search(x).is_err()).collect()
    }
}

/// Degree classes of one pass: class `c` holds degrees in `[lo[c], hi[c])`.
#[derive(Debug, Clone)]
struct Plan {
    lo: Vec<usize>,
    hi: Vec<usize>,
    groups: Vec<usize>,
    add: Vec<usize>,
    size: usize,
}

impl Plan {
    fn classes(&self) -> usize {
        self.lo.len()
    }

    fn class(&self, d: usize) -> Option<usize> {
        if d == 0 {
            return None;
        }
        (0..self.classes()).find(|&c| self.lo[c] <= d && d < self.hi[c])
    }

    /// Heavy vertices of phase `i` in the simple algorithm.
    fn heavy(n: usize, alpha: f64, i: usize, size: usize) -> Plan {
        let t = threshold(n, 1.0 - i as f64 * alpha);
        Plan { lo: vec![t], hi: vec![usize::MAX], groups: vec![threshold(n, i as f64 * alpha)], add: vec![t], size }
    }

    /// Every vertex with an alive edge, in one class.
    fn alive() -> Plan {
        Plan { lo: vec![1], hi: vec![usize::MAX], groups: vec![0], add: vec![1], size: 0 }
    }

    /// Degree classes `V_{k,i}` of the improved algorithm.
    fn layered(n: usize, alpha: f64, classes: usize, size: usize) -> Plan {
        let mut plan = Plan { lo: Vec::new(), hi: Vec::new(), groups: Vec::new(), add: Vec::new(), size };
        for i in 1..=classes {
            let x = i as f64 * alpha;
            plan.lo.push(threshold(n, 1.0 - x));
            plan.hi.push(if i == 1 { usize::MAX } else { threshold(n, 1.0 - x + alpha) });
            plan.groups.push(threshold(n, x + alpha));
            plan.add.push(threshold(n, 1.0 - x - alpha));
        }
        plan
    }
}

/// `σ` for an active set: actives ascending get `1..=k`, the rest follow.
pub fn relabel_active(active: &[bool]) -> (Vec<usize>, usize) {
    let mut sigma = vec![0; active.len()];
    let mut next = 1;
    for (v, _) in active.iter().enumerate().filter(|(_, &a)| a) {
        sigma[v] = next;
        next += 1;
    }
    let k = next - 1;
    for (v, _) in active.iter().enumerate().filter(|(_, &a)| !a) {
        sigma[v] = next;
        next += 1;
    }
    (sigma, k)
}

/// Maximal independent set with `α = μ/2` phases.
pub fn mis_simple<W: Weight>(graph: &Graph<W>, params: &ClusterParams) -> Result<Outcome<VertexSet>, AlgoError> {
    run(graph, params, Mode::Mis1)
}

/// Maximal independent set with all degree classes sampled at once,
/// `α = μ/8`.
pub fn mis_fast<W: Weight>(graph: &Graph<W>, params: &ClusterParams) -> Result<Outcome<VertexSet>, AlgoError> {
    run(graph, params, Mode::Mis2)
}

/// Maximal clique: the simple algorithm on the implicit complement.
pub fn maximal_clique<W: Weight>(graph: &Graph<W>, params: &ClusterParams) -> Result<Outcome<VertexSet>, AlgoError> {
    run(graph, params, Mode::Clique)
}

fn run<W: Weight>(graph: &Graph<W>, params: &ClusterParams, mode: Mode) -> Result<Outcome<VertexSet>, AlgoError> {
    if params.mu.is_nan() || params.mu <= 0.0 {
        return Err(AlgoError::InvalidParameter(format!("mu = {} must be positive here", params.mu)));
    }
    let factor = match mode {
        Mode::Mis2 => (8.0 / params.mu).ceil() as usize,
        _ => 3,
    };
    let words = graph.n() + 2 * graph.m() * if mode == Mode::Clique { 2 } else { 1 };
    let scale = Scale::new(graph.n(), graph.m()).with_input_words(words).with_space_factor(factor);
    drive(params, &scale, |config| attempt(graph, config, mode))
}

fn attempt<W: Weight>(graph: &Graph<W>, config: ClusterConfig, mode: Mode) -> Attempt<VertexSet> {
    let n = graph.n();
    let shards = Shards::new(n, config.machines);
    let adjacency = graph.neighbour_sets();
    let init = |id: usize| {
        let range = shards.range(id);
        Machine {
            start: range.start,
            vertices: range
                .map(|v| Vertex {
                    id: v,
                    live: adjacency[v].clone(),
                    labels: if mode == Mode::Clique {
                        adjacency[v].iter().map(|u| u + 1).collect()
                    } else {
                        Vec::new()
                    },
                    label: v + 1,
                    removed: false,
                    joined: false,
                })
                .collect(),
            k: n,
            central: (id == 0).then(|| Central {
                removed: vec![false; n],
                chosen: Vec::new(),
                fresh: Vec::new(),
                census: Vec::new(),
                groups: Vec::new(),
                sigma: if mode == Mode::Clique { (1..=n).collect() } else { Vec::new() },
                k: n,
            }),
        }
    };
    let mut cluster = Cluster::new(config, init).expect("resolved config is valid");
    let result = Driver { mode, shards, n }.run(&mut cluster);
    (result, cluster.into_trace())
}

struct Driver {
    mode: Mode,
    shards: Shards,
    n: usize,
}

type Response = (usize, usize, usize, Vec<usize>);

impl Driver {
    fn run(&self, cluster: &mut Cluster<Machine>) -> Result<(VertexSet, usize), Failure> {
        cluster.check_load("load")?;
        let mu = cluster.config().mu;
        let eta = cluster.config().eta;
        let size = threshold(self.n, mu / 2.0);
        let mut passes = 0;
        match self.mode {
            Mode::Mis1 | Mode::Clique => {
                let alpha = mu / 2.0;
                let phases = (1.0 / alpha - 1e-9).ceil() as usize;
                let mut history = Vec::new();
                for i in 1..=phases {
                    let plan = Plan::heavy(self.n, alpha, i, size);
                    let mut heavy = Vec::new();
                    loop {
                        let (counts, _) = self.gather(cluster, &plan)?;
                        heavy.push(counts[0]);
                        if counts[0] < plan.groups[0] {
                            self.pull(cluster, &plan)?;
                            break;
                        }
                        passes += 1;
                        self.sample(cluster, &plan)?;
                    }
                    history
                        .push(json!({ "phase": i, "threshold": plan.lo[0], "groups": plan.groups[0], "heavy": heavy }));
                }
                note(cluster.trace_mut(), "heavy", history);
            }
            Mode::Mis2 => {
                let alpha = mu / 8.0;
                let classes = (1.0 / alpha - 1e-9).ceil() as usize;
                let plan = Plan::layered(self.n, alpha, classes, size);
                let mut edges = Vec::new();
                let mut added = Vec::new();
                loop {
                    let (counts, degree_sum) = self.gather(cluster, &plan)?;
                    let e = degree_sum / 2;
                    edges.push(e);
                    if e < eta {
                        break;
                    }
                    passes += 1;
                    let before = self.chosen(cluster);
                    self.sample(cluster, &plan)?;
                    added.push(json!({ "classes": counts, "added": self.chosen(cluster) - before }));
                }
                self.pull(cluster, &Plan::alive())?;
                let trace = cluster.trace_mut();
                note(trace, "edges", edges);
                note(trace, "passes", added);
            }
        }
        let mode = self.mode;
        cluster.local("hg/sweep", cluster.empty::<()>(), |s, _, _| {
            let joins: Vec<bool> = s.vertices.iter().map(|v| !v.removed && s.degree(v, mode) == 0).collect();
            for (v, j) in s.vertices.iter_mut().zip(joins) {
                v.joined = j;
            }
        })?;
        let central = cluster.central().central.as_ref().expect("central state");
        let mut out = central.chosen.clone();
        for s in cluster.states() {
            out.extend(s.vertices.iter().filter(|v| v.joined).map(|v| v.id));
        }
        note(cluster.trace_mut(), "iterations", passes);
        note(cluster.trace_mut(), "algorithm", self.mode.name());
        Ok((VertexSet::new(out), passes))
    }

    fn chosen(&self, cluster: &Cluster<Machine>) -> usize {
        cluster.central().central.as_ref().expect("central state").chosen.len()
    }

    /// Per-machine class counts to the central machine. Returns the class
    /// totals and the total degree.
    fn gather(&self, cluster: &mut Cluster<Machine>, plan: &Plan) -> Result<(Vec<usize>, usize), Failure> {
        let mode = self.mode;
        let counts: Mailbox<Vec<usize>> = cluster.round("hg/gather", cluster.empty::<()>(), |s, _, ctx| {
            let mut row = vec![0; plan.classes() + 1];
            for v in &s.vertices {
                let d = s.degree(v, mode);
                if let Some(c) = plan.class(d) {
                    row[c] += 1;
                }
                row[plan.classes()] += d;
            }
            ctx.send(0, row);
        })?;
        let machines = cluster.machines();
        cluster.local("hg/census", counts, |s, inbox, ctx| {
            if let Some(c) = s.central.as_mut() {
                c.census = vec![Vec::new(); machines];
                for e in inbox {
                    c.census[e.from] = e.msg;
                }
                ctx.scratch(0);
            }
        })?;
        let census = &cluster.central().central.as_ref().expect("central state").census;
        let mut totals = vec![0; plan.classes() + 1];
        for row in census {
            for (t, x) in totals.iter_mut().zip(row) {
                *t += x;
            }
        }
        let degree_sum = totals.pop().unwrap_or(0);
        Ok((totals, degree_sum))
    }

    /// One sampling pass: draw groups, fetch their lists, select, update.
    fn sample(&self, cluster: &mut Cluster<Machine>, plan: &Plan) -> Result<(), Failure> {
        let mode = self.mode;
        let requests: Mailbox<(usize, usize)> = cluster.round("hg/request", cluster.empty::<()>(), |s, _, ctx| {
            let Some(c) = s.central.as_mut() else { return };
            c.groups.clear();
            let mut whole: Vec<(usize, usize)> = Vec::new();
            let mut wanted: Vec<(usize, usize)> = Vec::new();
            for class in 0..plan.classes() {
                let total: usize = c.census.iter().map(|row| row[class]).sum();
                let times = plan.groups[class];
                if total == 0 || times == 0 {
                    continue;
                }
                if total <= plan.size {
                    c.groups.push(Group::Whole { class, times });
                    whole
                        .extend(c.census.iter().enumerate().filter(|(_, row)| row[class] > 0).map(|(m, _)| (m, class)));
                } else {
                    for _ in 0..times {
                        let ranks = index::sample(ctx.rng(), total, plan.size).into_vec();
                        wanted.extend(ranks.iter().map(|&r| (class, r)));
                        c.groups.push(Group::Ranks { class, ranks });
                    }
                }
            }
            wanted.sort_unstable();
            wanted.dedup();
            ctx.scratch(2 * (wanted.len() + whole.len()));
            for (m, class) in whole {
                ctx.send(m, (class, ALL));
            }
            let prefix = prefixes(&c.census, plan.classes());
            for (class, rank) in wanted {
                let m = prefix[class].partition_point(|&p| p <= rank) - 1;
                ctx.send(m, (class, rank - prefix[class][m]));
            }
        })?;
        let responses: Mailbox<Response> = cluster.round("hg/respond", requests, |s, inbox, ctx| {
            let mut wanted: Vec<(usize, usize)> = inbox.into_iter().map(|e| e.msg).collect();
            wanted.sort_unstable();
            let mut class_members: Option<(usize, Vec<&Vertex>)> = None;
            for (class, rank) in wanted {
                if class_members.as_ref().is_none_or(|(c, _)| *c != class) {
                    class_members = Some((class, s.members(plan, mode, class).collect()));
                }
                let members = &class_members.as_ref().expect("members").1;
                let picked: Vec<(usize, &Vertex)> = if rank == ALL {
                    members.iter().copied().enumerate().collect()
                } else {
                    members.get(rank).map(|v| (rank, *v)).into_iter().collect()
                };
                for (r, v) in picked {
                    ctx.send(0, (class, r, v.id, s.list(v, mode)));
                }
            }
        })?;
        cluster.local("hg/select", responses, |s, inbox, ctx| {
            let Some(c) = s.central.as_mut() else { return };
            ctx.scratch(3 * inbox.len());
            select(c, plan, mode, inbox);
        })?;
        self.update(cluster)
    }

    /// Ships every member of the plan's single class to the central machine,
    /// which extends `I` greedily in ascending id order.
    fn pull(&self, cluster: &mut Cluster<Machine>, plan: &Plan) -> Result<(), Failure> {
        let mode = self.mode;
        let pulled: Mailbox<(usize, Vec<usize>)> = cluster.round("hg/pull", cluster.empty::<()>(), |s, _, ctx| {
            for v in s.members(plan, mode, 0) {
                ctx.send(0, (v.id, s.list(v, mode)));
            }
        })?;
        if pulled.is_empty() {
            return Ok(());
        }
        cluster.local("hg/greedy", pulled, |s, inbox, _| {
            let Some(c) = s.central.as_mut() else { return };
            c.fresh.clear();
            let inverse = c.inverse(mode);
            let mut items: Vec<(usize, Vec<usize>)> = inbox.into_iter().map(|e| e.msg).collect();
            items.sort_by_key(|(v, _)| *v);
            for (v, list) in &items {
                if !c.removed[*v] {
                    c.add(&inverse, *v, list);
                }
            }
            if mode == Mode::Clique {
                relabel(c);
            }
        })?;
        self.update(cluster)
    }

    /// Tells shards about newly removed vertices (and new labels), then every
    /// remaining vertex refreshes its list by querying its neighbours.
    fn update(&self, cluster: &mut Cluster<Machine>) -> Result<(), Failure> {
        let mode = self.mode;
        let shards = self.shards;
        let fresh = cluster.central().central.as_ref().map_or(0, |c| c.fresh.len());
        if fresh == 0 {
            return Ok(());
        }
        let notices: Mailbox<(usize, usize, usize)> =
            cluster.round("hg/notify", cluster.empty::<()>(), |s, _, ctx| {
                let Some(c) = s.central.as_ref() else { return };
                for &v in &c.fresh {
                    ctx.send(shards.owner(v), (v, 0, c.k));
                }
                if mode == Mode::Clique {
                    for (v, &removed) in c.removed.iter().enumerate() {
                        if !removed {
                            ctx.send(shards.owner(v), (v, c.sigma[v], c.k));
                        }
                    }
                }
            })?;
        let queries: Mailbox<(usize, usize)> = cluster.round("hg/query", notices, |s, inbox, ctx| {
            for e in inbox {
                let (v, label, k) = e.msg;
                s.k = k;
                let at = v - s.start;
                let rec = &mut s.vertices[at];
                if label == 0 {
                    rec.removed = true;
                    rec.live = Vec::new();
                    rec.labels = Vec::new();
                } else {
                    rec.label = label;
                }
            }
            for v in s.vertices.iter().filter(|v| !v.removed) {
                for &w in &v.live {
                    ctx.send(shards.owner(w), (w, v.id));
                }
            }
        })?;
        let answers: Mailbox<(usize, usize, usize)> = cluster.round("hg/answer", queries, |s, inbox, ctx| {
            for e in inbox {
                let (w, v) = e.msg;
                let rec = &s.vertices[w - s.start];
                let code = match mode {
                    Mode::Clique => {
                        if rec.removed {
                            0
                        } else {
                            rec.label
                        }
                    }
                    _ => rec.removed as usize,
                };
                ctx.send(shards.owner(v), (v, w, code));
            }
        })?;
        cluster.local("hg/refresh", answers, |s, inbox, ctx| {
            ctx.scratch(inbox.len());
            let start = s.start;
            match mode {
                Mode::Clique => {
                    let mut fresh: Vec<Vec<(usize, usize)>> = vec![Vec::new(); s.vertices.len()];
                    for e in inbox {
                        let (v, w, code) = e.msg;
                        if code > 0 {
                            fresh[v - start].push((w, code));
                        }
                    }
                    for (rec, mut list) in s.vertices.iter_mut().zip(fresh) {
                        if rec.removed {
                            continue;
                        }
                        list.sort_unstable();
                        rec.live = list.iter().map(|x| x.0).collect();
                        rec.labels = list.iter().map(|x| x.1).collect();
                    }
                }
                _ => {
                    let mut gone: Vec<Vec<usize>> = vec![Vec::new(); s.vertices.len()];
                    for e in inbox {
                        let (v, w, code) = e.msg;
                        if code == 1 {
                            gone[v - start].push(w);
                        }
                    }
                    for (rec, mut g) in s.vertices.iter_mut().zip(gone) {
                        if !g.is_empty() {
                            g.sort_unstable();
                            rec.live.retain(|w| g.binary_search(w).is_err());
                        }
                    }
                }
            }
        })?;
        Ok(())
    }
}

/// Start of each machine's block of ranks, per class, plus a final total.
fn prefixes(census: &[Vec<usize>], classes: usize) -> Vec<Vec<usize>> {
    (0..classes)
        .map(|c| {
            let mut acc = 0;
            let mut out = vec![0];
            for row in census {
                acc += row[c];
                out.push(acc);
            }
            out
        })
        .collect()
}

/// Walks the groups in order and adds the first member of each that is
/// still unremoved with current degree at least the class's add threshold.
fn select(c: &mut Central, plan: &Plan, mode: Mode, inbox: Vec<Envelope<Response>>) {
    c.fresh.clear();
    let prefix = prefixes(&c.census, plan.classes());
    let mut lists: HashMap<(usize, usize), (usize, Vec<usize>)> = HashMap::with_capacity(inbox.len());
    for e in inbox {
        let (class, rank, id, list) = e.msg;
        lists.insert((class, prefix[class][e.from] + rank), (id, list));
    }
    let inverse = c.inverse(mode);
    let groups = std::mem::take(&mut c.groups);
    for group in &groups {
        match group {
            Group::Whole { class, times } => {
                let total = prefix[*class].last().copied().unwrap_or(0);
                for _ in 0..*times {
                    if !try_group(c, &inverse, &lists, *class, plan.add[*class], 0..total) {
                        break;
                    }
                }
            }
            Group::Ranks { class, ranks } => {
                try_group(c, &inverse, &lists, *class, plan.add[*class], ranks.iter().copied());
            }
        }
    }
    c.groups = groups;
    if mode == Mode::Clique {
        relabel(c);
    }
}

fn try_group(
    c: &mut Central,
    inverse: &[usize],
    lists: &HashMap<(usize, usize), (usize, Vec<usize>)>,
    class: usize,
    add: usize,
    ranks: impl Iterator<Item = usize>,
) -> bool {
    for r in ranks {
        let Some((v, list)) = lists.get(&(class, r)) else { continue };
        if c.removed[*v] {
            continue;
        }
        let mut d = 0;
        for &x in list {
            if !c.removed[c.resolve(inverse, x)] {
                d += 1;
                if d >= add {
                    break;
                }
            }
        }
        if d >= add {
            c.add(inverse, *v, list);
            return true;
        }
    }
    false
}

fn relabel(c: &mut Central) {
    let active: Vec<bool> = c.removed.iter().map(|r| !r).collect();
    let (sigma, k) = relabel_active(&active);
    c.sigma = sigma;
    c.k = k;
}
