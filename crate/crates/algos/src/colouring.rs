//! Colouring by random partition: split the vertices (or edges) into `κ`
//! groups, colour each group on one machine, and prefix every colour with
//! its group.

use lrmr_core::oracles::{first_fit, EdgeColourer};
use lrmr_core::{Colour, Colouring, ColouringKind, Graph, Weight};
use lrmr_engine::{ceil_pow, Cluster, ClusterConfig, ClusterParams, Mailbox, Scale, Words};
use rand::Rng;

use crate::common::{drive, note, Attempt, Failure, Outcome, Shards};
use crate::error::AlgoError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColourOptions {
    /// A group fails once it holds more than `group_cap * n^{1+μ}` edges.
    pub group_cap: usize,
    /// Overrides `κ = ⌈n^{(c-μ)/2}⌉`.
    pub kappa: Option<usize>,
}

impl Default for ColourOptions {
    fn default() -> Self {
        ColourOptions { group_cap: 13, kappa: None }
    }
}

/// `⌈n^{(c-μ)/2}⌉`, at least 1.
pub fn group_count(config: &ClusterConfig) -> usize {
    ceil_pow(config.n.max(1) as f64, (config.c - config.mu) / 2.0)
}

struct Node {
    id: usize,
    adj: Vec<usize>,
    group: usize,
    /// In-group neighbours.
    inner: Vec<usize>,
}

struct Machine {
    nodes: Vec<Node>,
    /// Edge mode: `(id, u, v, group)`.
    edges: Vec<(usize, usize, usize, usize)>,
    /// `(item, group, colour)` for the groups hosted here.
    coloured: Vec<(usize, usize, usize)>,
    /// `(group, Δ_i)` for the groups hosted here.
    degrees: Vec<(usize, usize)>,
}

impl Words for Machine {
    fn words(&self) -> usize {
        let nodes: usize = self.nodes.iter().map(|v| 2 + v.adj.len() + v.inner.len()).sum();
        nodes + 4 * self.edges.len() + 3 * self.coloured.len() + 2 * self.degrees.len()
    }
}

/// Vertex colouring with about `(1 + o(1))Δ` colours.
pub fn vertex_colouring<W: Weight>(
    graph: &Graph<W>,
    params: &ClusterParams,
    opts: &ColourOptions,
) -> Result<Outcome<Colouring>, AlgoError> {
    run(graph, params, opts, ColouringKind::Vertex)
}

/// Edge colouring with about `(1 + o(1))Δ` colours, Misra-Gries per group.
pub fn edge_colouring<W: Weight>(
    graph: &Graph<W>,
    params: &ClusterParams,
    opts: &ColourOptions,
) -> Result<Outcome<Colouring>, AlgoError> {
    run(graph, params, opts, ColouringKind::Edge)
}

fn run<W: Weight>(
    graph: &Graph<W>,
    params: &ClusterParams,
    opts: &ColourOptions,
    kind: ColouringKind,
) -> Result<Outcome<Colouring>, AlgoError> {
    if opts.kappa == Some(0) {
        return Err(AlgoError::InvalidParameter("kappa must be at least 1".into()));
    }
    let words = match kind {
        ColouringKind::Vertex => graph.n() + 2 * graph.m(),
        ColouringKind::Edge => 3 * graph.m(),
    };
    let scale = Scale::new(graph.n(), graph.m()).with_input_words(words).with_space_factor(4);
    drive(params, &scale, |config| attempt(graph, config, opts, kind))
}

fn attempt<W: Weight>(
    graph: &Graph<W>,
    config: ClusterConfig,
    opts: &ColourOptions,
    kind: ColouringKind,
) -> Attempt<Colouring> {
    let kappa = opts.kappa.unwrap_or_else(|| group_count(&config));
    let cap = opts.group_cap as f64 * config.n_pow(1.0 + config.mu);
    let vertices = Shards::new(graph.n(), config.machines);
    let edges = Shards::new(graph.m(), config.machines);
    let adjacency = graph.neighbour_sets();
    let init = |id: usize| Machine {
        nodes: match kind {
            ColouringKind::Vertex => vertices
                .range(id)
                .map(|v| Node { id: v, adj: adjacency[v].clone(), group: 0, inner: Vec::new() })
                .collect(),
            ColouringKind::Edge => Vec::new(),
        },
        edges: match kind {
            ColouringKind::Edge => edges.range(id).map(|e| (e, graph.edge(e).u, graph.edge(e).v, 0)).collect(),
            ColouringKind::Vertex => Vec::new(),
        },
        coloured: Vec::new(),
        degrees: Vec::new(),
    };
    let mut cluster = Cluster::new(config, init).expect("resolved config is valid");
    let result = colour(&mut cluster, kind, kappa, cap, vertices, graph);
    (result, cluster.into_trace())
}

fn colour<W: Weight>(
    cluster: &mut Cluster<Machine>,
    kind: ColouringKind,
    kappa: usize,
    cap: f64,
    vertices: Shards,
    graph: &Graph<W>,
) -> Result<(Colouring, usize), Failure> {
    cluster.check_load("load")?;
    cluster.local("col/assign", cluster.empty::<()>(), |s, _, ctx| {
        for v in &mut s.nodes {
            v.group = ctx.rng().random_range(0..kappa);
        }
        for e in &mut s.edges {
            e.3 = ctx.rng().random_range(0..kappa);
        }
    })?;
    if kind == ColouringKind::Vertex {
        let told: Mailbox<(usize, usize, usize)> =
            cluster.round("col/announce", cluster.empty::<()>(), |s, _, ctx| {
                for v in &s.nodes {
                    for &u in &v.adj {
                        ctx.send(vertices.owner(u), (u, v.id, v.group));
                    }
                }
            })?;
        cluster.local("col/inner", told, |s, inbox, _| {
            let Some(start) = s.nodes.first().map(|v| v.id) else { return };
            for e in inbox {
                let (u, v, g) = e.msg;
                let node = &mut s.nodes[u - start];
                if node.group == g {
                    node.inner.push(v);
                }
            }
            for node in &mut s.nodes {
                node.inner.sort_unstable();
            }
        })?;
    }
    let (sizes, _) = cluster.aggregate(
        "col/sizes",
        |s| {
            let mut sizes = vec![0usize; kappa];
            for v in &s.nodes {
                sizes[v.group] += v.inner.iter().filter(|&&u| u > v.id).count();
            }
            for e in &s.edges {
                sizes[e.3] += 1;
            }
            sizes
        },
        |a, b| a.iter().zip(b).map(|(x, y)| x + y).collect(),
    )?;
    let largest = sizes.iter().max().copied().unwrap_or(0);
    if largest as f64 > cap {
        return Err(Failure::Declared(format!("group with {largest} edges exceeds {cap:.0}")));
    }
    let machines = cluster.machines();
    let host = move |g: usize| g % machines;
    match kind {
        ColouringKind::Vertex => {
            let shipped: Mailbox<(usize, usize, Vec<usize>)> =
                cluster.round("col/ship", cluster.empty::<()>(), |s, _, ctx| {
                    for v in std::mem::take(&mut s.nodes) {
                        let up: Vec<usize> = v.inner.into_iter().filter(|&u| u > v.id).collect();
                        ctx.send(host(v.group), (v.group, v.id, up));
                    }
                })?;
            cluster.local("col/colour", shipped, |s, inbox, ctx| {
                let mut parts: Vec<(usize, usize, Vec<usize>)> = inbox.into_iter().map(|e| e.msg).collect();
                parts.sort_unstable_by_key(|p| (p.0, p.1));
                ctx.scratch(parts.iter().map(|p| 2 * (1 + p.2.len())).sum());
                for group in parts.chunk_by(|a, b| a.0 == b.0) {
                    let g = group[0].0;
                    let ids: Vec<usize> = group.iter().map(|p| p.1).collect();
                    let local = |v: usize| ids.binary_search(&v).expect("in-group neighbour");
                    let mut adj = vec![Vec::new(); ids.len()];
                    for (a, p) in group.iter().enumerate() {
                        for &u in &p.2 {
                            let b = local(u);
                            adj[a].push(b);
                            adj[b].push(a);
                        }
                    }
                    let delta = adj.iter().map(Vec::len).max().unwrap_or(0);
                    s.degrees.push((g, delta));
                    for (a, c) in first_fit(&adj).into_iter().enumerate() {
                        s.coloured.push((ids[a], g, c));
                    }
                }
            })?;
        }
        ColouringKind::Edge => {
            let shipped: Mailbox<(usize, usize, usize, usize)> =
                cluster.round("col/ship", cluster.empty::<()>(), |s, _, ctx| {
                    for e in std::mem::take(&mut s.edges) {
                        ctx.send(host(e.3), (e.3, e.0, e.1, e.2));
                    }
                })?;
            cluster.local("col/colour", shipped, |s, inbox, ctx| {
                let mut parts: Vec<(usize, usize, usize, usize)> = inbox.into_iter().map(|e| e.msg).collect();
                parts.sort_unstable();
                ctx.scratch(6 * parts.len());
                for group in parts.chunk_by(|a, b| a.0 == b.0) {
                    let g = group[0].0;
                    let mut names: Vec<usize> = group.iter().flat_map(|p| [p.2, p.3]).collect();
                    names.sort_unstable();
                    names.dedup();
                    let local = |v: usize| names.binary_search(&v).expect("endpoint");
                    let pairs: Vec<(usize, usize)> = group.iter().map(|p| (local(p.2), local(p.3))).collect();
                    let mut degree = vec![0usize; names.len()];
                    for &(a, b) in &pairs {
                        degree[a] += 1;
                        degree[b] += 1;
                    }
                    s.degrees.push((g, degree.into_iter().max().unwrap_or(0)));
                    for (p, c) in group.iter().zip(EdgeColourer::colour(names.len(), &pairs)) {
                        s.coloured.push((p.1, g, c));
                    }
                }
            })?;
        }
    }
    let items = match kind {
        ColouringKind::Vertex => graph.n(),
        ColouringKind::Edge => graph.m(),
    };
    let mut assignment: Vec<Colour> = vec![(0, 0); items];
    let mut degrees = vec![0usize; kappa];
    for s in cluster.states() {
        for &(item, g, c) in &s.coloured {
            assignment[item] = (g, c);
        }
        for &(g, d) in &s.degrees {
            degrees[g] = d;
        }
    }
    let colouring = Colouring { kind, assignment };
    let max_group_degree = degrees.iter().max().copied().unwrap_or(0);
    let count = colouring.colour_count();
    assert!(count <= kappa * (max_group_degree + 1), "{count} colours exceed kappa * (max group degree + 1)");
    let trace = cluster.trace_mut();
    note(trace, "kappa", kappa);
    note(trace, "group_degrees", &degrees);
    note(trace, "group_edges", &sizes);
    note(trace, "max_degree", graph.max_degree());
    note(trace, "colours", count);
    Ok((colouring, 1))
}

/// The high-probability colour bound `(1 + n^{-μ/2}·sqrt(6 ln n) + n^{-μ})Δ`.
pub fn colour_bound(n: usize, mu: f64, max_degree: usize) -> f64 {
    let n = n.max(2) as f64;
    (1.0 + n.powf(-mu / 2.0) * (6.0 * n.ln()).sqrt() + n.powf(-mu)) * max_degree as f64
}

/// The group-degree bound `(1 + n^{-μ/2}·sqrt(6 ln n))Δ/κ`.
pub fn group_degree_bound(n: usize, mu: f64, max_degree: usize, kappa: usize) -> f64 {
    let n = n.max(2) as f64;
    (1.0 + n.powf(-mu / 2.0) * (6.0 * n.ln()).sqrt()) * max_degree as f64 / kappa.max(1) as f64
}

#[cfg(test)]
mod tests {
    use super::*;
    use lrmr_core::generate::generate_graph;
    use lrmr_core::oracles::{greedy_vertex_colouring_seq, misra_gries_edge_colouring_seq};
    use lrmr_core::validate::validate_colouring;
    use lrmr_core::Rational;

    fn params(seed: u64) -> ClusterParams {
        ClusterParams::default().with_seed(seed)
    }

    fn k(n: usize) -> Graph<Rational> {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Graph::unweighted(n, &edges).unwrap()
    }

    #[test]
    fn one_group_matches_the_sequential_colourings() {
        let g: Graph<Rational> = generate_graph(30, 0.3, (1, 1), 4).unwrap();
        let opts = ColourOptions { kappa: Some(1), ..Default::default() };
        let v = vertex_colouring(&g, &params(0), &opts).unwrap().solution;
        assert_eq!(v, greedy_vertex_colouring_seq(&g));
        let e = edge_colouring(&g, &params(0), &opts).unwrap().solution;
        assert_eq!(e, misra_gries_edge_colouring_seq(&g));
        assert!(e.colour_count() <= g.max_degree() + 1);
    }

    #[test]
    fn edgeless_graph_uses_one_colour_per_group() {
        let g: Graph<Rational> = Graph::unweighted(12, &[]).unwrap();
        let opts = ColourOptions { kappa: Some(3), ..Default::default() };
        let out = vertex_colouring(&g, &params(1), &opts).unwrap().solution;
        assert!(out.assignment.iter().all(|&(_, c)| c == 0));
        assert!(out.colour_count() <= 3);
    }

    #[test]
    fn perfect_matching_gets_one_edge_colour_per_group() {
        let g: Graph<Rational> = Graph::unweighted(8, &[(0, 1), (2, 3), (4, 5), (6, 7)]).unwrap();
        let opts = ColourOptions { kappa: Some(2), ..Default::default() };
        let out = edge_colouring(&g, &params(2), &opts).unwrap().solution;
        assert!(out.assignment.iter().all(|&(_, c)| c == 0));
    }

    #[test]
    fn k4_with_two_groups_is_always_proper() {
        let g = k(4);
        let opts = ColourOptions { kappa: Some(2), ..Default::default() };
        for seed in 0..64 {
            for f in [vertex_colouring::<Rational>, edge_colouring::<Rational>] {
                let out = f(&g, &params(seed), &opts).unwrap();
                assert!(validate_colouring(&g, &out.solution).verdict.is_feasible());
                let degrees: Vec<usize> = serde_json::from_value(out.trace.notes["group_degrees"].clone()).unwrap();
                let bound = 2 * (degrees.iter().max().unwrap() + 1);
                assert!(out.solution.colour_count() <= bound);
            }
        }
    }

    #[test]
    fn tiny_cap_fails_every_attempt() {
        let g = k(8);
        let opts = ColourOptions { group_cap: 0, kappa: Some(1) };
        assert!(matches!(
            vertex_colouring(&g, &params(0).with_retries(1), &opts),
            Err(AlgoError::RetriesExhausted { .. })
        ));
    }
}
