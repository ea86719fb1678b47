//! Feasibility checks for every solution kind. Nothing here mutates its
//! inputs; out-of-range ids are reported as malformed.

use std::collections::HashSet;
use std::fmt;

use crate::graph::{Graph, VertexId};
use crate::io::SolutionFile;
use crate::setcover::SetCoverInstance;
use crate::solution::{Colouring, ColouringKind, Cover, VertexSet};
use crate::weight::Weight;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// `count` elements uncovered, `first` the smallest.
    Uncovered {
        count: usize,
        first: usize,
    },
    Overloaded {
        vertex: VertexId,
        load: usize,
        capacity: usize,
    },
    /// Both endpoints of an edge are in the independent set.
    Adjacent {
        u: VertexId,
        v: VertexId,
    },
    /// Two clique members are not adjacent.
    NotAdjacent {
        u: VertexId,
        v: VertexId,
    },
    /// A vertex that could be added without breaking the property.
    NotMaximal {
        vertex: VertexId,
    },
    /// Two adjacent vertices, or two edges sharing a vertex, got one colour.
    Monochromatic {
        a: usize,
        b: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Uncovered { count, first } => write!(f, "{count} elements uncovered (first: {first})"),
            Violation::Overloaded { vertex, load, capacity } => {
                write!(f, "vertex {vertex} has load {load} > capacity {capacity}")
            }
            Violation::Adjacent { u, v } => write!(f, "{u} and {v} are adjacent"),
            Violation::NotAdjacent { u, v } => write!(f, "{u} and {v} are not adjacent"),
            Violation::NotMaximal { vertex } => write!(f, "vertex {vertex} can be added"),
            Violation::Monochromatic { a, b } => write!(f, "{a} and {b} conflict with the same colour"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Feasible,
    Infeasible(Violation),
    Malformed(String),
}

impl Verdict {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Verdict::Feasible)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Objective<W> {
    Weight(W),
    Size(usize),
    Colours(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report<W> {
    pub verdict: Verdict,
    pub objective: Option<Objective<W>>,
}

impl<W> Report<W> {
    fn malformed(message: String) -> Self {
        Report { verdict: Verdict::Malformed(message), objective: None }
    }

    fn with(verdict: Verdict, objective: Objective<W>) -> Self {
        Report { verdict, objective: Some(objective) }
    }
}

/// Checks `edges` against per-vertex capacities (`None` means plain matching).
pub fn validate_matching<W: Weight>(graph: &Graph<W>, edges: &[usize], b: Option<&[usize]>) -> Report<W> {
    if let Some(&bad) = edges.iter().find(|&&id| id >= graph.m()) {
        return Report::malformed(format!("edge id {bad} out of range 0..{}", graph.m()));
    }
    if edges.iter().collect::<HashSet<_>>().len() != edges.len() {
        return Report::malformed("edge listed twice".into());
    }
    if let Some(b) = b {
        if b.len() != graph.n() {
            return Report::malformed(format!("{} capacities for {} vertices", b.len(), graph.n()));
        }
    }
    let weight = graph.total_weight(edges.iter().copied());
    let mut load = vec![0usize; graph.n()];
    for &id in edges {
        let e = graph.edge(id);
        load[e.u] += 1;
        load[e.v] += 1;
    }
    let verdict = (0..graph.n())
        .find_map(|v| {
            let capacity = b.map_or(1, |b| b[v]);
            (load[v] > capacity).then_some(Violation::Overloaded { vertex: v, load: load[v], capacity })
        })
        .map_or(Verdict::Feasible, Verdict::Infeasible);
    Report::with(verdict, Objective::Weight(weight))
}

pub fn validate_cover<W: Weight>(inst: &SetCoverInstance<W>, cover: &Cover) -> Report<W> {
    if let Some(&bad) = cover.sets.iter().find(|&&i| i >= inst.n()) {
        return Report::malformed(format!("set id {bad} out of range 0..{}", inst.n()));
    }
    let mut covered = vec![false; inst.m()];
    for &i in &cover.sets {
        for &j in inst.set(i) {
            covered[j] = true;
        }
    }
    let uncovered: Vec<usize> = (0..inst.m()).filter(|&j| !covered[j]).collect();
    let verdict = match uncovered.first() {
        None => Verdict::Feasible,
        Some(&first) => Verdict::Infeasible(Violation::Uncovered { count: uncovered.len(), first }),
    };
    Report::with(verdict, Objective::Weight(inst.total_weight(cover.sets.iter().copied())))
}

fn check_vertices<W: Weight>(graph: &Graph<W>, set: &VertexSet) -> Option<Report<W>> {
    set.vertices
        .iter()
        .find(|&&v| v >= graph.n())
        .map(|bad| Report::malformed(format!("vertex {bad} out of range 0..{}", graph.n())))
}

/// Independence and maximality.
pub fn validate_independent_set<W: Weight>(graph: &Graph<W>, set: &VertexSet) -> Report<W> {
    if let Some(r) = check_vertices(graph, set) {
        return r;
    }
    let inside = set.indicator(graph.n());
    let size = Objective::Size(set.len());
    if let Some(e) = graph.edges().iter().find(|e| inside[e.u] && inside[e.v]) {
        return Report::with(Verdict::Infeasible(Violation::Adjacent { u: e.u, v: e.v }), size);
    }
    let free = (0..graph.n()).find(|&v| !inside[v] && !graph.neighbours(v).any(|u| inside[u]));
    let verdict = free.map_or(Verdict::Feasible, |vertex| Verdict::Infeasible(Violation::NotMaximal { vertex }));
    Report::with(verdict, size)
}

/// Pairwise adjacency and maximality.
pub fn validate_clique<W: Weight>(graph: &Graph<W>, set: &VertexSet) -> Report<W> {
    if let Some(r) = check_vertices(graph, set) {
        return r;
    }
    let size = Objective::Size(set.len());
    let inside = set.indicator(graph.n());
    // hits[v] = number of clique members adjacent to v
    let mut hits = vec![0usize; graph.n()];
    for &c in &set.vertices {
        for u in graph.neighbours(c) {
            hits[u] += 1;
        }
    }
    for &c in &set.vertices {
        if hits[c] + 1 != set.len() {
            let partner =
                set.vertices.iter().copied().find(|&o| o != c && !graph.neighbours(c).any(|u| u == o)).unwrap_or(c);
            return Report::with(Verdict::Infeasible(Violation::NotAdjacent { u: c, v: partner }), size);
        }
    }
    let extendable = (0..graph.n()).find(|&v| !inside[v] && hits[v] == set.len());
    let verdict = extendable.map_or(Verdict::Feasible, |vertex| Verdict::Infeasible(Violation::NotMaximal { vertex }));
    Report::with(verdict, size)
}

pub fn validate_colouring<W: Weight>(graph: &Graph<W>, colouring: &Colouring) -> Report<W> {
    let expected = match colouring.kind {
        ColouringKind::Vertex => graph.n(),
        ColouringKind::Edge => graph.m(),
    };
    if colouring.assignment.len() != expected {
        return Report::malformed(format!("{} colours for {expected} {}s", colouring.assignment.len(), colouring.kind));
    }
    let colours = Objective::Colours(colouring.colour_count());
    let clash = match colouring.kind {
        ColouringKind::Vertex => graph
            .edges()
            .iter()
            .find(|e| colouring.assignment[e.u] == colouring.assignment[e.v])
            .map(|e| Violation::Monochromatic { a: e.u, b: e.v }),
        ColouringKind::Edge => (0..graph.n()).find_map(|v| {
            let mut seen = std::collections::HashMap::new();
            graph.incident(v).iter().find_map(|&id| {
                seen.insert(colouring.assignment[id], id).map(|other| Violation::Monochromatic { a: other, b: id })
            })
        }),
    };
    Report::with(clash.map_or(Verdict::Feasible, Verdict::Infeasible), colours)
}

/// What a stored solution claims to solve.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Problem {
    Matching,
    BMatching(Vec<usize>),
    VertexCover,
    IndependentSet,
    Clique,
    Colouring,
}

/// Either instance kind, borrowed.
#[derive(Debug, Clone, Copy)]
pub enum InstanceRef<'a, W> {
    Graph(&'a Graph<W>),
    SetCover(&'a SetCoverInstance<W>),
}

/// Dispatches on the solution file kind. Vertex covers of a graph are checked
/// through the set-cover encoding with the given vertex weights.
pub fn validate<W: Weight>(
    solution: &SolutionFile,
    instance: InstanceRef<'_, W>,
    problem: &Problem,
    vertex_weights: Option<&[W]>,
) -> Report<W> {
    use InstanceRef as I;
    match (solution, instance, problem) {
        (SolutionFile::Matching(ids), I::Graph(g), Problem::Matching) => validate_matching(g, ids, None),
        (SolutionFile::Matching(ids), I::Graph(g), Problem::BMatching(b)) => validate_matching(g, ids, Some(b)),
        (SolutionFile::Cover(c), I::SetCover(inst), _) => validate_cover(inst, c),
        (SolutionFile::Cover(c), I::Graph(g), Problem::VertexCover) => {
            let weights = vertex_weights.map_or_else(|| vec![W::one(); g.n()], <[W]>::to_vec);
            match SetCoverInstance::from_vertex_cover(g, weights) {
                Ok(inst) => validate_cover(&inst, c),
                Err(e) => Report::malformed(e.to_string()),
            }
        }
        (SolutionFile::Vertices(s), I::Graph(g), Problem::IndependentSet) => validate_independent_set(g, s),
        (SolutionFile::Vertices(s), I::Graph(g), Problem::Clique) => validate_clique(g, s),
        (SolutionFile::Colouring(c), I::Graph(g), _) => validate_colouring(g, c),
        _ => Report::malformed("solution kind does not match the instance".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn matching_on_k2() {
        let g = Graph::from_triples(2, [(0, 1, r(4))]).unwrap();
        let rep = validate_matching(&g, &[0], None);
        assert_eq!(rep.verdict, Verdict::Feasible);
        assert_eq!(rep.objective, Some(Objective::Weight(r(4))));
        assert!(matches!(validate_matching(&g, &[1], None).verdict, Verdict::Malformed(_)));
    }

    #[test]
    fn overloaded_vertex() {
        let g = Graph::<Rational>::unweighted(3, &[(0, 1), (1, 2)]).unwrap();
        let rep = validate_matching(&g, &[0, 1], None);
        assert_eq!(rep.verdict, Verdict::Infeasible(Violation::Overloaded { vertex: 1, load: 2, capacity: 1 }));
        assert!(validate_matching(&g, &[0, 1], Some(&[1, 2, 1])).verdict.is_feasible());
    }

    #[test]
    fn empty_cover_is_infeasible() {
        let inst = SetCoverInstance::new(3, vec![vec![0, 1, 2]], vec![r(2)]).unwrap();
        let rep = validate_cover(&inst, &Cover::default());
        assert_eq!(rep.verdict, Verdict::Infeasible(Violation::Uncovered { count: 3, first: 0 }));
        assert!(matches!(validate_cover(&inst, &Cover::new([4])).verdict, Verdict::Malformed(_)));
    }

    #[test]
    fn triangle_with_two_colours_is_improper() {
        let g = Graph::<Rational>::unweighted(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let c = Colouring::from_colours(ColouringKind::Vertex, vec![0, 1, 0]);
        let rep = validate_colouring(&g, &c);
        assert_eq!(rep.verdict, Verdict::Infeasible(Violation::Monochromatic { a: 0, b: 2 }));
        let e = Colouring::from_colours(ColouringKind::Edge, vec![0, 1, 1]);
        assert!(!validate_colouring(&g, &e).verdict.is_feasible());
    }

    #[test]
    fn independent_set_and_clique_predicates() {
        let g = Graph::<Rational>::unweighted(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]).unwrap();
        assert!(validate_independent_set(&g, &VertexSet::new([0, 3])).verdict.is_feasible());
        assert_eq!(
            validate_independent_set(&g, &VertexSet::new([0])).verdict,
            Verdict::Infeasible(Violation::NotMaximal { vertex: 3 })
        );
        assert!(validate_clique(&g, &VertexSet::new([0, 1, 2])).verdict.is_feasible());
        assert_eq!(
            validate_clique(&g, &VertexSet::new([0, 1])).verdict,
            Verdict::Infeasible(Violation::NotMaximal { vertex: 2 })
        );
        assert!(!validate_clique(&g, &VertexSet::new([0, 3])).verdict.is_feasible());
    }
}
