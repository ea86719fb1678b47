use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, Graph, VertexId};
use crate::setcover::SetId;
use crate::weight::Weight;

/// Selected edges plus per-vertex load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Matching {
    pub edges: Vec<EdgeId>,
    pub load: Vec<usize>,
}

impl Matching {
    pub fn empty(n: usize) -> Self {
        Matching { edges: Vec::new(), load: vec![0; n] }
    }

    /// Builds from edge ids, recomputing loads. Ids are sorted.
    pub fn from_edges<W: Weight>(graph: &Graph<W>, mut edges: Vec<EdgeId>) -> Self {
        edges.sort_unstable();
        let mut load = vec![0; graph.n()];
        for &id in &edges {
            let e = graph.edge(id);
            load[e.u] += 1;
            load[e.v] += 1;
        }
        Matching { edges, load }
    }

    pub fn weight<W: Weight>(&self, graph: &Graph<W>) -> W {
        graph.total_weight(self.edges.iter().copied())
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Selected set indices, sorted.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Cover {
    pub sets: Vec<SetId>,
}

impl Cover {
    pub fn new(sets: impl IntoIterator<Item = SetId>) -> Self {
        let sets: BTreeSet<SetId> = sets.into_iter().collect();
        Cover { sets: sets.into_iter().collect() }
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    pub fn contains(&self, i: SetId) -> bool {
        self.sets.binary_search(&i).is_ok()
    }
}

/// Sorted vertex list (independent sets, cliques).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct VertexSet {
    pub vertices: Vec<VertexId>,
}

impl VertexSet {
    pub fn new(vertices: impl IntoIterator<Item = VertexId>) -> Self {
        let set: BTreeSet<VertexId> = vertices.into_iter().collect();
        VertexSet { vertices: set.into_iter().collect() }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn indicator(&self, n: usize) -> Vec<bool> {
        let mut mask = vec![false; n];
        for &v in &self.vertices {
            mask[v] = true;
        }
        mask
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ColouringKind {
    Vertex,
    Edge,
}

impl fmt::Display for ColouringKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ColouringKind::Vertex => "vertex",
            ColouringKind::Edge => "edge",
        })
    }
}

/// Colour of a vertex or edge: `(group, colour within group)`.
pub type Colour = (usize, usize);

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Colouring {
    pub kind: ColouringKind,
    pub assignment: Vec<Colour>,
}

impl Colouring {
    /// Single-group colouring from plain colour indices.
    pub fn from_colours(kind: ColouringKind, colours: Vec<usize>) -> Self {
        Colouring { kind, assignment: colours.into_iter().map(|c| (0, c)).collect() }
    }

    /// Number of distinct `(group, colour)` labels in use.
    pub fn colour_count(&self) -> usize {
        self.assignment.iter().collect::<BTreeSet<_>>().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn matching_loads() {
        let g = Graph::<Rational>::unweighted(4, &[(0, 1), (2, 3), (1, 2)]).unwrap();
        let m = Matching::from_edges(&g, vec![1, 0]);
        assert_eq!(m.edges, vec![0, 1]);
        assert_eq!(m.load, vec![1, 1, 1, 1]);
        assert_eq!(m.weight(&g), Rational::from_integer(2.into()));
    }

    #[test]
    fn colour_count_uses_pairs() {
        let c = Colouring { kind: ColouringKind::Vertex, assignment: vec![(0, 0), (1, 0), (0, 0), (1, 1)] };
        assert_eq!(c.colour_count(), 3);
    }

    #[test]
    fn sets_are_normalised() {
        assert_eq!(Cover::new([3, 1, 3]).sets, vec![1, 3]);
        assert_eq!(VertexSet::new([5, 2]).indicator(6), vec![false, false, true, false, false, true]);
    }
}
