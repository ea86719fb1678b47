use std::collections::HashSet;

use crate::error::{CoreError, Result};
use crate::weight::Weight;
use crate::Rational;

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct Edge<W> {
    pub u: VertexId,
    pub v: VertexId,
    pub w: W,
}

impl<W> Edge<W> {
    pub fn other(&self, x: VertexId) -> VertexId {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, x: VertexId) -> bool {
        self.u == x || self.v == x
    }
}

/// Weighted undirected simple graph on vertices `0..n`.
///
/// Edges keep their input order; edge ids are positions in that list. The
/// adjacency view is derived at construction and lists incident edge ids in
/// ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph<W = Rational> {
    n: usize,
    edges: Vec<Edge<W>>,
    adjacency: Vec<Vec<EdgeId>>,
}

impl<W: Weight> Graph<W> {
    pub fn new(n: usize, edges: Vec<Edge<W>>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(edges.len());
        for (id, e) in edges.iter().enumerate() {
            if e.u >= n || e.v >= n {
                return Err(CoreError::InvalidGraph(format!(
                    "edge {id} ({}, {}) has an endpoint outside 0..{n}",
                    e.u, e.v
                )));
            }
            if e.u == e.v {
                return Err(CoreError::InvalidGraph(format!("edge {id} is a self-loop at {}", e.u)));
            }
            if e.w < W::zero() {
                return Err(CoreError::InvalidGraph(format!("edge {id} has negative weight {}", e.w)));
            }
            let key = (e.u.min(e.v), e.u.max(e.v));
            if !seen.insert(key) {
                return Err(CoreError::InvalidGraph(format!("edge {id} duplicates the pair ({}, {})", key.0, key.1)));
            }
        }
        let mut adjacency = vec![Vec::new(); n];
        for (id, e) in edges.iter().enumerate() {
            adjacency[e.u].push(id);
            adjacency[e.v].push(id);
        }
        Ok(Graph { n, edges, adjacency })
    }

    /// Builds from `(u, v, w)` triples.
    pub fn from_triples(n: usize, triples: impl IntoIterator<Item = (VertexId, VertexId, W)>) -> Result<Self> {
        Self::new(n, triples.into_iter().map(|(u, v, w)| Edge { u, v, w }).collect())
    }

    /// Unit-weight graph from an edge list.
    pub fn unweighted(n: usize, pairs: &[(VertexId, VertexId)]) -> Result<Self> {
        Self::from_triples(n, pairs.iter().map(|&(u, v)| (u, v, W::one())))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge<W>] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> &Edge<W> {
        &self.edges[id]
    }

    pub fn incident(&self, v: VertexId) -> &[EdgeId] {
        &self.adjacency[v]
    }

    pub fn neighbours(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adjacency[v].iter().map(move |&e| self.edges[e].other(v))
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adjacency[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adjacency.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn total_weight(&self, ids: impl IntoIterator<Item = EdgeId>) -> W {
        ids.into_iter().fold(W::zero(), |acc, id| acc + self.edges[id].w.clone())
    }

    /// Sorted neighbour lists; handy for adjacency tests on small graphs.
    pub fn neighbour_sets(&self) -> Vec<Vec<VertexId>> {
        (0..self.n)
            .map(|v| {
                let mut ns: Vec<_> = self.neighbours(v).collect();
                ns.sort_unstable();
                ns
            })
            .collect()
    }

    /// Recomputes the adjacency view from the edge list and compares.
    pub fn check_adjacency(&self) -> bool {
        let mut rebuilt = vec![Vec::new(); self.n];
        for (id, e) in self.edges.iter().enumerate() {
            rebuilt[e.u].push(id);
            rebuilt[e.v].push(id);
        }
        rebuilt == self.adjacency
    }

    /// Same topology with weights mapped into another scalar type.
    pub fn map_weights<V: Weight>(&self, f: impl Fn(&W) -> V) -> Graph<V> {
        Graph {
            n: self.n,
            edges: self.edges.iter().map(|e| Edge { u: e.u, v: e.v, w: f(&e.w) }).collect(),
            adjacency: self.adjacency.clone(),
        }
    }

    /// Density exponent `c` with `m = n^{1+c}`; `0` for degenerate sizes.
    pub fn density_exponent(&self) -> f64 {
        if self.n < 2 || self.edges.is_empty() {
            return 0.0;
        }
        ((self.edges.len() as f64).ln() / (self.n as f64).ln() - 1.0).max(0.0)
    }
}
