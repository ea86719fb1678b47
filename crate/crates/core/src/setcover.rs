use crate::error::{CoreError, Result};
use crate::weight::Weight;
use crate::Rational;

pub type SetId = usize;
pub type ElementId = usize;

/// Weighted set system over the ground set `0..m`, with the dual incidence
/// view `T_j = { i : j in S_i }` kept alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct SetCoverInstance<W = Rational> {
    m: usize,
    sets: Vec<Vec<ElementId>>,
    weights: Vec<W>,
    dual: Vec<Vec<SetId>>,
    frequency: usize,
    max_set_size: usize,
}

impl<W: Weight> SetCoverInstance<W> {
    /// Elements inside each set are sorted on construction.
    pub fn new(m: usize, sets: Vec<Vec<ElementId>>, weights: Vec<W>) -> Result<Self> {
        if sets.len() != weights.len() {
            return Err(CoreError::InvalidInstance(format!("{} sets but {} weights", sets.len(), weights.len())));
        }
        let mut sorted = Vec::with_capacity(sets.len());
        for (i, mut set) in sets.into_iter().enumerate() {
            set.sort_unstable();
            if let Some(&bad) = set.iter().find(|&&e| e >= m) {
                return Err(CoreError::InvalidInstance(format!("set {i} contains element {bad} outside 0..{m}")));
            }
            if set.windows(2).any(|w| w[0] == w[1]) {
                return Err(CoreError::InvalidInstance(format!("set {i} lists an element twice")));
            }
            if weights[i] <= W::zero() {
                return Err(CoreError::InvalidInstance(format!("set {i} has non-positive weight {}", weights[i])));
            }
            sorted.push(set);
        }
        let dual = invert(m, &sorted);
        let frequency = dual.iter().map(Vec::len).max().unwrap_or(0);
        let max_set_size = sorted.iter().map(Vec::len).max().unwrap_or(0);
        Ok(SetCoverInstance { m, sets: sorted, weights, dual, frequency, max_set_size })
    }

    /// Number of sets.
    pub fn n(&self) -> usize {
        self.sets.len()
    }

    /// Ground-set size.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn set(&self, i: SetId) -> &[ElementId] {
        &self.sets[i]
    }

    pub fn sets(&self) -> &[Vec<ElementId>] {
        &self.sets
    }

    pub fn weight(&self, i: SetId) -> &W {
        &self.weights[i]
    }

    pub fn weights(&self) -> &[W] {
        &self.weights
    }

    /// `T_j`, ascending.
    pub fn covering(&self, j: ElementId) -> &[SetId] {
        &self.dual[j]
    }

    pub fn dual(&self) -> &[Vec<SetId>] {
        &self.dual
    }

    /// `f = max_j |T_j|`.
    pub fn frequency(&self) -> usize {
        self.frequency
    }

    /// `Δ = max_i |S_i|`.
    pub fn max_set_size(&self) -> usize {
        self.max_set_size
    }

    pub fn total_weight(&self, ids: impl IntoIterator<Item = SetId>) -> W {
        ids.into_iter().fold(W::zero(), |acc, i| acc + self.weights[i].clone())
    }

    pub fn w_max(&self) -> Option<&W> {
        self.weights.iter().fold(None, |best, w| match best {
            Some(b) if b >= w => Some(b),
            _ => Some(w),
        })
    }

    pub fn w_min(&self) -> Option<&W> {
        self.weights.iter().fold(None, |best, w| match best {
            Some(b) if b <= w => Some(b),
            _ => Some(w),
        })
    }

    /// First element contained in no set.
    pub fn uncoverable_element(&self) -> Option<ElementId> {
        self.dual.iter().position(Vec::is_empty)
    }

    pub fn ensure_coverable(&self) -> Result<()> {
        match self.uncoverable_element() {
            Some(element) => Err(CoreError::Uncoverable { element }),
            None => Ok(()),
        }
    }

    /// Rebuilds `S` from `T`; equals [`Self::sets`] for every valid instance.
    pub fn primal_from_dual(&self) -> Vec<Vec<ElementId>> {
        invert(self.n(), &self.dual)
    }

    /// Recomputes `f`, `Δ` and the dual view and compares with the cache.
    pub fn check_views(&self) -> bool {
        let dual = invert(self.m, &self.sets);
        dual == self.dual
            && self.primal_from_dual() == self.sets
            && self.frequency == dual.iter().map(Vec::len).max().unwrap_or(0)
            && self.max_set_size == self.sets.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Vertex-cover encoding: one set per vertex, one element per edge.
    pub fn from_vertex_cover<V: Weight>(graph: &crate::Graph<V>, vertex_weights: Vec<W>) -> Result<Self> {
        let mut sets = vec![Vec::new(); graph.n()];
        for (id, e) in graph.edges().iter().enumerate() {
            sets[e.u].push(id);
            sets[e.v].push(id);
        }
        Self::new(graph.m(), sets, vertex_weights)
    }

    pub fn map_weights<V: Weight>(&self, f: impl Fn(&W) -> V) -> SetCoverInstance<V> {
        SetCoverInstance {
            m: self.m,
            sets: self.sets.clone(),
            weights: self.weights.iter().map(f).collect(),
            dual: self.dual.clone(),
            frequency: self.frequency,
            max_set_size: self.max_set_size,
        }
    }
}

/// Transposes an incidence list: `out[j]` lists every `i` with `j in lists[i]`,
/// ascending.
pub fn invert(width: usize, lists: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new(); width];
    for (i, list) in lists.iter().enumerate() {
        for &j in list {
            out[j].push(i);
        }
    }
    out
}
