use crate::error::Result;
use crate::graph::{EdgeId, Graph};
use crate::setcover::{ElementId, SetCoverInstance, SetId};
use crate::solution::{Cover, Matching};
use crate::weight::Weight;

/// Residual set weights under element-by-element local ratio.
#[derive(Debug, Clone, PartialEq)]
pub struct SetCoverReduction<W> {
    pub residual: Vec<W>,
    /// Processed elements with their reduction amount, in order.
    pub steps: Vec<(ElementId, W)>,
}

impl<W: Weight> SetCoverReduction<W> {
    pub fn new(inst: &SetCoverInstance<W>) -> Self {
        SetCoverReduction { residual: inst.weights().to_vec(), steps: Vec::new() }
    }

    /// True iff every set containing `j` still has positive residual.
    pub fn is_alive(&self, covering: &[SetId]) -> bool {
        covering.iter().all(|&i| self.residual[i] > W::zero())
    }

    /// Processes element `j` with covering sets `covering`. Returns the
    /// reduction amount, or `None` when some covering set is already zero.
    pub fn process(&mut self, j: ElementId, covering: &[SetId]) -> Option<W> {
        if covering.is_empty() || !self.is_alive(covering) {
            return None;
        }
        let eps = covering
            .iter()
            .map(|&i| &self.residual[i])
            .fold(None::<&W>, |acc, w| match acc {
                Some(a) if a <= w => Some(a),
                _ => Some(w),
            })?
            .clone();
        for &i in covering {
            self.residual[i] = self.residual[i].clone() - eps.clone();
        }
        self.steps.push((j, eps.clone()));
        Some(eps)
    }

    /// Sets whose residual reached zero.
    pub fn zeroed(&self) -> Vec<SetId> {
        (0..self.residual.len()).filter(|&i| self.residual[i].is_zero()).collect()
    }
}

/// Sequential local ratio for weighted set cover. Elements are taken in
/// `order`, then any remaining ids ascending.
pub fn lr_set_cover_seq<W: Weight>(inst: &SetCoverInstance<W>, order: &[ElementId]) -> Result<Cover> {
    inst.ensure_coverable()?;
    let mut state = SetCoverReduction::new(inst);
    for j in order.iter().copied().chain(0..inst.m()) {
        state.process(j, inst.covering(j));
    }
    Ok(Cover::new(state.zeroed()))
}

/// `φ` accumulators and the stack of pushed edges for matching.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingReduction<W> {
    pub phi: Vec<W>,
    /// Pushed edges with the reduction amount `g` applied at push time.
    pub stack: Vec<(EdgeId, W)>,
    pushed: Vec<bool>,
}

impl<W: Weight> MatchingReduction<W> {
    pub fn new(n: usize, m: usize) -> Self {
        MatchingReduction { phi: vec![W::zero(); n], stack: Vec::new(), pushed: vec![false; m] }
    }

    /// `w_e - φ(u) - φ(v)`.
    pub fn modified<V: Weight>(&self, graph: &Graph<V>, id: EdgeId, w: &W) -> W {
        let e = graph.edge(id);
        w.clone() - self.phi[e.u].clone() - self.phi[e.v].clone()
    }

    pub fn is_pushed(&self, id: EdgeId) -> bool {
        self.pushed[id]
    }

    /// Pushes `id` if its modified weight is positive.
    pub fn try_push(&mut self, graph: &Graph<W>, id: EdgeId) -> Option<W> {
        if self.pushed[id] {
            return None;
        }
        let g = self.modified(graph, id, &graph.edge(id).w);
        if g <= W::zero() {
            return None;
        }
        let e = graph.edge(id);
        self.phi[e.u] = self.phi[e.u].clone() + g.clone();
        self.phi[e.v] = self.phi[e.v].clone() + g.clone();
        self.pushed[id] = true;
        self.stack.push((id, g.clone()));
        Some(g)
    }

    pub fn is_alive(&self, graph: &Graph<W>, id: EdgeId) -> bool {
        !self.pushed[id] && self.modified(graph, id, &graph.edge(id).w) > W::zero()
    }

    /// Pops the stack, keeping each edge whose endpoints are both free.
    pub fn unwind(&self, graph: &Graph<W>) -> Matching {
        unwind(graph, self.stack.iter().map(|(id, _)| *id), &vec![1; graph.n()])
    }
}

fn unwind<W: Weight>(graph: &Graph<W>, pushed: impl DoubleEndedIterator<Item = EdgeId>, b: &[usize]) -> Matching {
    let mut load = vec![0usize; graph.n()];
    let mut chosen = Vec::new();
    for id in pushed.rev() {
        let e = graph.edge(id);
        if load[e.u] < b[e.u] && load[e.v] < b[e.v] {
            load[e.u] += 1;
            load[e.v] += 1;
            chosen.push(id);
        }
    }
    chosen.sort_unstable();
    Matching { edges: chosen, load }
}

/// Sequential local ratio for weighted matching: edges in `order`, then all
/// ids ascending, pushing any edge of positive modified weight.
pub fn lr_matching_seq<W: Weight>(graph: &Graph<W>, order: &[EdgeId]) -> Matching {
    lr_matching_state(graph, order).unwind(graph)
}

pub fn lr_matching_state<W: Weight>(graph: &Graph<W>, order: &[EdgeId]) -> MatchingReduction<W> {
    let mut state = MatchingReduction::new(graph.n(), graph.m());
    for id in order.iter().copied().chain(0..graph.m()) {
        state.try_push(graph, id);
    }
    state
}

/// The same procedure with explicit per-edge weight mutation instead of
/// `φ`. Returns the pushed sequence and the matching.
pub fn lr_matching_naive<W: Weight>(graph: &Graph<W>, order: &[EdgeId]) -> (Vec<EdgeId>, Matching) {
    let mut current: Vec<W> = graph.edges().iter().map(|e| e.w.clone()).collect();
    let mut pushed = vec![false; graph.m()];
    let mut stack = Vec::new();
    for id in order.iter().copied().chain(0..graph.m()) {
        if pushed[id] || current[id] <= W::zero() {
            continue;
        }
        let g = current[id].clone();
        let e = graph.edge(id);
        for &x in graph.incident(e.u).iter().chain(graph.incident(e.v)) {
            if x != id {
                current[x] = current[x].clone() - g.clone();
            }
        }
        current[id] = W::zero();
        pushed[id] = true;
        stack.push(id);
    }
    let matching = unwind(graph, stack.iter().copied(), &vec![1; graph.n()]);
    (stack, matching)
}

/// Local-ratio bookkeeping for b-matching with the `(1+ε)` kill rule.
#[derive(Debug, Clone, PartialEq)]
pub struct BMatchingReduction<W> {
    pub phi: Vec<W>,
    pub stack: Vec<(EdgeId, W)>,
    pub b: Vec<usize>,
    pub one_plus_eps: W,
    pushed: Vec<bool>,
}

impl<W: Weight> BMatchingReduction<W> {
    pub fn new(m: usize, b: Vec<usize>, epsilon: W) -> Self {
        BMatchingReduction {
            phi: vec![W::zero(); b.len()],
            stack: Vec::new(),
            b,
            one_plus_eps: W::one() + epsilon,
            pushed: vec![false; m],
        }
    }

    /// Not pushed and `w > (1+ε)(φ(u)+φ(v))`.
    pub fn is_alive(&self, graph: &Graph<W>, id: EdgeId) -> bool {
        let e = graph.edge(id);
        !self.pushed[id] && e.w > self.one_plus_eps.clone() * (self.phi[e.u].clone() + self.phi[e.v].clone())
    }

    pub fn modified(&self, graph: &Graph<W>, id: EdgeId) -> W {
        let e = graph.edge(id);
        e.w.clone() - self.phi[e.u].clone() - self.phi[e.v].clone()
    }

    /// Pushes an alive edge: `φ(x) += g / b(x)` at both endpoints.
    pub fn try_push(&mut self, graph: &Graph<W>, id: EdgeId) -> Option<W> {
        if !self.is_alive(graph, id) {
            return None;
        }
        let g = self.modified(graph, id);
        let e = graph.edge(id);
        self.phi[e.u] = self.phi[e.u].clone() + g.clone() / W::from_count(self.b[e.u]);
        self.phi[e.v] = self.phi[e.v].clone() + g.clone() / W::from_count(self.b[e.v]);
        self.pushed[id] = true;
        self.stack.push((id, g.clone()));
        Some(g)
    }

    pub fn unwind(&self, graph: &Graph<W>) -> Matching {
        unwind(graph, self.stack.iter().map(|(id, _)| *id), &self.b)
    }
}

/// Sequential b-matching local ratio: edges in `order`, then ids ascending.
pub fn lr_bmatching_seq<W: Weight>(graph: &Graph<W>, b: &[usize], epsilon: W, order: &[EdgeId]) -> Matching {
    assert_eq!(b.len(), graph.n(), "one capacity per vertex");
    assert!(b.iter().all(|&x| x >= 1), "capacities must be at least 1");
    let mut state = BMatchingReduction::new(graph.m(), b.to_vec(), epsilon);
    for id in order.iter().copied().chain(0..graph.m()) {
        state.try_push(graph, id);
    }
    state.unwind(graph)
}
