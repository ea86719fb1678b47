//! Exact optima by exhaustive search, for instances of at most
//! [`BRUTE_FORCE_CAP`] edges or sets.

use crate::error::{CoreError, Result};
use crate::graph::{EdgeId, Graph};
use crate::setcover::{SetCoverInstance, SetId};
use crate::weight::Weight;

pub const BRUTE_FORCE_CAP: usize = 22;

fn check_cap(size: usize) -> Result<()> {
    if size > BRUTE_FORCE_CAP {
        return Err(CoreError::TooLarge { size, cap: BRUTE_FORCE_CAP });
    }
    Ok(())
}

/// Maximum weight matching.
pub fn max_weight_matching<W: Weight>(graph: &Graph<W>) -> Result<(W, Vec<EdgeId>)> {
    max_weight_b_matching(graph, &vec![1; graph.n()])
}

/// Maximum weight b-matching: at most `b[v]` chosen edges touch `v`.
pub fn max_weight_b_matching<W: Weight>(graph: &Graph<W>, b: &[usize]) -> Result<(W, Vec<EdgeId>)> {
    check_cap(graph.m())?;
    // suffix[i] = total weight of edges i.. (upper bound on what is left)
    let mut suffix = vec![W::zero(); graph.m() + 1];
    for i in (0..graph.m()).rev() {
        suffix[i] = suffix[i + 1].clone() + graph.edge(i).w.clone();
    }
    let mut search = MatchingSearch {
        graph,
        b,
        suffix,
        load: vec![0; graph.n()],
        current: Vec::new(),
        best: (W::zero(), Vec::new()),
    };
    search.dfs(0, W::zero());
    Ok(search.best)
}

struct MatchingSearch<'a, W> {
    graph: &'a Graph<W>,
    b: &'a [usize],
    suffix: Vec<W>,
    load: Vec<usize>,
    current: Vec<EdgeId>,
    best: (W, Vec<EdgeId>),
}

impl<W: Weight> MatchingSearch<'_, W> {
    fn dfs(&mut self, i: usize, value: W) {
        if value > self.best.0 {
            self.best = (value.clone(), self.current.clone());
        }
        if i == self.graph.m() || value.clone() + self.suffix[i].clone() <= self.best.0 {
            return;
        }
        let e = self.graph.edge(i);
        if self.load[e.u] < self.b[e.u] && self.load[e.v] < self.b[e.v] {
            self.load[e.u] += 1;
            self.load[e.v] += 1;
            self.current.push(i);
            self.dfs(i + 1, value.clone() + e.w.clone());
            self.current.pop();
            self.load[e.u] -= 1;
            self.load[e.v] -= 1;
        }
        self.dfs(i + 1, value);
    }
}

/// Minimum weight set cover. Branches on the lowest uncovered element.
pub fn min_set_cover<W: Weight>(inst: &SetCoverInstance<W>) -> Result<(W, Vec<SetId>)> {
    check_cap(inst.n())?;
    inst.ensure_coverable()?;
    let mut search = CoverSearch { inst, covered_by: vec![0; inst.m()], current: Vec::new(), best: None };
    search.dfs(0, W::zero());
    let (w, mut sets) = search.best.expect("a coverable instance has a cover");
    sets.sort_unstable();
    Ok((w, sets))
}

struct CoverSearch<'a, W> {
    inst: &'a SetCoverInstance<W>,
    covered_by: Vec<usize>,
    current: Vec<SetId>,
    best: Option<(W, Vec<SetId>)>,
}

impl<W: Weight> CoverSearch<'_, W> {
    fn dfs(&mut self, from: usize, value: W) {
        if self.best.as_ref().is_some_and(|(b, _)| value >= *b) {
            return;
        }
        let Some(j) = (from..self.inst.m()).find(|&j| self.covered_by[j] == 0) else {
            self.best = Some((value, self.current.clone()));
            return;
        };
        for &i in self.inst.covering(j) {
            for &x in self.inst.set(i) {
                self.covered_by[x] += 1;
            }
            self.current.push(i);
            self.dfs(j + 1, value.clone() + self.inst.weight(i).clone());
            self.current.pop();
            for &x in self.inst.set(i) {
                self.covered_by[x] -= 1;
            }
        }
    }
}
