use crate::graph::{Graph, VertexId};
use crate::solution::{Colouring, ColouringKind};
use crate::weight::Weight;

/// First-fit vertex colouring in ascending id order over an adjacency list.
pub fn first_fit(adjacency: &[Vec<VertexId>]) -> Vec<usize> {
    let n = adjacency.len();
    let mut colour = vec![usize::MAX; n];
    let mut taken = Vec::new();
    for v in 0..n {
        taken.clear();
        taken.resize(adjacency[v].len() + 1, false);
        for &u in &adjacency[v] {
            if colour[u] < taken.len() {
                taken[colour[u]] = true;
            }
        }
        colour[v] = taken.iter().position(|t| !t).unwrap_or(taken.len());
    }
    colour
}

pub fn greedy_vertex_colouring_seq<W: Weight>(graph: &Graph<W>) -> Colouring {
    let adjacency: Vec<Vec<VertexId>> = (0..graph.n()).map(|v| graph.neighbours(v).collect()).collect();
    Colouring::from_colours(ColouringKind::Vertex, first_fit(&adjacency))
}

/// Misra-Gries edge colouring with at most `Δ + 1` colours on vertices
/// `0..n`. Edges are coloured in the given order.
pub struct EdgeColourer {
    /// `slot[v][c]` = (neighbour, edge index) using colour `c` at `v`.
    slot: Vec<Vec<Option<(VertexId, usize)>>>,
    colour: Vec<Option<usize>>,
}

impl EdgeColourer {
    pub fn colour(n: usize, edges: &[(VertexId, VertexId)]) -> Vec<usize> {
        let mut degree = vec![0usize; n];
        for &(u, v) in edges {
            degree[u] += 1;
            degree[v] += 1;
        }
        let palette = degree.iter().max().map_or(1, |d| d + 1);
        let mut state = EdgeColourer { slot: vec![vec![None; palette]; n], colour: vec![None; edges.len()] };
        for (e, &(u, v)) in edges.iter().enumerate() {
            state.colour_edge(e, u, v);
        }
        state.colour.into_iter().map(|c| c.expect("every edge is coloured")).collect()
    }

    fn is_free(&self, v: VertexId, c: usize) -> bool {
        self.slot[v][c].is_none()
    }

    fn first_free(&self, v: VertexId) -> usize {
        self.slot[v].iter().position(Option::is_none).expect("Δ+1 colours leave one free at every vertex")
    }

    fn set(&mut self, e: usize, u: VertexId, v: VertexId, c: usize) {
        debug_assert!(self.is_free(u, c) && self.is_free(v, c), "colour {c} already used at an endpoint");
        self.slot[u][c] = Some((v, e));
        self.slot[v][c] = Some((u, e));
        self.colour[e] = Some(c);
    }

    fn clear(&mut self, e: usize, u: VertexId, v: VertexId) {
        if let Some(c) = self.colour[e].take() {
            self.slot[u][c] = None;
            self.slot[v][c] = None;
        }
    }

    fn colour_edge(&mut self, e: usize, u: VertexId, v: VertexId) {
        // maximal fan at u starting with v: colour(u, f[i+1]) is free on f[i]
        let mut fan = vec![(v, e)];
        loop {
            let last = fan.last().expect("fan is never empty").0;
            let next = (0..self.slot[u].len()).find_map(|c| match self.slot[u][c] {
                Some((x, xe)) if self.is_free(last, c) && fan.iter().all(|&(f, _)| f != x) => Some((x, xe)),
                _ => None,
            });
            match next {
                Some(step) => fan.push(step),
                None => break,
            }
        }
        let c = self.first_free(u);
        let d = self.first_free(fan.last().expect("fan is never empty").0);

        // invert the cd-path starting at u
        if c != d {
            let mut path = Vec::new();
            let (mut at, mut want) = (u, d);
            while let Some((x, pe)) = self.slot[at][want] {
                path.push((pe, at, x, want));
                at = x;
                want = if want == d { c } else { d };
            }
            for &(pe, a, b, _) in &path {
                self.clear(pe, a, b);
            }
            for &(pe, a, b, was) in &path {
                self.set(pe, a, b, if was == d { c } else { d });
            }
        }

        // shortest fan prefix still valid whose tip has d free
        let w = (0..fan.len())
            .find(|&i| {
                self.is_free(fan[i].0, d)
                    && (0..i).all(|j| self.colour[fan[j + 1].1].is_some_and(|cj| self.is_free(fan[j].0, cj)))
            })
            .expect("a rotatable fan prefix always exists");

        let shifted: Vec<usize> = (1..=w).map(|j| self.colour[fan[j].1].expect("fan edges are coloured")).collect();
        for &(x, xe) in &fan[1..=w] {
            self.clear(xe, u, x);
        }
        for (j, &cj) in shifted.iter().enumerate() {
            self.set(fan[j].1, u, fan[j].0, cj);
        }
        self.set(fan[w].1, u, fan[w].0, d);
    }
}

pub fn misra_gries_edge_colouring_seq<W: Weight>(graph: &Graph<W>) -> Colouring {
    let edges: Vec<(VertexId, VertexId)> = graph.edges().iter().map(|e| (e.u, e.v)).collect();
    Colouring::from_colours(ColouringKind::Edge, EdgeColourer::colour(graph.n(), &edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::validate::validate_colouring;
    use crate::Rational;

    fn graph(n: usize, pairs: &[(usize, usize)]) -> Graph<Rational> {
        Graph::unweighted(n, pairs).unwrap()
    }

    #[test]
    fn vertex_examples() {
        let k3 = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        assert_eq!(greedy_vertex_colouring_seq(&k3).colour_count(), 3);
        assert_eq!(greedy_vertex_colouring_seq(&graph(5, &[])).colour_count(), 1);
        let star = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert_eq!(greedy_vertex_colouring_seq(&star).colour_count(), 2);
    }

    #[test]
    fn edge_examples() {
        assert_eq!(misra_gries_edge_colouring_seq(&graph(2, &[(0, 1)])).colour_count(), 1);
        let p3 = graph(3, &[(0, 1), (1, 2)]);
        assert_eq!(misra_gries_edge_colouring_seq(&p3).colour_count(), 2);
        let k3 = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let c = misra_gries_edge_colouring_seq(&k3);
        assert!(validate_colouring(&k3, &c).verdict.is_feasible());
        assert_eq!(c.colour_count(), 3);
    }

    #[test]
    fn dense_graphs_stay_within_delta_plus_one() {
        for n in 2..9 {
            let pairs: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
            let g = graph(n, &pairs);
            let c = misra_gries_edge_colouring_seq(&g);
            assert!(validate_colouring(&g, &c).verdict.is_feasible(), "K{n}");
            assert!(c.colour_count() <= g.max_degree() + 1);
        }
    }
}
