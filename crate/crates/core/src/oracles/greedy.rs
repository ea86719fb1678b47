use crate::error::{CoreError, Result};
use crate::graph::Graph;
use crate::setcover::SetCoverInstance;
use crate::solution::{Cover, VertexSet};
use crate::weight::Weight;

/// Greedy set cover that accepts any set within a `(1+ε)` factor of the best
/// uncovered-elements-per-weight ratio, lowest index first.
pub fn eps_greedy_set_cover_seq<W: Weight>(inst: &SetCoverInstance<W>, epsilon: W) -> Result<Cover> {
    if epsilon < W::zero() {
        return Err(CoreError::InvalidParameter(format!("epsilon {epsilon} is negative")));
    }
    inst.ensure_coverable()?;
    let one_plus_eps = W::one() + epsilon;
    let mut fresh: Vec<usize> = inst.sets().iter().map(Vec::len).collect();
    let mut covered = vec![false; inst.m()];
    let mut left = inst.m();
    let mut chosen = Vec::new();
    while left > 0 {
        let ratio = |i: usize| W::from_count(fresh[i]) / inst.weight(i).clone();
        let best = (0..inst.n()).filter(|&i| fresh[i] > 0).map(ratio).fold(W::zero(), crate::weight::max_weight);
        let threshold = best / one_plus_eps.clone();
        let pick =
            (0..inst.n()).find(|&i| fresh[i] > 0 && ratio(i) >= threshold).expect("the best set always qualifies");
        chosen.push(pick);
        for &j in inst.set(pick) {
            if !covered[j] {
                covered[j] = true;
                left -= 1;
                for &i in inst.covering(j) {
                    fresh[i] -= 1;
                }
            }
        }
    }
    Ok(Cover::new(chosen))
}

/// Lowest-id first-fit maximal independent set.
pub fn greedy_mis_seq<W: Weight>(graph: &Graph<W>) -> VertexSet {
    let mut blocked = vec![false; graph.n()];
    let mut chosen = Vec::new();
    for v in 0..graph.n() {
        if !blocked[v] {
            chosen.push(v);
            for u in graph.neighbours(v) {
                blocked[u] = true;
            }
        }
    }
    VertexSet { vertices: chosen }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    fn four_sets() -> SetCoverInstance<Rational> {
        let tenths = |k: i64| Rational::new(k.into(), 10.into());
        SetCoverInstance::new(
            3,
            vec![vec![0, 1, 2], vec![0], vec![1], vec![2]],
            vec![tenths(10), tenths(4), tenths(4), tenths(4)],
        )
        .unwrap()
    }

    #[test]
    fn classic_greedy_picks_the_big_set() {
        assert_eq!(eps_greedy_set_cover_seq(&four_sets(), Rational::from_integer(0.into())).unwrap().sets, vec![0]);
        assert_eq!(eps_greedy_set_cover_seq(&four_sets(), Rational::from_integer(1.into())).unwrap().sets, vec![0]);
    }

    #[test]
    fn single_set() {
        let inst = SetCoverInstance::new(1, vec![vec![0]], vec![Rational::from_integer(2.into())]).unwrap();
        assert_eq!(eps_greedy_set_cover_seq(&inst, Rational::from_integer(0.into())).unwrap().sets, vec![0]);
    }

    #[test]
    fn slack_prefers_lowest_index() {
        // ratios 2/1 and 3/1; with ε = 1 the first set is already good enough
        let one = Rational::from_integer(1.into());
        let inst = SetCoverInstance::new(3, vec![vec![0, 1], vec![0, 1, 2]], vec![one.clone(), one.clone()]).unwrap();
        assert_eq!(eps_greedy_set_cover_seq(&inst, Rational::from_integer(0.into())).unwrap().sets, vec![1]);
        assert_eq!(eps_greedy_set_cover_seq(&inst, one).unwrap().sets, vec![0, 1]);
    }

    #[test]
    fn mis_first_fit() {
        let g = Graph::<Rational>::unweighted(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
        assert_eq!(greedy_mis_seq(&g).vertices, vec![0, 2, 4]);
    }
}
