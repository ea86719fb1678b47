use lrmr_core::io::{parse_graph, parse_set_cover, write_graph, write_set_cover};
use lrmr_core::oracles::local_ratio::lr_matching_state;
use lrmr_core::oracles::*;
use lrmr_core::validate::{validate_colouring, validate_cover, validate_matching};
use lrmr_core::{
    edge_quota, generate_graph, generate_graph_with_edges, generate_set_cover, harmonic, ratio, rational, ExactGraph,
    ExactSetCover, Rational,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn small_graph() -> impl Strategy<Value = ExactGraph> {
    (2usize..9, any::<u64>()).prop_flat_map(|(n, seed)| {
        let max_m = (n * (n - 1) / 2).min(14);
        (0..=max_m).prop_map(move |m| generate_graph_with_edges(n, m, (1, 10), seed).unwrap())
    })
}

fn small_set_cover() -> impl Strategy<Value = ExactSetCover> {
    (1usize..10, 0usize..10, 0.0f64..0.6, any::<u64>())
        .prop_map(|(n, m, density, seed)| generate_set_cover(n, m, density, (1, 10), seed).unwrap())
}

fn shuffled(len: usize, seed: u64) -> Vec<usize> {
    let mut order: Vec<usize> = (0..len).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    order
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn graph_file_round_trip(g in small_graph()) {
        let text = write_graph(&g);
        let back: ExactGraph = parse_graph(&text).unwrap();
        prop_assert_eq!(write_graph(&back), text);
        prop_assert_eq!(back, g);
    }

    #[test]
    fn set_cover_file_round_trip(inst in small_set_cover()) {
        let text = write_set_cover(&inst);
        let back: ExactSetCover = parse_set_cover(&text).unwrap();
        prop_assert_eq!(write_set_cover(&back), text);
        prop_assert!(back.check_views());
    }

    #[test]
    fn generated_graph_shape(n in 2usize..60, c in 0.0f64..0.99, seed in any::<u64>()) {
        let g: ExactGraph = generate_graph(n, c, (1, 3), seed).unwrap();
        prop_assert_eq!(g.m() as u64, edge_quota(n, c));
        let mut pairs: Vec<_> = g.edges().iter().map(|e| (e.u, e.v)).collect();
        prop_assert!(pairs.iter().all(|&(u, v)| u < v));
        pairs.dedup();
        prop_assert_eq!(pairs.len(), g.m());
        prop_assert!(g.check_adjacency());
    }

    #[test]
    fn dual_views_invert(inst in small_set_cover()) {
        prop_assert!(inst.check_views());
        prop_assert_eq!(inst.primal_from_dual(), inst.sets().to_vec());
    }

    #[test]
    fn matching_local_ratio_is_half_optimal(g in small_graph(), seed in any::<u64>()) {
        let order = shuffled(g.m(), seed);
        let m = lr_matching_seq(&g, &order);
        prop_assert!(validate_matching(&g, &m.edges, None).verdict.is_feasible());
        let (opt, _) = max_weight_matching(&g).unwrap();
        prop_assert!(m.weight(&g) * rational(2) >= opt);
    }

    #[test]
    fn phi_representation_is_exact(g in small_graph(), seed in any::<u64>()) {
        let order = shuffled(g.m(), seed);
        let state = lr_matching_state(&g, &order);
        let (stack, matching) = lr_matching_naive(&g, &order);
        prop_assert_eq!(state.stack.iter().map(|s| s.0).collect::<Vec<_>>(), stack);
        prop_assert_eq!(state.unwind(&g), matching);
    }

    #[test]
    fn unwind_never_skips_a_free_edge(g in small_graph(), seed in any::<u64>()) {
        let state = lr_matching_state(&g, &shuffled(g.m(), seed));
        let m = state.unwind(&g);
        for (id, _) in &state.stack {
            let e = g.edge(*id);
            prop_assert!(m.edges.contains(id) || m.load[e.u] > 0 || m.load[e.v] > 0);
        }
        // every unpushed edge ends with non-positive modified weight
        for id in 0..g.m() {
            prop_assert!(state.is_pushed(id) || state.modified(&g, id, &g.edge(id).w) <= rational(0));
        }
    }

    #[test]
    fn set_cover_local_ratio_is_f_approximate(inst in small_set_cover(), seed in any::<u64>()) {
        let cover = lr_set_cover_seq(&inst, &shuffled(inst.m(), seed)).unwrap();
        prop_assert!(validate_cover(&inst, &cover).verdict.is_feasible());
        let (opt, _) = min_set_cover(&inst).unwrap();
        prop_assert!(inst.total_weight(cover.sets.iter().copied()) <= rational(inst.frequency() as i64) * opt);
    }

    #[test]
    fn b_matching_bound(g in small_graph(), b in 1usize..4, eps in 0i64..5, seed in any::<u64>()) {
        let caps = vec![b; g.n()];
        let eps = ratio(eps, 10);
        let m = lr_bmatching_seq(&g, &caps, eps.clone(), &shuffled(g.m(), seed));
        prop_assert!(validate_matching(&g, &m.edges, Some(&caps)).verdict.is_feasible());
        let (opt, _) = max_weight_b_matching(&g, &caps).unwrap();
        let bound = rational(3) - ratio(2, b.max(2) as i64) + rational(2) * eps;
        prop_assert!(m.weight(&g) * bound >= opt);
    }

    #[test]
    fn b_matching_with_unit_capacity_is_matching(g in small_graph(), seed in any::<u64>()) {
        let order = shuffled(g.m(), seed);
        prop_assert_eq!(lr_bmatching_seq(&g, &vec![1; g.n()], rational(0), &order), lr_matching_seq(&g, &order));
    }

    #[test]
    fn eps_greedy_bound(inst in small_set_cover(), eps in 0i64..20) {
        let eps = ratio(eps, 10);
        let cover = eps_greedy_set_cover_seq(&inst, eps.clone()).unwrap();
        prop_assert!(validate_cover(&inst, &cover).verdict.is_feasible());
        let (opt, _) = min_set_cover(&inst).unwrap();
        let h: Rational = harmonic(inst.max_set_size());
        prop_assert!(inst.total_weight(cover.sets.iter().copied()) <= (rational(1) + eps) * h * opt);
    }

    #[test]
    fn colouring_oracles(n in 2usize..40, c in 0.0f64..0.9, seed in any::<u64>()) {
        let g: ExactGraph = generate_graph(n, c, (1, 1), seed).unwrap();
        let v = greedy_vertex_colouring_seq(&g);
        prop_assert!(validate_colouring(&g, &v).verdict.is_feasible());
        prop_assert!(v.colour_count() <= g.max_degree() + 1);
        let e = misra_gries_edge_colouring_seq(&g);
        prop_assert!(validate_colouring(&g, &e).verdict.is_feasible());
        prop_assert!(e.colour_count() <= g.max_degree() + 1);
    }
}

#[test]
fn triangle_needs_three_edge_colours() {
    let k3 = ExactGraph::unweighted(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
    // every 2-colouring of three pairwise-adjacent edges repeats a colour
    for mask in 0..8u32 {
        let colours: Vec<usize> = (0..3).map(|i| (mask >> i & 1) as usize).collect();
        let c = lrmr_core::Colouring::from_colours(lrmr_core::ColouringKind::Edge, colours);
        assert!(!validate_colouring(&k3, &c).verdict.is_feasible());
    }
    assert_eq!(misra_gries_edge_colouring_seq(&k3).colour_count(), 3);
}
