//! Graphs, sequences and reductions against brute force.

use proptest::prelude::*;
use qptest::graph::{
    bfs_limited, contains_copy, find_any_copy, verify_embedding, BoundedOutDigraph, OracleView,
    OutAdjacency, PatternGraph,
};
use qptest::instances::{
    gen_collision_sequence, gen_far_h_instance, gen_h_free_instance, min_edge_deletions_to_free,
    reduce_collision_to_star, reduce_dummy_collision, CollisionMode, CollisionStarGraph,
    FillerOptions, IntegerSequence,
};

/// Tries every injective map of pattern vertices into the graph.
fn brute_contains(g: &BoundedOutDigraph, p: &PatternGraph) -> bool {
    fn go(g: &BoundedOutDigraph, p: &PatternGraph, map: &mut Vec<usize>) -> bool {
        if map.len() == p.h() {
            return p.edges().iter().all(|&(a, b)| g.has_edge(map[a], map[b]));
        }
        for v in 0..g.n() {
            if !map.contains(&v) {
                map.push(v);
                if go(g, p, map) {
                    return true;
                }
                map.pop();
            }
        }
        false
    }
    go(g, p, &mut Vec::new())
}

fn brute_k_collision(values: &[usize], k: usize) -> bool {
    values.iter().any(|&v| values.iter().filter(|&&w| w == v).count() >= k)
}

fn small_graph() -> impl Strategy<Value = BoundedOutDigraph> {
    (3usize..8).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(0..n, 0..=2), n).prop_map(move |lists| {
            let mut g = BoundedOutDigraph::new(n, 2);
            for (u, list) in lists.into_iter().enumerate() {
                for w in list {
                    if g.can_add_edge(u, w) {
                        g.add_edge(u, w).unwrap();
                    }
                }
            }
            g
        })
    })
}

fn sequence(max_n: usize, max_r: usize) -> impl Strategy<Value = IntegerSequence> {
    (1..=max_r, 1..=max_n).prop_flat_map(|(r, n)| {
        prop::collection::vec(1..=r, n).prop_map(move |v| IntegerSequence::new(r, v).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn copy_search_matches_brute_force(g in small_graph(), k in 2usize..4, cyc in 2usize..4) {
        let star = PatternGraph::k_star(k);
        prop_assert_eq!(contains_copy(&g, &star), brute_contains(&g, &star));
        let cycle = PatternGraph::directed_cycle(cyc).unwrap();
        prop_assert_eq!(contains_copy(&g, &cycle), brute_contains(&g, &cycle));
        if let Some(emb) = find_any_copy(&g, &star) {
            prop_assert!(verify_embedding(&g, &star, &emb));
        }
    }

    #[test]
    fn star_reduction_is_sound(seq in sequence(12, 6), k in 2usize..5) {
        let g = reduce_collision_to_star(&seq, 1).unwrap();
        let star = PatternGraph::k_star(k);
        prop_assert_eq!(contains_copy(&g, &star), brute_k_collision(seq.values(), k));
        prop_assert_eq!(seq.has_k_collision(k), brute_k_collision(seq.values(), k));
        let lazy = CollisionStarGraph::new(&seq, 1).unwrap();
        for v in 0..g.n() {
            prop_assert_eq!(lazy.out_neighbors(v), g.adjacency(v).to_vec());
        }
    }

    #[test]
    fn dummy_reduction_preserves_k3(vals in prop::collection::vec(0usize..=4, 1..12), k in 3usize..5) {
        let seq = IntegerSequence::with_dummies(4, vals.clone()).unwrap();
        let red = reduce_dummy_collision(&seq);
        let real: Vec<usize> = vals.iter().copied().filter(|&v| v != 0).collect();
        prop_assert_eq!(red.sequence.has_k_collision(k), brute_k_collision(&real, k));
        prop_assert!(!red.sequence.values().contains(&0));
    }

    #[test]
    fn sequence_roundtrips(seq in sequence(30, 10)) {
        prop_assert_eq!(&IntegerSequence::from_text(&seq.to_text()).unwrap(), &seq);
        prop_assert_eq!(&IntegerSequence::from_json(&seq.to_json().unwrap()).unwrap(), &seq);
    }

    #[test]
    fn graph_roundtrips(g in small_graph()) {
        prop_assert_eq!(&BoundedOutDigraph::from_text(&g.to_text()).unwrap(), &g);
        prop_assert_eq!(&BoundedOutDigraph::from_json(&g.to_json().unwrap()).unwrap(), &g);
    }

    #[test]
    fn bfs_reads_each_slot_once(g in small_graph(), start in 0usize..3, depth in 0usize..4) {
        let mut view = OracleView::new(&g);
        let ball = bfs_limited(&mut view, start, depth).unwrap();
        prop_assert!(view.ledger().classical as usize <= ball.vertices.len() * g.d_out());
        for &(u, w) in &ball.edges {
            prop_assert!(g.has_edge(u, w));
        }
    }
}

#[test]
fn dummy_sequence_text_roundtrip() {
    let seq = IntegerSequence::with_dummies(3, vec![0, 2, 0, 3]).unwrap();
    assert_eq!(IntegerSequence::from_text(&seq.to_text()).unwrap(), seq);
    assert_eq!(IntegerSequence::from_json(&seq.to_json().unwrap()).unwrap(), seq);
}

#[test]
fn far_certificates_are_exact_on_tiny_hosts() {
    for k in 2..=3 {
        let star = PatternGraph::k_star(k);
        for seed in 0..6 {
            let (g, cert) = gen_far_h_instance(12, 2, &star, 0.1, seed).unwrap();
            let exact = min_edge_deletions_to_free(&g, &star);
            assert!(exact >= cert.min_modifications, "k={k} seed={seed}");
            let free = gen_h_free_instance(10, 2, &star, seed, FillerOptions::default()).unwrap();
            assert!(!brute_contains(&free, &star));
            assert_eq!(min_edge_deletions_to_free(&free, &star), 0);
        }
    }
}

#[test]
fn collision_generator_distances() {
    for k in 2..=4 {
        for seed in 0..5 {
            let (far, cert) =
                gen_collision_sequence(60, 60, k, CollisionMode::Far { epsilon: 0.1 }, seed).unwrap();
            let cert = cert.unwrap();
            assert!(far.distance_to_k_collision_free(k).unwrap() >= cert.min_modifications);
            assert!(cert.min_modifications >= 6);
            let (free, _) = gen_collision_sequence(60, 60, k, CollisionMode::Free, seed).unwrap();
            assert!(!brute_k_collision(free.values(), k));
        }
    }
}
