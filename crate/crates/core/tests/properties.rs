mod common;

use modcycle::canon::{canonical_form, find_isomorphism, is_isomorphic};
use modcycle::connectivity::{
    block_decomposition, is_2_connected, is_essentially_3_connected, vertex_connectivity,
};
use modcycle::cycles::{cycle_length_residues, Budget};
use modcycle::enumerate::{for_each_in_class, ClassConstraints};
use modcycle::families::{generate_exceptional, recognize_exceptional, Recognition, Step};
use modcycle::planarity::{exceeds_euler_bound, has_kuratowski_subdivision, is_planar};
use modcycle::{Graph, Suppressed, VertexSet};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sorted_degrees(g: &Graph) -> Vec<usize> {
    let mut d = g.degrees();
    d.sort_unstable();
    d
}

proptest! {
    #[test]
    fn degree_multiset_survives_relabeling((g, perm) in common::arb_graph_and_perm(12)) {
        let h = g.relabel(&perm).unwrap();
        prop_assert_eq!(sorted_degrees(&g), sorted_degrees(&h));
    }

    #[test]
    fn canonical_form_survives_relabeling((g, perm) in common::arb_graph_and_perm(11)) {
        let h = g.relabel(&perm).unwrap();
        prop_assert_eq!(canonical_form(&g), canonical_form(&h));
        let map = find_isomorphism(&g, &h).expect("relabeled copy is isomorphic");
        prop_assert_eq!(g.relabel(&map).unwrap(), h);
    }

    #[test]
    fn isomorphism_routes_agree(
        (g, perm) in common::arb_graph_and_perm(9),
        flip in any::<(usize, usize)>(),
        do_flip in any::<bool>(),
    ) {
        let mut h = g.relabel(&perm).unwrap();
        let n = h.order();
        if do_flip && n >= 2 {
            let (u, v) = (flip.0 % n, flip.1 % n);
            if u != v {
                if h.has_edge(u, v) { h.remove_edge(u, v); } else { h.add_edge(u, v); }
            }
        }
        prop_assert_eq!(is_isomorphic(&g, &h), canonical_form(&g) == canonical_form(&h));
    }

    #[test]
    fn graph6_round_trip(g in common::arb_graph(20)) {
        prop_assert_eq!(Graph::from_graph6(&g.to_graph6()).unwrap(), g);
    }

    #[test]
    fn deleting_in_two_rounds_matches_one(g in common::arb_graph(10), a in any::<u64>(), b in any::<u64>()) {
        let all = g.vertices().bits();
        let (a, b) = (a & all, b & all & !a);
        let (same, _) = g.delete_vertices(VertexSet::EMPTY).unwrap();
        prop_assert_eq!(&same, &g);
        let (first, map) = g.delete_vertices(VertexSet::from_bits(a)).unwrap();
        let b_mapped: VertexSet = VertexSet::from_bits(b).iter().map(|v| map[v].unwrap()).collect();
        let (twice, _) = first.delete_vertices(b_mapped).unwrap();
        let (once, _) = g.delete_vertices(VertexSet::from_bits(a | b)).unwrap();
        prop_assert_eq!(twice, once);
    }

    #[test]
    fn adding_an_edge_keeps_cycle_residues(g in common::arb_graph(8), e in any::<(usize, usize)>(), k in 3u32..=6) {
        let n = g.order();
        let (u, v) = (e.0 % n, e.1 % n);
        prop_assume!(u != v && !g.has_edge(u, v));
        let before = cycle_length_residues(&g, k, Budget::DEFAULT).unwrap();
        let mut h = g.clone();
        h.add_edge(u, v);
        let after = cycle_length_residues(&h, k, Budget::DEFAULT).unwrap();
        prop_assert!(before.is_subset(&after));
    }

    #[test]
    fn eight_vertex_cycle_residues_match_enumeration(bits in proptest::collection::vec(any::<bool>(), 28)) {
        let g = common::graph_from_bits(8, &bits);
        let lengths = common::cycle_lengths(&g);
        for k in [3u32, 4, 5] {
            let got = cycle_length_residues(&g, k, Budget::DEFAULT).unwrap();
            prop_assert_eq!(got.members(), common::residues(&lengths, k as usize));
        }
    }

    #[test]
    fn dense_graphs_are_not_planar(g in common::arb_graph(12)) {
        if exceeds_euler_bound(&g) {
            prop_assert!(!is_planar(&g).unwrap());
        }
    }

    #[test]
    fn recognition_survives_relabeling(idx in 0usize..40, seed in any::<u64>()) {
        let all = generate_exceptional(12).unwrap();
        let g = &all[idx % all.len()].graph;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut perm: Vec<usize> = (0..g.order()).collect();
        for i in (1..perm.len()).rev() {
            perm.swap(i, rng.gen_range(0..=i));
        }
        let h = g.relabel(&perm).unwrap();
        match recognize_exceptional(&h) {
            Recognition::Exceptional(r) => prop_assert!(r.verify(&h).is_ok()),
            Recognition::NotExceptional(r) => prop_assert!(false, "refuted: {:?}", r),
        }
    }
}

#[test]
fn planarity_routes_agree_on_sparse_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..400 {
        let n = rng.gen_range(5..=9);
        let p = rng.gen_range(0.25..0.5);
        let g = common::random_graph(&mut rng, n, p);
        assert_eq!(
            is_planar(&g).unwrap(),
            !has_kuratowski_subdivision(&g),
            "{}",
            g.to_graph6()
        );
    }
}

#[test]
fn suppression_raises_minimum_degree() {
    for n in 3..=8 {
        for_each_in_class(&ClassConstraints::few_two_vertices(n, 8), |g| {
            if !g.adjacent_two_vertices().is_empty() {
                return;
            }
            if let Suppressed::Simple { graph, .. } = g.suppress_two_vertices().unwrap() {
                assert!(graph.min_degree().unwrap() >= 3, "{}", g.to_graph6());
            }
        })
        .unwrap();
    }
}

#[test]
fn end_block_with_few_two_vertices() {
    for n in 3..=8 {
        for_each_in_class(&ClassConstraints::few_two_vertices(n, 3), |g| {
            if is_2_connected(g) {
                return;
            }
            let d = block_decomposition(g).unwrap();
            let good = (0..d.blocks.len()).filter(|&i| d.end_block[i]).any(|i| {
                let (b, _) = d.block_graph(g, i);
                b.min_degree().unwrap() >= 2 && b.two_vertex_set().len() <= 2
            });
            assert!(good, "{}", g.to_graph6());
        })
        .unwrap();
    }
}

#[test]
fn suppression_route_implies_essential_3_connectivity() {
    let mut applicable = 0;
    for n in 4..=8 {
        for_each_in_class(&ClassConstraints::few_two_vertices(n, 8), |g| {
            if !g.adjacent_two_vertices().is_empty() || !is_2_connected(g) {
                return;
            }
            if let Suppressed::Simple { graph, .. } = g.suppress_two_vertices().unwrap() {
                if graph.order() >= 4 && vertex_connectivity(&graph) >= 3 {
                    applicable += 1;
                    assert!(is_essentially_3_connected(g).unwrap(), "{}", g.to_graph6());
                }
            }
        })
        .unwrap();
    }
    assert!(applicable > 0);
}

#[test]
fn generated_family_invariants() {
    for e in generate_exceptional(14).unwrap() {
        let g = &e.graph;
        assert!(g.min_degree().unwrap() >= 2);
        assert_eq!(g.two_vertex_set().len(), 3);
        assert!(is_2_connected(g));
        // Exactly one 2-vertex is far from the other two, except in K₂,₃.
        if g.order() > 5 {
            let twos = g.two_vertex_set();
            let far: Vec<usize> = twos
                .iter()
                .filter(|&r| {
                    let d = g.distances_from(r).unwrap();
                    twos.iter().filter(|&o| o != r).all(|o| d[o].unwrap() >= 3)
                })
                .collect();
            assert_eq!(far, vec![e.trace.root]);
        }
        // P exactly when the current pair is non-adjacent.
        let mut prefix = e.trace.clone();
        for i in 0..e.trace.steps.len() {
            prefix.steps.truncate(i);
            let g_i = prefix.replay().unwrap();
            let mut pair = g_i.two_vertex_set().iter().filter(|&v| v != e.trace.root);
            let (x, y) = (pair.next().unwrap(), pair.next().unwrap());
            let is_p = matches!(e.trace.steps[i], Step::P { .. });
            assert_eq!(is_p, !g_i.has_edge(x, y));
            prefix = e.trace.clone();
        }
    }
}
