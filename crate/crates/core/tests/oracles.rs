//! Pruned searches against unpruned enumeration, on every graph with at
//! most seven vertices.

mod common;

use std::collections::BTreeSet;

use modcycle::canon::canonical_form;
use modcycle::cycles::{
    cycle_length_residues, cycle_residues_through, find_cycle_mod, find_path_mod, path_residues,
    Budget,
};
use modcycle::enumerate::{enumerate_class, naive_class, ClassConstraints};
use modcycle::Graph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn every_graph_up_to(n: usize) -> Vec<Graph> {
    (1..=n)
        .flat_map(|k| enumerate_class(&ClassConstraints::all(k)).unwrap())
        .collect()
}

#[test]
fn cycle_residues_match_enumeration() {
    for g in every_graph_up_to(7) {
        let lengths = common::cycle_lengths(&g);
        for k in 2..=6u32 {
            let want = common::residues(&lengths, k as usize);
            let got = cycle_length_residues(&g, k, Budget::DEFAULT).unwrap();
            assert_eq!(got.members(), want, "{} mod {k}", g.to_graph6());
            for r in 0..k {
                let cert = find_cycle_mod(&g, k, r, Budget::DEFAULT).unwrap();
                assert_eq!(cert.is_some(), want.contains(&r), "{} r={r} k={k}", g.to_graph6());
                if let Some(c) = cert {
                    c.validate(&g).unwrap();
                }
            }
        }
    }
}

#[test]
fn cycles_through_a_vertex_match_enumeration() {
    for g in every_graph_up_to(7) {
        for v in 0..g.order() {
            let lengths = common::cycle_lengths_through(&g, v);
            for k in [3u32, 4] {
                let got = cycle_residues_through(&g, v, k, Budget::DEFAULT).unwrap();
                assert_eq!(got.members(), common::residues(&lengths, k as usize));
            }
        }
    }
}

#[test]
fn path_residues_match_enumeration() {
    for g in every_graph_up_to(7) {
        let n = g.order();
        for x in 0..n {
            for y in x + 1..n {
                let lengths = common::path_lengths(&g, x, y);
                for k in [3u32, 4] {
                    let want = common::residues(&lengths, k as usize);
                    let got = path_residues(&g, x, y, k, Budget::DEFAULT).unwrap();
                    assert_eq!(got.members(), want, "{} ({x},{y}) mod {k}", g.to_graph6());
                    for r in 0..k {
                        let path = find_path_mod(&g, x, y, k, r, Budget::DEFAULT).unwrap();
                        assert_eq!(path.is_some(), want.contains(&r));
                        if let Some(p) = path {
                            assert_eq!((p[0], *p.last().unwrap()), (x, y));
                            assert_eq!(((p.len() - 1) % k as usize) as u32, r);
                            assert!(p.windows(2).all(|w| g.has_edge(w[0], w[1])));
                            assert_eq!(p.iter().collect::<BTreeSet<_>>().len(), p.len());
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn unconstrained_counts_match_naive_dedup() {
    for (n, want) in [(1, 1), (2, 2), (3, 4), (4, 11), (5, 34), (6, 156)] {
        let c = ClassConstraints::all(n);
        assert_eq!(naive_class(&c).unwrap().len(), want);
        assert_eq!(enumerate_class(&c).unwrap().len(), want);
    }
}

#[test]
fn enumeration_matches_naive_oracle_on_random_constraints() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut cases = vec![
        ClassConstraints::few_two_vertices(5, 3),
        ClassConstraints::few_two_vertices(7, 3),
        ClassConstraints::connected(7),
    ];
    while cases.len() < 13 {
        let n = rng.gen_range(2..=7);
        cases.push(ClassConstraints {
            n,
            min_degree: rng.gen_range(0..=3),
            max_two_vertices: rng.gen_bool(0.6).then(|| rng.gen_range(0..=4)),
            connected: rng.gen_bool(0.5),
            min_degree_global: rng.gen_bool(0.2).then(|| rng.gen_range(0..=3)),
        });
    }
    for c in cases {
        let want = naive_class(&c).unwrap();
        let mut got: Vec<_> = enumerate_class(&c).unwrap().iter().map(canonical_form).collect();
        got.sort();
        assert_eq!(got, want, "{c:?}");
    }
}
