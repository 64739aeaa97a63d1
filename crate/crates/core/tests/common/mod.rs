//! Brute-force oracles and random inputs shared by the integration tests.
//! Nothing here prunes: every simple cycle and path is walked explicitly.
#![allow(dead_code)]

use std::collections::BTreeSet;

use modcycle::Graph;
use proptest::prelude::*;
use rand::Rng;

/// Lengths of all simple cycles.
pub fn cycle_lengths(g: &Graph) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for s in 0..g.order() {
        let mut path = vec![s];
        walk_cycles(g, s, &mut path, &mut |len| {
            out.insert(len);
        });
    }
    out
}

/// Lengths of all simple cycles through `v`.
pub fn cycle_lengths_through(g: &Graph, v: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    let mut path = vec![v];
    walk_cycles(g, v, &mut path, &mut |len| {
        out.insert(len);
    });
    out
}

fn walk_cycles(g: &Graph, s: usize, path: &mut Vec<usize>, found: &mut dyn FnMut(usize)) {
    let last = *path.last().unwrap();
    for w in 0..g.order() {
        if !g.has_edge(last, w) {
            continue;
        }
        if w == s && path.len() >= 3 {
            found(path.len());
        } else if !path.contains(&w) {
            path.push(w);
            walk_cycles(g, s, path, found);
            path.pop();
        }
    }
}

/// Lengths of all simple `(x, y)`-paths.
pub fn path_lengths(g: &Graph, x: usize, y: usize) -> BTreeSet<usize> {
    fn go(g: &Graph, y: usize, path: &mut Vec<usize>, out: &mut BTreeSet<usize>) {
        let last = *path.last().unwrap();
        if last == y {
            out.insert(path.len() - 1);
            return;
        }
        for w in 0..g.order() {
            if g.has_edge(last, w) && !path.contains(&w) {
                path.push(w);
                go(g, y, path, out);
                path.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    go(g, y, &mut vec![x], &mut out);
    out
}

pub fn residues(lengths: &BTreeSet<usize>, k: usize) -> Vec<u32> {
    let set: BTreeSet<u32> = lengths.iter().map(|&l| (l % k) as u32).collect();
    set.into_iter().collect()
}

/// Whether some path joins `xs` to `ys` in `g - removed`.
fn linked(g: &Graph, xs: u64, ys: u64, removed: u64) -> bool {
    let n = g.order();
    let mut seen = xs & !removed;
    let mut stack: Vec<usize> = (0..n).filter(|&v| seen >> v & 1 == 1).collect();
    while let Some(u) = stack.pop() {
        if ys >> u & 1 == 1 {
            return true;
        }
        for w in 0..n {
            if g.has_edge(u, w) && (seen | removed) >> w & 1 == 0 {
                seen |= 1 << w;
                stack.push(w);
            }
        }
    }
    false
}

/// Size of a smallest vertex set meeting every `(X, Y)`-path, by trying
/// all subsets in order of size.
pub fn min_separator(g: &Graph, xs: u64, ys: u64) -> usize {
    let n = g.order();
    for size in 0..=n {
        for s in 0u64..(1 << n) {
            if s.count_ones() as usize == size && !linked(g, xs, ys, s) {
                return size;
            }
        }
    }
    unreachable!("removing every vertex separates")
}

pub fn graph_from_bits(n: usize, bits: &[bool]) -> Graph {
    let mut g = Graph::new(n).unwrap();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bits[k] {
                g.add_edge(i, j);
            }
            k += 1;
        }
    }
    g
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, p: f64) -> Graph {
    let bits: Vec<bool> = (0..n * n.saturating_sub(1) / 2).map(|_| rng.gen_bool(p)).collect();
    graph_from_bits(n, &bits)
}

/// Graphs with `1..=max_n` vertices and independent edges of probability 1/2.
pub fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2)
            .prop_map(move |bits| graph_from_bits(n, &bits))
    })
}

/// A graph together with a permutation of its vertices.
pub fn arb_graph_and_perm(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    arb_graph(max_n).prop_flat_map(|g| {
        let n = g.order();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}
