//! Planarity for desk-scale graphs.
//!
//! [`is_planar`] runs the edge-count prescreen `e <= 3n - 6` and then embeds
//! each block face by face (Demoucron–Malgrange–Pertuiset). The exhaustive
//! Kuratowski search in [`has_kuratowski_subdivision`] is an independent
//! second route; it is exponential and meant for sparse or small graphs.

use std::collections::HashSet;

use crate::canon::{canonical_form, CanonicalForm};
use crate::connectivity::blocks_and_cuts;
use crate::error::{Error, Result};
use crate::graph::{bit, low_mask, Bits, Graph};

/// Largest order accepted by [`is_planar`].
pub const PLANARITY_MAX_ORDER: usize = 16;

pub fn is_planar(g: &Graph) -> Result<bool> {
    let n = g.order();
    if n > PLANARITY_MAX_ORDER {
        return Err(Error::precondition(format!(
            "planarity is limited to {PLANARITY_MAX_ORDER} vertices, got {n}"
        )));
    }
    if exceeds_euler_bound(g) {
        return Ok(false);
    }
    let (blocks, _) = blocks_and_cuts(g);
    Ok(blocks
        .into_iter()
        .filter(|b| b.count_ones() >= 5)
        .all(|b| embed_biconnected(&g.induced(b))))
}

/// `e > 3n - 6` (for `n >= 3`) rules out planarity.
pub fn exceeds_euler_bound(g: &Graph) -> bool {
    let n = g.order();
    n >= 3 && g.edge_count() > 3 * n - 6
}

/// Face-by-face embedding of a 2-connected graph. Faces are stored as
/// cyclic vertex sequences; in a 2-connected plane graph every face is
/// bounded by a cycle.
fn embed_biconnected(g: &Graph) -> bool {
    let n = g.order();
    let Some(cycle) = some_cycle(g) else {
        return true;
    };
    let mut placed_v = 0u64;
    let mut placed_e = vec![0u64; n];
    let place_path = |p: &[usize], placed_v: &mut u64, placed_e: &mut Vec<u64>| {
        for w in p.windows(2) {
            placed_e[w[0]] |= bit(w[1]);
            placed_e[w[1]] |= bit(w[0]);
        }
        for &v in p {
            *placed_v |= bit(v);
        }
    };
    let mut closed = cycle.clone();
    closed.push(cycle[0]);
    place_path(&closed, &mut placed_v, &mut placed_e);
    let mut faces = vec![cycle.clone(), cycle];

    loop {
        let fragments = fragments(g, placed_v, &placed_e);
        if fragments.is_empty() {
            return true;
        }
        let mut choice: Option<(usize, usize)> = None;
        for (fi, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, f)| {
                    let fmask = f.iter().fold(0u64, |m, &v| m | bit(v));
                    frag.attachments & !fmask == 0
                })
                .map(|(i, _)| i)
                .collect();
            match admissible.len() {
                0 => return false,
                1 => {
                    choice = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, face_idx) = choice.unwrap();
        let path = fragment_path(g, &fragments[fi], placed_v);
        place_path(&path, &mut placed_v, &mut placed_e);
        let face = faces.swap_remove(face_idx);
        let (f1, f2) = split_face(&face, &path);
        faces.push(f1);
        faces.push(f2);
    }
}

struct Fragment {
    /// Vertices of `H` touched by the fragment.
    attachments: u64,
    /// Interior vertices (empty for a single chord edge).
    interior: u64,
    /// For a chord: its ends.
    chord: Option<(usize, usize)>,
}

fn fragments(g: &Graph, placed_v: u64, placed_e: &[u64]) -> Vec<Fragment> {
    let n = g.order();
    let mut out = Vec::new();
    for u in Bits(placed_v) {
        for v in Bits(g.row(u) & placed_v & !placed_e[u] & !low_mask(u + 1)) {
            out.push(Fragment {
                attachments: bit(u) | bit(v),
                interior: 0,
                chord: Some((u, v)),
            });
        }
    }
    for comp in g.components_within(low_mask(n) & !placed_v) {
        let mut att = 0u64;
        for v in Bits(comp) {
            att |= g.row(v) & placed_v;
        }
        out.push(Fragment {
            attachments: att,
            interior: comp,
            chord: None,
        });
    }
    out
}

/// A path through the fragment joining two distinct attachments.
fn fragment_path(g: &Graph, frag: &Fragment, placed_v: u64) -> Vec<usize> {
    if let Some((u, v)) = frag.chord {
        return vec![u, v];
    }
    let a = frag.attachments.trailing_zeros() as usize;
    // BFS inside the interior from the neighbors of `a`, stopping at the
    // first interior vertex adjacent to another attachment.
    let others = frag.attachments & !bit(a);
    let mut prev = [usize::MAX; 64];
    let mut frontier = g.row(a) & frag.interior;
    let mut seen = frontier;
    for v in Bits(frontier) {
        prev[v] = a;
    }
    loop {
        if let Some(end) = Bits(frontier).find(|&v| g.row(v) & others != 0) {
            let b = (g.row(end) & others).trailing_zeros() as usize;
            let mut path = vec![b, end];
            let mut cur = end;
            while prev[cur] != a {
                cur = prev[cur];
                path.push(cur);
            }
            path.push(a);
            path.reverse();
            return path;
        }
        let mut next = 0u64;
        for v in Bits(frontier) {
            for w in Bits(g.row(v) & frag.interior & !seen) {
                prev[w] = v;
                next |= bit(w);
            }
            seen |= next;
        }
        assert!(next != 0, "fragment of a 2-connected graph has two attachments");
        debug_assert_eq!(next & placed_v, 0);
        frontier = next;
    }
}

/// Split the cyclic face by a path joining two of its vertices.
fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let a = path[0];
    let b = *path.last().unwrap();
    let m = face.len();
    let ia = face.iter().position(|&v| v == a).unwrap();
    let ib = face.iter().position(|&v| v == b).unwrap();
    let inner = &path[1..path.len() - 1];
    // a → … → b along the face, then back to a along the path interior.
    let mut f1 = Vec::new();
    let mut i = ia;
    loop {
        f1.push(face[i]);
        if i == ib {
            break;
        }
        i = (i + 1) % m;
    }
    f1.extend(inner.iter().rev());
    // b → … → a along the face, then forward along the path interior.
    let mut f2 = Vec::new();
    let mut i = ib;
    loop {
        f2.push(face[i]);
        if i == ia {
            break;
        }
        i = (i + 1) % m;
    }
    f2.extend(inner.iter());
    (f1, f2)
}

/// Any cycle, as a vertex sequence.
fn some_cycle(g: &Graph) -> Option<Vec<usize>> {
    let n = g.order();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![usize::MAX; n];
    for root in 0..n {
        if depth[root] != usize::MAX {
            continue;
        }
        depth[root] = 0;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            for v in Bits(g.row(u)) {
                if depth[v] == usize::MAX {
                    depth[v] = depth[u] + 1;
                    parent[v] = u;
                    stack.push(v);
                } else if v != parent[u] && parent[v] != u {
                    // Non-tree edge uv: climb both ends to their meeting point.
                    let (mut x, mut y) = (u, v);
                    let mut left = vec![x];
                    let mut right = vec![y];
                    while x != y {
                        if depth[x] >= depth[y] {
                            x = parent[x];
                            left.push(x);
                        } else {
                            y = parent[y];
                            right.push(y);
                        }
                    }
                    // left: u .. lca, right: v .. lca
                    right.pop();
                    right.reverse();
                    left.extend(right);
                    return Some(left);
                }
            }
        }
    }
    None
}

/// Exhaustive search for a subdivision of `K₅` or `K₃,₃`.
///
/// The graph is reduced (vertices of degree at most one deleted, 2-vertices
/// suppressed, parallel edges dropped) and split into blocks; a reduced
/// block that is not itself `K₅` or `K₃,₃` contains a Kuratowski subgraph
/// only if some single-edge deletion does, which is searched recursively
/// with memoization on canonical forms.
pub fn has_kuratowski_subdivision(g: &Graph) -> bool {
    let mut memo = HashSet::new();
    search_kuratowski(g, &mut memo)
}

fn search_kuratowski(g: &Graph, memo: &mut HashSet<CanonicalForm>) -> bool {
    let h = reduce(g);
    let (blocks, _) = blocks_and_cuts(&h);
    let big: Vec<u64> = blocks.into_iter().filter(|b| b.count_ones() >= 5).collect();
    if big.len() == 1 && big[0] == low_mask(h.order()) {
        return kuratowski_core(&h, memo);
    }
    big.into_iter().any(|b| search_kuratowski(&h.induced(b), memo))
}

/// `h` is reduced and 2-connected.
fn kuratowski_core(h: &Graph, memo: &mut HashSet<CanonicalForm>) -> bool {
    let n = h.order();
    let e = h.edge_count();
    if n < 5 {
        return false;
    }
    if n == 5 && e == 10 {
        return true;
    }
    if n == 6 && e == 9 && is_k33(h) {
        return true;
    }
    if n == 5 {
        return false;
    }
    let key = canonical_form(h);
    if memo.contains(&key) {
        return false;
    }
    let edges: Vec<_> = h.edges().collect();
    for (u, v) in edges {
        let mut smaller = h.clone();
        smaller.remove_edge(u, v);
        if search_kuratowski(&smaller, memo) {
            return true;
        }
    }
    memo.insert(key);
    false
}

fn is_k33(h: &Graph) -> bool {
    if h.degrees().iter().any(|&d| d != 3) {
        return false;
    }
    // 3-regular on six vertices is K3,3 or the prism; K3,3 is triangle-free.
    (0..6).all(|v| Bits(h.row(v)).all(|u| h.row(u) & h.row(v) == 0))
}

/// Delete vertices of degree ≤ 1 and suppress 2-vertices until stable.
fn reduce(g: &Graph) -> Graph {
    let mut h = g.clone();
    let mut alive = low_mask(h.order());
    loop {
        let mut changed = false;
        for v in Bits(alive) {
            let nb = h.row(v) & alive;
            match nb.count_ones() {
                0 | 1 => {
                    for u in Bits(nb) {
                        h.remove_edge(u, v);
                    }
                    alive &= !bit(v);
                    changed = true;
                }
                2 => {
                    let a = nb.trailing_zeros() as usize;
                    let b = (nb & (nb - 1)).trailing_zeros() as usize;
                    h.remove_edge(v, a);
                    h.remove_edge(v, b);
                    h.add_edge(a, b);
                    alive &= !bit(v);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return h.induced(alive);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    #[test]
    fn small_examples() {
        assert!(is_planar(&named::complete(4)).unwrap());
        assert!(!is_planar(&named::complete(5)).unwrap());
        assert!(!is_planar(&named::petersen()).unwrap());
        assert!(!is_planar(&named::complete_bipartite(3, 3)).unwrap());
        assert!(is_planar(&named::prism()).unwrap());
        assert!(is_planar(&named::cycle(9)).unwrap());
        assert!(is_planar(&named::complete_bipartite(2, 7)).unwrap());
    }

    #[test]
    fn petersen_contains_a_kuratowski_subdivision() {
        assert!(has_kuratowski_subdivision(&named::petersen()));
        assert!(has_kuratowski_subdivision(&named::subdivided(&named::complete_bipartite(3, 3))));
        assert!(!has_kuratowski_subdivision(&named::subdivided(&named::complete(4))));
        assert!(!has_kuratowski_subdivision(&named::prism()));
    }

    #[test]
    fn nonplanar_pieces_hidden_behind_cut_vertices() {
        let g = named::disjoint_union(&named::complete(5), &named::cycle(4));
        let mut g = g;
        g.add_edge(0, 5);
        assert!(!is_planar(&g).unwrap());
        assert!(has_kuratowski_subdivision(&g));
    }

    #[test]
    fn order_bound() {
        assert!(is_planar(&named::cycle(17)).is_err());
        assert!(is_planar(&named::cycle(16)).unwrap());
    }

    #[test]
    fn dense_planar_graphs_finish() {
        // Icosahedron-like triangulations: the square antiprism plus apexes
        // and a 4x4 grid with diagonals.
        let mut grid = Graph::new(16).unwrap();
        for r in 0..4 {
            for c in 0..4 {
                let v = 4 * r + c;
                if c < 3 {
                    grid.add_edge(v, v + 1);
                }
                if r < 3 {
                    grid.add_edge(v, v + 4);
                }
                if r < 3 && c < 3 {
                    grid.add_edge(v, v + 5);
                }
            }
        }
        assert!(is_planar(&grid).unwrap());
        let mut plus = grid.clone();
        plus.add_edge(0, 15);
        plus.add_edge(3, 12);
        assert!(!is_planar(&plus).unwrap());
    }
}
