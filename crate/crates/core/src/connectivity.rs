//! Blocks, cut vertices, vertex-disjoint paths and essential connectivity.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{bit, low_mask, Bits, Graph, VertexSet};

/// Blocks (maximal 2-connected subgraphs or bridges) of a connected graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// Vertex sets of the blocks, sorted by bitmask.
    pub blocks: Vec<VertexSet>,
    pub cut_vertices: VertexSet,
    /// `end_block[i]` iff block `i` contains at most one cut vertex.
    pub end_block: Vec<bool>,
}

impl BlockDecomposition {
    /// Subgraph of `g` induced by block `i`. Blocks are induced subgraphs,
    /// so this is exactly the block. The map sends new ids to ids of `g`.
    pub fn block_graph(&self, g: &Graph, i: usize) -> (Graph, Vec<usize>) {
        let keep = self.blocks[i];
        (g.induced(keep.bits()), keep.to_vec())
    }
}

/// Tarjan's biconnected components over every connected component of `g`.
/// Returns (blocks as vertex masks, cut-vertex mask). Isolated vertices
/// form singleton blocks.
pub(crate) fn blocks_and_cuts(g: &Graph) -> (Vec<u64>, u64) {
    struct State<'a> {
        g: &'a Graph,
        disc: Vec<u32>,
        low: Vec<u32>,
        time: u32,
        stack: Vec<(usize, usize)>,
        blocks: Vec<u64>,
        cuts: u64,
    }
    fn dfs(s: &mut State<'_>, u: usize, parent: Option<usize>) {
        s.time += 1;
        s.disc[u] = s.time;
        s.low[u] = s.time;
        let mut children = 0;
        for v in Bits(s.g.row(u)) {
            if s.disc[v] == 0 {
                children += 1;
                s.stack.push((u, v));
                dfs(s, v, Some(u));
                s.low[u] = s.low[u].min(s.low[v]);
                if s.low[v] >= s.disc[u] {
                    if parent.is_some() || children > 1 {
                        s.cuts |= bit(u);
                    }
                    let mut block = 0u64;
                    while let Some((a, b)) = s.stack.pop() {
                        block |= bit(a) | bit(b);
                        if (a, b) == (u, v) {
                            break;
                        }
                    }
                    s.blocks.push(block);
                }
            } else if Some(v) != parent && s.disc[v] < s.disc[u] {
                s.stack.push((u, v));
                s.low[u] = s.low[u].min(s.disc[v]);
            }
        }
        // A root with children > 1 was marked inside the loop; a root with a
        // single child is never a cut vertex.
        if parent.is_none() && children <= 1 {
            s.cuts &= !bit(u);
        }
    }
    let n = g.order();
    let mut s = State {
        g,
        disc: vec![0; n],
        low: vec![0; n],
        time: 0,
        stack: Vec::new(),
        blocks: Vec::new(),
        cuts: 0,
    };
    for v in 0..n {
        if s.disc[v] == 0 {
            if g.row(v) == 0 {
                s.disc[v] = 1;
                s.blocks.push(bit(v));
            } else {
                dfs(&mut s, v, None);
            }
        }
    }
    s.blocks.sort_unstable();
    (s.blocks, s.cuts)
}

pub fn block_decomposition(g: &Graph) -> Result<BlockDecomposition> {
    if !g.is_connected() {
        return Err(Error::precondition("block decomposition needs a connected graph"));
    }
    let (blocks, cuts) = blocks_and_cuts(g);
    let end_block = blocks.iter().map(|b| (b & cuts).count_ones() <= 1).collect();
    Ok(BlockDecomposition {
        blocks: blocks.into_iter().map(VertexSet::from_bits).collect(),
        cut_vertices: VertexSet::from_bits(cuts),
        end_block,
    })
}

/// Vertices whose removal disconnects the rest of their component.
pub fn cut_vertices(g: &Graph) -> VertexSet {
    VertexSet::from_bits(blocks_and_cuts(g).1)
}

/// Connected, at least three vertices, no cut vertex.
pub fn is_2_connected(g: &Graph) -> bool {
    let n = g.order();
    let all = low_mask(n);
    n >= 3 && g.is_connected() && (0..n).all(|v| g.connected_within(all & !bit(v)))
}

/// Vertices `v` such that `g - v` stays connected (for connected `g`).
pub(crate) fn non_cut_vertices(g: &Graph) -> u64 {
    let all = low_mask(g.order());
    let mut out = 0;
    for v in 0..g.order() {
        if g.connected_within(all & !bit(v)) {
            out |= bit(v);
        }
    }
    out
}

/// A maximum family of pairwise vertex-disjoint `(X, Y)`-paths.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DisjointPaths {
    pub count: usize,
    pub paths: Vec<Vec<usize>>,
}

/// Maximum number of pairwise vertex-disjoint `(X, Y)`-paths, with the
/// paths themselves. By Menger's theorem the count is the minimum size of
/// a vertex set separating `X` from `Y`. A vertex of `X ∩ Y` is a path of
/// length zero.
///
/// Computed as a unit-capacity max flow on the vertex-split digraph, with
/// augmenting paths found by breadth-first search in id order.
pub fn max_disjoint_paths(g: &Graph, xs: VertexSet, ys: VertexSet) -> Result<DisjointPaths> {
    if xs.is_empty() || ys.is_empty() {
        return Err(Error::precondition("X and Y must be nonempty"));
    }
    if !xs.union(ys).is_subset(g.vertices()) {
        return Err(Error::precondition("X and Y must be vertex sets of the graph"));
    }
    let walks = split_flow(g, xs.bits(), ys.bits(), 0);
    let paths = walks
        .into_iter()
        .map(|walk| {
            // Trim to an (X, Y)-path: from the last X vertex to the first Y
            // vertex after it.
            let start = walk.iter().rposition(|&v| xs.contains(v)).unwrap();
            let end = start + walk[start..].iter().position(|&v| ys.contains(v)).unwrap();
            walk[start..=end].to_vec()
        })
        .collect::<Vec<_>>();
    Ok(DisjointPaths {
        count: paths.len(),
        paths,
    })
}

/// Maximum number of internally disjoint `(a, b)`-paths (the edge `ab`, if
/// present, is one of them).
pub fn max_internally_disjoint_paths(g: &Graph, a: usize, b: usize) -> Result<DisjointPaths> {
    g.check_vertex(a)?;
    g.check_vertex(b)?;
    if a == b {
        return Err(Error::precondition("endpoints must be distinct"));
    }
    let paths = split_flow(g, bit(a), bit(b), bit(a) | bit(b))
        .into_iter()
        .map(|walk| {
            let start = walk.iter().rposition(|&v| v == a).unwrap();
            let end = start + walk[start..].iter().position(|&v| v == b).unwrap();
            walk[start..=end].to_vec()
        })
        .collect::<Vec<_>>();
    Ok(DisjointPaths {
        count: paths.len(),
        paths,
    })
}

/// Max flow from `sources` to `sinks` where every vertex outside
/// `uncapped` carries at most one unit. Returns one walk per unit of flow,
/// from a source to a sink.
fn split_flow(g: &Graph, sources: u64, sinks: u64, uncapped: u64) -> Vec<Vec<usize>> {
    let n = g.order();
    let nodes = 2 * n + 2;
    let (src, sink) = (2 * n, 2 * n + 1);
    let inn = |v: usize| 2 * v;
    let out = |v: usize| 2 * v + 1;
    let wide = n as i16;
    let mut cap = vec![vec![0i16; nodes]; nodes];
    for v in 0..n {
        cap[inn(v)][out(v)] = if uncapped & bit(v) != 0 { wide } else { 1 };
        for u in Bits(g.row(v)) {
            cap[out(v)][inn(u)] = 1;
        }
    }
    for x in Bits(sources) {
        cap[src][inn(x)] = wide;
    }
    for y in Bits(sinks) {
        cap[out(y)][sink] = wide;
    }
    let original = cap.clone();

    loop {
        let mut prev = vec![usize::MAX; nodes];
        prev[src] = src;
        let mut queue = std::collections::VecDeque::from([src]);
        while let Some(a) = queue.pop_front() {
            if a == sink {
                break;
            }
            for b in 0..nodes {
                if prev[b] == usize::MAX && cap[a][b] > 0 {
                    prev[b] = a;
                    queue.push_back(b);
                }
            }
        }
        if prev[sink] == usize::MAX {
            break;
        }
        let mut b = sink;
        while b != src {
            let a = prev[b];
            cap[a][b] -= 1;
            cap[b][a] += 1;
            b = a;
        }
    }

    // Net flow on an arc is its original capacity minus what is left.
    let mut flow: Vec<Vec<i16>> = (0..nodes)
        .map(|a| (0..nodes).map(|b| (original[a][b] - cap[a][b]).max(0)).collect())
        .collect();
    let mut walks = Vec::new();
    for x in Bits(sources) {
        while flow[src][inn(x)] > 0 {
            flow[src][inn(x)] -= 1;
            let mut walk = vec![x];
            let mut cur = x;
            loop {
                if flow[out(cur)][sink] > 0 {
                    flow[out(cur)][sink] -= 1;
                    break;
                }
                let next = (0..n)
                    .find(|&u| flow[out(cur)][inn(u)] > 0)
                    .expect("flow is conserved");
                flow[out(cur)][inn(next)] -= 1;
                walk.push(next);
                cur = next;
            }
            walks.push(walk);
        }
    }
    walks
}

/// No vertex set of size at most two leaves two or more components that
/// each contain an edge.
pub fn is_essentially_3_connected(g: &Graph) -> Result<bool> {
    if !g.is_connected() {
        return Err(Error::precondition("essential connectivity needs a connected graph"));
    }
    Ok(essential_cut(g, 2).is_none())
}

/// Some vertex set of size at most `max_size` whose removal leaves at least
/// two components with an edge, smallest sets first.
pub fn essential_cut(g: &Graph, max_size: usize) -> Option<VertexSet> {
    let n = g.order();
    let all = low_mask(n);
    let is_essential = |s: u64| {
        g.components_within(all & !s)
            .into_iter()
            .filter(|&c| c.count_ones() >= 2)
            .count()
            >= 2
    };
    if is_essential(0) {
        return Some(VertexSet::EMPTY);
    }
    if max_size >= 1 {
        for a in 0..n {
            if is_essential(bit(a)) {
                return Some(VertexSet::from_bits(bit(a)));
            }
        }
    }
    if max_size >= 2 {
        for a in 0..n {
            for b in a + 1..n {
                if is_essential(bit(a) | bit(b)) {
                    return Some(VertexSet::from_bits(bit(a) | bit(b)));
                }
            }
        }
    }
    None
}

/// Vertex connectivity by definition (minimum vertex cut, `n - 1` for
/// complete graphs). Used to cross-check essential connectivity on small
/// graphs.
pub fn vertex_connectivity(g: &Graph) -> usize {
    let n = g.order();
    if n <= 1 {
        return 0;
    }
    let all = low_mask(n);
    let mut best = n - 1;
    for s in 0..(1u64 << n) {
        let size = s.count_ones() as usize;
        if size >= best {
            continue;
        }
        if !g.connected_within(all & !s) {
            best = size;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    #[test]
    fn two_connectivity_examples() {
        assert!(is_2_connected(&named::cycle(4)));
        assert!(!is_2_connected(&named::bowtie()));
        assert!(is_2_connected(&named::complete_bipartite(2, 3)));
        assert!(!is_2_connected(&named::path(2)));
        assert!(!is_2_connected(&named::disjoint_union(&named::cycle(3), &named::cycle(3))));
    }

    #[test]
    fn block_examples() {
        let bt = block_decomposition(&named::bowtie()).unwrap();
        assert_eq!(bt.blocks.len(), 2);
        assert_eq!(bt.cut_vertices.to_vec(), vec![0]);
        assert_eq!(bt.end_block, vec![true, true]);

        let c6 = block_decomposition(&named::cycle(6)).unwrap();
        assert_eq!(c6.blocks, vec![VertexSet::full(6)]);
        assert!(c6.cut_vertices.is_empty());

        let tb = block_decomposition(&named::triangles_with_bridge()).unwrap();
        assert_eq!(tb.blocks.len(), 3);
        assert!(tb.blocks.contains(&VertexSet::from_iter([2, 3])));
        assert_eq!(tb.cut_vertices.to_vec(), vec![2, 3]);
        let bridge = tb.blocks.iter().position(|b| b.len() == 2).unwrap();
        assert!(!tb.end_block[bridge]);
        assert_eq!(tb.end_block.iter().filter(|&&e| e).count(), 2);

        assert!(block_decomposition(&named::disjoint_union(&named::cycle(3), &named::cycle(3))).is_err());
    }

    #[test]
    fn every_edge_in_exactly_one_block() {
        for g in [named::petersen(), named::triangles_with_bridge(), named::bowtie(), named::path(5)] {
            let d = block_decomposition(&g).unwrap();
            for (u, v) in g.edges() {
                let hits = d.blocks.iter().filter(|b| b.contains(u) && b.contains(v)).count();
                assert_eq!(hits, 1, "edge {u}-{v} in {g:?}");
            }
        }
    }

    #[test]
    fn disjoint_path_examples() {
        let k23 = named::complete_bipartite(2, 3);
        let r = max_disjoint_paths(&k23, VertexSet::from_iter([2, 3, 4]), VertexSet::from_iter([0, 1])).unwrap();
        assert_eq!(r.count, 2);

        // Vertex-disjoint paths from {a} to {b}: {a} alone separates.
        let k4 = named::complete(4);
        let r = max_disjoint_paths(&k4, VertexSet::from_iter([0]), VertexSet::from_iter([1])).unwrap();
        assert_eq!(r.count, 1);
        let r = max_internally_disjoint_paths(&k4, 0, 1).unwrap();
        assert_eq!(r.count, 3);
        assert_eq!(r.paths, vec![vec![0, 1], vec![0, 2, 1], vec![0, 3, 1]]);

        let bt = named::bowtie();
        let r = max_disjoint_paths(&bt, VertexSet::from_iter([1, 2]), VertexSet::from_iter([3, 4])).unwrap();
        assert_eq!(r.count, 1);
        assert!(r.paths[0].contains(&0));
    }

    #[test]
    fn returned_paths_are_valid() {
        let p = named::petersen();
        let xs = VertexSet::from_iter([0, 1, 2]);
        let ys = VertexSet::from_iter([7, 8, 9]);
        let r = max_disjoint_paths(&p, xs, ys).unwrap();
        assert_eq!(r.count, 3);
        let mut used = 0u64;
        for path in &r.paths {
            assert!(xs.contains(path[0]) && ys.contains(*path.last().unwrap()));
            for w in path.windows(2) {
                assert!(p.has_edge(w[0], w[1]));
            }
            for &v in &path[1..path.len() - 1] {
                assert!(!xs.contains(v) && !ys.contains(v));
            }
            for &v in path {
                assert_eq!(used & bit(v), 0);
                used |= bit(v);
            }
        }
    }

    #[test]
    fn shared_vertices_are_trivial_paths() {
        let g = named::path(3);
        let r = max_disjoint_paths(&g, VertexSet::from_iter([0, 1]), VertexSet::from_iter([1, 2])).unwrap();
        assert_eq!(r.count, 1);
        let g = named::cycle(4);
        let r = max_disjoint_paths(&g, VertexSet::from_iter([0, 2]), VertexSet::from_iter([0, 2])).unwrap();
        assert_eq!(r.count, 2);
        assert!(r.paths.iter().all(|p| p.len() == 1));
    }

    #[test]
    fn essential_connectivity_examples() {
        assert!(!is_essentially_3_connected(&named::cycle(6)).unwrap());
        assert!(is_essentially_3_connected(&named::subdivided(&named::complete(4))).unwrap());
        assert!(is_essentially_3_connected(&named::complete_bipartite(2, 3)).unwrap());
        assert!(is_essentially_3_connected(&named::petersen()).unwrap());
        assert!(!is_essentially_3_connected(&named::triangles_with_bridge()).unwrap());
    }

    #[test]
    fn connectivity_by_definition() {
        assert_eq!(vertex_connectivity(&named::complete(5)), 4);
        assert_eq!(vertex_connectivity(&named::petersen()), 3);
        assert_eq!(vertex_connectivity(&named::cycle(6)), 2);
        assert_eq!(vertex_connectivity(&named::bowtie()), 1);
    }
}
