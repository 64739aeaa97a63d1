//! Simple undirected graphs on at most 64 vertices.
//!
//! Every adjacency row is a single `u64`, so neighborhood intersections,
//! degree counts and induced subgraphs are a handful of word operations.

use std::fmt;

use crate::error::{Error, Result};

/// Largest supported graph order.
pub const MAX_ORDER: usize = 64;

#[inline]
pub(crate) const fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Mask with the lowest `n` bits set.
#[inline]
pub(crate) const fn low_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterator over the set bits of a word, lowest first.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Bits(pub u64);

impl Iterator for Bits {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Bits {}

/// A set of vertex ids, stored as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    /// All ids `0..n`.
    pub const fn full(n: usize) -> Self {
        VertexSet(low_mask(n))
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, v: usize) -> bool {
        v < 64 && self.0 & bit(v) != 0
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < MAX_ORDER, "vertex id {v} exceeds {MAX_ORDER}");
        self.0 |= bit(v);
    }

    pub fn remove(&mut self, v: usize) {
        if v < 64 {
            self.0 &= !bit(v);
        }
    }

    pub const fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub const fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub const fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn iter(self) -> impl ExactSizeIterator<Item = usize> {
        Bits(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite simple undirected graph with vertex ids `0..n`, `n <= 64`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: [u64; MAX_ORDER],
}

impl Graph {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_ORDER {
            return Err(Error::OrderTooLarge {
                order: n,
                max: MAX_ORDER,
            });
        }
        Ok(Graph {
            n,
            rows: [0; MAX_ORDER],
        })
    }

    pub(crate) fn empty(n: usize) -> Self {
        debug_assert!(n <= MAX_ORDER);
        Graph {
            n,
            rows: [0; MAX_ORDER],
        }
    }

    /// Build a graph from an edge list. Loops are rejected; repeated edges
    /// are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n)?;
        for &(u, v) in edges {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            if u == v {
                return Err(Error::precondition(format!("loop at vertex {u}")));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Build a graph from adjacency rows (bit `j` of `rows[i]` set iff `ij`
    /// is an edge). The rows must describe a symmetric, loop-free relation.
    pub fn from_rows(rows: &[u64]) -> Result<Self> {
        let n = rows.len();
        let g = {
            let mut g = Graph::new(n)?;
            g.rows[..n].copy_from_slice(rows);
            g
        };
        let mask = low_mask(n);
        for v in 0..n {
            if g.rows[v] & !mask != 0 {
                return Err(Error::precondition(format!(
                    "row {v} references a vertex outside 0..{n}"
                )));
            }
            if g.rows[v] & bit(v) != 0 {
                return Err(Error::precondition(format!("loop at vertex {v}")));
            }
            for u in Bits(g.rows[v]) {
                if g.rows[u] & bit(v) == 0 {
                    return Err(Error::precondition(format!(
                        "adjacency is not symmetric at ({v}, {u})"
                    )));
                }
            }
        }
        Ok(g)
    }

    #[inline]
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.rows[..self.n]
            .iter()
            .map(|r| r.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    #[inline]
    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                order: self.n,
            })
        }
    }

    /// Adds the edge `uv`.
    ///
    /// # Panics
    ///
    /// Panics if `u == v` or either id is out of range.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "edge ({u}, {v}) out of range");
        assert_ne!(u, v, "loops are not allowed");
        self.rows[u] |= bit(v);
        self.rows[v] |= bit(u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        if u < self.n && v < self.n {
            self.rows[u] &= !bit(v);
            self.rows[v] &= !bit(u);
        }
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < 64 && self.rows[u] & bit(v) != 0
    }

    /// Neighborhood of `v` as a raw bitmask. Out-of-range ids give `0`.
    #[inline]
    pub(crate) fn row(&self, v: usize) -> u64 {
        if v < MAX_ORDER {
            self.rows[v]
        } else {
            0
        }
    }

    /// Unchecked degree for hot loops.
    #[inline]
    pub(crate) fn deg(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    /// `N(v)`.
    pub fn neighbors(&self, v: usize) -> Result<VertexSet> {
        self.check_vertex(v)?;
        Ok(VertexSet(self.rows[v]))
    }

    /// `d(v) = |N(v)|`.
    pub fn degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.deg(v))
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|v| self.deg(v)).collect()
    }

    /// Minimum degree; `None` for the null graph.
    pub fn min_degree(&self) -> Option<usize> {
        (0..self.n).map(|v| self.deg(v)).min()
    }

    pub fn max_degree(&self) -> Option<usize> {
        (0..self.n).map(|v| self.deg(v)).max()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| Bits(self.rows[u] & !low_mask(u + 1)).map(move |v| (u, v)))
    }

    /// Vertices of degree exactly `d`.
    pub fn vertices_of_degree(&self, d: usize) -> VertexSet {
        (0..self.n).filter(|&v| self.deg(v) == d).collect()
    }

    /// `V₂(G)`: the vertices of degree exactly two.
    pub fn two_vertex_set(&self) -> VertexSet {
        self.vertices_of_degree(2)
    }

    /// Pairs of distinct 2-vertices with identical neighborhoods.
    pub fn two_twins(&self) -> Vec<(usize, usize)> {
        let twos = self.two_vertex_set().to_vec();
        let mut out = Vec::new();
        for (i, &u) in twos.iter().enumerate() {
            for &v in &twos[i + 1..] {
                if self.rows[u] == self.rows[v] {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Edges whose endpoints are both 2-vertices.
    pub fn adjacent_two_vertices(&self) -> Vec<(usize, usize)> {
        let twos = self.two_vertex_set().bits();
        self.edges()
            .filter(|&(u, v)| twos & bit(u) != 0 && twos & bit(v) != 0)
            .collect()
    }

    /// Induced subgraph on `keep`, renumbered densely in increasing id order.
    pub(crate) fn induced(&self, keep: u64) -> Graph {
        let keep = keep & low_mask(self.n);
        let mut g = Graph::empty(keep.count_ones() as usize);
        let mut new_id = [0usize; MAX_ORDER];
        for (i, v) in Bits(keep).enumerate() {
            new_id[v] = i;
        }
        for (i, v) in Bits(keep).enumerate() {
            let mut r = 0u64;
            for u in Bits(self.rows[v] & keep) {
                r |= bit(new_id[u]);
            }
            g.rows[i] = r;
        }
        g
    }

    /// `G − S`, renumbered densely. The second component maps each old id
    /// to its new id (`None` for deleted vertices).
    pub fn delete_vertices(&self, s: VertexSet) -> Result<(Graph, Vec<Option<usize>>)> {
        if !s.is_subset(self.vertices()) {
            return Err(Error::precondition(format!(
                "vertex set {s:?} is not contained in 0..{}",
                self.n
            )));
        }
        let keep = self.vertices().difference(s).bits();
        let mut map = vec![None; self.n];
        for (i, v) in Bits(keep).enumerate() {
            map[v] = Some(i);
        }
        Ok((self.induced(keep), map))
    }

    /// The graph `σ(G)` in which old vertex `v` becomes `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::precondition(format!(
                "permutation has length {}, graph has order {}",
                perm.len(),
                self.n
            )));
        }
        let mut seen = 0u64;
        for &p in perm {
            self.check_vertex(p)?;
            if seen & bit(p) != 0 {
                return Err(Error::precondition("relabeling is not a permutation"));
            }
            seen |= bit(p);
        }
        Ok(self.relabel_unchecked(perm))
    }

    pub(crate) fn relabel_unchecked(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::empty(self.n);
        for v in 0..self.n {
            let mut r = 0u64;
            for u in Bits(self.rows[v]) {
                r |= bit(perm[u]);
            }
            g.rows[perm[v]] = r;
        }
        g
    }

    /// Appends a new vertex adjacent to `nbrs` and returns its id.
    pub(crate) fn push_vertex(&mut self, nbrs: u64) -> usize {
        let v = self.n;
        assert!(v < MAX_ORDER, "graph order would exceed {MAX_ORDER}");
        self.n += 1;
        self.rows[v] = nbrs;
        for u in Bits(nbrs) {
            self.rows[u] |= bit(v);
        }
        v
    }

    /// Vertex sets of the connected components of the subgraph induced by
    /// `within`, ordered by smallest member.
    pub(crate) fn components_within(&self, within: u64) -> Vec<u64> {
        let mut rest = within & low_mask(self.n);
        let mut out = Vec::new();
        while rest != 0 {
            let c = self.reach(rest.trailing_zeros() as usize, rest);
            out.push(c);
            rest &= !c;
        }
        out
    }

    /// Vertices reachable from `start` inside `within` (`start` must be in it).
    #[inline]
    pub(crate) fn reach(&self, start: usize, within: u64) -> u64 {
        let mut seen = bit(start);
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0u64;
            for v in Bits(frontier) {
                next |= self.rows[v];
            }
            next &= within & !seen;
            seen |= next;
            frontier = next;
        }
        seen
    }

    pub(crate) fn connected_within(&self, within: u64) -> bool {
        within == 0 || self.reach(within.trailing_zeros() as usize, within) == within
    }

    /// Connected components, each as a vertex set.
    pub fn components(&self) -> Vec<VertexSet> {
        self.components_within(low_mask(self.n))
            .into_iter()
            .map(VertexSet)
            .collect()
    }

    /// The null graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.connected_within(low_mask(self.n))
    }

    /// BFS distances from `s`; `None` for unreachable vertices.
    pub fn distances_from(&self, s: usize) -> Result<Vec<Option<usize>>> {
        self.check_vertex(s)?;
        let mut dist = vec![None; self.n];
        dist[s] = Some(0);
        let mut seen = bit(s);
        let mut frontier = seen;
        let mut d = 0;
        while frontier != 0 {
            d += 1;
            let mut next = 0u64;
            for v in Bits(frontier) {
                next |= self.rows[v];
            }
            next &= !seen;
            for v in Bits(next) {
                dist[v] = Some(d);
            }
            seen |= next;
            frontier = next;
        }
        Ok(dist)
    }

    /// Replace every maximal path whose interior consists of 2-vertices by a
    /// single edge between its ends.
    ///
    /// Components that are cycles of 2-vertices have no ends to reattach and
    /// are rejected. If the result would contain a loop or a parallel edge,
    /// the offending end pair is reported instead.
    pub fn suppress_two_vertices(&self) -> Result<Suppressed> {
        let twos = self.two_vertex_set().bits();
        let kept = low_mask(self.n) & !twos;
        let mut reached_twos = 0u64;
        let mut edges = Vec::new();
        for u in Bits(kept) {
            let mut ends = 0u64;
            for first in Bits(self.rows[u]) {
                let (end, interior) = self.walk_through_twos(u, first, twos);
                reached_twos |= interior;
                if end == u {
                    return Ok(Suppressed::NonSimple { u, v: u });
                }
                if ends & bit(end) != 0 {
                    return Ok(Suppressed::NonSimple {
                        u: u.min(end),
                        v: u.max(end),
                    });
                }
                ends |= bit(end);
                if u < end {
                    edges.push((u, end));
                }
            }
        }
        if reached_twos != twos {
            let v = (twos & !reached_twos).trailing_zeros();
            return Err(Error::precondition(format!(
                "vertex {v} lies on a component that is a cycle of 2-vertices"
            )));
        }
        let mut map = vec![None; self.n];
        for (i, v) in Bits(kept).enumerate() {
            map[v] = Some(i);
        }
        let mut h = Graph::empty(kept.count_ones() as usize);
        for (u, v) in edges {
            h.add_edge(map[u].unwrap(), map[v].unwrap());
        }
        Ok(Suppressed::Simple { graph: h, map })
    }

    /// Follow the path `from, next, ...` while the current vertex is a
    /// 2-vertex. Returns the first non-2-vertex reached and the interior.
    fn walk_through_twos(&self, from: usize, next: usize, twos: u64) -> (usize, u64) {
        let mut prev = from;
        let mut cur = next;
        let mut interior = 0u64;
        while twos & bit(cur) != 0 {
            interior |= bit(cur);
            let step = self.rows[cur] & !bit(prev);
            prev = cur;
            cur = step.trailing_zeros() as usize;
        }
        (cur, interior)
    }
}

/// Outcome of [`Graph::suppress_two_vertices`].
#[derive(Clone, Debug, PartialEq, Eq)]
#[allow(clippy::large_enum_variant)]
pub enum Suppressed {
    /// The suppressed graph together with the old → new id map (2-vertices
    /// map to `None`).
    Simple {
        graph: Graph,
        map: Vec<Option<usize>>,
    },
    /// Suppression would join `u` and `v` by a second edge (or `u == v`:
    /// a loop).
    NonSimple { u: usize, v: usize },
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=[", self.n)?;
        for (i, (u, v)) in self.edges().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{u}-{v}")?;
        }
        f.write_str("])")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    #[test]
    fn degrees_of_small_graphs() {
        let k23 = named::complete_bipartite(2, 3);
        assert_eq!(k23.degree(0).unwrap(), 3);
        assert_eq!(k23.degree(4).unwrap(), 2);
        assert!(named::cycle(5).degrees().iter().all(|&d| d == 2));
        assert!(named::complete(4).degrees().iter().all(|&d| d == 3));
        assert_eq!(
            k23.degree(5),
            Err(Error::VertexOutOfRange {
                vertex: 5,
                order: 5
            })
        );
    }

    #[test]
    fn two_vertex_sets() {
        assert_eq!(
            named::complete_bipartite(2, 3).two_vertex_set().to_vec(),
            vec![2, 3, 4]
        );
        assert!(named::petersen().two_vertex_set().is_empty());
        assert_eq!(named::cycle(4).two_vertex_set().len(), 4);
    }

    #[test]
    fn twins_and_adjacent_pairs() {
        let k23 = named::complete_bipartite(2, 3);
        assert_eq!(k23.two_twins(), vec![(2, 3), (2, 4), (3, 4)]);
        assert_eq!(named::cycle(4).two_twins(), vec![(0, 2), (1, 3)]);
        assert!(named::cycle(5).two_twins().is_empty());

        assert_eq!(named::cycle(5).adjacent_two_vertices().len(), 5);
        assert!(k23.adjacent_two_vertices().is_empty());
        assert!(named::subdivided(&named::complete(4))
            .adjacent_two_vertices()
            .is_empty());
    }

    #[test]
    fn delete_vertices_examples() {
        let (k3, map) = named::complete(4)
            .delete_vertices(VertexSet::from_iter([1]))
            .unwrap();
        assert_eq!(k3, named::complete(3));
        assert_eq!(map, vec![Some(0), None, Some(1), Some(2)]);

        let (c4, _) = named::complete_bipartite(2, 3)
            .delete_vertices(VertexSet::from_iter([4]))
            .unwrap();
        assert_eq!(c4.edge_count(), 4);
        assert!(c4.degrees().iter().all(|&d| d == 2));
        assert!(c4.is_connected());

        let p = named::petersen();
        let (same, _) = p.delete_vertices(VertexSet::EMPTY).unwrap();
        assert_eq!(same, p);

        assert!(p.delete_vertices(VertexSet::from_iter([10])).is_err());
    }

    #[test]
    fn suppression_examples() {
        let k4 = named::complete(4);
        match named::subdivided(&k4).suppress_two_vertices().unwrap() {
            Suppressed::Simple { graph, .. } => assert_eq!(graph, k4),
            other => panic!("unexpected {other:?}"),
        }
        match k4.suppress_two_vertices().unwrap() {
            Suppressed::Simple { graph, .. } => assert_eq!(graph, k4),
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(
            named::complete_bipartite(2, 3)
                .suppress_two_vertices()
                .unwrap(),
            Suppressed::NonSimple { u: 0, v: 1 }
        );
        assert!(named::cycle(5).suppress_two_vertices().is_err());
    }

    #[test]
    fn suppression_reports_loops() {
        // A triangle hanging off vertex 0 of a K4: the triangle's two
        // 2-vertices suppress into a loop at 0.
        let mut g = named::complete(4);
        let a = g.push_vertex(bit(0));
        g.push_vertex(bit(0) | bit(a));
        assert_eq!(
            g.suppress_two_vertices().unwrap(),
            Suppressed::NonSimple { u: 0, v: 0 }
        );
    }

    #[test]
    fn from_rows_validates() {
        assert!(Graph::from_rows(&[0b10, 0b01]).is_ok());
        assert!(Graph::from_rows(&[0b10, 0b00]).is_err());
        assert!(Graph::from_rows(&[0b01]).is_err());
        assert!(Graph::new(65).is_err());
    }
}
