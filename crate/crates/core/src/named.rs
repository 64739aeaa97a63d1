//! Small named graphs used throughout the tests, the book and the CLI.

use crate::graph::{bit, Graph};

pub fn complete(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v);
        }
    }
    g
}

/// `C_n` on `0, 1, ..., n-1` in cyclic order (`n >= 3`).
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "a cycle needs at least three vertices");
    let mut g = Graph::empty(n);
    for v in 0..n {
        g.add_edge(v, (v + 1) % n);
    }
    g
}

/// The path on `n` vertices.
pub fn path(n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for v in 1..n {
        g.add_edge(v - 1, v);
    }
    g
}

/// `K_{a,b}` with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut g = Graph::empty(a + b);
    for u in 0..a {
        for v in a..a + b {
            g.add_edge(u, v);
        }
    }
    g
}

/// Outer 5-cycle `0..5`, spokes `{i, i+5}`, inner pentagram on `5..10`.
pub fn petersen() -> Graph {
    let mut g = Graph::empty(10);
    for i in 0..5 {
        g.add_edge(i, (i + 1) % 5);
        g.add_edge(i, i + 5);
        g.add_edge(i + 5, (i + 2) % 5 + 5);
    }
    g
}

/// The triangular prism: triangles `012`, `345` and the matching `{i, i+3}`.
pub fn prism() -> Graph {
    Graph::from_edges(
        6,
        &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (0, 3), (1, 4), (2, 5)],
    )
    .unwrap()
}

/// Two triangles sharing vertex `0`.
pub fn bowtie() -> Graph {
    Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 0)]).unwrap()
}

/// Triangles `012` and `345` joined by the bridge `{2, 3}`.
pub fn triangles_with_bridge() -> Graph {
    Graph::from_edges(
        6,
        &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (2, 3)],
    )
    .unwrap()
}

/// `K_4` minus one edge.
pub fn diamond() -> Graph {
    Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)]).unwrap()
}

/// Subdivide every edge of `g` once. Subdivision vertices are appended in
/// the order of [`Graph::edges`].
pub fn subdivided(g: &Graph) -> Graph {
    let edges: Vec<_> = g.edges().collect();
    let mut h = Graph::empty(g.order());
    for (u, v) in edges {
        h.push_vertex(bit(u) | bit(v));
    }
    h
}

/// Disjoint union; vertices of `h` are shifted by `g.order()`.
pub fn disjoint_union(g: &Graph, h: &Graph) -> Graph {
    let off = g.order();
    let mut out = Graph::empty(off + h.order());
    for (u, v) in g.edges() {
        out.add_edge(u, v);
    }
    for (u, v) in h.edges() {
        out.add_edge(u + off, v + off);
    }
    out
}
