use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bit, Graph};
use crate::named;

/// Root of the starting graph `K₂,₃` as built by [`k23`]. Every replayed
/// trace keeps it.
pub const K23_ROOT: usize = 2;

/// `K₂,₃` with degree-3 vertices `0, 1` and 2-vertices `2, 3, 4`.
pub fn k23() -> Graph {
    named::complete_bipartite(2, 3)
}

fn require_two_vertex(h: &Graph, u: usize) -> Result<()> {
    h.check_vertex(u)?;
    if h.deg(u) != 2 {
        return Err(Error::precondition(format!(
            "vertex {u} has degree {}, expected a 2-vertex",
            h.deg(u)
        )));
    }
    Ok(())
}

fn require_pair(h: &Graph, u: usize, v: usize, adjacent: bool) -> Result<()> {
    require_two_vertex(h, u)?;
    require_two_vertex(h, v)?;
    if u == v {
        return Err(Error::precondition("the two 2-vertices must be distinct"));
    }
    if h.has_edge(u, v) != adjacent {
        let want = if adjacent { "adjacent" } else { "non-adjacent" };
        return Err(Error::precondition(format!("{u} and {v} must be {want}")));
    }
    Ok(())
}

/// Join the non-adjacent 2-vertices `u`, `v` by a new path `u w₁ w₂ v`.
/// The new vertices get ids `n` (`w₁`) and `n + 1` (`w₂`).
pub fn apply_p(h: &Graph, u: usize, v: usize) -> Result<Graph> {
    require_pair(h, u, v, false)?;
    let mut g = h.clone();
    let w1 = g.push_vertex(bit(u));
    g.push_vertex(bit(w1) | bit(v));
    Ok(g)
}

/// Add a 2-twin `w` (id `n`) of `u`. `u` must be a 2-vertex with a
/// neighbor that is also a 2-vertex.
pub fn apply_c(h: &Graph, u: usize) -> Result<Graph> {
    require_two_vertex(h, u)?;
    if h.neighbors(u)?.iter().all(|v| h.deg(v) != 2) {
        return Err(Error::precondition(format!(
            "vertex {u} has no neighboring 2-vertex"
        )));
    }
    let mut g = h.clone();
    g.push_vertex(h.row(u));
    Ok(g)
}

/// Add a 4-cycle `a b c d` with edges `u a` and `c v`, where `u`, `v` are
/// adjacent 2-vertices. New ids: `a = n`, `b = n + 1`, `c = n + 2`,
/// `d = n + 3`.
pub fn apply_f(h: &Graph, u: usize, v: usize) -> Result<Graph> {
    require_pair(h, u, v, true)?;
    let mut g = h.clone();
    let a = g.push_vertex(bit(u));
    let b = g.push_vertex(bit(a));
    let c = g.push_vertex(bit(b) | bit(v));
    g.push_vertex(bit(c) | bit(a));
    Ok(g)
}

/// One forward operation, in the vertex ids of the graph it is applied to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "op")]
pub enum Step {
    P { u: usize, v: usize },
    C { u: usize },
    F { u: usize, v: usize },
}

impl Step {
    /// Number of vertices the step adds.
    pub fn growth(&self) -> usize {
        match self {
            Step::P { .. } => 2,
            Step::C { .. } => 1,
            Step::F { .. } => 4,
        }
    }
}

/// A construction of an exceptional graph from [`k23`].
///
/// Replaying appends new vertices in the order documented on
/// [`apply_p`], [`apply_c`] and [`apply_f`], so the final graph has a fixed
/// labeling in which the root is [`K23_ROOT`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BuildTrace {
    pub root: usize,
    pub steps: Vec<Step>,
}

impl BuildTrace {
    pub fn new() -> Self {
        BuildTrace {
            root: K23_ROOT,
            steps: Vec::new(),
        }
    }

    /// Rebuild the graph, checking at each step that the operands are the
    /// two non-root 2-vertices and that the operation matches whether they
    /// are adjacent.
    pub fn replay(&self) -> Result<Graph> {
        Ok(self.replay_state()?.0)
    }

    /// The replayed graph and its two non-root 2-vertices.
    pub(crate) fn replay_state(&self) -> Result<(Graph, usize, usize)> {
        if self.root != K23_ROOT {
            return Err(Error::precondition(format!(
                "trace root must be {K23_ROOT}, got {}",
                self.root
            )));
        }
        let mut g = k23();
        let (mut x, mut y) = (3, 4);
        for (i, step) in self.steps.iter().enumerate() {
            let fail = |msg: String| Error::precondition(format!("step {i} ({step:?}): {msg}"));
            let n = g.order();
            let adjacent = g.has_edge(x, y);
            let is_pair = |u: usize, v: usize| (u, v) == (x, y) || (u, v) == (y, x);
            match *step {
                Step::P { u, v } => {
                    if adjacent || !is_pair(u, v) {
                        return Err(fail(format!("P needs the non-adjacent pair {{{x}, {y}}}")));
                    }
                    g = apply_p(&g, u, v)?;
                    (x, y) = (n, n + 1);
                }
                Step::C { u } => {
                    if !adjacent || (u != x && u != y) {
                        return Err(fail(format!("C needs a vertex of the adjacent pair {{{x}, {y}}}")));
                    }
                    g = apply_c(&g, u)?;
                    (x, y) = (u, n);
                }
                Step::F { u, v } => {
                    if !adjacent || !is_pair(u, v) {
                        return Err(fail(format!("F needs the adjacent pair {{{x}, {y}}}")));
                    }
                    g = apply_f(&g, u, v)?;
                    (x, y) = (n + 1, n + 3);
                }
            }
        }
        Ok((g, x.min(y), x.max(y)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::{find_cycle_mod, Budget};

    #[test]
    fn operation_shapes() {
        let h = k23();
        let p = apply_p(&h, 3, 4).unwrap();
        assert_eq!(p.order(), 7);
        assert_eq!(p.two_vertex_set().to_vec(), vec![2, 5, 6]);
        assert!(p.has_edge(5, 6));

        let c = apply_c(&p, 5).unwrap();
        assert_eq!(c.order(), 8);
        assert_eq!(c.two_twins(), vec![(5, 7)]);
        assert_eq!(c.two_vertex_set().len(), 3);

        let f = apply_f(&p, 5, 6).unwrap();
        assert_eq!(f.order(), 11);
        assert_eq!((f.deg(5), f.deg(6)), (3, 3));
        assert_eq!(f.two_vertex_set().to_vec(), vec![2, 8, 10]);
        assert_eq!(f.two_twins(), vec![(8, 10)]);
        for g in [&p, &c, &f] {
            assert_eq!(find_cycle_mod(g, 3, 0, Budget::DEFAULT).unwrap(), None);
        }
    }

    #[test]
    fn preconditions() {
        let h = k23();
        assert!(apply_p(&h, 0, 3).is_err());
        assert!(apply_p(&h, 3, 3).is_err());
        assert!(apply_f(&h, 3, 4).is_err());
        assert!(apply_c(&h, 3).is_err());
        let p = apply_p(&h, 3, 4).unwrap();
        assert!(apply_p(&p, 5, 6).is_err());
        assert!(apply_c(&p, 99).is_err());
    }

    #[test]
    fn replay_checks_alternation() {
        let ok = BuildTrace {
            root: K23_ROOT,
            steps: vec![Step::P { u: 3, v: 4 }, Step::C { u: 6 }, Step::P { u: 6, v: 7 }],
        };
        let (g, x, y) = ok.replay_state().unwrap();
        assert_eq!(g.order(), 10);
        assert_eq!((x, y), (8, 9));
        let bad = BuildTrace {
            root: K23_ROOT,
            steps: vec![Step::P { u: 3, v: 4 }, Step::P { u: 5, v: 6 }],
        };
        assert!(bad.replay().is_err());
        let wrong_pair = BuildTrace {
            root: K23_ROOT,
            steps: vec![Step::P { u: 2, v: 3 }],
        };
        assert!(wrong_pair.replay().is_err());
    }

    #[test]
    fn trace_json_shape() {
        let t = BuildTrace {
            root: K23_ROOT,
            steps: vec![Step::P { u: 3, v: 4 }, Step::C { u: 5 }],
        };
        let json = serde_json::to_string(&t).unwrap();
        assert_eq!(
            json,
            r#"{"root":2,"steps":[{"op":"P","u":3,"v":4},{"op":"C","u":5}]}"#
        );
        assert_eq!(serde_json::from_str::<BuildTrace>(&json).unwrap(), t);
    }
}
