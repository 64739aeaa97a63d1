use std::collections::HashSet;

use rayon::prelude::*;
use serde::Serialize;

use super::ops::{apply_c, apply_f, apply_p, k23, BuildTrace, Step, K23_ROOT};
use crate::canon::{canonical_form, find_isomorphism, CanonicalForm};
use crate::connectivity::is_2_connected;
use crate::cycles::{path_residues, Budget, ResidueSet};
use crate::error::{Error, Result};
use crate::graph::{bit, low_mask, Bits, Graph};

/// A generated exceptional graph. `graph` is exactly `trace.replay()`.
#[derive(Clone, Debug, Serialize)]
pub struct Exceptional {
    pub form: CanonicalForm,
    pub graph: Graph,
    pub trace: BuildTrace,
}

/// One representative of every exceptional graph with at most `max_n`
/// vertices, sorted by order and then canonical form.
pub fn generate_exceptional(max_n: usize) -> Result<Vec<Exceptional>> {
    if !(5..=64).contains(&max_n) {
        return Err(Error::precondition(format!(
            "max_n must lie in 5..=64, got {max_n}"
        )));
    }
    struct State {
        graph: Graph,
        x: usize,
        y: usize,
        trace: BuildTrace,
    }
    let mut buckets: Vec<Vec<State>> = (0..=max_n).map(|_| Vec::new()).collect();
    buckets[5].push(State {
        graph: k23(),
        x: 3,
        y: 4,
        trace: BuildTrace::new(),
    });
    let mut seen: HashSet<CanonicalForm> = HashSet::new();
    seen.insert(canonical_form(&k23()));
    let mut out = Vec::new();

    for order in 5..=max_n {
        let level = std::mem::take(&mut buckets[order]);
        let children: Vec<Vec<(CanonicalForm, State)>> = level
            .par_iter()
            .map(|s| {
                let n = s.graph.order();
                let mut next = Vec::new();
                let mut push = |graph: Graph, x: usize, y: usize, step: Step| {
                    if graph.order() <= max_n {
                        let mut trace = s.trace.clone();
                        trace.steps.push(step);
                        next.push((canonical_form(&graph), State { graph, x, y, trace }));
                    }
                };
                if s.graph.has_edge(s.x, s.y) {
                    for u in [s.x, s.y] {
                        let g = apply_c(&s.graph, u).expect("state invariant");
                        push(g, u, n, Step::C { u });
                    }
                    for (u, v) in [(s.x, s.y), (s.y, s.x)] {
                        let g = apply_f(&s.graph, u, v).expect("state invariant");
                        push(g, n + 1, n + 3, Step::F { u, v });
                    }
                } else {
                    let g = apply_p(&s.graph, s.x, s.y).expect("state invariant");
                    push(g, n, n + 1, Step::P { u: s.x, v: s.y });
                }
                next
            })
            .collect();
        let mut level_out: Vec<Exceptional> = level
            .into_iter()
            .map(|s| Exceptional {
                form: canonical_form(&s.graph),
                graph: s.graph,
                trace: s.trace,
            })
            .collect();
        level_out.sort_by(|a, b| a.form.cmp(&b.form));
        out.extend(level_out);
        for (form, state) in children.into_iter().flatten() {
            if seen.insert(form) {
                let o = state.graph.order();
                buckets[o].push(state);
            }
        }
    }
    Ok(out)
}

/// Why a graph is not exceptional. The first failed requirement is
/// reported, in the order the variants are listed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Refutation {
    MinDegree { vertex: usize, degree: usize },
    TwoVertexCount { count: usize },
    NotTwoConnected,
    /// No 2-vertex is at distance at least 3 from the other two.
    NoRoot,
    /// Peeling got stuck above five vertices on every branch.
    NoReverseOperation,
    /// Peeling reached five vertices but not `K₂,₃`.
    BaseMismatch,
}

/// An accepted graph: `trace.replay()` relabeled by `labeling` is the input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Recognized {
    /// Root in the input's vertex ids.
    pub root: usize,
    pub trace: BuildTrace,
    /// `labeling[i]` is the input vertex playing replay vertex `i`.
    pub labeling: Vec<usize>,
}

impl Recognized {
    /// Replay the trace and compare with `g` under the labeling.
    pub fn verify(&self, g: &Graph) -> Result<()> {
        let replayed = self.trace.replay()?;
        let relabeled = replayed.relabel(&self.labeling)?;
        if &relabeled != g {
            return Err(Error::Consistency(
                "replayed trace does not reproduce the graph".into(),
            ));
        }
        if self.labeling[self.trace.root] != self.root {
            return Err(Error::Consistency("root does not match the labeling".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Recognition {
    Exceptional(Recognized),
    NotExceptional(Refutation),
}

impl Recognition {
    pub fn is_exceptional(&self) -> bool {
        matches!(self, Recognition::Exceptional(_))
    }
}

/// Decide whether `g` is exceptional by peeling operations off in reverse.
///
/// Reverse steps are tried in the order C, P, F with ascending vertex ids,
/// backtracking on failure; the first complete peeling is returned.
pub fn recognize_exceptional(g: &Graph) -> Recognition {
    let n = g.order();
    if let Some(v) = (0..n).find(|&v| g.deg(v) < 2) {
        return Recognition::NotExceptional(Refutation::MinDegree {
            vertex: v,
            degree: g.deg(v),
        });
    }
    let twos = g.two_vertex_set();
    if twos.len() != 3 {
        return Recognition::NotExceptional(Refutation::TwoVertexCount { count: twos.len() });
    }
    if !is_2_connected(g) {
        return Recognition::NotExceptional(Refutation::NotTwoConnected);
    }
    let roots: Vec<usize> = if n == 5 {
        twos.iter().take(1).collect()
    } else {
        twos.iter()
            .filter(|&r| {
                let dist = g.distances_from(r).expect("vertex in range");
                twos.iter()
                    .filter(|&o| o != r)
                    .all(|o| dist[o].is_none_or(|d| d >= 3))
            })
            .collect()
    };
    if roots.is_empty() {
        return Recognition::NotExceptional(Refutation::NoRoot);
    }
    let mut peeler = Peeler { reached_base: false };
    for root in roots {
        let ids: Vec<usize> = (0..n).collect();
        if let Some(peeled) = peeler.peel(g, &ids, root) {
            return Recognition::Exceptional(peeled.into_recognized(root));
        }
    }
    Recognition::NotExceptional(if peeler.reached_base {
        Refutation::BaseMismatch
    } else {
        Refutation::NoReverseOperation
    })
}

/// Forward history found by peeling, in input ids.
struct Peeled {
    /// Input vertices playing `K₂,₃` vertices `0..5`.
    base: [usize; 5],
    /// Forward steps with operands and new vertices (in replay order), all
    /// as input ids.
    steps: Vec<(Step, Vec<usize>)>,
}

impl Peeled {
    fn into_recognized(self, root: usize) -> Recognized {
        let mut labeling: Vec<usize> = self.base.to_vec();
        for (_, new) in &self.steps {
            labeling.extend(new);
        }
        let mut replay_id = vec![usize::MAX; labeling.len()];
        for (i, &v) in labeling.iter().enumerate() {
            replay_id[v] = i;
        }
        let steps = self
            .steps
            .iter()
            .map(|(step, _)| match *step {
                Step::P { u, v } => Step::P {
                    u: replay_id[u],
                    v: replay_id[v],
                },
                Step::C { u } => Step::C { u: replay_id[u] },
                Step::F { u, v } => Step::F {
                    u: replay_id[u],
                    v: replay_id[v],
                },
            })
            .collect();
        Recognized {
            root,
            trace: BuildTrace {
                root: K23_ROOT,
                steps,
            },
            labeling,
        }
    }
}

struct Peeler {
    reached_base: bool,
}

impl Peeler {
    /// `h` is the current graph, `ids[v]` the input id of its vertex `v`.
    fn peel(&mut self, h: &Graph, ids: &[usize], root: usize) -> Option<Peeled> {
        let n = h.order();
        if h.min_degree()? < 2 {
            return None;
        }
        let twos = h.two_vertex_set();
        if twos.len() != 3 || !twos.contains(root) {
            return None;
        }
        if n <= 5 {
            self.reached_base = true;
            return base_case(h, ids, root);
        }
        let mut pair = twos.iter().filter(|&v| v != root);
        let (x, y) = (pair.next()?, pair.next()?);
        let all = low_mask(n);

        if h.has_edge(x, y) {
            // Reverse P: x, y are the inner vertices of a path u x y v.
            let u = (h.row(x) & !bit(y)).trailing_zeros() as usize;
            let v = (h.row(y) & !bit(x)).trailing_zeros() as usize;
            if u != v && !h.has_edge(u, v) && h.deg(u) == 3 && h.deg(v) == 3 {
                let keep = all & !bit(x) & !bit(y);
                if let Some(mut p) = self.recurse(h, ids, keep, root) {
                    p.steps.push((
                        Step::P { u: ids[u], v: ids[v] },
                        vec![ids[x], ids[y]],
                    ));
                    return Some(p);
                }
            }
            return None;
        }

        if h.row(x) != h.row(y) {
            return None;
        }
        // Reverse C: drop either twin.
        for (w, u) in [(x, y), (y, x)] {
            // The twin of `u` in the parent is a neighbor that drops to degree 2.
            if Bits(h.row(u)).all(|t| h.deg(t) != 3) {
                continue;
            }
            let keep = all & !bit(w);
            if let Some(mut p) = self.recurse(h, ids, keep, root) {
                p.steps.push((Step::C { u: ids[u] }, vec![ids[w]]));
                return Some(p);
            }
        }
        // Reverse F: x, y are b, d on a 4-cycle a b c d hanging off u a, c v.
        let common = h.row(x);
        let a0 = common.trailing_zeros() as usize;
        let c0 = (common & (common - 1)).trailing_zeros() as usize;
        if h.deg(a0) != 3 || h.deg(c0) != 3 || h.has_edge(a0, c0) {
            return None;
        }
        let ua = (h.row(a0) & !bit(x) & !bit(y)).trailing_zeros() as usize;
        let uc = (h.row(c0) & !bit(x) & !bit(y)).trailing_zeros() as usize;
        if ua == uc || !h.has_edge(ua, uc) || h.deg(ua) != 3 || h.deg(uc) != 3 {
            return None;
        }
        let keep = all & !(bit(x) | bit(y) | bit(a0) | bit(c0));
        let mut p = self.recurse(h, ids, keep, root)?;
        let (u, a, c, v) = if ids[ua] < ids[uc] {
            (ua, a0, c0, uc)
        } else {
            (uc, c0, a0, ua)
        };
        p.steps.push((
            Step::F { u: ids[u], v: ids[v] },
            vec![ids[a], ids[x], ids[c], ids[y]],
        ));
        Some(p)
    }

    fn recurse(&mut self, h: &Graph, ids: &[usize], keep: u64, root: usize) -> Option<Peeled> {
        let sub = h.induced(keep);
        let sub_ids: Vec<usize> = Bits(keep).map(|v| ids[v]).collect();
        let sub_root = (keep & low_mask(root)).count_ones() as usize;
        let peeled = self.peel(&sub, &sub_ids, sub_root)?;
        Some(peeled)
    }
}

fn base_case(h: &Graph, ids: &[usize], root: usize) -> Option<Peeled> {
    let mut phi = find_isomorphism(&k23(), h)?;
    if let Some(j) = (0..5).find(|&j| phi[j] == root) {
        phi.swap(K23_ROOT, j);
    }
    let mut base = [0; 5];
    for (i, b) in base.iter_mut().enumerate() {
        *b = ids[phi[i]];
    }
    Some(Peeled {
        base,
        steps: Vec::new(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairRelation {
    Twins,
    Adjacent,
    Neither,
}

/// Outcome of checking the residue pattern of the non-root 2-vertices.
#[derive(Clone, Debug, Serialize)]
pub struct LemmaReport {
    pub root: usize,
    pub x: usize,
    pub y: usize,
    pub relation: PairRelation,
    /// Lengths of `(x, y)`-paths mod 3.
    pub xy_residues: ResidueSet,
    /// Lengths mod 3 of `(r, x)`-paths in `G − y` and `(r, y)`-paths in
    /// `G − x`; absent for `K₂,₃`.
    pub root_residues: Option<[ResidueSet; 2]>,
    pub violations: Vec<String>,
}

impl LemmaReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the path-residue pattern of an exceptional graph whose root is
/// `trace.root`:
///
/// * twins `x, y`: `(x, y)`-path lengths are `{1, 2}` mod 3;
/// * adjacent `x, y`: `{0, 1}` mod 3;
/// * unless `g` is `K₂,₃`: `{0, 2}` mod 3 occur among `(r, x)`-paths
///   avoiding `y`, and among `(r, y)`-paths avoiding `x`.
pub fn check_lemma_residues(g: &Graph, trace: &BuildTrace, budget: Budget) -> Result<LemmaReport> {
    let root = trace.root;
    g.check_vertex(root)?;
    let twos = g.two_vertex_set();
    if twos.len() != 3 || !twos.contains(root) {
        return Err(Error::precondition(format!(
            "expected three 2-vertices including the root {root}, found {:?}",
            twos.to_vec()
        )));
    }
    let mut others = twos.iter().filter(|&v| v != root);
    let (x, y) = (others.next().unwrap(), others.next().unwrap());
    let mut violations = Vec::new();

    let relation = if g.has_edge(x, y) {
        PairRelation::Adjacent
    } else if g.row(x) == g.row(y) {
        PairRelation::Twins
    } else {
        violations.push(format!("{x} and {y} are neither 2-twins nor adjacent"));
        PairRelation::Neither
    };
    let xy_residues = path_residues(g, x, y, 3, budget)?;
    let expected = match relation {
        PairRelation::Twins => Some(ResidueSet::of(3, [1, 2])),
        PairRelation::Adjacent => Some(ResidueSet::of(3, [0, 1])),
        PairRelation::Neither => None,
    };
    if let Some(want) = expected {
        if xy_residues != want {
            violations.push(format!(
                "({x}, {y})-path lengths mod 3 are {xy_residues}, expected {want}"
            ));
        }
    }

    let root_residues = if g.order() == 5 {
        None
    } else {
        let want = ResidueSet::of(3, [0, 2]);
        let mut sets = [ResidueSet::empty(3); 2];
        for (i, (t, avoid)) in [(x, y), (y, x)].into_iter().enumerate() {
            let (sub, map) = g.delete_vertices(crate::graph::VertexSet::from_bits(bit(avoid)))?;
            let (r2, t2) = (map[root].unwrap(), map[t].unwrap());
            sets[i] = path_residues(&sub, r2, t2, 3, budget)?;
            if !want.is_subset(&sets[i]) {
                violations.push(format!(
                    "({root}, {t})-path lengths mod 3 avoiding {avoid} are {}, missing part of {want}",
                    sets[i]
                ));
            }
        }
        Some(sets)
    };
    Ok(LemmaReport {
        root,
        x,
        y,
        relation,
        xy_residues,
        root_residues,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::find_cycle_mod;
    use crate::named;

    #[test]
    fn small_generations() {
        let five = generate_exceptional(5).unwrap();
        assert_eq!(five.len(), 1);
        assert_eq!(five[0].form, canonical_form(&k23()));
        assert_eq!(generate_exceptional(6).unwrap().len(), 1);
        let orders: std::collections::BTreeSet<usize> = generate_exceptional(10)
            .unwrap()
            .iter()
            .map(|e| e.graph.order())
            .collect();
        assert_eq!(orders.into_iter().collect::<Vec<_>>(), vec![5, 7, 8, 10]);
        assert!(generate_exceptional(4).is_err());
    }

    #[test]
    fn generated_graphs_replay_and_are_recognized() {
        for e in generate_exceptional(13).unwrap() {
            assert_eq!(e.trace.replay().unwrap(), e.graph);
            assert_eq!(find_cycle_mod(&e.graph, 3, 0, Budget::DEFAULT).unwrap(), None);
            match recognize_exceptional(&e.graph) {
                Recognition::Exceptional(r) => r.verify(&e.graph).unwrap(),
                other => panic!("{} refuted: {other:?}", e.graph.to_graph6()),
            }
        }
    }

    #[test]
    fn recognition_survives_relabeling() {
        let g = generate_exceptional(11).unwrap().pop().unwrap().graph;
        let n = g.order();
        let perm: Vec<usize> = (0..n).map(|v| (v * 5 + 3) % n).collect();
        let h = g.relabel(&perm).unwrap();
        match recognize_exceptional(&h) {
            Recognition::Exceptional(r) => r.verify(&h).unwrap(),
            other => panic!("refuted: {other:?}"),
        }
    }

    #[test]
    fn refutations() {
        use Refutation::*;
        let refute = |g: &Graph| match recognize_exceptional(g) {
            Recognition::NotExceptional(r) => r,
            Recognition::Exceptional(_) => panic!("accepted"),
        };
        assert_eq!(refute(&named::cycle(6)), TwoVertexCount { count: 6 });
        assert_eq!(refute(&named::path(4)), MinDegree { vertex: 0, degree: 1 });
        assert_eq!(refute(&named::complete(4)), TwoVertexCount { count: 0 });
        assert_eq!(refute(&named::diamond()), TwoVertexCount { count: 2 });
        // K₂,₃ hanging off a K₄ by a bridge.
        let mut bridged = named::disjoint_union(&k23(), &named::complete(4));
        bridged.add_edge(0, 5);
        assert_eq!(refute(&bridged), NotTwoConnected);
        // The Petersen graph with one edge subdivided three times has the
        // right degrees but contains a 9-cycle.
        let mut p = named::petersen();
        p.remove_edge(0, 1);
        let a = p.push_vertex(bit(0));
        let b = p.push_vertex(bit(a));
        p.push_vertex(bit(b) | bit(1));
        assert!(!recognize_exceptional(&p).is_exceptional());
        assert!(recognize_exceptional(&k23()).is_exceptional());
    }

    #[test]
    fn lemma_examples() {
        let base = generate_exceptional(8).unwrap();
        for e in &base {
            let report = check_lemma_residues(&e.graph, &e.trace, Budget::DEFAULT).unwrap();
            assert!(report.is_ok(), "{report:?}");
            match e.graph.order() {
                5 => {
                    assert_eq!(report.relation, PairRelation::Twins);
                    assert!(report.root_residues.is_none());
                }
                7 => assert_eq!(report.relation, PairRelation::Adjacent),
                8 => assert_eq!(report.relation, PairRelation::Twins),
                _ => {}
            }
        }
    }
}
