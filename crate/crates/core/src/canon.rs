//! Canonical labeling and isomorphism testing for small graphs.
//!
//! The canonical labeling is the lexicographically smallest adjacency
//! bitstring (upper triangle, column-major, as in graph6) reachable by an
//! individualize-and-refine search. Refinement starts from the unit
//! partition and splits cells by neighbor counts until the ordered partition
//! is equitable; the first non-singleton cell is the branching cell.
//! Automorphisms discovered at equal leaves prune sibling branches that lie
//! in the same orbit of the pointwise stabilizer of the current prefix.
//!
//! [`find_isomorphism`] is an independent backtracking matcher and is used
//! to cross-check the canonical forms.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph::{bit, low_mask, Bits, Graph, MAX_ORDER};

/// Isomorphism-invariant key: byte 0 is the order, the remaining bytes hold
/// the canonically relabeled upper-triangle bits, 8 per byte, MSB first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm(Box<[u8]>);

impl CanonicalForm {
    fn from_canonical_graph(g: &Graph) -> Self {
        let n = g.order();
        let nbits = n * n.saturating_sub(1) / 2;
        let mut bytes = vec![0u8; 1 + nbits.div_ceil(8)];
        bytes[0] = n as u8;
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if g.has_edge(i, j) {
                    bytes[1 + k / 8] |= 0x80 >> (k % 8);
                }
                k += 1;
            }
        }
        CanonicalForm(bytes.into_boxed_slice())
    }

    pub fn order(&self) -> usize {
        self.0[0] as usize
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn to_hex(&self) -> String {
        hex::encode(&self.0)
    }

    pub fn from_hex(s: &str) -> Result<Self> {
        let bytes = hex::decode(s).map_err(|e| Error::parse(0, e.to_string()))?;
        let form = CanonicalForm(bytes.into_boxed_slice());
        form.check()?;
        Ok(form)
    }

    fn check(&self) -> Result<()> {
        let n = *self.0.first().ok_or_else(|| Error::parse(0, "empty key"))? as usize;
        if n > MAX_ORDER {
            return Err(Error::parse(0, format!("order {n} too large")));
        }
        let nbits = n * n.saturating_sub(1) / 2;
        if self.0.len() != 1 + nbits.div_ceil(8) {
            return Err(Error::parse(1, "key length does not match its order"));
        }
        Ok(())
    }

    /// The canonical representative graph of the class.
    pub fn to_graph(&self) -> Graph {
        let n = self.order();
        let mut g = Graph::empty(n);
        let mut k = 0;
        for j in 1..n {
            for i in 0..j {
                if self.0[1 + k / 8] & (0x80 >> (k % 8)) != 0 {
                    g.add_edge(i, j);
                }
                k += 1;
            }
        }
        g
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

impl Serialize for CanonicalForm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_hex())
    }
}

impl<'de> Deserialize<'de> for CanonicalForm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        CanonicalForm::from_hex(&s).map_err(serde::de::Error::custom)
    }
}

/// Result of canonical labeling.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub form: CanonicalForm,
    /// `labeling[v]` is the canonical position of input vertex `v`.
    pub labeling: Vec<usize>,
}

impl Canonical {
    pub fn graph(&self) -> Graph {
        self.form.to_graph()
    }
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    canonical_labeling(g).form
}

pub fn canonical_labeling(g: &Graph) -> Canonical {
    let n = g.order();
    if n <= 1 {
        let labeling = (0..n).collect();
        return Canonical {
            form: CanonicalForm::from_canonical_graph(g),
            labeling,
        };
    }
    let mut search = Search::new(g);
    let mut cells = vec![low_mask(n)];
    let mut prefix = Vec::with_capacity(n);
    search.visit(&mut cells, &mut prefix);
    let (_, labeling) = search.best.expect("search reaches at least one leaf");
    let canon = g.relabel_unchecked(&labeling);
    Canonical {
        form: CanonicalForm::from_canonical_graph(&canon),
        labeling,
    }
}

/// Cap on stored automorphisms; further ones are dropped (pruning only
/// gets weaker, never wrong).
const MAX_AUTOS: usize = 256;

struct Search<'g> {
    g: &'g Graph,
    n: usize,
    first: Option<(Vec<u64>, Vec<usize>)>,
    best: Option<(Vec<u64>, Vec<usize>)>,
    autos: Vec<Vec<u8>>,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph) -> Self {
        Search {
            g,
            n: g.order(),
            first: None,
            best: None,
            autos: Vec::new(),
        }
    }

    fn visit(&mut self, cells: &mut Vec<u64>, prefix: &mut Vec<usize>) {
        refine(self.g, cells);
        if cells.len() == self.n {
            self.leaf(cells);
            return;
        }
        let target = cells
            .iter()
            .position(|c| c & (c - 1) != 0)
            .expect("non-discrete partition has a non-singleton cell");
        let cell = cells[target];
        let mut explored: Vec<usize> = Vec::new();
        let mut orbits: Option<(usize, Vec<u8>)> = None;
        for v in Bits(cell) {
            if !explored.is_empty() {
                let stale = orbits.as_ref().is_none_or(|(k, _)| *k != self.autos.len());
                if stale {
                    orbits = Some((self.autos.len(), self.stabilizer_orbits(prefix)));
                }
                let (_, o) = orbits.as_ref().unwrap();
                if explored.iter().any(|&w| o[w] == o[v]) {
                    continue;
                }
            }
            explored.push(v);
            let mut child = Vec::with_capacity(cells.len() + 1);
            child.extend_from_slice(&cells[..target]);
            child.push(bit(v));
            child.push(cell & !bit(v));
            child.extend_from_slice(&cells[target + 1..]);
            prefix.push(v);
            self.visit(&mut child, prefix);
            prefix.pop();
        }
    }

    /// Orbit representatives (smallest member) under the automorphisms found
    /// so far that fix every vertex of `prefix`.
    fn stabilizer_orbits(&self, prefix: &[usize]) -> Vec<u8> {
        let n = self.n;
        let mut parent: Vec<u8> = (0..n as u8).collect();
        fn find(p: &mut [u8], mut x: u8) -> u8 {
            while p[x as usize] != x {
                p[x as usize] = p[p[x as usize] as usize];
                x = p[x as usize];
            }
            x
        }
        for a in &self.autos {
            if prefix.iter().any(|&v| a[v] as usize != v) {
                continue;
            }
            for (v, &image) in a.iter().enumerate().take(n) {
                let (x, y) = (find(&mut parent, v as u8), find(&mut parent, image));
                if x != y {
                    let (lo, hi) = if x < y { (x, y) } else { (y, x) };
                    parent[hi as usize] = lo;
                }
            }
        }
        (0..n).map(|v| find(&mut parent, v as u8)).collect()
    }

    fn leaf(&mut self, cells: &[u64]) {
        let n = self.n;
        let mut labeling = vec![0usize; n];
        for (i, c) in cells.iter().enumerate() {
            labeling[c.trailing_zeros() as usize] = i;
        }
        let key = column_key(&self.g.relabel_unchecked(&labeling));

        let Some((first_key, first_lab)) = &self.first else {
            self.first = Some((key.clone(), labeling.clone()));
            self.best = Some((key, labeling));
            return;
        };
        if *first_key == key {
            let auto = automorphism(first_lab, &labeling);
            self.record(auto);
            return;
        }
        let (best_key, best_lab) = self.best.as_ref().unwrap();
        match key.cmp(best_key) {
            std::cmp::Ordering::Less => self.best = Some((key, labeling)),
            std::cmp::Ordering::Equal => {
                let auto = automorphism(best_lab, &labeling);
                self.record(auto);
            }
            std::cmp::Ordering::Greater => {}
        }
    }

    fn record(&mut self, auto: Vec<u8>) {
        if self.autos.len() < MAX_AUTOS && auto.iter().enumerate().any(|(v, &a)| a as usize != v) {
            self.autos.push(auto);
        }
    }
}

/// Given two labelings that produce the same relabeled graph, the map
/// `v ↦ reference⁻¹(other(v))` is an automorphism.
fn automorphism(reference: &[usize], other: &[usize]) -> Vec<u8> {
    let mut inv = vec![0u8; reference.len()];
    for (v, &p) in reference.iter().enumerate() {
        inv[p] = v as u8;
    }
    other.iter().map(|&p| inv[p]).collect()
}

/// Column values of the upper triangle; comparing these vectors
/// lexicographically is the same as comparing the graph6 bitstrings.
fn column_key(g: &Graph) -> Vec<u64> {
    (1..g.order())
        .map(|j| (g.row(j) & low_mask(j)).reverse_bits() >> (64 - j))
        .collect()
}

/// Refine an ordered partition until it is equitable. Splits depend only on
/// cell order and neighbor counts, so the result commutes with relabeling.
fn refine(g: &Graph, cells: &mut Vec<u64>) {
    'restart: loop {
        for si in 0..cells.len() {
            let splitter = cells[si];
            for ci in 0..cells.len() {
                let cell = cells[ci];
                if cell & (cell - 1) == 0 {
                    continue;
                }
                let mut vs = Bits(cell);
                let v0 = vs.next().unwrap();
                let c0 = (g.row(v0) & splitter).count_ones();
                if vs.all(|v| (g.row(v) & splitter).count_ones() == c0) {
                    continue;
                }
                let mut buckets = [0u64; MAX_ORDER + 1];
                for v in Bits(cell) {
                    buckets[(g.row(v) & splitter).count_ones() as usize] |= bit(v);
                }
                let parts: Vec<u64> = buckets.iter().copied().filter(|&b| b != 0).collect();
                cells.splice(ci..=ci, parts);
                continue 'restart;
            }
        }
        return;
    }
}

/// Independent isomorphism search. Returns `map` with `map[v]` the image
/// in `h` of vertex `v` of `g`.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    let n = g.order();
    if n != h.order() || g.edge_count() != h.edge_count() {
        return None;
    }
    let cg = local_colors(g);
    let ch = local_colors(h);
    let mut sg = cg.clone();
    let mut sh = ch.clone();
    sg.sort_unstable();
    sh.sort_unstable();
    if sg != sh {
        return None;
    }
    // Match vertices in an order that keeps each next vertex attached to the
    // already-mapped part when possible.
    let mut order = Vec::with_capacity(n);
    let mut placed = 0u64;
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| placed & bit(v) == 0)
            .max_by_key(|&v| ((g.row(v) & placed).count_ones(), g.deg(v), std::cmp::Reverse(v)))
            .unwrap();
        order.push(next);
        placed |= bit(next);
    }
    let mut map = vec![usize::MAX; n];
    let mut used = 0u64;
    if extend_iso(g, h, &cg, &ch, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend_iso(
    g: &Graph,
    h: &Graph,
    cg: &[(usize, Vec<usize>)],
    ch: &[(usize, Vec<usize>)],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut u64,
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    'cand: for w in 0..h.order() {
        if *used & bit(w) != 0 || cg[v] != ch[w] {
            continue;
        }
        for &u in &order[..depth] {
            if g.has_edge(v, u) != h.has_edge(w, map[u]) {
                continue 'cand;
            }
        }
        map[v] = w;
        *used |= bit(w);
        if extend_iso(g, h, cg, ch, order, depth + 1, map, used) {
            return true;
        }
        *used &= !bit(w);
        map[v] = usize::MAX;
    }
    false
}

/// Degree plus sorted neighbor degrees.
fn local_colors(g: &Graph) -> Vec<(usize, Vec<usize>)> {
    (0..g.order())
        .map(|v| {
            let mut nd: Vec<usize> = Bits(g.row(v)).map(|u| g.deg(u)).collect();
            nd.sort_unstable();
            (g.deg(v), nd)
        })
        .collect()
}

pub fn is_isomorphic(g: &Graph, h: &Graph) -> bool {
    find_isomorphism(g, h).is_some()
}

/// Insert-only set of canonical forms. Stores built on separate threads can
/// be merged in any order.
#[derive(Clone, Debug, Default)]
pub struct DedupStore {
    seen: HashSet<CanonicalForm>,
}

impl DedupStore {
    pub fn new() -> Self {
        Self::default()
    }

    /// Returns `true` if the class was not present before.
    pub fn insert(&mut self, form: CanonicalForm) -> bool {
        self.seen.insert(form)
    }

    pub fn insert_graph(&mut self, g: &Graph) -> bool {
        self.insert(canonical_form(g))
    }

    pub fn contains(&self, form: &CanonicalForm) -> bool {
        self.seen.contains(form)
    }

    pub fn len(&self) -> usize {
        self.seen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seen.is_empty()
    }

    pub fn merge(mut self, other: DedupStore) -> DedupStore {
        if self.seen.len() < other.seen.len() {
            return other.merge(self);
        }
        self.seen.extend(other.seen);
        self
    }

    /// Members in ascending key order.
    pub fn sorted(&self) -> Vec<CanonicalForm> {
        let mut v: Vec<_> = self.seen.iter().cloned().collect();
        v.sort();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        fn rec(cur: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == used.len() {
                out.push(cur.clone());
                return;
            }
            for v in 0..used.len() {
                if !used[v] {
                    used[v] = true;
                    cur.push(v);
                    rec(cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::new(), &mut vec![false; n], &mut out);
        out
    }

    #[test]
    fn c5_key_is_invariant_under_all_relabelings() {
        let c5 = named::cycle(5);
        let key = canonical_form(&c5);
        let perms = permutations(5);
        assert_eq!(perms.len(), 120);
        for p in perms {
            assert_eq!(canonical_form(&c5.relabel(&p).unwrap()), key);
        }
    }

    #[test]
    fn distinguishes_k23_from_c5() {
        assert_ne!(
            canonical_form(&named::complete_bipartite(2, 3)),
            canonical_form(&named::cycle(5))
        );
    }

    #[test]
    fn labeling_reproduces_key() {
        let p = named::petersen();
        let c = canonical_labeling(&p);
        assert_eq!(CanonicalForm::from_canonical_graph(&p.relabel(&c.labeling).unwrap()), c.form);
        assert_eq!(c.form.to_graph(), p.relabel(&c.labeling).unwrap());
    }

    #[test]
    fn hex_round_trip() {
        let f = canonical_form(&named::petersen());
        assert_eq!(CanonicalForm::from_hex(&f.to_hex()).unwrap(), f);
        assert!(CanonicalForm::from_hex("05").is_err());
        assert_eq!(f.to_hex(), f.to_hex().to_lowercase());
    }

    #[test]
    fn isomorphism_examples() {
        let c6 = named::cycle(6);
        let shuffled = c6.relabel(&[3, 5, 0, 2, 4, 1]).unwrap();
        assert!(is_isomorphic(&c6, &shuffled));
        let map = find_isomorphism(&c6, &shuffled).unwrap();
        for (u, v) in c6.edges() {
            assert!(shuffled.has_edge(map[u], map[v]));
        }

        let two_triangles = named::disjoint_union(&named::complete(3), &named::complete(3));
        assert!(!is_isomorphic(&c6, &two_triangles));
        assert_ne!(canonical_form(&c6), canonical_form(&two_triangles));

        let k33 = named::complete_bipartite(3, 3);
        assert!(!is_isomorphic(&k33, &named::prism()));
        assert_ne!(canonical_form(&k33), canonical_form(&named::prism()));
    }

    #[test]
    fn symmetric_graphs_are_fast() {
        for n in [10, 16, 24] {
            let k = named::complete(n);
            assert_eq!(canonical_form(&k), canonical_form(&k));
            let e = Graph::new(n).unwrap();
            assert_eq!(canonical_form(&e).to_graph(), e);
        }
    }

    #[test]
    fn dedup_store_merge() {
        let mut a = DedupStore::new();
        let mut b = DedupStore::new();
        assert!(a.insert_graph(&named::cycle(5)));
        assert!(!a.insert_graph(&named::cycle(5).relabel(&[1, 0, 2, 3, 4]).unwrap()));
        b.insert_graph(&named::complete(4));
        b.insert_graph(&named::cycle(5));
        let ab = a.clone().merge(b.clone());
        let ba = b.merge(a);
        assert_eq!(ab.len(), 2);
        assert_eq!(ab.sorted(), ba.sorted());
    }
}
