//! Exact search for cycles and paths with prescribed length residues.
//!
//! All searches are backtracking over simple paths. A cycle is rooted at
//! its smallest vertex `s`, and its second vertex must be smaller than its
//! last one, so every cycle is visited exactly once. Branches are cut with a
//! reachability table over `(vertex, length mod k)` states in the subgraph
//! of still-unused vertices: walks over-approximate paths, so a residue
//! unreachable by walks is unreachable by paths and the cut is sound.
//!
//! Every search charges one unit of budget per expanded node. Running out
//! yields [`Error::Indeterminate`], never an empty answer.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bit, low_mask, Bits, Graph};

/// Node-expansion cap for a single query.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Budget(pub u64);

impl Budget {
    pub const DEFAULT: Budget = Budget(100_000_000);
    pub const UNLIMITED: Budget = Budget(u64::MAX);

    /// Name of the environment variable read by [`Budget::from_env`].
    pub const ENV_VAR: &'static str = "MODCYCLE_BUDGET";

    /// `MODCYCLE_BUDGET` if set and parseable.
    pub fn from_env() -> Option<Result<Budget>> {
        let raw = std::env::var(Self::ENV_VAR).ok()?;
        Some(
            raw.trim()
                .parse::<u64>()
                .map(Budget)
                .map_err(|_| Error::parse(0, format!("{}={raw:?} is not an integer", Self::ENV_VAR))),
        )
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::DEFAULT
    }
}

/// A subset of `{0, …, k−1}` for a modulus `2 <= k <= 64`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct ResidueSet {
    modulus: u32,
    bits: u64,
}

impl ResidueSet {
    pub fn empty(k: u32) -> Self {
        assert!((2..=64).contains(&k), "modulus {k} outside 2..=64");
        ResidueSet { modulus: k, bits: 0 }
    }

    pub fn full(k: u32) -> Self {
        let mut s = Self::empty(k);
        s.bits = low_mask(k as usize);
        s
    }

    /// Residues of the given integers modulo `k`.
    pub fn of<I: IntoIterator<Item = u64>>(k: u32, values: I) -> Self {
        let mut s = Self::empty(k);
        for v in values {
            s.insert((v % k as u64) as u32);
        }
        s
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    pub fn insert(&mut self, r: u32) {
        assert!(r < self.modulus, "residue {r} out of range mod {}", self.modulus);
        self.bits |= 1 << r;
    }

    pub fn contains(&self, r: u32) -> bool {
        r < self.modulus && self.bits >> r & 1 == 1
    }

    pub fn members(&self) -> Vec<u32> {
        Bits(self.bits).map(|r| r as u32).collect()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == low_mask(self.modulus as usize)
    }

    /// `A ⊆ B (mod k)`.
    pub fn is_subset(&self, other: &ResidueSet) -> bool {
        self.modulus == other.modulus && self.bits & !other.bits == 0
    }
}

impl fmt::Debug for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} (mod {})", self.members(), self.modulus)
    }
}

impl fmt::Display for ResidueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Serialize, Deserialize)]
struct ResidueSetRepr {
    k: u32,
    members: Vec<u32>,
}

impl Serialize for ResidueSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ResidueSetRepr {
            k: self.modulus,
            members: self.members(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ResidueSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = ResidueSetRepr::deserialize(d)?;
        if !(2..=64).contains(&repr.k) || repr.members.iter().any(|&r| r >= repr.k) {
            return Err(serde::de::Error::custom("invalid residue set"));
        }
        let mut s = ResidueSet::empty(repr.k);
        for r in repr.members {
            s.insert(r);
        }
        Ok(s)
    }
}

/// A cycle `v₀ v₁ … v_{m−1} v₀` whose length `m` is `r` modulo `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCertificate {
    pub k: u32,
    pub r: u32,
    pub vertices: Vec<usize>,
}

impl CycleCertificate {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Re-check the certificate against `g` without trusting the search.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let m = self.vertices.len();
        if m < 3 {
            return Err(Error::Consistency(format!("cycle of length {m} is too short")));
        }
        let mut seen = vec![false; g.order()];
        for &v in &self.vertices {
            g.check_vertex(v)?;
            if std::mem::replace(&mut seen[v], true) {
                return Err(Error::Consistency(format!("vertex {v} repeats")));
            }
        }
        for i in 0..m {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % m]);
            if !g.has_edge(a, b) {
                return Err(Error::Consistency(format!("{a}-{b} is not an edge")));
            }
        }
        if self.k == 0 || m % self.k as usize != self.r as usize {
            return Err(Error::Consistency(format!(
                "length {m} is not {} mod {}",
                self.r, self.k
            )));
        }
        Ok(())
    }
}

fn check_modulus(k: u32) -> Result<()> {
    if (2..=64).contains(&k) {
        Ok(())
    } else {
        Err(Error::precondition(format!("modulus {k} outside 2..=64")))
    }
}

#[inline]
fn rotate(mask: u64, by: usize, k: usize) -> u64 {
    let by = by % k;
    if by == 0 {
        return mask;
    }
    ((mask << by) | (mask >> (k - by))) & low_mask(k)
}

/// Residues `ρ` such that some walk of length `≡ ρ (mod k)` leads from
/// `from` through vertices of `avail` to a vertex of `targets`. `from`
/// itself counts as reached with `ρ = 0`.
#[inline]
fn walk_residues(g: &Graph, k: usize, from: usize, avail: u64, targets: u64) -> u64 {
    let mut seen = [0u64; 64];
    let mut frontier = [0u64; 64];
    seen[0] = bit(from);
    frontier[0] = bit(from);
    let mut active = true;
    while active {
        active = false;
        for rho in 0..k {
            let f = std::mem::take(&mut frontier[rho]);
            if f == 0 {
                continue;
            }
            let mut nb = 0u64;
            for v in Bits(f) {
                nb |= g.row(v);
            }
            let next = (rho + 1) % k;
            let fresh = nb & avail & !seen[next];
            if fresh != 0 {
                seen[next] |= fresh;
                frontier[next] |= fresh;
                active = true;
            }
        }
    }
    let mut out = 0u64;
    for (rho, s) in seen.iter().enumerate().take(k) {
        if s & targets != 0 {
            out |= bit(rho);
        }
    }
    out
}

/// Shared state of one backtracking query.
struct Search<'g> {
    g: &'g Graph,
    k: usize,
    wanted: u64,
    found: u64,
    stop_on_first: bool,
    witness: Option<Vec<usize>>,
    path: Vec<usize>,
    visited: u64,
    expansions: u64,
    budget: Budget,
}

impl<'g> Search<'g> {
    fn new(g: &'g Graph, k: u32, wanted: u64, stop_on_first: bool, budget: Budget) -> Self {
        Search {
            g,
            k: k as usize,
            wanted,
            found: 0,
            stop_on_first,
            witness: None,
            path: Vec::with_capacity(g.order()),
            visited: 0,
            expansions: 0,
            budget,
        }
    }

    fn done(&self) -> bool {
        self.wanted & !self.found == 0 || (self.stop_on_first && self.witness.is_some())
    }

    #[inline]
    fn charge(&mut self) -> Result<()> {
        self.expansions += 1;
        if self.expansions > self.budget.0 {
            Err(Error::Indeterminate {
                budget: self.budget.0,
                graph: None,
            })
        } else {
            Ok(())
        }
    }

    fn hit(&mut self, residue: usize) {
        if self.wanted & !self.found & bit(residue) != 0 && self.witness.is_none() {
            self.witness = Some(self.path.clone());
        }
        self.found |= bit(residue);
    }

    /// Cycles through `anchor` whose other vertices lie in `allowed`. The
    /// cycle is oriented so that its second vertex is smaller than its last.
    fn cycles_at(&mut self, anchor: usize, allowed: u64) -> Result<()> {
        let nbrs = self.g.row(anchor) & allowed;
        if nbrs.count_ones() < 2 {
            return Ok(());
        }
        for second in Bits(nbrs) {
            let closers = nbrs & !low_mask(second + 1);
            if closers == 0 {
                break;
            }
            self.path.clear();
            self.path.extend([anchor, second]);
            self.visited = bit(anchor) | bit(second);
            self.extend_cycle(second, 1, allowed, closers)?;
            if self.done() {
                break;
            }
        }
        Ok(())
    }

    fn extend_cycle(&mut self, v: usize, len: usize, allowed: u64, closers: u64) -> Result<()> {
        self.charge()?;
        if closers & bit(v) != 0 {
            self.hit((len + 1) % self.k);
            if self.done() {
                return Ok(());
            }
        }
        let avail = allowed & !self.visited;
        let reach = walk_residues(self.g, self.k, v, avail, closers);
        if rotate(reach, len + 1, self.k) & self.wanted & !self.found == 0 {
            return Ok(());
        }
        for w in Bits(self.g.row(v) & avail) {
            self.path.push(w);
            self.visited |= bit(w);
            self.extend_cycle(w, len + 1, allowed, closers)?;
            self.visited &= !bit(w);
            self.path.pop();
            if self.done() {
                break;
            }
        }
        Ok(())
    }

    fn extend_path(&mut self, v: usize, len: usize, target: usize, allowed: u64) -> Result<()> {
        self.charge()?;
        if v == target {
            self.hit(len % self.k);
            return Ok(());
        }
        let avail = allowed & !self.visited;
        let reach = walk_residues(self.g, self.k, v, avail, bit(target));
        if rotate(reach, len, self.k) & self.wanted & !self.found == 0 {
            return Ok(());
        }
        for w in Bits(self.g.row(v) & avail) {
            self.path.push(w);
            self.visited |= bit(w);
            self.extend_path(w, len + 1, target, allowed)?;
            self.visited &= !bit(w);
            self.path.pop();
            if self.done() {
                break;
            }
        }
        Ok(())
    }
}

/// A cycle of length `≡ r (mod k)`, or `None` if `g` has no such cycle.
pub fn find_cycle_mod(g: &Graph, k: u32, r: u32, budget: Budget) -> Result<Option<CycleCertificate>> {
    check_modulus(k)?;
    if r >= k {
        return Err(Error::precondition(format!("residue {r} is not below modulus {k}")));
    }
    let n = g.order();
    let mut search = Search::new(g, k, bit(r as usize), true, budget);
    for anchor in 0..n {
        let allowed = low_mask(n) & !low_mask(anchor + 1);
        search.cycles_at(anchor, allowed)?;
        if let Some(vertices) = search.witness.take() {
            return Ok(Some(CycleCertificate { k, r, vertices }));
        }
    }
    Ok(None)
}

/// `{ m mod k : g has a cycle of length m }`.
pub fn cycle_length_residues(g: &Graph, k: u32, budget: Budget) -> Result<ResidueSet> {
    check_modulus(k)?;
    let n = g.order();
    let mut search = Search::new(g, k, low_mask(k as usize), false, budget);
    for anchor in 0..n {
        let allowed = low_mask(n) & !low_mask(anchor + 1);
        search.cycles_at(anchor, allowed)?;
        if search.done() {
            break;
        }
    }
    Ok(ResidueSet {
        modulus: k,
        bits: search.found,
    })
}

/// Residues (mod `k`) of the lengths of cycles through `v`.
pub fn cycle_residues_through(g: &Graph, v: usize, k: u32, budget: Budget) -> Result<ResidueSet> {
    check_modulus(k)?;
    g.check_vertex(v)?;
    let allowed = low_mask(g.order()) & !bit(v);
    let mut search = Search::new(g, k, low_mask(k as usize), false, budget);
    search.cycles_at(v, allowed)?;
    Ok(ResidueSet {
        modulus: k,
        bits: search.found,
    })
}

/// `L_G(x, y)` reduced modulo `k`: the residues of the lengths of all
/// simple `(x, y)`-paths.
pub fn path_residues(g: &Graph, x: usize, y: usize, k: u32, budget: Budget) -> Result<ResidueSet> {
    check_modulus(k)?;
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Err(Error::precondition("path endpoints must be distinct"));
    }
    let mut search = Search::new(g, k, low_mask(k as usize), false, budget);
    search.path.push(x);
    search.visited = bit(x);
    search.extend_path(x, 0, y, low_mask(g.order()))?;
    Ok(ResidueSet {
        modulus: k,
        bits: search.found,
    })
}

/// An `(x, y)`-path of length `≡ r (mod k)`, if one exists.
pub fn find_path_mod(
    g: &Graph,
    x: usize,
    y: usize,
    k: u32,
    r: u32,
    budget: Budget,
) -> Result<Option<Vec<usize>>> {
    check_modulus(k)?;
    g.check_vertex(x)?;
    g.check_vertex(y)?;
    if x == y {
        return Err(Error::precondition("path endpoints must be distinct"));
    }
    if r >= k {
        return Err(Error::precondition(format!("residue {r} is not below modulus {k}")));
    }
    let mut search = Search::new(g, k, bit(r as usize), true, budget);
    search.path.push(x);
    search.visited = bit(x);
    search.extend_path(x, 0, y, low_mask(g.order()))?;
    Ok(search.witness)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    fn b() -> Budget {
        Budget::DEFAULT
    }

    #[test]
    fn k23_has_no_cycle_divisible_by_three() {
        let k23 = named::complete_bipartite(2, 3);
        assert_eq!(find_cycle_mod(&k23, 3, 0, b()).unwrap(), None);
        let c4 = find_cycle_mod(&k23, 4, 0, b()).unwrap().unwrap();
        assert_eq!(c4.len(), 4);
        c4.validate(&k23).unwrap();
    }

    #[test]
    fn petersen_has_an_eight_cycle() {
        let p = named::petersen();
        let cert = find_cycle_mod(&p, 4, 0, b()).unwrap().unwrap();
        assert_eq!(cert.len(), 8);
        cert.validate(&p).unwrap();
        // Petersen cycle lengths are 5, 6, 8, 9.
        assert_eq!(cycle_length_residues(&p, 10, b()).unwrap().members(), vec![5, 6, 8, 9]);
    }

    #[test]
    fn cycle_residue_examples() {
        assert_eq!(cycle_length_residues(&named::cycle(5), 4, b()).unwrap().members(), vec![1]);
        assert_eq!(cycle_length_residues(&named::complete(4), 3, b()).unwrap().members(), vec![0, 1]);
        assert_eq!(
            cycle_length_residues(&named::complete_bipartite(2, 3), 3, b()).unwrap().members(),
            vec![1]
        );
        assert!(cycle_length_residues(&named::path(6), 3, b()).unwrap().is_empty());
    }

    #[test]
    fn path_residue_examples() {
        let k23 = named::complete_bipartite(2, 3);
        assert_eq!(path_residues(&k23, 2, 3, 3, b()).unwrap().members(), vec![1, 2]);
        let edge = named::path(2);
        assert_eq!(path_residues(&edge, 0, 1, 3, b()).unwrap().members(), vec![1]);
        assert!(path_residues(&edge, 0, 0, 3, b()).is_err());
        let two = named::disjoint_union(&edge, &edge);
        assert!(path_residues(&two, 0, 2, 3, b()).unwrap().is_empty());
    }

    #[test]
    fn residues_through_a_vertex() {
        // Bowtie: every cycle through the centre is a triangle.
        let bt = named::bowtie();
        assert_eq!(cycle_residues_through(&bt, 0, 4, b()).unwrap().members(), vec![3]);
        let k4 = named::complete(4);
        assert_eq!(cycle_residues_through(&k4, 2, 4, b()).unwrap().members(), vec![0, 3]);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let k8 = named::complete(8);
        let err = cycle_length_residues(&k8, 64, Budget(10)).unwrap_err();
        assert!(matches!(err, Error::Indeterminate { budget: 10, .. }));
    }

    #[test]
    fn invalid_arguments() {
        let k4 = named::complete(4);
        assert!(find_cycle_mod(&k4, 1, 0, b()).is_err());
        assert!(find_cycle_mod(&k4, 3, 3, b()).is_err());
        assert!(path_residues(&k4, 0, 9, 3, b()).is_err());
    }

    #[test]
    fn certificates_reject_bad_cycles() {
        let k4 = named::complete(4);
        let bad = CycleCertificate { k: 3, r: 0, vertices: vec![0, 1, 2, 3] };
        assert!(bad.validate(&k4).is_err());
        let repeat = CycleCertificate { k: 3, r: 0, vertices: vec![0, 1, 0] };
        assert!(repeat.validate(&k4).is_err());
        let good = CycleCertificate { k: 3, r: 0, vertices: vec![0, 1, 2] };
        good.validate(&k4).unwrap();
    }

    #[test]
    fn certificate_json_shape() {
        let c = CycleCertificate { k: 4, r: 0, vertices: vec![0, 2, 1, 3] };
        assert_eq!(
            serde_json::to_string(&c).unwrap(),
            r#"{"k":4,"r":0,"vertices":[0,2,1,3]}"#
        );
    }
}
