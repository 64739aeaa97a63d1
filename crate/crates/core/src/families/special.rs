use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, CanonicalForm};
use crate::cycles::{cycle_residues_through, find_cycle_mod, path_residues, Budget};
use crate::enumerate::{for_each_in_class, ClassConstraints};
use crate::error::{Error, Result};
use crate::graph::Graph;

/// Orders searched when deriving the catalog.
pub const SPECIAL_MAX_ORDER: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialEntry {
    /// `"T1"` … `"T5"`.
    pub label: String,
    pub form: CanonicalForm,
    pub graph: Graph,
}

/// The graphs with `δ ≥ 2`, at most three 2-vertices and no cycle of length
/// divisible by 4, found by exhaustive search.
///
/// Labels follow ascending `(order, edge count, canonical form)`. The label
/// `T1` must also be the only entry with a pair of 2-vertices whose path
/// lengths miss a residue mod 4; derivation fails otherwise. This ordering
/// is a convention of this crate and need not match other drawings of the
/// same five graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialCatalog {
    pub entries: Vec<SpecialEntry>,
    /// Constraints of the last order searched (all orders `3..=max_order`
    /// use the same constraints).
    pub constraints: ClassConstraints,
    pub max_order: usize,
    pub candidates_examined: u64,
}

/// On-disk form of one catalog entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogRecord {
    pub label: String,
    pub graph6: String,
    pub n: usize,
    pub edges: usize,
}

impl SpecialCatalog {
    pub fn contains(&self, form: &CanonicalForm) -> bool {
        self.entries.iter().any(|e| &e.form == form)
    }

    pub fn get(&self, label: &str) -> Option<&SpecialEntry> {
        self.entries.iter().find(|e| e.label == label)
    }

    pub fn records(&self) -> Vec<CatalogRecord> {
        self.entries
            .iter()
            .map(|e| CatalogRecord {
                label: e.label.clone(),
                graph6: e.graph.to_graph6(),
                n: e.graph.order(),
                edges: e.graph.edge_count(),
            })
            .collect()
    }

    /// Rebuild from records, checking that `n` and `edges` agree with the
    /// graphs. No other property is checked, so a tampered file loads.
    pub fn from_records(records: &[CatalogRecord]) -> Result<SpecialCatalog> {
        let mut entries = Vec::new();
        for r in records {
            let graph = Graph::from_graph6(&r.graph6)?;
            if graph.order() != r.n || graph.edge_count() != r.edges {
                return Err(Error::precondition(format!(
                    "catalog entry {} declares n={}, edges={} but the graph has n={}, edges={}",
                    r.label,
                    r.n,
                    r.edges,
                    graph.order(),
                    graph.edge_count()
                )));
            }
            entries.push(SpecialEntry {
                label: r.label.clone(),
                form: canonical_form(&graph),
                graph,
            });
        }
        Ok(SpecialCatalog {
            entries,
            constraints: ClassConstraints::few_two_vertices(SPECIAL_MAX_ORDER, 3),
            max_order: SPECIAL_MAX_ORDER,
            candidates_examined: 0,
        })
    }
}

/// Whether some pair of 2-vertices has `(u, v)`-path lengths missing a
/// residue mod 4.
fn has_incomplete_two_pair(g: &Graph, budget: Budget) -> Result<bool> {
    let twos = g.two_vertex_set().to_vec();
    for (i, &u) in twos.iter().enumerate() {
        for &v in &twos[i + 1..] {
            if !path_residues(g, u, v, 4, budget)?.is_full() {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// Search all connected graphs with `δ ≥ 2`, `|V₂| ≤ 3` and at most
/// [`SPECIAL_MAX_ORDER`] vertices for those without a cycle of length
/// divisible by 4.
pub fn derive_special_catalog(budget: Budget) -> Result<SpecialCatalog> {
    let mut found: Vec<Graph> = Vec::new();
    let mut examined = 0u64;
    let mut failure = None;
    for n in 3..=SPECIAL_MAX_ORDER {
        for_each_in_class(&ClassConstraints::few_two_vertices(n, 3), |g| {
            if failure.is_some() {
                return;
            }
            examined += 1;
            match find_cycle_mod(g, 4, 0, budget) {
                Ok(None) => found.push(g.clone()),
                Ok(Some(_)) => {}
                Err(e) => failure = Some(e.with_graph(g.to_graph6())),
            }
        })?;
    }
    if let Some(e) = failure {
        return Err(e);
    }
    let dump = |found: &[Graph]| {
        found
            .iter()
            .map(Graph::to_graph6)
            .collect::<Vec<_>>()
            .join(", ")
    };
    if found.len() != 5 {
        return Err(Error::Consistency(format!(
            "expected 5 graphs without a cycle of length 0 mod 4, found {}: [{}]",
            found.len(),
            dump(&found)
        )));
    }
    let mut keyed: Vec<(usize, usize, CanonicalForm, Graph)> = found
        .into_iter()
        .map(|g| (g.order(), g.edge_count(), canonical_form(&g), g))
        .collect();
    keyed.sort_by(|a, b| (a.0, a.1, &a.2).cmp(&(b.0, b.1, &b.2)));

    let mut incomplete = Vec::new();
    for (i, (.., g)) in keyed.iter().enumerate() {
        if has_incomplete_two_pair(g, budget)? {
            incomplete.push(i);
        }
    }
    if incomplete != [0] {
        return Err(Error::Consistency(format!(
            "the first catalog entry must be the only one with a 2-vertex pair missing a \
             residue mod 4; offending positions {incomplete:?} in [{}]",
            dump(&keyed.iter().map(|k| k.3.clone()).collect::<Vec<_>>())
        )));
    }
    let entries = keyed
        .into_iter()
        .enumerate()
        .map(|(i, (_, _, form, graph))| SpecialEntry {
            label: format!("T{}", i + 1),
            form,
            graph,
        })
        .collect();
    Ok(SpecialCatalog {
        entries,
        constraints: ClassConstraints::few_two_vertices(SPECIAL_MAX_ORDER, 3),
        max_order: SPECIAL_MAX_ORDER,
        candidates_examined: examined,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ObservationViolation {
    pub label: String,
    /// `"i"`, `"ii"`, `"iii"` or `"iv"`.
    pub clause: String,
    /// The vertex or vertex pair at fault.
    pub witness: Vec<usize>,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ObservationReport {
    pub checked_entries: usize,
    /// Labels of the entries that have a vertex outside `V₂` and in which
    /// every such vertex is joined to every 2-vertex by a path of length
    /// 2 mod 4.
    pub clause_iv_holders: Vec<String>,
    pub violations: Vec<ObservationViolation>,
}

impl ObservationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check on every catalog entry:
///
/// * (i) every 3-vertex lies on a cycle of length 1 mod 4;
/// * (ii) each 2-vertex `u` and other vertex `v` are adjacent or joined by
///   a path of length 0 mod 4;
/// * (iii) outside `T1`, paths between two 2-vertices realize every
///   residue mod 4;
/// * (iv) exactly two entries, `T4` and `T5`, have a path of length 2 mod 4
///   between every 2-vertex and every vertex that is not a 2-vertex
///   (`T1 = K₃` satisfies this vacuously and is not counted).
pub fn check_observation_special(cat: &SpecialCatalog, budget: Budget) -> Result<ObservationReport> {
    let mut violations = Vec::new();
    let mut holders = Vec::new();
    for e in &cat.entries {
        let g = &e.graph;
        let twos = g.two_vertex_set();
        let mut flag = |clause: &str, witness: Vec<usize>, detail: String| {
            violations.push(ObservationViolation {
                label: e.label.clone(),
                clause: clause.into(),
                witness,
                detail,
            })
        };
        for v in g.vertices_of_degree(3).iter() {
            let through = cycle_residues_through(g, v, 4, budget)?;
            if !through.contains(1) {
                flag("i", vec![v], format!("cycle lengths through {v} are {through}"));
            }
        }
        for u in twos.iter() {
            for v in (0..g.order()).filter(|&v| v != u) {
                if !g.has_edge(u, v) && !path_residues(g, u, v, 4, budget)?.contains(0) {
                    flag("ii", vec![u, v], format!("no ({u}, {v})-path of length 0 mod 4"));
                }
            }
        }
        if e.label != "T1" {
            let list = twos.to_vec();
            for (i, &u) in list.iter().enumerate() {
                for &v in &list[i + 1..] {
                    let res = path_residues(g, u, v, 4, budget)?;
                    if !res.is_full() {
                        flag("iii", vec![u, v], format!("({u}, {v})-path lengths are {res}"));
                    }
                }
            }
        }
        let mut iv = twos.len() < g.order();
        'outer: for u in twos.iter() {
            for v in (0..g.order()).filter(|&v| !twos.contains(v)) {
                if !path_residues(g, u, v, 4, budget)?.contains(2) {
                    iv = false;
                    break 'outer;
                }
            }
        }
        if iv {
            holders.push(e.label.clone());
        }
    }
    if holders != ["T4", "T5"] {
        violations.push(ObservationViolation {
            label: holders.join(","),
            clause: "iv".into(),
            witness: Vec::new(),
            detail: format!("clause (iv) holds for {holders:?}, expected exactly T4 and T5"),
        });
    }
    Ok(ObservationReport {
        checked_entries: cat.entries.len(),
        clause_iv_holders: holders,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::named;

    #[test]
    fn catalog_shape() {
        let cat = derive_special_catalog(Budget::DEFAULT).unwrap();
        assert_eq!(cat.entries.len(), 5);
        assert_eq!(cat.entries[0].form, canonical_form(&named::complete(3)));
        for e in &cat.entries {
            assert!(e.graph.order() <= SPECIAL_MAX_ORDER);
            assert_eq!(e.graph.two_vertex_set().len(), 3, "{}", e.label);
        }
        let report = check_observation_special(&cat, Budget::DEFAULT).unwrap();
        assert!(report.is_ok(), "{report:?}");
    }

    #[test]
    fn records_round_trip() {
        let cat = derive_special_catalog(Budget::DEFAULT).unwrap();
        let json = serde_json::to_string(&cat.records()).unwrap();
        let back: Vec<CatalogRecord> = serde_json::from_str(&json).unwrap();
        let loaded = SpecialCatalog::from_records(&back).unwrap();
        assert_eq!(loaded.entries, cat.entries);
    }
}
