//! Exhaustive verification campaigns over enumerated graph classes.
//!
//! Each campaign walks one class per order, applies a pure per-graph check
//! in parallel and merges the partial results in a fixed order. Violations
//! and obstruction samples are sorted by canonical form and capped, so the
//! report depends only on the inputs (and on wall-clock time, unless timing
//! is switched off).

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, CanonicalForm};
use crate::connectivity::is_2_connected;
use crate::cycles::{find_cycle_mod, Budget};
use crate::enumerate::{fold_class, ClassConstraints};
use crate::error::{Error, Result};
use crate::families::{
    derive_special_catalog, k23, recognize_exceptional, Recognition, SpecialCatalog,
};
use crate::graph::Graph;
use crate::planarity::is_planar;

/// Most violations (and obstruction samples) kept in a report.
pub const VIOLATION_CAP: usize = 100;

/// Largest order accepted by the campaigns.
pub const CAMPAIGN_MAX_ORDER: usize = 10;

/// Deliberate corruptions used to show that a campaign can fail.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Fault {
    /// The recognizer refuses `K₂,₃`.
    RejectK23,
    /// The special catalog loses the entry with this label.
    DropSpecial(String),
}

impl std::str::FromStr for Fault {
    type Err = Error;

    fn from_str(s: &str) -> Result<Fault> {
        match s.split_once(':') {
            None if s == "reject-k23" => Ok(Fault::RejectK23),
            Some(("drop-special", label)) => Ok(Fault::DropSpecial(label.to_string())),
            _ => Err(Error::precondition(format!(
                "unknown fault {s:?} (expected reject-k23 or drop-special:<label>)"
            ))),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct CampaignOptions {
    pub budget: Budget,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
    /// Record `elapsed_ms`; when false it is reported as 0.
    pub timing: bool,
    pub fault: Option<Fault>,
}

impl CampaignOptions {
    pub fn new() -> Self {
        CampaignOptions {
            timing: true,
            ..Default::default()
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub graph6: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderBreakdown {
    pub n: usize,
    pub graphs_examined: u64,
    pub violations: u64,
    pub obstructions: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CampaignParameters {
    pub max_n: usize,
    /// Modulus for the Dean scan.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k: Option<u32>,
    /// The class searched at each order (shown with `n = max_n`).
    pub constraints: ClassConstraints,
    pub budget: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub threads: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub fault: Option<Fault>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub campaign: String,
    pub parameters: CampaignParameters,
    pub verdict: Verdict,
    pub graphs_examined: u64,
    pub violation_count: u64,
    /// At most [`VIOLATION_CAP`] violations, sorted by canonical form.
    pub violations: Vec<Violation>,
    pub violations_truncated: bool,
    /// What counts as an obstruction in this campaign.
    pub obstruction_kind: String,
    pub obstruction_count: u64,
    /// graph6 of canonical representatives, sorted, at most [`VIOLATION_CAP`].
    pub obstructions: Vec<String>,
    pub per_order: Vec<OrderBreakdown>,
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Orders at which at least one obstruction was seen.
    pub fn obstruction_orders(&self) -> Vec<usize> {
        self.per_order
            .iter()
            .filter(|o| o.obstructions > 0)
            .map(|o| o.n)
            .collect()
    }
}

struct Check {
    violation: Option<String>,
    obstruction: bool,
}

impl Check {
    fn ok(obstruction: bool) -> Self {
        Check {
            violation: None,
            obstruction,
        }
    }
}

#[derive(Default)]
struct Partial {
    examined: u64,
    violation_count: u64,
    violations: Vec<(CanonicalForm, Violation)>,
    obstruction_count: u64,
    obstructions: Vec<CanonicalForm>,
    error: Option<Error>,
}

impl Partial {
    fn merge(mut self, other: Partial) -> Partial {
        self.examined += other.examined;
        self.violation_count += other.violation_count;
        self.obstruction_count += other.obstruction_count;
        self.violations.extend(other.violations);
        self.violations.sort_by(|a, b| a.0.cmp(&b.0));
        self.violations.truncate(VIOLATION_CAP);
        self.obstructions.extend(other.obstructions);
        self.obstructions.sort();
        self.obstructions.truncate(VIOLATION_CAP);
        if self.error.is_none() {
            self.error = other.error;
        }
        self
    }
}

struct Campaign<'a> {
    name: &'a str,
    obstruction_kind: &'a str,
    k: Option<u32>,
    /// Class template; `n` is overwritten per order.
    class: ClassConstraints,
    min_n: usize,
    max_n: usize,
}

impl Campaign<'_> {
    fn run<F>(&self, opts: &CampaignOptions, check: F) -> Result<VerificationReport>
    where
        F: Fn(&Graph) -> Result<Check> + Sync + Send,
    {
        if self.max_n > CAMPAIGN_MAX_ORDER {
            return Err(Error::precondition(format!(
                "campaign order is limited to {CAMPAIGN_MAX_ORDER}, got {}",
                self.max_n
            )));
        }
        let start = Instant::now();
        let body = || -> Result<VerificationReport> {
            let mut per_order = Vec::new();
            let mut total = Partial::default();
            for n in self.min_n..=self.max_n {
                let part = fold_class(
                    &self.class.with_order(n),
                    Partial::default,
                    |mut acc, g| {
                        if acc.error.is_some() {
                            return acc;
                        }
                        acc.examined += 1;
                        match check(g) {
                            Err(e) => acc.error = Some(e.with_graph(g.to_graph6())),
                            Ok(c) => {
                                if c.obstruction {
                                    acc.obstruction_count += 1;
                                    if acc.obstructions.len() < VIOLATION_CAP {
                                        acc.obstructions.push(canonical_form(g));
                                    }
                                }
                                if let Some(detail) = c.violation {
                                    acc.violation_count += 1;
                                    let graph6 = g.to_graph6();
                                    acc.violations.push((canonical_form(g), Violation { graph6, detail }));
                                    if acc.violations.len() > 4 * VIOLATION_CAP {
                                        acc = acc.merge(Partial::default());
                                    }
                                }
                            }
                        }
                        acc
                    },
                    Partial::merge,
                )?;
                if let Some(e) = part.error {
                    return Err(e);
                }
                per_order.push(OrderBreakdown {
                    n,
                    graphs_examined: part.examined,
                    violations: part.violation_count,
                    obstructions: part.obstruction_count,
                });
                total = total.merge(part);
            }
            let truncated = total.violation_count as usize > total.violations.len();
            Ok(VerificationReport {
                campaign: self.name.to_string(),
                parameters: CampaignParameters {
                    max_n: self.max_n,
                    k: self.k,
                    constraints: self.class.with_order(self.max_n),
                    budget: opts.budget.0,
                    threads: opts.threads,
                    fault: opts.fault.clone(),
                },
                verdict: if total.violation_count == 0 {
                    Verdict::Pass
                } else {
                    Verdict::Fail
                },
                graphs_examined: total.examined,
                violation_count: total.violation_count,
                violations: total.violations.into_iter().map(|(_, v)| v).collect(),
                violations_truncated: truncated,
                obstruction_kind: self.obstruction_kind.to_string(),
                obstruction_count: total.obstruction_count,
                obstructions: total
                    .obstructions
                    .iter()
                    .map(|f| f.to_graph().to_graph6())
                    .collect(),
                per_order,
                elapsed_ms: 0,
            })
        };
        let mut report = match opts.threads {
            None => body()?,
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| Error::precondition(format!("cannot start {t} threads: {e}")))?
                .install(body)?,
        };
        if opts.timing {
            report.elapsed_ms = start.elapsed().as_millis() as u64;
        }
        Ok(report)
    }
}

fn recognize(g: &Graph, fault: Option<&Fault>) -> Recognition {
    if fault == Some(&Fault::RejectK23) && g.order() == 5 && canonical_form(g) == canonical_form(&k23()) {
        return Recognition::NotExceptional(crate::families::Refutation::BaseMismatch);
    }
    recognize_exceptional(g)
}

/// Connected graphs with `δ ≥ 2`, `|V₂| ≤ 3`, `n ≤ max_n`: a graph has a
/// cycle of length 0 mod 3 exactly when the recognizer rejects it, and
/// every accepted graph comes with a trace that replays to it.
pub fn verify_mod3_characterization(max_n: usize, opts: &CampaignOptions) -> Result<VerificationReport> {
    let campaign = Campaign {
        name: "mod3",
        obstruction_kind: "exceptional",
        k: None,
        class: ClassConstraints::few_two_vertices(3, 3),
        min_n: 3,
        max_n,
    };
    campaign.run(opts, |g| {
        let cycle = find_cycle_mod(g, 3, 0, opts.budget)?;
        let rec = recognize(g, opts.fault.as_ref());
        let violation = match (&cycle, &rec) {
            (Some(c), Recognition::Exceptional(_)) => Some(format!(
                "recognized as exceptional but has the cycle {:?} of length {}",
                c.vertices,
                c.len()
            )),
            (None, Recognition::NotExceptional(r)) => Some(format!(
                "no cycle of length 0 mod 3 but refuted: {}",
                serde_json::to_string(r).expect("refutation serializes")
            )),
            (None, Recognition::Exceptional(r)) => r
                .verify(g)
                .err()
                .map(|e| format!("trace does not replay: {e}")),
            (Some(_), Recognition::NotExceptional(_)) => None,
        };
        Ok(Check {
            violation,
            obstruction: rec.is_exceptional(),
        })
    })
}

/// Connected graphs with `δ ≥ 2`, `|V₂| ≤ 3`, `n ≤ max_n`: a graph lacks a
/// cycle of length 0 mod 4 exactly when it is in the derived catalog.
pub fn verify_mod4_characterization(max_n: usize, opts: &CampaignOptions) -> Result<VerificationReport> {
    let mut catalog = derive_special_catalog(opts.budget)?;
    if let Some(Fault::DropSpecial(label)) = &opts.fault {
        catalog.entries.retain(|e| &e.label != label);
    }
    verify_mod4_with_catalog(max_n, &catalog, opts)
}

pub fn verify_mod4_with_catalog(
    max_n: usize,
    catalog: &SpecialCatalog,
    opts: &CampaignOptions,
) -> Result<VerificationReport> {
    let campaign = Campaign {
        name: "mod4",
        obstruction_kind: "no cycle of length 0 mod 4",
        k: None,
        class: ClassConstraints::few_two_vertices(3, 3),
        min_n: 3,
        max_n,
    };
    campaign.run(opts, |g| {
        let cycle = find_cycle_mod(g, 4, 0, opts.budget)?;
        let listed = catalog.contains(&canonical_form(g));
        let violation = match (&cycle, listed) {
            (None, false) => Some("no cycle of length 0 mod 4 and not in the catalog".to_string()),
            (Some(c), true) => Some(format!(
                "in the catalog but has the cycle {:?} of length {}",
                c.vertices,
                c.len()
            )),
            _ => None,
        };
        Ok(Check {
            violation,
            obstruction: cycle.is_none(),
        })
    })
}

/// Connected graphs with `δ ≥ 2`, `|V₂| ≤ 2`: cycles of length 0 mod 3 and
/// 0 mod 4 both exist.
pub fn verify_corollaries(max_n: usize, opts: &CampaignOptions) -> Result<VerificationReport> {
    let campaign = Campaign {
        name: "corollaries",
        obstruction_kind: "missing a cycle of length 0 mod 3 or 0 mod 4",
        k: None,
        class: ClassConstraints::few_two_vertices(3, 2),
        min_n: 3,
        max_n,
    };
    campaign.run(opts, |g| {
        let mut missing = Vec::new();
        for k in [3, 4] {
            if find_cycle_mod(g, k, 0, opts.budget)?.is_none() {
                missing.push(format!("no cycle of length 0 mod {k}"));
            }
        }
        let bad = !missing.is_empty();
        Ok(Check {
            violation: bad.then(|| missing.join("; ")),
            obstruction: bad,
        })
    })
}

/// 2-connected graphs without a cycle of length 0 mod 3 have 2-twins or
/// two adjacent 2-vertices. The class walked is connected graphs with
/// `δ ≥ 2`; those that are not 2-connected pass trivially.
pub fn verify_gauthier(max_n: usize, opts: &CampaignOptions) -> Result<VerificationReport> {
    let campaign = Campaign {
        name: "gauthier",
        obstruction_kind: "2-connected without a cycle of length 0 mod 3",
        k: None,
        class: ClassConstraints {
            min_degree: 2,
            ..ClassConstraints::connected(3)
        },
        min_n: 3,
        max_n,
    };
    campaign.run(opts, |g| {
        if !is_2_connected(g) || find_cycle_mod(g, 3, 0, opts.budget)?.is_some() {
            return Ok(Check::ok(false));
        }
        let ok = !g.two_twins().is_empty() || !g.adjacent_two_vertices().is_empty();
        Ok(Check {
            violation: (!ok).then(|| "neither 2-twins nor adjacent 2-vertices".to_string()),
            obstruction: true,
        })
    })
}

/// Connected graphs without a cycle of length 0 mod 4 are planar.
pub fn verify_nonplanar_mod4(max_n: usize, opts: &CampaignOptions) -> Result<VerificationReport> {
    let campaign = Campaign {
        name: "planar",
        obstruction_kind: "no cycle of length 0 mod 4",
        k: None,
        class: ClassConstraints::connected(1),
        min_n: 1,
        max_n,
    };
    campaign.run(opts, |g| {
        if find_cycle_mod(g, 4, 0, opts.budget)?.is_some() {
            return Ok(Check::ok(false));
        }
        Ok(Check {
            violation: (!is_planar(g)?).then(|| "non-planar without a cycle of length 0 mod 4".to_string()),
            obstruction: true,
        })
    })
}

/// Connected graphs with `δ ≥ k` have a cycle of length 0 mod `k`.
pub fn dean_scan(k: u32, max_n: usize, opts: &CampaignOptions) -> Result<VerificationReport> {
    if !(3..=6).contains(&k) {
        return Err(Error::precondition(format!("Dean scans take 3 <= k <= 6, got {k}")));
    }
    let campaign = Campaign {
        name: "dean",
        obstruction_kind: "no cycle of length 0 mod k",
        k: Some(k),
        class: ClassConstraints {
            min_degree_global: Some(k as usize),
            ..ClassConstraints::connected(1)
        },
        min_n: k as usize + 1,
        max_n,
    };
    campaign.run(opts, |g| {
        let missing = find_cycle_mod(g, k, 0, opts.budget)?.is_none();
        Ok(Check {
            violation: missing.then(|| format!("minimum degree {k} but no cycle of length 0 mod {k}")),
            obstruction: missing,
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enumerate::count_class;

    fn quiet() -> CampaignOptions {
        CampaignOptions {
            timing: false,
            ..CampaignOptions::new()
        }
    }

    #[test]
    fn mod3_small() {
        let r = verify_mod3_characterization(6, &quiet()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert_eq!(r.obstruction_count, 1);
        assert_eq!(r.obstructions, vec![canonical_form(&k23()).to_graph().to_graph6()]);
        let examined: u64 = (3..=6)
            .map(|n| count_class(&ClassConstraints::few_two_vertices(n, 3)).unwrap())
            .sum();
        assert_eq!(r.graphs_examined, examined);
    }

    #[test]
    fn injected_faults_fail() {
        let opts = CampaignOptions {
            fault: Some(Fault::RejectK23),
            ..quiet()
        };
        let r = verify_mod3_characterization(5, &opts).unwrap();
        assert!(!r.passed());
        assert_eq!(r.violations.len(), 1);
        assert_eq!(
            canonical_form(&Graph::from_graph6(&r.violations[0].graph6).unwrap()),
            canonical_form(&k23())
        );
        let opts = CampaignOptions {
            fault: Some("drop-special:T1".parse().unwrap()),
            ..quiet()
        };
        let r = verify_mod4_characterization(4, &opts).unwrap();
        assert_eq!(r.violation_count, 1);
    }

    #[test]
    fn thread_count_does_not_change_reports() {
        let one = CampaignOptions {
            threads: Some(1),
            ..quiet()
        };
        let four = CampaignOptions {
            threads: Some(4),
            ..quiet()
        };
        let a = verify_gauthier(7, &one).unwrap();
        let mut b = verify_gauthier(7, &four).unwrap();
        b.parameters.threads = Some(1);
        assert_eq!(a, b);
    }

    #[test]
    fn bounds() {
        assert!(dean_scan(2, 5, &quiet()).is_err());
        assert!(verify_corollaries(11, &quiet()).is_err());
        assert!("nonsense".parse::<Fault>().is_err());
    }
}
