//! Acceptance criteria. Each test prints one `criterion N: PASS|FAIL` line
//! to the process stdout (not captured by the harness) and then asserts.

mod common;

use std::collections::BTreeSet;
use std::io::Write;
use std::time::Instant;

use modcycle::campaign::{
    dean_scan, verify_corollaries, verify_gauthier, verify_mod3_characterization,
    verify_mod4_characterization, verify_nonplanar_mod4, CampaignOptions, VerificationReport,
};
use modcycle::canon::{canonical_form, is_isomorphic};
use modcycle::connectivity::max_disjoint_paths;
use modcycle::cycles::{cycle_length_residues, find_cycle_mod, path_residues, Budget};
use modcycle::enumerate::{count_class, enumerate_class, naive_class, ClassConstraints};
use modcycle::families::{
    check_lemma_residues, derive_special_catalog, generate_exceptional, recognize_exceptional,
    Recognition,
};
use modcycle::planarity::{has_kuratowski_subdivision, is_planar};
use modcycle::{Graph, VertexSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(id: &str, name: &str, start: Instant, failures: &[String]) {
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(
        out,
        "criterion {id}: {verdict} - {name} ({:.1}s)",
        start.elapsed().as_secs_f64()
    )
    .unwrap();
    for f in failures.iter().take(10) {
        writeln!(out, "    {f}").unwrap();
    }
    assert!(failures.is_empty(), "criterion {id} failed: {failures:?}");
}

fn opts() -> CampaignOptions {
    CampaignOptions::new()
}

fn campaign_failures(r: &VerificationReport) -> Vec<String> {
    let mut out: Vec<String> = r
        .violations
        .iter()
        .map(|v| format!("{}: {}", v.graph6, v.detail))
        .collect();
    if !r.passed() && out.is_empty() {
        out.push(format!("verdict {:?}", r.verdict));
    }
    out
}

fn examined_matches_count(r: &VerificationReport, class: impl Fn(usize) -> ClassConstraints) -> Vec<String> {
    let mut out = Vec::new();
    for o in &r.per_order {
        let want = count_class(&class(o.n)).unwrap();
        if want != o.graphs_examined {
            out.push(format!("n={}: examined {} but the class has {want}", o.n, o.graphs_examined));
        }
    }
    out
}

fn has_zero_mod(g: &Graph, k: usize) -> bool {
    common::cycle_lengths(g).iter().any(|l| l % k == 0)
}

/// The graphs the campaign recognized are exactly the generated ones.
fn same_as_generated(r: &VerificationReport, max_n: usize) -> Vec<String> {
    let seen: BTreeSet<String> = r.obstructions.iter().cloned().collect();
    let generated: BTreeSet<String> = generate_exceptional(max_n)
        .unwrap()
        .iter()
        .map(|e| e.form.to_graph().to_graph6())
        .collect();
    if seen == generated && r.obstruction_count as usize == generated.len() {
        Vec::new()
    } else {
        vec![format!("recognized {seen:?}, generated {generated:?}")]
    }
}

#[test]
fn criterion_01_special_catalog() {
    let start = Instant::now();
    let cat = derive_special_catalog(Budget::DEFAULT).unwrap();
    let mut fails = Vec::new();
    if cat.entries.len() != 5 {
        fails.push(format!("{} entries", cat.entries.len()));
    }
    for (i, a) in cat.entries.iter().enumerate() {
        let g = &a.graph;
        for b in &cat.entries[i + 1..] {
            if is_isomorphic(g, &b.graph) {
                fails.push(format!("{} and {} are isomorphic", a.label, b.label));
            }
        }
        if g.order() > 8 || g.min_degree().unwrap() < 2 || g.two_vertex_set().len() != 3 {
            fails.push(format!("{} has the wrong shape: {}", a.label, g.to_graph6()));
        }
        if has_zero_mod(g, 4) {
            fails.push(format!("{} has a cycle of length 0 mod 4", a.label));
        }
    }
    report("1", "special catalog has exactly five graphs", start, &fails);
}

#[test]
fn criterion_02_mod3_characterization() {
    let start = Instant::now();
    let r = verify_mod3_characterization(9, &opts()).unwrap();
    let mut fails = campaign_failures(&r);
    fails.extend(examined_matches_count(&r, |n| ClassConstraints::few_two_vertices(n, 3)));
    if r.obstruction_orders() != [5, 7, 8] {
        fails.push(format!("exceptional orders {:?}", r.obstruction_orders()));
    }
    fails.extend(same_as_generated(&r, 9));
    report("2", "mod 3 characterization, n <= 9", start, &fails);
}

#[test]
fn criterion_02_stretch_mod3_characterization_order_10() {
    let start = Instant::now();
    let r = verify_mod3_characterization(10, &opts()).unwrap();
    let mut fails = campaign_failures(&r);
    if r.obstruction_orders() != [5, 7, 8, 10] {
        fails.push(format!("exceptional orders {:?}", r.obstruction_orders()));
    }
    fails.extend(same_as_generated(&r, 10));
    report("2 (stretch)", "mod 3 characterization, n <= 10", start, &fails);
}

#[test]
fn criterion_03_mod4_characterization() {
    let start = Instant::now();
    let r = verify_mod4_characterization(9, &opts()).unwrap();
    let mut fails = campaign_failures(&r);
    fails.extend(examined_matches_count(&r, |n| ClassConstraints::few_two_vertices(n, 3)));
    if r.obstruction_count != 5 {
        fails.push(format!("{} graphs without a 0 mod 4 cycle", r.obstruction_count));
    }
    match r.per_order.iter().find(|o| o.n == 9) {
        Some(o) if o.obstructions == 0 => {}
        other => fails.push(format!("order 9 breakdown {other:?}")),
    }
    report("3", "mod 4 characterization, n <= 9", start, &fails);
}

#[test]
fn criterion_04_corollaries() {
    let start = Instant::now();
    let r = verify_corollaries(9, &opts()).unwrap();
    let mut fails = campaign_failures(&r);
    fails.extend(examined_matches_count(&r, |n| ClassConstraints::few_two_vertices(n, 2)));
    report("4", "at most two 2-vertices forces 0 mod 3 and 0 mod 4 cycles, n <= 9", start, &fails);
}

#[test]
fn criterion_05_lemma_residues() {
    let start = Instant::now();
    let mut fails = Vec::new();
    let family = generate_exceptional(14).unwrap();
    for e in &family {
        let rep = check_lemma_residues(&e.graph, &e.trace, Budget::DEFAULT).unwrap();
        fails.extend(rep.violations.iter().map(|v| format!("{}: {v}", e.graph.to_graph6())));
        // Second route: unpruned path enumeration.
        let lengths = common::path_lengths(&e.graph, rep.x, rep.y);
        if common::residues(&lengths, 3) != rep.xy_residues.members() {
            fails.push(format!("{}: pruned and unpruned residues differ", e.graph.to_graph6()));
        }
    }
    let name = format!("path residues of {} exceptional graphs, n <= 14", family.len());
    report("5", &name, start, &fails);
}

#[test]
fn criterion_06_exceptional_graphs_avoid_0_mod_3() {
    let start = Instant::now();
    let mut fails = Vec::new();
    let family = generate_exceptional(16).unwrap();
    for e in &family {
        if let Some(c) = find_cycle_mod(&e.graph, 3, 0, Budget::DEFAULT).unwrap() {
            fails.push(format!("{}: cycle {:?}", e.graph.to_graph6(), c.vertices));
        }
    }
    let name = format!("{} exceptional graphs with n <= 16 lack 0 mod 3 cycles", family.len());
    report("6", &name, start, &fails);
}

#[test]
fn criterion_07_recognizer_round_trip() {
    let start = Instant::now();
    let mut fails = Vec::new();
    let family = generate_exceptional(16).unwrap();
    for e in &family {
        match recognize_exceptional(&e.graph) {
            Recognition::Exceptional(r) => {
                if let Err(err) = r.verify(&e.graph) {
                    fails.push(format!("{}: {err}", e.graph.to_graph6()));
                }
            }
            Recognition::NotExceptional(r) => {
                fails.push(format!("{} refuted: {r:?}", e.graph.to_graph6()))
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut sampled = 0;
    while sampled < 1000 {
        let n = rng.gen_range(5..=10);
        let p = rng.gen_range(0.35..0.7);
        let g = common::random_graph(&mut rng, n, p);
        if g.min_degree().unwrap() < 2 || g.two_vertex_set().len() > 3 || !g.is_connected() {
            continue;
        }
        if find_cycle_mod(&g, 3, 0, Budget::DEFAULT).unwrap().is_none() {
            continue;
        }
        sampled += 1;
        if recognize_exceptional(&g).is_exceptional() {
            fails.push(format!("{} accepted despite a 0 mod 3 cycle", g.to_graph6()));
        }
    }
    let name = format!(
        "recognizer accepts {} generated graphs and rejects 1000 with 0 mod 3 cycles",
        family.len()
    );
    report("7", &name, start, &fails);
}

#[test]
fn criterion_08_menger() {
    let start = Instant::now();
    let mut fails = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=8);
        let p = rng.gen_range(0.1..0.8);
        let g = common::random_graph(&mut rng, n, p);
        let all = (1u64 << n) - 1;
        let mut nonempty = || loop {
            let s = rng.gen::<u64>() & all;
            if s != 0 {
                break s;
            }
        };
        let (xs, ys) = (nonempty(), nonempty());
        let got = max_disjoint_paths(&g, VertexSet::from_bits(xs), VertexSet::from_bits(ys)).unwrap();
        let want = common::min_separator(&g, xs, ys);
        if got.count != want {
            fails.push(format!("{} X={xs:b} Y={ys:b}: {} paths, separator {want}", g.to_graph6(), got.count));
        }
    }
    report("8", "1000 random disjoint-path counts equal minimum separators", start, &fails);
}

#[test]
fn criterion_09_gauthier() {
    let start = Instant::now();
    let r = verify_gauthier(8, &opts()).unwrap();
    report("9", "2-connected graphs without 0 mod 3 cycles have twins or adjacent 2-vertices, n <= 8", start, &campaign_failures(&r));
}

#[test]
fn criterion_10_nonplanar_graphs_have_0_mod_4_cycles() {
    let start = Instant::now();
    let r = verify_nonplanar_mod4(9, &opts()).unwrap();
    let mut fails = campaign_failures(&r);
    // Second route on the sampled survivors and the catalog.
    let mut survivors: Vec<Graph> = r
        .obstructions
        .iter()
        .map(|s| Graph::from_graph6(s).unwrap())
        .collect();
    survivors.extend(derive_special_catalog(Budget::DEFAULT).unwrap().entries.into_iter().map(|e| e.graph));
    for g in &survivors {
        if has_kuratowski_subdivision(g) || !is_planar(g).unwrap() {
            fails.push(format!("{} is not planar", g.to_graph6()));
        }
    }
    report("10", "graphs without 0 mod 4 cycles are planar, n <= 9", start, &fails);
}

#[test]
fn criterion_11_oracle_agreement() {
    let start = Instant::now();
    let mut fails = Vec::new();
    for n in 1..=7 {
        for g in enumerate_class(&ClassConstraints::all(n)).unwrap() {
            let lengths = common::cycle_lengths(&g);
            for k in 2..=6u32 {
                let got = cycle_length_residues(&g, k, Budget::DEFAULT).unwrap().members();
                if got != common::residues(&lengths, k as usize) {
                    fails.push(format!("{} cycle residues mod {k}", g.to_graph6()));
                }
            }
            for x in 0..n {
                for y in x + 1..n {
                    let lengths = common::path_lengths(&g, x, y);
                    for k in [3u32, 4] {
                        let got = path_residues(&g, x, y, k, Budget::DEFAULT).unwrap().members();
                        if got != common::residues(&lengths, k as usize) {
                            fails.push(format!("{} ({x},{y}) path residues mod {k}", g.to_graph6()));
                        }
                    }
                }
            }
        }
    }
    let classes = [
        ClassConstraints::all(6),
        ClassConstraints::connected(7),
        ClassConstraints::few_two_vertices(7, 3),
        ClassConstraints::few_two_vertices(7, 2),
        ClassConstraints { min_degree_global: Some(3), ..ClassConstraints::connected(7) },
    ];
    for c in classes {
        let want = naive_class(&c).unwrap();
        let got: BTreeSet<_> = enumerate_class(&c).unwrap().iter().map(canonical_form).collect();
        if got.len() != want.len() || !want.iter().all(|f| got.contains(f)) {
            fails.push(format!("{c:?}: {} classes, oracle {}", got.len(), want.len()));
        }
    }
    report("11", "cycle, path and enumeration results match unpruned oracles, n <= 7", start, &fails);
}

#[test]
fn criterion_12_dean_scan() {
    let start = Instant::now();
    let mut fails = Vec::new();
    for k in [3, 4] {
        let r = dean_scan(k, 9, &opts()).unwrap();
        fails.extend(campaign_failures(&r).into_iter().map(|f| format!("k={k}: {f}")));
        fails.extend(examined_matches_count(&r, |n| ClassConstraints {
            min_degree_global: Some(k as usize),
            ..ClassConstraints::connected(n)
        }));
    }
    report("12", "minimum degree k forces a 0 mod k cycle, k in {3, 4}, n <= 9", start, &fails);
}
