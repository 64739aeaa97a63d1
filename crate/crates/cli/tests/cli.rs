use std::io::Write;
use std::process::{Command, Output, Stdio};

use modcycle::families::k23;
use modcycle::named;
use serde_json::Value;

fn run(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_modcycle"))
        .args(args)
        .env_remove("MODCYCLE_BUDGET")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary starts");
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json_lines(o: &Output) -> Vec<Value> {
    String::from_utf8_lossy(&o.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).expect("JSON line"))
        .collect()
}

#[test]
fn k23_has_no_zero_mod_3_cycle() {
    let o = run(&["cycle", "--k", "3", "--r", "0"], &format!("{}\n", k23().to_graph6()));
    assert_eq!(code(&o), 0);
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 1);
    assert_eq!(lines[0]["certificate"], Value::Null);
}

#[test]
fn cycle_certificate_is_reported() {
    let o = run(&["cycle", "--k", "4", "--r", "0"], &format!("{}\n", named::complete(4).to_graph6()));
    assert_eq!(code(&o), 0);
    let cert = &json_lines(&o)[0]["certificate"];
    assert_eq!(cert["vertices"].as_array().unwrap().len(), 4);
}

#[test]
fn recognize_c6_is_refuted() {
    let o = run(&["recognize"], &format!("{}\n", named::cycle(6).to_graph6()));
    assert_eq!(code(&o), 1);
    let rec = &json_lines(&o)[0];
    assert_eq!(rec["verdict"], "not_exceptional");
    assert_eq!(rec["reason"], "two_vertex_count");
    assert_eq!(rec["witness"]["vertices"].as_array().unwrap().len(), 6);
}

#[test]
fn recognize_k23_is_accepted() {
    let o = run(&["recognize"], &format!("{}\n", k23().to_graph6()));
    assert_eq!(code(&o), 0);
    assert_eq!(json_lines(&o)[0]["verdict"], "exceptional");
}

#[test]
fn adjacency_list_input() {
    let o = run(
        &["recognize", "--format", "adj"],
        "# K2,3\n5\n0 2\n0 3\n0 4\n1 2\n1 3\n1 4\n",
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn malformed_graph6_reports_offset() {
    let o = run(&["cycle", "--k", "3", "--r", "0"], "Bw\nD\u{1}x\n");
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("byte 4 (line 2)"), "{err}");
}

#[test]
fn derive_special_writes_five_entries() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("catalog.json");
    let o = run(&["derive-special", "--out", path.to_str().unwrap()], "");
    assert_eq!(code(&o), 0);
    let cat: Vec<Value> = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(cat.len(), 5);
    let labels: Vec<_> = cat.iter().map(|e| e["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["T1", "T2", "T3", "T4", "T5"]);

    // The saved catalog drives the mod 4 campaign.
    let o = run(
        &["verify", "mod4", "--max-n", "6", "--catalog", path.to_str().unwrap(), "--no-timing"],
        "",
    );
    assert_eq!(code(&o), 0);
}

#[test]
fn injected_faults_fail_with_exit_1() {
    let o = run(&["verify", "mod3", "--max-n", "6", "--inject-fault", "reject-k23"], "");
    assert_eq!(code(&o), 1);
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["verdict"], "fail");
    let witness = report["violations"][0]["graph6"].as_str().unwrap();
    assert!(modcycle::canon::is_isomorphic(
        &modcycle::Graph::from_graph6(witness).unwrap(),
        &k23()
    ));

    let o = run(&["verify", "mod4", "--max-n", "5", "--inject-fault", "drop-special:T1"], "");
    assert_eq!(code(&o), 1);
}

#[test]
fn reports_are_byte_identical_without_timing() {
    let args = ["verify", "planar", "--max-n", "7", "--no-timing"];
    let a = run(&args, "");
    let b = run(&[&args[..], &["--threads", "1"]].concat(), "");
    assert_eq!(code(&a), 0);
    assert_eq!(code(&b), 0);
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        v["parameters"].as_object_mut().unwrap().remove("threads");
        v
    };
    assert_eq!(strip(&a), strip(&b));
    assert_eq!(a.stdout, run(&args, "").stdout);
}

#[test]
fn budget_exhaustion_exits_3() {
    let o = run(&["verify", "mod3", "--max-n", "5", "--budget", "1"], "");
    assert_eq!(code(&o), 3);
}

#[test]
fn flag_beats_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.conf");
    std::fs::write(&cfg, "budget = 1\ntiming = false\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    assert_eq!(code(&run(&["verify", "mod3", "--max-n", "5", "--config", cfg], "")), 3);
    let o = run(&["verify", "mod3", "--max-n", "5", "--config", cfg, "--budget", "100000"], "");
    assert_eq!(code(&o), 0);
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["elapsed_ms"], 0);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&run(&["verify", "mod3", "--max-n", "11"], "")), 2);
    assert_eq!(code(&run(&["verify", "dean", "--k", "2", "--max-n", "5"], "")), 2);
    assert_eq!(code(&run(&["no-such-command"], "")), 2);
    assert_eq!(code(&run(&["residues", "--k", "3", "--x", "0", "--y", "9"], "Bw\n")), 2);
}

#[test]
fn gen_exceptional_with_lemma_check() {
    let o = run(&["gen-exceptional", "--max-n", "10", "--check-lemma"], "");
    assert_eq!(code(&o), 0);
    let family: Vec<Value> = serde_json::from_slice(&o.stdout).unwrap();
    let orders: Vec<u64> = family.iter().map(|e| e["n"].as_u64().unwrap()).collect();
    assert_eq!(orders.first(), Some(&5));
    assert!(orders.iter().all(|n| [5, 7, 8, 10].contains(n)));
    assert!(family.iter().all(|e| e["lemma"]["violations"].as_array().unwrap().is_empty()));
}

#[test]
fn enumerate_count_and_stream_agree() {
    let count = run(&["enumerate", "--n", "6", "--connected", "--count"], "");
    assert_eq!(String::from_utf8_lossy(&count.stdout).trim(), "112");
    let list = run(&["enumerate", "--n", "6", "--connected"], "");
    assert_eq!(String::from_utf8_lossy(&list.stdout).lines().count(), 112);
}

#[test]
fn structure_summary() {
    let o = run(&["check-structure"], &format!("{}\n", named::petersen().to_graph6()));
    assert_eq!(code(&o), 0);
    let s = &json_lines(&o)[0];
    assert_eq!(s["planar"], false);
    assert_eq!(s["two_connected"], true);
    assert_eq!(s["essentially_3_connected"], true);
}
