use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn qcomm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcomm"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(args: &[&str]) -> Value {
    let out = qcomm(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    // one document, nothing else on stdout
    serde_json::from_slice(&out.stdout).expect("a single JSON document")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qcomm-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn entropy_table_for_ghz() {
    let out = qcomm(&["entropy", "--state", "GHZ4"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let values: Vec<&str> = text
        .lines()
        .skip(2)
        .filter_map(|l| l.split_whitespace().nth(2))
        .collect();
    assert_eq!(values, vec!["1.0000"; 7]);
}

#[test]
fn entropy_json_matches_table() {
    let doc = json(&["entropy", "--state", "S1", "--json"]);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    assert_eq!(rows[0]["side_a"], serde_json::json!([1]));
    assert_eq!(rows[0]["side_b"], serde_json::json!([2, 3, 4]));
    let text = stdout(&qcomm(&["entropy", "--state", "S1"]));
    for (row, line) in rows.iter().zip(text.lines().skip(2)) {
        let printed: f64 = line.split_whitespace().nth(2).unwrap().parse().unwrap();
        let exact = row["entropy_bits"].as_f64().unwrap();
        assert!((printed - exact).abs() <= 5e-5, "{printed} vs {exact}");
    }
}

#[test]
fn teleport_check_reports_infeasible_w() {
    let out = qcomm(&["teleport", "check", "--state", "W4", "--bob", "4", "--m", "2"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().next(), Some("infeasible, S=0.8113, need 1.0000"));
    let strict = qcomm(&[
        "teleport", "check", "--state", "W4", "--bob", "4", "--m", "2", "--strict",
    ]);
    assert_eq!(strict.status.code(), Some(1));
    let ok = qcomm(&[
        "teleport", "check", "--state", "GHZ4", "--bob", "4", "--m", "2", "--strict",
    ]);
    assert_eq!(ok.status.code(), Some(0));
}

#[test]
fn teleport_run_with_explicit_alpha() {
    let doc = json(&[
        "teleport",
        "run",
        "--state",
        "OMEGA",
        "--bob",
        "1,2",
        "--m",
        "4",
        "--alpha",
        "0.5,0.5i,-0.5,1/2",
        "--json",
    ]);
    assert_eq!(doc["exact"], Value::Bool(true));
    assert!(doc["min_fidelity"].as_f64().unwrap() >= 1.0 - 1e-9);
    assert_eq!(doc["cbits_required"].as_f64(), Some(4.0));
    let outcomes = doc["outcomes"].as_array().unwrap();
    assert_eq!(outcomes.len(), 16);
    for o in outcomes {
        assert!((o["probability"].as_f64().unwrap() - 1.0 / 16.0).abs() < 1e-12);
    }
    assert_eq!(doc["alpha"][1], serde_json::json!([0.0, 0.5]));
}

#[test]
fn teleport_run_seeded_is_reproducible_and_forced_run_loses_fidelity() {
    let args = [
        "teleport", "run", "--state", "GHZ4", "--bob", "3", "--m", "2", "--seed", "9", "--json",
    ];
    assert_eq!(json(&args), json(&args));
    let forced = json(&[
        "teleport", "run", "--state", "W4", "--bob", "4", "--m", "2", "--seed", "3", "--json",
    ]);
    assert_eq!(forced["exact"], Value::Bool(false));
    assert!(forced["min_fidelity"].as_f64().unwrap() < 1.0 - 1e-3);
}

#[test]
fn teleport_run_rejects_unnormalized_alpha() {
    let out = qcomm(&[
        "teleport", "run", "--state", "GHZ4", "--bob", "3", "--m", "2", "--alpha", "1,1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("norm"));
}

#[test]
fn sdc_capacity_json() {
    let doc = json(&["sdc", "--state", "OMEGA", "--sender", "1,2", "--json"]);
    assert_eq!(doc["capacity_cbits"].as_f64(), Some(4.0));
    assert_eq!(doc["k_orthogonal"].as_u64(), Some(16));
    let witness = doc["witness"].as_array().unwrap();
    assert_eq!(witness.len(), 16);
    assert_eq!(witness[0], "II");
}

#[test]
fn qkd_check_json_has_joint_matrices() {
    let doc = json(&["qkd", "check", "--state", "GHZ4", "--alice", "1,3", "--json"]);
    assert_eq!(doc["suitable"], Value::Bool(true));
    let families = doc["splits"][0]["families"].as_array().unwrap();
    assert_eq!(families.len(), 2);
    for f in families {
        let joint = f["joint"].as_array().unwrap();
        assert_eq!(joint.len(), 4);
        let total: f64 = joint
            .iter()
            .flat_map(|r| r.as_array().unwrap())
            .map(|p| p.as_f64().unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
    let s1 = qcomm(&["qkd", "check", "--state", "S1", "--strict"]);
    assert_eq!(s1.status.code(), Some(1));
    assert!(stdout(&s1).contains("verdict: unsuitable"));
}

#[test]
fn qkd_run_ghz_keys_agree() {
    let doc = json(&[
        "qkd", "run", "--state", "GHZ4", "--alice", "1,3", "--rounds", "1000", "--seed", "42", "--json",
    ]);
    let run = &doc["run"];
    assert_eq!(run["agreement_rate"].as_f64(), Some(1.0));
    assert_eq!(run["alice_key"], run["bob_key"]);
    assert_eq!(run["rounds"].as_u64(), Some(1000));
}

#[test]
fn state_files_by_extension() {
    let ket = temp_file("bell.ket", "(|00> + |11>)/sqrt(2)\n");
    let doc = json(&["entropy", "--state", ket.to_str().unwrap(), "--json"]);
    assert!((doc["rows"][0]["entropy_bits"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let shown = json(&["states", "show", "W4", "--json"]);
    let path = temp_file("w.json", &shown["state"].to_string());
    let doc = json(&["entropy", "--state", path.to_str().unwrap(), "--json"]);
    let direct = json(&["entropy", "--state", "W4", "--json"]);
    assert_eq!(doc["rows"], direct["rows"]);

    // content is not sniffed: ket text in a .json file is an error
    let wrong = temp_file("bell.json", "(|00> + |11>)/sqrt(2)");
    assert_eq!(
        qcomm(&["entropy", "--state", wrong.to_str().unwrap()]).status.code(),
        Some(2)
    );
}

#[test]
fn schmidt_cut() {
    let doc = json(&["schmidt", "--state", "S1", "--cut", "1,3", "--json"]);
    assert_eq!(doc["rank"].as_u64(), Some(3));
    let sum: f64 = doc["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c.as_f64().unwrap().powi(2))
        .sum();
    assert!((sum - 1.0).abs() < 1e-12);
}

#[test]
fn states_listing() {
    let list = json(&["states", "list", "--json"]);
    let names: Vec<&str> = list
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    for name in ["GHZ4", "W4", "OMEGA", "S1", "S2"] {
        assert!(names.contains(&name));
    }
}

#[test]
fn usage_errors_exit_2_with_one_line() {
    for args in [
        vec!["entropy", "--state", "NOPE"],
        vec!["sdc", "--state", "GHZ4", "--sender", "7"],
        vec!["sdc", "--state", "GHZ4", "--sender", "x"],
        vec!["entropy", "--state", "/nonexistent/file.ket"],
        vec!["qkd", "check", "--state", "GHZ(3)"],
        vec!["teleport", "check", "--state", "GHZ4", "--bob", "1,2,3,4", "--m", "2"],
    ] {
        let out = qcomm(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("error: "));
        assert!(out.stdout.is_empty());
    }
    assert_eq!(qcomm(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qcomm(&["entropy"]).status.code(), Some(2));
}

#[test]
fn reference_suite_passes() {
    let out = qcomm(&["reference-suite"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let doc = json(&["paper-suite", "--json"]);
    assert_eq!(doc["passed"], Value::Bool(true));
    assert_eq!(doc["failed"].as_u64(), Some(0));
}
