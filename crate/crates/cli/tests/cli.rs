use std::path::Path;
use std::process::{Command, Output};

use qutrit_core::Circuit;

fn qutrit(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qutrit")).args(args).current_dir(dir).output().expect("binary runs")
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = qutrit(args, dir);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(text: &str) -> serde_json::Value {
    serde_json::from_str(text).unwrap()
}

#[test]
fn build_writes_circuits() {
    let dir = tempfile::tempdir().unwrap();
    let summary = json(&ok(&["build", "--op", "adder", "--n", "3", "--out", "add.json"], dir.path()));
    assert_eq!(summary["circuit"]["wires"], 8);
    let c = Circuit::from_json(&std::fs::read_to_string(dir.path().join("add.json")).unwrap()).unwrap();
    assert_eq!(c.num_wires(), 8);

    ok(&["build", "--op", "multiplier", "--n", "3", "--nb", "2", "--out", "mul.json"], dir.path());
    let summary = json(&ok(&["build", "--op", "witness", "--out", "w.json"], dir.path()));
    assert_eq!(summary["circuit"]["toffolis"], 6);

    let stdout = ok(&["build", "--op", "adder", "--n", "2"], dir.path());
    assert!(Circuit::from_json(&stdout).is_ok());
    assert_eq!(qutrit(&["build", "--op", "adder", "--n", "0"], dir.path()).status.code(), Some(1));
}

#[test]
fn decompose_then_simulate() {
    let dir = tempfile::tempdir().unwrap();
    ok(&["build", "--op", "witness", "--out", "w.json"], dir.path());
    let s = json(&ok(&["decompose", "--strategy", "qutrit", "--in", "w.json", "--out", "w3.json"], dir.path()));
    assert_eq!(s["after"]["gates"], 26);
    assert_eq!(s["after"]["toffolis"], 0);
    let s = json(&ok(&["decompose", "--strategy", "cliffordt", "--in", "w.json", "--out", "wt.json"], dir.path()));
    assert_eq!(s["after"]["qutrit_wires"], 0);

    for file in ["w3.json", "wt.json"] {
        let csv = ok(&["simulate", "--in", file, "--shots", "64", "--state-out", "state.json"], dir.path());
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "label,count");
        assert_eq!(lines.len(), 2);
        let (label, count) = lines[1].split_once(',').unwrap();
        assert_eq!(count, "64");
        let digits: Vec<u8> = label.bytes().map(|b| b - b'0').collect();
        let product: u32 = [5, 10, 11, 12].iter().enumerate().map(|(i, &w)| u32::from(digits[w]) << i).sum();
        assert_eq!(product, 15);
        let state: Vec<[f64; 2]> = serde_json::from_str(&std::fs::read_to_string(dir.path().join("state.json")).unwrap()).unwrap();
        let norm: f64 = state.iter().map(|[re, im]| re * re + im * im).sum();
        assert!((norm - 1.0).abs() < 1e-12);
    }
}

#[test]
fn simulate_respects_input_seed_and_guards() {
    let dir = tempfile::tempdir().unwrap();
    let circuit = r#"{"wires":[{"dim":2},{"dim":3}],"gates":[{"kind":"h","controls":[],"targets":[0]},
        {"kind":"xplus1","controls":[{"wire":0,"value":1}],"targets":[1]}]}"#;
    std::fs::write(dir.path().join("c.json"), circuit).unwrap();
    let a = ok(&["--seed", "3", "simulate", "--in", "c.json", "--input", "01", "--shots", "1000"], dir.path());
    let b = ok(&["--seed", "3", "simulate", "--in", "c.json", "--input", "01", "--shots", "1000"], dir.path());
    assert_eq!(a, b);
    assert!(a.contains("01,") && a.contains("12,"));

    std::fs::write(dir.path().join("tiny.toml"), "[guards]\nmax_state_dim = 4\n").unwrap();
    let out = qutrit(&["--config", "tiny.toml", "simulate", "--in", "c.json"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("guard"));
    assert_eq!(qutrit(&["simulate", "--in", "c.json", "--input", "03"], dir.path()).status.code(), Some(1));
}

#[test]
fn estimate_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let r = json(&ok(&["estimate", "--op", "sqrt", "--n", "4", "--strategy", "qutrit"], dir.path()));
    assert_eq!(r["cnot_count_ternary"], 48.0);
    assert_eq!(r["t_depth"], 0.0);

    let r = json(&ok(&["estimate", "--op", "arcsine", "--n", "4", "--k", "1", "--M", "1", "--d", "1"], dir.path()));
    assert_eq!(r["cnot_count_ternary"], 241.0);
    assert_eq!(r["toffoli_count"], 87.0);

    let r = json(&ok(&["estimate", "--op", "mul", "--n", "4", "--strategy", "baseline"], dir.path()));
    assert_eq!((r["toffoli_count"].as_f64(), r["t_depth"].as_f64()), (Some(30.0), Some(68.0)));

    let csv = ok(&["estimate", "--op", "add", "--n", "8", "--floored", "--format", "csv"], dir.path());
    assert!(csv.starts_with("label,strategy,toffoli_count"));
    assert!(csv.lines().nth(1).unwrap().starts_with("add(n=8, p=0),qutrit,"));

    let b = json(&ok(&["estimate", "--benchmark"], dir.path()));
    assert_eq!(b["overall_depth"], 162e6);
    assert_eq!(qutrit(&["estimate", "--op", "cube", "--n", "4"], dir.path()).status.code(), Some(2));
    assert_eq!(qutrit(&["estimate", "--op", "add", "--n", "1"], dir.path()).status.code(), Some(1));
}

#[test]
fn noise_curve_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["noise-curve", "--strategy", "both", "--max-toffoli", "30", "--p1", "1e-4", "--p2", "1e-2"];
    let csv = ok(&[&args[..], &["--t1a", "100", "--t1b", "30", "--tau", "0", "--table-out", "t.json"]].concat(), dir.path());
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "toffoli_count,p_success_conventional,p_success_qutrit");
    assert_eq!(lines.len(), 31);
    let last: Vec<f64> = lines[30].split(',').map(|v| v.parse().unwrap()).collect();
    assert_eq!(last[0], 30.0);
    assert!((last[1] - 0.00786).abs() < 1e-5 && (last[2] - 0.4047).abs() < 1e-4);

    let tables = json(&std::fs::read_to_string(dir.path().join("t.json")).unwrap());
    assert_eq!(tables["comparison"][0]["tabulated_error_pct"], 99.95);
    assert_eq!(tables["two_wire_no_error"][1]["tabulated_coefficient"], 81);

    let single = ok(&["noise-curve", "--strategy", "qutrit", "--max-toffoli", "3"], dir.path());
    assert!(single.starts_with("toffoli_count,p_success_qutrit\n"));
    assert_eq!(single.lines().count(), 4);

    std::fs::write(dir.path().join("cfg.toml"), "[noise]\np2 = 0.0\np1 = 0.0\n").unwrap();
    let clean = ok(&["--config", "cfg.toml", "noise-curve", "--max-toffoli", "2"], dir.path());
    assert!(clean.ends_with("2,1,1\n"));
    assert_eq!(qutrit(&["noise-curve", "--p2", "1.5"], dir.path()).status.code(), Some(1));
}

#[test]
fn bounds_output() {
    let dir = tempfile::tempdir().unwrap();
    let b = json(&ok(&["bounds", "--d", "1", "--T", "1", "--w", "5", "--n", "4", "--beta", "1", "--range", "2"], dir.path()));
    assert!((b["trunc_error_bound"].as_f64().unwrap() - 7.4533e-6).abs() < 1e-9);
    assert!((b["disc_error"].as_f64().unwrap() - 8.0 / 6144.0).abs() < 1e-15);
    assert_eq!(qutrit(&["bounds", "--d", "0"], dir.path()).status.code(), Some(1));
}

#[test]
fn verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let results = json(&ok(&["verify"], dir.path()));
    let results = results.as_array().unwrap();
    assert!(results.len() >= 15);
    assert!(results.iter().all(|r| r["passed"] == true));
    let csv = ok(&["verify", "--format", "csv", "--out", "v.csv"], dir.path());
    assert!(csv.is_empty());
    assert!(std::fs::read_to_string(dir.path().join("v.csv")).unwrap().starts_with("check,passed,detail\n"));
}

#[test]
fn usage_and_file_errors() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(qutrit(&["transmogrify"], dir.path()).status.code(), Some(2));
    assert_eq!(qutrit(&[], dir.path()).status.code(), Some(2));
    assert_eq!(qutrit(&["--help"], dir.path()).status.code(), Some(0));
    assert_eq!(qutrit(&["decompose", "--strategy", "qutrit", "--in", "missing.json"], dir.path()).status.code(), Some(1));
    std::fs::write(dir.path().join("bad.json"), r#"{"wires":[{"dim":4}],"gates":[]}"#).unwrap();
    assert_eq!(qutrit(&["simulate", "--in", "bad.json"], dir.path()).status.code(), Some(1));
    assert_eq!(qutrit(&["--config", "nope.toml", "verify"], dir.path()).status.code(), Some(1));
}
