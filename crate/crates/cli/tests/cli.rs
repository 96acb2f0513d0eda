use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use lhz_core::format::{circuit_from_json, AnyCircuit};
use lhz_core::layout::LayoutDoc;
use lhz_core::Layout;
use tempfile::TempDir;

fn lhz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lhz"))
        .args(args)
        .env_remove("SOURCE_DATE_EPOCH")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_owned()
}

fn physical(json: &str) -> lhz_core::circuit::PhysicalCircuit {
    match circuit_from_json(json).unwrap() {
        AnyCircuit::Physical(c) => c,
        AnyCircuit::Logical(_) => panic!("expected physical circuit"),
    }
}

#[test]
fn layout_json_round_trips() {
    let o = lhz(&["layout", "--n", "4"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["manifest"]["subcommand"], "layout");
    assert_eq!(v["qubits"].as_array().unwrap().len(), 10);
    assert_eq!(v["constraints"].as_array().unwrap().len(), 6);
    let doc: LayoutDoc = serde_json::from_value(v).unwrap();
    assert_eq!(Layout::from_doc(&doc).unwrap(), lhz_core::build_layout(4).unwrap());
}

#[test]
fn layout_rejects_one_qubit() {
    let o = lhz(&["layout", "--n", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());
}

#[test]
fn unknown_flag_is_usage_error() {
    assert_eq!(lhz(&["layout", "--bogus"]).status.code(), Some(2));
}

#[test]
fn encode_text_lists_steps() {
    let o = lhz(&["encode", "--n", "6", "--format", "text"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("CNOT")).count(), 30);
    assert!(text.contains("# step 7"));
    assert!(text.lines().next().unwrap().starts_with("# {"));
}

#[test]
fn encode_reverse_json_parses() {
    let o = lhz(&["encode", "--n", "4", "--reverse"]);
    let c = physical(&stdout(&o));
    assert_eq!(c.cnot_count(), 12);
}

#[test]
fn compile_cp_gives_three_rotations() {
    let dir = TempDir::new().unwrap();
    let input = write(
        &dir,
        "cp.json",
        r#"{"space":"logical","n":3,"gates":[{"kind":"CP","operands":["q0","q2"],"angle":1.0}]}"#,
    );
    let out = dir.path().join("out.json");
    let o = lhz(&["compile", "--input", &input, "--output", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let c = physical(&fs::read_to_string(out).unwrap());
    assert_eq!(c.len(), 3);
    assert_eq!(c.cnot_count(), 0);
}

#[test]
fn compile_report_rx() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "rx.txt", "space logical 6\nRX q2 0.3\n");
    let o = lhz(&["compile", "--input", &input, "--report"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rows = text.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(rows.next(), Some("gate,single_qubit,two_qubit,depth,table1_expected,match"));
    let row: Vec<&str> = rows.next().unwrap().split(',').collect();
    assert_eq!(row[2], "10");
    assert_eq!(row[5], "true");
}

#[test]
fn compile_malformed_json_fails() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "bad.json", r#"{"space":"logical","n":3,"gates":[{"kind":"CP""#);
    let o = lhz(&["compile", "--input", &input]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn compile_unknown_gate_fails() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "bad.txt", "space logical 3\nTOFFOLI q0 q1 q2\n");
    let o = lhz(&["compile", "--input", &input]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn verify_passes_and_catches_mutation() {
    let dir = TempDir::new().unwrap();
    let cp = write(&dir, "cp.txt", "space logical 3\nCP q0 q1 3.141592653589793\n");
    let o = lhz(&["verify", "--input", &cp, "--trials", "20", "--seed", "3"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["passed"], true);

    let rx = write(&dir, "rx.txt", "space logical 3\nRX q1 0.8\n");
    let out = dir.path().join("rx_phys.txt");
    let o = lhz(&["compile", "--input", &rx, "--format", "text", "--output", out.to_str().unwrap()]);
    assert!(o.status.success());
    let text = fs::read_to_string(&out).unwrap();
    let mut dropped = false;
    let broken: String = text
        .lines()
        .filter(|l| {
            if !dropped && l.starts_with("CNOT") {
                dropped = true;
                return false;
            }
            true
        })
        .map(|l| format!("{l}\n"))
        .collect();
    let broken_path = write(&dir, "broken.txt", &broken);
    let o = lhz(&["verify", "--input", &rx, "--physical", &broken_path, "--trials", "10"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["min_fidelity"].as_f64().unwrap() < 1.0 - 1e-9 || v["max_residual"].as_f64().unwrap() > 1e-10);
}

#[test]
fn verify_rejects_oversized_chip() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "big.txt", "space logical 7\nRZ q0 0.1\n");
    let o = lhz(&["verify", "--input", &input]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("cap"));
}

#[test]
fn simulate_logical_x() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "x.txt", "space logical 3\nX q1\n");
    let o = lhz(&["simulate", "--circuit", &input, "--input", "100"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["amplitudes_over"], "data");
    let amps = v["amplitudes"].as_array().unwrap();
    assert_eq!(amps.len(), 1);
    assert_eq!(amps[0]["basis"], "110");
}

#[test]
fn simulate_rejects_bad_input() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "x.txt", "space logical 3\nX q1\n");
    assert_eq!(lhz(&["simulate", "--circuit", &input, "--input", "10"]).status.code(), Some(2));
}

#[test]
fn errors_default_header() {
    let o = lhz(&["errors"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# "));
    assert_eq!(lines.next(), Some("n,p_phys,p_a,p_b,p_L"));
    assert_eq!(lines.count(), 4 * 20);
}

#[test]
fn errors_zero_noise_row() {
    let o = lhz(&["errors", "--n-list", "3", "--pphys-grid", "0"]);
    let text = stdout(&o);
    let row: Vec<f64> = text.lines().nth(2).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(row, vec![3.0, 0.0, 0.0, 0.0, 0.0]);
}

#[test]
fn errors_mc_is_reproducible() {
    let args = ["errors", "--n-list", "3,5", "--pphys-grid", "1e-3:1e-2:log3", "--mc", "20000", "--seed", "7"];
    let (a, b) = (lhz(&args), lhz(&args));
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).lines().nth(1).unwrap().ends_with(",p_L_mc,se_mc"));
}

#[test]
fn errors_rejects_bad_grid() {
    assert_eq!(lhz(&["errors", "--pphys-grid", "1e-5:1e-2:geo3"]).status.code(), Some(2));
}

#[test]
fn manifest_uses_source_date_epoch() {
    let o = Command::new(env!("CARGO_BIN_EXE_lhz"))
        .args(["layout", "--n", "2"])
        .env("SOURCE_DATE_EPOCH", "1700000000")
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["manifest"]["timestamp"], "1700000000");
    assert!(Path::new(env!("CARGO_BIN_EXE_lhz")).exists());
}
