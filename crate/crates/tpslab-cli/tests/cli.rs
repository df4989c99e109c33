//! End-to-end tests driving the compiled binary.

use std::f64::consts::LN_2;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tpslab::lab::read_payload_strings;
use tpslab::numkernel::{kron, pauli_x, pauli_z, ComplexMatrix};
use tpslab::tps::standard_tps;

fn tpslab_bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tpslab"))
        .args(args)
        .output()
        .expect("binary should launch")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "command failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout should be JSON")
}

fn write_matrix(path: &Path, m: &ComplexMatrix) {
    fs::write(path, serde_json::to_string(m).unwrap()).unwrap();
}

fn local2_matrix() -> ComplexMatrix {
    let id = ComplexMatrix::identity(2);
    &kron(&pauli_z(), &id).unwrap() + &kron(&id, &pauli_z()).unwrap()
}

fn ising2_matrix() -> ComplexMatrix {
    kron(&pauli_x(), &pauli_x()).unwrap()
}

#[test]
fn dims_factors_reports_ledger() {
    let out = tpslab_bin(&["dims", "--factors", "2,2"]);
    let v = stdout_json(&out);
    assert_eq!(v["local_unitary_dim"], 7);
    assert_eq!(v["local_torus_dim"], 3);
    assert_eq!(v["commutant_dim_nondegenerate"], 4);
    assert_eq!(v["torus_surplus"], 1);
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn dims_verify_rank_agrees() {
    let out = tpslab_bin(&["dims", "--factors", "2,3", "--verify-rank"]);
    let v = stdout_json(&out);
    assert_eq!(v["local_unitary_dim"], 12);
    assert_eq!(v["numeric_local_unitary_dim"], 12);
    assert_eq!(v["rank_agrees"], true);
}

#[test]
fn dims_table_emits_one_row_per_site_count() {
    let out = tpslab_bin(&["dims", "--table", "2", "6"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines.len(), 7);
    assert!(lines[0].starts_with("n,local_unitary_dim"));
    assert_eq!(lines[4], "4,13,16,true");
}

#[test]
fn dims_scan_reports_positive_gap() {
    let out = tpslab_bin(&["dims", "--scan", "16"]);
    let v = stdout_json(&out);
    assert_eq!(v["all_positive"], true);
    assert_eq!(v["min_surplus"], 1);
}

#[test]
fn dims_without_mode_is_invalid() {
    let out = tpslab_bin(&["dims"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn commutant_matches_oracle_on_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("local2.json");
    write_matrix(&path, &local2_matrix());
    let out = tpslab_bin(&[
        "commutant",
        "--hamiltonian",
        path.to_str().unwrap(),
        "--verify-oracle",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["dimension"], 6);
    assert_eq!(v["torus_dimension"], 4);
    assert_eq!(v["multiplicities"], serde_json::json!([1, 2, 1]));
    assert_eq!(v["oracle_agrees"], true);
    assert_eq!(v["ambiguous"], false);
}

#[test]
fn missing_input_file_exits_io() {
    let out = tpslab_bin(&["commutant", "--hamiltonian", "/nonexistent/h.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_matrix_json_exits_validation() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\"rows\": 2").unwrap();
    let out = tpslab_bin(&["commutant", "--hamiltonian", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn strict_mode_rejects_ambiguous_clustering() {
    // Eigenvalue gap 5e-8 sits inside the sensitivity window of the
    // automatic tolerance 1e-8 (from spectral norm 1).
    let m = ComplexMatrix::diag_real(&[0.0, 5e-8, 1.0]);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("near.json");
    write_matrix(&path, &m);

    let lenient = tpslab_bin(&["commutant", "--hamiltonian", path.to_str().unwrap()]);
    assert!(lenient.status.success());
    let v: serde_json::Value = serde_json::from_slice(&lenient.stdout).unwrap();
    assert_eq!(v["ambiguous"], true);

    let strict = tpslab_bin(&[
        "commutant",
        "--hamiltonian",
        path.to_str().unwrap(),
        "--strict",
    ]);
    assert_eq!(strict.status.code(), Some(3));
}

#[test]
fn tps_check_passes_for_standard_structure() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tps.json");
    let tps = standard_tps(&[2, 3]).unwrap();
    fs::write(&path, serde_json::to_string(&tps).unwrap()).unwrap();
    let out = tpslab_bin(&["tps-check", "--tps", path.to_str().unwrap()]);
    let v = stdout_json(&out);
    assert_eq!(v["passes"], true);
    assert_eq!(v["generated_dim"], 36);
    assert_eq!(v["max_intersection_dim"], 1);
}

#[test]
fn orbit_certifies_commutant_samples() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("local2.json");
    write_matrix(&path, &local2_matrix());
    let out = tpslab_bin(&[
        "orbit",
        "--hamiltonian",
        path.to_str().unwrap(),
        "--factors",
        "2,2",
        "--seed",
        "7",
        "--samples",
        "4",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["sample_count"], 4);
    assert_eq!(v["commutant_dimension"], 6);
    assert_eq!(v["torus_surplus"], 1);
    assert_eq!(v["samples"].as_array().unwrap().len(), 4);
    assert!(v["certified_count"].as_u64().unwrap() >= 3);
    // Certificates may only be issued for samples that moved the algebras.
    for s in v["samples"].as_array().unwrap() {
        if s["certified"] == true {
            assert_eq!(s["algebras_unchanged"], false);
        }
    }
}

#[test]
fn orbit_rejects_mismatched_factors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("local2.json");
    write_matrix(&path, &local2_matrix());
    let out = tpslab_bin(&[
        "orbit",
        "--hamiltonian",
        path.to_str().unwrap(),
        "--factors",
        "2,3",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn entropy_trajectory_csv_hits_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ising2.json");
    write_matrix(&path, &ising2_matrix());
    let out = tpslab_bin(&[
        "entropy-trajectory",
        "--hamiltonian",
        path.to_str().unwrap(),
        "--factors",
        "2,2",
        "--t-grid",
        "0:1.5707963267948966:5",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.trim().lines().collect();
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[0], "t,product_residual,s_0,s_1,mi_0_1");
    // Middle row is t = pi/4: maximal entanglement of the Ising evolution.
    let mid: Vec<f64> = lines[3].split(',').map(|x| x.parse().unwrap()).collect();
    assert!((mid[1] - 0.75f64.sqrt()).abs() < 1e-9);
    assert!((mid[2] - LN_2).abs() < 1e-9);
    assert!((mid[3] - LN_2).abs() < 1e-9);
    assert!((mid[4] - 2.0 * LN_2).abs() < 1e-9);
}

#[test]
fn entropy_trajectory_preset_requires_matching_factors() {
    let out = tpslab_bin(&[
        "entropy-trajectory",
        "--preset",
        "ising2",
        "--factors",
        "2,2,2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn entropy_trajectory_random_inputs_require_seed() {
    let out = tpslab_bin(&[
        "entropy-trajectory",
        "--preset",
        "gue(4)",
        "--factors",
        "2,2",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn counterexamples_persists_records_and_prints_summary() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("family.json");
    let config = serde_json::json!({
        "kind": "counterexample-family",
        "seed": 11,
        "factor_dims": [2, 2],
        "hamiltonian": {"preset": "ising2"},
        "transforms": 4,
        "controls": 2
    });
    fs::write(&config_path, serde_json::to_string(&config).unwrap()).unwrap();
    let runs = dir.path().join("runs");

    let out = tpslab_bin(&[
        "counterexamples",
        "--config",
        config_path.to_str().unwrap(),
        "--out",
        runs.to_str().unwrap(),
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["family_size"], 4);
    assert_eq!(v["control_false_positives"], 0);
    assert_eq!(v["success"], true);

    let run_dir = runs.join("counterexample-family").join("11");
    assert!(run_dir.join("record.jsonl").exists());
    assert!(run_dir.join("transforms.csv").exists());
    let csv = fs::read_to_string(run_dir.join("transforms.csv")).unwrap();
    assert_eq!(csv.trim().lines().count(), 1 + 4 + 2);
}

#[test]
fn counterexamples_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("family.json");
    let config = serde_json::json!({
        "kind": "counterexample-family",
        "seed": 23,
        "factor_dims": [2, 2],
        "hamiltonian": {"preset": "ising2"},
        "transforms": 3,
        "controls": 1
    });
    fs::write(&config_path, serde_json::to_string(&config).unwrap()).unwrap();

    let mut payloads = Vec::new();
    for run in ["a", "b"] {
        let runs = dir.path().join(run);
        let out = tpslab_bin(&[
            "counterexamples",
            "--config",
            config_path.to_str().unwrap(),
            "--out",
            runs.to_str().unwrap(),
        ]);
        assert!(out.status.success());
        let record = runs.join("counterexample-family").join("23").join("record.jsonl");
        payloads.push(read_payload_strings(&record).unwrap());
    }
    assert_eq!(payloads[0], payloads[1]);
}

#[test]
fn out_flag_writes_file_instead_of_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ledger.json");
    let out = tpslab_bin(&["dims", "--factors", "2,2", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["local_unitary_dim"], 7);
}

#[test]
fn selftest_exits_zero_and_reports_each_check() {
    let out = tpslab_bin(&["selftest"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.matches("[ok]").count(), 6);
    assert!(text.contains("all 6 checks passed"));
}
