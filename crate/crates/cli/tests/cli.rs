//! End-to-end tests of the command-line interface: file formats, exit
//! codes, determinism, and the documented validation messages.

use std::path::PathBuf;
use std::process::{Command, Output};

fn triqr(args: &[&str], dir: &std::path::Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_triqr"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("triqr-cli-test-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn sample_writes_matrix_with_requested_spectrum() {
    let dir = tempdir("sample");
    let out = triqr(&["sample", "--spectrum", "1,2,4", "--seed", "7", "--out", "m.txt"], &dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.join("m.txt")).unwrap();
    let t = triqr::SymTridiagonal::from_text(&text).unwrap();
    assert_eq!(t.n(), 3);
    let spec = triqr::sturm_eigenvalues(&t, 1e-13 * t.norm()).unwrap();
    let norm = (1.0f64 + 4.0 + 16.0).sqrt();
    for (a, b) in spec.lambdas().iter().zip([1.0, 2.0, 4.0]) {
        assert!((a - b).abs() <= 1e-10 * norm);
    }
}

#[test]
fn sample_single_eigenvalue_gives_1x1() {
    let dir = tempdir("sample1");
    let out = triqr(&["sample", "--spectrum", "5"], &dir);
    assert!(out.status.success());
    let t = triqr::SymTridiagonal::from_text(&String::from_utf8_lossy(&out.stdout)).unwrap();
    assert_eq!(t.n(), 1);
    assert_eq!(t.diag(), &[5.0]);
}

#[test]
fn sample_rejects_unsorted_spectrum_with_exit_2() {
    let dir = tempdir("sample2");
    let out = triqr(&["sample", "--spectrum", "2,1"], &dir);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("spectrum must be strictly increasing"), "stderr: {err}");
}

#[test]
fn sample_is_byte_deterministic() {
    let dir = tempdir("det");
    let a = triqr(&["sample", "--spectrum", "-1,0,0.3,1", "--seed", "11"], &dir);
    let b = triqr(&["sample", "--spectrum", "-1,0,0.3,1", "--seed", "11"], &dir);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn iterate_diagonal_input_deflates_immediately() {
    let dir = tempdir("itdiag");
    let t = triqr::SymTridiagonal::from_diagonal(vec![1.0, 2.0, 4.0]).unwrap();
    std::fs::write(dir.join("d.txt"), t.to_text()).unwrap();
    let out = triqr(&["iterate", "--matrix", "d.txt", "--strategy", "wilkinson"], &dir);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["stopReason"], "deflated");
    assert_eq!(doc["steps"].as_array().unwrap().len(), 1);
}

#[test]
fn iterate_exhausted_budget_exits_3() {
    let dir = tempdir("itbudget");
    let t = triqr::SymTridiagonal::new(vec![0.0, 0.0, 0.0], vec![0.8, 0.6]).unwrap();
    std::fs::write(dir.join("m.txt"), t.to_text()).unwrap();
    let out = triqr(
        &["iterate", "--matrix", "m.txt", "--max-steps", "2", "--deflate-tol", "1e-300"],
        &dir,
    );
    assert_eq!(out.status.code(), Some(3));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["stopReason"], "maxSteps");
}

#[test]
fn iterate_parses_mixed_strategy() {
    let dir = tempdir("itmixed");
    let t = triqr::SymTridiagonal::new(vec![0.0, 0.0], vec![1.0]).unwrap();
    std::fs::write(dir.join("m.txt"), t.to_text()).unwrap();
    let out = triqr(&["iterate", "--matrix", "m.txt", "--strategy", "mixed:1e-3"], &dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["strategy"], "mixed:1e-3");
}

#[test]
fn eig_matches_oracle() {
    let dir = tempdir("eig");
    let spec = triqr::Spectrum::new(vec![-2.0, 0.5, 1.5, 3.0]).unwrap();
    let t = triqr::sample_isospectral(&spec, 3, None).unwrap();
    std::fs::write(dir.join("m.txt"), t.to_text()).unwrap();
    let out = triqr(&["eig", "--matrix", "m.txt", "--strategy", "wilkinson"], &dir);
    assert!(out.status.success());
    let vals: Vec<f64> = String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| l.trim().parse().unwrap())
        .collect();
    for (a, b) in vals.iter().zip(spec.lambdas()) {
        assert!((a - b).abs() <= 1e-8 * t.norm());
    }
}

#[test]
fn rates_reports_cubic_class_for_wilkinson() {
    let dir = tempdir("rates");
    let spec = triqr::Spectrum::new(vec![1.0, 2.0, 4.0]).unwrap();
    let t = triqr::sample_isospectral(&spec, 7, None).unwrap();
    std::fs::write(dir.join("m.txt"), t.to_text()).unwrap();
    let out = triqr(&["rates", "--matrix", "m.txt", "--max-steps", "60"], &dir);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["class"], "cubic");
    assert!(doc["summary"].as_f64().unwrap() >= 2.6);
}

#[test]
fn portrait_emits_permutation_vertices() {
    let dir = tempdir("portrait");
    let out = triqr(
        &["portrait", "--spectrum", "4,5,7", "--grid", "2", "--steps", "5"],
        &dir,
    );
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut vertices: Vec<Vec<i64>> = text
        .lines()
        .filter(|l| l.starts_with("vertex-"))
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            cols[2..5]
                .iter()
                .map(|v| v.parse::<f64>().unwrap().round() as i64)
                .collect()
        })
        .collect();
    vertices.sort();
    let mut expect = vec![
        vec![4, 5, 7],
        vec![4, 7, 5],
        vec![5, 4, 7],
        vec![5, 7, 4],
        vec![7, 4, 5],
        vec![7, 5, 4],
    ];
    expect.sort();
    assert_eq!(vertices, expect);
}

#[test]
fn portrait_trajectories_accumulate_on_edges() {
    // Every interior trajectory must end with one of the two trailing
    // subdiagonal entries driven to zero (an edge of the cell).
    let dir = tempdir("portrait-edges");
    let out = triqr(
        &["portrait", "--spectrum", "1,2,4", "--grid", "6", "--steps", "40"],
        &dir,
    );
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut last_per_traj: std::collections::BTreeMap<String, (f64, f64)> = Default::default();
    for line in text.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        if !cols[0].starts_with('t') {
            continue;
        }
        let b1: f64 = cols[5].parse().unwrap();
        let b2: f64 = cols[6].parse().unwrap();
        last_per_traj.insert(cols[0].to_string(), (b1.abs(), b2.abs()));
    }
    assert!(!last_per_traj.is_empty());
    for (traj, (b1, b2)) in last_per_traj {
        assert!(b1.min(b2) < 1e-6, "{traj} ended away from the edges: b1={b1:.3e} b2={b2:.3e}");
    }
}

#[test]
fn portrait_rejects_wrong_dimension() {
    let dir = tempdir("portrait2");
    let out = triqr(&["portrait", "--spectrum", "1,2,3,4"], &dir);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_filter_runs_and_passes() {
    let dir = tempdir("verify");
    let out = triqr(&["verify", "--only", "wielandt"], &dir);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["passed"], true);
    let checks = doc["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 1);
    assert_eq!(checks[0]["name"], "wielandt-hoffman-gap");
}

#[test]
fn config_file_overrides_defaults_and_flags_override_file() {
    let dir = tempdir("config");
    std::fs::write(dir.join("run.conf"), "spectrum = 1,2,4\nseed = 9\n").unwrap();
    let from_file = triqr(&["sample", "--config", "run.conf"], &dir);
    assert!(from_file.status.success());
    let direct = triqr(&["sample", "--spectrum", "1,2,4", "--seed", "9"], &dir);
    assert_eq!(from_file.stdout, direct.stdout);
    // Flag wins over file.
    let flag = triqr(&["sample", "--config", "run.conf", "--seed", "10"], &dir);
    let direct10 = triqr(&["sample", "--spectrum", "1,2,4", "--seed", "10"], &dir);
    assert_eq!(flag.stdout, direct10.stdout);
    assert_ne!(flag.stdout, direct.stdout);
}
