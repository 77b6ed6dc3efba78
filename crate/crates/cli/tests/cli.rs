use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn config(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../configs")
        .join(name)
}

fn run(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trotterforge"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .unwrap()
}

fn quantity(path: &Path, name: &str) -> String {
    let mut reader = csv::Reader::from_path(path).unwrap();
    reader
        .records()
        .map(|r| r.unwrap())
        .find(|r| &r[0] == name)
        .map(|r| r[1].to_string())
        .unwrap_or_else(|| panic!("{name} missing"))
}

#[test]
fn schedule_writes_counts_and_conditions() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["schedule", "--k", "2", "--m", "9", "--r", "5"],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let conditions = dir.path().join("conditions.csv");
    assert_eq!(quantity(&conditions, "factor_count"), "1251");
    assert_eq!(quantity(&conditions, "expected_factor_count"), "1251");
    assert_eq!(quantity(&conditions, "palindrome"), "true");
    let tsv = std::fs::read_to_string(dir.path().join("schedule.tsv")).unwrap();
    assert_eq!(
        tsv.lines()
            .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
            .count(),
        1251
    );
    assert!(dir.path().join("path_trace.csv").exists());
}

#[test]
fn even_arity_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["schedule", "--k", "2", "--m", "3", "--r", "4"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn single_site_norm_is_one() {
    let dir = tempfile::tempdir().unwrap();
    let model = config("single_site_z.json");
    let out = run(&["norm", "--model", model.to_str().unwrap()], dir.path());
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "norm=1");
}

#[test]
fn converge_reports_second_order() {
    let dir = tempfile::tempdir().unwrap();
    let model = config("tfim_l6.json");
    let out = run(
        &[
            "converge",
            "--model",
            model.to_str().unwrap(),
            "--n",
            "4,8,16,32",
        ],
        dir.path(),
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let stdout = String::from_utf8_lossy(&out.stdout);
    let alpha: f64 = stdout
        .split_whitespace()
        .find_map(|w| w.strip_prefix("alpha_hat="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(alpha >= 1.9, "{stdout}");
    let rows = csv::Reader::from_path(dir.path().join("convergence.csv"))
        .unwrap()
        .records()
        .count();
    assert_eq!(rows, 4);
}

#[test]
fn too_few_step_counts_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let model = config("tfim_l6.json");
    let out = run(
        &["converge", "--model", model.to_str().unwrap(), "--n", "4,8"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_model_file_fails() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["norm", "--model", "/nonexistent/model.json"], dir.path());
    assert!(!out.status.success());
}
