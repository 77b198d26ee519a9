use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_spinramp"));
    c.env_remove("SPINRAMP_WORKERS");
    c
}

fn run_in(dir: &Path, args: &[&str]) -> i32 {
    let out = bin().arg("--out").arg(dir).args(args).output().unwrap();
    out.status.code().unwrap()
}

fn code(args: &[&str]) -> i32 {
    bin().args(args).output().unwrap().status.code().unwrap()
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas").join(name);
    let s: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    jsonschema::validator_for(&s).unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn assert_valid(schema_name: &str, path: &Path) {
    let v = schema(schema_name);
    let doc = read_json(path);
    let errors: Vec<String> = v.iter_errors(&doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{}: {errors:?}", path.display());
}

fn files(dir: &Path, ext: &str) -> Vec<PathBuf> {
    let mut out: Vec<PathBuf> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == ext))
        .collect();
    out.sort();
    out
}

#[test]
fn identical_invocations_give_identical_data() {
    let args = [
        "sweep", "ising", "--n", "21", "--g0", "5", "--g1-scan", "0:0.5:5", "--rate", "-0.05", "--with-bounds",
    ];
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert_eq!(run_in(a.path(), &args), 0);
    assert_eq!(run_in(b.path(), &["--workers", "1"].iter().chain(&args).copied().collect::<Vec<_>>()), 0);
    let csv = files(a.path(), "csv");
    assert!(!csv.is_empty());
    for f in csv {
        let other = b.path().join(f.file_name().unwrap());
        assert_eq!(std::fs::read(&f).unwrap(), std::fs::read(other).unwrap(), "{}", f.display());
    }
}

#[test]
fn stdout_mode_is_deterministic() {
    let args = ["scan", "rate", "--n", "11", "--rate=-0.1,-1"];
    let one = bin().args(args).output().unwrap();
    let two = bin().args(args).output().unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, two.stdout);
    assert!(String::from_utf8_lossy(&one.stdout).starts_with("# scan_rate.csv\nrate,duration"));
}

#[test]
fn outputs_match_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let cases: [(&str, &[&str]); 4] = [
        ("ising", &["sweep", "ising", "--n", "11", "--g0", "5", "--g1", "0", "--rate", "-0.5", "--with-bounds"]),
        ("heis", &["sweep", "heisenberg", "--n", "5", "--g0", "10", "--g1", "5", "--alpha", "-6"]),
        ("scan", &["scan", "N", "--n", "11,21"]),
        ("eps", &["scan", "epsilon", "--model", "heisenberg", "--n", "5", "--specs", "1", "--eps", "0.05,0.1"]),
    ];
    for (sub, args) in cases {
        assert_eq!(run_in(&d.join(sub), args), 0, "{args:?}");
    }
    assert_valid("sweep_report.schema.json", &d.join("ising/sweep_ising.json"));
    assert_valid("sweep_report.schema.json", &d.join("heis/sweep_heisenberg.json"));
    assert_valid("scan_summary.schema.json", &d.join("scan/scan_N.json"));
    assert_valid("scan_summary.schema.json", &d.join("eps/scan_epsilon.json"));
    for sub in ["ising", "heis"] {
        assert_valid("run_manifest.schema.json", &d.join(sub).join("sweep.manifest.json"));
    }
    for sub in ["scan", "eps"] {
        assert_valid("run_manifest.schema.json", &d.join(sub).join("scan.manifest.json"));
    }
    let ising = read_json(&d.join("ising/sweep_ising.json"));
    assert!(ising["bounds"]["regimes"].as_array().unwrap().len() == 3);
}

#[test]
fn every_data_file_is_in_exactly_one_manifest() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["figures", "fig2"]), 0);
    assert_valid("figures_manifest.schema.json", &dir.path().join("figures.manifest.json"));
    let fig = dir.path().join("fig2");
    let manifest_path = fig.join("spectrum.manifest.json");
    assert_valid("run_manifest.schema.json", &manifest_path);
    let m = read_json(&manifest_path);
    let listed: Vec<&str> = m["outputs"].as_array().unwrap().iter().map(|v| v.as_str().unwrap()).collect();
    let mut on_disk: Vec<String> = std::fs::read_dir(&fig)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| !n.ends_with(".manifest.json"))
        .collect();
    on_disk.sort();
    let mut listed_sorted: Vec<String> = listed.iter().map(|s| s.to_string()).collect();
    listed_sorted.sort();
    assert_eq!(on_disk, listed_sorted);
    assert!(listed.contains(&"degeneracy.csv"));
}

#[test]
fn every_csv_has_a_header() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["figures", "fig1"]), 0);
    for f in files(&dir.path().join("fig1"), "csv") {
        let mut r = csv::Reader::from_path(&f).unwrap();
        let h = r.headers().unwrap().clone();
        assert!(h.iter().all(|c| c.parse::<f64>().is_err()), "{}", f.display());
        assert!(r.records().count() > 0);
    }
}

#[test]
fn fig4_manifest_records_initial_field_note() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_in(dir.path(), &["figures", "fig4"]), 0);
    let m = read_json(&dir.path().join("fig4/sweep.manifest.json"));
    let notes = m["notes"].to_string();
    assert!(notes.contains("g0 = 2"), "{notes}");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&["sweep"]), 2);
    assert_eq!(code(&["spectrum", "ising", "--n", "5", "--g", ""]), 2);
    assert_eq!(code(&["spectrum", "heisenberg", "--n", "4"]), 2);
    assert_eq!(code(&["sweep", "heisenberg", "--n", "15", "--g0", "10", "--g1", "5", "--alpha", "-6"]), 2);
    assert_eq!(code(&["sweep", "ising", "--n", "5", "--g0", "5", "--g1", "0", "--rate", "-1", "--T", "5"]), 2);
    assert_eq!(code(&["sweep", "ising", "--n", "5", "--g0", "5", "--g1", "0", "--rate", "0.1"]), 2);
    assert_eq!(code(&["--hbar", "0", "spectrum", "ising", "--n", "3"]), 2);
    assert_eq!(code(&["--workers", "0", "spectrum", "ising", "--n", "3"]), 2);
    assert_eq!(code(&["figures", "fig9"]), 2);
    // A target above what any rate reaches leaves a failed point behind.
    assert_eq!(code(&["scan", "N", "--n", "5", "--target-pe", "0.9999"]), 3);
    let file = tempfile::NamedTempFile::new().unwrap();
    let out = file.path().to_str().unwrap();
    assert_eq!(code(&["--out", out, "spectrum", "ising", "--n", "3"]), 1);
}

#[test]
fn worker_count_from_environment() {
    let out = bin()
        .env("SPINRAMP_WORKERS", "0")
        .args(["spectrum", "ising", "--n", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
