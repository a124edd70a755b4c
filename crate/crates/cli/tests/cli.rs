use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn sbp(config: &str, dir: &Path) -> Output {
    let path = dir.join("run.cfg");
    fs::write(&path, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_sbp"))
        .arg("--config")
        .arg(&path)
        .arg("--serial")
        .output()
        .unwrap()
}

fn manifest(dir: &Path) -> Vec<(String, String)> {
    fs::read_to_string(dir.join("manifest.txt"))
        .unwrap()
        .lines()
        .map(|l| {
            let (k, v) = l.split_once('=').expect("key=value");
            (k.to_string(), v.to_string())
        })
        .collect()
}

fn get<'a>(m: &'a [(String, String)], key: &str) -> Option<&'a str> {
    m.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
}

#[test]
fn config_errors_exit_two_with_line() {
    let tmp = tempfile::tempdir().unwrap();
    let out = sbp(
        "[run]\ncommand = \"solve\"\n[grid]\nn = 32\nL = 64\n[params]\na = 1\nrho = 0.5\np = 3\n",
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 9"), "{err}");

    let out = sbp("[run]\ncommand = \"check-identities\"\ncolour = \"red\"\n", tmp.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));

    let out = sbp(
        "[run]\ncommand = \"solve\"\n[grid]\nn = 32\nL = 64\n[params]\na = 1\np = 2.5\n",
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("rho"));
}

#[test]
fn unwritable_output_fails_before_solving() {
    let tmp = tempfile::tempdir().unwrap();
    let blocker = tmp.path().join("file");
    fs::write(&blocker, "").unwrap();
    let cfg = format!(
        "[run]\ncommand = \"solve\"\noutput_dir = \"{}\"\n[grid]\nn = 32\nL = 64\n[params]\na = 1\nrho = 0.5\np = 2.5\n",
        blocker.join("out").display()
    );
    let start = std::time::Instant::now();
    let out = sbp(&cfg, tmp.path());
    assert_eq!(out.status.code(), Some(3));
    assert!(start.elapsed().as_secs_f64() < 1.0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("not writable"));
}

#[test]
fn single_mass_sweep_writes_manifest_and_artifacts() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("sweep");
    let cfg = format!(
        "[run]\ncommand = \"sweep-rho\"\noutput_dir = \"{}\"\n[grid]\nn = 32\nL = 64\n\
         [params]\na = 1\np = 2.5\nrhos = [0.5]\n[solver]\nshift = 0.05\n",
        dir.display()
    );
    let out = sbp(&cfg, tmp.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let m = manifest(&dir);
    assert_eq!(get(&m, "status"), Some("ok"));
    assert_eq!(get(&m, "command"), Some("sweep-rho"));
    assert_eq!(get(&m, "config.params.rhos"), Some("0.5"));
    assert_eq!(get(&m, "verdict.all_negative"), Some("true"));
    let artifacts: Vec<&str> = m
        .iter()
        .filter(|(k, _)| k.starts_with("artifact."))
        .map(|(_, v)| v.as_str())
        .collect();
    assert_eq!(artifacts, ["sweep_rho.csv", "verdicts.txt"]);
    for a in &artifacts {
        assert!(dir.join(a).is_file(), "{a}");
    }
    let mut rows = csv::Reader::from_path(dir.join("sweep_rho.csv")).unwrap();
    let header = rows.headers().unwrap().clone();
    let first: Vec<&str> = header.iter().take(10).collect();
    assert_eq!(
        first,
        [
            "a",
            "rho",
            "p",
            "J",
            "J_over_rho2",
            "omega",
            "residual",
            "h1_norm",
            "radial_dev",
            "converged"
        ]
    );
    let recs: Vec<_> = rows.records().map(|r| r.unwrap()).collect();
    assert_eq!(recs.len(), 1);
    let j: f64 = recs[0][3].parse().unwrap();
    assert!((j + 2.791639168e-3).abs() < 1e-11, "{j}");
}

#[test]
fn solve_with_starts_reports_each_start() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("solve");
    let cfg = format!(
        "[run]\ncommand = \"solve\"\noutput_dir = \"{}\"\nseed = 7\n[grid]\nn = 32\nL = 64\n\
         [params]\na = 1\nrho = 0.5\np = 2.5\n[solver]\nshift = 0.05\nstarts = 2\n",
        dir.display()
    );
    let out = sbp(&cfg, tmp.path());
    assert_eq!(out.status.code(), Some(0));
    let m = manifest(&dir);
    for f in ["u.field", "summary.txt", "history.csv", "starts.csv"] {
        assert!(m.iter().any(|(k, v)| k.starts_with("artifact.") && v == f), "{f}");
    }
    let (u, meta) = sbp_core::io::read_field(&dir.join("u.field")).unwrap();
    assert_eq!(u.grid().n(), 32);
    assert_eq!(meta.rho, 0.5);
    let starts = fs::read_to_string(dir.join("starts.csv")).unwrap();
    assert!(starts.lines().nth(2).unwrap().starts_with("1,perturbed:8,"));
    let summary = fs::read_to_string(dir.join("summary.txt")).unwrap();
    assert!(summary.contains("radial_dev=") && summary.contains("coercivity_offset="));
}

#[test]
fn computation_error_leaves_failure_manifest() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("bw");
    let cfg = format!(
        "[run]\ncommand = \"beta-window\"\noutput_dir = \"{}\"\n[grid]\nn = 64\nL = 8\n\
         [params]\np = 2.5\nregime = \"small_rho\"\nbeta = 0.5\n",
        dir.display()
    );
    let out = sbp(&cfg, tmp.path());
    assert_eq!(out.status.code(), Some(4));
    let m = manifest(&dir);
    assert_eq!(get(&m, "status"), Some("failed"));
    assert!(get(&m, "error").unwrap().contains("window"));
    assert_eq!(get(&m, "artifact.1"), Some("beta_window.csv"));
    assert!(dir.join("beta_window.csv").is_file());
}

#[test]
fn check_identities_passes() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("id");
    let out = sbp(
        &format!("[run]\ncommand = \"check-identities\"\noutput_dir = \"{}\"\n", dir.display()),
        tmp.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.join("identities.csv")).unwrap();
    assert!(text.lines().count() > 20);
    assert!(!text.contains(",false"));
    let m = manifest(&dir);
    for s in ["kernels", "gaussian", "gradient", "rescaling"] {
        assert_eq!(get(&m, &format!("verdict.{s}")), Some("true"));
    }
}
