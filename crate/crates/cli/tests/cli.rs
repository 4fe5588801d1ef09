use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lensdimer"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).arg("--out-dir").arg(dir).output().expect("binary runs")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    (header, lines.map(|l| l.split(',').map(String::from).collect()).collect())
}

fn manifest(dir: &Path, stem: &str) -> Value {
    serde_json::from_str(&fs::read_to_string(dir.join(format!("{stem}.manifest.json"))).unwrap()).unwrap()
}

const DECAY: &[&str] = &[
    "decay", "--gamma-tau", "10", "--kappa", "0.4", "--omega0-tau-over-pi", "1",
    "--alpha1", "1", "--alpha2", "0", "--t-max", "6", "--points", "2000",
];

#[test]
fn second_emitter_stays_dark_before_one_delay() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(DECAY, dir.path()).status.success());
    let (header, rows) = read_csv(&dir.path().join("decay.csv"));
    assert_eq!(header, ["t_over_tau", "re_b1", "im_b1", "re_b2", "im_b2", "p1", "p2"]);
    assert_eq!(rows.len(), 2000);
    for row in &rows {
        let t: f64 = row[0].parse().unwrap();
        let p2: f64 = row[6].parse().unwrap();
        if t < 1.0 {
            assert_eq!(p2, 0.0, "t/τ = {t}");
        }
    }
    let last: f64 = rows.last().unwrap()[6].parse().unwrap();
    assert!(last > 0.0);
}

#[test]
fn reruns_are_byte_identical_apart_from_the_clock() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    assert!(run(DECAY, a.path()).status.success());
    assert!(run(DECAY, b.path()).status.success());
    assert_eq!(fs::read(a.path().join("decay.csv")).unwrap(), fs::read(b.path().join("decay.csv")).unwrap());
    let (mut ma, mut mb) = (manifest(a.path(), "decay"), manifest(b.path(), "decay"));
    ma.as_object_mut().unwrap().remove("clock");
    mb.as_object_mut().unwrap().remove("clock");
    assert_eq!(ma, mb);
    let body = fs::read(a.path().join("decay.csv")).unwrap();
    assert!(!body.contains(&b'\r'));
}

#[test]
fn manifest_records_output_hash() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(DECAY, dir.path()).status.success());
    let m = manifest(dir.path(), "decay");
    assert_eq!(m["subcommand"], "decay");
    assert_eq!(m["parameters"]["system"]["tau"], 10.0);
    let body = fs::read(dir.path().join("decay.csv")).unwrap();
    assert_eq!(m["outputs"][0]["bytes"], body.len());
    assert_eq!(m["outputs"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn incoherent_scan_fringe_contrast() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &[
            "rates", "--detector", "incoherent", "--kappa", "0.2", "--delta", "0", "--phi-l", "0",
            "--scan", "omega-l-tau", "--from", "0", "--to", "12.566", "--points", "500",
        ],
        dir.path(),
    );
    assert!(out.status.success());
    let m = manifest(dir.path(), "rates");
    let ratio = m["summary"]["max_over_min"].as_f64().unwrap();
    assert!((ratio - 2.25).abs() < 1e-3, "{ratio}");
    let (header, rows) = read_csv(&dir.path().join("rates.csv"));
    assert_eq!(header, ["omega_l_tau", "rate_atom1", "rate_atom2", "rate_total"]);
    assert_eq!(rows.len(), 500);
}

#[test]
fn json_output_and_precision() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["spectrum", "--kappa", "0.3", "--points", "11", "--format", "json", "--precision", "5"], dir.path());
    assert!(out.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("spectrum.json")).unwrap()).unwrap();
    assert_eq!(v["columns"][0], "omega_minus_omega0_over_gamma");
    assert_eq!(v["rows"].as_array().unwrap().len(), 11);
    let s = v["rows"][3][1].as_f64().unwrap();
    assert_eq!(format!("{s:.4e}").parse::<f64>().unwrap(), s);
}

#[test]
fn flags_override_parameter_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("p.txt");
    fs::write(&file, "# pair\nkappa = 0.3\ntau = 2\n").unwrap();
    let out = run(&["decay", "--params", file.to_str().unwrap(), "--kappa", "0.1", "--points", "3"], dir.path());
    assert!(out.status.success());
    let m = manifest(dir.path(), "decay");
    assert_eq!(m["parameters"]["system"]["kappa"], 0.1);
    assert_eq!(m["parameters"]["system"]["tau"], 2.0);
}

#[test]
fn exit_codes_distinguish_failures() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| run(args, dir.path()).status.code().unwrap();
    assert_eq!(code(&["decay", "--no-such-flag"]), 2);
    assert_eq!(code(&["decay", "--kappa", "1.5"]), 3);
    assert_eq!(code(&["decay", "--points", "1"]), 3);
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "kapa = 0.1\n").unwrap();
    assert_eq!(code(&["decay", "--params", bad.to_str().unwrap()]), 2);
    let blocked = dir.path().join("file");
    fs::write(&blocked, "").unwrap();
    let out = bin().args(["decay", "--points", "3", "--out-dir"]).arg(blocked.join("sub")).output().unwrap();
    assert_eq!(out.status.code(), Some(4));
    let msg = String::from_utf8(out.stderr).unwrap();
    assert_eq!(msg.trim().lines().count(), 1);
}

#[test]
fn thread_cap_is_validated() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin().env("RD_THREADS", "zero").args(["kappa", "--half-angle", "1"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let ok = bin().env("RD_THREADS", "1").args(["decay", "--points", "3", "--out-dir"]).arg(dir.path()).output().unwrap();
    assert!(ok.status.success());
}

#[test]
fn kappa_prints_to_stdout() {
    let out = bin().args(["kappa", "--half-angle-over-pi", "1"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, "half_angle,dipole_angle,kappa,kappa_closed_form\n3.14159265359,0,1,1\n");
}

#[test]
fn verify_report_is_reproducible_and_exit_reflects_failures() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let first = run(&["verify", "--suite", "closed-form"], a.path());
    let second = run(&["verify", "--suite", "closed-form", "--sequential"], b.path());
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(fs::read(a.path().join("verify.csv")).unwrap(), fs::read(b.path().join("verify.csv")).unwrap());
    let report = String::from_utf8(first.stdout).unwrap();
    let failed = report.lines().filter(|l| l.contains(" FAIL ")).count();
    assert_eq!(first.status.code(), Some(if failed > 0 { 1 } else { 0 }));
    assert!(report.lines().any(|l| l.starts_with("C10 ")));
}

#[test]
fn g2_grid_leaves_undefined_normalization_empty() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(
        &["g2", "--kappa", "0.4", "--gamma-tau", "20", "--omega0-tau-over-pi", "1", "--phi1-over-pi", "1",
          "--tprime-max", "2", "--points", "9", "--phi2-points", "5"],
        dir.path(),
    );
    assert!(out.status.success());
    let (header, rows) = read_csv(&dir.path().join("g2.csv"));
    assert_eq!(header, ["tprime_over_tau", "phi2", "g2_raw", "g2_normalized"]);
    assert_eq!(rows.len(), 45);
    assert!(rows.iter().all(|r| r[3].is_empty()));
}
