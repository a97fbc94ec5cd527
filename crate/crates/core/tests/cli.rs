use std::path::Path;
use std::process::{Command, Output};

fn randdyn(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_randdyn")).args(args).arg("--out").arg(out).output().unwrap()
}

fn report_value(path: &Path, key: &str) -> String {
    let text = std::fs::read_to_string(path).unwrap();
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{key}: ")))
        .unwrap_or_else(|| panic!("{key} missing"))
        .to_string()
}

#[test]
fn julia_writes_cloud_and_image() {
    let dir = tempfile::tempdir().unwrap();
    let out = randdyn(&["julia", "circle", "--resolution", "64"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("circle-julia.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("re,im,weight,provenance"));
    assert_eq!(csv.lines().count(), 100_001);
    let pgm = std::fs::read(dir.path().join("circle-julia.pgm")).unwrap();
    assert!(pgm.starts_with(b"P5\n64 64\n65535\n"));
}

#[test]
fn coliseum_respects_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let out = randdyn(&["coliseum", "dc1", "--resolution", "40", "--depth", "10"], dir.path());
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("dc1-coliseum.csv")).unwrap();
    assert_eq!(csv.lines().count(), 40 * 40 + 1);
    assert_eq!(report_value(&dir.path().join("dc1-coliseum.txt"), "depth"), "10");
}

#[test]
fn staircase_from_scene_file() {
    let dir = tempfile::tempdir().unwrap();
    let scene = dir.path().join("lebesgue.json");
    std::fs::write(&scene, r#"{"name": "leb", "staircase": {"model": "bernoulli", "a": 0.25}, "resolution": 5}"#)
        .unwrap();
    let out = randdyn(&["staircase", scene.to_str().unwrap()], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = std::fs::read_to_string(dir.path().join("leb-staircase.csv")).unwrap();
    let mid: Vec<f64> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let f: Vec<f64> = l.split(',').map(|s| s.parse().unwrap()).collect();
            0.5 * (f[1] + f[2])
        })
        .collect();
    assert_eq!(mid.len(), 5);
    assert!((mid[2] - 0.25).abs() < 1e-12 && (mid[1] - 0.0625).abs() < 1e-12);
}

#[test]
fn minimal_reports_two_sets() {
    let dir = tempfile::tempdir().unwrap();
    let out = randdyn(&["minimal", "two-attractors"], dir.path());
    assert!(out.status.success());
    let report = dir.path().join("two-attractors-minimal.txt");
    assert_eq!(report_value(&report, "minimal_sets"), "2");
    assert_eq!(report_value(&report, "period_sum"), "2");
}

#[test]
fn verify_fails_when_the_kernel_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let out = randdyn(&["verify", "disjoint-k", "--resolution", "64"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("smallest filled Julia set is empty"), "{text}");
}

#[test]
fn verify_dc1_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = randdyn(&["verify", "dc1"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert_eq!(report_value(&dir.path().join("dc1-verify.txt"), "failed"), "0");
}

#[test]
fn bad_input_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out = randdyn(&["julia", "no-such-scene"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error:"));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"name": "x", "generators": [[1, 1]], "colour": 3}"#).unwrap();
    let out = randdyn(&["julia", bad.to_str().unwrap()], dir.path());
    assert_eq!(out.status.code(), Some(2));
}
