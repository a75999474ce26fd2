use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn rwlab(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rwlab")).args(args).arg("--out").arg(out).output().unwrap()
}

fn conf(name: &str) -> String {
    configs().join(name).to_str().unwrap().to_owned()
}

#[test]
fn exit_codes_follow_the_verdict() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path();
    let pass = rwlab(&["check-geometry", "--config", &conf("geometry_cylinder.conf")], out);
    assert_eq!(pass.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&pass.stdout).starts_with("check-geometry: PASS"));

    let fail = rwlab(&["check-geometry", "--config", &conf("geometry_inverted_ball.conf")], out);
    assert_eq!(fail.status.code(), Some(2));
    let checks = std::fs::read_to_string(out.join("checks.csv")).unwrap();
    assert!(checks.contains("min_product,") && checks.contains(",false"), "{checks}");

    let fixed = rwlab(&["check-geometry", "--config", &conf("geometry_inverted_ball.conf"), "--override", "media.mu1=0.5"], out);
    assert_eq!(fixed.status.code(), Some(0));

    let solver = rwlab(
        &[
            "sweep-eta",
            "--config",
            &conf("strip_sweep.conf"),
            "--override",
            "grid.n=65",
            "--override",
            "solver.method=iterative",
            "--override",
            "solver.max_iterations=2",
            "--override",
            "solver.restart=2",
            "--override",
            "sweep.truncation_check=false",
        ],
        out,
    );
    assert_eq!(solver.status.code(), Some(3), "{}", String::from_utf8_lossy(&solver.stdout));
    assert!(std::fs::read_to_string(out.join("manifest.txt")).unwrap().contains("# solver failure:"));
}

#[test]
fn usage_and_config_errors_exit_one() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path();
    let mismatch = rwlab(&["sweep-eta", "--config", &conf("geometry_cylinder.conf")], out);
    assert_eq!(mismatch.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&mismatch.stderr).contains("check-geometry"));
    let unknown = rwlab(&["check-geometry", "--config", &conf("geometry_cylinder.conf"), "--override", "grid.size=3"], out);
    assert_eq!(unknown.status.code(), Some(1));
    let missing = rwlab(&["check-geometry", "--config", "/nonexistent.conf"], out);
    assert_eq!(missing.status.code(), Some(1));
    let threads = rwlab(&["check-geometry", "--config", &conf("geometry_cylinder.conf"), "--threads", "0"], out);
    assert_eq!(threads.status.code(), Some(1));
    let experiment = rwlab(&["frobnicate", "--config", &conf("geometry_cylinder.conf")], out);
    assert_ne!(experiment.status.code(), Some(0));
}

#[test]
fn every_shipped_config_parses() {
    for entry in std::fs::read_dir(configs()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        rwlab::lab::ExperimentConfig::parse(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    }
}
