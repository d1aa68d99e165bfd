use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const DKK: &str = r#"
[space]
kind = "lp"
p = 2.0

[basis]
kind = "summing"

[partition]
kind = "dyadic"
blocks = 4

[run]
seed = 5
trials = 50
m_max = 5
"#;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dkklab"))
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn norm_of_a_unit_vector_basis() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "n.toml", "[space]\nkind = \"lp\"\np = 2.0\n[norm]\nvectors = [[3.0, -4.0], [1.0]]\n");
    let out = run(&["norm", "-c", s(&cfg)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("key,value,exact,witness,runtime_ms"));
    assert!(lines.next().unwrap().starts_with("norm[0],5.0,true,,"));
    assert!(lines.next().unwrap().starts_with("norm[1],1.0,true,,"));
}

#[test]
fn csv_report_rechecks_against_its_config() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.toml", DKK);
    let report = dir.path().join("c.csv");
    let out = run(&["constants", "-c", s(&cfg), "-o", s(&report)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.contains("dkk_lb[4]") && text.contains("fit.slope"));

    let out = run(&["--recheck", s(&report), "-c", s(&cfg)]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
    assert!(!String::from_utf8_lossy(&out.stdout).contains("MISMATCH"));

    // without the config a CSV report cannot be rechecked
    assert_eq!(run(&["--recheck", s(&report)]).status.code(), Some(2));
}

#[test]
fn tampered_values_fail_the_recheck() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "c.toml", DKK);
    let report = dir.path().join("c.json");
    assert!(run(&["constants", "-c", s(&cfg), "--format", "json", "-o", s(&report)]).status.success());
    let out = run(&["--recheck", s(&report)]);
    assert!(out.status.success());

    let mut json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let rows = json["rows"].as_array_mut().unwrap();
    let row = rows.iter_mut().find(|r| r["key"] == "dkk_lb[3]").unwrap();
    row["value"] = serde_json::json!(row["value"].as_f64().unwrap() + 0.5);
    std::fs::write(&report, serde_json::to_string(&json).unwrap()).unwrap();
    let out = run(&["--recheck", s(&report)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("MISMATCH dkk_lb[3]"));
}

#[test]
fn verify_is_byte_identical_without_timing() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "v.toml", DKK);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = run(&["verify", "-c", s(&cfg), "--no-timing", "-o", s(p)]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let text = std::fs::read_to_string(&a).unwrap();
    assert!(text.contains("tail_projection.violations,0.0"));
}

#[test]
fn seed_flag_overrides_and_changes_results() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "g.toml", DKK);
    let one = run(&["greedy", "-c", s(&cfg), "--no-timing", "--seed", "1"]);
    let two = run(&["greedy", "-c", s(&cfg), "--no-timing", "--seed", "2"]);
    assert!(one.status.success() && two.status.success());
    assert_ne!(one.stdout, two.stdout);
}

#[test]
fn config_errors_exit_with_two() {
    let dir = TempDir::new().unwrap();
    let typo = write(&dir, "t.toml", "[space]\nkind = \"lp\"\np = 2.0\n[run]\nsead = 1\n");
    let out = run(&["weights", "-c", s(&typo)]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("sead") && err.contains("line"), "{err}");

    let unseeded = write(&dir, "u.toml", "[space]\nkind = \"lp\"\np = 2.0\n");
    let out = run(&["constants", "-c", s(&unseeded)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));

    let huge = write(&dir, "h.toml", "[space]\nkind = \"lp\"\np = 2.0\n[partition]\nkind = \"dyadic\"\nblocks = 25\n");
    assert_eq!(run(&["verify", "-c", s(&huge), "--seed", "1"]).status.code(), Some(2));
}

#[test]
fn weights_of_a_square_root_weight() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "w.toml", "[space]\nkind = \"lp\"\np = 2.0\n[run]\nhorizon = 1000\n");
    let out = run(&["weights", "-c", s(&cfg), "--format", "json"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let get = |k: &str| json["rows"].as_array().unwrap().iter().find(|r| r["key"] == k).unwrap()["value"].as_f64().unwrap();
    assert_eq!(get("lrp.b"), 4.0);
    assert_eq!(get("urp.b"), 4.0);
    assert!(get("dini") <= 2.0);
}

#[test]
fn greedy_json_witnesses_recheck_exactly() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "g.toml", DKK);
    let report = dir.path().join("g.json");
    assert!(run(&["greedy", "-c", s(&cfg), "--format", "json", "-o", s(&report)]).status.success());
    let out = run(&["--recheck", s(&report)]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{text}");
    for line in text.lines().filter(|l| l.starts_with("OK")) {
        let mut parts = line.split_whitespace().skip(2);
        let reported = parts.next().unwrap().trim_start_matches("reported=");
        let recomputed = parts.next().unwrap().trim_start_matches("recomputed=");
        assert_eq!(reported, recomputed, "{line}");
    }
    assert!(text.contains("democracy[3]"));
}
