use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use cq_lab::harness::{ADVERSARY_CSV_HEADER, CSV_HEADER};

const BIN: &str = env!("CARGO_BIN_EXE_cq-lab");

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs")
}

fn cq_lab(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("CQ_LAB_MAX_DIM").output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SOURCE: &str = r#""source": {
    "states": [
      [[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
      [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]]
    ],
    "prior": [0.5, 0.5]
  }"#;

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn small_sweep(dir: &Path) -> PathBuf {
    write_config(
        dir,
        "sweep.json",
        &format!(
            r#"{{"mode": "sweep-n", {SOURCE}, "n_range": [2, 3, 4, 5], "rate": 0.3, "codebook_samples": 4, "seed": 5}}"#
        ),
    )
}

#[test]
fn entropy_mode_writes_csv_and_sidecar() {
    let out = tempfile::tempdir().unwrap();
    let cfg = configs().join("entropy.json");
    let o = cq_lab(&["entropy", "--config", path(&cfg), "--out", path(out.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));

    let csv = fs::read_to_string(out.path().join("entropy.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let cols: Vec<&str> = CSV_HEADER.split(',').collect();
    let chi = cols.iter().position(|c| *c == "chi").unwrap();
    assert_eq!(row[0], "entropy");
    assert_eq!(row[chi], "0.600876");

    let json: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.path().join("entropy.json")).unwrap()).unwrap();
    assert_eq!(json["config"]["mode"], "entropy");
    assert!(json["prng"].as_str().unwrap().starts_with("chacha20"));
}

#[test]
fn sweep_is_reproducible_for_a_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_sweep(dir.path());
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = cq_lab(&["run", "sweep-n", "--config", path(&cfg), "--out", path(out)]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    }
    let ca = fs::read(a.join("sweep-n.csv")).unwrap();
    let cb = fs::read(b.join("sweep-n.csv")).unwrap();
    assert_eq!(ca, cb);
    assert_eq!(String::from_utf8(ca).unwrap().lines().count(), 5);
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_sweep(dir.path());
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    cq_lab(&["sweep-n", "--config", path(&cfg), "--out", path(&a), "--seed", "5"]);
    cq_lab(&["sweep-n", "--config", path(&cfg), "--out", path(&b), "--seed", "6"]);
    let ca = fs::read_to_string(a.join("sweep-n.csv")).unwrap();
    let cb = fs::read_to_string(b.join("sweep-n.csv")).unwrap();
    assert!(ca.lines().nth(1).unwrap().ends_with(",5"));
    assert!(cb.lines().nth(1).unwrap().ends_with(",6"));
}

#[test]
fn bad_prior_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "bad.json",
        &format!(r#"{{"mode": "entropy", {}}}"#, SOURCE.replace("[0.5, 0.5]", "[0.5, 0.6]")),
    );
    let o = cq_lab(&["entropy", "--config", path(&cfg), "--out", path(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("prior"));
    assert!(!dir.path().join("entropy.csv").exists());
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "broken.json", "{\n  \"mode\": \"entropy\",\n  oops\n}");
    let o = cq_lab(&["entropy", "--config", path(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn mode_mismatch_is_rejected() {
    let o = cq_lab(&["capacity", "--config", path(&configs().join("entropy.json"))]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn max_dim_env_override_caps_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_sweep(dir.path());
    let o = Command::new(BIN)
        .args(["sweep-n", "--config", path(&cfg), "--out", path(dir.path())])
        .env("CQ_LAB_MAX_DIM", "8")
        .output()
        .unwrap();
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("16"));

    let o = Command::new(BIN)
        .args(["sweep-n", "--config", path(&cfg), "--out", path(dir.path())])
        .env("CQ_LAB_MAX_DIM", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compound_mode_writes_adversary_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "compound.json",
        r#"{"mode": "compound",
  "source": {"states": [[[[0.95, 0], [0, 0]], [[0, 0], [0.05, 0]]],
                        [[[0.6, 0], [0, 0]], [[0, 0], [0.4, 0]]]],
             "prior": [0.5, 0.5]},
  "channels": [
    [[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]],
    [[[[0, 0], [1, 0]], [[1, 0], [0, 0]]]]
  ],
  "n": 4, "rate": 0.25, "codebook_samples": 2, "seed": 3}"#,
    );
    let o = cq_lab(&["compound", "--config", path(&cfg), "--out", path(dir.path())]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let adv = fs::read_to_string(dir.path().join("compound_adversaries.csv")).unwrap();
    assert_eq!(adv.lines().next(), Some(ADVERSARY_CSV_HEADER));
    assert_eq!(adv.lines().count(), 3);
}

#[test]
fn self_test_passes_and_reports_overridden_failure() {
    let o = cq_lab(&["self-test"]);
    assert!(o.status.success());
    let text = String::from_utf8_lossy(&o.stdout);
    assert_eq!(text.matches("PASS").count(), 12, "{text}");

    let o = cq_lab(&["self-test", "--override-tolerance", "cascade-telescoping=-1"]);
    assert_eq!(o.status.code(), Some(1));
    let text = String::from_utf8_lossy(&o.stdout);
    let failed: Vec<&str> = text.lines().filter(|l| l.contains("FAIL")).collect();
    assert_eq!(failed.len(), 1, "{text}");
    assert!(failed[0].contains("cascade-telescoping"));
}
