use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_unimono"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn entropy_of_a_spectrum() {
    let o = run(&["entropy", "--spectrum", "0.5,0.5", "--q", "2", "--s", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim().parse::<f64>().unwrap(), 0.5);
    let o = run(&["entropy", "--named", "bell", "--qubits", "2", "--q", "2"]);
    assert_eq!(stdout(&o).trim().parse::<f64>().unwrap(), 0.0);
    let o = run(&["entropy", "--spectrum", "0.5,0.6", "--q", "2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn measure_pure_and_mixed() {
    let o = run(&[
        "measure", "--named", "w", "--qubits", "3", "--q", "2", "--s", "1",
    ]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["value"].as_f64().unwrap() - 4.0 / 9.0).abs() < 1e-12);
    assert_eq!(v["bound"], "exact");

    let o = run(&[
        "measure", "--named", "w", "--qubits", "3", "--keep", "0,1", "--q", "2", "--s", "1",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["value"].as_f64().unwrap() - 2.0 / 9.0).abs() < 1e-6);
    assert_eq!(v["bound"], "upper");
    assert!(!v["witness"].as_array().unwrap().is_empty());
}

#[test]
fn check_exit_codes() {
    let o = run(&[
        "check",
        "--named",
        "w",
        "--qubits",
        "3",
        "--theorem",
        "1",
        "--q",
        "2",
        "--s",
        "1",
        "--alpha",
        "2",
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    assert!(stdout(&o).contains("confirmed"));

    let o = run(&[
        "check",
        "--named",
        "w",
        "--qubits",
        "3",
        "--theorem",
        "1",
        "--q",
        "1.5",
        "--s",
        "1",
        "--alpha",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());

    let o = run(&[
        "check",
        "--named",
        "ghz",
        "--qubits",
        "3",
        "--theorem",
        "1",
        "--q",
        "1.5",
        "--s",
        "1",
        "--alpha",
        "1",
        "--exploratory",
    ]);
    // Out-of-region runs are always inconclusive, which is not a failure.
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("inconclusive"));
}

#[test]
fn check_writes_json_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&[
        "check",
        "--named",
        "ghz",
        "--qubits",
        "3",
        "--theorem",
        "3",
        "--q",
        "1.5",
        "--s",
        "1",
        "--beta",
        "0.5",
        "--format",
        "json",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let row = if v.is_array() { v[0].clone() } else { v };
    assert_eq!(row["verdict"], "confirmed");
    assert_eq!(row["theorem"], "3");
}

fn sweep_to(config: &Path, out: &Path) -> Output {
    run(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ])
}

#[test]
fn sweeps_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("sweep.json");
    std::fs::write(
        &config,
        r#"{"states": [{"kind": "named", "name": "w", "n_qubits": 3},
                       {"kind": "haar", "n_qubits": 3, "count": 2}],
            "theorems": ["1", "3"], "params": [[2, 1]], "alphas": [2], "betas": [0.5]}"#,
    )
    .unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    assert!(sweep_to(&config, &a).status.success());
    assert!(sweep_to(&config, &b).status.success());
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    assert_eq!(String::from_utf8(first).unwrap().lines().count(), 1 + 3 * 2);
}

#[test]
fn sweep_rejects_empty_states() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("empty.json");
    std::fs::write(&config, r#"{"states": [], "params": [[2, 1]]}"#).unwrap();
    let o = sweep_to(&config, &dir.path().join("x.csv"));
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn acceptance_lists_criteria() {
    let o = run(&["acceptance", "--list"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 11);
    let o = run(&["acceptance", "--only", "1,3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(
        text.lines().filter(|l| l.starts_with("PASS")).count() == 2,
        "{text}"
    );
}
