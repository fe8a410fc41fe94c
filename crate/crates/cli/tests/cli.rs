//! End-to-end tests of the binary: exit codes, file round trips, and
//! byte-identical report output.

use std::path::Path;
use std::process::{Command, Output};

fn anomaly(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_anomaly"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn resolve_writes_an_order_four_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let out = anomaly(
        &["resolve", "--group", "cyclic:2", "--omega", "nontrivial", "--out", "cert.json"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(dir.path().join("cert.json")).unwrap();
    let cert: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(cert["g"]["mul"].as_array().unwrap().len(), 4);

    // the certificate re-verifies from disk
    let out = anomaly(&["certificate-verify", "cert.json"], dir.path());
    assert_eq!(code(&out), 0);
}

#[test]
fn corrupted_certificate_fails_with_a_named_triple() {
    let dir = tempfile::tempdir().unwrap();
    let out = anomaly(
        &["resolve", "--group", "cyclic:2", "--omega", "nontrivial", "--out", "cert.json"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(dir.path().join("cert.json")).unwrap();
    let mut cert: serde_json::Value = serde_json::from_str(&text).unwrap();
    let values = cert["c"]["values"].as_object_mut().unwrap();
    let key = values.keys().next().unwrap().clone();
    let old = values[&key].as_str().unwrap().to_string();
    values.insert(key, serde_json::json!(if old == "1/2" { "0/1" } else { "1/2" }));
    std::fs::write(dir.path().join("bad.json"), serde_json::to_string(&cert).unwrap()).unwrap();

    let out = anomaly(&["certificate-verify", "bad.json"], dir.path());
    assert_eq!(code(&out), 1);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("dc != rho*omega at ("), "stdout: {stdout}");
}

#[test]
fn action_verify_runs_on_both_spaces() {
    let dir = tempfile::tempdir().unwrap();
    anomaly(
        &["resolve", "--group", "cyclic:3", "--omega", "nontrivial", "--out", "cert.json"],
        dir.path(),
    );
    for space in ["point", "group"] {
        let out = anomaly(&["action-verify", "--cert", "cert.json", "--space", space], dir.path());
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        assert!(String::from_utf8_lossy(&out.stdout).contains("pentagon"));
    }
}

#[test]
fn torus_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = anomaly(
        &["torus", "--m", "2", "--n", "2", "--a", "1", "--b", "1", "--c", "1"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    // out-of-range parameter is a usage error
    let out = anomaly(
        &["torus", "--m", "2", "--n", "2", "--a", "5", "--b", "0", "--c", "0"],
        dir.path(),
    );
    assert_eq!(code(&out), 2);
    // unknown flags are rejected
    let out = anomaly(&["torus", "--m", "2", "--n", "1", "--a", "0", "--b", "0", "--c", "0", "--bogus"], dir.path());
    assert_eq!(code(&out), 2);
}

#[test]
fn cohomology_prints_the_group() {
    let dir = tempfile::tempdir().unwrap();
    let out = anomaly(
        &["cohomology", "--group", "cyclic:4", "--coefficients", "qz:4", "--degree", "3"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("Z/4"));

    let out = anomaly(
        &["cohomology", "--group", "product:2x2", "--coefficients", "int", "--degree", "4"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).contains("Z/2 x Z/2 x Z/2"));
}

#[test]
fn cocycle_verify_reads_cochain_files() {
    let dir = tempfile::tempdir().unwrap();
    let cochain = serde_json::json!({
        "degree": 3,
        "level": 2,
        "group_order": 2,
        "values": {"1,1,1": "1/2"}
    });
    std::fs::write(dir.path().join("omega.json"), serde_json::to_string(&cochain).unwrap())
        .unwrap();
    let out = anomaly(
        &["cocycle-verify", "--group", "cyclic:2", "--cochain", "omega.json"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    // the class is nontrivial: witness search must come back empty
    let out = anomaly(
        &[
            "cocycle-verify",
            "--group",
            "cyclic:2",
            "--cochain",
            "omega.json",
            "--witness-level",
            "8",
        ],
        dir.path(),
    );
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stdout).contains("no coboundary witness"));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "coarse",
        "--group",
        "cyclic:2",
        "--omega",
        "nontrivial",
        "--length",
        "16",
        "--propagation",
        "4",
        "--trials",
        "20",
        "--seed",
        "9",
        "--json",
    ];
    let mut with = |name: &str| {
        let mut a: Vec<&str> = args.to_vec();
        a.push(name);
        let out = anomaly(&a, dir.path());
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read(dir.path().join(name)).unwrap()
    };
    let first = with("r1.json");
    let second = with("r2.json");
    assert_eq!(first, second);
    assert!(!first.is_empty());

    // resolve certificates are deterministic too
    let mut cert = |name: &str| {
        let out = anomaly(
            &["resolve", "--group", "cyclic:3", "--omega", "class:1", "--out", name],
            dir.path(),
        );
        assert_eq!(code(&out), 0);
        std::fs::read(dir.path().join(name)).unwrap()
    };
    assert_eq!(cert("c1.json"), cert("c2.json"));
}

#[test]
fn omega_formats() {
    let dir = tempfile::tempdir().unwrap();
    // explicit (a,b,c) on a product group
    let out = anomaly(
        &["resolve", "--group", "product:2x2", "--omega", "1,1,0", "--out", "k.json"],
        dir.path(),
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    // a named class index
    let out = anomaly(
        &["resolve", "--group", "cyclic:2", "--omega", "class:1", "--out", "c.json"],
        dir.path(),
    );
    assert_eq!(code(&out), 0);
    // nonsense is a usage error
    let out = anomaly(&["resolve", "--group", "cyclic:2", "--omega", "whatever"], dir.path());
    assert_eq!(code(&out), 2);
}
