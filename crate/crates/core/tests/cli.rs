//! End-to-end runs of the `geoinv` binary.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn geoinv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geoinv"))
        .args(args)
        .env_remove("GEOINV_MODE")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn gen_to(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut all = vec!["gen"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", path.to_str().unwrap()]);
    let out = geoinv(&all);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn gen_is_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    for mode in ["rational", "float"] {
        let args = [
            "--n", "3", "--seed", "42", "--s1", "1", "--s2", "1", "--s3", "0", "--mode", mode,
        ];
        let a = gen_to(dir.path(), "a.json", &args);
        let first = std::fs::read(&a).unwrap();
        let b = gen_to(dir.path(), "b.json", &args);
        assert_eq!(first, std::fs::read(&b).unwrap(), "{mode}");
        assert_eq!(json(&a)["mode"], mode);
    }
}

#[test]
fn geodesic_mapping_fixes_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen_to(
        dir.path(),
        "g.json",
        &["--mapping", "geodesic", "--seed", "3"],
    );
    let v = json(&path);
    assert_eq!(v["mapping"], "geodesic");
    assert_eq!(v["flags"], serde_json::json!({"s1": 1, "s2": 0, "s3": 0}));
}

#[test]
fn agm3_file_reloads_with_constraint_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen_to(
        dir.path(),
        "a.json",
        &["--mapping", "agm3", "--p", "2", "--seed", "4"],
    );
    let v = json(&path);
    assert_eq!(v["p"], 2);
    for field in ["agm_phi", "agm_nu", "agm_mu", "agm_sigma"] {
        assert!(v["fields"].get(field).is_some(), "{field}");
    }
    let report = dir.path().join("r.json");
    let out = geoinv(&[
        "check",
        path.to_str().unwrap(),
        "--report",
        report.to_str().unwrap(),
    ]);
    let r = json(&report);
    let rows = r["consistency"].as_array().unwrap();
    let constraint = rows
        .iter()
        .find(|row| row["name"] == "agm.constraint.source")
        .unwrap();
    assert_eq!(constraint["pass"], true);
    assert_eq!(r["pass"], code(&out) == 0);
}

#[test]
fn conflicting_agm3_flags_are_usage_errors() {
    let out = geoinv(&["gen", "--mapping", "agm3", "--s2", "1"]);
    assert_eq!(code(&out), 2);
    let out = geoinv(&["gen", "--mapping", "general", "--p", "1"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn check_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = gen_to(
        dir.path(),
        "good.json",
        &["--seed", "8", "--s1", "0", "--s2", "0", "--s3", "0"],
    );
    let out = geoinv(&["check", good.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], true);

    // one altered entry of the stored image connection must be detected
    let mut v = json(&good);
    v["fields"]["L_bar"]["value"][0] = serde_json::json!("123/1");
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, serde_json::to_string_pretty(&v).unwrap()).unwrap();
    let out = geoinv(&["check", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], false);

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\"dimension\": 3,").unwrap();
    assert_eq!(code(&geoinv(&["check", broken.to_str().unwrap()])), 2);

    let mut v = json(&good);
    v["fields"]["u"]["value"] = serde_json::json!(["1/2"]);
    std::fs::write(&broken, serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(code(&geoinv(&["check", broken.to_str().unwrap()])), 2);

    assert_eq!(
        code(&geoinv(&[
            "check",
            dir.path().join("missing.json").to_str().unwrap()
        ])),
        2
    );
}

#[test]
fn general_instances_with_all_flags_fail_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen_to(
        dir.path(),
        "f.json",
        &["--seed", "8", "--s1", "1", "--s2", "1", "--s3", "1"],
    );
    let out = geoinv(&["check", path.to_str().unwrap(), "--no-diagnostics"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("weyl.first_over"));
}

#[test]
fn identities_pass() {
    let out = geoinv(&["identities", "--n", "3", "--n", "4", "--count", "3"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], true);
    let out = geoinv(&["identities", "--n", "3", "--count", "2", "--mode", "float"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn eval_delta_ricci_and_invariant_expression() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen_to(
        dir.path(),
        "e.json",
        &["--n", "3", "--seed", "5", "--s1", "1", "--s3", "1"],
    );
    let file = path.to_str().unwrap();
    let eval = |expr: &str, space: &str| {
        let out = geoinv(&["eval", file, expr, "--space", space]);
        assert_eq!(
            code(&out),
            0,
            "{expr}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
        serde_json::from_slice::<serde_json::Value>(&out.stdout).unwrap()
    };
    assert_eq!(
        eval("d{i;j}", "source"),
        serde_json::json!([
            ["1/1", "0/1", "0/1"],
            ["0/1", "1/1", "0/1"],
            ["0/1", "0/1", "1/1"]
        ])
    );
    assert_eq!(eval("R{a;ija}", "source"), eval("R{;ij}", "source"));
    assert_eq!(
        eval("alt(R{;ij}; i, j)", "source"),
        eval("alt(R{;ij}; i, j)", "target")
    );
    assert_ne!(eval("R{;ij}", "source"), eval("R{;ij}", "target"));
}

#[test]
fn eval_errors_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen_to(dir.path(), "e.json", &["--n", "3"]);
    let file = path.to_str().unwrap();
    let out = geoinv(&["eval", file, "R{i;jk} + d{i;j}"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("column"));
    assert_eq!(code(&geoinv(&["eval", file, "nope{i;j}"])), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&geoinv(&[])), 2);
    assert_eq!(code(&geoinv(&["frobnicate"])), 2);
    assert_eq!(code(&geoinv(&["gen", "--s1", "3"])), 2);
    assert_eq!(code(&geoinv(&["gen", "--mode", "complex"])), 2);
    assert_eq!(code(&geoinv(&["gen", "--n", "1"])), 2);
}
