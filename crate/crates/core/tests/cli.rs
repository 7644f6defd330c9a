use std::path::PathBuf;
use std::process::{Command, Output};

fn negcurve(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_negcurve")).args(args).env_remove("NEGCURVE_THREADS").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn herzog_reports_the_semigroup_data() {
    let o = negcurve(&["herzog", "9", "10", "13"]);
    assert!(o.status.success());
    let out = stdout(&o);
    for key in ["\"s2\":3", "\"s3\":1", "\"t1\":1", "\"t3\":3", "\"u1\":2", "\"u2\":1"] {
        assert!(out.contains(key), "{key} not in {out}");
    }
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["triangle"]["vertices"].as_array().unwrap().len(), 3);
}

#[test]
fn search_finds_the_char_two_curve() {
    let o = negcurve(&["search", "9", "10", "13", "--char", "2", "--rmax", "3"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let hits = v["hits"].as_array().unwrap();
    assert_eq!(hits.len(), 1);
    assert_eq!(hits[0]["d"], 100);
    assert_eq!(hits[0]["r"], 3);
}

#[test]
fn search_without_hits_is_success() {
    let o = negcurve(&["search", "9", "10", "13", "--rmax", "1"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(v["hits"].as_array().unwrap().is_empty());
}

#[test]
fn check_nct_from_text_and_json() {
    let text = scratch("phi2.txt", "-v^2*w - v*w^2 + 3*v*w - 1\n");
    let o = negcurve(&["check-nct", text.to_str().unwrap(), "--r", "2"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"status\":\"accepted\""));

    let json = scratch(
        "phi2.json",
        r#"{"char":0,"terms":[{"a":2,"b":1,"c":-1},{"a":1,"b":2,"c":-1},{"a":1,"b":1,"c":3},{"a":0,"b":0,"c":-1}]}"#,
    );
    let o = negcurve(&["check-nct", json.to_str().unwrap(), "--r", "2", "--char", "5"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("\"char\":5"));

    let o = negcurve(&["check-nct", text.to_str().unwrap(), "--r", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("\"status\":\"rejected\""));
}

#[test]
fn thm36_text_output() {
    let text = scratch("phi2-thm36.txt", "-v^2*w - v*w^2 + 3*v*w - 1\n");
    let o = negcurve(&["--format", "text", "thm36", text.to_str().unwrap(), "--r", "2"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("c_squared: -1"), "{out}");
    assert!(out.contains("conditions:"));
}

#[test]
fn exit_codes() {
    assert_eq!(negcurve(&["herzog", "9", "10"]).status.code(), Some(1));
    assert_eq!(negcurve(&["herzog", "4", "6", "9"]).status.code(), Some(1));
    assert_eq!(negcurve(&["check-nct", "/nonexistent", "--r", "2"]).status.code(), Some(1));
    let bad = scratch("bad.txt", "v^^2 + 1");
    assert_eq!(negcurve(&["check-nct", bad.to_str().unwrap(), "--r", "2"]).status.code(), Some(1));
    assert_eq!(negcurve(&["--version"]).status.code(), Some(0));
}

#[test]
fn outputs_are_deterministic() {
    let args = ["search", "9", "10", "13", "--char", "2", "--rmax", "3", "--threads", "3"];
    let first = stdout(&negcurve(&args));
    let again = stdout(&negcurve(&["search", "9", "10", "13", "--char", "2", "--rmax", "3", "--threads", "1"]));
    assert_eq!(first, again);
    assert_eq!(stdout(&negcurve(&["classify", "--r", "2"])), stdout(&negcurve(&["classify", "--r", "2"])));
}

#[test]
fn ehrhart_and_class_group() {
    let tri = scratch("tri.json", r#"{"vertices":[[0,0],[2,0],[0,2]]}"#);
    let o = negcurve(&["ehrhart", tri.to_str().unwrap(), "--dilate", "2"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["lattice_count"], 15);
    assert_eq!(v["interior"], 3);

    let o = negcurve(&["classgroup", "2,-1;-2,-1;0,1"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["free_rank"], 1);
    assert_eq!(v["torsion"], serde_json::json!([2]));
}
