use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn p1f(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_p1f"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn error_code(o: &Output) -> String {
    let v: Value = serde_json::from_slice(&o.stderr).expect("error JSON on stderr");
    v["error"].as_str().unwrap().to_string()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn dims(v: &Value) -> Vec<u64> {
    v["dims"].as_array().unwrap().iter().map(|d| d.as_u64().unwrap()).collect()
}

#[test]
fn compose_point_gives_constant_dims_and_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "s.json", r#"{"field":"Q","lo":-4,"hi":3,"torsion":[{"point":["2","1"],"mult":1}]}"#);
    let o = p1f(&["compose", "--spec", "s.json", "-o", "f.json"], d);
    assert!(o.status.success());
    assert_eq!(dims(&read_json(&d.join("f.json"))), vec![1; 8]);

    for out in ["g1.json", "g2.json"] {
        let o = p1f(&["compose", "--spec", "s.json", "--gauge-seed", "17", "-o", out], d);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(d.join("g1.json")).unwrap(), std::fs::read(d.join("g2.json")).unwrap());
}

#[test]
fn compose_h1_gives_generator_dims() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "s.json", r#"{"field":"Q","lo":-6,"hi":3,"h1":[{"i":0,"l":1}]}"#);
    assert!(p1f(&["compose", "--spec", "s.json", "-o", "f.json"], d).status.success());
    let want: Vec<u64> = (-6i64..=3).map(|n| (-n - 1).max(0) as u64).collect();
    assert_eq!(dims(&read_json(&d.join("f.json"))), want);
}

#[test]
fn decompose_reports_the_composing_data() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(
        d,
        "s.json",
        r#"{"field":"Q","lo":-7,"hi":4,"torsion":[{"point":["1","0"],"mult":2},{"point":["1/2","1"],"mult":1}],"h1":[{"i":-1,"l":1},{"i":0,"l":2}],"gauge_seed":3}"#,
    );
    assert!(p1f(&["compose", "--spec", "s.json", "-o", "f.json"], d).status.success());
    let o = p1f(&["decompose", "f.json", "-o", "r.json"], d);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_json(&d.join("r.json"));
    assert_eq!(r["h1"], serde_json::json!([{"i": -1, "l": 1}, {"i": 0, "l": 2}]));
    assert_eq!(
        r["torsion"],
        serde_json::json!([{"point": ["1/2", "1"], "mult": 1}, {"point": ["1", "0"], "mult": 2}])
    );
    assert_eq!(r["certificate"]["checked"], Value::Bool(true));
    assert!(r["properties"].as_array().unwrap().iter().all(|p| p["pass"] == Value::Bool(true)));
}

#[test]
fn classify_eval_and_cohomology() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "s.json", r#"{"field":"Q","lo":-5,"hi":3,"torsion":[{"point":["1","3"],"mult":1}],"gauge_seed":9}"#);
    write(d, "kq.json", r#"{"torsion":[{"point":["1","3"],"mult":1}]}"#);
    write(d, "h.json", r#"{"field":"Q","lo":-6,"hi":4,"h1":[{"i":0,"l":1}],"gauge_seed":2}"#);
    assert!(p1f(&["compose", "--spec", "s.json", "-o", "f.json"], d).status.success());
    assert!(p1f(&["compose", "--spec", "h.json", "-o", "g.json"], d).status.success());

    let o = p1f(&["classify", "f.json"], d);
    assert_eq!(stdout(&o).trim(), "integral_transform: yes; pullback: [1/3:1]");
    let o = p1f(&["classify", "g.json"], d);
    assert_eq!(stdout(&o).trim(), "integral_transform: no; pullback: none");

    let o = p1f(&["eval", "f.json", "--sheaf", "kq.json"], d);
    assert_eq!(stdout(&o).trim(), "1");

    write(d, "o.json", r#"{"bundle":[0,-3]}"#);
    let o = p1f(&["cohomology", "--sheaf", "o.json", "--twist", "-1"], d);
    assert_eq!(stdout(&o), "h0: 0\nh1: 3\n");
}

#[test]
fn verify_file_and_corpus() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    write(d, "s.json", r#"{"field":"Q","lo":-6,"hi":4,"torsion":[{"point":["0","1"],"mult":2}],"h1":[{"i":0,"l":1}],"gauge_seed":4}"#);
    assert!(p1f(&["compose", "--spec", "s.json", "-o", "f.json"], d).status.success());
    let o = p1f(&["verify", "f.json"], d);
    assert!(o.status.success());
    assert!(stdout(&o).lines().all(|l| l.starts_with("pass: ")));

    let o = p1f(&["verify", "--corpus", "5", "4"], d);
    assert!(o.status.success());
    assert!(stdout(&o).ends_with("corpus 5: 4/4 passed\n"));
}

#[test]
fn errors_carry_codes_and_leave_no_output() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();

    let o = p1f(&["decompose", "missing.json", "-o", "r.json"], d);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(error_code(&o), "IO");
    assert!(!d.join("r.json").exists());

    write(d, "bad.json", r#"{"field":"Q","lo":-1,"hi":3,"h1":[{"i":0,"l":1}]}"#);
    let o = p1f(&["compose", "--spec", "bad.json", "-o", "f.json"], d);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(error_code(&o), "FORMAT");
    assert!(!d.join("f.json").exists());

    // x0 and x1 do not commute
    write(
        d,
        "nc.json",
        r#"{"field":"Q","lo":0,"hi":2,"dims":[1,1,1],"x0":[[[1]],[[1]]],"x1":[[[1]],[[2]]]}"#,
    );
    let o = p1f(&["decompose", "nc.json", "-o", "r.json"], d);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(error_code(&o), "NOT_ADMISSIBLE");
    assert!(!d.join("r.json").exists());

    // dimensions still moving at the top
    write(d, "t.json", r#"{"field":"Q","lo":-3,"hi":4,"h1":[{"i":-3,"l":1}]}"#);
    assert!(p1f(&["compose", "--spec", "t.json", "-o", "h.json"], d).status.success());
    let mut v = read_json(&d.join("h.json"));
    v["hi"] = Value::from(2);
    let keep = |key: &str, n: usize| Value::Array(v[key].as_array().unwrap()[..n].to_vec());
    let (dd, x0, x1) = (keep("dims", 6), keep("x0", 5), keep("x1", 5));
    v["dims"] = dd;
    v["x0"] = x0;
    v["x1"] = x1;
    write(d, "short.json", &v.to_string());
    let o = p1f(&["decompose", "short.json", "-o", "r.json"], d);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_code(&o), "WINDOW_TOO_SMALL");

    // x1 acts by a rotation, whose eigenpoints are not rational
    write(
        d,
        "rot.json",
        r#"{"field":"Q","lo":0,"hi":3,"dims":[2,2,2,2],"x0":[[[1,0],[0,1]],[[1,0],[0,1]],[[1,0],[0,1]]],"x1":[[[0,1],[-1,0]],[[0,1],[-1,0]],[[0,1],[-1,0]]]}"#,
    );
    let o = p1f(&["decompose", "rot.json", "-o", "r.json"], d);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(error_code(&o), "SPLIT_FAILURE");

    let o = p1f(&["frobnicate"], d);
    assert_eq!(o.status.code(), Some(4));
    assert_eq!(error_code(&o), "USAGE");
}
