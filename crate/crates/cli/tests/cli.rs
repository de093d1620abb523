use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output, Stdio};

use serde_json::Value;
use tanglekit::frac::numerator_closure;
use tanglekit::{Fraction, LinkId};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn tanglekit(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_tanglekit"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    let mut input = child.stdin.take().unwrap();
    input.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(input);
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn solve_products_fixture() {
    let path = fixture("products.json");
    let out = tanglekit(&["solve", "--config", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    for k in ["O1", "O2", "O3"] {
        assert_eq!(r[k], serde_json::json!({ "p": -1, "q": 4 }));
    }
    assert_eq!(r["T_minus_s23"], serde_json::json!({ "p": -1, "q": 2 }));
    assert_eq!(r["d_t_set"], serde_json::json!([0, 4]));
    assert_eq!(r["v_t"], -1);
}

#[test]
fn solve_without_solution_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("unknots.json");
    std::fs::write(&path, r#"{"l1":1,"l2":4,"l3":4,"inv1":3,"inv2":5,"inv3":3,"lt":2,"inv_t":3}"#).unwrap();
    let out = tanglekit(&["solve", "--config", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn bad_config_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(&path, r#"{"l1": 4, "colour": "red"}"#).unwrap();
    let out = tanglekit(&["solve", "--config", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn pjh_pipes_into_verify() {
    let pd = tanglekit(&["pjh", "--emit", "pd"], None);
    assert_eq!(pd.status.code(), Some(0));
    assert_eq!(stdout(&pd), std::fs::read_to_string(fixture("pjh.pd")).unwrap());
    let out = tanglekit(&["verify", "--in-trans"], Some(&stdout(&pd)));
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = json(&out);
    assert_eq!(r["verdict"], "pass");
    assert_eq!(r["equations"].as_array().unwrap().len(), 8);
    assert_eq!(r["t_minus_s23"], serde_json::json!({ "p": -1, "q": 2 }));
}

#[test]
fn verify_rejects_trivial_tangle() {
    let trivial = "tangle k=3 n=0\nB 1 1 2 2 3 3\nS a: 1\nS b: 2\nS c: 3\n";
    let out = tanglekit(&["verify"], Some(trivial));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "fail");
}

#[test]
fn verify_reports_parse_errors() {
    let out = tanglekit(&["verify"], Some("tangle k=3 n=1\nX 1 2 q 4\n"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn budget_exceeded_exits_3() {
    let pd = std::fs::read_to_string(fixture("pjh_curled9.pd")).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_tanglekit"))
        .args(["verify", "--pd", fixture("pjh_curled9.pd").to_str().unwrap()])
        .env("TANGLEKIT_BUDGET", "2")
        .output()
        .unwrap();
    assert!(pd.starts_with("tangle k=3 n=9"));
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
    let out = tanglekit(&["enumerate", "--max-crossings", "9"], None);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn linking_numbers_of_pjh() {
    let path = fixture("pjh.pd");
    let out = tanglekit(&["lk", "--pd", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["capped"], serde_json::json!([-2, -2, -2]));
    assert_eq!(r["pairwise"], serde_json::json!([-1, -1, -1]));
}

#[test]
fn linking_matrix_of_hopf_link() {
    let hopf = "tangle k=0 n=2\nX 1 3 2 4\nX 3 1 4 2\nB\nS a: 1,2\nS b: 3,4\n";
    let out = tanglekit(&["lk"], Some(hopf));
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["labels"], serde_json::json!(["a", "b"]));
    let l = r["matrix"][0][1].as_i64().unwrap();
    assert_eq!(l.abs(), 1);
    assert_eq!(r["matrix"][1][0].as_i64().unwrap(), l);
}

#[test]
fn identify_hopf_and_tangle_closure() {
    let hopf = "tangle k=0 n=2\nX 1 3 2 4\nX 3 1 4 2\nB\nS a: 1,2\nS b: 3,4\n";
    let out = tanglekit(&["identify"], Some(hopf));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out), serde_json::json!({ "type": "torus2", "k": 2 }));
    let zero = "tangle k=2 n=0\nB 1 1 2 2\nS a: 1\nS b: 2\n";
    let out = tanglekit(&["identify"], Some(zero));
    assert_eq!(out.status.code(), Some(0));
    let expected = LinkId::from_two_bridge(numerator_closure(Fraction::ZERO));
    assert_eq!(json(&out), serde_json::to_value(expected).unwrap());
}

#[test]
fn enumerate_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let unresolved = dir.path().join("unresolved");
    let out = tanglekit(
        &[
            "enumerate",
            "--max-crossings",
            "2",
            "--jobs",
            "2",
            "--out",
            report.to_str().unwrap(),
            "--unresolved-dir",
            unresolved.to_str().unwrap(),
        ],
        None,
    );
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    let totals: Vec<i64> = r["levels"].as_array().unwrap().iter().map(|l| l["total"].as_i64().unwrap()).collect();
    assert_eq!(totals, vec![5, 72, 1020]);
    assert!(unresolved.is_dir());
    assert_eq!(std::fs::read_dir(&unresolved).unwrap().count(), 0);
}

#[test]
fn enumerate_is_deterministic() {
    let a = tanglekit(&["enumerate", "--max-crossings", "2", "--jobs", "1"], None);
    let b = tanglekit(&["enumerate", "--max-crossings", "2", "--jobs", "3"], None);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn deduce_fixtures() {
    let empty = fixture("empty.json");
    let out = tanglekit(&["deduce", "--facts", empty.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["closure"], serde_json::json!([]));

    let cor = fixture("vertex_star_planar.json");
    let out = tanglekit(&["deduce", "--facts", cor.to_str().unwrap(), "--trace"], None);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!(r["closure"].as_array().unwrap().contains(&Value::from("Planar")));
    assert!(!r["trace"].as_array().unwrap().is_empty());

    let ce = fixture("three_at_vertex.json");
    let out = tanglekit(&["deduce", "--facts", ce.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert!(!r["closure"].as_array().unwrap().contains(&Value::from("Planar")));
    assert!(r.get("trace").is_none());
}

#[test]
fn contradictory_facts_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("facts.json");
    std::fs::write(&path, r#"["Planar", "NotPlanar"]"#).unwrap();
    let out = tanglekit(&["deduce", "--facts", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["consistent"], false);
}

#[test]
fn reduce_curled_fixtures() {
    for name in ["pjh_curled8.pd", "pjh_curled9.pd"] {
        let path = fixture(name);
        let out = tanglekit(&["reduce", "--pd", path.to_str().unwrap(), "--target", "6"], None);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert!(stdout(&out).starts_with("tangle k=3 n=6"), "{name}: {}", stdout(&out));
        let out = tanglekit(&["reduce", "--free", "--target", "7", "--pd", path.to_str().unwrap()], None);
        assert_eq!(out.status.code(), Some(0));
        assert!(stdout(&out).starts_with("tangle k=3 n=0"));
    }
    let path = fixture("pjh.pd");
    let out = tanglekit(&["reduce", "--pd", path.to_str().unwrap(), "--target", "5"], None);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(tanglekit(&["frobnicate"], None).status.code(), Some(2));
    assert_eq!(tanglekit(&["pjh", "--emit", "svg"], None).status.code(), Some(2));
    assert_eq!(tanglekit(&["deduce"], None).status.code(), Some(2));
}
