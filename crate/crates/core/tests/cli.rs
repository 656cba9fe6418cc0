use std::process::Command;

use gerbelab::cli::{list_fixtures, run, CommandRequest, InputSource, Operation, Status};
use serde_json::Value;

fn gerbelab(args: &[&str]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_gerbelab")).args(args).output().unwrap();
    (String::from_utf8(out.stdout).unwrap(), out.status.code().unwrap())
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let (out, code) = gerbelab(&full);
    (serde_json::from_str(&out).unwrap(), code)
}

#[test]
fn heisenberg_betti() {
    let (v, code) = json(&["lie", "betti", "--fixture", "heisenberg"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["betti"], serde_json::json!([1, 2, 2, 1]));
    let (text, _) = gerbelab(&["lie", "betti", "--fixture", "heisenberg"]);
    assert!(text.contains("betti: [1, 2, 2, 1]"), "{text}");
}

#[test]
fn kummer_table() {
    let (v, code) = json(&["orbifold", "cr", "--fixture", "kummer"]);
    assert_eq!(code, 0);
    let table: Vec<(String, u64)> = v["payload"]["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["degree"].as_str().unwrap().to_string(), r["dim"].as_u64().unwrap()))
        .collect();
    assert_eq!(table, [("0".to_string(), 1), ("2".to_string(), 22), ("4".to_string(), 1)]);
}

#[test]
fn non_cocycle_lists_tetrahedra() {
    let (v, code) = json(&["cech", "check2", "--fixture", "abelian_noncocycle"]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "check-failed");
    assert_eq!(v["payload"]["tetrahedron_violations"], serde_json::json!([[0, 1, 2, 3]]));
    assert!(!v["diagnostics"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_input_exits_2() {
    let dir = std::env::temp_dir().join("gerbelab-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    let (v, code) = json(&["lie", "betti", "--input", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert_eq!(v["status"], "invalid-input");
    assert_eq!(gerbelab(&["cech", "h", "--input", "/does/not/exist.json"]).1, 2);
    assert_eq!(gerbelab(&["lie", "betti", "--fixture", "no_such_fixture"]).1, 2);
    assert_eq!(gerbelab(&["lie", "nonsense", "--fixture", "heisenberg"]).1, 2);
}

#[test]
fn input_file_matches_fixture() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/rp2.json");
    let (from_file, _) = gerbelab(&["cech", "h", "--input", path]);
    let (from_fixture, _) = gerbelab(&["cech", "h", "--fixture", "rp2"]);
    assert_eq!(from_file, from_fixture);
    assert!(from_file.contains("group: Z/2"));
}

#[test]
fn fixtures_catalogue() {
    let (text, code) = gerbelab(&["fixtures"]);
    assert_eq!(code, 0);
    assert!(text.lines().count() >= 6);
    let (v, code) = json(&["fixtures"]);
    assert_eq!(code, 0);
    assert_eq!(v.as_array().unwrap().len(), list_fixtures().len());
    let (v, code) = json(&["fixtures", "--check"]);
    assert_eq!(code, 0, "{v:#}");
}

#[test]
fn every_fixture_behaves_as_declared() {
    for f in list_fixtures() {
        let req = CommandRequest::new(Operation::parse(&f.command).unwrap(), InputSource::Fixture(f.name.clone()));
        let report = run(&req);
        let want = if f.expect == "ok" { Status::Ok } else { Status::CheckFailed };
        assert_eq!(report.status, want, "{}: {:?}", f.name, report.diagnostics);
        if report.status == Status::CheckFailed {
            assert!(!report.diagnostics.is_empty());
        }
    }
}

/// Exact quantities are strings or integers; `det_value` is the one float.
fn no_floats(v: &Value) -> bool {
    match v {
        Value::Number(n) => !n.is_f64(),
        Value::Array(a) => a.iter().all(no_floats),
        Value::Object(m) => m.iter().all(|(k, x)| k == "det_value" || no_floats(x)),
        _ => true,
    }
}

#[test]
fn output_is_deterministic_and_round_trips() {
    for f in list_fixtures() {
        let mut args: Vec<&str> = f.command.split(' ').collect();
        args.extend(["--fixture", &f.name]);
        let mut full = vec!["--format", "json"];
        full.extend(&args);
        let (a, _) = gerbelab(&full);
        let (b, _) = gerbelab(&full);
        assert_eq!(a, b, "{}", f.name);
        let v: Value = serde_json::from_str(&a).unwrap();
        let back: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(back, v, "{}", f.name);
        assert!(no_floats(&v["payload"]), "{}: exact values must be strings", f.name);
    }
}

#[test]
fn surface_holonomy_is_printed_mod_one() {
    let (v, code) = json(&["gerbe", "surface", "--fixture", "torus_surface"]);
    assert_eq!(code, 0);
    assert_eq!(v["payload"]["holonomy"], "2/3 mod 1");
    let (_, code) = json(&["gerbe", "surface", "--input", concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures/rp2_obstruction.json")]);
    assert_eq!(code, 1);
}
