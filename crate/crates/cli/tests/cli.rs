use std::path::Path;
use std::process::{Command, Output};

use relcoh_cli::{builtins, load, run_scenario, scenario, InputError, Mode};

fn relcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_relcoh")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const DIAMOND: &str = r#"{
  "name": "diamond",
  "spaces": [{ "name": "D", "points": ["a", "b", "c", "d"], "hasse_edges": [["c", "a"], ["c", "b"], ["a", "d"], ["b", "d"]] }],
  "sheaves": [{
    "name": "F", "space": "D", "stalk_dims": { "a": 1, "b": 1, "c": 1, "d": 1 },
    "restrictions": [
      { "from": "c", "to": "a", "matrix": [["1"]] },
      { "from": "c", "to": "b", "matrix": [["1"]] },
      { "from": "a", "to": "d", "matrix": [["1"]] },
      { "from": "b", "to": "d", "matrix": [["RESTRICTION"]] }
    ]
  }],
  "operations": [{ "op": "cohomology", "sheaf": "F" }]
}"#;

#[test]
fn non_functorial_restrictions_are_rejected() {
    let sc = scenario::parse(&DIAMOND.replace("RESTRICTION", "2")).unwrap();
    match run_scenario(&sc, None, None) {
        Err(InputError::Validation { invariant, message }) => {
            assert_eq!(invariant, "functoriality");
            assert!(message.contains("\"c\"") && message.contains("\"d\""), "{message}");
        }
        other => panic!("expected a functoriality error, got {other:?}"),
    }
    let sc = scenario::parse(&DIAMOND.replace("RESTRICTION", "1")).unwrap();
    let rep = run_scenario(&sc, None, None).unwrap();
    assert!(rep.passed());
    assert_eq!(rep.operations[0].tables[0].dims[..2], [1, 0]);
}

#[test]
fn restriction_off_a_covering_pair_is_rejected() {
    let text = DIAMOND.replace(
        r#"{ "from": "b", "to": "d", "matrix": [["RESTRICTION"]] }"#,
        r#"{ "from": "c", "to": "d", "matrix": [["1"]] }"#,
    );
    let err = run_scenario(&scenario::parse(&text).unwrap(), None, None).unwrap_err();
    assert!(
        matches!(
            err,
            InputError::Validation {
                invariant: "restrictions along covering pairs",
                ..
            }
        ),
        "{err}"
    );
}

#[test]
fn parse_errors_carry_positions() {
    let err = scenario::parse("{\n  \"name\": \"x\",\n  \"operations\": [ { \"op\": \"cohomology\" ]\n}").unwrap_err();
    match err {
        InputError::Parse { line, column, .. } => {
            assert_eq!(line, 3);
            assert!(column > 0);
        }
        other => panic!("{other:?}"),
    }
    let err = scenario::parse(r#"{"name": "x", "operations": [], "extra": 1}"#).unwrap_err();
    assert!(err.to_string().contains("extra"), "{err}");
    let err = scenario::parse(r#"{"name": "x", "operations": [{"op": "no-such-op"}]}"#).unwrap_err();
    assert!(err.to_string().contains("no-such-op"), "{err}");
}

#[test]
fn names_resolve_before_anything_runs() {
    let text = r#"{"name": "x", "spaces": [{"name": "P", "points": ["p"]}], "sheaves": [{"name": "Q", "space": "P", "constant": 1}],
        "operations": [{"op": "cohomology", "sheaf": "Q"}, {"op": "cech", "cover": "missing", "sheaf": "Q"}]}"#;
    let err = run_scenario(&scenario::parse(text).unwrap(), None, None).unwrap_err();
    assert!(matches!(err, InputError::UnknownName { kind: "cover", .. }), "{err}");
}

#[test]
fn non_open_sets_are_rejected() {
    let text = r#"{"name": "x", "spaces": [{"name": "S", "points": ["o", "c"], "hasse_edges": [["c", "o"]]}],
        "sheaves": [{"name": "Q", "space": "S", "constant": 1}],
        "operations": [{"op": "cohomology", "sheaf": "Q", "relative_to": ["c"]}]}"#;
    let err = run_scenario(&scenario::parse(text).unwrap(), None, None).unwrap_err();
    assert!(matches!(err, InputError::Validation { .. }), "{err}");
    assert!(err.to_string().contains("{c}"), "{err}");
}

#[test]
fn every_builtin_parses_and_passes() {
    let names: Vec<_> = builtins::names().collect();
    assert!(names.len() >= 8);
    for n in names {
        let rep = run_scenario(&load(n).unwrap(), None, None).unwrap();
        assert!(rep.passed(), "{}", rep.to_text());
    }
}

#[test]
fn full_mode_gives_the_same_dimensions() {
    for n in ["pseudocircle", "three-set-cover", "pseudocircle-pair"] {
        let sc = load(n).unwrap();
        let a = run_scenario(&sc, None, Some(Mode::Alternating)).unwrap();
        let f = run_scenario(&sc, None, Some(Mode::Full)).unwrap();
        assert!(f.passed(), "{}", f.to_text());
        assert_eq!(f.mode, "full");
        for (x, y) in a.operations.iter().zip(&f.operations) {
            for (s, t) in x.tables.iter().zip(&y.tables) {
                let n = s.dims.len().min(t.dims.len());
                assert_eq!(s.dims[..n], t.dims[..n], "{} {}", x.op, s.title);
            }
        }
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let ok = relcoh(&["run", "point"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("summary: 3 operations"));

    let failing = write(
        dir.path(),
        "fail.json",
        r#"{"name": "x", "spaces": [{"name": "P", "points": ["p"]}], "sheaves": [{"name": "Q", "space": "P", "constant": 1}],
            "operations": [{"op": "cohomology", "sheaf": "Q", "expect": [2]}]}"#,
    );
    let out = relcoh(&["run", &failing]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("[FAIL]"));

    let bad = write(dir.path(), "bad.json", &DIAMOND.replace("RESTRICTION", "3"));
    let out = relcoh(&["run", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("functoriality"));

    assert_eq!(relcoh(&["run", "no-such-builtin"]).status.code(), Some(2));
}

#[test]
fn json_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let out = relcoh(&["run", "cone-map", "--json", "--report", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let file = std::fs::read_to_string(&path).unwrap();
    assert_eq!(file, String::from_utf8(out.stdout).unwrap());
    let v: serde_json::Value = serde_json::from_str(&file).unwrap();
    assert_eq!(v["summary"]["failed"], 0);
    let morphism = v["operations"]
        .as_array()
        .unwrap()
        .iter()
        .find(|o| o["op"] == "morphism-cohomology")
        .unwrap();
    assert_eq!(morphism["tables"][0]["dims"], serde_json::json!([0, 0, 1, 0]));
}

#[test]
fn list_and_verify_all() {
    let out = relcoh(&["list-builtins"]);
    let listed: Vec<String> = String::from_utf8(out.stdout).unwrap().lines().map(String::from).collect();
    assert_eq!(listed, builtins::names().map(String::from).collect::<Vec<_>>());
    let out = relcoh(&["verify-all"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        String::from_utf8(out.stdout)
            .unwrap()
            .lines()
            .filter(|l| l.ends_with("PASS"))
            .count(),
        listed.len()
    );
}
