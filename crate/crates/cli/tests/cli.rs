use std::process::Command;

use fqdio::Field;
use fqdio_cli::{corpus_specs, SeriesSpec};
use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fqdio")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn mahler_exponent() {
    let v = json(&["exponent", "w", "--p", "3", "--series", "mahler", "--n", "1", "--hmax", "9"]);
    assert_eq!(v["kind"], "w");
    assert_eq!(v["value"]["num"], 2);
    assert_eq!(v["value"]["den"], 1);
    assert_eq!(v["field"]["p"], 3);
    assert_eq!(v["window"]["h_max"], 9);
    assert_eq!(v["skipped"], 0);
    assert!(v["witness"].as_str().unwrap().starts_with("(T^9)*X"));
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["kind", "field", "series", "window", "value", "witness", "per_level", "skipped"]);
}

#[test]
fn rational_cf() {
    let v = json(&["cf", "--p", "3", "--series", "rational:(T)/(T^2+1)"]);
    assert_eq!(v["quotients"], serde_json::json!(["0", "T", "T"]));
    assert_eq!(v["terminated"], true);
}

#[test]
fn other_exponents_and_classify() {
    for kind in ["wstar", "what", "lambda", "lambdahat"] {
        let v = json(&["exponent", kind, "--series", "mahler", "--n", "1", "--hmin", "2", "--hmax", "4", "--dmax", "4"]);
        assert!(v["value"].is_object(), "{kind}: {v}");
    }
    let v = json(&["classify", "--p", "3", "--series", "mahler", "--n", "1", "--hmax", "6"]);
    assert!(v["suggestion"].as_str().unwrap().starts_with("algebraic/A-regime at n ≥ 3"));
    assert!(v["disclaimer"].as_str().unwrap().contains("heuristic"));
}

#[test]
fn roots_and_reduce() {
    let v = json(&["roots", "--p", "3", "--poly", "(T)*X^3+(2*T)*X+1", "--prec", "12"]);
    assert_eq!(v["roots"].as_array().unwrap().len(), 3);
    let v = json(&["reduce", "cartop", "--poly", "X^2+T^2+T", "--series", "literal:T^-1"]);
    assert_eq!(v["result"], "X+T");
    let v = json(&["reduce", "pr", "--series", "literal:1+T^-1", "--poly", "X^2+T^2+T"]);
    assert_eq!(v["conditions"], serde_json::json!([true, true, true, true]));
}

#[test]
fn error_exit_codes() {
    let (code, _, err) = run(&["exponent", "w", "--series", "rational:(T)/("]);
    assert_eq!(code, 1);
    assert!(err.contains("parse error at 14"), "{err}");
    let (code, _, err) = run(&["exponent", "w"]);
    assert_eq!(code, 1);
    assert!(err.contains("--series"));
    let (code, _, _) = run(&["exponent", "nope"]);
    assert_eq!(code, 1);
    let (code, _, _) = run(&["corpus", "list", "--p", "4"]);
    assert_eq!(code, 1);
}

#[test]
fn verify_identities_passes() {
    let v = json(&["verify", "identities", "--seed", "3"]);
    assert_eq!(v["ok"], true);
    assert_eq!(v["reports"].as_array().unwrap().len(), 6);
}

#[test]
fn artifacts_are_deterministic() {
    let dirs: Vec<tempfile::TempDir> = (0..2).map(|_| tempfile::tempdir().unwrap()).collect();
    for (d, w) in dirs.iter().zip(["1", "4"]) {
        let out = d.path().to_str().unwrap();
        let (code, _, err) =
            run(&["exponent", "w", "--p", "3", "--series", "mahler", "--hmax", "4", "--n", "2", "--workers", w, "--out", out]);
        assert_eq!(code, 0, "{err}");
    }
    for name in ["report.json", "tables.csv", "witnesses.txt"] {
        let a = std::fs::read(dirs[0].path().join(name)).unwrap();
        let b = std::fs::read(dirs[1].path().join(name)).unwrap();
        assert!(!a.is_empty(), "{name}");
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn csv_output() {
    let (code, out, _) = run(&["exponent", "w", "--series", "mahler", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next().unwrap(), "kind,series,n,h_min,h_max,filter,level,num,den");
    assert!(lines.next().unwrap().starts_with("w,mahler,1,1,4,all,value,"));
}

#[test]
fn corpus_round_trips() {
    for f in [Field::prime(2).unwrap(), Field::prime(3).unwrap()] {
        for (name, s) in corpus_specs(&f, 0) {
            let again = SeriesSpec::parse(&s.format(&f), &f).unwrap();
            assert_eq!(again, s, "{name}");
        }
    }
    let v = json(&["corpus", "list", "--p", "3"]);
    assert!(v["corpus"].as_array().unwrap().iter().any(|e| e["spec"] == "mahler"));
}
