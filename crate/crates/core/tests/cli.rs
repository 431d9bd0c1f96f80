use std::process::Command;

use fnx::cli::{parse_range, run, EXIT_CHECK, EXIT_OK, EXIT_USAGE};

fn fnx(args: &[&str]) -> (i32, String) {
    let mut argv = vec!["fnx"];
    argv.extend_from_slice(args);
    run(argv)
}

#[test]
fn bounds_table_contains_quoted_values() {
    let (code, out) = fnx(&["bounds", "--n", "2", "--k", "2"]);
    assert_eq!(code, EXIT_OK);
    for needle in ["| khovanskii | 5184 | 5184 |", "| new_fewnomial | 20.778112 | 20 |", "| bound_k2 | 15 | 15 |", "| lower_bound | 4 | 4 |"] {
        assert!(out.contains(needle), "missing {needle} in\n{out}");
    }
    let (_, out) = fnx(&["bounds", "--n", "2", "--k", "3", "--format", "csv"]);
    assert!(out.contains("2,3,bound_k3,100,100,false"), "{out}");
}

#[test]
fn bounds_json_is_parseable() {
    let (code, out) = fnx(&["bounds", "--n", "2..3", "--k", "2", "--json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["seed"], 0);
    let rows = v["rows"].as_array().unwrap();
    assert!(rows.iter().any(|r| r["n"] == 3 && r["formula"] == "khovanskii"));
}

#[test]
fn quad_example_counts_one_equals_one() {
    let (code, out) = fnx(&["verify-bijection", "examples/quad.json"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("counts 1=1"), "{out}");
}

#[test]
fn missing_input_is_usage_error() {
    assert_eq!(fnx(&["count", "missing.json"]).0, EXIT_USAGE);
    assert_eq!(fnx(&["no-such-command"]).0, EXIT_USAGE);
    assert_eq!(fnx(&["bounds", "--n", "x"]).0, EXIT_USAGE);
}

#[test]
fn malformed_json_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.json");
    std::fs::write(&p, "{\"n\": 1, \"support\": [[0]]").unwrap();
    assert_eq!(fnx(&["gale", p.to_str().unwrap()]).0, EXIT_USAGE);
}

#[test]
fn face_violation_exits_one_with_block() {
    // A pentagon has 5 vertices; claiming n = 1 breaks Φ_0 <= C(n+k+1, 1) = 4.
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("forms.json");
    std::fs::write(&p, r#"{"n": 1, "forms": [[1,-1,0],[1,0,-1],[0,1,0],[0,0,1],[5,-2,-4]]}"#).unwrap();
    let (code, out) = fnx(&["faces", p.to_str().unwrap()]);
    assert_eq!(code, EXIT_CHECK, "{out}");
    assert!(out.contains("## Violations"));
    let (code, out) = fnx(&["faces", p.to_str().unwrap(), "--json"]);
    assert_eq!(code, EXIT_CHECK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["passed"], false);
    assert!(!v["violations"].as_array().unwrap().is_empty());
}

#[test]
fn count_methods_agree_on_quad() {
    let (c1, exact) = fnx(&["count", "examples/quad.json", "--json"]);
    let (c2, newton) = fnx(&["count", "examples/quad.json", "--method", "newton", "--json"]);
    let (c3, gale) = fnx(&["count", "examples/quad.json", "--gale", "--json"]);
    assert_eq!((c1, c2, c3), (0, 0, 0));
    let count = |s: &str| serde_json::from_str::<serde_json::Value>(s).unwrap()["report"]["count"].as_u64().unwrap();
    assert_eq!((count(&exact), count(&newton), count(&gale)), (1, 1, 1));
}

#[test]
fn rolle_and_kappa_reports() {
    let (code, out) = fnx(&["rolle", "report", "examples/quad.json"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("exact positive count 1"));
    let (code, out) = fnx(&["kappa", "--n", "2", "--k", "2"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("| kappa_k2 | 5 | 5 |"), "{out}");
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("circle.json");
    std::fs::write(&p, fnx::suite::circle().to_json()).unwrap();
    let (code, out) = fnx(&["kappa", p.to_str().unwrap(), "--json"]);
    assert_eq!(code, EXIT_OK, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["components"]["kappa_estimate"], 1);
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        vec!["verify-bijection", "examples/quad.json", "--seed", "7"],
        vec!["count", "examples/quad.json", "--method", "newton", "--seed", "3", "--json"],
        vec!["faces", "examples/quad.json", "--json"],
    ] {
        assert_eq!(fnx(&args), fnx(&args));
    }
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_fnx");
    let st = Command::new(bin).args(["verify-bijection", "examples/quad.json"]).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&st.stdout).contains("counts 1=1"));
    let st = Command::new(bin).args(["count", "missing.json"]).output().unwrap();
    assert_eq!(st.status.code(), Some(2));
}

#[test]
fn precision_env_is_honoured() {
    let bin = env!("CARGO_BIN_EXE_fnx");
    let st = Command::new(bin).env("FNX_PRECISION", "256").args(["verify-bijection", "examples/quad.json", "--json"]).output().unwrap();
    assert_eq!(st.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&st.stdout).unwrap();
    assert_eq!(v["report"]["original"]["count"], 1);
}

#[test]
fn ranges_parse() {
    assert_eq!(parse_range("2..4").unwrap(), vec![2, 3, 4]);
    assert_eq!(parse_range("2-3,7").unwrap(), vec![2, 3, 7]);
    assert!(parse_range("4..2").is_err());
    assert!(parse_range("").is_err());
}

#[test]
fn sweep_paper_suite_exits_zero() {
    let (code, out) = fnx(&["sweep", "--suite", "paper"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert_eq!(out.matches("[PASS]").count(), 10, "{out}");
    assert_eq!(fnx(&["sweep", "--suite", "other"]).0, EXIT_USAGE);
}
