use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gfe_core::{PrimitiveSolution, ProjPoint, TernaryForm};

fn workspace() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn gfe(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gfe")).args(args).current_dir(workspace()).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = gfe(args);
    assert!(out.status.success(), "{args:?} failed: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    gfe(args).status.code().expect("exit code")
}

#[test]
fn recover_c8_origin() {
    assert_eq!(stdout(&["recover", "C8", "0", "0", "1"]), "3 -2 1\n");
}

#[test]
fn c5_points_have_no_primitive_scaling() {
    let out = stdout(&["recover", "C5", "1", "0", "0"]);
    assert!(out.starts_with("no primitive scaling"), "{out}");
}

#[test]
fn component_group_at_three() {
    assert_eq!(stdout(&["component-group", "fixtures/c5_p3.mat"]), "Z/7\n");
}

#[test]
fn theorem_triples() {
    let out = stdout(&["verify-theorem"]);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines.len(), 16);
    for t in ["2213459 1414 65", "-2213459 1414 65", "21063928 -76271 17", "-21063928 -76271 17"] {
        assert!(lines.contains(&t), "missing {t}");
    }
    for l in lines {
        let s: PrimitiveSolution = l.parse().unwrap();
        assert_eq!(s.to_string(), l);
    }
}

#[test]
fn covariant_output_reparses() {
    let out = stdout(&["covariants", "C1"]);
    let mut forms = 0;
    for line in out.lines() {
        let (name, value) = line.split_once(' ').unwrap();
        match name {
            "psi6" | "psi14" | "psi21" => {
                let f: TernaryForm = value.parse().unwrap();
                assert_eq!(f.to_string(), value);
                forms += 1;
            }
            "psi0" => assert!(gfe_core::arith::parse_factored(value).is_ok()),
            "syzygy" => assert_eq!(value, "holds"),
            other => panic!("unexpected line {other}"),
        }
    }
    assert_eq!(forms, 3);
}

#[test]
fn twist_output_reparses() {
    let out = stdout(&["twists", "from-curve", "-1", "0"]);
    let f: TernaryForm = out.trim().parse().unwrap();
    assert_eq!(f.to_string(), out.trim());
    assert_eq!(f.degree(), 4);
}

#[test]
fn search_points_lie_on_curve_and_reparse() {
    let out = stdout(&["search", "C1", "--bound", "12"]);
    let f = gfe_core::twists::catalog().get("C1").unwrap().form.clone();
    assert!(!out.is_empty());
    for line in out.lines() {
        let p: ProjPoint = line.parse().unwrap();
        assert_eq!(p.to_string(), line);
        assert_eq!(f.eval_int(p.coords()).to_string(), "0");
    }
}

#[test]
fn subset_search_keeps_fewer_points() {
    let all = stdout(&["search", "C5", "--bound", "6"]);
    let sub = stdout(&["search", "C5", "--bound", "6", "--subset"]);
    for l in sub.lines() {
        assert!(all.lines().any(|a| a == l));
    }
}

#[test]
fn j_value_is_exact_rational() {
    let out = stdout(&["j", "C5", "1", "0", "0"]);
    assert_eq!(out.trim(), "140608/3");
}

#[test]
fn counting_commands() {
    assert_eq!(stdout(&["count", "C9", "--p", "13", "--k", "2"]), "196\n");
    let out = stdout(&["jacobian-order", "C9", "--p", "13"]);
    assert!(out.contains("counts 14 196 2198"), "{out}");
    assert!(out.ends_with("order 2380\n"), "{out}");
}

#[test]
fn sieve_chain_empties() {
    let files = ["c5_p2", "c5_p3", "c5_p23", "c5_p97", "c5_p13"].map(|f| format!("fixtures/sieve/{f}.sieve"));
    let mut args = vec!["sieve"];
    args.extend(files.iter().map(String::as_str));
    let out = stdout(&args);
    assert_eq!(out.lines().count(), 5);
    assert!(out.lines().last().unwrap().ends_with("(none)"));
}

#[test]
fn septic_points() {
    assert_eq!(stdout(&["septic", "1", "1", "12", "--bound", "4"]), "1:-1:0\n");
}

#[test]
fn local_test_verdict_lines() {
    let out = stdout(&["localtest", "C5", "--p", "2"]);
    assert_eq!(out, "2 pass\n2 (1:0+2^1Z:0+2^1Z) admissible\n2 (1:1+2^1Z:1+2^1Z) admissible\n");
}

#[test]
fn exit_codes() {
    assert_eq!(code(&["recover", "x^^4", "1", "0", "0"]), 2);
    assert_eq!(code(&["recover", "C8", "0", "0", "zero"]), 2);
    assert_eq!(code(&["covariants", "C1", "--bogus"]), 2);
    assert_eq!(code(&["component-group", "no/such/file.mat"]), 2);
    // Psi0 vanishes on the Fermat quartic
    assert_eq!(code(&["recover", "x^4+y^4+z^4", "1", "0", "0"]), 3);
    assert_eq!(code(&["recover", "C8", "1", "1", "1"]), 3);
    assert_eq!(code(&["localtest", "C5", "--p", "4"]), 3);
    assert_eq!(code(&["jacobian-order", "C5", "--p", "3"]), 3);
    assert_eq!(code(&["localtest", "C5", "--p", "2", "--max-depth", "0"]), 4);
}

#[test]
fn max_depth_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_gfe"))
        .args(["localtest", "C5", "--p", "2"])
        .env("GFE_MAX_DEPTH", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("2 inconclusive"));
}

fn golden(name: &str, args: &[&str]) {
    let expected = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name))
        .expect("golden file");
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let got = stdout(&full);
    for line in got.lines() {
        serde_json::from_str::<serde_json::Value>(line).expect("each line is one JSON object");
    }
    assert_eq!(got, expected, "{name}");
}

#[test]
fn golden_json_lines() {
    golden("verify_theorem.jsonl", &["verify-theorem"]);
    golden("localtest_c5_p2.jsonl", &["localtest", "C5", "--p", "2"]);
    golden("component_group_c5_p3.jsonl", &["component-group", "fixtures/c5_p3.mat"]);
    golden("jacobian_order_c5_p5.jsonl", &["jacobian-order", "C5", "--p", "5"]);
    golden("sieve_p97.jsonl", &["sieve", "fixtures/sieve/c5_p97.sieve"]);
}

#[test]
fn json_is_deterministic() {
    let a = stdout(&["--format", "json", "search", "C3", "--bound", "10"]);
    let b = stdout(&["--format", "json", "search", "C3", "--bound", "10"]);
    assert_eq!(a, b);
}
