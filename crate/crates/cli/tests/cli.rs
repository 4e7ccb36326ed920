use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn nsc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nsc"))
        .args(args)
        .output()
        .expect("nsc runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("nsc-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn ns_of_the_shift_language_is_three() {
    let out = nsc(&["ns", "--regex", "(0+1)*1(0+1)", "--alphabet", "0,1", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["exact"], true);
    assert_eq!(v["upper"], 3);
    assert_eq!(v["lower"], 3);
}

#[test]
fn power_syntax_expands() {
    let out = nsc(&["ns", "--regex", "(0+1)^*1(0+1)^3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["upper"], 5);
}

#[test]
fn witness_round_trips_through_the_aut_format() {
    let out = nsc(&["ns", "--regex", "(a+b)*a(a+b)(a+b)", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let path = temp_file("witness.aut", v["witness_aut"].as_str().unwrap());
    let from_regex = json(&nsc(&["min-dfa", "--regex", "(a+b)*a(a+b)(a+b)", "--format", "json"]));
    let from_witness = json(&nsc(&["min-dfa", "--aut", path.to_str().unwrap(), "--format", "json"]));
    assert_eq!(from_regex, from_witness);
    let atomic = nsc(&["check-atomic", "--aut", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&atomic), 0);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn m3_is_not_topological() {
    let out = nsc(&["classify", "--fixture", "F_M3", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["topological"], false);
    assert_eq!(v["extremal_markowsky"], v["unitriangular"]);
}

#[test]
fn json_output_is_byte_deterministic() {
    let args = ["report", "--fixture", "F_LN2", "--format", "json"];
    let (a, b) = (nsc(&args), nsc(&args));
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_paper_fails_on_exactly_the_unattainable_claims() {
    let out = nsc(&["verify-paper", "--format", "json"]);
    assert_eq!(code(&out), 1);
    let v = json(&out);
    let failed: Vec<&str> = v["claims"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["pass"] == false)
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert_eq!(
        failed,
        [
            "sub.tm_rsc_rev",
            "sub.syn_rev",
            "sub.monoids_iso",
            "sub.subatomic",
            "sub.nsyn",
            "classes.extremal_by_length"
        ]
    );
}

#[test]
fn bad_input_exits_with_two() {
    for args in [
        &["ns", "--regex", "(a"][..],
        &["ns", "--fixture", "F_NOPE"],
        &["ns"],
        &["ns", "--regex", "a", "--fixture", "F_M3"],
        &["chrobak", "--regex", "ab"],
    ] {
        let out = nsc(args);
        assert_eq!(code(&out), 2, "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("nsc: "), "{args:?}");
    }
    let path = temp_file("bad.aut", "states 2\nnonsense\n");
    assert_eq!(code(&nsc(&["min-dfa", "--aut", path.to_str().unwrap()])), 2);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn starved_search_exits_with_three_and_prints_bounds() {
    let out = nsc(&[
        "ns",
        "--fixture",
        "F_SUB",
        "--budget-nodes",
        "1",
        "--budget-states",
        "3",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 3);
    let v = json(&out);
    assert_eq!(v["exact"], false);
    assert!(v["lower"].as_u64().unwrap() <= v["upper"].as_u64().unwrap());
}

#[test]
fn chrobak_of_the_unary_example() {
    let out = nsc(&["chrobak", "--fixture", "F_U5", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!(v["atomic"]["states"].as_u64().unwrap() <= v["cnf"]["states"].as_u64().unwrap());
}

#[test]
fn dualize_and_dependency_pass_their_checks() {
    for cmd in [
        "dualize",
        "dependency",
        "lattice",
        "monoid",
        "residual",
        "check-subatomic",
    ] {
        let out = nsc(&[cmd, "--fixture", "F_LN1", "--format", "json"]);
        assert_eq!(code(&out), 0, "{cmd}");
        json(&out);
    }
}

#[test]
fn selftest_passes() {
    let out = nsc(&["selftest", "--format", "json", "--seed", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["disagreements"], 0);
    assert_eq!(v["duality_failures"], 0);
}
