use std::path::PathBuf;
use std::process::Command;

fn data(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "examples", "data", name]
        .iter()
        .collect();
    p.display().to_string()
}

fn lenslab(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_lenslab"))
        .args(args)
        .output()
        .expect("run lenslab");
    let text =
        String::from_utf8_lossy(&out.stdout).into_owned() + &String::from_utf8_lossy(&out.stderr);
    (out.status.code().expect("exit code"), text)
}

#[track_caller]
fn expect(args: &[&str], code: i32, fragment: &str) -> String {
    let (got, text) = lenslab(args);
    assert_eq!(got, code, "exit code of {args:?}\n{text}");
    assert!(
        text.contains(fragment),
        "`{fragment}` missing from {args:?}:\n{text}"
    );
    text
}

#[test]
fn validate_category() {
    expect(
        &["validate", &data("cat2.json")],
        0,
        "PASS validate: category with 2 objects, 3 arrows",
    );
}

#[test]
fn validate_missing_composite() {
    expect(
        &["validate", &data("missing_composite.json")],
        1,
        "MissingComposite",
    );
}

#[test]
fn validate_malformed_json() {
    expect(&["validate", &data("malformed.json")], 2, "malformed JSON");
}

#[test]
fn validate_missing_file() {
    expect(&["validate", &data("nope.json")], 2, "error:");
}

#[test]
fn validate_each_kind() {
    expect(
        &["validate", &data("pararrow_get.json")],
        0,
        "p-functor over 2 parameters",
    );
    expect(
        &["validate", &data("chain_k.json")],
        0,
        "Putget0 holds on each",
    );
    expect(&["validate", &data("quit_it.json")], 0, "database lens");
    expect(
        &["validate", &data("scenario_w.json")],
        0,
        "1 deleted, 1 inserted",
    );
    expect(
        &["validate", &data("two_layer.json")],
        0,
        "learner with 8 parameters",
    );
}

#[test]
fn validate_bad_learner() {
    expect(
        &["validate", &data("unknown_err.json")],
        1,
        "UnknownErrorFn",
    );
}

#[test]
fn check_identity_default_laws() {
    let t = expect(&["check", &data("identity_lens.json")], 0, "PASS stability");
    assert!(t.contains("PASS putget"));
}

#[test]
fn check_stability_violator() {
    let t = expect(&["check", &data("unstable_lens.json")], 1, "FAIL stability");
    assert!(t.contains("at (p=*, S=X, v=idX)"), "{t}");
}

#[test]
fn check_unknown_law() {
    expect(
        &["check", &data("identity_lens.json"), "--laws", "bogus"],
        2,
        "unknown law `bogus`",
    );
}

#[test]
fn check_putput_is_diagnostic() {
    let t = expect(
        &["check", &data("scenario_w_trans.json"), "--laws", "putput"],
        0,
        "diagnostics:",
    );
    assert!(t.contains("putput"));
    assert!(!t.contains("PASS") && !t.contains("FAIL"), "{t}");
}

#[test]
fn check_all_laws_on_table_lens() {
    let t = expect(
        &[
            "check",
            &data("chain_k.json"),
            "--laws",
            "stability,putget,hippocratic,putput",
        ],
        0,
        "PASS hippocratic",
    );
    assert!(t.contains("diagnostics:"));
}

#[test]
fn check_scenario_with_policy_flag() {
    expect(
        &["check", &data("scenario_w.json"), "--policy", "trans"],
        0,
        "sampled: 2 points",
    );
}

#[test]
fn check_rejects_non_lens() {
    expect(&["check", &data("cat2.json")], 2, "not a lens");
}

#[test]
fn compose_seq_tables_validates() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("kl.json");
    let out = out.to_str().unwrap();
    expect(
        &[
            "compose",
            "--seq",
            &data("chain_k.json"),
            &data("chain_l.json"),
            "-o",
            out,
        ],
        0,
        "PASS compose",
    );
    expect(&["validate", out], 0, "PASS validate: lens with");
    expect(&["check", out], 0, "PASS putget");
}

#[test]
fn compose_par_tables() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("par.json");
    let out = out.to_str().unwrap();
    expect(
        &[
            "compose",
            "--par",
            &data("identity_lens.json"),
            &data("chain_k.json"),
            "-o",
            out,
        ],
        0,
        "PASS compose",
    );
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.contains("(X|"), "product space objects missing");
    expect(&["check", out], 0, "PASS stability");
}

#[test]
fn compose_to_stdout_json() {
    let t = expect(
        &[
            "--json",
            "compose",
            "--seq",
            &data("chain_k.json"),
            &data("chain_l.json"),
        ],
        0,
        "\"lens\"",
    );
    assert!(!t.contains("PASS compose"), "--json must suppress text");
    let v: serde_json::Value = serde_json::from_str(&t).unwrap();
    assert_eq!(v["status"], "pass");
}

#[test]
fn compose_boundary_mismatch() {
    expect(
        &[
            "compose",
            "--seq",
            &data("chain_l.json"),
            &data("chain_k.json"),
        ],
        2,
        "BoundaryMismatch",
    );
}

#[test]
fn compose_database_descriptor_is_checkable() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("quit_seq.json");
    let out = out.to_str().unwrap();
    expect(
        &[
            "compose",
            "--seq",
            &data("quit_it.json"),
            &data("quit_ml.json"),
            "-o",
            out,
        ],
        0,
        "database lens",
    );
    let text = std::fs::read_to_string(out).unwrap();
    assert!(text.contains("\"compose\": \"seq\""), "{text}");
    expect(&["check", out], 0, "PASS putget");
}

#[test]
fn compose_database_par_is_rejected() {
    expect(
        &[
            "compose",
            "--par",
            &data("quit_it.json"),
            &data("quit_ml.json"),
        ],
        2,
        "no file form",
    );
}

#[test]
fn assoc_tables() {
    expect(
        &[
            "assoc",
            &data("chain_k.json"),
            &data("chain_l.json"),
            &data("chain_m.json"),
        ],
        0,
        "PASS associativity",
    );
}

#[test]
fn assoc_rejects_database_lenses() {
    expect(
        &[
            "assoc",
            &data("quit_it.json"),
            &data("quit_ml.json"),
            &data("quit_ml.json"),
        ],
        2,
        "compares table lenses",
    );
}

#[test]
fn equiv_with_iota() {
    expect(
        &[
            "equiv",
            &data("unit_k.json"),
            &data("chain_k.json"),
            "--iota",
            &data("unitor.json"),
        ],
        0,
        "PASS equivalence: 12 points checked",
    );
}

#[test]
fn equiv_search() {
    expect(
        &["equiv", &data("unit_k.json"), &data("chain_k.json")],
        0,
        "witness found",
    );
}

#[test]
fn equiv_fails() {
    expect(
        &[
            "equiv",
            &data("identity_lens.json"),
            &data("unstable_lens.json"),
        ],
        1,
        "FAIL equivalence",
    );
}

#[test]
fn equiv_bad_iota() {
    expect(
        &[
            "equiv",
            &data("chain_k.json"),
            &data("chain_k.json"),
            "--iota",
            &data("unitor.json"),
        ],
        2,
        "iota",
    );
}

#[test]
fn propagate_quit() {
    let t = expect(
        &["propagate", "--scenario", &data("scenario_w.json")],
        0,
        "PASS propagate",
    );
    assert!(t.contains("#M': Mary ?#M'∈{ML}"), "{t}");
    assert!(t.contains("deleted: #M"));
}

#[test]
fn propagate_trans() {
    let t = expect(
        &["propagate", "--scenario", &data("scenario_w_trans.json")],
        0,
        "deleted: none",
    );
    assert!(t.contains("#M: Mary ?#M∉{ML}"), "{t}");
}

#[test]
fn propagate_policy_override() {
    expect(
        &[
            "propagate",
            "--scenario",
            &data("scenario_w.json"),
            "--policy",
            "trans",
        ],
        0,
        "?#M∉{ML}",
    );
}

#[test]
fn propagate_param_inapplicable() {
    expect(
        &["propagate", "--scenario", &data("scenario_w_param.json")],
        1,
        "PolicyInapplicable",
    );
}

#[test]
fn propagate_unknown_policy() {
    expect(
        &[
            "propagate",
            "--scenario",
            &data("scenario_w.json"),
            "--policy",
            "nope",
        ],
        2,
        "unknown policy",
    );
}

#[test]
fn compare_quit() {
    expect(
        &["compare", "--scenario", &data("scenario_w.json")],
        0,
        "long and composed puts agree",
    );
}

#[test]
fn compare_trans() {
    let t = expect(
        &["compare", "--scenario", &data("scenario_w_trans.json")],
        0,
        "puts differ",
    );
    assert!(t.contains("?#M∈{Testing}"), "{t}");
    assert!(t.contains("long ; delta = composed: yes"));
}

#[test]
fn compare_param_fails() {
    expect(
        &["compare", "--scenario", &data("scenario_w_param.json")],
        1,
        "FAIL compare param",
    );
}

#[test]
fn compare_json() {
    let (code, t) = lenslab(&[
        "--json",
        "compare",
        "--scenario",
        &data("scenario_w_trans.json"),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&t).unwrap();
    assert_eq!(v["data"]["trans"]["equal"], false);
    assert_eq!(v["data"]["trans"]["factors"], true);
}

#[test]
fn learner_put_linear() {
    let t = expect(
        &[
            "learner",
            "--spec",
            &data("linear_1d.json"),
            "--put",
            &data("p.json"),
            &data("a.json"),
            &data("b.json"),
        ],
        0,
        "p' = [1.2]",
    );
    assert!(t.contains("a' = [2.1]"));
    assert!(t.contains("amended target = [2.52]"));
}

#[test]
fn learner_gradcheck() {
    expect(
        &[
            "learner",
            "--spec",
            &data("two_layer.json"),
            "--gradcheck",
            &data("x2.json"),
            &data("y1.json"),
        ],
        0,
        "PASS gradcheck",
    );
}

#[test]
fn learner_put_json() {
    let (code, t) = lenslab(&[
        "--json",
        "learner",
        "--spec",
        &data("linear_1d.json"),
        "--put",
        &data("p.json"),
        &data("a.json"),
        &data("b.json"),
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&t).unwrap();
    assert!((v["data"]["amended"][0].as_f64().unwrap() - 2.52).abs() < 1e-12);
}

#[test]
fn learner_needs_weights() {
    expect(
        &[
            "learner",
            "--spec",
            &data("linear_1d.json"),
            "--put",
            &data("a.json"),
            &data("b.json"),
        ],
        2,
        "spec has no weights",
    );
}

#[test]
fn learner_needs_a_mode() {
    expect(
        &[
            "learner",
            "--spec",
            &data("linear_1d.json"),
            &data("p.json"),
            &data("a.json"),
            &data("b.json"),
        ],
        2,
        "--put or --gradcheck",
    );
}

#[test]
fn learner_shape_mismatch() {
    expect(
        &[
            "learner",
            "--spec",
            &data("two_layer.json"),
            "--put",
            &data("a.json"),
            &data("b.json"),
        ],
        2,
        "error:",
    );
}

#[test]
fn policy_functoriality_quit() {
    expect(
        &["policy-functoriality", "--policy", "quit"],
        0,
        "PASS functoriality",
    );
}

#[test]
fn policy_functoriality_trans() {
    let t = expect(
        &["policy-functoriality", "--policy", "trans"],
        1,
        "FAIL functoriality",
    );
    assert!(t.contains("?#M∈{Testing}"), "{t}");
}

#[test]
fn policy_functoriality_param_skips_inapplicable() {
    expect(
        &["policy-functoriality", "--policy", "param"],
        0,
        "9 skipped, 0 mismatches",
    );
}

#[test]
fn policy_functoriality_scenario_files() {
    expect(
        &[
            "policy-functoriality",
            "--policy",
            "quit",
            &data("scenario_w.json"),
        ],
        0,
        "2 points checked",
    );
}

#[test]
fn policy_functoriality_least_change() {
    expect(
        &[
            "policy-functoriality",
            "--policy",
            "least-change",
            &data("pararrow_get.json"),
            &data("pararrow_get.json"),
        ],
        0,
        "PASS functoriality",
    );
}

#[test]
fn policy_functoriality_unknown() {
    expect(
        &["policy-functoriality", "--policy", "nope"],
        2,
        "unknown policy",
    );
}

#[test]
fn usage_error() {
    expect(&["compose", "--seq", &data("chain_k.json")], 2, "Usage");
}
