//! Black-box tests of the binary: exit-code contract, report shapes,
//! and stdout stability. Exit code 0 means success, 2 means the input
//! was well-formed but rejected by validation or genericity, 3 means
//! the input or invocation was malformed.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn ws_path(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..").join(rel)
}

fn wallcross(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wallcross"))
        .args(args)
        .current_dir(ws_path(""))
        .output()
        .expect("binary runs")
}

fn json_stdout(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "expected success, got {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn temp_json(name: &str, content: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("wallcross-test-{name}"));
    std::fs::write(&path, content).expect("write temp fixture");
    path
}

// ---------------------------------------------------------------
// Success paths
// ---------------------------------------------------------------

#[test]
fn groups_info_reports_counts() {
    let v = json_stdout(&wallcross(&["groups", "info", "--n", "5", "--k", "3"]));
    assert_eq!(v["generators"], 10);
    assert_eq!(v["relations"]["tetrahedral"], 60);
    assert_eq!(v["relations"]["far_commutativity"], 15);

    let v = json_stdout(&wallcross(&["groups", "info", "--n", "4", "--k", "3"]));
    assert_eq!(v["relations"]["far_commutativity"], 0);

    let v = json_stdout(&wallcross(&["groups", "info", "--n", "5", "--gamma"]));
    assert_eq!(v["generators"], 15);
    assert_eq!(v["f2_quotient_dim"], 9);
}

#[test]
fn word_normalize_cancels_involutive_squares() {
    let v = json_stdout(&wallcross(&[
        "word",
        "normalize",
        "--group",
        "gnk",
        "--n",
        "5",
        "--k",
        "3",
        "--word",
        r#"["a_1_2_3", "a_2_3_4", "a_2_3_4", "a_1_4_5"]"#,
    ]));
    assert_eq!(v["normalized"], serde_json::json!(["a_1_2_3", "a_1_4_5"]));
    assert_eq!(v["length"], 2);
}

#[test]
fn word_abelianize_reports_raw_and_quotient_for_gamma() {
    let v = json_stdout(&wallcross(&[
        "word",
        "abelianize",
        "--group",
        "gamma",
        "--n",
        "4",
        "--word",
        r#"["d_(1,2,3,4)"]"#,
    ]));
    assert!(v["abelianization"].is_string());
    assert!(v["abelianization_raw"].is_string());
    assert_eq!(v["abelianization_raw"].as_str().unwrap().len(), 3);
}

#[test]
fn word_equiv_finds_far_commutation() {
    let v = json_stdout(&wallcross(&[
        "word",
        "equiv",
        "--group",
        "gnk",
        "--n",
        "6",
        "--k",
        "3",
        "--word",
        r#"["a_1_2_3", "a_4_5_6"]"#,
        "--other",
        r#"["a_4_5_6", "a_1_2_3"]"#,
    ]));
    assert_eq!(v["verdict"], "equal");
}

#[test]
fn hom_reports_image_and_abelianization() {
    let v = json_stdout(&wallcross(&[
        "hom", "--kind", "xi", "--n", "5", "--word", r#"["b_1_2"]"#,
    ]));
    assert_eq!(v["kind"], "xi");
    assert_eq!(v["word"].as_array().unwrap().len(), 4);
    assert_eq!(v["skipped_factors"], 6);
    assert!(v["abelianization"].is_string());
    assert!(v["abelianization_raw"].is_string());
}

#[test]
fn track_braid_reports_events_and_linking() {
    let v = json_stdout(&wallcross(&[
        "track",
        "--input",
        "demo/trajectory_b12.json",
        "--emit",
        "braid",
    ]));
    assert_eq!(v["pure"], true);
    assert_eq!(v["linking_numbers"]["1,2"], 1);
    assert_eq!(v["events"].as_array().unwrap().len(), 2);
}

#[test]
fn moduli_validate_passes_the_demo_loop() {
    let v = json_stdout(&wallcross(&["moduli", "validate", "--input", "demo/m41_loop.json"]));
    assert_eq!(v["valid"], true);
    assert!(v["min_margin"].as_f64().unwrap() > 0.1);
}

#[test]
fn moduli_descend_emits_gamma_word_on_request() {
    let v = json_stdout(&wallcross(&[
        "moduli",
        "descend",
        "--input",
        "demo/m41_loop.json",
        "--emit",
        "braid",
    ]));
    assert_eq!(v["route"], serde_json::json!([4]));
    assert_eq!(v["seed"], 7);
    assert_eq!(v["word"], serde_json::json!(["s1^-1", "s1^-1"]));
    assert_eq!(v["trajectory"]["mode"], "sphere");
    assert_eq!(v["reduced"]["mode"], "plane");
}

#[test]
fn pipeline_runs_on_plain_trajectories_too() {
    let v = json_stdout(&wallcross(&[
        "pipeline",
        "--input",
        "demo/trajectory_b13.json",
        "--hom",
        "xi",
    ]));
    assert_eq!(v["config"]["source"], "trajectory");
    assert_eq!(v["pure"]["linking_numbers"]["1,3"], 1);
    assert_eq!(v["hom"]["kind"], "xi");
    assert!(v["invariant"]["f2_vector"].is_string());
    assert!(v.get("descent").is_none());
}

// ---------------------------------------------------------------
// Exit code 2: well-formed but rejected
// ---------------------------------------------------------------

#[test]
fn degenerate_moduli_document_exits_2() {
    // Three concurrent lines: valid schema, rejected by validation.
    let doc = r#"{
        "n": 3, "m": 1, "times": [0.0, 1.0],
        "covectors": [
            [[[1,0],[0,0],[0,0]], [[1,0],[0,0],[0,0]]],
            [[[0,0],[1,0],[0,0]], [[0,0],[1,0],[0,0]]],
            [[[1,0],[1,0],[0,0]], [[1,0],[1,0],[0,0]]]
        ],
        "loop": true
    }"#;
    let path = temp_json("concurrent.json", doc);
    let out = wallcross(&["moduli", "validate", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    // The certificate still goes to stdout so the caller can see why.
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["valid"], false);
    assert!(v["violated"].is_object());
}

#[test]
fn non_ascending_times_exit_2() {
    let doc = r#"{
        "mode": "plane", "n": 2, "times": [0.0, 0.4, 0.2],
        "points": [[[0,0],[1,0]], [[0,0.1],[1,0.1]], [[0,0],[1,0]]],
        "loop": true
    }"#;
    let path = temp_json("nonascending.json", doc);
    let out = wallcross(&["track", "--input", path.to_str().unwrap(), "--emit", "braid"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn open_path_pipeline_exits_2() {
    let out = wallcross(&["pipeline", "--input", "demo/square_flip.json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("loop"));
}

#[test]
fn strict_hom_with_collisions_exits_2() {
    let out = wallcross(&[
        "hom", "--kind", "xi", "--n", "5", "--word", r#"["b_1_2"]"#, "--strict",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

// ---------------------------------------------------------------
// Exit code 3: malformed input or invocation
// ---------------------------------------------------------------

#[test]
fn missing_file_exits_3() {
    let out = wallcross(&["track", "--input", "no-such-file.json", "--emit", "g3"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn invalid_json_exits_3() {
    let path = temp_json("invalid.json", "{ not json");
    let out = wallcross(&["track", "--input", path.to_str().unwrap(), "--emit", "g3"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn wrong_schema_exits_3() {
    let path = temp_json("wrongschema.json", r#"{"mode": "plane"}"#);
    let out = wallcross(&["track", "--input", path.to_str().unwrap(), "--emit", "g3"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unknown_pipeline_document_exits_3() {
    let path = temp_json("unknown.json", r#"{"foo": 1}"#);
    let out = wallcross(&["pipeline", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bad_word_letter_exits_3() {
    let out = wallcross(&[
        "word", "normalize", "--group", "gnk", "--n", "5", "--k", "3",
        "--word", r#"["a_1_2"]"#,
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn out_of_range_index_exits_3() {
    let out = wallcross(&["hom", "--kind", "phi", "--n", "5", "--word", r#"["b_1_9"]"#]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_3_but_help_exits_0() {
    let out = wallcross(&["hom", "--kind", "chi", "--n", "5", "--word", "[]"]);
    assert_eq!(out.status.code(), Some(3));
    let out = wallcross(&[]);
    assert_eq!(out.status.code(), Some(3));
    let out = wallcross(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    let out = wallcross(&["groups", "info", "--n", "5", "--k", "3", "--gamma"]);
    assert_eq!(out.status.code(), Some(3), "conflicting flags are a usage error");
}

// ---------------------------------------------------------------
// Stdout stability
// ---------------------------------------------------------------

#[test]
fn stdout_is_byte_stable_per_subcommand() {
    for args in [
        vec!["groups", "info", "--n", "6", "--k", "4"],
        vec!["hom", "--kind", "psi", "--n", "5", "--word", r#"["b_2_4^-1"]"#],
        vec!["track", "--input", "demo/square_flip.json", "--emit", "gamma4"],
        vec!["moduli", "descend", "--input", "demo/m41_loop.json"],
    ] {
        let a = wallcross(&args);
        let b = wallcross(&args);
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "stdout differs for {args:?}");
    }
}
