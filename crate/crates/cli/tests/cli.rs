//! End-to-end runs of the `arith-lg` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    root.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_arith-lg"))
        .args(args)
        .env_remove("ARITH_LG_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_temp(name: &str, body: &str) -> String {
    let path = std::env::temp_dir().join(format!("arith-lg-{}-{name}", std::process::id()));
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn analyze_polytope_of_kloosterman() {
    let out = run(&["--json", "analyze-polytope", &data("kloosterman.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["vertices"], serde_json::json!([[-1], [1]]));
    assert_eq!(v["report"]["convenient"], true);
    assert_eq!(v["report"]["normalized_volume"], "2");
}

#[test]
fn frobenius_of_kloosterman_is_pure() {
    let out = run(&["--json", "frobenius", &data("kloosterman.json"), "--tau", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let r = &v["report"];
    assert_eq!(r["purity_ok"], true);
    assert_eq!(r["rank"], 2);
    // P = T^2 - p_1 T + 5 with p_1 = -(2 + zeta^2 + zeta^3).
    let text = run(&["frobenius", &data("kloosterman.json"), "--tau", "1"]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.contains("P(T) = T^2 + (2 + ζ^2 + ζ^3)·T + 5"), "{text}");
}

#[test]
fn verification_failures_exit_with_one() {
    assert_eq!(run(&["verify-fts", &data("fts_pass.json")]).status.code(), Some(0));
    assert_eq!(run(&["verify-fts", &data("fts_fail.json")]).status.code(), Some(1));
    assert_eq!(run(&["verify-connection", &data("connection_curved.json")]).status.code(), Some(1));
    assert_eq!(run(&["verify-connection", &data("connection_log.json")]).status.code(), Some(0));
    let single = write_temp(
        "monomial.json",
        r#"{"field":{"p":"5"},"n":"1","f":[{"c":"1","w":["1"]}]}"#,
    );
    assert_eq!(run(&["frobenius", &single, "--tau", "1"]).status.code(), Some(1));
}

#[test]
fn malformed_input_reports_a_path() {
    let cases = [
        (r#"{"field":{"p":"5"},"n":"1","f":[{"c":"1","w":[1]}]}"#, "f[0].w[0]"),
        (r#"{"field":{"p":"5"},"n":"1","f":[],"bogus":"1"}"#, "bogus"),
        (r#"{"field":{"p":"6"},"n":"1","f":[{"c":"1","w":["1"]}]}"#, "field"),
        (r#"{"field":{"p":"5"},"n":"1","f":[{"c":"1:1","w":["1"]}]}"#, "f[0].c"),
        (r#"{"field":{"p":"5"},"n":"1","f":[{"c":"1","w":["1","2"]}]}"#, "f[0].w"),
        ("{\"field\": ", "field"),
    ];
    for (i, (body, path)) in cases.iter().enumerate() {
        let file = write_temp(&format!("bad{i}.json"), body);
        let out = run(&["--json", "analyze-polytope", &file]);
        assert_eq!(out.status.code(), Some(2), "{body}");
        let v = json(&out);
        assert_eq!(v["error"], "input");
        assert!(v["path"].as_str().unwrap().ends_with(path), "{body}: {v}");
    }
    let bad_tuple = write_temp("tuple.json", r#"{"m":1,"nabla":[[["0"]]],"phi":[[["t"]]],"r0":[["0"]],"rinf":[["0"]]}"#);
    let out = run(&["--json", "verify-fts", &bad_tuple]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)["path"], "phi[0][0][0]");
    assert_eq!(run(&["frobenius", &data("kloosterman.json")]).status.code(), Some(2));
    assert_eq!(run(&["no-such-command"]).status.code(), Some(2));
}

#[test]
fn budget_exhaustion_exits_with_three() {
    let out = run(&["frobenius", &data("rank3_f3.json"), "--tau", "1", "--budget", "10"]);
    assert_eq!(out.status.code(), Some(3));
    let out = Command::new(env!("CARGO_BIN_EXE_arith-lg"))
        .args(["frobenius", &data("rank3_f3.json"), "--tau", "1"])
        .env("ARITH_LG_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn output_is_deterministic_and_thread_independent() {
    let commands: [&[&str]; 4] = [
        &["frobenius", &data("rank3_f3.json"), "--tau", "1"],
        &["l-function", &data("kloosterman_family_f3.json"), "--kmax", "8"],
        &["expsum", &data("kloosterman.json"), "--tau", "2", "--k", "3"],
        &["check-nondegenerate", &data("rank3_f3.json"), "--max-k", "2"],
    ];
    for args in commands {
        let outputs: Vec<Vec<u8>> = ["1", "2", "8", "8"]
            .iter()
            .map(|t| {
                let mut a = vec!["--json", "--threads", t];
                a.extend_from_slice(args);
                let out = run(&a);
                assert_eq!(out.status.code(), Some(0), "{args:?}");
                out.stdout
            })
            .collect();
        assert!(outputs.windows(2).all(|w| w[0] == w[1]), "{args:?}");
    }
}

#[test]
fn monodromy_and_l_function_reports() {
    let out = run(&["--json", "monodromy", &data("jordan3.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["graded_dims"], serde_json::json!({"-2": "1", "0": "1", "2": "1"}));

    let out = run(&["--json", "l-function", &data("kloosterman_family_f3.json"), "--kmax", "8"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["report"]["minus_chi_c"], 2);
    assert_eq!(v["report"]["traces"][1]["value"], "-10");
}
