//! End-to-end CLI behavior: subcommands, formats, exit codes, the env
//! override, and the machine-parsable error line.

use std::process::Command as Proc;

fn run_env(args: &[&str], env: &[(&str, &str)]) -> (i32, String, String) {
    let mut cmd = Proc::new(env!("CARGO_BIN_EXE_heighttower"));
    cmd.args(args).env_remove("HEIGHTTOWER_MAX_BITS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("spawn CLI");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn run(args: &[&str]) -> (i32, String, String) {
    run_env(args, &[])
}

#[test]
fn construct_text_and_csv() {
    let (code, out, _) = run(&["construct", "--gamma", "1", "--delta", "2", "--horizon", "3"]);
    assert_eq!(code, 0);
    assert!(out.contains("d = 17, p = 293"));

    let (code, out, _) = run(&[
        "construct", "--delta", "2", "--horizon", "2", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "index,d,p,abs_degree,log_p_lo,log_p_hi,log_d_lo,log_d_hi,generator_height_lo,generator_height_hi"
    );
    assert!(lines.next().unwrap().starts_with("1,2,5,2,"));
}

#[test]
fn certify_json_schema_and_witness_default_eta() {
    let (code, out, _) = run(&[
        "certify", "--delta", "2", "--horizon", "3", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["params"]["variant"]["kind"], "delta");
    assert_eq!(v["params"]["metric_epsilon"], 1.0);
    // with metric ε = 1: b₃ = (log 293)/17 ≈ 0.334 < 0.5 = default eta
    assert_eq!(v["witness"]["eta"], 0.5);
    assert_eq!(v["witness"]["index"], 3);
    assert_eq!(v["audit"]["a_monotone_from"], 1);
    assert_eq!(v["primality_summary"]["provable_prime"], 6);
    for level in v["levels"].as_array().unwrap() {
        assert_eq!(level["metrics"]["witness_overlap_ok"], true);
        assert_eq!(level["metrics"]["chain_ok"], true);
    }
}

#[test]
fn certify_csv_column_order() {
    let (code, out, _) = run(&[
        "certify", "--delta", "2", "--horizon", "2", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    assert!(out.starts_with(
        "index,d,p,log_p_lo,log_p_hi,a_lo,a_hi,b_lo,b_hi,silverman_floor_lo,silverman_floor_hi,f_floor_lo,f_floor_hi\n"
    ));
    assert_eq!(out.lines().count(), 3);
}

#[test]
fn witness_reached_and_capped() {
    let (code, out, _) = run(&[
        "witness", "--delta", "2", "--epsilon", "0.9", "--eta", "0.5", "--cap", "10",
        "--format", "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["reached"], true);
    assert_eq!(v["index"], 3);

    // an unreachable eta exits 2 but still reports the best level
    let (code, out, _) = run(&[
        "witness", "--delta", "2", "--epsilon", "0.9", "--eta", "1e-9", "--cap", "4",
        "--format", "json",
    ]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["reached"], false);
    assert_eq!(v["index"], 4);
}

#[test]
fn height_both_routes() {
    let (code, out, _) = run(&["height", "--p", "5", "--d", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("0.80471895"), "got {out}");

    let (code, out, _) = run(&["height", "--poly", "x^2-5", "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let lo: f64 = v["value"]["lo"].as_str().unwrap().parse().unwrap();
    assert!((lo - 0.804718956).abs() < 1e-6);
}

#[test]
fn measure_lehmer() {
    let (code, out, err) = run(&[
        "measure", "--poly", "x**2", "--format", "json",
    ]);
    assert_eq!(code, 1, "garbage polynomial must fail parse, got {out}");
    let v: serde_json::Value = serde_json::from_str(err.lines().next().unwrap()).unwrap();
    assert_eq!(v["error"]["kind"], "parse");

    let (code, out, _) = run(&[
        "measure", "--poly", "x^10+x^9-x^7-x^6-x^5-x^4-x^3+x+1", "--format", "json",
    ]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let lo: f64 = v["value"]["lo"].as_str().unwrap().parse().unwrap();
    assert!((lo - 1.17628081826).abs() < 1e-9);
}

#[test]
fn validation_and_domain_errors_exit_one() {
    // no bracket rule
    let (code, _, err) = run(&["construct", "--horizon", "3"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(err.lines().next().unwrap()).unwrap();
    assert_eq!(v["error"]["kind"], "invalid_params");

    // gamma out of range
    let (code, _, _) = run(&["construct", "--gamma", "1.5", "--epsilon", "1", "--horizon", "2"]);
    assert_eq!(code, 1);

    // delta with gamma != 1
    let (code, _, _) = run(&["construct", "--gamma", "0.5", "--delta", "2", "--horizon", "2"]);
    assert_eq!(code, 1);

    // domain error in height
    let (code, _, err) = run(&["height", "--p", "1", "--d", "2"]);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(err.lines().next().unwrap()).unwrap();
    assert_eq!(v["error"]["kind"], "domain");

    // reducible minimal polynomial
    let (code, _, _) = run(&["height", "--poly", "x^2-4"]);
    assert_eq!(code, 1);
}

#[test]
fn resource_exhaustion_exits_two() {
    let (code, _, err) = run(&[
        "height", "--p", "5", "--d", "2", "--max-bits", "64", "--target-width", "1e-40",
    ]);
    assert_eq!(code, 2, "stderr: {err}");
    let v: serde_json::Value = serde_json::from_str(err.lines().next().unwrap()).unwrap();
    assert_eq!(v["error"]["kind"], "precision_exhausted");

    // bit cap on the tower
    let (code, _, err) = run(&[
        "construct", "--gamma", "0.5", "--epsilon", "0.5", "--horizon", "9",
        "--max-p-bits", "64",
    ]);
    assert_eq!(code, 2, "stderr: {err}");
    let v: serde_json::Value = serde_json::from_str(err.lines().next().unwrap()).unwrap();
    assert_eq!(v["error"]["kind"], "bit_cap_exceeded");
}

#[test]
fn io_error_exits_three() {
    let (code, _, err) = run(&[
        "height", "--p", "5", "--d", "2", "--output", "/nonexistent-dir/x.json",
    ]);
    assert_eq!(code, 3);
    let v: serde_json::Value = serde_json::from_str(err.lines().next().unwrap()).unwrap();
    assert_eq!(v["error"]["kind"], "io");
}

#[test]
fn output_file_matches_stdout() {
    let dir = std::env::temp_dir().join("heighttower_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("tower.json");
    let path_str = path.to_str().unwrap();
    let (code, out, _) = run(&["construct", "--delta", "2", "--horizon", "2", "--format", "json"]);
    assert_eq!(code, 0);
    let (code, empty, _) = run(&[
        "construct", "--delta", "2", "--horizon", "2", "--format", "json", "--output", path_str,
    ]);
    assert_eq!(code, 0);
    assert!(empty.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert_eq!(out, written);
}

#[test]
fn env_var_caps_precision() {
    // honored: precision_bits in the payload stays at or below the cap
    let (code, out, _) = run_env(
        &["height", "--p", "5", "--d", "2", "--format", "json"],
        &[("HEIGHTTOWER_MAX_BITS", "96")],
    );
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["value"]["precision_bits"].as_u64().unwrap() <= 96);

    // unparsable value is an invalid-params error
    let (code, _, err) = run_env(
        &["height", "--p", "5", "--d", "2"],
        &[("HEIGHTTOWER_MAX_BITS", "lots")],
    );
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(err.lines().next().unwrap()).unwrap();
    assert_eq!(v["error"]["kind"], "invalid_params");
}

#[test]
fn stderr_is_a_single_json_line() {
    let (_, _, err) = run(&["height", "--p", "0", "--d", "2"]);
    let lines: Vec<&str> = err.lines().collect();
    assert_eq!(lines.len(), 1, "stderr: {err:?}");
    let v: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert!(v["error"]["message"].is_string());
}
