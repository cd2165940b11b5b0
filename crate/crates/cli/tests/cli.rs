//! End-to-end checks of the binary: report shapes, exit codes, file
//! round-trips, and determinism of repeated invocations.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matchsym"))
}

fn write_temp(name: &str, content: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("matchsym-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn tablep_file() -> PathBuf {
    write_temp(
        "tablep.txt",
        "n=3\n1: 4 5 6\n2: 4 6 5\n3: 6 5 4\n4: 2 1 3\n5: 3 1 2\n6: 3 2 1\n",
    )
}

fn json_of(output: &Output) -> Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_reports_stabilizer_and_mechanism_sets() {
    let out = bin()
        .args(["analyze", "--profile"])
        .arg(tablep_file())
        .output()
        .unwrap();
    let v = json_of(&out);
    assert_eq!(v["n"], 3);
    assert_eq!(v["stabilizer_order"], 2);
    assert!(v["stabilizer"]
        .as_array()
        .unwrap()
        .contains(&Value::String("(1 5)(2 6)(3 4)".into())));
    // The unique stable matching with its envy metrics.
    let st = v["mechanisms"]["ST"].as_array().unwrap();
    assert_eq!(st.len(), 1);
    assert_eq!(st[0]["matching"], "(1 5)(2 4)(3 6)");
    assert_eq!(st[0]["delta"], 0);
    assert_eq!(st[0]["e"], 8);
    // TO lists all six matchings.
    assert_eq!(v["mechanisms"]["TO"].as_array().unwrap().len(), 6);
}

#[test]
fn gs_matches_deferred_acceptance() {
    let out = bin()
        .args(["gs", "--side", "women", "--profile"])
        .arg(tablep_file())
        .output()
        .unwrap();
    let v = json_of(&out);
    assert_eq!(v["matching"], "(1 5)(2 4)(3 6)");
    assert_eq!(v["blocking_pairs"].as_array().unwrap().len(), 0);
}

#[test]
fn verify_t2_exits_zero_and_reports_verified() {
    let out = bin()
        .args(["verify", "--theorem", "T2", "--n", "2"])
        .output()
        .unwrap();
    let v = json_of(&out);
    assert_eq!(v["status"], "verified");
    assert_eq!(v["evidence"]["empty_container_profiles"], "2");
}

#[test]
fn verify_out_of_range_is_skipped_not_an_error() {
    let out = bin()
        .args(["verify", "--theorem", "T3", "--n", "2"])
        .output()
        .unwrap();
    let v = json_of(&out);
    assert_eq!(v["status"], "skipped");
}

#[test]
fn synth_then_evaluate_round_trips() {
    let table = std::env::temp_dir().join("matchsym-cli-tests/t7.mech");
    std::fs::create_dir_all(table.parent().unwrap()).unwrap();
    let out = bin()
        .args([
            "synth",
            "--n",
            "2",
            "--group",
            "(1 3)(2 4)",
            "--constraint",
            "ST",
        ])
        .arg("--out-table")
        .arg(&table)
        .output()
        .unwrap();
    let v = json_of(&out);
    assert_eq!(v["result"], "synthesized");
    assert_eq!(v["orbit_count"], 10);

    let pspec = write_temp("pspeciale.txt", "n=2\n1: 3 4\n2: 4 3\n3: 2 1\n4: 1 2\n");
    let out = bin()
        .args(["mech", "--table"])
        .arg(&table)
        .arg("--profile")
        .arg(&pspec)
        .output()
        .unwrap();
    let v = json_of(&out);
    let m = v["matchings"][0]["matching"].as_str().unwrap();
    assert!(m == "(1 3)(2 4)" || m == "(1 4)(2 3)");
}

#[test]
fn lazy_mech_resolves_beyond_the_exhaustive_bound() {
    let p4 = write_temp(
        "p4.txt",
        "n=4\n1: 5 6 7 8\n2: 6 5 7 8\n3: 7 8 5 6\n4: 8 7 6 5\n\
         5: 2 1 3 4\n6: 1 2 4 3\n7: 3 4 1 2\n8: 4 3 2 1\n",
    );
    let out = bin()
        .args([
            "mech",
            "--group",
            "(1 5)(2 6)(3 7)(4 8)",
            "--constraint",
            "ST",
            "--profile",
        ])
        .arg(&p4)
        .output()
        .unwrap();
    let v = json_of(&out);
    assert_eq!(v["mechanism"], "lazy:ST");
    assert_eq!(v["matchings"].as_array().unwrap().len(), 1);
}

#[test]
fn synth_reports_infeasibility_with_witness() {
    let out = bin()
        .args([
            "synth",
            "--n",
            "2",
            "--group",
            "gstar",
            "--constraint",
            "TO",
        ])
        .output()
        .unwrap();
    let v = json_of(&out);
    assert_eq!(v["result"], "infeasible");
    assert_eq!(v["witness_container"].as_array().unwrap().len(), 0);
}

#[test]
fn identical_invocations_agree_modulo_elapsed() {
    let run = || {
        let out = bin()
            .args(["verify", "--theorem", "T8", "--n", "3", "--seed", "7"])
            .output()
            .unwrap();
        let mut v = json_of(&out);
        v.as_object_mut().unwrap().remove("elapsed_ms");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn usage_errors_exit_one() {
    // Unknown flag.
    let out = bin().args(["analyze", "--bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));

    // Malformed profile file: error text carries the line number.
    let bad = write_temp("bad.txt", "n=2\n1: 3 4\n1: 3 4\n");
    let out = bin()
        .args(["analyze", "--profile"])
        .arg(&bad)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("line 3"), "stderr was: {stderr}");

    // Group generator outside G*.
    let out = bin()
        .args(["orbits", "--n", "3", "--group", "(1 2)(3 4)"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn pretty_mode_is_plain_text() {
    let out = bin()
        .args(["--pretty", "enumerate", "--n", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("profiles: 16"));
    assert!(serde_json::from_str::<Value>(&text).is_err());
}

#[test]
fn gen_subcommands_work() {
    let out = bin()
        .args(["gen", "matchings", "--n", "2"])
        .output()
        .unwrap();
    let v = json_of(&out);
    assert_eq!(v["count"], 7);

    let out = bin()
        .args(["gen", "embed", "--profile"])
        .arg(tablep_file())
        .output()
        .unwrap();
    let v = json_of(&out);
    assert!(v["embedded"].as_str().unwrap().contains("1: 4 5 6 1"));

    let out = bin().args(["gen", "explore", "--n", "2"]).output().unwrap();
    let v = json_of(&out);
    assert_eq!(v["empty_containers"], 0);
    assert_eq!(v["profiles_scanned"], 1296);

    let gen_profile = write_temp("gen.txt", "n=2\n1: 3 4 1\n2: 4 3 2\n3: 2 1 3\n4: 1 2 4\n");
    let out = bin()
        .args(["gen", "analyze", "--profile"])
        .arg(&gen_profile)
        .output()
        .unwrap();
    let v = json_of(&out);
    assert!(!v["stable"].as_array().unwrap().is_empty());
}

#[test]
fn out_flag_writes_the_report_file() {
    let path = std::env::temp_dir().join("matchsym-cli-tests/report.json");
    let out = bin()
        .args(["enumerate", "--n", "2", "--out"])
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["profiles"], "16");
}
