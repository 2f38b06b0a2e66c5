//! End-to-end tests that drive the compiled `partlat` binary the way a user
//! would: real argv, real exit codes, stdout/stderr kept separate.
//!
//! Everything here runs against the unoptimized dev-profile binary, so the
//! inputs stay small; heavy numerical checks live in the library's own test
//! suites where the optimized test profile applies.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_partlat"))
}

fn run(args: &[&str]) -> Output {
    bin()
        .args(args)
        .output()
        .expect("failed to spawn the partlat binary")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout was not UTF-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr was not UTF-8")
}

fn assert_exit(out: &Output, code: i32, context: &str) {
    assert_eq!(
        out.status.code(),
        Some(code),
        "{context}: expected exit {code}, got {:?}\nstdout:\n{}\nstderr:\n{}",
        out.status.code(),
        stdout_of(out),
        stderr_of(out),
    );
}

#[test]
fn count_of_the_four_element_lattice_is_fifty() {
    let out = run(&["count", "--n", "4"]);
    assert_exit(&out, 0, "count --n 4");
    assert_eq!(stdout_of(&out).trim(), "50");
}

#[test]
fn count_range_halves_sum_to_the_whole() {
    let lo = run(&["count", "--n", "4", "--lo", "0", "--hi", "700"]);
    let hi = run(&["count", "--n", "4", "--lo", "700", "--hi", "1365"]);
    assert_exit(&lo, 0, "lower half");
    assert_exit(&hi, 0, "upper half");
    let a: u64 = stdout_of(&lo).trim().parse().expect("lower half count");
    let b: u64 = stdout_of(&hi).trim().parse().expect("upper half count");
    assert_eq!(a + b, 50);
}

#[test]
fn count_orbit_mode_and_unpruned_mode_agree_with_the_default() {
    let orbits = run(&["count", "--n", "4", "--orbits"]);
    let plain = run(&["count", "--n", "4", "--no-prune"]);
    assert_exit(&orbits, 0, "orbit count");
    assert_exit(&plain, 0, "unpruned count");
    assert_eq!(stdout_of(&orbits).trim(), "50");
    assert_eq!(stdout_of(&plain).trim(), "50");
}

#[test]
fn count_heartbeats_go_to_stderr_not_stdout() {
    // Three blocks of 500 ranks over the 1365 subsets of Equ(4) means at
    // least three heartbeat lines, none of which may pollute stdout.
    let out = run(&["count", "--n", "4", "--block-size", "500"]);
    assert_exit(&out, 0, "count with small blocks");
    assert_eq!(stdout_of(&out).trim(), "50");
    let err = stderr_of(&out);
    assert!(
        err.lines().filter(|l| l.starts_with("#HB")).count() >= 3,
        "expected heartbeat lines on stderr, got:\n{err}"
    );
}

#[test]
fn count_quiet_flag_suppresses_heartbeats() {
    let out = run(&["count", "--n", "4", "--block-size", "500", "--quiet"]);
    assert_exit(&out, 0, "quiet count");
    assert!(!stderr_of(&out).contains("#HB"));
}

#[test]
fn count_checkpoint_file_resumes_to_the_same_answer() {
    let dir = tempfile::tempdir().expect("tempdir");
    let ckpt = dir.path().join("equ4.ckpt");
    let ckpt = ckpt.to_str().expect("utf-8 path");
    let first = run(&["count", "--n", "4", "--checkpoint", ckpt]);
    assert_exit(&first, 0, "first checkpointed run");
    // Second run finds a finished checkpoint and reports the stored count.
    let second = run(&["count", "--n", "4", "--checkpoint", ckpt]);
    assert_exit(&second, 0, "resumed run");
    assert_eq!(stdout_of(&second).trim(), "50");
}

#[test]
fn count_json_embeds_config_result_and_version() {
    let out = run(&["count", "--n", "4", "--format", "json", "--quiet"]);
    assert_exit(&out, 0, "count json");
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid JSON");
    assert_eq!(doc["command"], "count");
    assert_eq!(doc["config"]["n"], 4);
    assert_eq!(doc["result"]["count"], 50);
    assert_eq!(doc["result"]["completed"], true);
    assert!(doc["version"].is_string());
}

#[test]
fn listed_quadruples_come_out_one_per_line_with_four_members() {
    let out = run(&["list", "--n", "4"]);
    assert_exit(&out, 0, "list --n 4");
    let text = stdout_of(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 50);
    for line in lines {
        assert_eq!(line.split('|').count(), 4, "malformed line: {line}");
    }
}

#[test]
fn antichain_audit_passes_on_the_five_element_lattice() {
    let out = run(&["antichain-audit", "--n", "5"]);
    assert_exit(&out, 0, "antichain-audit --n 5");
    assert!(stdout_of(&out).contains("all_antichains=true"));
}

#[test]
fn bell_numbers_match_the_table() {
    for (n, want) in [("5", "52"), ("6", "203"), ("8", "4140")] {
        let out = run(&["bell", "--n", n]);
        assert_exit(&out, 0, "bell");
        assert_eq!(stdout_of(&out).trim(), want, "bell --n {n}");
    }
}

#[test]
fn published_confidence_interval_reproduces_to_five_decimals() {
    let out = run(&["ci", "--s", "238223", "--k", "15000000", "--level", "0.999"]);
    assert_exit(&out, 0, "ci");
    assert_eq!(stdout_of(&out).trim(), "1.57753 1.59877");
}

#[test]
fn ci_with_a_lattice_size_also_prints_count_bounds() {
    let out = run(&[
        "ci", "--s", "238223", "--k", "15000000", "--level", "0.999", "--n", "7",
    ]);
    assert_exit(&out, 0, "ci --n 7");
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("1.57753 1.59877"));
    let counts = lines.next().expect("count bounds line");
    assert!(counts.starts_with("count "), "got: {counts}");
    let parts: Vec<&str> = counts.split_whitespace().collect();
    assert_eq!(parts.len(), 3);
    let lo: u64 = parts[1].parse().expect("count lower bound");
    let hi: u64 = parts[2].parse().expect("count upper bound");
    assert!(lo < hi);
}

#[test]
fn lower_bound_for_eight_points_is_604800() {
    let out = run(&["lower-bound", "--n", "8"]);
    assert_exit(&out, 0, "lower-bound --n 8");
    assert_eq!(stdout_of(&out).trim(), "604800");
}

#[test]
fn encode_pads_the_block_vector_to_length_two_n_plus_one() {
    let out = run(&["encode", "--n", "8", "--blocks", "4 6|1 5 3 7|2 8"]);
    assert_exit(&out, 0, "encode");
    assert_eq!(
        stdout_of(&out).trim(),
        "1,3,5,7,0,2,8,0,4,6,0,-1,-1,-1,-1,-1,-1"
    );
}

#[test]
fn encode_and_decode_round_trip() {
    let encoded = run(&["encode", "--n", "8", "--blocks", "4 6|1 5 3 7|2 8"]);
    assert_exit(&encoded, 0, "encode side");
    let vector = stdout_of(&encoded);
    let decoded = run(&["encode", "--n", "8", "--decode", vector.trim()]);
    assert_exit(&decoded, 0, "decode side");
    assert_eq!(stdout_of(&decoded).trim(), "n=8 blocks=1 3 5 7|2 8|4 6");
}

#[test]
fn sample_csv_header_matches_the_report_contract() {
    let out = run(&["sample", "--n", "4", "--k", "1000", "--format", "csv"]);
    assert_exit(&out, 0, "sample csv");
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,k,s,p_pct,l900_lo,l900_hi,l950_lo,l950_hi,l990_lo,l990_hi,l999_lo,l999_hi")
    );
    let row = lines.next().expect("data row");
    assert!(row.starts_with("4,1000,"), "got row: {row}");
    assert_eq!(row.split(',').count(), 12);
}

#[test]
fn sample_is_deterministic_for_a_fixed_seed() {
    let args = ["sample", "--n", "4", "--k", "2000", "--format", "csv"];
    let first = run(&args);
    let second = run(&args);
    assert_exit(&first, 0, "first sample");
    assert_eq!(stdout_of(&first), stdout_of(&second));
}

#[test]
fn sample_json_echoes_the_run_configuration() {
    let out = run(&[
        "sample", "--n", "4", "--k", "500", "--seed", "7", "--format", "json",
    ]);
    assert_exit(&out, 0, "sample json");
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid JSON");
    assert_eq!(doc["command"], "sample");
    assert_eq!(doc["config"]["n"], 4);
    assert_eq!(doc["config"]["k"], 500);
    assert_eq!(doc["config"]["seed"], 7);
    assert_eq!(doc["result"]["s"], doc["result"]["s"].as_u64().unwrap());
    assert_eq!(doc["count_bounds"].as_array().map(|a| a.len()), Some(4));
}

#[test]
fn fixture_112_verifies_generation_and_order_type() {
    let out = run(&["fixture-112"]);
    assert_exit(&out, 0, "fixture-112");
    assert_eq!(stdout_of(&out).trim(), "generates=true order_type_112=true");
}

#[test]
fn zigzag_verify_accepts_a_small_configuration() {
    let out = run(&["zigzag-verify", "--phi", "3:1:1:011"]);
    assert_exit(&out, 0, "zigzag-verify");
    assert!(stdout_of(&out).contains("verified=true"));
}

#[test]
fn get_through_answers_both_ways() {
    let same = run(&["get-through", "--key", "3:1:1:011", "--lock", "3:1:1:011"]);
    assert_exit(&same, 0, "matching lock and key");
    assert_eq!(stdout_of(&same).trim(), "true");

    let other = run(&["get-through", "--key", "3:1:1:011", "--lock", "5:1:1:10111"]);
    assert_exit(&other, 0, "mismatched lock and key");
    assert_eq!(stdout_of(&other).trim(), "false");
}

#[test]
fn witness_family_reports_member_and_orbit_counts() {
    let out = run(&["witness-family", "--n", "7", "--orbit-count"]);
    assert_exit(&out, 0, "witness-family --n 7");
    let text = stdout_of(&out);
    assert!(text.contains("members=10"), "got:\n{text}");
    assert!(text.contains("orbit_count=25200"), "got:\n{text}");
}

#[test]
fn product_verify_smallest_pair_passes_with_per_factor_booleans() {
    let out = run(&[
        "product-verify",
        "--left",
        "5",
        "--right",
        "6",
        "--format",
        "json",
    ]);
    assert_exit(&out, 0, "product-verify 5x6");
    let doc: serde_json::Value = serde_json::from_str(&stdout_of(&out)).expect("valid JSON");
    assert_eq!(doc["result"]["verified"], true);
    assert_eq!(doc["result"]["product_size"], "10556");
    let factors = doc["result"]["factors"].as_array().expect("factors array");
    assert_eq!(factors.len(), 2);
    assert!(factors.iter().all(|f| f["generates"] == true));
}

#[test]
fn plans_for_consecutive_sizes_and_direct_powers_build() {
    let consecutive = run(&["plan", "--kind", "consecutive", "--n", "9"]);
    assert_exit(&consecutive, 0, "plan consecutive");
    assert!(stdout_of(&consecutive).contains("factor_sizes=9..=13"));

    let power = run(&["plan", "--kind", "power", "--u", "3"]);
    assert_exit(&power, 0, "plan power");
    assert!(stdout_of(&power).contains("quadruples="));
}

#[test]
fn giant_certificate_checks_out() {
    let out = run(&["giant-check"]);
    assert_exit(&out, 0, "giant-check");
    let text = stdout_of(&out);
    assert!(text.contains("certified=true"), "got:\n{text}");
    assert!(text.contains("indices=505"), "got:\n{text}");
}

#[test]
fn missing_required_argument_is_a_usage_error() {
    let out = run(&["count"]);
    assert_exit(&out, 2, "count with no --n");
}

#[test]
fn malformed_quadruple_is_a_usage_error() {
    let out = run(&["zigzag-verify", "--phi", "not-a-quadruple"]);
    assert_exit(&out, 2, "zigzag-verify with bad phi");
}

#[test]
fn capacity_overruns_exit_with_code_three() {
    // Orbit-weighted counting refuses tables it cannot hold in memory.
    let out = run(&["count", "--n", "8", "--orbits"]);
    assert_exit(&out, 3, "orbit count past the table limit");
}

#[test]
fn threads_env_var_is_accepted() {
    let out = bin()
        .args(["count", "--n", "4"])
        .env("PARTLAT_THREADS", "2")
        .output()
        .expect("spawn with env");
    assert_exit(&out, 0, "count under PARTLAT_THREADS");
    assert_eq!(stdout_of(&out).trim(), "50");
}

#[test]
fn help_lists_every_subcommand() {
    let out = run(&["--help"]);
    assert_exit(&out, 0, "--help");
    let text = stdout_of(&out);
    for name in [
        "count",
        "list",
        "antichain-audit",
        "sample",
        "ci",
        "fixture-112",
        "zigzag-verify",
        "get-through",
        "lower-bound",
        "witness-family",
        "product-verify",
        "plan",
        "giant-check",
        "bell",
        "encode",
    ] {
        assert!(text.contains(name), "--help is missing {name}:\n{text}");
    }
}
