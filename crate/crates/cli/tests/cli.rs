//! End-to-end checks of the command-line surface: exit codes, report
//! schemas, and byte-level determinism.

use std::process::{Command, Output};

fn l1chi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_l1chi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 output")
}

#[test]
fn usage_error_on_inverted_range() {
    let out = l1chi(&["verify-lemma2", "--q-min", "10", "--q-max", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("empty range"));
}

#[test]
fn usage_error_on_zero_modulus() {
    let out = l1chi(&["verify-lemma2", "--q-min", "0", "--q-max", "5"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_error_on_bad_tolerance() {
    let out = l1chi(&["sweep-bounds", "--q-min", "3", "--q-max", "4", "--tolerance=-1e-9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("tolerance"));
}

#[test]
fn help_exits_zero() {
    let out = l1chi(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("verify-lemma2"));
    assert!(stdout(&out).contains("primorial-study"));
}

#[test]
fn verify_lemma2_small_range_passes() {
    let out = l1chi(&["verify-lemma2", "--q-min", "1", "--q-max", "50"]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "q,x,lhs,main_term,residual,tau_over_x,pass"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 150, "three x values per q");
    assert!(rows.iter().all(|r| r.ends_with(",true")));
}

#[test]
fn verify_lemma2_x_cap_filters_grid() {
    let out = l1chi(&["verify-lemma2", "--q-min", "3", "--q-max", "3", "--x-max", "30"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    // x in {3, 30}; the 100q point is dropped.
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn verify_lemma2_empty_after_filter_is_pass() {
    let out = l1chi(&["verify-lemma2", "--q-min", "5", "--q-max", "5", "--x-max", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 1, "header only");
}

#[test]
fn sweep_bounds_skips_degenerate_moduli_with_warning() {
    let out = l1chi(&["sweep-bounds", "--q-min", "1", "--q-max", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let err = stderr(&out);
    assert!(err.contains("skipping q = 1"));
    assert!(err.contains("skipping q = 2"));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1 + 8, "q = 3..=10");
}

#[test]
fn sweep_bounds_default_range_passes() {
    let out = l1chi(&["sweep-bounds"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 1 + 98, "q = 3..=100");
    assert!(text.lines().skip(1).all(|r| r.ends_with(",true")));
}

#[test]
fn sweep_bounds_row_matches_library_report() {
    let out = l1chi(&["sweep-bounds", "--q-min", "4", "--q-max", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let row = text.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[0], "4");
    let report = l1chi::verify_modulus(4).unwrap();
    assert_eq!(fields[3], format!("{:.14e}", report.strict_bound));
    assert_eq!(fields[5], format!("{:.14e}", report.max_abs_l1));
    // q = 4 < 16: no refined residual ratio.
    assert_eq!(fields[6], "");
    assert_eq!(*fields.last().unwrap(), "true");
}

#[test]
fn csv_output_is_byte_deterministic() {
    let args = ["sweep-bounds", "--q-min", "3", "--q-max", "40"];
    let a = l1chi(&args);
    let b = l1chi(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    // Thread count must not change the report bytes either.
    let c = l1chi(&["sweep-bounds", "--q-min", "3", "--q-max", "40", "--jobs", "1"]);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn json_report_carries_config_echo() {
    let out = l1chi(&["sweep-bounds", "--q-min", "3", "--q-max", "6", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(v["config"]["command"], "sweep-bounds");
    assert_eq!(v["config"]["q_min"], 3);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["q"], 3);
    assert!(rows[0]["pass"].as_bool().unwrap());
    assert!(rows[0]["refined_residual_ratio"].is_null());
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("l1chi-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.csv");
    let out = l1chi(&[
        "verify-lemma2",
        "--q-min",
        "1",
        "--q-max",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).is_empty());
    let content = std::fs::read_to_string(&path).unwrap();
    assert!(content.starts_with("q,x,"));
    assert_eq!(content.lines().count(), 10);
    std::fs::remove_file(path).unwrap();
}

#[test]
fn primorial_study_small_cutoff() {
    let out = l1chi(&["primorial-study", "--x-max", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 3);
    assert!(rows[0].starts_with("3,6,2,"));
    assert!(rows[2].starts_with("7,210,48,"));
}

#[test]
fn primorial_study_is_byte_deterministic() {
    let a = l1chi(&["primorial-study", "--x-max", "7"]);
    let b = l1chi(&["primorial-study", "--x-max", "7", "--jobs", "2"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn primorial_study_budget_refusal() {
    let out = l1chi(&["primorial-study", "--x-max", "100"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("work budget"));
}

#[test]
fn primorial_study_empty_cutoff_warns() {
    let out = l1chi(&["primorial-study", "--x-max", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stderr(&out).contains("warning"));
    assert_eq!(stdout(&out).lines().count(), 1, "header only");
}

#[test]
fn eval_known_value() {
    let out = l1chi(&["eval", "4", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("7.85398163397448e-1"), "got:\n{text}");
    assert!(text.contains("method: digamma"));
    assert!(text.contains("strict bound"));
    assert!(text.contains("truncation bound"));
}

#[test]
fn eval_refuses_principal() {
    let out = l1chi(&["eval", "4", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("principal"));
}

#[test]
fn eval_rejects_out_of_range_index() {
    let out = l1chi(&["eval", "4", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("out of range"));
}

#[test]
fn eval_conjugate_indices_share_magnitude() {
    // Mod 7 the characters of exponent e and 6 - e are conjugate, so their
    // |L| values must agree (index 3 is real and pairs with itself).
    let magnitude = |s: &str| -> f64 {
        s.lines()
            .find(|l| l.starts_with("|L(1, chi)|"))
            .unwrap()
            .split(" = ")
            .nth(1)
            .unwrap()
            .parse()
            .unwrap()
    };
    let mags: Vec<f64> = (1..=5)
        .map(|i| {
            let out = l1chi(&["eval", "7", &i.to_string()]);
            assert_eq!(out.status.code(), Some(0));
            magnitude(&stdout(&out))
        })
        .collect();
    for e in 1..=5usize {
        let partner = 6 - e;
        assert!(
            (mags[e - 1] - mags[partner - 1]).abs() < 1e-12,
            "indices {e} and {partner} are conjugate but |L| differs"
        );
    }
}
