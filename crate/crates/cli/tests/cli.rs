//! Integration tests for the fermat3 binary: output contracts (JSON schema,
//! CSV shapes), exit codes, determinism, and config-file handling.

mod common;

use common::{run_cli, temp_file, SHIFT_INSTANCE};
use serde_json::Value;

fn solve_shift(extra: &[&str]) -> (i32, String, String) {
    let mut args = vec!["solve"];
    args.extend_from_slice(SHIFT_INSTANCE);
    args.extend_from_slice(extra);
    run_cli(&args)
}

#[test]
fn solve_json_schema_keys_in_order_and_exact_verdict() {
    let (code, stdout, _) = solve_shift(&[]);
    assert_eq!(code, 0, "shift instance solves exactly");
    assert!(stdout.ends_with('\n'));
    assert_eq!(stdout.lines().count(), 1, "one-line JSON report");

    // Field order is part of the output contract.
    let keys = [
        "\"case\":", "\"A\":", "\"C\":", "\"D\":", "\"c0\":", "\"c1\":",
        "\"mu\":", "\"nu\":", "\"c_freedom\":", "\"max_rel_residual\":", "\"verdict\":",
    ];
    let mut last = 0;
    for key in keys {
        let at = stdout[last..].find(key).unwrap_or_else(|| panic!("{key} after byte {last}"));
        last += at + key.len();
    }

    let v: Value = serde_json::from_str(&stdout).expect("valid JSON");
    assert_eq!(v["verdict"], "Exact");
    assert_eq!(v["case"], "Case2");
    let a_re = v["A"][0].as_f64().unwrap();
    let a_im = v["A"][1].as_f64().unwrap();
    assert!((a_re - 0.5_f64.cbrt()).abs() < 1e-12, "A = 2^(-1/3), got {a_re}");
    assert!(a_im.abs() < 1e-12);
    assert!(v["max_rel_residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn solve_csv_has_header_and_one_row() {
    let (code, stdout, _) = solve_shift(&["--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("case,re_A,im_A,re_C,im_C,re_D,im_D"));
    assert!(lines[1].starts_with("Case2,"));
}

#[test]
fn exit_code_four_when_exponential_family_is_empty() {
    // c = 3*pi*i makes nu^3 = -1 = -mu^3.
    let (code, stdout, stderr) = run_cli(&[
        "solve",
        "--a", "1,0", "0,0", "0,0",
        "--b", "0,0", "1,0", "0,0",
        "--alpha", "1,0",
        "--c", "0,9.42477796076938",
    ]);
    assert_eq!(code, 4);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["verdict"], "NoExponentialSolution");
    assert!(v["A"].is_null());
    assert!(v["max_rel_residual"].is_null());
    assert!(stderr.contains("mu^3 + nu^3"));
}

#[test]
fn exit_code_three_when_requested_c_is_not_free() {
    let (code, stdout, stderr) = run_cli(&[
        "solve",
        "--a", "0,0", "1,0", "0,0",
        "--b", "0,0", "0,0", "1,0",
        "--alpha", "1,0",
        "--c", "1,0",
        "--free-c", "1,0",
    ]);
    assert_eq!(code, 3);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["verdict"], "FailsUnlessCZero");
    assert_eq!(v["c_freedom"], false);
    assert_eq!(v["C"][0].as_f64().unwrap(), 1.0, "verdict judges the C as requested");
    assert!(stderr.contains("residual_a"));
}

#[test]
fn exit_code_zero_when_requested_c_is_free() {
    // a0 + a1*e^{Dc} + a2*D = 1 - 1 + 0 = 0 at D = 1, c = i*pi; same for b.
    let (code, stdout, _) = run_cli(&[
        "solve",
        "--a", "1,0", "1,0", "0,0",
        "--b", "0,0", "1,0", "1,0",
        "--alpha", "1,0",
        "--c", "0,3.141592653589793",
        "--free-c", "1,0",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["verdict"], "Exact");
    assert_eq!(v["c_freedom"], true);
    assert_eq!(v["C"][0].as_f64().unwrap(), 1.0);
}

#[test]
fn usage_errors_exit_two() {
    // Missing coefficient row.
    let (code, _, stderr) = run_cli(&[
        "solve", "--b", "0,0", "1,0", "0,0", "--alpha", "1,0", "--c", "1,0",
    ]);
    assert_eq!(code, 2, "missing row: {stderr}");

    // Zero shift.
    let mut args = vec!["solve"];
    args.extend_from_slice(&SHIFT_INSTANCE[..SHIFT_INSTANCE.len() - 1]);
    args.push("0,0");
    let (code, _, stderr) = run_cli(&args);
    assert_eq!(code, 2);
    assert!(stderr.contains("nonzero"));

    // Malformed complex literal (clap value parser).
    let (code, _, _) = run_cli(&[
        "solve", "--a", "bogus", "0,0", "0,0", "--b", "0,0", "1,0", "0,0",
        "--alpha", "1,0", "--c", "1,0",
    ]);
    assert_eq!(code, 2);

    // Explicit pair that is not on the Fermat cubic.
    let mut args: Vec<&str> = vec!["solve"];
    args.extend_from_slice(SHIFT_INSTANCE);
    args.extend_from_slice(&["--pair-mode", "explicit", "--c0", "1,0", "--c1", "-1,0"]);
    let (code, _, stderr) = run_cli(&args);
    assert_eq!(code, 2);
    assert!(stderr.contains("c0^3 + c1^3"));

    // Stray c0 without explicit pair mode.
    let mut args: Vec<&str> = vec!["solve"];
    args.extend_from_slice(SHIFT_INSTANCE);
    args.extend_from_slice(&["--c0", "1,0"]);
    let (code, _, stderr) = run_cli(&args);
    assert_eq!(code, 2);
    assert!(stderr.contains("explicit"));

    // Verification grid below the floor.
    let (code, _, stderr) = solve_shift(&["--grid", "8"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("16"));

    // Unknown config key.
    let path = temp_file("unknown-key.json", "{\"command\":\"solve\",\"zz\":1}");
    let (code, _, stderr) = run_cli(&["solve", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("unknown field"));

    // Config written for another subcommand.
    let path = temp_file("mismatch.json", "{\"command\":\"wp\"}");
    let (code, _, stderr) = run_cli(&["solve", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(stderr.contains("wp"));
}

#[test]
fn help_exits_zero() {
    let (code, stdout, _) = run_cli(&["--help"]);
    assert_eq!(code, 0);
    assert!(stdout.contains("solve"));
    assert!(stdout.contains("nevanlinna"));
}

#[test]
fn reruns_are_byte_identical_and_out_file_matches_stdout() {
    let (c1, s1, _) = solve_shift(&[]);
    let (c2, s2, _) = solve_shift(&[]);
    assert_eq!(c1, 0);
    assert_eq!(c1, c2);
    assert_eq!(s1, s2, "solve reruns are byte-identical");

    let (w1, wp1, _) = run_cli(&["wp", "--grid", "8", "--format", "csv"]);
    let (w2, wp2, _) = run_cli(&["wp", "--grid", "8", "--format", "csv"]);
    assert_eq!(w1, 0);
    assert_eq!(w1, w2);
    assert_eq!(wp1, wp2, "wp reruns are byte-identical");

    let out = temp_file("solve-out.json", "");
    let (c3, s3, _) = solve_shift(&["--out", out.to_str().unwrap()]);
    assert_eq!(c3, 0);
    assert!(s3.is_empty(), "report goes to the file, not stdout");
    let written = std::fs::read_to_string(&out).unwrap();
    assert_eq!(written, s1, "--out content equals the stdout report");
}

#[test]
fn config_file_round_trip_matches_flags() {
    let cfg = r#"{
        "command": "solve",
        "a": [[1.0, 0.0], [0.0, 0.0], [0.0, 0.0]],
        "b": [[0.0, 0.0], [1.0, 0.0], [0.0, 0.0]],
        "alpha": [1.0, 0.0],
        "c": [0.0, 6.283185307179586]
    }"#;
    let path = temp_file("roundtrip.json", cfg);
    let (code_file, out_file, _) = run_cli(&["solve", "--config", path.to_str().unwrap()]);
    let (code_flags, out_flags, _) = solve_shift(&[]);
    assert_eq!(code_file, 0);
    assert_eq!(code_file, code_flags);
    assert_eq!(out_file, out_flags, "config file and flags produce identical output");

    // A flag overrides the file: request CSV on top of the same config.
    let (code_csv, out_csv, _) =
        run_cli(&["solve", "--config", path.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code_csv, 0);
    assert!(out_csv.starts_with("case,"));
}

#[test]
fn wp_csv_grid_shape_and_residuals() {
    let (code, stdout, _) = run_cli(&["wp", "--grid", "6", "--format", "csv"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "re_z,im_z,re_p,im_p,ode_residual");
    assert_eq!(lines.len(), 1 + 36, "offset-centered 6x6 grid avoids the pole");
    for row in &lines[1..] {
        let fields: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(fields.len(), 5);
        assert!(fields[4] < 1e-9, "defining-equation residual small: {row}");
    }
}

#[test]
fn param_sweep_residuals_and_eta_filter() {
    let (code, stdout, _) = run_cli(&["param", "--grid", "16"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    let used = v["points_used"].as_u64().unwrap();
    assert!(used >= 10, "most sample points usable, got {used}");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len() as u64, used * 3, "three eta rows per point");
    assert!(v["max_fermat_residual"].as_f64().unwrap() < 1e-8);
    assert!(v["max_cubic_residual"].as_f64().unwrap() < 1e-7);
    assert!(v["max_relation_residual"].as_f64().unwrap() < 1e-7);

    let (code, stdout, _) = run_cli(&["param", "--grid", "8", "--eta", "1"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row[0].as_u64().unwrap(), 1, "only the requested eta appears");
    }
}

#[test]
fn param_accepts_quadratic_inner_polynomial() {
    let (code, stdout, _) = run_cli(&[
        "param", "--grid", "12",
        "--h-coeff", "1,0", "--h-coeff", "0,0", "--h-coeff", "1,0",
        "--eta", "0",
    ]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["h"].as_array().unwrap().len(), 3);
    assert!(v["max_fermat_residual"].as_f64().unwrap() < 1e-8);
}

#[test]
fn verify_round_trip_from_solve_output() {
    let (code, stdout, _) = solve_shift(&[]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&stdout).unwrap();
    let amp = format!(
        "{:.17e},{:.17e}",
        v["A"][0].as_f64().unwrap(),
        v["A"][1].as_f64().unwrap()
    );
    let mut args = vec!["verify"];
    args.extend_from_slice(SHIFT_INSTANCE);
    args.extend_from_slice(&["--amp", &amp]);
    let (code, stdout, _) = run_cli(&args);
    assert_eq!(code, 0, "solved amplitude verifies as Exact");
    let v: Value = serde_json::from_str(&stdout).unwrap();
    assert_eq!(v["verdict"], "Exact");
}

#[test]
fn verify_requires_amplitude() {
    let mut args = vec!["verify"];
    args.extend_from_slice(SHIFT_INSTANCE);
    let (code, _, stderr) = run_cli(&args);
    assert_eq!(code, 2);
    assert!(stderr.contains("amp"));
}

#[test]
fn nevanlinna_exp_csv_matches_r_over_pi() {
    let (code, stdout, _) = run_cli(&[
        "nevanlinna", "--function", "exp",
        "--r-min", "2", "--r-max", "6", "--points", "5", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "r,m,N,T");
    assert_eq!(lines.len(), 1 + 5);
    for row in &lines[1..] {
        let f: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
        let expected = f[0] / std::f64::consts::PI;
        assert!(f[2] == 0.0, "entire function has no poles");
        assert!(
            (f[3] - expected).abs() <= 1e-3 * expected,
            "T(r, e^z) = r/pi: {row}"
        );
    }
}

#[test]
fn nevanlinna_wp_csv_includes_ratio_column() {
    let (code, stdout, _) = run_cli(&[
        "nevanlinna", "--function", "wp",
        "--r-min", "4", "--r-max", "8", "--points", "3", "--format", "csv",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "r,m,N,T,ratio");
    assert_eq!(lines.len(), 1 + 3);
    for row in &lines[1..] {
        let f: Vec<f64> = row.split(',').map(|s| s.parse().unwrap()).collect();
        assert_eq!(f.len(), 5);
        assert!(f[4] > 0.9 && f[4] < 1.05, "area-law ratio near 1: {row}");
    }
}

#[test]
fn nevanlinna_rejects_bad_radii() {
    let (code, _, _) = run_cli(&[
        "nevanlinna", "--function", "exp", "--r-min", "-1", "--r-max", "5",
    ]);
    assert_eq!(code, 2);
    let (code, _, _) = run_cli(&[
        "nevanlinna", "--function", "exp", "--r-min", "6", "--r-max", "5",
    ]);
    assert_eq!(code, 2);
}
