//! End-to-end checks of the CLI contract: flag/file precedence, the fixed
//! CSV schema, exit codes and reproducible output files.

use std::path::Path;
use std::process::{Command, Output};

fn perfeval(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_perfeval"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write_config(dir: &Path, text: &str) -> String {
    let path = dir.join("run.toml");
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const SMALL: &[&str] = &[
    "--s", "3", "--l", "6", "--lambda", "1", "--mu", "0.5", "--xi", "0.01", "--xi-h", "0.01",
    "--eta", "0.5", "--eta-h", "0.5",
];

const EXPECTED_HEADER: &str = "method,semantics,S,L,lambda,mu,xi,xi_h,eta,eta_h,mql,thrp,mrt,\
availability,p_block,iterations,converged,residual,ci_mql,ci_thrp,ci_mrt,wall_ms";

#[test]
fn solve_emits_fixed_schema() {
    let out = perfeval(&[&["solve"], SMALL].concat());
    assert!(out.status.success());
    let text = stdout_str(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), EXPECTED_HEADER);
    let row = lines.next().unwrap();
    assert!(row.starts_with("iterative,paper-literal,3,6,"));
    // Analytical rows leave the three CI columns empty.
    assert!(row.contains(",true,"));
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields.len(), 22);
    assert_eq!(&fields[18..21], &["", "", ""]);
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s = 3\nl = 6\nlambda = 70.0\nmu = 0.5\nxi = 0.01\nxi_h = 0.01\neta = 0.5\neta_h = 0.5\n",
    );
    let out = perfeval(&["solve", "--config", &cfg, "--lambda", "80"]);
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.contains("8.00000000e1"), "expected lambda=80 in output: {text}");
}

#[test]
fn missing_mu_h_defaults_to_mu() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s = 3\nl = 6\nlambda = 1.0\nmu = 0.25\nxi = 0.01\nxi_h = 0.01\neta = 0.5\neta_h = 0.5\n",
    );
    let out = perfeval(&["solve", "--config", &cfg]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn mu_h_mismatch_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s = 3\nl = 6\nlambda = 1.0\nmu = 0.25\nmu_h = 0.3\nxi = 0.01\nxi_h = 0.01\neta = 0.5\neta_h = 0.5\n",
    );
    let out = perfeval(&["solve", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("mu_h"), "stderr: {err}");
}

#[test]
fn capacity_violation_names_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s = 5\nl = 2\nlambda = 1.0\nmu = 0.25\nxi = 0.01\nxi_h = 0.01\neta = 0.5\neta_h = 0.5\n",
    );
    let out = perfeval(&["solve", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("'l'"), "stderr: {err}");
}

#[test]
fn unknown_config_key_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "s = 3\nl = 6\nbogus_key = 1\n");
    let out = perfeval(&["solve", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bogus_key"), "stderr: {err}");
}

#[test]
fn oracle_cap_exit_code() {
    let out = perfeval(&["exact", "--s", "1000", "--l", "2000"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn non_convergence_exit_code_still_emits_row() {
    let out = perfeval(&[&["solve", "--max-iter", "1", "--delta", "1e-12"], SMALL].concat());
    assert_eq!(out.status.code(), Some(2));
    let text = stdout_str(&out);
    assert!(text.lines().count() >= 2, "partial result row expected: {text}");
    assert!(text.contains(",false,"), "row should be marked unconverged: {text}");
}

#[test]
fn sweep_requires_axis_and_values() {
    let out = perfeval(&[&["sweep"], SMALL].concat());
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("axis"));
}

#[test]
fn sweep_emits_rows_in_axis_order() {
    let out = perfeval(
        &[&["sweep", "--axis", "lambda", "--values", "0.5,1.0", "--methods", "iterative,exact"], SMALL]
            .concat(),
    );
    assert!(out.status.success());
    let text = stdout_str(&out);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("iterative") && rows[0].contains("5.00000000e-1"));
    assert!(rows[1].starts_with("exact") && rows[1].contains("5.00000000e-1"));
    assert!(rows[2].starts_with("iterative") && rows[2].contains("1.00000000e0"));
}

#[test]
fn csv_reruns_are_byte_identical_modulo_wall_ms() {
    let dir = tempfile::tempdir().unwrap();
    let args_base = [
        "simulate", "--seed", "9", "--horizon", "2000", "--replications", "3", "--s", "3", "--l",
        "6", "--lambda", "1", "--mu", "0.5", "--xi", "0.01", "--xi-h", "0.01", "--eta", "0.5",
        "--eta-h", "0.5",
    ];
    let out_a = dir.path().join("a.csv");
    let out_b = dir.path().join("b.csv");
    let run_a = perfeval(&[&args_base[..], &["--out", out_a.to_str().unwrap()]].concat());
    let run_b = perfeval(&[&args_base[..], &["--out", out_b.to_str().unwrap()]].concat());
    assert!(run_a.status.success() && run_b.status.success());
    let strip = |path: &Path| {
        std::fs::read_to_string(path)
            .unwrap()
            .lines()
            .map(|line| line.rsplit_once(',').unwrap().0.to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(strip(&out_a), strip(&out_b));
}

#[test]
fn json_format_mirrors_rows() {
    let out = perfeval(&[&["solve", "--format", "json"], SMALL].concat());
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    let row = &rows.as_array().unwrap()[0];
    assert_eq!(row["method"], "iterative");
    assert_eq!(row["S"], 3);
    assert!(row["mql"].as_f64().unwrap() > 0.0);
    assert!(row["ci_mql"].is_null());
}

#[test]
fn compare_emits_discrepancy_report() {
    let out = perfeval(
        &[&["compare", "--methods", "iterative,exact", "--delta", "1e-9"], SMALL].concat(),
    );
    assert!(out.status.success());
    let text = stdout_str(&out);
    assert!(text.starts_with("metric,method_a,method_b,value_a,value_b,rel_discrepancy,threshold,pass"));
    assert!(text.contains("mql,iterative,exact"));
    assert!(!text.contains("false"), "tight solve should beat 5%: {text}");
}

#[test]
fn unused_keys_warn_but_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "s = 3\nl = 6\nlambda = 1.0\nmu = 0.5\nxi = 0.01\nxi_h = 0.01\neta = 0.5\neta_h = 0.5\nreplications = 4\n",
    );
    let out = perfeval(&["solve", "--config", &cfg]);
    assert!(out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("replications"), "expected unused-key warning: {err}");
}

#[test]
fn repro_rejects_unknown_preset() {
    let out = perfeval(&["repro", "fig99"]);
    assert_eq!(out.status.code(), Some(1));
}
