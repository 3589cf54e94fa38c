//! End-to-end checks of the command-line surface: subcommands, config
//! handling, exit codes and emitted files.

use std::path::Path;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sphere-control"))
}

fn run_in(dir: &Path, args: &[&str]) -> std::process::Output {
    bin()
        .args(args)
        .arg("--out")
        .arg(dir)
        .output()
        .expect("binary runs")
}

#[test]
fn verify_lemma_passes_by_default() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_in(dir.path(), &["verify-lemma", "--n", "2", "--pairs", "4"]);
    assert!(output.status.success(), "{output:?}");
    // The level-2 inclusion certifies all nine canonical monomials.
    let certificates =
        std::fs::read_to_string(dir.path().join("certificates.csv")).unwrap();
    let monomials: std::collections::BTreeSet<&str> = certificates
        .lines()
        .skip(1)
        .map(|line| line.split(',').next().unwrap())
        .collect();
    assert_eq!(monomials.len(), 9);
}

#[test]
fn mutated_rewrite_fails_the_suite() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_in(
        dir.path(),
        &["verify-lemma", "--n", "2", "--pairs", "2", "--mutate"],
    );
    assert_eq!(output.status.code(), Some(1), "{output:?}");
}

#[test]
fn saturate_emits_dimension_table() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_in(dir.path(), &["saturate", "--n", "2", "--cap", "2"]);
    assert!(output.status.success());
    let dims = std::fs::read_to_string(dir.path().join("dims.csv")).unwrap();
    assert_eq!(dims, "level,dimension\n1,3\n2,9\n");
}

#[test]
fn low_cap_saturation_warns() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_in(dir.path(), &["saturate", "--n", "2", "--cap", "1"]);
    assert!(output.status.success());
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("warning"), "expected truncation warning");
}

#[test]
fn converge_emits_csv_json_svg_and_valid_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_in(
        dir.path(),
        &[
            "converge",
            "--jmax",
            "10",
            "--phi",
            "z",
            "--deltas",
            "1e-1:1e-2:5",
        ],
    );
    assert!(output.status.success(), "{output:?}");
    for name in ["converge.csv", "converge.json", "converge.svg", "manifest.json"] {
        assert!(dir.path().join(name).exists(), "missing {name}");
    }
    sphere_control::experiments::verify_manifest(dir.path()).unwrap();
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    // Increasing δ schedule.
    let output = run_in(
        dir.path(),
        &["converge", "--deltas", "1e-4:1e-1:5"],
    );
    assert_eq!(output.status.code(), Some(2), "{output:?}");
    // Empty δ list.
    let output = run_in(dir.path(), &["converge", "--deltas", ""]);
    assert_eq!(output.status.code(), Some(2), "{output:?}");
    // Zero oversampling factor.
    let output = run_in(dir.path(), &["converge", "--oversample", "0"]);
    assert_eq!(output.status.code(), Some(2), "{output:?}");
    // Initial state above the band limit.
    let output = run_in(
        dir.path(),
        &["converge", "--jmax", "4", "--psi0", "6, 0"],
    );
    assert_eq!(output.status.code(), Some(2), "{output:?}");
    // Nonpositive synthesized-transfer step.
    let output = run_in(
        dir.path(),
        &["transfer", "--mode", "synthesized", "--delta", "-0.1"],
    );
    assert_eq!(output.status.code(), Some(2), "{output:?}");
    // Unparsable polynomial.
    let output = run_in(dir.path(), &["bch-check", "--phi", "w^2"]);
    assert_eq!(output.status.code(), Some(2));
    // Plan target outside the chain.
    let output = run_in(
        dir.path(),
        &["plan", "--target", "x^3", "--n", "2", "--cap", "2"],
    );
    assert_eq!(output.status.code(), Some(2));
    // Unknown subcommand (clap usage error).
    let output = bin().arg("frobnicate").output().unwrap();
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn config_file_applies_and_flags_override() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("exp.conf");
    std::fs::write(
        &config_path,
        "[general]\njmax = 10\nseed = 123\n\n[saturate]\nn = 2\ncap = 2\n",
    )
    .unwrap();
    let out_dir = dir.path().join("run");
    let output = bin()
        .args(["saturate", "--config"])
        .arg(&config_path)
        .args(["--n", "3", "--cap", "3"])
        .arg("--out")
        .arg(&out_dir)
        .output()
        .unwrap();
    assert!(output.status.success(), "{output:?}");
    let summary = std::fs::read_to_string(out_dir.join("summary.json")).unwrap();
    // The flag override wins over the config file.
    assert!(summary.contains("\"levels\": 3"));
    // The config file's seed survives into the echo.
    assert!(summary.contains("\"general.seed\": \"123\""));

    let missing = bin()
        .args(["saturate", "--config", "/nonexistent/path.conf"])
        .output()
        .unwrap();
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn plan_output_round_trips_through_the_parser() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_in(
        dir.path(),
        &["plan", "--target", "4 x z", "--n", "2", "--cap", "2"],
    );
    assert!(output.status.success());
    let text = std::fs::read_to_string(dir.path().join("plan.txt")).unwrap();
    let plan = sphere_control::saturation::SynthesisPlan::parse(&text).unwrap();
    assert!(plan.is_sound());
    assert_eq!(plan.conjugate_count(), 2);
}

#[test]
fn transfer_writes_schema_columns() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_in(
        dir.path(),
        &[
            "transfer",
            "--j",
            "1",
            "--mode",
            "fitted",
            "--degrees",
            "2, 4",
            "--jmax",
            "8",
        ],
    );
    assert!(output.status.success(), "{output:?}");
    let csv = std::fs::read_to_string(dir.path().join("transfer.csv")).unwrap();
    assert!(csv.starts_with("j,degree,delta_or_idealized,overlap,distance,residual\n"));
    assert_eq!(csv.lines().count(), 3);
}
