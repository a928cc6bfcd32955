// Golden-file tests for the `risklens` binary. Set RISKLENS_BLESS=1 to
// rewrite the expected outputs after an intentional change.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn run(args: &[&str], input: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_risklens"))
        .args(args)
        .arg("--input")
        .arg(root().join(input))
        .env_remove("RISKLENS_SEED")
        .output()
        .expect("binary runs")
}

fn golden(name: &str, args: &[&str], input: &str, exit: i32) {
    let out = run(args, input);
    assert_eq!(
        out.status.code(),
        Some(exit),
        "{name}: stderr {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    if std::env::var_os("RISKLENS_BLESS").is_some() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &out.stdout).unwrap();
        return;
    }
    let want = std::fs::read(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(
        out.stdout == want,
        "{name} differs from golden:\n{}",
        String::from_utf8_lossy(&out.stdout)
    );
}

fn stderr_of(args: &[&str], input: &str, exit: i32) -> String {
    let out = run(args, input);
    assert_eq!(out.status.code(), Some(exit));
    assert!(out.stdout.is_empty());
    String::from_utf8(out.stderr).unwrap()
}

#[test]
fn effective_without_outside_option() {
    golden(
        "effective_unavailable.json",
        &["effective"],
        "fixtures/cli/effective_unavailable.json",
        0,
    );
}

#[test]
fn effective_atom_csv() {
    golden(
        "effective_atom.csv",
        &["effective", "--format", "csv"],
        "fixtures/cli/effective_atom.json",
        0,
    );
}

#[test]
fn effective_rejects_bad_mass() {
    let err = stderr_of(&["effective"], "fixtures/cli/effective_bad_mass.json", 2);
    assert!(err.contains("masses sum to 1.1"), "{err}");
}

#[test]
fn malformed_json_is_an_input_error() {
    stderr_of(&["effective"], "fixtures/cli/malformed.json", 2);
}

#[test]
fn missing_file_is_an_input_error() {
    stderr_of(&["effective"], "fixtures/cli/does_not_exist.json", 2);
}

#[test]
fn identify_example() {
    golden(
        "identify_example.json",
        &["identify"],
        "fixtures/cli/identify_example.json",
        0,
    );
    golden(
        "identify_example.csv",
        &["identify", "--format", "csv"],
        "fixtures/cli/identify_example.json",
        0,
    );
}

#[test]
fn identify_reports_violating_triple() {
    golden(
        "identify_violation.json",
        &["identify"],
        "fixtures/cli/identify_violation.json",
        1,
    );
}

#[test]
fn identify_constant_u_is_a_domain_error() {
    stderr_of(&["identify"], "fixtures/cli/identify_constant.json", 3);
}

#[test]
fn compare() {
    golden(
        "compare_less.json",
        &["compare"],
        "fixtures/cli/compare_less.json",
        0,
    );
    golden(
        "compare_violation.csv",
        &["compare", "--format", "csv"],
        "fixtures/cli/identify_violation.json",
        1,
    );
}

#[test]
fn comparative_statics() {
    golden("mcs_a.json", &["mcs-a"], "fixtures/cli/mcs_a.json", 0);
    golden("mcs_b.json", &["mcs-b"], "fixtures/cli/mcs_b.json", 0);
    let err = stderr_of(&["mcs-a"], "fixtures/cli/mcs_a_no_option_at_bottom.json", 3);
    assert!(err.contains("vanishes"), "{err}");
}

#[test]
fn cara_csv() {
    golden(
        "cara.csv",
        &["cara", "--format", "csv"],
        "fixtures/cli/cara.json",
        0,
    );
    let out = run(
        &["cara", "--format", "csv"],
        "fixtures/cli/cara_default_grid.json",
    );
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("rho_closed_form=1.5\n"));
    assert_eq!(text.lines().count(), 2 + 1 + 4001);
}

#[test]
fn decompose_synthesized_kernel() {
    golden(
        "decompose_synthesized.json",
        &["decompose"],
        "fixtures/cli/kernel_synthesized.json",
        0,
    );
    golden(
        "decompose_synthesized.csv",
        &["decompose", "--format", "csv"],
        "fixtures/cli/kernel_synthesized.json",
        0,
    );
}

#[test]
fn decompose_background_risk() {
    golden(
        "decompose_background.json",
        &["decompose"],
        "fixtures/background_risk.json",
        1,
    );
}

#[test]
fn check_kernel() {
    golden(
        "check_background.json",
        &["check-kernel", "--trials", "50"],
        "fixtures/background_risk.json",
        1,
    );
    golden(
        "check_synthesized.json",
        &["check-kernel", "--trials", "50"],
        "fixtures/cli/kernel_synthesized.json",
        0,
    );
}

#[test]
fn output_is_byte_stable() {
    let args = ["compare", "--seed", "7", "--trials", "50"];
    let a = run(&args, "fixtures/cli/identify_violation.json");
    let b = run(&args, "fixtures/cli/identify_violation.json");
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_falls_back_to_environment() {
    let input = root().join("fixtures/background_risk.json");
    let with_env = |seed: &str| {
        Command::new(env!("CARGO_BIN_EXE_risklens"))
            .args(["check-kernel", "--trials", "50", "--input"])
            .arg(&input)
            .env("RISKLENS_SEED", seed)
            .output()
            .unwrap()
            .stdout
    };
    let flag = Command::new(env!("CARGO_BIN_EXE_risklens"))
        .args(["check-kernel", "--trials", "50", "--seed", "9", "--input"])
        .arg(&input)
        .env_remove("RISKLENS_SEED")
        .output()
        .unwrap()
        .stdout;
    assert_eq!(with_env("9"), flag);
    assert_ne!(with_env("9"), with_env("10"));
}

#[test]
fn writes_output_file() {
    let dir = std::env::temp_dir().join(format!("risklens-golden-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let out = Command::new(env!("CARGO_BIN_EXE_risklens"))
        .args(["effective", "--input"])
        .arg(root().join("fixtures/cli/effective_atom.json"))
        .arg("--output")
        .arg(&path)
        .output()
        .unwrap();
    assert!(out.status.success() && out.stdout.is_empty());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["u"]["values"], serde_json::json!([0.5, 1.0]));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn rejects_non_positive_tolerance() {
    stderr_of(
        &["effective", "--tol", "0"],
        "fixtures/cli/effective_atom.json",
        2,
    );
}
