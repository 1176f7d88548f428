//! End-to-end tests of the `nvk` binary: exit-code contract, JSON report
//! schema, and the build/check/extract pipeline on real files.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn nvk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nvk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .display()
        .to_string()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[derive(serde::Deserialize)]
struct JsonReport {
    command: String,
    #[allow(dead_code)]
    inputs: Vec<String>,
    checks: Vec<JsonCheck>,
    exit: i32,
}

#[derive(serde::Deserialize)]
struct JsonCheck {
    id: String,
    status: String,
    #[serde(default)]
    witness: Option<String>,
}

fn json_report(out: &Output) -> JsonReport {
    serde_json::from_str(&stdout(out)).expect("valid JSON report")
}

#[test]
fn check_passes_on_the_dim2_file() {
    let out = nvk(&["check", &data("dim2.nvk")]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let out = nvk(&["--json", "check", &data("dim2.nvk")]);
    let report = json_report(&out);
    assert_eq!(report.command, "check");
    assert_eq!(report.exit, 0);
    assert!(report
        .checks
        .iter()
        .all(|c| c.status == "pass"));
}

#[test]
fn check_fails_with_witness_on_broken_axioms() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.nvk");
    std::fs::write(
        &path,
        "algebra X dim 2\nbasis e1 e2\nproduct:\ne1 * e2 = e1\ne2 * e1 = e2\n",
    )
    .unwrap();
    let out = nvk(&["--json", "check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = json_report(&out);
    let nov = report
        .checks
        .iter()
        .find(|c| c.id == "X/novikov")
        .expect("novikov check present");
    assert_eq!(nov.status, "fail");
    assert!(
        nov.witness.as_deref().unwrap_or("").contains("left-symmetry"),
        "{:?}",
        nov.witness
    );
}

#[test]
fn parse_errors_exit_2_with_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.nvk");
    std::fs::write(&path, "algebra X dim 2\nbasis e1 e1\n").unwrap();
    let out = nvk(&["check", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 2"), "{err}");
    assert!(err.contains("duplicate basis name"), "{err}");

    // Missing file is an input error as well.
    let out = nvk(&["check", "/nonexistent/file.nvk"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_tables_reports_the_single_known_discrepancy() {
    let out = nvk(&["--json", "verify-tables"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json_report(&out);
    let failing: Vec<&JsonCheck> = report
        .checks
        .iter()
        .filter(|c| c.status != "pass")
        .collect();
    assert_eq!(failing.len(), 1, "exactly one known failing check");
    assert_eq!(
        failing[0].id,
        "table1/N6@l=-2/family-matches-published-exactly"
    );
    assert!(failing[0]
        .witness
        .as_deref()
        .unwrap_or("")
        .contains("-3*b11"));
    // Everything about the dimension-3 table passes.
    assert!(report
        .checks
        .iter()
        .filter(|c| c.id.starts_with("table2/"))
        .all(|c| c.status == "pass"));
}

#[test]
fn build1_check_extract_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let built: PathBuf = dir.path().join("built.nvk");

    // Build the 4-dimensional example at s = 0.
    let out = nvk(&[
        "dext",
        "build1",
        &data("example48.nvk"),
        "--set",
        "s=0",
        "-o",
        built.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    // The emitted document passes `check`.
    let out = nvk(&["check", built.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    // And extraction along the dual line succeeds with all 18 conditions.
    let out = nvk(&[
        "--json",
        "dext",
        "extract",
        built.to_str().unwrap(),
        "--ideal",
        "estar",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let report = json_report(&out);
    assert!(report
        .checks
        .iter()
        .any(|c| c.id == "extract/sigma-isomorphism" && c.status == "pass"));
    assert!(report
        .checks
        .iter()
        .filter(|c| c.id.starts_with("conditions/"))
        .all(|c| c.status == "pass"));
}

#[test]
fn full_and_dim1_validators_name_the_same_failure() {
    // t = s = 1 gives k*t + s = 2, violating the tau condition.
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad48.nvk");
    let text = std::fs::read_to_string(data("example48.nvk"))
        .unwrap()
        .replace("tau(f,f) = -s", "tau(f,f) = 1")
        .replace("gamma(f,f)(f) = s", "gamma(f,f)(f) = 1")
        .replace("params: s\n", "");
    std::fs::write(&path, text).unwrap();

    let out = nvk(&["--json", "dext", "build", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = json_report(&out);
    let failing: Vec<&str> = report
        .checks
        .iter()
        .filter(|c| c.status != "pass")
        .map(|c| c.id.as_str())
        .collect();
    assert_eq!(failing, ["conditions/(3.4.14)"]);

    let out = nvk(&["--json", "dext", "build1", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let report = json_report(&out);
    assert!(report
        .checks
        .iter()
        .any(|c| c.id == "conditions/dim1-1" && c.status == "fail"));
}

#[test]
fn tstar_then_iso_matches_the_dim2_algebra() {
    let dir = tempfile::tempdir().unwrap();
    let built = dir.path().join("tstar.nvk");
    let out = nvk(&[
        "dext",
        "tstar",
        &data("tstar_line.nvk"),
        "-o",
        built.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let out = nvk(&[
        "iso",
        built.to_str().unwrap(),
        &data("dim2.nvk"),
        "--set",
        "s=1",
        "--map",
        "e=e2;estar=e1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    // A wrong map is rejected with exit 1.
    let out = nvk(&[
        "iso",
        built.to_str().unwrap(),
        &data("dim2.nvk"),
        "--set",
        "s=1",
        "--map",
        "e=e1;estar=e2",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn structure_commands_on_the_dim2_file() {
    let out = nvk(&["perp", &data("dim2.nvk"), "--span", "e1", "--set", "s=1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("span{e1}"));

    let out = nvk(&["ideals", &data("dim2.nvk"), "--set", "s=1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("span{e1}"));

    let out = nvk(&["decompose", &data("trivial3.nvk")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("factor-3"));

    // Parametric metric without --set is an input error for perp.
    let out = nvk(&["perp", &data("dim2.nvk"), "--span", "e1"]);
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    assert!(stdout(&out).contains("parameter-free"));
}

#[test]
fn rep_check_and_audit() {
    let out = nvk(&["rep-check", &data("dim2.nvk"), "--set", "s=1"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n3.nvk");
    std::fs::write(
        &path,
        "algebra N3 dim 2\nbasis e1 e2\nproduct:\ne1 * e1 = e1\ne1 * e2 = e2\ne2 * e1 = e2\n",
    )
    .unwrap();
    let out = nvk(&["--json", "audit", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let report = json_report(&out);
    assert!(report
        .checks
        .iter()
        .any(|c| c.id == "audit/pattern/identity-element"));
    assert!(report
        .checks
        .iter()
        .any(|c| c.id == "audit/degeneracy-confirmed" && c.status == "pass"));
}

#[test]
fn qf_command_modes() {
    let out = nvk(&[
        "--json",
        "qf",
        &data("trivial3.nvk"),
        "--map",
        "e1=e3;e2=0;e3=e1",
    ]);
    // D is a derivation (trivial algebra), skew-adjoint for diag(1,1,-1)?
    // B(De1,e3) = B(e3,e3) = -1, -B(e1,De3) = -B(e1,e1) = -1: yes.
    // Omega is degenerate (e2 in the kernel), so not quasi-Frobenius.
    assert_eq!(out.status.code(), Some(1), "{}", stdout(&out));
    let report = json_report(&out);
    assert!(report
        .checks
        .iter()
        .any(|c| c.id == "qf/equation" && c.status == "pass"));
    assert!(report
        .checks
        .iter()
        .any(|c| c.id == "qf/nondegenerate" && c.status == "fail"));

    // Bad mode flag is an input error.
    let out = nvk(&[
        "qf",
        &data("trivial3.nvk"),
        "--map",
        "e1=e2;e2=-e1;e3=0",
        "--mode",
        "sideways",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn json_reports_deserialize_for_every_command() {
    let dir = tempfile::tempdir().unwrap();
    let built = dir.path().join("built.nvk");
    let tstar = dir.path().join("tstar.nvk");
    nvk(&[
        "dext", "build1", &data("example48.nvk"), "--set", "s=0",
        "-o", built.to_str().unwrap(),
    ]);
    nvk(&["dext", "tstar", &data("tstar_line.nvk"), "-o", tstar.to_str().unwrap()]);
    let built = built.to_str().unwrap();
    let tstar = tstar.to_str().unwrap();
    let dim2 = data("dim2.nvk");
    let trivial = data("trivial3.nvk");
    let ex48 = data("example48.nvk");
    let tstar_line = data("tstar_line.nvk");
    let cases: Vec<Vec<&str>> = vec![
        vec!["check", &dim2],
        vec!["forms", &dim2],
        vec!["perp", &dim2, "--span", "e1", "--set", "s=1"],
        vec!["decompose", &trivial],
        vec!["ideals", &dim2, "--set", "s=1"],
        vec!["rep-check", &dim2, "--set", "s=1"],
        vec!["qf", &trivial, "--map", "e1=e2;e2=-e1;e3=0"],
        vec!["dext", "build", &ex48, "--set", "s=0"],
        vec!["dext", "build1", &ex48, "--set", "s=0"],
        vec!["dext", "tstar", &tstar_line],
        vec!["dext", "extract", built, "--ideal", "estar"],
        vec!["iso", tstar, &dim2, "--set", "s=1", "--map", "e=e2;estar=e1"],
        vec!["verify-tables"],
        vec!["audit", &dim2],
    ];
    for case in cases {
        let mut args = vec!["--json"];
        args.extend(case.iter().copied());
        let out = nvk(&args);
        let report = json_report(&out);
        // Exit codes agree between the process and the payload.
        assert_eq!(
            out.status.code(),
            Some(report.exit),
            "{case:?}: {}",
            stdout(&out)
        );
        assert!(!report.checks.is_empty(), "{case:?}");
        for c in &report.checks {
            assert!(
                ["pass", "fail", "inconclusive"].contains(&c.status.as_str()),
                "{case:?}: bad status {}",
                c.status
            );
        }
    }
}
