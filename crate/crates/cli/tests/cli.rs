//! CLI contract tests: exit codes, error paths naming the offending
//! node, CSV export, and golden reports per subcommand (timings
//! stripped).

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_disklab")
}

fn write_symbol(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    let mut f = std::fs::File::create(&path).unwrap();
    f.write_all(text.as_bytes()).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn strip_timings(mut doc: serde_json::Value) -> serde_json::Value {
    doc.as_object_mut().unwrap().remove("timings");
    doc
}

const G_Z: &str = r#"{"kind":"polynomial","coeffs":[[0.0,0.0],[1.0,0.0]]}"#;
const G_HALF: &str = r#"{"kind":"rational","num":[[1.0,0.0],[-1.0,0.0]],"den":[[2.0,0.0]]}"#;

fn golden_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name)
}

/// Compare against the stored golden document; regenerate by running
/// with DISKLAB_BLESS=1.
fn check_golden(name: &str, doc: &serde_json::Value) {
    let pretty = serde_json::to_string_pretty(doc).unwrap();
    let path = golden_path(name);
    if std::env::var("DISKLAB_BLESS").is_ok() {
        std::fs::create_dir_all(path.parent().unwrap()).unwrap();
        std::fs::write(&path, &pretty).unwrap();
        return;
    }
    let stored = std::fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(
        pretty,
        stored,
        "golden mismatch for {name}; run with DISKLAB_BLESS=1 to regenerate"
    );
}

#[test]
fn norm_subcommand_golden() {
    let dir = TempDir::new().unwrap();
    let g = write_symbol(&dir, "g.json", G_Z);
    let out = run(&[
        "norm",
        "--f",
        g.to_str().unwrap(),
        "--space",
        "besov",
        "--p",
        "3",
        "--levels",
        "6",
        "--angular-base",
        "8",
    ]);
    let doc = stdout_json(&out);
    // value sanity before freezing bytes: (1/2)^{1/3}
    let value = doc["results"]["value"].as_f64().unwrap();
    assert!((value - 0.5f64.powf(1.0 / 3.0)).abs() < 0.01);
    check_golden("norm.json", &strip_timings(doc));
}

#[test]
fn check_density_golden_and_csv() {
    let dir = TempDir::new().unwrap();
    let g = write_symbol(&dir, "g.json", G_Z);
    let common = [
        "check-density",
        "--g",
        g.to_str().unwrap(),
        "--c-grid",
        "0.25",
        "--eta-grid",
        "0.5",
        "--separation",
        "0.45",
        "--r-limit",
        "0.9",
        "--rings",
        "12",
        "--res-angular",
        "76",
    ];
    let out = run(&common);
    let doc = stdout_json(&out);
    assert_eq!(doc["results"]["verdict"], "holds");
    check_golden("check_density.json", &strip_timings(doc));

    let mut csv_args = common.to_vec();
    csv_args.extend_from_slice(&["--format", "csv"]);
    let out = run(&csv_args);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("a_re,a_im,ratio"));
    let first = lines.next().unwrap();
    assert_eq!(first.split(',').count(), 3);
}

#[test]
fn lower_bound_golden() {
    let dir = TempDir::new().unwrap();
    let g = write_symbol(&dir, "g.json", G_HALF);
    let out = run(&[
        "lower-bound",
        "--g",
        g.to_str().unwrap(),
        "--space",
        "hardy",
        "--p",
        "2",
        "--alphas",
        "0.5,0.9",
        "--alpha-angles",
        "0",
        "--levels",
        "7",
        "--angular-base",
        "8",
        "--n-boundary",
        "512",
    ]);
    let doc = stdout_json(&out);
    let inf = doc["results"]["inf_ratio"].as_f64().unwrap();
    assert!(inf > 0.0 && inf < 1.0);
    check_golden("lower_bound.json", &strip_timings(doc));
}

#[test]
fn lemma_check_golden() {
    let out = run(&[
        "lemma-check",
        "--seed",
        "3",
        "--count",
        "10",
        "--rings",
        "12",
        "--res-angular",
        "76",
        "--mass-count",
        "1",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["results"]["lemma_suite"]["violations"], 0);
    check_golden("lemma_check.json", &strip_timings(doc));
}

#[test]
fn cross_validate_golden() {
    let dir = TempDir::new().unwrap();
    let g = write_symbol(&dir, "g.json", G_Z);
    let out = run(&[
        "cross-validate",
        "--g",
        g.to_str().unwrap(),
        "--spaces",
        "hardy:2",
        "--c-grid",
        "0.25",
        "--eta-grid",
        "0.5",
        "--separation",
        "0.45",
        "--r-limit",
        "0.9",
        "--rings",
        "12",
        "--res-angular",
        "76",
    ]);
    let doc = stdout_json(&out);
    assert_eq!(doc["results"]["all_agree"], true);
    check_golden("cross_validate.json", &strip_timings(doc));
}

#[test]
fn report_golden() {
    let dir = TempDir::new().unwrap();
    let g = write_symbol(&dir, "g.json", G_Z);
    let out = run(&[
        "report",
        "--g",
        g.to_str().unwrap(),
        "--spaces",
        "hardy:2",
        "--seed",
        "5",
        "--lemma-count",
        "5",
        "--c-grid",
        "0.25",
        "--eta-grid",
        "0.5",
        "--separation",
        "0.45",
        "--r-limit",
        "0.9",
        "--rings",
        "12",
        "--res-angular",
        "76",
    ]);
    let doc = stdout_json(&out);
    check_golden("report.json", &strip_timings(doc));
}

#[test]
fn malformed_symbol_exits_2_with_node_path() {
    let dir = TempDir::new().unwrap();
    let g = write_symbol(
        &dir,
        "bad.json",
        r#"{"kind":"sum","children":[{"kind":"blaschke","zeros":[[2.0,0.0]]}]}"#,
    );
    let out = run(&["norm", "--f", g.to_str().unwrap(), "--space", "besov"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(
        err.contains("$.children[0].zeros[0]"),
        "stderr should name the node: {err}"
    );
}

#[test]
fn missing_file_exits_2() {
    let out = run(&["norm", "--f", "/nonexistent/g.json", "--space", "besov"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_seed_exits_2() {
    let out = run(&["lemma-check", "--count", "5"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("seed"), "{err}");
}

#[test]
fn cell_cap_exits_3() {
    let dir = TempDir::new().unwrap();
    let g = write_symbol(&dir, "g.json", G_Z);
    let out = run(&[
        "norm",
        "--f",
        g.to_str().unwrap(),
        "--space",
        "besov",
        "--levels",
        "12",
        "--angular-base",
        "64",
        "--cell-cap",
        "1000",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn invalid_space_parameter_exits_2() {
    let dir = TempDir::new().unwrap();
    let g = write_symbol(&dir, "g.json", G_Z);
    let out = run(&[
        "norm",
        "--f",
        g.to_str().unwrap(),
        "--space",
        "besov",
        "--p",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(2));
}
