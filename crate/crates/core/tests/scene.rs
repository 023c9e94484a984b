use std::collections::BTreeSet;
use std::path::Path;

use lagsurf::scene::{run_scene_text, validate_scene, RunOptions, Scene, EXIT_NUMERIC, EXIT_OK, EXIT_VALIDATION};

fn scenes() -> Vec<std::path::PathBuf> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenes");
    let mut v: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}

fn run(text: &str, dir: &Path) -> lagsurf::scene::RunOutcome {
    let opts = RunOptions {
        out_dir: Some(dir.to_path_buf()),
        tol: None,
    };
    run_scene_text(text, &opts).unwrap()
}

const SMALL: &str = r#"
name = "small"
resolution = 12
[surface]
kind = "normal-form"
eta = 1
zeta = [0, 0, 0, 1, 1]
[region]
x = [-0.3, 0.3]
y = [-0.3, 0.3]
[[task]]
kind = "classify-grid"
[[task]]
kind = "discriminant"
resolution = 48
[[task]]
kind = "asymptotic-lines"
seeds = [[0.1, 0.1], [0.1, -0.2]]
max-steps = 200
"#;

#[test]
fn shipped_scenes_are_valid() {
    for s in scenes() {
        assert_eq!(validate_scene(&s).unwrap(), vec![], "{}", s.display());
    }
}

#[test]
fn undeclared_variable_is_one_diagnostic() {
    let text = SMALL.replace("kind = \"normal-form\"\neta = 1\nzeta = [0, 0, 0, 1, 1]", "kind = \"generating-function\"\nF = \"x^3 + z\"");
    let d = Scene::parse(&text).unwrap_err();
    assert_eq!(d.len(), 1, "{d:?}");
    assert!(d[0].location.starts_with("surface"), "{d:?}");
    assert!(d[0].message.contains('z'));
}

#[test]
fn all_problems_are_reported_at_once() {
    let text = SMALL
        .replace("resolution = 12", "resolution = 12\ncolour = \"red\"")
        .replace("kind = \"classify-grid\"", "kind = \"index-report\"")
        .replace("max-steps = 200", "max-steps = 200\nstep = -1");
    let d = Scene::parse(&text).unwrap_err();
    assert!(d.len() >= 3, "{d:?}");
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&text, tmp.path());
    assert_eq!(out.exit_code, EXIT_VALIDATION);
    assert!(out.files.is_empty());
}

#[test]
fn outputs_are_deterministic_and_well_formed() {
    let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let (ra, rb) = (run(SMALL, a.path()), run(SMALL, b.path()));
    assert_eq!(ra.exit_code, EXIT_OK);
    let names: BTreeSet<String> = ra.files.iter().map(|f| f.file_name().unwrap().to_string_lossy().into()).collect();
    for n in ["classify_grid.csv", "discriminant.csv", "discriminant.svg", "asymptotic_lines.csv", "manifest.json"] {
        assert!(names.contains(n), "{names:?}");
    }
    for n in &names {
        if n == "manifest.json" {
            continue;
        }
        assert_eq!(std::fs::read(a.path().join(n)).unwrap(), std::fs::read(b.path().join(n)).unwrap(), "{n}");
    }
    drop(rb);
    let grid = std::fs::read_to_string(a.path().join("classify_grid.csv")).unwrap();
    let mut lines = grid.lines();
    assert_eq!(lines.next(), Some("chart,x,y,K,kappa,Delta,class"));
    assert_eq!(lines.count(), 13 * 13);
    assert!(grid.contains("main,-2.9999999999999999e-1,-2.9999999999999999e-1,"));
    // One path per polyline.
    let csv = std::fs::read_to_string(a.path().join("discriminant.csv")).unwrap();
    let polylines: BTreeSet<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    let svg = std::fs::read_to_string(a.path().join("discriminant.svg")).unwrap();
    assert_eq!(svg.matches("<path").count(), polylines.len());
    assert!(svg.contains("scene-sha256: "));
    let manifest: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(a.path().join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["status"], "ok");
    let notes = manifest["tasks"][2]["notes"].as_array().unwrap();
    assert!(notes.iter().any(|n| n.as_str().unwrap().contains("elliptic")), "{notes:?}");
}

#[test]
fn flat_plane_runs_with_degeneracy_flags() {
    let text = std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("scenes/flat_plane.toml")).unwrap();
    let tmp = tempfile::tempdir().unwrap();
    let out = run(&text, tmp.path());
    assert_eq!(out.exit_code, EXIT_OK, "{:?}", out.errors);
    let report = std::fs::read_to_string(tmp.path().join("inflection_report.json")).unwrap();
    assert!(report.contains("\"degenerate\": true"));
}

#[test]
fn numeric_failure_leaves_a_partial_manifest() {
    let text = r#"
name = "close-umbilics"
resolution = 32
[surface]
kind = "generating-function"
F = "x^5/20 - 0.00000025*x^3/2 + y^4/12"
[region]
x = [-0.01, 0.01]
y = [-0.01, 0.01]
[[task]]
kind = "index-report"
chi = 1
[[task]]
kind = "umbilic-report"
"#;
    let tmp = tempfile::tempdir().unwrap();
    let out = run(text, tmp.path());
    assert_eq!(out.exit_code, EXIT_NUMERIC);
    assert!(out.errors[0].contains("index_report") && out.errors[0].contains("overlap"));
    let manifest = std::fs::read_to_string(tmp.path().join("manifest.json")).unwrap();
    assert!(manifest.contains("\"status\": \"partial\""));
    assert!(tmp.path().join("umbilic_report.json").exists());
}
