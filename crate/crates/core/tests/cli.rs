use std::path::PathBuf;
use std::process::{Command, Output};

use flowforms::report::Report;

fn flowforms(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_flowforms")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn verify_json(args: &[&str]) -> (i32, Report) {
    let mut all = vec!["verify"];
    all.extend_from_slice(args);
    let o = flowforms(&all);
    let report: Report = serde_json::from_str(&stdout(&o)).expect("report JSON");
    (o.status.code().unwrap(), report)
}

#[test]
fn exit_codes() {
    assert_eq!(verify_json(&["--scenario", "shear"]).0, 0);
    assert_eq!(verify_json(&["--scenario", "abc"]).0, 1);
    assert_eq!(flowforms(&["verify", "--scenario", "nowhere.toml"]).status.code(), Some(2));
    assert_eq!(flowforms(&["verify", "--scenario", "shear", "--checks", "bogus"]).status.code(), Some(2));
    assert_eq!(flowforms(&["verify", "--scenario", "shear", "--grid", "0"]).status.code(), Some(2));
    assert_eq!(flowforms(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn json_round_trips() {
    let (_, report) = verify_json(&["--scenario", "rotation", "--checks", "scenario,euler"]);
    assert_eq!(report.scenario, "rotation");
    assert!(report.checks.iter().all(|c| c.id.starts_with("scenario.") || c.id.starts_with("euler.")));
    let again: Report = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(again.canonical_json(), report.canonical_json());
}

#[test]
fn text_format_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = flowforms(&["verify", "--scenario", "shear", "--checks", "scenario", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().any(|l| l.starts_with("PASS scenario.div_v")));
    let written: Report = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(written.all_pass());
    let text = flowforms(&["verify", "--scenario", "abc", "--checks", "scenario", "--format", "text"]);
    assert!(stdout(&text).contains("FAIL scenario.advected_phi"));
}

#[test]
fn scenario_files() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.toml");
    std::fs::write(&good, "v = [\"-y\", \"x\", \"0\"]\nB = [\"0\", \"0\", \"1\"]\nphi = \"z\"\nh1 = \"x^2 + y^2\"\ngrid_n = 4\n").unwrap();
    let (code, report) = verify_json(&["--scenario", good.to_str().unwrap(), "--checks", "scenario,symplectic"]);
    assert_eq!(code, 0, "{}", report.to_text());
    assert_eq!(report.scenario, "good");

    let missing = dir.path().join("missing.toml");
    std::fs::write(&missing, "v = [\"0\", \"0\", \"0\"]\nB = [\"1\", \"0\", \"0\"]\nh1 = \"z\"\n").unwrap();
    let o = flowforms(&["verify", "--scenario", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("missing field `phi`") || String::from_utf8_lossy(&o.stderr).contains("phi"));

    let syntax = dir.path().join("syntax.toml");
    std::fs::write(&syntax, "v = [\"0\", \"0\", \"0\"]\nB = [\"1\", \"0\", \"0\"]\nphi = \"y + \"\nh1 = \"z\"\n").unwrap();
    let o = flowforms(&["verify", "--scenario", syntax.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));
}

#[test]
fn catalog_commands() {
    let list = stdout(&flowforms(&["catalog", "list"]));
    assert_eq!(list.lines().collect::<Vec<_>>(), ["shear", "rotation", "abc"]);
    let show = flowforms(&["catalog", "show", "rotation"]);
    assert!(stdout(&show).contains("v = [\"-y\", \"x\", \"0\"]"));
    assert_eq!(flowforms(&["catalog", "show", "nope"]).status.code(), Some(2));
}

#[test]
fn hierarchy_and_helicity_commands() {
    let h = stdout(&flowforms(&["hierarchy", "--scenario", "shear", "--depth", "2"]));
    assert!(h.lines().any(|l| l.starts_with("W2 =")));
    let o = flowforms(&["hierarchy", "--scenario", "abc"]);
    assert_eq!(o.status.code(), Some(2));
    let i = stdout(&flowforms(&["helicity-integral", "--scenario", "abc", "--resolution", "16"]));
    let ratio: f64 = i.lines().nth(1).unwrap().rsplit(' ').next().unwrap().parse().unwrap();
    assert!((ratio - 3.0).abs() < 1e-9, "{i}");
}

#[test]
fn repeated_runs_are_identical() {
    let a = verify_json(&["--scenario", "rotation", "--seed", "7"]).1.canonical_json();
    let b = verify_json(&["--scenario", "rotation", "--seed", "7"]).1.canonical_json();
    assert_eq!(a, b);
}

#[test]
fn golden_shear_report() {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/shear.json");
    let (_, report) = verify_json(&["--scenario", "shear"]);
    let mut current = report.clone();
    current.elapsed_ms = 0;
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, current.to_json() + "\n").unwrap();
    }
    let golden: Report = serde_json::from_str(&std::fs::read_to_string(&path).expect("golden file")).unwrap();
    assert_eq!(golden.checks.len(), current.checks.len());
    for (g, c) in golden.checks.iter().zip(&current.checks) {
        assert_eq!((&g.id, &g.eq, g.pass, g.expect, g.excluded), (&c.id, &c.eq, c.pass, c.expect, c.excluded));
        let close = |a: f64, b: f64| (a.is_nan() && b.is_nan()) || (a - b).abs() <= 1e-12 + 1e-9 * a.abs().max(b.abs());
        assert!(close(g.max, c.max) && close(g.rms, c.rms), "{}: {} vs {}", g.id, g.max, c.max);
    }
    assert_eq!(golden.notes, current.notes);
}
