use std::path::PathBuf;
use std::process::{Command, Output};

use spacelike::report::{to_json, AnalysisReport, CSV_HEADER};

fn spacelike(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spacelike")).args(args).output().expect("binary runs")
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("spacelike-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn catalog_list_and_build() {
    let out = spacelike(&["catalog", "list"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["surfaces"].as_array().unwrap().len() >= 5);

    let out = spacelike(&["catalog", "build", "truncated-catenoid"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["domain"]["kind"], "annular_sector");
    assert_eq!(v["supports"].as_array().unwrap().len(), 4);
    assert!(v["expected"].as_array().unwrap().iter().any(|e| e["quantity"] == "index_sum"));
}

#[test]
fn analyze_report_round_trips_and_is_deterministic() {
    let a = spacelike(&["analyze", "truncated-catenoid", "--grid", "33"]);
    let b = spacelike(&["analyze", "truncated-catenoid", "--grid", "33"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    let report: AnalysisReport = serde_json::from_str(&text).unwrap();
    assert_eq!(to_json(&report), text);
    assert!(report.checks.iter().all(|c| c.passed));
    assert_eq!(report.umbilics.len(), 4);
    for key in ["\"surface\"", "\"spacelike_min\"", "\"isothermal_residual\"", "\"cr_residual\"", "\"index_sum\"", "\"euler_char\"", "\"beta_mean\""] {
        assert!(text.contains(key), "{key}");
    }
}

#[test]
fn empty_umbilic_list_serializes_as_array() {
    let out = spacelike(&["analyze", "lorentzian-catenoid", "--grid", "33"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"umbilics\": []"));
}

#[test]
fn numbers_carry_at_least_twelve_digits() {
    let out = spacelike(&["capillary", "hyperbolic-cap", "--grid", "33"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().find(|l| l.contains("\"beta_mean\"")).unwrap();
    let mantissa = line.split(':').nth(1).unwrap().trim().trim_end_matches(',').split('e').next().unwrap();
    assert!(mantissa.chars().filter(char::is_ascii_digit).count() >= 12, "{line}");
}

#[test]
fn verification_failures_exit_two() {
    let out = spacelike(&["capillary", "tilted-cut-negative", "--grid", "33"]);
    assert_eq!(out.status.code(), Some(2));
    let out = spacelike(&["analyze", "tilted-cut-negative", "--grid", "33"]);
    assert_eq!(out.status.code(), Some(2));
    // an impossible expectation through a spec override
    let spec = scratch("bad-beta.spec");
    std::fs::write(&spec, "name=hyperbolic-cap\nsupports.circle=horizontal:1.2\n").unwrap();
    let out = spacelike(&["capillary", spec.to_str().unwrap(), "--grid", "33"]);
    assert_eq!(out.status.code(), Some(2), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn usage_and_input_errors_exit_one() {
    assert_eq!(spacelike(&["index", "no-such-surface"]).status.code(), Some(1));
    assert_eq!(spacelike(&["index"]).status.code(), Some(1));
    let spec = scratch("broken.spec");
    std::fs::write(&spec, "name=planar-disk\nthis is not a key value line\n").unwrap();
    let out = spacelike(&["analyze", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
    assert_eq!(spacelike(&["--version"]).status.code(), Some(0));
}

#[test]
fn spec_file_overrides_parameters() {
    let spec = scratch("cap.spec");
    std::fs::write(&spec, "# wider cap\nname=hyperbolic-cap\nparams.c=2\nparams.t=1.5\ngrid=33\n").unwrap();
    let out = spacelike(&["analyze", spec.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: AnalysisReport = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report.surface.grid, 33);
    assert_eq!(report.surface.params["c"], 2.0);
    assert!((report.capillary[0].beta_mean - 1.5).abs() < 1e-9);
}

#[test]
fn csv_report_and_out_flag() {
    let path = scratch("cap.csv");
    let out = spacelike(&["capillary", "truncated-catenoid", "--grid", "33", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let csv = std::fs::read_to_string(&path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some(CSV_HEADER));
    assert_eq!(lines.filter(|l| l.starts_with("beta,")).count(), 4 * 128);
}

#[test]
fn timings_are_opt_in() {
    let out = spacelike(&["analyze", "planar-square", "--grid", "17", "--timings"]);
    let report: AnalysisReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(report.timings.is_some_and(|t| !t.is_empty()));
}

#[test]
fn trace_export_counts() {
    let svg = scratch("foliation.svg");
    let csv = scratch("foliation.csv");
    let out = spacelike(&[
        "trace",
        "truncated-catenoid",
        "--family",
        "both",
        "--starts",
        "20",
        "--svg",
        svg.to_str().unwrap(),
        "--csv",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let svg = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(svg.matches("<path").count(), 40);
    assert!(svg.contains("version=\"1.1\""));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let points: u64 = summary["traces"].as_array().unwrap().iter().map(|t| t["points"].as_u64().unwrap()).sum();
    let csv = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(csv.lines().count() as u64, points + 1);
    assert_eq!(csv.lines().next(), Some("trace_id,family,u,v,x1,x2,x3"));
}

#[test]
fn single_seed_trace() {
    let csv = scratch("one.csv");
    let out = spacelike(&["trace", "truncated-catenoid", "--family", "first", "--start", "1.0,1.0", "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let summary: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["traces"].as_array().unwrap().len(), 1);
    assert_eq!(summary["traces"][0]["stop"], "Boundary");
}
