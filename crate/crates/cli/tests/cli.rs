use std::path::Path;
use std::process::{Command, Output};

use ivpp_core::biquad::GammaEntry;
use ivpp_core::poly::MultiPoly;
use serde_json::Value;

fn ivpp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ivpp")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn data_rows(text: &str) -> Vec<&str> {
    text.lines().filter(|l| !l.starts_with('#')).skip(1).collect()
}

#[test]
fn periodic_points_period_four() {
    let out = ivpp(&["periodic-points", "--h", "2", "--hp", "3", "--period", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("# ivpp periodic-points\n"));
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r.starts_with("4,")));
}

#[test]
fn periodic_points_json() {
    let out = ivpp(&["periodic-points", "--h", "0.6+0.1i", "--hp", "2.1", "-n", "3", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["points"].as_array().unwrap().len(), 6);
    assert_eq!(v["config"]["h"], "0.6+0.1i");
}

#[test]
fn julia_scan_at_the_integrable_limit() {
    let out = ivpp(&["julia-scan", "--h", "0.6", "--epsilon", "0", "--depth", "8", "--samples", "300"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 1);
    for r in rows {
        let max_dist: f64 = r.split(',').nth(3).unwrap().parse().unwrap();
        assert_eq!(max_dist, 0.0);
    }
}

#[test]
fn verify_variety_lv3_period_three() {
    let out = ivpp(&["verify-variety", "--map", "lv3", "--period", "3", "--samples", "100"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["passes"], 100);
    for key in ["condition", "period", "samples", "resamples", "max_return_residual", "negative_control_min_distance"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn verify_variety_mobius() {
    let out = ivpp(&["verify-variety", "--map", "2d-bc", "-n", "4", "--b", "0.3-0.2i", "--k", "2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let row = data_rows(&text)[0].to_string();
    assert_eq!(row.split(',').nth(3), Some("100"));
    let bad = ivpp(&["verify-variety", "--map", "2d-bc", "-n", "4", "--c", "0.1"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn gamma_series_period_three() {
    let out = ivpp(&["gamma-series", "--max-period", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let entries: Vec<GammaEntry> = serde_json::from_value(v["generic"].clone()).unwrap();
    assert_eq!(entries.len(), 1);
    assert_eq!(entries[0].period, 3);
    let want = MultiPoly::parse("a*f - b*e - 3*c^2 + c*d", entries[0].gamma.symbols()).unwrap();
    assert!(entries[0].gamma.equal_up_to_constant(&want));
}

#[test]
fn gamma_series_lv() {
    let out = ivpp(&["gamma-series", "--max-period", "4", "--lv"]);
    assert_eq!(out.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let lv: Vec<GammaEntry> = serde_json::from_value(v["lv"].clone()).unwrap();
    let want = MultiPoly::parse("r^2 + s^2 - r*s + r + s + 1", &["r", "s"]).unwrap();
    assert!(lv[0].gamma.equal_up_to_constant(&want));
    assert_eq!(lv[1].period, 4);
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["gamma-series", "--max-period", "2"][..],
        &["gamma-series", "--max-period", "9"],
        &["gamma-series", "--format", "csv"],
        &["periodic-points", "--h", "2", "--period", "3"],
        &["periodic-points", "--h", "2", "--hp", "3", "--period", "3", "--samples", "5"],
        &["periodic-points", "--h", "two", "--hp", "3", "--period", "3"],
        &["transition-scan", "--h", "0.7", "-n", "4", "--delta", "1e-3,1e-2"],
        &["orbit", "--map", "lv3", "--x0", "0.1,0.2"],
        &["orbit", "--map", "lv3", "--b", "0.1"],
        &["verify-variety", "--map", "qrt", "-n", "3"],
        &["no-such-command"],
    ] {
        let out = ivpp(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn numeric_failure_exits_two() {
    // 1 - w + wu vanishes at the start
    let out = ivpp(&["orbit", "--map", "lv3", "--x0", "0,0.5,1", "--steps", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("pole"));
}

#[test]
fn help_exits_zero() {
    assert_eq!(ivpp(&["--help"]).status.code(), Some(0));
    assert_eq!(ivpp(&["orbit", "--help"]).status.code(), Some(0));
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn config_file_and_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "run.toml", "command = \"periodic-points\"\nh = \"0.6+0.1i\"\nhp = 2.1\nperiod = 3\n");
    let out = ivpp(&["--config", &cfg, "periodic-points"]);
    assert_eq!(data_rows(&stdout(&out)).len(), 6);
    let out = ivpp(&["periodic-points", "--config", &cfg, "--period", "4"]);
    let text = stdout(&out);
    assert!(text.contains("# period = 4\n"));
    assert_eq!(data_rows(&text).len(), 12);

    let other = ivpp(&["--config", &cfg, "julia-scan"]);
    assert_eq!(other.status.code(), Some(1));
    let unknown = write(dir.path(), "bad.toml", "h = 2\ncolour = \"red\"\n");
    assert_eq!(ivpp(&["--config", &unknown, "periodic-points"]).status.code(), Some(1));
}

#[test]
fn outputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let runs: [&[&str]; 4] = [
        &["julia-scan", "--h", "0.6", "--epsilon", "1e-2,1e-3", "--depth", "10", "--samples", "500", "--seed", "3"],
        &["verify-variety", "--map", "lv3", "-n", "4", "--samples", "50", "--seed", "9"],
        &["orbit", "--map", "painleve5", "--steps", "50", "--seed", "2"],
        &["transition-scan", "--h", "0.7", "-n", "3", "--delta", "1e-2,1e-3,0"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let files: Vec<Vec<u8>> = ["a", "b"]
            .iter()
            .map(|tag| {
                let path = dir.path().join(format!("{i}{tag}.out"));
                let mut full: Vec<&str> = args.to_vec();
                let p = path.to_str().unwrap().to_string();
                full.extend(["--output", &p]);
                let threads = if *tag == "a" { "1" } else { "4" };
                full.extend(["--threads", threads]);
                let out = ivpp(&full);
                assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
                std::fs::read(&path).unwrap()
            })
            .collect();
        assert!(!files[0].is_empty());
        assert_eq!(files[0], files[1], "{args:?}");
    }
}

#[test]
fn orbit_conserves_invariants() {
    let out = ivpp(&["orbit", "--map", "lv3", "--steps", "1000", "--seed", "5"]);
    let text = stdout(&out);
    let last = data_rows(&text).last().unwrap().to_string();
    let drift: f64 = last.rsplit(',').next().unwrap().parse().unwrap();
    assert!(drift < 1e-6, "{drift}");
    let ext = ivpp(&["orbit", "--map", "lv3", "--steps", "200", "--seed", "5", "--bits", "128"]);
    let text = stdout(&ext);
    let last = data_rows(&text).last().unwrap().to_string();
    let drift: f64 = last.rsplit(',').next().unwrap().parse().unwrap();
    assert!(drift < 1e-30, "{drift}");
}
