use std::path::Path;
use std::process::{Command, Output};

fn depthcast(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_depthcast")).args(args).output().unwrap()
}

fn simulate_into(dir: &Path, model: &str) {
    let out = depthcast(&["simulate", "--model", model, "--periods", "121", "--seed", "3", "--out", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn forecast_writes_band_chart_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    simulate_into(dir.path(), "Y3");
    let series = dir.path().join("series.csv");
    let truth = dir.path().join("truth.csv");
    let out = dir.path().join("fc");
    let result = depthcast(&[
        "forecast",
        "--series",
        series.to_str().unwrap(),
        "--truth",
        truth.to_str().unwrap(),
        "--window",
        "30",
        "--k",
        "3",
        "--audit",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let band = std::fs::read_to_string(out.join("band.csv")).unwrap();
    let mut lines = band.lines();
    assert_eq!(lines.next(), Some("t,lower,upper,point"));
    assert_eq!(lines.count(), 25);
    for name in ["chart.csv", "forecast.json", "audit.txt"] {
        assert!(out.join(name).is_file(), "{name} missing");
    }
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("forecast.json")).unwrap()).unwrap();
    assert_eq!(json["k"], 3);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    simulate_into(dir.path(), "Y1");
    let config = dir.path().join("run.json");
    std::fs::write(&config, r#"{"window": 30, "k_max": 12, "alpha": 0.2}"#).unwrap();
    let out = dir.path().join("tune");
    let result = depthcast(&[
        "tune",
        "--config",
        config.to_str().unwrap(),
        "--k-max",
        "8",
        "--series",
        dir.path().join("series.csv").to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(result.status.success(), "{}", String::from_utf8_lossy(&result.stderr));
    let chart = std::fs::read_to_string(out.join("chart.csv")).unwrap();
    // rows k = 2..=8
    assert_eq!(chart.lines().count(), 1 + 7);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    simulate_into(dir.path(), "Y2");
    let series = dir.path().join("series.csv");

    assert_eq!(depthcast(&["--help"]).status.code(), Some(0));
    assert_eq!(depthcast(&["simulate", "--model", "Y9"]).status.code(), Some(1));
    assert_eq!(depthcast(&["frobnicate"]).status.code(), Some(1));

    // a level shift moves the partial period out of the library's range
    let text = std::fs::read_to_string(&series).unwrap();
    let mut rows: Vec<String> = text.lines().map(str::to_string).collect();
    let n = rows.len();
    for row in &mut rows[n - 25..] {
        let (t, v) = row.split_once(',').unwrap();
        *row = format!("{t},{}", v.parse::<f64>().unwrap() + 100.0);
    }
    let shifted = dir.path().join("shifted.csv");
    std::fs::write(&shifted, rows.join("\n") + "\n").unwrap();
    let out = dir.path().join("x");
    let result = depthcast(&["forecast", "--series", shifted.to_str().unwrap(), "--window", "30", "--out", out.to_str().unwrap()]);
    assert_eq!(result.status.code(), Some(2));

    // no k reaches a 0.99 floor
    let result = depthcast(&[
        "forecast",
        "--series",
        series.to_str().unwrap(),
        "--window",
        "30",
        "--k-max",
        "4",
        "--min-mean",
        "0.99",
        "--min-floor",
        "0.99",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(result.status.code(), Some(3));
}

#[test]
fn mbd_lists_one_depth_per_curve() {
    let dir = tempfile::tempdir().unwrap();
    simulate_into(dir.path(), "Y1");
    let out = depthcast(&["mbd", "--series", dir.path().join("series.csv").to_str().unwrap()]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,depth"));
    let depths: Vec<f64> = lines.map(|l| l.split_once(',').unwrap().1.parse().unwrap()).collect();
    assert_eq!(depths.len(), 121);
    assert!(depths.iter().all(|d| (0.0..=1.0).contains(d)));
}
