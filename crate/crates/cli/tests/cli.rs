// Copyright 2026 The mzi-thermo Authors
// SPDX-License-Identifier: Apache-2.0

use std::path::Path;
use std::process::{Command, Output};

fn run(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mzi-thermo"))
        .args(args)
        .arg("--out-dir")
        .arg(dir)
        .env_remove("SOURCE_DATE_EPOCH")
        .output()
        .unwrap()
}

fn read(dir: &Path, file: &str) -> String {
    std::fs::read_to_string(dir.join(file)).unwrap()
}

#[test]
fn writes_csv_json_and_svg() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["qfi-curve", "--sweep", "T", "--T", "0.2:1:5", "--M", "2"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = read(dir.path(), "qfi-curve.csv");
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# mzi-thermo "));
    assert_eq!(lines.next().unwrap(), "# command: qfi-curve");
    assert!(lines.next().unwrap().starts_with("# spec: {"));
    assert_eq!(lines.next().unwrap(), "T,M,N,n_eff,qfi");
    assert_eq!(lines.count(), 5);

    let json: serde_json::Value = serde_json::from_str(&read(dir.path(), "qfi-curve.json")).unwrap();
    assert_eq!(json["spec"]["command"], "qfi-curve");
    assert_eq!(json["provenance"]["toolkit"], "mzi-thermo");
    assert!(json["provenance"]["timestamp"].is_null());
    assert_eq!(json["results"].as_array().unwrap().len(), 5);

    assert!(read(dir.path(), "qfi-curve.svg").contains("<svg"));
}

#[test]
fn timestamp_follows_source_date_epoch() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_mzi-thermo"))
        .args(["naive-compare", "--N", "1..3", "--no-svg", "--out-dir"])
        .arg(dir.path())
        .env("SOURCE_DATE_EPOCH", "0")
        .status()
        .unwrap();
    assert!(status.success());
    let json: serde_json::Value = serde_json::from_str(&read(dir.path(), "naive-compare.json")).unwrap();
    assert_eq!(json["provenance"]["timestamp"], "1970-01-01T00:00:00Z");
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.json");
    std::fs::write(
        &config,
        r#"{"command": "optimize-neff", "T": [0.5, 1.0], "M": 3, "name": "from_file"}"#,
    )
    .unwrap();
    let out = run(
        dir.path(),
        &[
            "optimize-neff",
            "--config",
            config.to_str().unwrap(),
            "--M",
            "2",
            "--no-svg",
        ],
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = read(dir.path(), "from_file.csv");
    let rows: Vec<&str> = csv.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.starts_with("2,")));
}

#[test]
fn config_for_another_command_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.json");
    std::fs::write(&config, r#"{"command": "scaling"}"#).unwrap();
    let out = run(dir.path(), &["qfi-curve", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["qfi-curve", "--T", ""][..],
        &["qfi-curve", "--bogus"],
        &["qfi-curve", "--T", "3:1:4"],
        &["experiment", "--neff", "0.5", "--chi", "1"],
    ] {
        let out = run(dir.path(), args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn validation_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["oracle-check", "--M", "20"][..],
        &["qfi-curve", "--sweep", "T", "--T", "0"],
        &["experiment", "--T", "0.005"],
        &["experiment", "--N", "3", "--M", "9"],
    ] {
        let out = run(dir.path(), args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn injected_fault_is_caught_after_writing() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(dir.path(), &["oracle-check", "--points", "30", "--inject-fault"]);
    assert_eq!(out.status.code(), Some(2));
    let json: serde_json::Value = serde_json::from_str(&read(dir.path(), "oracle-check.json")).unwrap();
    assert_eq!(json["results"][0]["pass"], false);
    assert_eq!(json["results"][1]["check"], "binomial-vs-closed-form");
    assert_eq!(json["results"][1]["pass"], false);
}

#[test]
fn example_configs_parse() {
    let configs = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs");
    let mut seen = 0;
    for entry in std::fs::read_dir(configs).unwrap() {
        let path = entry.unwrap().path();
        let p: mzi_thermo::params::Params = serde_json::from_str(&std::fs::read_to_string(&path).unwrap())
            .unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert!(p.command.is_some());
        seen += 1;
    }
    assert!(seen >= 8);
}
