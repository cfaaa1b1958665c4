use std::path::PathBuf;
use std::process::{Command, Output};

use kllab::cli::{GroupInfo, MuTable, PolyTable, RouquierReport};
use kllab::verify::SuiteReport;
use serde::de::DeserializeOwned;
use serde::Serialize;

fn kllab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kllab"))
        .args(args)
        .env_remove("KLLAB_MAX_ELEMENTS")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = kllab(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn golden(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "golden", name].iter().collect();
    std::fs::read_to_string(path).unwrap()
}

fn round_trip<T: Serialize + DeserializeOwned>(json: &str) {
    let value: T = serde_json::from_str(json).unwrap();
    let mut again = serde_json::to_string_pretty(&value).unwrap();
    again.push('\n');
    assert_eq!(again, json);
}

#[test]
fn info_a3() {
    let out = stdout(&["info", "--group", "A3"]);
    assert_eq!(out.lines().next(), Some("order 24, longest length 6"));
    assert_eq!(out, golden("info_a3.txt"));
}

#[test]
fn invkl_a2_csv_has_one_row_per_comparable_pair() {
    let out = stdout(&["invkl", "--group", "A2", "--format", "csv"]);
    assert_eq!(out, golden("invkl_a2.csv"));
    // 1 + 2·2 + 2·4 + 6 pairs y ≤ x over the lengths 0..3.
    assert_eq!(out.lines().count() - 1, 19);
    assert!(out.contains("e,\"1,2,1\",0,3,1*v^3"));
}

#[test]
fn golden_tables() {
    assert_eq!(
        stdout(&["kl", "--group", "B2", "--format", "json"]),
        golden("kl_b2.json")
    );
    assert_eq!(
        stdout(&[
            "parabolic",
            "--group",
            "A2",
            "--parabolic",
            "1",
            "--flavor",
            "spherical",
            "--inverse",
            "--format",
            "csv"
        ]),
        golden("parabolic_a2_1_spherical_inverse.csv")
    );
    assert_eq!(
        stdout(&["rouquier", "--group", "A2", "--format", "json"]),
        golden("rouquier_a2.json")
    );
}

#[test]
fn spherical_scan_reports_expected_violations() {
    let out = kllab(&["scan", "--name", "spherical", "--group", "A2", "--parabolic", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text, golden("scan_spherical_a2_1.txt"));
    assert!(text.contains("(EXPECTED)"));
    assert!(text.contains("z=e y=2 x=2,1"));

    let strict = kllab(&[
        "scan",
        "--name",
        "spherical",
        "--group",
        "A2",
        "--parabolic",
        "1",
        "--expect-violations",
        "false",
    ]);
    assert_eq!(strict.status.code(), Some(1));
}

#[test]
fn every_json_output_round_trips() {
    round_trip::<GroupInfo>(&stdout(&["info", "--group", "B3", "--format", "json"]));
    round_trip::<GroupInfo>(&stdout(&[
        "info", "--group", "I2(inf)", "--cap", "6", "--format", "json",
    ]));
    round_trip::<PolyTable>(&stdout(&["kl", "--group", "A3", "--format", "json"]));
    round_trip::<MuTable>(&stdout(&["kl", "--group", "A3", "--mu", "--format", "json"]));
    round_trip::<PolyTable>(&stdout(&["invkl", "--group", "G2", "--format", "json"]));
    round_trip::<PolyTable>(&stdout(&[
        "parabolic",
        "--group",
        "B3",
        "--parabolic",
        "2",
        "--format",
        "json",
    ]));
    round_trip::<RouquierReport>(&stdout(&["rouquier", "--group", "B2", "--format", "json"]));
    round_trip::<SuiteReport>(&stdout(&[
        "scan", "--name", "inverse", "--group", "A3", "--format", "json",
    ]));
    round_trip::<SuiteReport>(&stdout(&[
        "scan",
        "--name",
        "spherical",
        "--group",
        "A3",
        "--parabolic",
        "1,2",
        "--parabolic",
        "2",
        "--format",
        "json",
    ]));
    round_trip::<SuiteReport>(&stdout(&["suite", "--group", "A2", "--format", "json"]));
}

#[test]
fn exit_codes() {
    assert_eq!(kllab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(kllab(&["info"]).status.code(), Some(2));
    assert_eq!(kllab(&["info", "--group", "Z9"]).status.code(), Some(2));
    assert_eq!(
        kllab(&["info", "--group", "A2", "--parabolic", "7"]).status.code(),
        Some(2)
    );
    let needs_cap = kllab(&["info", "--group", "Aff-A2"]);
    assert_eq!(needs_cap.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&needs_cap.stderr).contains("cap"));
    let limited = Command::new(env!("CARGO_BIN_EXE_kllab"))
        .args(["info", "--group", "A4"])
        .env("KLLAB_MAX_ELEMENTS", "50")
        .output()
        .unwrap();
    assert_eq!(limited.status.code(), Some(1));
}

#[test]
fn out_flag_writes_the_same_bytes() {
    let dir = std::env::temp_dir().join(format!("kllab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("invkl.csv");
    let out = kllab(&[
        "invkl",
        "--group",
        "A2",
        "--format",
        "csv",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), golden("invkl_a2.csv"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn output_does_not_depend_on_threads() {
    for format in ["text", "json", "csv"] {
        let one = stdout(&["suite", "--group", "B3", "--format", format, "--threads", "1"]);
        let four = stdout(&["suite", "--group", "B3", "--format", format, "--threads", "4"]);
        let again = stdout(&["suite", "--group", "B3", "--format", format, "--threads", "4"]);
        assert_eq!(one, four);
        assert_eq!(four, again);
    }
}
