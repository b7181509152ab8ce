//! Smoke tests for the command line interface: exit codes and key output
//! lines for each subcommand.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> PathBuf {
    PathBuf::from(env!("CARGO_BIN_EXE_etcs"))
}

fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures")
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn etcs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

#[test]
fn nu_bar_text_and_json() {
    let instance = fixtures().join("instances/acute_arccos13.json");
    let out = run(&["nu-bar", instance.to_str().unwrap()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("nu_bar: -19"));
    assert!(text.contains("g2_nullbordant: false"));

    let out = run(&["nu-bar", instance.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["nu_bar"], -19);
    assert_eq!(json["schema"], "etcs/1");
}

#[test]
fn nu_bar_missing_file_exits_one() {
    let out = run(&["nu-bar", "/nonexistent/etcs.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn cross_check_pass_and_fail_exit_codes() {
    let instance = fixtures().join("instances/acute_arccos13.json");
    let polygon = fixtures().join("polygons/example_4_5.json");
    let out = run(&[
        "cross-check",
        instance.to_str().unwrap(),
        polygon.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("verdict:            pass"));

    // a mismatched polygon (the empty one) must exit 2
    let dir = std::env::temp_dir().join("etcs-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let empty = dir.join("empty_polygon.json");
    std::fs::write(
        &empty,
        r#"{ "schema": "etcs/1", "cusps": [], "interior_angles": [], "n_sides": 2 }"#,
    )
    .unwrap();
    let out = run(&[
        "cross-check",
        instance.to_str().unwrap(),
        empty.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn enumerate_gluings_counts() {
    let out = run(&[
        "enumerate-gluings",
        "--k-plus",
        "1",
        "--k-minus",
        "1",
        "--bound",
        "3",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("1 class(es)"));
}

#[test]
fn config_check_fixture() {
    let cfg = fixtures().join("configurations/w_6_2.json");
    let out = run(&["config-check", cfg.to_str().unwrap(), "--cos2", "1/3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("condition (i): pass"));
    assert!(text.contains("cos^2 = 1/3: eigenvalue"));

    let out = run(&["config-check", cfg.to_str().unwrap(), "--cos2", "1/2"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn classify_table() {
    let out = run(&["classify", "--b3", "101", "--d", "8"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("smooth structures (gcd(28, d~/4)): 2"));
}

#[test]
fn eta_values() {
    let out = run(&["eta", "--k", "3", "--eps", "-1", "--s-sq", "2"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("F_small: 0.2664138582715"));
}

#[test]
fn defect_relations_and_exit_codes() {
    let out = run(&[
        "defect", "--chi", "12", "--sigma", "4", "--n-plus", "0", "--p-sq", "4", "--d", "2",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("relation xi = 7 nu (mod 12): pass"));

    // van der Blij violation is a validation error: exit 1
    let out = run(&[
        "defect", "--chi", "0", "--sigma", "1", "--n-plus", "0", "--p-sq", "4", "--d", "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn render_torus_writes_svg() {
    let dir = std::env::temp_dir().join("etcs-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    let svg_path = dir.join("square.svg");
    let gluing = fixtures().join("gluings/square_pi4.json");
    let out = run(&[
        "render-torus",
        gluing.to_str().unwrap(),
        "-o",
        svg_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert!(svg.starts_with("<svg"));
    for label in ["du+", "dv+", "du-", "dv-"] {
        assert!(svg.contains(label));
    }
}
