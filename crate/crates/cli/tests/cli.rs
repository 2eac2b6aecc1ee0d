use std::process::{Command, Output};

use triangle_ifs::plane_model::{self, DiskModel};
use triangle_ifs::render;
use triangle_ifs::EdgeLengths;

fn trifs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trifs"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn shape_json() {
    let out = trifs(&["shape", "--edges", "1,1,1"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["edges"][0].as_f64(), Some(1.0));
    assert!(v["area"].as_f64().unwrap() > 0.0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1.0000000000000000e0"));
}

#[test]
fn euclidean_shape_has_null_edges() {
    let out = trifs(&[
        "shape",
        "--angles",
        "1.5707963267948966,0.7853981633974483,0.7853981633974483",
    ]);
    assert!(out.status.success());
    assert!(stdout_json(&out)["edges"].is_null());
}

#[test]
fn limit_of_witness() {
    let out = trifs(&["limit", "--edges", "4,4,7", "--seq", "|M"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(v["residual"].as_f64().unwrap() < 1e-12);
    let sum: f64 = (0..3).map(|i| v["angles"][i].as_f64().unwrap()).sum();
    assert!((sum - std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn orbit_csv_columns() {
    let out = trifs(&["orbit", "--edges", "1,1,1", "--word", "AM"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(
        lines[0],
        "n,letter,A,B,C,a,b,c,S,ln_sin_A,sinh_a2,sinh_b2,sinh_c2"
    );
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("2,M,"));
    assert!(lines.iter().all(|l| l.split(',').count() == 13));
}

#[test]
fn address_exact_and_approx() {
    let exact = stdout_json(&trifs(&["address", "--seq", "|BC", "--exact"]));
    assert_eq!(exact["bary"], serde_json::json!(["0", "2/3", "1/3"]));
    let approx = stdout_json(&trifs(&["address", "--seq", "|BC", "--depth", "20"]));
    assert!(
        (approx["bary"][1].as_f64().unwrap() - 2.0 / 3.0).abs()
            < approx["error_bound"].as_f64().unwrap()
    );
}

#[test]
fn equiv_reports_witness() {
    let v = stdout_json(&trifs(&["equiv", "--s", "CABM|A", "--t", "CMCM|A"]));
    assert_eq!(v["equivalent"], true);
    assert_eq!(v["prop31_form"]["n"], 1);
    let v = stdout_json(&trifs(&["equiv", "--s", "|A", "--t", "|B"]));
    assert_eq!(v["equivalent"], false);
    assert!(v["prop31_form"].is_null());
}

#[test]
fn verify_noncontraction_passes() {
    let out = trifs(&["verify", "--suite", "noncontraction"]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["suite"], "noncontraction");
    assert_eq!(v["pass"], true);
}

#[test]
fn verify_all_emits_every_suite() {
    let out = trifs(&["verify", "--suite", "all", "--seed", "3", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), triangle_ifs::verify::SUITES.len());
}

#[test]
fn sweep_grid() {
    let out = trifs(&["sweep", "--seq", "|M", "--grid", "5"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows[0], "A0,B0,C0,Alim,Blim,Clim");
    // i, j, k >= 1 with i + j + k <= 5
    assert_eq!(rows.len() - 1, 10);
}

#[test]
fn exit_codes() {
    assert_eq!(trifs(&["shape", "--edges", "1,2,5"]).status.code(), Some(1));
    assert_eq!(
        trifs(&["shape", "--angles", "2,2,2"]).status.code(),
        Some(1)
    );
    assert_eq!(
        trifs(&["limit", "--edges", "1,1,1", "--seq", "AB"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(trifs(&["shape", "--frobnicate"]).status.code(), Some(64));
    assert_eq!(trifs(&["teleport"]).status.code(), Some(64));
    assert_eq!(trifs(&["shape", "--edges", "1,1"]).status.code(), Some(64));
    assert_eq!(trifs(&["--help"]).status.code(), Some(0));
}

#[test]
fn render_depth_limit() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("x.svg");
    let out = trifs(&[
        "render",
        "--edges",
        "1,1,1",
        "--depth",
        "9",
        "-o",
        f.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!f.exists());
}

#[test]
fn render_depth_one_klein_matches_midpoints() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("k.svg");
    let out = trifs(&[
        "render",
        "--edges",
        "1.2,0.8,1.5",
        "--depth",
        "1",
        "--model",
        "klein",
        "-o",
        f.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let svg = std::fs::read_to_string(&f).unwrap();
    let cells: Vec<_> = render::parse_polygons(&svg)
        .into_iter()
        .filter(|p| p.0 == "cell")
        .collect();
    assert_eq!(cells.len(), 4);
    let m = cells.iter().find(|c| c.1 == "M").unwrap();
    let t = plane_model::place_centered(&EdgeLengths([1.2, 0.8, 1.5])).unwrap();
    for (p, mid) in m.2.iter().zip(t.midpoints()) {
        let got = render::canvas_to_disk(*p, 800.0);
        let want = plane_model::to_disk(&mid, DiskModel::Klein);
        assert!((got.0 - want.0).abs() < 1e-9 && (got.1 - want.1).abs() < 1e-9);
    }
}
