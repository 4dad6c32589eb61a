mod common;

use std::fs;

use common::{column, parse_csv, run, stderr, stdout};
use serde_json::Value;

fn json(out: &std::process::Output) -> Value {
    serde_json::from_str(&stdout(out)).unwrap_or_else(|e| panic!("{e}: {}", stdout(out)))
}

fn close(v: f64, target: f64, rel: f64) -> bool {
    (v / target - 1.0).abs() <= rel
}

#[test]
fn figures_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        let out = run(&["figures", "--out", dir.path().to_str().unwrap()]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    for name in ["table1.json", "fig2.csv", "fig3.csv", "fig4.csv"] {
        let x = fs::read(a.path().join(name)).unwrap();
        let y = fs::read(b.path().join(name)).unwrap();
        assert!(!x.is_empty());
        assert_eq!(x, y, "{name} differs");
    }
}

#[test]
fn figures_reproduce_the_parameter_table_and_curves() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["figures", "--out", dir.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));

    let t: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("table1.json")).unwrap()).unwrap();
    assert!(close(t["f_vib_Hz"].as_f64().unwrap(), 23.0, 0.02));
    assert!(close(t["g0_Hz"].as_f64().unwrap(), 213.0, 0.03));
    let q = t["q_opt"].as_f64().unwrap();
    assert!((3.5e10..=4.5e10).contains(&q));

    let (h, rows) = parse_csv(&fs::read_to_string(dir.path().join("fig2.csv")).unwrap());
    assert_eq!(rows.len(), 9 + 3 * 11);
    assert_eq!(h[0], "branch");

    let (h, rows) = parse_csv(&fs::read_to_string(dir.path().join("fig3.csv")).unwrap());
    let (r, k) = (column(&h, "R_m"), column(&h, "kappa_surface_rad_per_s"));
    assert_eq!(rows.len(), 41);
    assert_eq!(rows[0][r], 0.05e-3);
    assert_eq!(rows[40][r], 5e-3);
    assert!(rows.windows(2).all(|w| w[1][r] > w[0][r]));
    let rising = rows.windows(2).all(|w| w[1][k] > w[0][k]);
    let falling = rows.windows(2).all(|w| w[1][k] < w[0][k]);
    assert!(rising || falling, "kappa_surface not monotone in R");

    let text = fs::read_to_string(dir.path().join("fig4.csv")).unwrap();
    let last_he4 = text.lines().rfind(|l| l.starts_with("He4,")).unwrap();
    let cells: Vec<&str> = last_he4.split(',').collect();
    assert_eq!(cells[1], "60.0");
    let temp: f64 = cells[2].parse().unwrap();
    assert!(close(temp, 0.29, 0.15), "{temp}");
    assert!(text.lines().any(|l| l.starts_with("He3,")));
}

#[test]
fn csv_values_round_trip_exactly() {
    let out = run(&["spectrum", "--radius", "0.0013"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for line in text.lines().skip(1) {
        for cell in line.split(',').skip(3) {
            let v: f64 = cell.parse().unwrap();
            assert_eq!(format!("{v:?}"), cell);
        }
    }
}

#[test]
fn spectrum_counts_rows() {
    let out = run(&["spectrum", "--l-max", "10", "--n-max", "3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).lines().count(), 1 + 42);
    let out = run(&["spectrum", "--format", "json", "--l-max", "4", "--n-max", "1"]);
    assert_eq!(json(&out).as_array().unwrap().len(), 3 + 5);
}

#[test]
fn qnd_reports_the_helium3_and_helium4_sensitivities() {
    let out = run(&["qnd", "--isotope", "he3", "--temperature", "0.13", "--omega", &std::f64::consts::TAU.to_string()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let he3 = json(&out);
    assert!(close(he3["sqrt_S_L_hbar_per_sqrt_Hz"].as_f64().unwrap(), 3e7, 0.2));
    assert_eq!(he3["below_spread"]["all"], Value::Bool(true));

    // same angular momentum, other isotope
    let lz = he3["L_z_Js"].as_f64().unwrap().to_string();
    let out = run(&["qnd", "--isotope", "he4", "--temperature", "0.13", "--lz", &lz]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(close(json(&out)["sqrt_S_L_hbar_per_sqrt_Hz"].as_f64().unwrap(), 1.4e8, 0.2));

    let out = run(&["qnd", "--omega", "1", "--format", "csv"]);
    assert!(stdout(&out).starts_with("quantity,value,units\n"));
}

#[test]
fn qfactors_flag_surface_scattering_at_300_mk() {
    let out = run(&["qfactors", "--temperature", "0.3", "--format", "json"]);
    assert!(out.status.success());
    let rows = json(&out);
    let dominant = rows
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["quantity"] == "optical_dominant")
        .unwrap();
    assert_eq!(dominant["value"], "surface");
}

#[test]
fn cool_defaults_follow_the_reference_cooldowns() {
    let out = run(&["cool", "--isotope", "he3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.starts_with("t_s,T_K,N,R_m,Gamma_per_s,Pcool_W,drift_Hz_per_s\n"));
    let at_one = text.lines().find(|l| l.starts_with("1.0,")).unwrap();
    let temp: f64 = at_one.split(',').nth(1).unwrap().parse().unwrap();
    assert!(close(temp, 0.2, 0.15), "{temp}");
}

#[test]
fn rovib_zero_state_and_equilibrium_runs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("zero.csv");
    let out = run(&["rovib", "--t-end", "5", "--samples", "10", "--out", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (h, rows) = parse_csv(&fs::read_to_string(&csv).unwrap());
    assert_eq!(h.len(), 16);
    assert_eq!(rows.len(), 11);
    assert!(rows.iter().all(|r| r[4..].iter().all(|&v| v == 0.0)));

    // spinning about the body axis at the bulge equilibrium
    let p = hedrop::RovibParams::dimensionless();
    let w = 0.2;
    let x0 = hedrop::rovib::equilibrium_bulge(w, &p).unwrap().get(0).re;
    let state = dir.path().join("eq.json");
    let body = format!(r#"{{"euler": [0, 1, 0], "euler_rates": [0, 0, {w}], "x_rot": [[0,0],[0,0],[{x0},0],[0,0],[0,0]]}}"#);
    fs::write(&state, body).unwrap();
    let csv = dir.path().join("eq.csv");
    let out = run(&["rovib", "--state", state.to_str().unwrap(), "--t-end", "20", "--out", csv.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (h, rows) = parse_csv(&fs::read_to_string(&csv).unwrap());
    let re_x0 = column(&h, "ReX0");
    assert!(rows.iter().all(|r| (r[re_x0] - x0).abs() < 1e-10));
    let summary = json(&out);
    assert!(summary["max_energy_drift"].as_f64().unwrap() < 1e-8);
}

#[test]
fn rovib_linearize_reports_bryan_slopes() {
    let out = run(&["rovib", "--linearize", "--omega", "0.001", "--t-end", "1"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let b = &json(&out)["bryan"];
    let rot: Vec<f64> = b["slopes"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    let lab: Vec<f64> = b["lab_slopes"].as_array().unwrap().iter().map(|v| v.as_f64().unwrap()).collect();
    for (i, m) in (-2..=2).enumerate() {
        let half = m as f64 / 2.0;
        assert!((rot[i] + half).abs() <= 0.01 * half.abs().max(0.5));
        assert!((lab[i] - half).abs() <= 0.01 * half.abs().max(0.5));
    }
}

#[test]
fn exit_codes_distinguish_failure_kinds() {
    let dir = tempfile::tempdir().unwrap();
    let code = |args: &[&str]| run(args).status.code();

    // usage
    assert_eq!(code(&["qnd", "--omega", "1", "--lz", "1"]), Some(64));
    assert_eq!(code(&["qnd"]), Some(64));
    assert_eq!(code(&["qnd", "--omega", "1", "--power", "0"]), Some(64));
    assert_eq!(code(&["spectrum", "--bogus"]), Some(64));
    let conf = dir.path().join("bad.conf");
    fs::write(&conf, "radius = 1e-3\n").unwrap();
    let out = run(&["spectrum", "--config", conf.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(64));
    assert!(stderr(&out).contains("unknown configuration key 'radius'"));

    // data
    let missing = dir.path().join("nowhere");
    let out = run(&["props", "--data-dir", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("he4_vapor_pressure.csv"));
    let out = common::hedrop()
        .args(["figures", "--out", dir.path().join("f").to_str().unwrap()])
        .env("HEDROP_DATA_DIR", &missing)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // validation
    let state = dir.path().join("s.json");
    fs::write(&state, r#"{"x_rot": [[0.01, 0], [0, 0], [0, 0], [0, 0], [0, 0]]}"#).unwrap();
    let out = run(&["rovib", "--state", state.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(65));
    assert!(stderr(&out).contains("m = 2"));

    assert_eq!(code(&["--help"]), Some(0));
    assert_eq!(code(&["props"]), Some(0));
}

#[test]
fn config_file_and_flags_combine() {
    let dir = tempfile::tempdir().unwrap();
    let conf = dir.path().join("run.conf");
    fs::write(&conf, "# He3 drop\nisotope = he3\nradius_m = 2e-3\nformat = json\n").unwrap();
    let out = run(&["couplings", "--config", conf.to_str().unwrap(), "--radius", "1e-3"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let rows = json(&out);
    let f = rows
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["quantity"] == "f_vib")
        .unwrap()["value"]
        .as_f64()
        .unwrap();
    // He3 at 1 mm: the flag wins over the file
    assert!(close(f, 122.52487779635752 / std::f64::consts::TAU, 1e-12));
}
