mod common;

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use common::small_config;
use serde_json::{json, Value};

fn polwire(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polwire"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, cfg: &Value) -> String {
    let path = dir.join("config.json");
    fs::write(&path, cfg.to_string()).unwrap();
    path.to_str().unwrap().to_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn dispersion_reports_cavity_energy_range() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let cfg = write_config(dir.path(), &{
        let mut c = small_config(&out);
        c["geometry"] = json!({"Lx_nm": 50000, "Ly_nm": 200, "Lz_nm": 400, "epsilon": 3, "m_max": 500});
        c["matter"]["N_M"] = json!(5000);
        c
    });
    let o = polwire(&["dispersion", "--config", &cfg]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("2.00 eV"), "{text}");
    assert!(text.contains("7.43 eV"), "{text}");
    assert!(text.contains("5.43 eV"), "{text}");
    let csv = fs::read_to_string(out.join("dispersion.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "q_invnm,omega_LP_invfs,omega_UP_invfs,Pi_LP,Pi_UP,vg_LP_nmfs,vg_UP_nmfs,veff_LP_nmfs,veff_UP_nmfs"
    );
    assert_eq!(lines.count(), 1001);
}

#[test]
fn uncoupled_branches_collapse_onto_bare_curves() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let mut c = small_config(&out);
    c["matter"]["Omega_R_eV"] = json!(0.0);
    c["output"]["formats"] = json!(["json"]);
    let o = polwire(&["dispersion", "--config", &write_config(dir.path(), &c)]);
    assert_eq!(o.status.code(), Some(0));
    let t: Value = serde_json::from_str(&fs::read_to_string(out.join("dispersion.json")).unwrap()).unwrap();
    let hbar = 0.6582119569;
    let lp = t["omega_LP_invfs"].as_array().unwrap();
    let up = t["omega_UP_invfs"].as_array().unwrap();
    let min_sep = lp
        .iter()
        .zip(up)
        .map(|(l, u)| (u.as_f64().unwrap() - l.as_f64().unwrap()) * hbar)
        .fold(f64::INFINITY, f64::min);
    // The cutoff sits at E_M to within a few meV here, so the closest approach
    // is the bare detuning at q = 0.
    let q0 = ((std::f64::consts::PI / 200.0).powi(2) + (std::f64::consts::PI / 400.0).powi(2)).sqrt();
    let cutoff = 197.3269804 / 3f64.sqrt() * q0;
    assert!((min_sep - (cutoff - 2.0).abs()).abs() < 1e-9, "{min_sep}");
}

#[test]
fn resonant_uncoupled_branches_touch() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let q0 = ((std::f64::consts::PI / 200.0).powi(2) + (std::f64::consts::PI / 400.0).powi(2)).sqrt();
    let cutoff = 197.3269804 / 3f64.sqrt() * q0;
    let mut c = small_config(&out);
    c["matter"]["Omega_R_eV"] = json!(0.0);
    c["matter"]["E_M_eV"] = json!(cutoff);
    c["output"]["formats"] = json!(["json"]);
    assert_eq!(polwire(&["dispersion", "--config", &write_config(dir.path(), &c)]).status.code(), Some(0));
    let t: Value = serde_json::from_str(&fs::read_to_string(out.join("dispersion.json")).unwrap()).unwrap();
    let mid = 40;
    let gap = (t["omega_UP_invfs"][mid].as_f64().unwrap() - t["omega_LP_invfs"][mid].as_f64().unwrap()) * 0.6582119569;
    assert!(gap.abs() < 1e-9, "{gap}");
}

#[test]
fn propagate_at_zero_time_writes_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let mut c = small_config(&out);
    c["run"]["t_max_fs"] = json!(0);
    let o = polwire(&["propagate", "--config", &write_config(dir.path(), &c)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("observables.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().collect();
    assert_eq!(rows[0], "t_fs,P_M,RMSD_nm,chi,P_boundary");
    assert_eq!(rows.len(), 2);
    let fields: Vec<f64> = rows[1].split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(fields[0], 0.0);
    assert_eq!(fields[1], 1.0);
    assert!(fields[3] <= 0.01, "χ(0) = {}", fields[3]);
    let report: Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert!(report["v0_fit_nmfs"].is_null());
    assert!(report["rabi_period_fs"].is_null());
}

#[test]
fn propagate_is_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small_config(&dir.path().join("unused")));
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    for out in [&a, &b] {
        let o = polwire(&["propagate", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0));
    }
    for name in ["observables.csv", "profile_0fs.csv", "profile_200fs.csv", "report.json"] {
        assert_eq!(fs::read(a.join(name)).unwrap(), fs::read(b.join(name)).unwrap(), "{name}");
    }
    let report: Value = serde_json::from_str(&fs::read_to_string(a.join("report.json")).unwrap()).unwrap();
    for key in [
        "v0_pred_nmfs", "v0_fit_nmfs", "r_squared", "window_fs", "G_exact", "G_weak", "G_strong",
        "gap_eV", "rabi_period_fs",
    ] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn seed_flag_changes_the_realization() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), &small_config(&dir.path().join("unused")));
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    polwire(&["propagate", "--config", &cfg, "--out", a.to_str().unwrap()]);
    polwire(&["propagate", "--config", &cfg, "--out", b.to_str().unwrap(), "--seed", "12"]);
    assert_ne!(
        fs::read(a.join("observables.csv")).unwrap(),
        fs::read(b.join("observables.csv")).unwrap()
    );
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");

    let mut c = small_config(&out);
    c["geometry"]["Lx_nm"] = json!(2500);
    let o = polwire(&["propagate", "--config", &write_config(dir.path(), &c)]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("geometry.Lx_nm") && err.contains("set Lx_nm to 2000"), "{err}");

    let mut c = small_config(&out);
    c["matter"]["bogus"] = json!(1);
    let o = polwire(&["propagate", "--config", &write_config(dir.path(), &c)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("matter.bogus"));

    let o = polwire(&["sweep", "--config", &write_config(dir.path(), &small_config(&out))]);
    assert_eq!(o.status.code(), Some(2), "sweep without a sweep section");

    // Packet narrower than one lattice spacing.
    let mut c = small_config(&out);
    c["wavepacket"]["sigma_x_nm"] = json!(1.0);
    let o = polwire(&["propagate", "--config", &write_config(dir.path(), &c)]);
    assert_eq!(o.status.code(), Some(3));

    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let cfg = write_config(dir.path(), &small_config(&out));
    let o = polwire(&["dispersion", "--config", &cfg, "--out", blocker.join("sub").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));

    let o = polwire(&["propagate"]);
    assert_eq!(o.status.code(), Some(2), "--config is required");
}

#[test]
fn sweep_persists_and_summarizes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let mut c = small_config(&out);
    c["sweep"] = json!({"axis": "sigma_M_eV", "values": [0.0, 0.05], "n_realizations": 5});
    let cfg = write_config(dir.path(), &c);
    let o = polwire(&["sweep", "--config", &cfg, "--realizations", "2", "--threads", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let loaded = polariton_wire::ensemble::load(&out).unwrap();
    assert_eq!(loaded.plan.n_realizations, 2);
    assert_eq!(loaded.points.len(), 2);
    assert_eq!(loaded.points[1].summary.seeds.len(), 2);
    let summary = fs::read_to_string(out.join("summary.csv")).unwrap();
    assert!(summary.starts_with("sigma_M_eV,v0_fit_nmfs,"), "{summary}");
    assert_eq!(summary.lines().count(), 3);
    assert!(out.join("point_001/observables.csv").exists());
}

#[test]
fn signatures_reports_gap_and_bright_modes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let mut c = small_config(&out);
    c["run"]["dt_fs"] = json!(1);
    c["sweep"] = json!({"axis": "sigma_M_eV", "values": [0.0], "n_realizations": 1});
    let o = polwire(&["signatures", "--config", &write_config(dir.path(), &c)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let gaps = fs::read_to_string(out.join("gaps.csv")).unwrap();
    let row: Vec<&str> = gaps.lines().nth(1).unwrap().split(',').collect();
    let gap: f64 = row[2].parse().unwrap();
    assert!((gap - 0.1).abs() < 0.005, "{gap}");
    let bright = fs::read_to_string(out.join("bright_modes_000.csv")).unwrap();
    assert!(bright.starts_with("energy_eV,q_peak_invnm,photon_content\n"));
    let report: Value = serde_json::from_str(&fs::read_to_string(out.join("signatures.json")).unwrap()).unwrap();
    assert!(report[0]["report"]["gap_eV"].is_number());
}
