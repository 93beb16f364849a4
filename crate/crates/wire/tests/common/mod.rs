#![allow(dead_code)]

use std::path::Path;

use polariton_wire::config::RunConfig;
use serde_json::{json, Value};

/// A 200-site wire with 81 modes: big enough for every command, fast enough for CI.
pub fn small_config(out: &Path) -> Value {
    json!({
        "geometry": {"Lx_nm": 2000, "Ly_nm": 200, "Lz_nm": 400, "epsilon": 3, "m_max": 40},
        "matter": {"N_M": 200, "a_nm": 10, "sigma_a_nm": 1, "E_M_eV": 2.0,
                   "sigma_M_eV": 0.02, "Omega_R_eV": 0.1},
        "seed": 11,
        "generator_id": "chacha20",
        "wavepacket": {"sigma_x_nm": 60, "qbar0_invnm": 0},
        "run": {"t_max_fs": 200, "dt_fs": 5, "fit_window_fs": 200, "bin_width_nm": 50, "n_edge": 20},
        "output": {"directory": out, "formats": ["csv"]}
    })
}

pub fn parse(v: &Value) -> RunConfig {
    RunConfig::from_json(&v.to_string()).unwrap()
}
