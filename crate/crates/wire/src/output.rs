//! CSV and JSON emitters for dispersion tables, time series and profiles.

use std::fs;
use std::io::Write;
use std::path::Path;

use polariton_core::dynamics::{DensityProfile, TimeSeries};
use polariton_core::spectrum::{BrightMode, DispersionTable};
use serde::Serialize;

use crate::error::{Result, WireError};

pub const DISPERSION_HEADER: [&str; 9] = [
    "q_invnm",
    "omega_LP_invfs",
    "omega_UP_invfs",
    "Pi_LP",
    "Pi_UP",
    "vg_LP_nmfs",
    "vg_UP_nmfs",
    "veff_LP_nmfs",
    "veff_UP_nmfs",
];
pub const SERIES_HEADER: [&str; 5] = ["t_fs", "P_M", "RMSD_nm", "chi", "P_boundary"];
pub const PROFILE_HEADER: [&str; 2] = ["bin_center_nm", "probability"];
pub const BRIGHT_HEADER: [&str; 3] = ["energy_eV", "q_peak_invnm", "photon_content"];

fn dispersion_columns(t: &DispersionTable) -> [&Vec<f64>; 9] {
    [
        &t.q, &t.omega_lp, &t.omega_up, &t.pi_lp, &t.pi_up, &t.vg_lp, &t.vg_up, &t.veff_lp,
        &t.veff_up,
    ]
}

fn series_columns(ts: &TimeSeries) -> [&Vec<f64>; 5] {
    [&ts.t, &ts.p_m, &ts.rmsd, &ts.chi, &ts.p_boundary]
}

/// Shortest decimal that parses back to `v`, in exponent form when very large or small.
pub fn number(v: f64) -> String {
    format!("{v:?}")
}

/// Serializes columns as CSV. Values round-trip exactly.
pub fn csv_bytes(header: &[&str], columns: &[&Vec<f64>]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    let rows = columns.first().map_or(0, |c| c.len());
    for i in 0..rows {
        w.write_record(columns.iter().map(|c| number(c[i])))
            .expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(|e| WireError::io(dir, e))?;
    }
    fs::File::create(path)
        .and_then(|mut f| f.write_all(bytes))
        .map_err(|e| WireError::io(path, e))
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut bytes = serde_json::to_vec_pretty(value).expect("value serializes");
    bytes.push(b'\n');
    write_bytes(path, &bytes)
}

pub fn dispersion_csv(t: &DispersionTable) -> Vec<u8> {
    csv_bytes(&DISPERSION_HEADER, &dispersion_columns(t))
}

/// Columns keyed by the CSV header names.
pub fn dispersion_json(t: &DispersionTable) -> serde_json::Value {
    let cols = dispersion_columns(t);
    let map = DISPERSION_HEADER
        .iter()
        .zip(cols)
        .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
        .collect();
    serde_json::Value::Object(map)
}

pub fn series_csv(ts: &TimeSeries) -> Vec<u8> {
    csv_bytes(&SERIES_HEADER, &series_columns(ts))
}

pub fn series_json(ts: &TimeSeries) -> serde_json::Value {
    let map = SERIES_HEADER
        .iter()
        .zip(series_columns(ts))
        .map(|(k, v)| (k.to_string(), serde_json::json!(v)))
        .collect();
    serde_json::Value::Object(map)
}

pub fn profile_csv(p: &DensityProfile) -> Vec<u8> {
    csv_bytes(&PROFILE_HEADER, &[&p.centres, &p.probability])
}

pub fn bright_csv(modes: &[BrightMode]) -> Vec<u8> {
    let e: Vec<f64> = modes.iter().map(|m| m.energy).collect();
    let q: Vec<f64> = modes.iter().map(|m| m.q_peak).collect();
    let c: Vec<f64> = modes.iter().map(|m| m.photon_content).collect();
    csv_bytes(&BRIGHT_HEADER, &[&e, &q, &c])
}

/// File name of the profile snapshot at `t`.
pub fn profile_file(t: f64) -> String {
    format!("profile_{t}fs.csv")
}

/// Reads a CSV with the given header back into columns.
pub fn read_columns(path: &Path, bytes: &[u8], header: &[&str]) -> Result<Vec<Vec<f64>>> {
    let bad = |message: String| WireError::Format {
        path: path.to_owned(),
        message,
    };
    let mut r = csv::Reader::from_reader(bytes);
    let found = r.headers().map_err(|e| bad(e.to_string()))?;
    if found.iter().ne(header.iter().copied()) {
        return Err(bad(format!("header {found:?}, expected {header:?}")));
    }
    let mut cols = vec![Vec::new(); header.len()];
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| bad(e.to_string()))?;
        for (col, field) in cols.iter_mut().zip(rec.iter()) {
            col.push(
                field
                    .parse()
                    .map_err(|_| bad(format!("row {}: `{field}` is not a number", line + 1)))?,
            );
        }
    }
    Ok(cols)
}

pub fn read_series(path: &Path, bytes: &[u8]) -> Result<TimeSeries> {
    let mut c = read_columns(path, bytes, &SERIES_HEADER)?.into_iter();
    let mut next = || c.next().expect("five columns");
    Ok(TimeSeries {
        t: next(),
        p_m: next(),
        rmsd: next(),
        chi: next(),
        p_boundary: next(),
        ..Default::default()
    })
}

pub fn read_profile(path: &Path, bytes: &[u8]) -> Result<DensityProfile> {
    let mut c = read_columns(path, bytes, &PROFILE_HEADER)?.into_iter();
    Ok(DensityProfile {
        centres: c.next().expect("two columns"),
        probability: c.next().expect("two columns"),
    })
}
