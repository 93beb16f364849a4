use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use polariton_core::dynamics::TimeSeries;
use serde::{Deserialize, Serialize};

use super::{EnsembleResult, PointResult, PointSummary, Provenance, SweepPlan};
use crate::config::digest;
use crate::error::{Result, WireError};
use crate::output::{profile_csv, profile_file, read_profile, read_series, series_csv, write_bytes, write_json};

/// Version of the on-disk layout written by [`persist`].
pub const LAYOUT_VERSION: u32 = 1;
pub const MANIFEST: &str = "manifest.json";

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    layout_version: u32,
    provenance: Provenance,
    plan: SweepPlan,
    points: Vec<PointEntry>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PointEntry {
    directory: String,
    summary: PointSummary,
    profile_times_fs: Vec<f64>,
    /// SHA-256 of every payload file in `directory`.
    checksums: BTreeMap<String, String>,
}

fn point_dir(index: usize) -> String {
    format!("point_{index:03}")
}

/// Writes `result` under `dir`: one subdirectory of CSV files per point and a
/// manifest holding the plan, provenance, scalar summaries and checksums.
pub fn persist(result: &EnsembleResult, dir: &Path) -> Result<()> {
    let mut points = Vec::with_capacity(result.points.len());
    for p in &result.points {
        let sub = point_dir(p.summary.index);
        let mut files: Vec<(String, Vec<u8>)> = vec![
            ("observables.csv".to_owned(), series_csv(&p.mean)),
            ("observables_se.csv".to_owned(), series_csv(&p.se)),
        ];
        for ((t, mean), (_, se)) in p.mean.profiles.iter().zip(&p.se.profiles) {
            files.push((profile_file(*t), profile_csv(mean)));
            files.push((format!("se_{}", profile_file(*t)), profile_csv(se)));
        }
        let mut checksums = BTreeMap::new();
        for (name, bytes) in files {
            write_bytes(&dir.join(&sub).join(&name), &bytes)?;
            checksums.insert(name, digest(&bytes));
        }
        points.push(PointEntry {
            directory: sub,
            summary: p.summary.clone(),
            profile_times_fs: p.mean.profiles.iter().map(|(t, _)| *t).collect(),
            checksums,
        });
    }
    write_json(
        &dir.join(MANIFEST),
        &Manifest {
            layout_version: LAYOUT_VERSION,
            provenance: result.provenance.clone(),
            plan: result.plan.clone(),
            points,
        },
    )
}

/// Reads a result written by [`persist`], verifying version and checksums.
pub fn load(dir: &Path) -> Result<EnsembleResult> {
    let path = dir.join(MANIFEST);
    let text = fs::read(&path).map_err(|e| WireError::io(&path, e))?;
    let format = |message: String| WireError::Format {
        path: path.clone(),
        message,
    };
    let raw: serde_json::Value = serde_json::from_slice(&text).map_err(|e| format(e.to_string()))?;
    let version = raw
        .get("layout_version")
        .and_then(serde_json::Value::as_u64)
        .ok_or_else(|| format("missing layout_version".to_owned()))?;
    if version != u64::from(LAYOUT_VERSION) {
        return Err(WireError::IncompatibleVersion {
            found: u32::try_from(version).unwrap_or(u32::MAX),
            expected: LAYOUT_VERSION,
        });
    }
    let manifest: Manifest = serde_json::from_value(raw).map_err(|e| format(e.to_string()))?;

    let mut points = Vec::with_capacity(manifest.points.len());
    for entry in manifest.points {
        let read = |name: &str| -> Result<(std::path::PathBuf, Vec<u8>)> {
            let file = dir.join(&entry.directory).join(name);
            let bytes = fs::read(&file).map_err(|e| WireError::io(&file, e))?;
            let expected = entry.checksums.get(name).ok_or_else(|| WireError::Format {
                path: path.clone(),
                message: format!("no checksum for {}/{name}", entry.directory),
            })?;
            let found = digest(&bytes);
            if &found != expected {
                return Err(WireError::CorruptPayload {
                    file: format!("{}/{name}", entry.directory),
                    expected: expected.clone(),
                    found,
                });
            }
            Ok((file, bytes))
        };
        let series = |name: &str| -> Result<TimeSeries> {
            let (file, bytes) = read(name)?;
            read_series(&file, &bytes)
        };
        let mut mean = series("observables.csv")?;
        let mut se = series("observables_se.csv")?;
        for &t in &entry.profile_times_fs {
            let (file, bytes) = read(&profile_file(t))?;
            mean.profiles.push((t, read_profile(&file, &bytes)?));
            let (file, bytes) = read(&format!("se_{}", profile_file(t)))?;
            se.profiles.push((t, read_profile(&file, &bytes)?));
        }
        mean.max_norm_error = entry.summary.max_norm_error;
        mean.max_energy_drift = entry.summary.max_energy_drift;
        points.push(PointResult {
            summary: entry.summary,
            mean,
            se,
        });
    }
    Ok(EnsembleResult {
        plan: manifest.plan,
        provenance: manifest.provenance,
        points,
    })
}
