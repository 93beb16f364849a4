//! JSON run configuration.
//!
//! Every quantity carries its unit in the key name. Unknown keys are rejected
//! and every error names the offending key path.

use std::path::{Path, PathBuf};

use polariton_core::dynamics::WavepacketSpec;
use polariton_core::model::{CavityGeometry, MatterSpec, WireModel, GENERATOR_ID};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::ensemble::Axis;
use crate::error::{Result, WireError};
use crate::pipeline::Sampling;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    #[serde(rename = "Lx_nm")]
    pub lx_nm: f64,
    #[serde(rename = "Ly_nm")]
    pub ly_nm: f64,
    #[serde(rename = "Lz_nm")]
    pub lz_nm: f64,
    pub epsilon: f64,
    pub m_max: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatterConfig {
    #[serde(rename = "N_M")]
    pub n_m: usize,
    pub a_nm: f64,
    pub sigma_a_nm: f64,
    #[serde(rename = "E_M_eV")]
    pub e_m_ev: f64,
    #[serde(rename = "sigma_M_eV")]
    pub sigma_m_ev: f64,
    #[serde(rename = "Omega_R_eV")]
    pub omega_r_ev: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WavepacketConfig {
    pub sigma_x_nm: f64,
    pub qbar0_invnm: f64,
    /// Packet centre; the middle of the wire when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0_nm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunSection {
    pub t_max_fs: f64,
    pub dt_fs: f64,
    /// Upper end of the ballistic fit window; the window starts at t = 0.
    pub fit_window_fs: f64,
    pub bin_width_nm: f64,
    pub n_edge: usize,
    /// Times of the density-profile snapshots. Defaults to the first and last sample.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile_times_fs: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub directory: PathBuf,
    pub formats: Vec<Format>,
}

/// Parameter axis of the `sweep` and `signatures` commands.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: Axis,
    pub values: Vec<f64>,
    #[serde(default = "default_realizations")]
    pub n_realizations: usize,
}

fn default_realizations() -> usize {
    100
}

/// Geometry, matter and wave packet: everything that fixes one system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub geometry: GeometryConfig,
    pub matter: MatterConfig,
    pub wavepacket: WavepacketConfig,
}

impl ModelConfig {
    pub fn wire(&self) -> WireModel {
        let g = &self.geometry;
        let m = &self.matter;
        WireModel {
            geometry: CavityGeometry {
                lx: g.lx_nm,
                ly: g.ly_nm,
                lz: g.lz_nm,
                epsilon: g.epsilon,
                m_max: g.m_max,
            },
            matter: MatterSpec {
                n_sites: m.n_m,
                spacing: m.a_nm,
                spacing_sd: m.sigma_a_nm,
                energy: m.e_m_ev,
                energy_sd: m.sigma_m_ev,
                rabi: m.omega_r_ev,
            },
        }
    }

    pub fn wavepacket_spec(&self) -> WavepacketSpec {
        let w = &self.wavepacket;
        let mut spec = WavepacketSpec::centred(self.geometry.lx_nm, w.sigma_x_nm, w.qbar0_invnm);
        if let Some(x0) = w.x0_nm {
            spec.x0 = x0;
        }
        spec
    }

    /// Checks the model and the packet, reporting failures by key path.
    pub fn validate(&self) -> Result<()> {
        self.wire().validate().map_err(located)?;
        self.wavepacket_spec().validate().map_err(located)
    }
}

/// Complete configuration of one `polwire` invocation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub geometry: GeometryConfig,
    pub matter: MatterConfig,
    pub seed: u64,
    pub generator_id: String,
    pub wavepacket: WavepacketConfig,
    pub run: RunSection,
    pub output: OutputConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepConfig>,
}

impl RunConfig {
    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            WireError::config("<file>", format!("cannot read {}: {e}", path.display()))
        })?;
        Self::from_json(&text)
    }

    /// Parses and validates a configuration document.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let cfg: RunConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            WireError::config(path, e.into_inner().to_string())
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.generator_id != GENERATOR_ID {
            return Err(WireError::config(
                "generator_id",
                format!("unknown generator `{}`; this build provides `{GENERATOR_ID}`", self.generator_id),
            ));
        }
        self.model().validate()?;
        let r = &self.run;
        Sampling::uniform(r.t_max_fs, r.dt_fs).map_err(located)?;
        if !(r.fit_window_fs.is_finite() && r.fit_window_fs > 0.0) {
            return Err(WireError::config(
                "run.fit_window_fs",
                format!("must be positive, got {}", r.fit_window_fs),
            ));
        }
        if !(r.bin_width_nm.is_finite() && r.bin_width_nm > 0.0) {
            return Err(WireError::config(
                "run.bin_width_nm",
                format!("must be positive, got {}", r.bin_width_nm),
            ));
        }
        if 2 * r.n_edge > self.matter.n_m {
            return Err(WireError::config(
                "run.n_edge",
                format!("{} edge sites at each end exceed N_M = {}", r.n_edge, self.matter.n_m),
            ));
        }
        if self.output.formats.is_empty() {
            return Err(WireError::config("output.formats", "at least one of \"csv\", \"json\""));
        }
        if let Some(s) = &self.sweep {
            if s.values.is_empty() || s.values.iter().any(|v| !v.is_finite()) {
                return Err(WireError::config("sweep.values", "must be a nonempty list of finite numbers"));
            }
            if s.n_realizations == 0 {
                return Err(WireError::config("sweep.n_realizations", "must be at least 1"));
            }
        }
        Ok(())
    }

    pub fn model(&self) -> ModelConfig {
        ModelConfig {
            geometry: self.geometry,
            matter: self.matter,
            wavepacket: self.wavepacket,
        }
    }

    /// Output times and analysis settings of the `run` section.
    pub fn sampling(&self) -> Result<Sampling> {
        let r = &self.run;
        let mut s = Sampling::uniform(r.t_max_fs, r.dt_fs).map_err(located)?;
        s.fit_window_fs = (0.0, r.fit_window_fs);
        s.bin_width_nm = r.bin_width_nm;
        s.n_edge = r.n_edge;
        s.profile_times_fs = match &r.profile_times_fs {
            Some(t) => t.clone(),
            None => vec![0.0, *s.times_fs.last().expect("grid includes t = 0")],
        };
        Ok(s)
    }

    /// SHA-256 of the canonical serialization, hex encoded.
    pub fn hash(&self) -> String {
        digest(&serde_json::to_vec(self).expect("config serializes"))
    }
}

pub(crate) fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Attaches the config section to a parameter error raised by the core crate.
pub(crate) fn located(err: polariton_core::Error) -> WireError {
    let polariton_core::Error::InvalidParameter { name, reason } = &err else {
        return err.into();
    };
    let section = match *name {
        "Lx_nm" | "Ly_nm" | "Lz_nm" | "epsilon" | "m_max" => "geometry",
        "N_M" | "a_nm" | "sigma_a_nm" | "E_M_eV" | "sigma_M_eV" | "Omega_R_eV" => "matter",
        "sigma_x_nm" | "qbar0_invnm" | "x0_nm" => "wavepacket",
        "t_max_fs" | "dt_fs" => "run",
        _ => return err.into(),
    };
    WireError::config(format!("{section}.{name}"), reason.clone())
}
