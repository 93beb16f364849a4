//! JSON record of predicted and fitted diagnostics.

use polariton_core::theory::rabi_frequency_estimate;
use serde::{Deserialize, Serialize};

use crate::ensemble::{uniform_head, PointSummary};
use crate::pipeline::RealizationRun;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Marker {
    Unresolved,
}

/// Polariton gap in eV, or the string `"unresolved"`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GapField {
    Energy(f64),
    Marker(Marker),
}

impl From<Option<f64>> for GapField {
    fn from(gap: Option<f64>) -> Self {
        gap.map_or(GapField::Marker(Marker::Unresolved), GapField::Energy)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoryReport {
    pub v0_pred_nmfs: f64,
    /// Null when the fit window holds too few samples.
    pub v0_fit_nmfs: Option<f64>,
    pub r_squared: Option<f64>,
    pub window_fs: (f64, f64),
    #[serde(rename = "G_exact")]
    pub g_exact: f64,
    #[serde(rename = "G_weak")]
    pub g_weak: f64,
    #[serde(rename = "G_strong")]
    pub g_strong: f64,
    #[serde(rename = "gap_eV")]
    pub gap_ev: GapField,
    pub rabi_period_fs: Option<f64>,
}

impl TheoryReport {
    pub fn from_run(run: &RealizationRun, window_fs: (f64, f64)) -> Self {
        TheoryReport {
            v0_pred_nmfs: run.v0_pred,
            v0_fit_nmfs: run.fit.map(|f| f.v0),
            r_squared: run.fit.map(|f| f.r_squared),
            window_fs,
            g_exact: run.growth.exact,
            g_weak: run.growth.weak,
            g_strong: run.growth.strong,
            gap_ev: run.gap.gap().into(),
            rabi_period_fs: rabi_frequency_estimate(&uniform_head(&run.series))
                .ok()
                .map(|e| e.period),
        }
    }

    /// Ensemble version: means over realizations, fit of the mean RMSD.
    pub fn from_point(p: &PointSummary, window_fs: (f64, f64)) -> Self {
        TheoryReport {
            v0_pred_nmfs: p.v0_pred.mean,
            v0_fit_nmfs: p.v0_fit_mean_series,
            r_squared: p.r_squared,
            window_fs,
            g_exact: p.g_exact.mean,
            g_weak: p.g_weak.mean,
            g_strong: p.g_strong.mean,
            gap_ev: p.gap.value().into(),
            rabi_period_fs: p.rabi_period_fs,
        }
    }
}
