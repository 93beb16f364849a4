//! Disorder ensembles over a one-parameter sweep.
//!
//! Realization seeds are derived from the plan alone, realizations run on a
//! bounded worker pool, and every reduction happens afterwards in
//! realization-index order. The result is therefore a pure function of the
//! plan, whatever the thread count.

mod aggregate;
mod persist;

use polariton_core::model::GENERATOR_ID;
use polariton_core::dynamics::TimeSeries;
use polariton_core::theory::{fit_ballistic_velocity, rabi_frequency_estimate};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use aggregate::{aggregate, Stat};
pub use persist::{load, persist, LAYOUT_VERSION, MANIFEST};

use crate::config::{digest, ModelConfig};
use crate::error::{Result, WireError};
use crate::pipeline::{run_realization, RealizationRun, Sampling};

/// Parameter varied by a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Axis {
    #[serde(rename = "sigma_M_eV")]
    SigmaM,
    #[serde(rename = "Omega_R_eV")]
    OmegaR,
    #[serde(rename = "sigma_x_nm")]
    SigmaX,
    #[serde(rename = "qbar0_invnm")]
    Qbar0,
    /// δ = ħω₀ − E_M, applied by moving E_M.
    #[serde(rename = "detuning_eV")]
    Detuning,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::SigmaM => "sigma_M_eV",
            Axis::OmegaR => "Omega_R_eV",
            Axis::SigmaX => "sigma_x_nm",
            Axis::Qbar0 => "qbar0_invnm",
            Axis::Detuning => "detuning_eV",
        }
    }

    /// `base` with this parameter set to `value`.
    pub fn apply(self, base: &ModelConfig, value: f64) -> ModelConfig {
        let mut m = *base;
        match self {
            Axis::SigmaM => m.matter.sigma_m_ev = value,
            Axis::OmegaR => m.matter.omega_r_ev = value,
            Axis::SigmaX => m.wavepacket.sigma_x_nm = value,
            Axis::Qbar0 => m.wavepacket.qbar0_invnm = value,
            Axis::Detuning => {
                m.matter.e_m_ev = m.wire().geometry.cutoff_energy() - value;
            }
        }
        m
    }
}

/// A one-parameter family of disorder ensembles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepPlan {
    pub base: ModelConfig,
    pub sampling: Sampling,
    pub axis: Axis,
    pub values: Vec<f64>,
    pub n_realizations: usize,
    pub base_seed: u64,
}

impl SweepPlan {
    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(WireError::config("sweep.values", "must not be empty"));
        }
        if self.n_realizations == 0 {
            return Err(WireError::config("sweep.n_realizations", "must be at least 1"));
        }
        if self.values.len() > u32::MAX as usize || self.n_realizations > u32::MAX as usize {
            return Err(WireError::config("sweep", "at most 2³² points and realizations"));
        }
        for &v in &self.values {
            self.axis.apply(&self.base, v).validate()?;
        }
        Ok(())
    }

    pub fn point(&self, index: usize) -> ModelConfig {
        self.axis.apply(&self.base, self.values[index])
    }

    pub fn seed(&self, point: usize, realization: usize) -> u64 {
        mix_seed(self.base_seed, point as u32, realization as u32)
    }

    /// SHA-256 of the canonical serialization, hex encoded.
    pub fn hash(&self) -> String {
        digest(&serde_json::to_vec(self).expect("plan serializes"))
    }
}

/// SplitMix64 output function, a bijection on u64.
pub fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of realization `r` at sweep point `p`:
/// `splitmix64(base ⊕ splitmix64((p << 32) | r))`.
///
/// Both steps are bijections, so distinct (p, r) pairs never share a seed
/// for a given base.
pub fn mix_seed(base: u64, point: u32, realization: u32) -> u64 {
    let key = (u64::from(point) << 32) | u64::from(realization);
    splitmix64(base ^ splitmix64(key))
}

/// Where the numbers of a result came from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub plan_hash: String,
    pub code_version: String,
    pub generator_id: String,
}

/// Ensemble gap: resolved when most realizations resolve both branches.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GapSummary {
    pub resolved: usize,
    pub total: usize,
    /// Over the resolved realizations only.
    pub gap: Option<Stat>,
}

impl GapSummary {
    pub fn value(&self) -> Option<f64> {
        (2 * self.resolved > self.total).then(|| self.gap.map(|s| s.mean)).flatten()
    }
}

/// Scalar diagnostics of one sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointSummary {
    pub index: usize,
    pub value: f64,
    pub seeds: Vec<u64>,
    /// Line fit through the ensemble-mean RMSD.
    pub v0_fit_mean_series: Option<f64>,
    pub r_squared: Option<f64>,
    /// Mean and SE of the per-realization slopes.
    pub v0_fit: Option<Stat>,
    pub v0_pred: Stat,
    pub matter_weight: Stat,
    pub g_exact: Stat,
    pub g_weak: Stat,
    pub g_strong: Stat,
    pub gap: GapSummary,
    /// Rabi period of the mean P_M over the uniform head of the time grid.
    pub rabi_period_fs: Option<f64>,
    /// Largest mean RMSD over the horizon, nm.
    pub max_rmsd: f64,
    pub chi_final: f64,
    /// First time the mean χ reaches 95 % of its final value.
    pub t_chi95_fs: Option<f64>,
    /// Largest boundary probability seen by any realization.
    pub max_boundary: f64,
    pub max_norm_error: f64,
    pub max_energy_drift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PointResult {
    pub summary: PointSummary,
    pub mean: TimeSeries,
    pub se: TimeSeries,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult {
    pub plan: SweepPlan,
    pub provenance: Provenance,
    pub points: Vec<PointResult>,
}

/// Runs every realization of `plan`, on `threads` workers when given.
pub fn run_ensemble(plan: &SweepPlan, threads: Option<usize>) -> Result<EnsembleResult> {
    plan.validate()?;
    let jobs: Vec<(usize, usize)> = (0..plan.values.len())
        .flat_map(|p| (0..plan.n_realizations).map(move |r| (p, r)))
        .collect();
    let work = || -> Vec<Result<RealizationRun>> {
        jobs.par_iter()
            .map(|&(p, r)| {
                let seed = plan.seed(p, r);
                run_realization(&plan.point(p), &plan.sampling, seed).map_err(|source| {
                    WireError::Realization {
                        point: p,
                        realization: r,
                        seed,
                        source,
                    }
                })
            })
            .collect()
    };
    let runs = match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| WireError::config("--threads", e.to_string()))?
            .install(work),
        None => work(),
    };
    let runs = runs.into_iter().collect::<Result<Vec<_>>>()?;

    let points = runs
        .chunks(plan.n_realizations)
        .enumerate()
        .map(|(p, runs)| summarize(plan, p, runs))
        .collect::<Result<Vec<_>>>()?;
    Ok(EnsembleResult {
        plan: plan.clone(),
        provenance: Provenance {
            plan_hash: plan.hash(),
            code_version: env!("CARGO_PKG_VERSION").to_owned(),
            generator_id: GENERATOR_ID.to_owned(),
        },
        points,
    })
}

/// Reduces the realizations of one point, in index order.
pub fn summarize(plan: &SweepPlan, index: usize, runs: &[RealizationRun]) -> Result<PointResult> {
    let series: Vec<TimeSeries> = runs.iter().map(|r| r.series.clone()).collect();
    let (mean, se) = aggregate(&series)?;
    let scalar = |f: &dyn Fn(&RealizationRun) -> f64| Stat::of(runs.iter().map(f));

    let v0_fit = runs
        .iter()
        .map(|r| r.fit.map(|f| f.v0))
        .collect::<Option<Vec<f64>>>()
        .map(Stat::of);
    let mean_fit = fit_ballistic_velocity(&mean, plan.sampling.fit_window_fs).ok();
    let gaps: Vec<f64> = runs.iter().filter_map(|r| r.gap.gap()).collect();
    let gap = GapSummary {
        resolved: gaps.len(),
        total: runs.len(),
        gap: (!gaps.is_empty()).then(|| Stat::of(gaps)),
    };

    let head = uniform_head(&mean);
    let rabi_period_fs = rabi_frequency_estimate(&head).ok().map(|e| e.period);
    let chi_final = mean.chi.last().copied().unwrap_or(0.0);
    let t_chi95_fs = mean
        .chi
        .iter()
        .position(|&c| c >= 0.95 * chi_final)
        .map(|i| mean.t[i]);
    let max_boundary = runs
        .iter()
        .flat_map(|r| r.series.p_boundary.iter().copied())
        .fold(0.0, f64::max);

    let summary = PointSummary {
        index,
        value: plan.values[index],
        seeds: runs.iter().map(|r| r.seed).collect(),
        v0_fit_mean_series: mean_fit.map(|f| f.v0),
        r_squared: mean_fit.map(|f| f.r_squared),
        v0_fit,
        v0_pred: scalar(&|r| r.v0_pred),
        matter_weight: scalar(&|r| r.matter_weight),
        g_exact: scalar(&|r| r.growth.exact),
        g_weak: scalar(&|r| r.growth.weak),
        g_strong: scalar(&|r| r.growth.strong),
        gap,
        rabi_period_fs,
        max_rmsd: mean.rmsd.iter().copied().fold(0.0, f64::max),
        chi_final,
        t_chi95_fs,
        max_boundary,
        max_norm_error: mean.max_norm_error,
        max_energy_drift: mean.max_energy_drift,
    };
    Ok(PointResult { summary, mean, se })
}

/// Leading stretch of `ts` sampled at its first spacing.
pub(crate) fn uniform_head(ts: &TimeSeries) -> TimeSeries {
    let n = match ts.t.get(1).map(|t1| t1 - ts.t[0]) {
        Some(dt) => {
            1 + ts
                .t
                .windows(2)
                .take_while(|w| ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt.max(1.0))
                .count()
        }
        None => ts.len(),
    };
    TimeSeries {
        t: ts.t[..n].to_vec(),
        p_m: ts.p_m[..n].to_vec(),
        rmsd: ts.rmsd[..n].to_vec(),
        chi: ts.chi[..n].to_vec(),
        p_boundary: ts.p_boundary[..n].to_vec(),
        ..Default::default()
    }
}
