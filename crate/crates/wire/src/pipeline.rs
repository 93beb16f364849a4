//! One disorder realization from sampling to fitted diagnostics.

use polariton_core::dynamics::{
    migration_interval, momentum_distribution, prepare_wavepacket, simulate, SimulationOptions,
    TimeSeries,
};
use polariton_core::model::GENERATOR_ID;
use polariton_core::spectrum::{
    bright_mode_table, diagonalize, effective_group_velocity, ordered_dispersion, BrightMode,
    DEFAULT_BRIGHT_THRESHOLD,
};
use polariton_core::theory::{
    early_growth, fit_ballistic_velocity, mean_matter_weight, polariton_gap, predict_v0,
    BallisticFit, EarlyGrowth, PolaritonGap, DEFAULT_FIT_WINDOW,
};
use serde::{Deserialize, Serialize};

use crate::config::ModelConfig;

/// Output grid and analysis settings shared by every realization of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sampling {
    pub times_fs: Vec<f64>,
    pub fit_window_fs: (f64, f64),
    pub bin_width_nm: f64,
    pub n_edge: usize,
    pub profile_times_fs: Vec<f64>,
    /// Evaluate ⟨H⟩ directly at every sample to audit energy conservation.
    pub audit_energy: bool,
}

impl Sampling {
    /// Uniform grid `0, dt, …, t_max` with default analysis settings.
    pub fn uniform(t_max_fs: f64, dt_fs: f64) -> polariton_core::Result<Self> {
        Ok(Self::on(SimulationOptions::uniform_times(t_max_fs, dt_fs)?))
    }

    pub fn on(times_fs: Vec<f64>) -> Self {
        Sampling {
            times_fs,
            fit_window_fs: DEFAULT_FIT_WINDOW,
            bin_width_nm: 50.0,
            n_edge: 100,
            profile_times_fs: Vec::new(),
            audit_energy: false,
        }
    }
}

/// Everything kept from one realization once its spectrum is dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct RealizationRun {
    pub seed: u64,
    pub series: TimeSeries,
    /// None when the fit window holds too few samples.
    pub fit: Option<BallisticFit>,
    /// Ballistic velocity predicted from the ordered dispersion and the packet's P(q).
    pub v0_pred: f64,
    /// Long-time matter weight expected for the packet's P(q).
    pub matter_weight: f64,
    pub growth: EarlyGrowth,
    pub bright: Vec<BrightMode>,
    pub gap: PolaritonGap,
}

/// Samples, diagonalizes, propagates and analyses one realization.
pub fn run_realization(
    model: &ModelConfig,
    sampling: &Sampling,
    seed: u64,
) -> polariton_core::Result<RealizationRun> {
    let wire = model.wire();
    wire.validate()?;
    let wp = model.wavepacket_spec();
    let real = wire.sample(seed)?;
    debug_assert_eq!(real.generator_id, GENERATOR_ID);
    let h = wire.hamiltonian(&real)?;
    let spectrum = diagonalize(&h)?;
    let psi0 = prepare_wavepacket(&wp, &real, h.basis())?;

    let options = SimulationOptions {
        times: sampling.times_fs.clone(),
        n_edge: sampling.n_edge,
        bin_width: sampling.bin_width_nm,
        span: wire.geometry.lx,
        profile_times: sampling.profile_times_fs.clone(),
    };
    let audit = sampling.audit_energy.then_some(&h);
    let series = simulate(&spectrum, &real, &psi0, &wp, &options, audit)?;
    let fit = match fit_ballistic_velocity(&series, sampling.fit_window_fs) {
        Ok(f) => Some(f),
        Err(polariton_core::Error::InsufficientSamples { .. }) => None,
        Err(e) => return Err(e),
    };

    let table = effective_group_velocity(ordered_dispersion(&wire.geometry, &wire.matter));
    let pq = momentum_distribution(&psi0, &real, &table.q);
    let v0_pred = predict_v0(&table, &pq)?;
    let matter_weight = mean_matter_weight(&table, &pq)?;

    let growth = early_growth(&spectrum, &psi0, migration_interval(&real, &wp))?;
    let bright = bright_mode_table(&spectrum, DEFAULT_BRIGHT_THRESHOLD);
    let gap = polariton_gap(&bright, wire.matter.energy, 0.5 * wire.geometry.q_spacing());

    Ok(RealizationRun {
        seed,
        series,
        fit,
        v0_pred,
        matter_weight,
        growth,
        bright,
        gap,
    })
}
