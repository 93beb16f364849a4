use faer::{c64, Mat};

use super::{
    boundary_probability, density_profile, migration_interval, migration_probability_in, rmsd,
    DensityProfile, Propagator, StateVector, WavepacketSpec,
};
use crate::model::{HamiltonianMatrix, Realization};
use crate::spectrum::Spectrum;
use crate::{Error, Result};

/// Number of time samples reconstructed per dense product.
const CHUNK: usize = 64;

/// Sampling and output choices for [`simulate`].
#[derive(Debug, Clone, PartialEq)]
pub struct SimulationOptions {
    /// Output times, fs.
    pub times: Vec<f64>,
    /// Sites counted at each end of the wire for the boundary probability.
    pub n_edge: usize,
    /// Profile bin width, nm.
    pub bin_width: f64,
    /// Wire length used as the profile span, nm.
    pub span: f64,
    /// Times at which density profiles are kept. Matched to the nearest sample.
    pub profile_times: Vec<f64>,
}

impl SimulationOptions {
    /// Uniform grid `0, dt, …` up to and including `t_max` (within dt/1000).
    pub fn uniform_times(t_max: f64, dt: f64) -> Result<Vec<f64>> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::invalid("dt_fs", format!("must be positive, got {dt}")));
        }
        if !(t_max.is_finite() && t_max >= 0.0) {
            return Err(Error::invalid(
                "t_max_fs",
                format!("must be non-negative, got {t_max}"),
            ));
        }
        let n = (t_max / dt + 1e-3).floor() as usize;
        Ok((0..=n).map(|i| i as f64 * dt).collect())
    }
}

/// Observables sampled along one trajectory (or their ensemble mean).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TimeSeries {
    pub t: Vec<f64>,
    pub p_m: Vec<f64>,
    pub rmsd: Vec<f64>,
    pub chi: Vec<f64>,
    pub p_boundary: Vec<f64>,
    /// (t, profile) snapshots.
    pub profiles: Vec<(f64, DensityProfile)>,
    /// Largest |‖ψ(t)‖ − 1| over the samples.
    pub max_norm_error: f64,
    /// Largest |⟨H⟩(t) − ⟨H⟩(0)| over the samples, eV. Zero when not audited.
    pub max_energy_drift: f64,
}

impl TimeSeries {
    pub fn len(&self) -> usize {
        self.t.len()
    }

    pub fn is_empty(&self) -> bool {
        self.t.is_empty()
    }

    /// 1 − P_M at each sample.
    pub fn photon_probability(&self) -> Vec<f64> {
        self.p_m.iter().map(|p| 1.0 - p).collect()
    }

    /// Value of RMSD at the sample nearest `t`.
    pub fn rmsd_at(&self, t: f64) -> Option<f64> {
        self.nearest(t).map(|i| self.rmsd[i])
    }

    pub fn chi_at(&self, t: f64) -> Option<f64> {
        self.nearest(t).map(|i| self.chi[i])
    }

    pub fn nearest(&self, t: f64) -> Option<usize> {
        self.t
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - t).abs().total_cmp(&(b.1 - t).abs()))
            .map(|(i, _)| i)
    }
}

/// Propagates `psi0` and records the observables at every requested time.
///
/// States are reconstructed in chunks and discarded after their observables
/// are taken, except for the requested profile snapshots. When `audit` holds
/// the Hamiltonian, ⟨ψ(t)|H|ψ(t)⟩ is evaluated directly at every sample.
pub fn simulate(
    spectrum: &Spectrum,
    real: &Realization,
    psi0: &StateVector,
    wp: &WavepacketSpec,
    options: &SimulationOptions,
    audit: Option<&HamiltonianMatrix>,
) -> Result<TimeSeries> {
    let prop = Propagator::new(spectrum, psi0.clone())?;
    let interval = migration_interval(real, wp);
    let profile_idx: Vec<usize> = {
        let probe = TimeSeries {
            t: options.times.clone(),
            ..Default::default()
        };
        options
            .profile_times
            .iter()
            .filter_map(|&t| probe.nearest(t))
            .collect()
    };
    let e0 = audit.map(|h| h.expectation(psi0.amplitudes()));

    let n = options.times.len();
    let mut ts = TimeSeries {
        t: options.times.clone(),
        p_m: Vec::with_capacity(n),
        rmsd: Vec::with_capacity(n),
        chi: Vec::with_capacity(n),
        p_boundary: Vec::with_capacity(n),
        ..Default::default()
    };
    for (c, chunk) in options.times.chunks(CHUNK).enumerate() {
        let states = prop.states(chunk);
        if let (Some(h), Some(e0)) = (audit, e0) {
            let block = Mat::<c64>::from_fn(h.dim(), states.len(), |r, j| states[j].amplitudes()[r]);
            for e in h.expectations(block.as_ref()) {
                ts.max_energy_drift = ts.max_energy_drift.max((e - e0).abs());
            }
        }
        for (k, psi) in states.into_iter().enumerate() {
            let i = c * CHUNK + k;
            record(&mut ts, &psi, real, wp, interval.clone(), options.n_edge)?;
            for _ in profile_idx.iter().filter(|&&p| p == i) {
                let prof = density_profile(&psi, real, options.bin_width, options.span)?;
                ts.profiles.push((options.times[i], prof));
            }
        }
    }
    Ok(ts)
}

fn record(
    ts: &mut TimeSeries,
    psi: &StateVector,
    real: &Realization,
    wp: &WavepacketSpec,
    interval: std::ops::Range<usize>,
    n_edge: usize,
) -> Result<()> {
    ts.max_norm_error = ts.max_norm_error.max((psi.norm() - 1.0).abs());
    ts.p_m.push(psi.matter_probability().clamp(0.0, 1.0));
    ts.rmsd.push(rmsd(psi, real, wp.x0)?);
    ts.chi.push(migration_probability_in(psi, interval)?);
    ts.p_boundary.push(boundary_probability(psi, n_edge).clamp(0.0, 1.0));
    Ok(())
}
