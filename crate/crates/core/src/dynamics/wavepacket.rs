use faer::c64;

use crate::model::{Basis, Realization};
use crate::{Error, Result};

/// Gaussian exciton wave packet `exp[−(x−x0)²/4σ_x² + i q̄₀ x]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WavepacketSpec {
    /// Width of the position distribution |ψ|², nm.
    pub sigma_x: f64,
    /// Mean wavenumber, nm⁻¹.
    pub qbar0: f64,
    /// Centre, nm.
    pub x0: f64,
}

impl WavepacketSpec {
    /// Packet centred on the middle of a wire of length `lx`.
    pub fn centred(lx: f64, sigma_x: f64, qbar0: f64) -> Self {
        WavepacketSpec {
            sigma_x,
            qbar0,
            x0: 0.5 * lx,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_x.is_finite() && self.sigma_x > 0.0) {
            return Err(Error::invalid(
                "sigma_x_nm",
                format!("must be positive, got {}", self.sigma_x),
            ));
        }
        if !self.qbar0.is_finite() {
            return Err(Error::invalid("qbar0_invnm", "must be finite"));
        }
        if !self.x0.is_finite() {
            return Err(Error::invalid("x0_nm", "must be finite"));
        }
        Ok(())
    }

    /// Region `[x0 − 3σ_x, x0 + 3σ_x]` that defines the migration probability.
    pub fn window(&self) -> (f64, f64) {
        (self.x0 - 3.0 * self.sigma_x, self.x0 + 3.0 * self.sigma_x)
    }
}

/// Amplitudes over the (sites ⊕ photons) basis.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<c64>,
    n_dipoles: usize,
}

impl StateVector {
    pub fn new(amplitudes: Vec<c64>, n_dipoles: usize) -> Result<Self> {
        if n_dipoles > amplitudes.len() {
            return Err(Error::Dimension {
                context: "state vector",
                expected: n_dipoles,
                found: amplitudes.len(),
            });
        }
        Ok(StateVector {
            amplitudes,
            n_dipoles,
        })
    }

    pub fn amplitudes(&self) -> &[c64] {
        &self.amplitudes
    }

    pub fn dipoles(&self) -> &[c64] {
        &self.amplitudes[..self.n_dipoles]
    }

    pub fn photons(&self) -> &[c64] {
        &self.amplitudes[self.n_dipoles..]
    }

    pub fn n_dipoles(&self) -> usize {
        self.n_dipoles
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// P_M = Σ_n |⟨n;0|ψ⟩|².
    pub fn matter_probability(&self) -> f64 {
        self.dipoles().iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn photon_probability(&self) -> f64 {
        self.photons().iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn into_amplitudes(self) -> Vec<c64> {
        self.amplitudes
    }
}

/// Purely excitonic Gaussian packet on the sites of `real`.
pub fn prepare_wavepacket(
    wp: &WavepacketSpec,
    real: &Realization,
    basis: &Basis,
) -> Result<StateVector> {
    wp.validate()?;
    if basis.n_dipoles != real.len() {
        return Err(Error::Dimension {
            context: "wave packet sites",
            expected: basis.n_dipoles,
            found: real.len(),
        });
    }
    let (lo, hi) = wp.window();
    let inside = real
        .positions
        .iter()
        .filter(|&&x| x >= lo && x <= hi)
        .count();
    if inside < 3 {
        return Err(Error::DegenerateWavepacket { sites: inside });
    }

    let inv4s2 = 1.0 / (4.0 * wp.sigma_x * wp.sigma_x);
    let mut amps = vec![c64::new(0.0, 0.0); basis.dim()];
    // The phase is referenced to x0 so that q̄₀ = 0 and q̄₀ ≠ 0 share an envelope.
    for (a, &x) in amps.iter_mut().zip(&real.positions) {
        let d = x - wp.x0;
        let env = (-d * d * inv4s2).exp();
        let (s, c) = (wp.qbar0 * d).sin_cos();
        *a = c64::new(env * c, env * s);
    }
    let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
    for a in &mut amps {
        *a /= norm;
    }
    StateVector::new(amps, basis.n_dipoles)
}

/// |c_q|² with `c_q = N_M^{-1/2} Σ_n c_n e^{−i q x_n}`, normalized over `qgrid`.
///
/// Only the site amplitudes enter.
pub fn momentum_distribution(psi: &StateVector, real: &Realization, qgrid: &[f64]) -> Vec<f64> {
    let mut p: Vec<f64> = qgrid
        .iter()
        .map(|&q| {
            let mut acc = c64::new(0.0, 0.0);
            for (c, &x) in psi.dipoles().iter().zip(&real.positions) {
                let (s, co) = (q * x).sin_cos();
                acc += *c * c64::new(co, -s);
            }
            acc.norm_sqr()
        })
        .collect();
    let total: f64 = p.iter().sum();
    if total > 0.0 {
        for v in &mut p {
            *v /= total;
        }
    }
    p
}

/// Mean and standard deviation of a distribution `p` over `x`.
pub fn moments(x: &[f64], p: &[f64]) -> (f64, f64) {
    let total: f64 = p.iter().sum();
    let mean = x.iter().zip(p).map(|(x, p)| x * p).sum::<f64>() / total;
    let var = x
        .iter()
        .zip(p)
        .map(|(x, p)| (x - mean).powi(2) * p)
        .sum::<f64>()
        / total;
    (mean, var.sqrt())
}
