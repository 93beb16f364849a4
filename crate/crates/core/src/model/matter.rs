use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};

use super::CavityGeometry;
use crate::{Error, Result};

/// Identifier recorded in every [`Realization`] drawn by [`sample_realization`].
pub const GENERATOR_ID: &str = "chacha20";

/// Dipole chain parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatterSpec {
    /// Number of dipoles N_M.
    pub n_sites: usize,
    /// Mean intersite spacing, nm.
    pub spacing: f64,
    /// Standard deviation of the spacing, nm.
    pub spacing_sd: f64,
    /// Mean excitation energy E_M, eV.
    pub energy: f64,
    /// Standard deviation of the excitation energies σ_M, eV.
    pub energy_sd: f64,
    /// Collective Rabi splitting Ω_R, eV.
    pub rabi: f64,
}

impl MatterSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_sites == 0 {
            return Err(Error::invalid("N_M", "must be at least 1"));
        }
        let positive = [("a_nm", self.spacing), ("E_M_eV", self.energy)];
        for (name, v) in positive {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        let non_negative = [
            ("sigma_a_nm", self.spacing_sd),
            ("sigma_M_eV", self.energy_sd),
            ("Omega_R_eV", self.rabi),
        ];
        for (name, v) in non_negative {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::invalid(
                    name,
                    format!("must be non-negative, got {v}"),
                ));
            }
        }
        Ok(())
    }

    /// Nominal chain length N_M·a, nm.
    pub fn chain_length(&self) -> f64 {
        self.n_sites as f64 * self.spacing
    }
}

/// One frozen disorder sample of the dipole chain.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    /// Dipole positions x_n, nm, strictly increasing.
    pub positions: Vec<f64>,
    /// Excitation energies E_n, eV, strictly positive.
    pub energies: Vec<f64>,
    pub seed: u64,
    pub generator_id: String,
}

impl Realization {
    /// Builds a realization from explicit site data, checking its invariants.
    pub fn from_sites(positions: Vec<f64>, energies: Vec<f64>) -> Result<Self> {
        if positions.len() != energies.len() {
            return Err(Error::Dimension {
                context: "realization energies",
                expected: positions.len(),
                found: energies.len(),
            });
        }
        if positions.is_empty() {
            return Err(Error::invalid("positions", "realization has no sites"));
        }
        if let Some(i) = positions.windows(2).position(|w| !(w[1] > w[0])) {
            return Err(Error::invalid(
                "positions",
                format!("not strictly increasing at index {}", i + 1),
            ));
        }
        if let Some((index, &value)) = energies
            .iter()
            .enumerate()
            .find(|(_, e)| !(e.is_finite() && **e > 0.0))
        {
            return Err(Error::Sampling {
                quantity: "excitation energy",
                index,
                value,
            });
        }
        Ok(Realization {
            positions,
            energies,
            seed: 0,
            generator_id: "explicit".to_owned(),
        })
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

/// Draws spacings and energies from independent normal distributions.
///
/// A single ChaCha20 stream seeded with `seed` yields the `N_M` spacing
/// deviates first and then the `N_M` energy deviates. Positions are the
/// cumulative sum of the spacings, written as `n·a + Σ σ_a z_k` so that a
/// zero-variance chain sits exactly on the lattice `x_n = n·a`.
pub fn sample_realization(spec: &MatterSpec, seed: u64) -> Result<Realization> {
    spec.validate()?;
    let n = spec.n_sites;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut z = || -> f64 { StandardNormal.sample(&mut rng) };

    let mut positions = Vec::with_capacity(n);
    let mut drift = 0.0;
    for i in 0..n {
        let dz = z();
        let step = spec.spacing + spec.spacing_sd * dz;
        if step <= 0.0 {
            return Err(Error::Sampling {
                quantity: "spacing",
                index: i,
                value: step,
            });
        }
        drift += spec.spacing_sd * dz;
        positions.push((i + 1) as f64 * spec.spacing + drift);
    }

    let mut energies = Vec::with_capacity(n);
    for i in 0..n {
        let e = spec.energy + spec.energy_sd * z();
        if e <= 0.0 {
            return Err(Error::Sampling {
                quantity: "excitation energy",
                index: i,
                value: e,
            });
        }
        energies.push(e);
    }

    Ok(Realization {
        positions,
        energies,
        seed,
        generator_id: GENERATOR_ID.to_owned(),
    })
}

/// Collective coupling prefactor √(ħω₀ N_M / (2 ε L_x L_y L_z)), in √(eV/nm³).
fn coupling_scale(spec: &MatterSpec, geom: &CavityGeometry) -> f64 {
    let volume = geom.lx * geom.ly * geom.lz;
    (geom.cutoff_energy() * spec.n_sites as f64 / (2.0 * geom.epsilon * volume)).sqrt()
}

/// Dipole-moment component μ·ẑ that produces the Rabi splitting of `spec`.
///
/// Returned in √(eV·nm³), the unit in which μ²/volume is an energy.
pub fn rabi_to_dipole(spec: &MatterSpec, geom: &CavityGeometry) -> f64 {
    spec.rabi / coupling_scale(spec, geom)
}

/// Inverse of [`rabi_to_dipole`]: Ω_R = μ·ẑ √(ħω₀ N_M / (2 ε L_x L_y L_z)).
pub fn dipole_to_rabi(dipole: f64, spec: &MatterSpec, geom: &CavityGeometry) -> f64 {
    dipole * coupling_scale(spec, geom)
}
