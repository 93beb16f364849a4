//! Geometry, matter parameters, disorder sampling and Hamiltonian assembly.

mod geometry;
mod hamiltonian;
mod matter;

pub use geometry::{CavityGeometry, PhotonMode};
pub use hamiltonian::{build_hamiltonian, Basis, HamiltonianMatrix};
pub use matter::{
    dipole_to_rabi, rabi_to_dipole, sample_realization, MatterSpec, Realization, GENERATOR_ID,
};

use crate::{Error, Result};

/// Relative tolerance on `N_M·a = L_x`.
const LENGTH_TOLERANCE: f64 = 1e-9;

/// Geometry plus matter parameters: one system family, before disorder is drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WireModel {
    pub geometry: CavityGeometry,
    pub matter: MatterSpec,
}

impl WireModel {
    /// N_M = 5000 dipoles on a 50 µm wire with 1001 photon modes.
    pub fn paper_scale(energy: f64, energy_sd: f64, rabi: f64) -> Self {
        WireModel {
            geometry: CavityGeometry::paper_default(),
            matter: MatterSpec {
                n_sites: 5000,
                spacing: 10.0,
                spacing_sd: 1.0,
                energy,
                energy_sd,
                rabi,
            },
        }
    }

    /// N_M = 1000 dipoles on a 10 µm wire with 401 photon modes.
    pub fn desk_scale(energy: f64, energy_sd: f64, rabi: f64) -> Self {
        WireModel {
            geometry: CavityGeometry {
                lx: 10_000.0,
                m_max: 200,
                ..CavityGeometry::paper_default()
            },
            matter: MatterSpec {
                n_sites: 1000,
                spacing: 10.0,
                spacing_sd: 1.0,
                energy,
                energy_sd,
                rabi,
            },
        }
    }

    /// Validates both parts and the pinning `N_M·a = L_x`.
    pub fn validate(&self) -> Result<()> {
        self.geometry.validate()?;
        self.matter.validate()?;
        let chain = self.matter.chain_length();
        if ((chain - self.geometry.lx) / self.geometry.lx).abs() > LENGTH_TOLERANCE {
            return Err(Error::invalid(
                "Lx_nm",
                format!(
                    "N_M·a = {} × {} nm = {chain} nm but Lx_nm = {}; set Lx_nm to {chain} \
                     or change N_M/a_nm so the chain fills the cavity",
                    self.matter.n_sites, self.matter.spacing, self.geometry.lx
                ),
            ));
        }
        Ok(())
    }

    pub fn sample(&self, seed: u64) -> Result<Realization> {
        sample_realization(&self.matter, seed)
    }

    pub fn hamiltonian(&self, real: &Realization) -> Result<HamiltonianMatrix> {
        build_hamiltonian(real, &self.geometry, &self.matter)
    }

    /// Detuning δ = ħω₀ − E_M, eV.
    pub fn detuning(&self) -> f64 {
        self.geometry.cutoff_energy() - self.matter.energy
    }

    /// Sets E_M so that ħω₀ − E_M equals `detuning`.
    pub fn with_detuning(mut self, detuning: f64) -> Self {
        self.matter.energy = self.geometry.cutoff_energy() - detuning;
        self
    }
}
