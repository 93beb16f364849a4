use std::f64::consts::PI;

use crate::constants::HBAR_C;
use crate::{Error, Result};

/// Cuboid cavity with periodic boundary conditions along `x` and vanishing
/// field along `y` and `z`. Only the `n_y = n_z = 1` band is modelled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavityGeometry {
    /// Wire length along the periodic axis, nm.
    pub lx: f64,
    /// Transverse confinement lengths, nm.
    pub ly: f64,
    pub lz: f64,
    /// Relative permittivity of the intracavity medium.
    pub epsilon: f64,
    /// Photon modes span `m_x ∈ [-m_max, m_max]`.
    pub m_max: u32,
}

/// One photon mode of the lowest band.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhotonMode {
    pub m: i64,
    /// Wavenumber along the wire, nm⁻¹.
    pub q: f64,
}

impl CavityGeometry {
    /// 50 µm × 0.2 µm × 0.4 µm, ε = 3, 1001 modes.
    pub fn paper_default() -> Self {
        CavityGeometry {
            lx: 50_000.0,
            ly: 200.0,
            lz: 400.0,
            epsilon: 3.0,
            m_max: 500,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("Lx_nm", self.lx), ("Ly_nm", self.ly), ("Lz_nm", self.lz)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::invalid(name, format!("must be positive, got {v}")));
            }
        }
        if !(self.epsilon.is_finite() && self.epsilon >= 1.0) {
            return Err(Error::invalid(
                "epsilon",
                format!("must be at least 1, got {}", self.epsilon),
            ));
        }
        Ok(())
    }

    pub fn mode_count(&self) -> usize {
        2 * self.m_max as usize + 1
    }

    /// Wavenumber spacing of the photon grid, 2π/L_x.
    pub fn q_spacing(&self) -> f64 {
        2.0 * PI / self.lx
    }

    /// Transverse cutoff wavenumber √((π/L_y)² + (π/L_z)²).
    pub fn q0(&self) -> f64 {
        (PI / self.ly).hypot(PI / self.lz)
    }

    /// ħc/√ε, eV·nm. Also ħ times the in-medium speed of light.
    pub fn light_slope(&self) -> f64 {
        HBAR_C / self.epsilon.sqrt()
    }

    /// Photon modes sorted by ascending `m_x`.
    pub fn photon_wavevectors(&self) -> Vec<PhotonMode> {
        let m_max = self.m_max as i64;
        (-m_max..=m_max)
            .map(|m| PhotonMode {
                m,
                q: self.q_of(m),
            })
            .collect()
    }

    /// q = 2π m / L_x.
    pub fn q_of(&self, m: i64) -> f64 {
        2.0 * PI * m as f64 / self.lx
    }

    /// Mode energy ħω_q = (ħc/√ε)√(q² + q₀²), eV.
    pub fn photon_energy(&self, q: f64) -> f64 {
        self.light_slope() * q.hypot(self.q0())
    }

    /// Lowest photon energy supported by the cavity, ħω₀.
    pub fn cutoff_energy(&self) -> f64 {
        self.light_slope() * self.q0()
    }

    /// Energy of the highest mode on the grid (|m_x| = m_max).
    pub fn max_mode_energy(&self) -> f64 {
        self.photon_energy(self.q_of(self.m_max as i64))
    }
}
