/// Physical constants in the crate's unit system (eV, nm, fs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// Reduced Planck constant, eV·fs.
    pub hbar: f64,
    /// ħc, eV·nm.
    pub hbar_c: f64,
}

impl PhysicalConstants {
    pub const CODATA: PhysicalConstants = PhysicalConstants {
        hbar: 0.658_211_956_9,
        hbar_c: 197.326_980_4,
    };

    /// Speed of light in nm/fs.
    pub fn speed_of_light(&self) -> f64 {
        self.hbar_c / self.hbar
    }

    /// Planck constant h = 2πħ, eV·fs.
    pub fn planck(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.hbar
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self::CODATA
    }
}

/// ħ in eV·fs.
pub const HBAR: f64 = PhysicalConstants::CODATA.hbar;
/// ħc in eV·nm.
pub const HBAR_C: f64 = PhysicalConstants::CODATA.hbar_c;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn speed_of_light_in_nm_per_fs() {
        let c = PhysicalConstants::CODATA.speed_of_light();
        assert!((c / 299.792_458 - 1.0).abs() < 1e-9, "c = {c}");
    }
}
