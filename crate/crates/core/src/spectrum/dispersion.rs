use crate::constants::HBAR;
use crate::model::{CavityGeometry, MatterSpec};

/// Two-level block `[[E_M, g_q], [g_q, ħω_q]]` of the ordered wire at one q.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevelBlock {
    /// Exciton energy, eV.
    pub exciton: f64,
    /// Photon energy, eV.
    pub photon: f64,
    /// Coupling magnitude, eV.
    pub coupling: f64,
}

impl TwoLevelBlock {
    /// Half detuning (ħω_q − E_M)/2.
    fn half_gap(&self) -> f64 {
        0.5 * (self.photon - self.exciton)
    }

    fn radius(&self) -> f64 {
        self.half_gap().hypot(self.coupling)
    }

    /// (E_LP, E_UP), eV.
    pub fn energies(&self) -> (f64, f64) {
        let mid = 0.5 * (self.exciton + self.photon);
        let r = self.radius();
        (mid - r, mid + r)
    }

    /// Exciton weights (Π_LP, Π_UP) of the two eigenvectors.
    ///
    /// The small weight is evaluated as g²/(2R(R + |Δ|)), which stays accurate
    /// far from resonance; the large one is its complement.
    pub fn exciton_weights(&self) -> (f64, f64) {
        let d = self.half_gap();
        let r = self.radius();
        if r == 0.0 {
            return (0.5, 0.5);
        }
        let small = self.coupling * self.coupling / (2.0 * r * (r + d.abs()));
        if d >= 0.0 {
            (1.0 - small, small)
        } else {
            (small, 1.0 - small)
        }
    }
}

/// Closed-form polariton branches of the ordered wire on the photon q-grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionTable {
    pub q: Vec<f64>,
    pub omega_lp: Vec<f64>,
    pub omega_up: Vec<f64>,
    pub pi_lp: Vec<f64>,
    pub pi_up: Vec<f64>,
    pub vg_lp: Vec<f64>,
    pub vg_up: Vec<f64>,
    pub veff_lp: Vec<f64>,
    pub veff_up: Vec<f64>,
    /// Parameters the table was built from, kept for differentiation.
    pub exciton_energy: f64,
    pub rabi: f64,
    pub light_slope: f64,
    pub q0: f64,
}

impl DispersionTable {
    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn block(&self, q: f64) -> TwoLevelBlock {
        let photon = self.light_slope * q.hypot(self.q0);
        TwoLevelBlock {
            exciton: self.exciton_energy,
            photon,
            coupling: 0.5 * self.rabi * (self.exciton_energy / photon).sqrt(),
        }
    }

    /// (dE_LP/dq, dE_UP/dq) at `q`, eV·nm.
    pub fn slopes(&self, q: f64) -> (f64, f64) {
        let b = self.block(q);
        let w = b.photon;
        let dw = self.light_slope * self.light_slope * q / w;
        let dg = -0.5 * b.coupling * dw / w;
        let d = b.half_gap();
        let r = b.radius();
        let dr = if r == 0.0 {
            0.0
        } else {
            (0.5 * d * dw + b.coupling * dg) / r
        };
        (0.5 * dw - dr, 0.5 * dw + dr)
    }
}

/// Disorder-free dispersion with `g_q = (Ω_R/2)√(E_M/ħω_q)`.
///
/// Velocity columns are zero until [`effective_group_velocity`] fills them.
pub fn ordered_dispersion(geom: &CavityGeometry, spec: &MatterSpec) -> DispersionTable {
    let q: Vec<f64> = geom.photon_wavevectors().iter().map(|m| m.q).collect();
    let n = q.len();
    let mut table = DispersionTable {
        q,
        omega_lp: Vec::with_capacity(n),
        omega_up: Vec::with_capacity(n),
        pi_lp: Vec::with_capacity(n),
        pi_up: Vec::with_capacity(n),
        vg_lp: vec![0.0; n],
        vg_up: vec![0.0; n],
        veff_lp: vec![0.0; n],
        veff_up: vec![0.0; n],
        exciton_energy: spec.energy,
        rabi: spec.rabi,
        light_slope: geom.light_slope(),
        q0: geom.q0(),
    };
    for i in 0..n {
        let b = table.block(table.q[i]);
        let (lp, up) = b.energies();
        let (pl, pu) = b.exciton_weights();
        table.omega_lp.push(lp / HBAR);
        table.omega_up.push(up / HBAR);
        table.pi_lp.push(pl);
        table.pi_up.push(pu);
    }
    table
}

/// Fills `v_g = ∂ω/∂q` from the analytic derivative and `v_eff = Π·v_g`.
pub fn effective_group_velocity(mut table: DispersionTable) -> DispersionTable {
    for i in 0..table.len() {
        let (slp, sup) = table.slopes(table.q[i]);
        table.vg_lp[i] = slp / HBAR;
        table.vg_up[i] = sup / HBAR;
        table.veff_lp[i] = table.pi_lp[i] * table.vg_lp[i];
        table.veff_up[i] = table.pi_up[i] * table.vg_up[i];
    }
    table
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(rabi: f64) -> DispersionTable {
        let geom = CavityGeometry::paper_default();
        let spec = MatterSpec {
            n_sites: 5000,
            spacing: 10.0,
            spacing_sd: 0.0,
            energy: 2.0,
            energy_sd: 0.0,
            rabi,
        };
        effective_group_velocity(ordered_dispersion(&geom, &spec))
    }

    #[test]
    fn resonant_block_splits_by_rabi() {
        let b = TwoLevelBlock {
            exciton: 2.0,
            photon: 2.0,
            coupling: 0.05,
        };
        let (lp, up) = b.energies();
        assert!((up - lp - 0.1).abs() < 1e-12);
        assert_eq!(b.exciton_weights(), (0.5, 0.5));
    }

    #[test]
    fn branches_ordered_and_contents_complementary() {
        let t = table(0.1);
        for i in 0..t.len() {
            assert!(t.omega_up[i] >= t.omega_lp[i]);
            assert!((t.pi_lp[i] + t.pi_up[i] - 1.0).abs() < 1e-12);
            assert_eq!(t.veff_lp[i], t.pi_lp[i] * t.vg_lp[i]);
        }
    }

    #[test]
    fn symmetry_in_q() {
        let t = table(0.1);
        let n = t.len();
        for i in 0..n {
            let j = n - 1 - i;
            assert_eq!(t.omega_lp[i], t.omega_lp[j]);
            assert_eq!(t.vg_up[i], -t.vg_up[j]);
        }
        let mid = n / 2;
        assert_eq!(t.vg_lp[mid], 0.0);
        assert_eq!(t.veff_up[mid], 0.0);
    }

    #[test]
    fn far_detuned_limits() {
        let t = table(0.1);
        let last = t.len() - 1;
        assert!(t.pi_lp[last] > 0.999);
        assert!(t.omega_lp[last] < 2.0 / HBAR);
        assert!(2.0 / HBAR - t.omega_lp[last] < 1e-3);
        // UP group velocity approaches c/√ε
        let c_medium = t.light_slope / HBAR;
        assert!((c_medium - 173.1).abs() < 0.05);
        // At the grid edge q/q₀ ≈ 3.6, so only the trend is visible there.
        assert!((t.vg_up[last] - c_medium).abs() / c_medium < 0.05);
        assert!(t.veff_up[last].abs() < 0.01 * c_medium);
        let (_, far) = t.slopes(5.0);
        assert!((far / HBAR - c_medium).abs() / c_medium < 1e-4);
    }

    #[test]
    fn gap_doubles_with_rabi() {
        let geom = CavityGeometry::paper_default();
        let resonant = |rabi: f64| {
            let spec = MatterSpec {
                n_sites: 5000,
                spacing: 10.0,
                spacing_sd: 0.0,
                energy: geom.cutoff_energy(),
                energy_sd: 0.0,
                rabi,
            };
            let t = ordered_dispersion(&geom, &spec);
            let mid = t.len() / 2;
            (t.omega_up[mid] - t.omega_lp[mid]) * HBAR
        };
        assert!((resonant(0.1) - 0.1).abs() < 1e-12);
        assert!((resonant(0.2) / resonant(0.1) - 2.0).abs() < 1e-12);
    }
}
