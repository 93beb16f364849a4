use super::Spectrum;

/// Default photon-content threshold for a mode to count as bright.
pub const DEFAULT_BRIGHT_THRESHOLD: f64 = 0.10;

/// One bright eigenstate: its energy and dominant photon wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BrightMode {
    /// eV.
    pub energy: f64,
    /// nm⁻¹. Standing-wave eigenvectors weigh ±q equally; the first (negative) one wins.
    pub q_peak: f64,
    pub photon_content: f64,
}

/// Eigenstates with photon content above `threshold`, in ascending energy.
pub fn bright_mode_table(spec: &Spectrum, threshold: f64) -> Vec<BrightMode> {
    let n_dip = spec.n_dipoles();
    let modes = &spec.basis().modes;
    let v = spec.vectors();
    let mut out = Vec::new();
    for (a, &p) in spec.photon_content().iter().enumerate() {
        if p <= threshold {
            continue;
        }
        let col = v.col(a);
        let mut best = (0usize, f64::NEG_INFINITY);
        for k in 0..modes.len() {
            let w = col[n_dip + k].norm_sqr();
            // Ties within rounding go to the earlier (lower q) mode.
            if w > best.1 * (1.0 + 1e-9) {
                best = (k, w);
            }
        }
        out.push(BrightMode {
            energy: spec.energies()[a],
            q_peak: modes[best.0].q,
            photon_content: p,
        });
    }
    out
}
