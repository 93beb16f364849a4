use std::ops::Range;

use super::{StateVector, WavepacketSpec};
use crate::model::Realization;
use crate::{Error, Result};

/// Below this matter probability the renormalized observables are undefined.
pub const MIN_MATTER_PROBABILITY: f64 = 1e-14;

fn matter_weight(psi: &StateVector) -> Result<f64> {
    let p_m = psi.matter_probability();
    if p_m < MIN_MATTER_PROBABILITY {
        return Err(Error::NoMatterContent { p_m });
    }
    Ok(p_m)
}

/// Matter-renormalized RMS displacement about `x0`, nm.
pub fn rmsd(psi: &StateVector, real: &Realization, x0: f64) -> Result<f64> {
    let p_m = matter_weight(psi)?;
    let m2: f64 = psi
        .dipoles()
        .iter()
        .zip(&real.positions)
        .map(|(a, x)| a.norm_sqr() * (x - x0).powi(2))
        .sum();
    Ok((m2 / p_m).sqrt())
}

/// Site indices whose positions lie in the ±3σ_x window of `wp`.
///
/// Positions are sorted, so the set is a contiguous range.
pub fn migration_interval(real: &Realization, wp: &WavepacketSpec) -> Range<usize> {
    let (lo, hi) = wp.window();
    let start = real.positions.partition_point(|&x| x < lo);
    let end = real.positions.partition_point(|&x| x <= hi);
    start..end.max(start)
}

/// χ = 1 − (1/P_M) Σ_{n∈I} |⟨n;0|ψ⟩|².
pub fn migration_probability(
    psi: &StateVector,
    real: &Realization,
    wp: &WavepacketSpec,
) -> Result<f64> {
    migration_probability_in(psi, migration_interval(real, wp))
}

/// χ for a precomputed interval.
pub fn migration_probability_in(psi: &StateVector, interval: Range<usize>) -> Result<f64> {
    let p_m = matter_weight(psi)?;
    let inside: f64 = psi.dipoles()[interval].iter().map(|a| a.norm_sqr()).sum();
    Ok((1.0 - inside / p_m).clamp(0.0, 1.0))
}

/// Probability on the `n_edge` sites nearest each end of the wire.
pub fn boundary_probability(psi: &StateVector, n_edge: usize) -> f64 {
    let d = psi.dipoles();
    let k = n_edge.min(d.len() / 2);
    let head: f64 = d[..k].iter().map(|a| a.norm_sqr()).sum();
    let tail: f64 = d[d.len() - k..].iter().map(|a| a.norm_sqr()).sum();
    head + tail
}

/// Exciton probability binned in position.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityProfile {
    /// Bin centres, nm.
    pub centres: Vec<f64>,
    pub probability: Vec<f64>,
}

/// Bins `|⟨n;0|ψ⟩|²` into cells of `bin_width` covering `[0, span]`.
///
/// Sites drifting past either end of the span are counted in the edge bins,
/// so the bins always sum to P_M.
pub fn density_profile(
    psi: &StateVector,
    real: &Realization,
    bin_width: f64,
    span: f64,
) -> Result<DensityProfile> {
    if !(bin_width.is_finite() && bin_width > 0.0) {
        return Err(Error::invalid(
            "bin_width_nm",
            format!("must be positive, got {bin_width}"),
        ));
    }
    let n_bins = ((span / bin_width).ceil() as usize).max(1);
    let mut probability = vec![0.0; n_bins];
    for (a, &x) in psi.dipoles().iter().zip(&real.positions) {
        let k = ((x / bin_width).floor().max(0.0) as usize).min(n_bins - 1);
        probability[k] += a.norm_sqr();
    }
    let centres = (0..n_bins).map(|k| (k as f64 + 0.5) * bin_width).collect();
    Ok(DensityProfile {
        centres,
        probability,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use faer::c64;

    fn lattice(n: usize) -> Realization {
        let x = (1..=n).map(|i| i as f64 * 10.0).collect();
        Realization::from_sites(x, vec![2.0; n]).unwrap()
    }

    fn state(amps: Vec<c64>, n: usize) -> StateVector {
        StateVector::new(amps, n).unwrap()
    }

    #[test]
    fn single_site_has_zero_rmsd() {
        let r = lattice(10);
        let mut a = vec![c64::new(0.0, 0.0); 12];
        a[4] = c64::new(0.0, 1.0);
        assert_eq!(rmsd(&state(a, 10), &r, 50.0).unwrap(), 0.0);
    }

    #[test]
    fn two_site_state_gives_half_distance() {
        let r = lattice(10);
        let mut a = vec![c64::new(0.0, 0.0); 10];
        let h = std::f64::consts::FRAC_1_SQRT_2;
        a[2] = c64::new(h, 0.0);
        a[6] = c64::new(0.0, h);
        // sites at 30 and 70 nm, centre 50
        let v = rmsd(&state(a, 10), &r, 50.0).unwrap();
        assert!((v - 20.0).abs() < 1e-12);
    }

    #[test]
    fn renormalization_by_matter_weight() {
        let r = lattice(4);
        let a = vec![
            c64::new(0.0, 0.0),
            c64::new(0.6, 0.0),
            c64::new(0.0, 0.0),
            c64::new(0.0, 0.0),
            c64::new(0.8, 0.0),
        ];
        let psi = state(a, 4);
        assert!((rmsd(&psi, &r, 10.0).unwrap() - 10.0).abs() < 1e-12);
        let wp = WavepacketSpec {
            sigma_x: 1.0,
            qbar0: 0.0,
            x0: 20.0,
        };
        assert!(migration_probability(&psi, &r, &wp).unwrap().abs() < 1e-15);
    }

    #[test]
    fn photon_only_state_errors() {
        let r = lattice(3);
        let a = vec![
            c64::new(0.0, 0.0),
            c64::new(0.0, 0.0),
            c64::new(0.0, 0.0),
            c64::new(1.0, 0.0),
        ];
        assert!(matches!(
            rmsd(&state(a, 3), &r, 0.0),
            Err(Error::NoMatterContent { .. })
        ));
    }

    #[test]
    fn outside_support_means_full_migration() {
        let r = lattice(100);
        let wp = WavepacketSpec {
            sigma_x: 20.0,
            qbar0: 0.0,
            x0: 500.0,
        };
        let mut a = vec![c64::new(0.0, 0.0); 100];
        a[5] = c64::new(1.0, 0.0);
        assert_eq!(migration_probability(&state(a, 100), &r, &wp).unwrap(), 1.0);
        assert_eq!(migration_interval(&r, &wp), 43..56);
    }

    #[test]
    fn uniform_state_boundary_weight() {
        let n = 1000;
        let amp = c64::new((1.0 / n as f64).sqrt(), 0.0);
        let psi = state(vec![amp; n], n);
        let p = boundary_probability(&psi, 100);
        assert!((p - 0.2).abs() < 1e-12);
    }

    #[test]
    fn profile_sums_to_matter_probability() {
        let r = lattice(100);
        let mut a: Vec<c64> = (0..102).map(|i| c64::new((i as f64).sin(), 0.3)).collect();
        let norm = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        a.iter_mut().for_each(|z| *z /= norm);
        let psi = state(a, 100);
        let prof = density_profile(&psi, &r, 70.0, 1000.0).unwrap();
        let total: f64 = prof.probability.iter().sum();
        assert!((total - psi.matter_probability()).abs() < 1e-12);
        assert_eq!(prof.centres.len(), 15);
    }
}
