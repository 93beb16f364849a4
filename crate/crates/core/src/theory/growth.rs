use std::ops::Range;

use faer::c64;

use crate::dynamics::StateVector;
use crate::spectrum::Spectrum;
use crate::{Error, Result};

/// Early-growth coefficient `G = ½ d²χ/dt²` at t → 0⁺, fs⁻².
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EarlyGrowth {
    /// Exact quadratic coefficient of χ(t) for this state and spectrum.
    pub exact: f64,
    /// Weak-disorder estimate from eigenvector site weights alone.
    pub weak: f64,
    /// Strong-disorder estimate; per realization, to be averaged over the ensemble.
    pub strong: f64,
}

/// All three estimators for one realization.
pub fn early_growth(spec: &Spectrum, psi0: &StateVector, interval: Range<usize>) -> Result<EarlyGrowth> {
    Ok(EarlyGrowth {
        exact: early_growth_exact(spec, psi0, interval.clone())?,
        weak: early_growth_weak(spec, interval.clone())?,
        strong: early_growth_strong(spec, psi0, interval)?,
    })
}

fn check(spec: &Spectrum, interval: &Range<usize>) -> Result<()> {
    if interval.end > spec.n_dipoles() || interval.is_empty() {
        return Err(Error::invalid(
            "interval",
            format!(
                "site range {interval:?} is empty or exceeds {} sites",
                spec.n_dipoles()
            ),
        ));
    }
    Ok(())
}

/// Quadratic coefficient of χ(t) from the eigen-decomposition.
///
/// With `m_k = V ω^k V†ψ(0)` each site probability expands as
/// `|ψ_n|² = |ψ_n(0)|² + 2 Im(ψ_n* m1_n) t + (|m1_n|² − Re(ψ_n* m2_n)) t² + …`,
/// which is the pair sum `−½ Σ_{A,B} Re(A_n B_n* a_A a_B*)(ω_A − ω_B)²`
/// evaluated without forming pairs. The same expansion of the matter weight
/// P_M supplies the renormalization in χ = 1 − S/P_M. Frequencies are shifted
/// by their populated mean, which leaves probabilities unchanged.
pub fn early_growth_exact(spec: &Spectrum, psi0: &StateVector, interval: Range<usize>) -> Result<f64> {
    check(spec, &interval)?;
    if psi0.dim() != spec.dim() {
        return Err(Error::Dimension {
            context: "initial state",
            expected: spec.dim(),
            found: psi0.dim(),
        });
    }
    let v = spec.vectors();
    let dim = spec.dim();
    let n_dip = spec.n_dipoles();
    let amps = psi0.amplitudes();
    let a: Vec<c64> = (0..dim)
        .map(|k| {
            v.col(k)
                .iter()
                .zip(amps)
                .fold(c64::new(0.0, 0.0), |acc, (x, p)| acc + x.conj() * p)
        })
        .collect();
    let weight: f64 = a.iter().map(|c| c.norm_sqr()).sum();
    let shift = a
        .iter()
        .zip(spec.omega())
        .map(|(c, w)| c.norm_sqr() * w)
        .sum::<f64>()
        / weight;
    let w: Vec<f64> = spec.omega().iter().map(|x| x - shift).collect();

    // Only site rows are needed.
    let mut m1 = vec![c64::new(0.0, 0.0); n_dip];
    let mut m2 = vec![c64::new(0.0, 0.0); n_dip];
    for k in 0..dim {
        let c1 = a[k] * w[k];
        let c2 = c1 * w[k];
        let col = v.col(k);
        for n in 0..n_dip {
            m1[n] += col[n] * c1;
            m2[n] += col[n] * c2;
        }
    }

    let mut s = [0.0f64; 3];
    let mut m = [0.0f64; 3];
    for n in 0..n_dip {
        let p = amps[n];
        let terms = [
            p.norm_sqr(),
            2.0 * (p.conj() * m1[n]).im,
            m1[n].norm_sqr() - (p.conj() * m2[n]).re,
        ];
        for i in 0..3 {
            m[i] += terms[i];
            if interval.contains(&n) {
                s[i] += terms[i];
            }
        }
    }
    if m[0] <= 0.0 {
        return Err(Error::NoMatterContent { p_m: m[0] });
    }
    // t² coefficient of S/M for S = s0 + s1 t + s2 t², M likewise.
    let ratio2 = (s[2] - (s[1] * m[1] + s[0] * m[2]) / m[0] + s[0] * m[1] * m[1] / (m[0] * m[0])) / m[0];
    Ok(-ratio2)
}

/// Per-site spread `Σ_{A,B} |A_n|²|B_n|² (ω_A − ω_B)²` for every site in `interval`.
fn pair_spread(spec: &Spectrum, interval: Range<usize>) -> Vec<f64> {
    let v = spec.vectors();
    let omega = spec.omega();
    interval
        .map(|n| {
            let row = v.row(n);
            let mut sw = 0.0;
            let mut swo = 0.0;
            for (k, &om) in omega.iter().enumerate() {
                let wk = row[k].norm_sqr();
                sw += wk;
                swo += wk * om;
            }
            let mean = swo / sw;
            let var: f64 = omega
                .iter()
                .enumerate()
                .map(|(k, om)| row[k].norm_sqr() * (om - mean).powi(2))
                .sum();
            2.0 * sw * var
        })
        .collect()
}

/// `(1/2N_I) Σ_{n∈I} Σ_{A,B} |A_n|²|B_n|² (ω_A − ω_B)²`.
pub fn early_growth_weak(spec: &Spectrum, interval: Range<usize>) -> Result<f64> {
    check(spec, &interval)?;
    let n_i = interval.len() as f64;
    Ok(pair_spread(spec, interval).iter().sum::<f64>() / (2.0 * n_i))
}

/// `½ Σ_{n∈I} |c_n|² Σ_{A,B} |A_n|²|B_n|² (ω_A − ω_B)²` for one realization.
///
/// Averaging this over realizations gives the disorder-averaged estimator.
pub fn early_growth_strong(spec: &Spectrum, psi0: &StateVector, interval: Range<usize>) -> Result<f64> {
    check(spec, &interval)?;
    let c = psi0.dipoles();
    let start = interval.start;
    Ok(0.5
        * pair_spread(spec, interval)
            .iter()
            .enumerate()
            .map(|(k, s)| c[start + k].norm_sqr() * s)
            .sum::<f64>())
}
