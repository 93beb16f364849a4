use crate::dynamics::TimeSeries;
use crate::spectrum::DispersionTable;
use crate::{Error, Result};

/// Fewest samples accepted by a line fit.
pub const MIN_FIT_SAMPLES: usize = 5;

/// Default ballistic fit window, fs.
pub const DEFAULT_FIT_WINDOW: (f64, f64) = (0.0, 500.0);

/// `v₀ = √(Σ_q P(q)[(v_eff,LP)² + (v_eff,UP)²])`, nm/fs.
///
/// `pq` is renormalized before use, so any positive multiple gives the same answer.
pub fn predict_v0(table: &DispersionTable, pq: &[f64]) -> Result<f64> {
    if pq.len() != table.len() {
        return Err(Error::GridMismatch(format!(
            "momentum distribution has {} points, dispersion table {}",
            pq.len(),
            table.len()
        )));
    }
    let total: f64 = pq.iter().sum();
    if !(total > 0.0) {
        return Err(Error::invalid("P(q)", "must have positive total weight"));
    }
    let v2: f64 = pq
        .iter()
        .zip(table.veff_lp.iter().zip(&table.veff_up))
        .map(|(p, (l, u))| p * (l * l + u * u))
        .sum();
    Ok((v2 / total).sqrt())
}

/// Long-time matter weight `Σ_q P(q)(Π_LP² + Π_UP²)` of an exciton wave packet.
///
/// An exciton at q projects onto LP and UP with weights Π_LP and Π_UP; once the
/// Rabi beating dephases, each branch keeps its own exciton content, so this is
/// the average P_M by which the RMSD is renormalized.
pub fn mean_matter_weight(table: &DispersionTable, pq: &[f64]) -> Result<f64> {
    if pq.len() != table.len() {
        return Err(Error::GridMismatch(format!(
            "momentum distribution has {} points, dispersion table {}",
            pq.len(),
            table.len()
        )));
    }
    let total: f64 = pq.iter().sum();
    if !(total > 0.0) {
        return Err(Error::invalid("P(q)", "must have positive total weight"));
    }
    let w: f64 = pq
        .iter()
        .zip(table.pi_lp.iter().zip(&table.pi_up))
        .map(|(p, (l, u))| p * (l * l + u * u))
        .sum();
    Ok(w / total)
}

/// Least-squares line through RMSD(t) samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BallisticFit {
    /// Slope, nm/fs.
    pub v0: f64,
    /// nm.
    pub intercept: f64,
    pub r_squared: f64,
    /// Inclusive bounds, fs.
    pub window: (f64, f64),
    pub samples: usize,
}

/// Ordinary least squares `y = a + b x`; returns (b, a, R²).
pub fn fit_line(x: &[f64], y: &[f64]) -> Result<(f64, f64, f64)> {
    let n = x.len();
    if n < MIN_FIT_SAMPLES || y.len() != n {
        return Err(Error::InsufficientSamples {
            found: n.min(y.len()),
            required: MIN_FIT_SAMPLES,
        });
    }
    let nf = n as f64;
    let mx = x.iter().sum::<f64>() / nf;
    let my = y.iter().sum::<f64>() / nf;
    let sxx: f64 = x.iter().map(|v| (v - mx).powi(2)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InsufficientSamples {
            found: 1,
            required: MIN_FIT_SAMPLES,
        });
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).powi(2))
        .sum();
    let r2 = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok((slope, intercept, r2.clamp(0.0, 1.0)))
}

/// Fits RMSD(t) over samples with `window.0 ≤ t ≤ window.1`.
pub fn fit_ballistic_velocity(ts: &TimeSeries, window: (f64, f64)) -> Result<BallisticFit> {
    let (lo, hi) = window;
    if !(lo <= hi) {
        return Err(Error::invalid(
            "fit_window_fs",
            format!("empty window ({lo}, {hi})"),
        ));
    }
    let (x, y): (Vec<f64>, Vec<f64>) = ts
        .t
        .iter()
        .zip(&ts.rmsd)
        .filter(|(t, _)| **t >= lo && **t <= hi)
        .map(|(t, r)| (*t, *r))
        .unzip();
    let (v0, intercept, r_squared) = fit_line(&x, &y)?;
    Ok(BallisticFit {
        v0,
        intercept,
        r_squared,
        window,
        samples: x.len(),
    })
}

/// Exponent p of `y ∝ t^p` from a log-log line fit over positive samples.
pub fn power_law_exponent(t: &[f64], y: &[f64]) -> Result<f64> {
    let (lx, ly): (Vec<f64>, Vec<f64>) = t
        .iter()
        .zip(y)
        .filter(|(t, y)| **t > 0.0 && **y > 0.0)
        .map(|(t, y)| (t.ln(), y.ln()))
        .unzip();
    Ok(fit_line(&lx, &ly)?.0)
}
