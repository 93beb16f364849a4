use std::f64::consts::PI;

use crate::dynamics::TimeSeries;
use crate::spectrum::BrightMode;
use crate::{Error, Result};

/// Required ratio of the spectral peak to the median background.
pub const OSCILLATION_THRESHOLD: f64 = 3.0;

/// Dominant oscillation of P_M(t).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RabiEstimate {
    /// fs.
    pub period: f64,
    /// Half peak-to-trough of the fitted sinusoid.
    pub amplitude: f64,
    /// Spectral peak over median background.
    pub peak_ratio: f64,
}

/// Period and amplitude of the strongest oscillation in P_M(t).
///
/// The series is linearly detrended and split into four half-overlapping
/// Hann-windowed segments whose periodograms are averaged on a grid eight
/// times finer than the segment resolution. Averaging suppresses the spurious
/// peaks of an incoherent signal, so the ratio of the highest peak to the
/// median of the averaged spectrum separates sustained oscillations from
/// noise. The peak is refined by parabolic interpolation, and the amplitude
/// comes from a least-squares sinusoid at that frequency over the full series.
pub fn rabi_frequency_estimate(ts: &TimeSeries) -> Result<RabiEstimate> {
    let n = ts.len();
    if n < 32 {
        return Err(Error::InsufficientSamples {
            found: n,
            required: 32,
        });
    }
    let dt = ts.t[1] - ts.t[0];
    let uniform = ts
        .t
        .windows(2)
        .all(|w| ((w[1] - w[0]) - dt).abs() <= 1e-9 * dt.abs().max(1.0));
    if !(dt > 0.0 && uniform) {
        return Err(Error::invalid("t", "Rabi analysis needs a uniform time grid"));
    }

    let y = detrend(&ts.t, &ts.p_m);
    let variance = y.iter().map(|v| v * v).sum::<f64>() / n as f64;
    if variance <= 1e-24 {
        return Err(Error::NoOscillation { ratio: 0.0 });
    }

    let seg = n / 2 - n / 16;
    let hop = (n - seg) / 3;
    let starts: Vec<usize> = (0..4).map(|k| k * hop).collect();
    let window: Vec<f64> = (0..seg)
        .map(|i| 0.5 - 0.5 * (2.0 * PI * i as f64 / (seg - 1) as f64).cos())
        .collect();
    let seg_span = seg as f64 * dt;
    let f_lo = 2.0 / seg_span;
    let f_hi = 0.5 / dt;
    let df = 1.0 / (8.0 * seg_span);
    let freqs: Vec<f64> = (0..)
        .map(|k| f_lo + k as f64 * df)
        .take_while(|f| *f <= f_hi)
        .collect();
    if freqs.len() < 3 {
        return Err(Error::InsufficientSamples {
            found: n,
            required: 32,
        });
    }
    let power: Vec<f64> = freqs
        .iter()
        .map(|&f| {
            starts
                .iter()
                .map(|&s| {
                    let (mut re, mut im) = (0.0, 0.0);
                    for i in 0..seg {
                        let (sn, cs) = (2.0 * PI * f * i as f64 * dt).sin_cos();
                        re += window[i] * y[s + i] * cs;
                        im -= window[i] * y[s + i] * sn;
                    }
                    re * re + im * im
                })
                .sum::<f64>()
                / starts.len() as f64
        })
        .collect();

    let (ipk, &peak) = power
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty grid");
    let mut sorted = power.clone();
    sorted.sort_by(f64::total_cmp);
    let background = sorted[sorted.len() / 2];
    let ratio = if background > 0.0 { peak / background } else { f64::INFINITY };
    if !(ratio >= OSCILLATION_THRESHOLD) {
        return Err(Error::NoOscillation { ratio });
    }

    let mut f = freqs[ipk];
    if ipk > 0 && ipk + 1 < freqs.len() {
        let (a, b, c) = (power[ipk - 1], peak, power[ipk + 1]);
        let denom = a - 2.0 * b + c;
        if denom != 0.0 {
            f += 0.5 * (a - c) / denom * df;
        }
    }
    let amplitude = sinusoid_amplitude(&ts.t, &y, f);
    Ok(RabiEstimate {
        period: 1.0 / f,
        amplitude,
        peak_ratio: ratio,
    })
}

fn detrend(t: &[f64], y: &[f64]) -> Vec<f64> {
    let n = t.len() as f64;
    let mt = t.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let stt: f64 = t.iter().map(|v| (v - mt).powi(2)).sum();
    let sty: f64 = t.iter().zip(y).map(|(a, b)| (a - mt) * (b - my)).sum();
    let slope = if stt > 0.0 { sty / stt } else { 0.0 };
    t.iter()
        .zip(y)
        .map(|(a, b)| b - my - slope * (a - mt))
        .collect()
}

/// √(a² + b²) for the least-squares fit y ≈ a cos(2πft) + b sin(2πft).
fn sinusoid_amplitude(t: &[f64], y: &[f64], f: f64) -> f64 {
    let (mut cc, mut ss, mut cs, mut yc, mut ys) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for (&ti, &yi) in t.iter().zip(y) {
        let (s, c) = (2.0 * PI * f * ti).sin_cos();
        cc += c * c;
        ss += s * s;
        cs += c * s;
        yc += yi * c;
        ys += yi * s;
    }
    let det = cc * ss - cs * cs;
    if det == 0.0 {
        return 0.0;
    }
    let a = (yc * ss - ys * cs) / det;
    let b = (ys * cc - yc * cs) / det;
    a.hypot(b)
}

/// Outcome of splitting the bright modes near q = 0 into two branches.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolaritonGap {
    Resolved {
        /// E_UP − E_LP, eV.
        gap: f64,
        /// Mean energies of the branches, eV.
        lower: f64,
        upper: f64,
        /// Modes counted in each branch.
        n_lower: usize,
        n_upper: usize,
    },
    Unresolved,
}

impl PolaritonGap {
    pub fn gap(&self) -> Option<f64> {
        match self {
            PolaritonGap::Resolved { gap, .. } => Some(*gap),
            PolaritonGap::Unresolved => None,
        }
    }
}

/// Splits bright modes with `|q_peak| ≤ q_window` at `split` (normally E_M)
/// and returns the difference of the branch mean energies.
///
/// Unresolved when either side is empty.
pub fn polariton_gap(bright: &[BrightMode], split: f64, q_window: f64) -> PolaritonGap {
    let near: Vec<f64> = bright
        .iter()
        .filter(|m| m.q_peak.abs() <= q_window)
        .map(|m| m.energy)
        .collect();
    let (lo, hi): (Vec<f64>, Vec<f64>) = near.iter().partition(|&&e| e < split);
    if lo.is_empty() || hi.is_empty() {
        return PolaritonGap::Unresolved;
    }
    let lower = lo.iter().sum::<f64>() / lo.len() as f64;
    let upper = hi.iter().sum::<f64>() / hi.len() as f64;
    PolaritonGap::Resolved {
        gap: upper - lower,
        lower,
        upper,
        n_lower: lo.len(),
        n_upper: hi.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(f: impl Fn(f64) -> f64, t_max: f64, dt: f64) -> TimeSeries {
        let t: Vec<f64> = (0..)
            .map(|i| i as f64 * dt)
            .take_while(|t| *t <= t_max)
            .collect();
        TimeSeries {
            p_m: t.iter().map(|&t| f(t)).collect(),
            t,
            ..Default::default()
        }
    }

    #[test]
    fn clean_cosine_period() {
        let ts = series(|t| 0.5 + 0.5 * (2.0 * PI * t / 41.36).cos(), 1000.0, 1.0);
        let est = rabi_frequency_estimate(&ts).unwrap();
        assert!((est.period - 41.36).abs() < 0.2, "{}", est.period);
        assert!((est.amplitude - 0.5).abs() < 0.01, "{}", est.amplitude);
    }

    #[test]
    fn constant_has_no_oscillation() {
        let ts = series(|_| 1.0, 500.0, 1.0);
        assert!(matches!(
            rabi_frequency_estimate(&ts),
            Err(Error::NoOscillation { .. })
        ));
    }

    #[test]
    fn gap_split_and_unresolved() {
        let m = |energy, q_peak| BrightMode {
            energy,
            q_peak,
            photon_content: 0.5,
        };
        let modes = [m(1.95, 0.0), m(2.05, 0.0), m(2.3, 0.01)];
        let g = polariton_gap(&modes, 2.0, 1e-4);
        assert!((g.gap().unwrap() - 0.1).abs() < 1e-12);
        assert_eq!(polariton_gap(&modes[..1], 2.0, 1e-4), PolaritonGap::Unresolved);
        assert_eq!(polariton_gap(&[], 2.0, 1e-4), PolaritonGap::Unresolved);
    }
}
