use polariton_core::dynamics::{DensityProfile, TimeSeries};
use serde::{Deserialize, Serialize};

use crate::error::{Result, WireError};

/// Mean and standard error of a sample, accumulated left to right.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub mean: f64,
    /// s/√n with the n − 1 sample variance; zero for a single value.
    pub se: f64,
    pub n: usize,
}

impl Stat {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Self {
        let values: Vec<f64> = values.into_iter().collect();
        let n = values.len();
        let (mean, se) = mean_se(&values);
        Stat { mean, se, n }
    }
}

fn mean_se(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mut sum = 0.0;
    for v in values {
        sum += v;
    }
    let mean = sum / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let mut ss = 0.0;
    for v in values {
        ss += (v - mean) * (v - mean);
    }
    (mean, (ss / (n - 1) as f64 / n as f64).sqrt())
}

/// Columnwise mean and SE of each observable, in input order.
///
/// Density profiles are averaged when every series carries the same snapshots
/// on the same bins. Conservation diagnostics take the worst case over inputs.
pub fn aggregate(series: &[TimeSeries]) -> Result<(TimeSeries, TimeSeries)> {
    let first = series
        .first()
        .ok_or_else(|| WireError::GridMismatch("no series to aggregate".to_owned()))?;
    for (i, s) in series.iter().enumerate() {
        let lens = [s.p_m.len(), s.rmsd.len(), s.chi.len(), s.p_boundary.len()];
        if s.t != first.t || lens.iter().any(|&l| l != s.t.len()) {
            return Err(WireError::GridMismatch(format!(
                "series {i} has {} samples on a different grid from series 0 ({} samples)",
                s.t.len(),
                first.t.len()
            )));
        }
    }

    let columns = |pick: fn(&TimeSeries) -> &Vec<f64>| -> (Vec<f64>, Vec<f64>) {
        (0..first.t.len())
            .map(|k| mean_se(&series.iter().map(|s| pick(s)[k]).collect::<Vec<_>>()))
            .unzip()
    };
    let (p_m, p_m_se) = columns(|s| &s.p_m);
    let (rmsd, rmsd_se) = columns(|s| &s.rmsd);
    let (chi, chi_se) = columns(|s| &s.chi);
    let (p_boundary, p_boundary_se) = columns(|s| &s.p_boundary);
    let worst = |pick: fn(&TimeSeries) -> f64| series.iter().map(pick).fold(0.0, f64::max);

    let (profiles, profiles_se) = mean_profiles(series)?;
    let mean = TimeSeries {
        t: first.t.clone(),
        p_m,
        rmsd,
        chi,
        p_boundary,
        profiles,
        max_norm_error: worst(|s| s.max_norm_error),
        max_energy_drift: worst(|s| s.max_energy_drift),
    };
    let se = TimeSeries {
        t: first.t.clone(),
        p_m: p_m_se,
        rmsd: rmsd_se,
        chi: chi_se,
        p_boundary: p_boundary_se,
        profiles: profiles_se,
        ..Default::default()
    };
    Ok((mean, se))
}

type Profiles = Vec<(f64, DensityProfile)>;

fn mean_profiles(series: &[TimeSeries]) -> Result<(Profiles, Profiles)> {
    let first = &series[0].profiles;
    let same = series.iter().all(|s| {
        s.profiles.len() == first.len()
            && s.profiles
                .iter()
                .zip(first)
                .all(|(a, b)| a.0 == b.0 && a.1.centres == b.1.centres)
    });
    if !same {
        return Err(WireError::GridMismatch(
            "density profiles differ in snapshot times or bins".to_owned(),
        ));
    }
    let mut mean = Vec::with_capacity(first.len());
    let mut se = Vec::with_capacity(first.len());
    for (j, (t, p)) in first.iter().enumerate() {
        let (m, e): (Vec<f64>, Vec<f64>) = (0..p.centres.len())
            .map(|k| mean_se(&series.iter().map(|s| s.profiles[j].1.probability[k]).collect::<Vec<_>>()))
            .unzip();
        mean.push((*t, DensityProfile { centres: p.centres.clone(), probability: m }));
        se.push((*t, DensityProfile { centres: p.centres.clone(), probability: e }));
    }
    Ok((mean, se))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant(v: f64) -> TimeSeries {
        TimeSeries {
            t: vec![0.0, 1.0, 2.0],
            p_m: vec![v; 3],
            rmsd: vec![v; 3],
            chi: vec![v; 3],
            p_boundary: vec![v; 3],
            ..Default::default()
        }
    }

    #[test]
    fn identical_inputs_have_zero_error() {
        let (m, se) = aggregate(&[constant(0.3), constant(0.3), constant(0.3)]).unwrap();
        assert_eq!(m.rmsd, vec![0.3; 3]);
        assert_eq!(se.chi, vec![0.0; 3]);
    }

    #[test]
    fn two_constants_average() {
        let (m, se) = aggregate(&[constant(1.0), constant(3.0)]).unwrap();
        assert_eq!(m.p_m, vec![2.0; 3]);
        assert_eq!(se.p_m, vec![1.0; 3]);
    }

    #[test]
    fn single_series_is_returned_unchanged() {
        let mut s = constant(0.1);
        s.rmsd = vec![0.1, 0.7, 1.3];
        let (m, _) = aggregate(std::slice::from_ref(&s)).unwrap();
        assert_eq!(m, s);
    }

    #[test]
    fn grid_mismatch() {
        let mut b = constant(1.0);
        b.t[2] = 2.5;
        assert!(matches!(
            aggregate(&[constant(1.0), b]),
            Err(WireError::GridMismatch(_))
        ));
        assert!(matches!(aggregate(&[]), Err(WireError::GridMismatch(_))));
    }

    #[test]
    fn stat_of_sample() {
        let s = Stat::of([1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.se - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
        assert_eq!(Stat::of([7.0]).se, 0.0);
    }
}
