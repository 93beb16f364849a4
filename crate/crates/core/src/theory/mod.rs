//! Analytic predictions and fitted diagnostics built on spectra and time series.

mod growth;
mod signatures;
mod velocity;

pub use growth::{early_growth, early_growth_exact, early_growth_strong, early_growth_weak, EarlyGrowth};
pub use signatures::{
    polariton_gap, rabi_frequency_estimate, PolaritonGap, RabiEstimate, OSCILLATION_THRESHOLD,
};
pub use velocity::{
    fit_ballistic_velocity, fit_line, mean_matter_weight, power_law_exponent, predict_v0,
    BallisticFit,
    DEFAULT_FIT_WINDOW, MIN_FIT_SAMPLES,
};
