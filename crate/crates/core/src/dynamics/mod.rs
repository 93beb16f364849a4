//! Wave packet preparation, exact spectral propagation and observables.
//!
//! Times are in fs, lengths in nm. All observables that condition on the
//! exciton (RMSD, χ) are renormalized by the matter probability P_M(t).

mod observables;
mod propagate;
mod series;
mod wavepacket;

pub use observables::{
    boundary_probability, density_profile, migration_interval, migration_probability,
    migration_probability_in, rmsd, DensityProfile, MIN_MATTER_PROBABILITY,
};
pub use propagate::{evolve, Propagator};
pub use series::{simulate, SimulationOptions, TimeSeries};
pub use wavepacket::{
    moments, momentum_distribution, prepare_wavepacket, StateVector, WavepacketSpec,
};
