//! Coherent exciton transport on a lossless, disordered polaritonic wire.
//!
//! The wire is a chain of two-level dipoles inside a cuboid microcavity with
//! periodic boundary conditions along its long axis. Only the lowest
//! transverse-electric photon band is retained, and the dynamics is confined to
//! the single-excitation manifold `|n;0⟩ ⊕ |0;q⟩`, which is diagonalized
//! exactly and propagated spectrally.
//!
//! Units are fixed throughout the crate: energies in eV, lengths in nm, times
//! in fs, wavenumbers in nm⁻¹, angular frequencies in fs⁻¹ and velocities in
//! nm/fs.
//!
//! Module map:
//!
//! * [`model`]: cavity geometry, matter parameters, disorder sampling and the
//!   Hamiltonian in the site/photon basis.
//! * [`spectrum`]: dense diagonalization, the ordered-system dispersion and
//!   effective exciton group velocities.
//! * [`dynamics`]: Gaussian exciton wave packets, spectral propagation and
//!   the transport observables (matter content, RMSD, migration probability).
//! * [`theory`]: ballistic-velocity prediction and fits, early-growth
//!   estimators of the migration probability and strong-coupling signatures.

pub mod constants;
pub mod dynamics;
mod error;
pub mod model;
pub mod spectrum;
pub mod theory;

pub use constants::PhysicalConstants;
pub use error::{Error, Result};

/// Complex scalar used for all amplitudes and matrix entries.
pub use faer::c64;
