//! Eigen-decomposition, ordered-wire dispersion and bright-mode extraction.

mod bright;
mod diagonalize;
mod dispersion;

pub use bright::{bright_mode_table, BrightMode, DEFAULT_BRIGHT_THRESHOLD};
pub use diagonalize::{diagonalize, Spectrum, RESIDUAL_TOLERANCE};
pub use dispersion::{effective_group_velocity, ordered_dispersion, DispersionTable, TwoLevelBlock};
