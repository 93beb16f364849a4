use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("sampling produced a non-positive {quantity} ({value}) at site {index}; parameters are pathological")]
    Sampling {
        quantity: &'static str,
        index: usize,
        value: f64,
    },

    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    Dimension {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("eigensolver failed: {0}")]
    Convergence(String),

    #[error("wave packet covers only {sites} site(s) within ±3σ_x of its center (need at least 3)")]
    DegenerateWavepacket { sites: usize },

    #[error("state has no matter content (P_M = {p_m:e})")]
    NoMatterContent { p_m: f64 },

    #[error("wavenumber grids differ: {0}")]
    GridMismatch(String),

    #[error("fit window holds {found} sample(s); at least {required} are required")]
    InsufficientSamples { found: usize, required: usize },

    #[error("no oscillation found: strongest spectral peak is {ratio:.2}× the background")]
    NoOscillation { ratio: f64 },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
