use faer::linalg::matmul::matmul;
use faer::{c64, Accum, Mat, Par};

use super::StateVector;
use crate::spectrum::Spectrum;
use crate::{Error, Result};

/// Exact spectral propagator `ψ(t) = V e^{−iωt} V† ψ(0)` for one initial state.
#[derive(Debug, Clone)]
pub struct Propagator<'a> {
    spectrum: &'a Spectrum,
    psi0: StateVector,
    /// Eigen-basis coefficients V†ψ(0).
    coeffs: Vec<c64>,
}

impl<'a> Propagator<'a> {
    pub fn new(spectrum: &'a Spectrum, psi0: StateVector) -> Result<Self> {
        if psi0.dim() != spectrum.dim() || psi0.n_dipoles() != spectrum.n_dipoles() {
            return Err(Error::Dimension {
                context: "initial state",
                expected: spectrum.dim(),
                found: psi0.dim(),
            });
        }
        let v = spectrum.vectors();
        let amps = psi0.amplitudes();
        let coeffs = (0..spectrum.dim())
            .map(|a| {
                v.col(a)
                    .iter()
                    .zip(amps)
                    .fold(c64::new(0.0, 0.0), |acc, (va, p)| acc + va.conj() * p)
            })
            .collect();
        Ok(Propagator {
            spectrum,
            psi0,
            coeffs,
        })
    }

    pub fn initial(&self) -> &StateVector {
        &self.psi0
    }

    /// Eigen-basis populations |⟨A|ψ(0)⟩|².
    pub fn populations(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.norm_sqr()).collect()
    }

    /// Σ_A |⟨A|ψ⟩|² E_A, eV. Constant in time by construction.
    pub fn mean_energy(&self) -> f64 {
        self.coeffs
            .iter()
            .zip(self.spectrum.energies())
            .map(|(c, e)| c.norm_sqr() * e)
            .sum()
    }

    pub fn state_at(&self, t: f64) -> StateVector {
        self.states(&[t]).pop().expect("one time requested")
    }

    /// States at each time, in input order. `t = 0` returns ψ(0) unchanged.
    pub fn states(&self, times: &[f64]) -> Vec<StateVector> {
        let block = self.amplitude_block(times);
        let n_dip = self.psi0.n_dipoles();
        (0..times.len())
            .map(|j| {
                if times[j] == 0.0 {
                    return self.psi0.clone();
                }
                let amps = block.col(j).iter().copied().collect();
                StateVector::new(amps, n_dip).expect("dimensions fixed at construction")
            })
            .collect()
    }

    /// Column j holds ψ(times[j]).
    fn amplitude_block(&self, times: &[f64]) -> Mat<c64> {
        let omega = self.spectrum.omega();
        let dim = self.spectrum.dim();
        let phases = Mat::<c64>::from_fn(dim, times.len(), |a, j| {
            let (s, c) = (omega[a] * times[j]).sin_cos();
            self.coeffs[a] * c64::new(c, -s)
        });
        let mut out = Mat::<c64>::zeros(dim, times.len());
        matmul(
            out.as_mut(),
            Accum::Replace,
            self.spectrum.vectors(),
            phases.as_ref(),
            c64::new(1.0, 0.0),
            Par::Seq,
        );
        out
    }
}

/// ψ(t) for every `t` in `times`.
pub fn evolve(psi0: &StateVector, spectrum: &Spectrum, times: &[f64]) -> Result<Vec<StateVector>> {
    Ok(Propagator::new(spectrum, psi0.clone())?.states(times))
}
