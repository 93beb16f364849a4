use faer::linalg::matmul::matmul;
use faer::{c64, Accum, Mat, MatRef, Par};

use super::{CavityGeometry, MatterSpec, PhotonMode, Realization};
use crate::{Error, Result};

/// Ordering of the single-excitation basis: the first `n_dipoles` indices are
/// the sites `|n;0⟩` in position order, followed by the photon modes `|0;q⟩`
/// in ascending `m_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct Basis {
    pub n_dipoles: usize,
    pub modes: Vec<PhotonMode>,
}

impl Basis {
    pub fn dim(&self) -> usize {
        self.n_dipoles + self.modes.len()
    }

    pub fn n_photons(&self) -> usize {
        self.modes.len()
    }

    /// Wavenumbers of the photon modes, in basis order.
    pub fn photon_q(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.q).collect()
    }
}

/// Dense Hermitian single-excitation Hamiltonian, eV.
#[derive(Debug, Clone)]
pub struct HamiltonianMatrix {
    basis: Basis,
    entries: Mat<c64>,
}

impl HamiltonianMatrix {
    /// Wraps an explicit matrix. The caller is responsible for Hermiticity.
    pub fn from_dense(basis: Basis, entries: Mat<c64>) -> Result<Self> {
        let d = basis.dim();
        if entries.nrows() != d || entries.ncols() != d {
            return Err(Error::Dimension {
                context: "Hamiltonian entries",
                expected: d,
                found: entries.nrows().max(entries.ncols()),
            });
        }
        Ok(HamiltonianMatrix { basis, entries })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn entries(&self) -> MatRef<'_, c64> {
        self.entries.as_ref()
    }

    /// Largest elementwise |H − H†|.
    pub fn max_asymmetry(&self) -> f64 {
        let h = &self.entries;
        let d = self.dim();
        let mut worst = 0.0f64;
        for j in 0..d {
            for i in 0..=j {
                worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// H·v.
    pub fn apply(&self, v: &[c64]) -> Vec<c64> {
        let d = self.dim();
        assert_eq!(v.len(), d, "vector length must match the Hamiltonian");
        let mut out = vec![c64::new(0.0, 0.0); d];
        for (j, &vj) in v.iter().enumerate() {
            if vj == c64::new(0.0, 0.0) {
                continue;
            }
            let col = self.entries.col(j);
            for (o, &h) in out.iter_mut().zip(col.iter()) {
                *o += h * vj;
            }
        }
        out
    }

    /// ⟨v|H|v⟩ (real for Hermitian H).
    pub fn expectation(&self, v: &[c64]) -> f64 {
        let hv = self.apply(v);
        v.iter().zip(&hv).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// ⟨v_j|H|v_j⟩ for every column of `vs`, from one dense product.
    pub fn expectations(&self, vs: MatRef<'_, c64>) -> Vec<f64> {
        assert_eq!(vs.nrows(), self.dim(), "vector length must match the Hamiltonian");
        let mut hv = Mat::<c64>::zeros(vs.nrows(), vs.ncols());
        matmul(
            hv.as_mut(),
            Accum::Replace,
            self.entries.as_ref(),
            vs,
            c64::new(1.0, 0.0),
            Par::Seq,
        );
        (0..vs.ncols())
            .map(|j| {
                vs.col(j)
                    .iter()
                    .zip(hv.col(j).iter())
                    .map(|(a, b)| (a.conj() * b).re)
                    .sum()
            })
            .collect()
    }
}

/// Assembles the single-excitation Hamiltonian of one realization.
///
/// Diagonal: `E_n` for the sites, `ħω_q` for the photons. Site–photon block:
/// `⟨n;0|H|0;q⟩ = −i (Ω_R/2) √(E_n / (N_M ħω_q)) e^{i q x_n}`, with the
/// photon–site block filled by Hermitian conjugation. Phases for `−q` are
/// derived from the `+q` entry, so `C(n,−q) = −conj(C(n,q))` holds bit-exactly.
pub fn build_hamiltonian(
    real: &Realization,
    geom: &CavityGeometry,
    spec: &MatterSpec,
) -> Result<HamiltonianMatrix> {
    geom.validate()?;
    spec.validate()?;
    if real.positions.len() != spec.n_sites {
        return Err(Error::Dimension {
            context: "realization positions",
            expected: spec.n_sites,
            found: real.positions.len(),
        });
    }
    if real.energies.len() != spec.n_sites {
        return Err(Error::Dimension {
            context: "realization energies",
            expected: spec.n_sites,
            found: real.energies.len(),
        });
    }
    if let Some((index, &value)) = real.energies.iter().enumerate().find(|(_, e)| **e <= 0.0) {
        return Err(Error::Sampling {
            quantity: "excitation energy",
            index,
            value,
        });
    }

    let modes = geom.photon_wavevectors();
    let n_dip = spec.n_sites;
    let n_ph = modes.len();
    let centre = geom.m_max as usize;
    let dim = n_dip + n_ph;
    let mut h = Mat::<c64>::zeros(dim, dim);

    for (n, &e) in real.energies.iter().enumerate() {
        h[(n, n)] = c64::new(e, 0.0);
    }
    let photon_energy: Vec<f64> = modes.iter().map(|m| geom.photon_energy(m.q)).collect();
    for (k, &w) in photon_energy.iter().enumerate() {
        h[(n_dip + k, n_dip + k)] = c64::new(w, 0.0);
    }

    let half_rabi = 0.5 * spec.rabi;
    for (n, (&x, &e)) in real.positions.iter().zip(&real.energies).enumerate() {
        for m in 0..=geom.m_max as usize {
            let plus = centre + m;
            let q = modes[plus].q;
            let g = half_rabi * (e / (n_dip as f64 * photon_energy[plus])).sqrt();
            let (s, c) = (q * x).sin_cos();
            // −i g e^{iqx} = g sin − i g cos
            let c_plus = c64::new(g * s, -g * c);
            h[(n, n_dip + plus)] = c_plus;
            h[(n_dip + plus, n)] = c_plus.conj();
            if m > 0 {
                let minus = centre - m;
                let c_minus = -c_plus.conj();
                h[(n, n_dip + minus)] = c_minus;
                h[(n_dip + minus, n)] = c_minus.conj();
            }
        }
    }

    Ok(HamiltonianMatrix {
        basis: Basis {
            n_dipoles: n_dip,
            modes,
        },
        entries: h,
    })
}
