use std::f64::consts::FRAC_1_SQRT_2;

use faer::dyn_stack::{MemBuffer, MemStack};
use faer::linalg::evd::{self_adjoint_evd, self_adjoint_evd_scratch, ComputeEigenvectors};
use faer::linalg::matmul::matmul;
use faer::{c64, Accum, Mat, MatRef, Par};

use crate::constants::HBAR;
use crate::model::{Basis, HamiltonianMatrix};
use crate::{Error, Result};

/// Largest tolerated ‖Hv − E v‖ per eigenvector, eV.
pub const RESIDUAL_TOLERANCE: f64 = 1e-8;

/// Eigen-decomposition of the single-excitation Hamiltonian.
///
/// Columns of `vectors` are expressed in the same basis as the Hamiltonian
/// (sites first, then photon modes) and ordered by ascending energy.
#[derive(Debug, Clone)]
pub struct Spectrum {
    basis: Basis,
    energies: Vec<f64>,
    omega: Vec<f64>,
    vectors: Mat<c64>,
    exciton_content: Vec<f64>,
    photon_content: Vec<f64>,
    max_residual: f64,
}

impl Spectrum {
    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.energies.len()
    }

    pub fn n_dipoles(&self) -> usize {
        self.basis.n_dipoles
    }

    /// Eigenvalues E_A, eV, ascending.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Angular frequencies ω_A = E_A/ħ, fs⁻¹.
    pub fn omega(&self) -> &[f64] {
        &self.omega
    }

    pub fn vectors(&self) -> MatRef<'_, c64> {
        self.vectors.as_ref()
    }

    /// Σ_{n ≤ N_M} |⟨n;0|A⟩|² for every eigenstate A.
    pub fn exciton_content(&self) -> &[f64] {
        &self.exciton_content
    }

    pub fn photon_content(&self) -> &[f64] {
        &self.photon_content
    }

    /// Largest ‖Hv − E v‖ over all columns, eV.
    pub fn max_residual(&self) -> f64 {
        self.max_residual
    }
}

/// Dense diagonalization of `h`.
///
/// When the photon modes come in ±q pairs whose couplings satisfy
/// `C(n,−q) = −conj(C(n,q))` (always the case for [`crate::model::build_hamiltonian`]),
/// the matrix is rotated onto phased standing waves, where it is real
/// symmetric, and solved in real arithmetic. Other Hermitian inputs use a
/// complex solver. Exactly degenerate ±q photon pairs therefore come out as
/// standing waves rather than running waves.
///
/// The solver runs sequentially, so results do not depend on the thread pool.
pub fn diagonalize(h: &HamiltonianMatrix) -> Result<Spectrum> {
    let basis = h.basis().clone();
    let dim = h.dim();
    let scale = max_abs(h.entries()).max(f64::MIN_POSITIVE);

    let (energies, vectors, max_residual) = match PairedModes::detect(&basis) {
        Some(pairs) => match pairs.to_real(h.entries(), scale) {
            Some(real) => {
                let (e, w) = real_evd(real.as_ref())?;
                let residual = residual_real(real.as_ref(), &e, w.as_ref());
                (e, pairs.back_transform(w.as_ref()), residual)
            }
            None => complex_path(h.entries())?,
        },
        None => complex_path(h.entries())?,
    };

    if !(max_residual <= RESIDUAL_TOLERANCE) {
        return Err(Error::Convergence(format!(
            "residual {max_residual:e} eV exceeds {RESIDUAL_TOLERANCE:e} eV"
        )));
    }

    let n_dip = basis.n_dipoles;
    let exciton_content: Vec<f64> = (0..dim)
        .map(|a| {
            let col = vectors.col(a);
            let s: f64 = (0..n_dip).map(|n| col[n].norm_sqr()).sum();
            s.clamp(0.0, 1.0)
        })
        .collect();
    let photon_content = exciton_content.iter().map(|p| 1.0 - p).collect();
    let omega = energies.iter().map(|e| e / HBAR).collect();

    Ok(Spectrum {
        basis,
        energies,
        omega,
        vectors,
        exciton_content,
        photon_content,
        max_residual,
    })
}

fn complex_path(h: MatRef<'_, c64>) -> Result<(Vec<f64>, Mat<c64>, f64)> {
    let n = h.nrows();
    let mut s = faer::diag::Diag::<c64>::zeros(n);
    let mut u = Mat::<c64>::zeros(n, n);
    let par = Par::Seq;
    let mut mem = MemBuffer::new(self_adjoint_evd_scratch::<c64>(
        n,
        ComputeEigenvectors::Yes,
        par,
        Default::default(),
    ));
    self_adjoint_evd(
        h,
        s.as_mut(),
        Some(u.as_mut()),
        par,
        MemStack::new(&mut mem),
        Default::default(),
    )
    .map_err(|e| Error::Convergence(format!("{e:?}")))?;
    let e: Vec<f64> = (0..n).map(|i| s[i].re).collect();

    let mut hv = Mat::<c64>::zeros(n, n);
    matmul(hv.as_mut(), Accum::Replace, h, u.as_ref(), c64::new(1.0, 0.0), par);
    let mut worst = 0.0f64;
    for a in 0..n {
        let r: f64 = (0..n)
            .map(|i| (hv[(i, a)] - u[(i, a)] * e[a]).norm_sqr())
            .sum();
        worst = worst.max(r.sqrt());
    }
    Ok((e, u, worst))
}

fn real_evd(a: MatRef<'_, f64>) -> Result<(Vec<f64>, Mat<f64>)> {
    let n = a.nrows();
    if is_diagonal(a) {
        // Uncoupled system: the eigenvalues are the diagonal itself, exactly.
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].total_cmp(&a[(j, j)]));
        let mut u = Mat::<f64>::zeros(n, n);
        for (col, &i) in order.iter().enumerate() {
            u[(i, col)] = 1.0;
        }
        return Ok((order.iter().map(|&i| a[(i, i)]).collect(), u));
    }
    let mut s = faer::diag::Diag::<f64>::zeros(n);
    let mut u = Mat::<f64>::zeros(n, n);
    let par = Par::Seq;
    let mut mem = MemBuffer::new(self_adjoint_evd_scratch::<f64>(
        n,
        ComputeEigenvectors::Yes,
        par,
        Default::default(),
    ));
    self_adjoint_evd(
        a,
        s.as_mut(),
        Some(u.as_mut()),
        par,
        MemStack::new(&mut mem),
        Default::default(),
    )
    .map_err(|e| Error::Convergence(format!("{e:?}")))?;
    Ok(((0..n).map(|i| s[i]).collect(), u))
}

fn is_diagonal(a: MatRef<'_, f64>) -> bool {
    (0..a.ncols()).all(|j| (0..a.nrows()).all(|i| i == j || a[(i, j)] == 0.0))
}

fn residual_real(a: MatRef<'_, f64>, e: &[f64], w: MatRef<'_, f64>) -> f64 {
    let n = a.nrows();
    let mut aw = Mat::<f64>::zeros(n, n);
    matmul(aw.as_mut(), Accum::Replace, a, w, 1.0, Par::Seq);
    let mut worst = 0.0f64;
    for j in 0..n {
        let r: f64 = (0..n).map(|i| (aw[(i, j)] - w[(i, j)] * e[j]).powi(2)).sum();
        worst = worst.max(r.sqrt());
    }
    worst
}

fn max_abs(m: MatRef<'_, c64>) -> f64 {
    let mut worst = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            worst = worst.max(m[(i, j)].norm());
        }
    }
    worst
}

/// Standing-wave rotation of ±q photon pairs.
///
/// Photon slot `+m` becomes `i(|+m⟩ + |−m⟩)/√2`, slot `−m` becomes
/// `(|+m⟩ − |−m⟩)/√2` and the `m = 0` slot becomes `i|0⟩`. Sites are untouched.
struct PairedModes {
    n_dipoles: usize,
    /// (index of +m, index of −m) in the full basis, m > 0.
    pairs: Vec<(usize, usize)>,
    /// Index of the m = 0 mode in the full basis.
    zero: Option<usize>,
}

/// Sparse column of the rotation.
#[derive(Clone, Copy)]
struct RotCol {
    entries: [(usize, c64); 2],
    len: usize,
    paired: bool,
}

impl PairedModes {
    fn detect(basis: &Basis) -> Option<Self> {
        let modes = &basis.modes;
        let n_dip = basis.n_dipoles;
        let mut pairs = Vec::new();
        let mut zero = None;
        for (k, mode) in modes.iter().enumerate() {
            if mode.m == 0 {
                zero = Some(n_dip + k);
            } else if mode.m > 0 {
                let partner = modes.iter().position(|o| o.m == -mode.m)?;
                pairs.push((n_dip + k, n_dip + partner));
            } else if !modes.iter().any(|o| o.m == -mode.m) {
                return None;
            }
        }
        Some(PairedModes {
            n_dipoles: n_dip,
            pairs,
            zero,
        })
    }

    /// Column of U for full-basis slot `j`: up to two unit phases, scaled by
    /// 1/√2 when the column mixes a pair. The scale is kept apart so that
    /// products of two scales are exact.
    fn column(&self, j: usize) -> RotCol {
        let one = c64::new(1.0, 0.0);
        let i = c64::new(0.0, 1.0);
        if j < self.n_dipoles {
            return RotCol { entries: [(j, one), (j, one)], len: 1, paired: false };
        }
        if Some(j) == self.zero {
            return RotCol { entries: [(j, i), (j, i)], len: 1, paired: false };
        }
        for &(p, m) in &self.pairs {
            if j == p {
                return RotCol { entries: [(p, i), (m, i)], len: 2, paired: true };
            }
            if j == m {
                return RotCol { entries: [(p, one), (m, -one)], len: 2, paired: true };
            }
        }
        unreachable!("every photon slot belongs to a pair or is the zero mode")
    }

    /// U† H U, if it is real to within rounding of `scale`.
    fn to_real(&self, h: MatRef<'_, c64>, scale: f64) -> Option<Mat<f64>> {
        let n = h.nrows();
        let cols: Vec<RotCol> = (0..n).map(|j| self.column(j)).collect();
        let tol = 8.0 * f64::EPSILON * scale;
        let mut out = Mat::<f64>::zeros(n, n);
        for b in 0..n {
            let cb = cols[b];
            for a in b..n {
                let ca = cols[a];
                let mut acc = c64::new(0.0, 0.0);
                for &(k, uka) in &ca.entries[..ca.len] {
                    for &(l, ulb) in &cb.entries[..cb.len] {
                        let hkl = h[(k, l)];
                        if hkl != c64::new(0.0, 0.0) {
                            acc += uka.conj() * hkl * ulb;
                        }
                    }
                }
                let factor = match (ca.paired, cb.paired) {
                    (true, true) => 0.5,
                    (false, false) => 1.0,
                    _ => FRAC_1_SQRT_2,
                };
                if acc.im.abs() * factor > tol {
                    return None;
                }
                out[(a, b)] = acc.re * factor;
                out[(b, a)] = acc.re * factor;
            }
        }
        Some(out)
    }

    /// V = U W.
    fn back_transform(&self, w: MatRef<'_, f64>) -> Mat<c64> {
        let n = w.nrows();
        let mut v = Mat::<c64>::zeros(n, n);
        let s = FRAC_1_SQRT_2;
        for a in 0..n {
            for i in 0..self.n_dipoles {
                v[(i, a)] = c64::new(w[(i, a)], 0.0);
            }
            if let Some(z) = self.zero {
                v[(z, a)] = c64::new(0.0, w[(z, a)]);
            }
            for &(p, m) in &self.pairs {
                let (wc, ws) = (w[(p, a)], w[(m, a)]);
                v[(p, a)] = c64::new(s * ws, s * wc);
                v[(m, a)] = c64::new(-s * ws, s * wc);
            }
        }
        v
    }
}
