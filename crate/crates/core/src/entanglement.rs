//! Entanglement and physicality diagnostics for Gaussian covariance
//! matrices: symplectic spectra, the uncertainty-bound check, and
//! logarithmic negativity of two-mode states.
//!
//! The symplectic eigenvalues of a positive-definite covariance V are the
//! moduli of the eigenvalues of `i Ω V`. Numerically we avoid the
//! non-normal matrix `Ω V` altogether: with `W = V^{1/2}`, `Ω V` is similar
//! to the antisymmetric `M = W Ω W`, and the eigenvalues of the symmetric
//! positive matrix `Mᵀ M` are the squared symplectic eigenvalues, each
//! doubled. Two symmetric eigendecompositions therefore suffice, which
//! stays robust for the degenerate spectra this gate produces.
//!
//! Logarithmic negativity uses the natural logarithm,
//! `E_N = max(0, −ln 4ν̃₋)`, fixed by the ideal-gate value
//! `−ln(√2 − 1) ≈ 0.8814`; base 2 would contradict it.

use alloc::vec::Vec;
// Float trait supplies f64 math in no_std builds; on test builds the
// inherent std methods shadow it.
#[allow(unused_imports)]
use num_traits::Float;
use nalgebra::{DMatrix, Matrix2};

use crate::conventions::{SHOT_NOISE_VARIANCE, SYMMETRY_TOL};
use crate::error::{Error, Result};
use crate::state::GaussianState;

/// Symplectic eigenvalues of a symmetric positive-definite covariance,
/// sorted ascending; a physical n-mode state yields n values ≥ 1/4.
pub fn symplectic_eigenvalues(cov: &DMatrix<f64>) -> Result<Vec<f64>> {
    let dim = cov.nrows();
    if dim == 0 || !dim.is_multiple_of(2) || cov.ncols() != dim {
        return Err(Error::DimensionMismatch { expected: dim, actual: cov.ncols() });
    }
    let asym = (cov - cov.transpose()).abs().max();
    if asym > SYMMETRY_TOL {
        return Err(Error::NotSymmetric { max_deviation: asym });
    }

    let eig = cov.clone().symmetric_eigen();
    let min_eig = eig.eigenvalues.min();
    if min_eig <= 0.0 {
        return Err(Error::NotPositiveDefinite { min_eigenvalue: min_eig });
    }
    // W = V^{1/2} via the spectral decomposition.
    let mut sqrt_diag = DMatrix::zeros(dim, dim);
    for k in 0..dim {
        sqrt_diag[(k, k)] = eig.eigenvalues[k].sqrt();
    }
    let w = &eig.eigenvectors * sqrt_diag * eig.eigenvectors.transpose();
    let m = &w * crate::conventions::symplectic_form(dim / 2) * &w;
    let mut k = m.transpose() * &m;
    let sym = (&k + k.transpose()) * 0.5;
    k.copy_from(&sym);

    let mut squared: Vec<f64> = k.symmetric_eigen().eigenvalues.iter().copied().collect();
    squared.sort_unstable_by(|a, b| a.partial_cmp(b).expect("non-NaN eigenvalues"));
    // Eigenvalues come in identical pairs; average each pair to suppress
    // rounding noise.
    let nus = squared
        .chunks_exact(2)
        .map(|pair| (0.5 * (pair[0] + pair[1])).max(0.0).sqrt())
        .collect();
    Ok(nus)
}

/// Smallest symplectic eigenvalue (convenience wrapper).
pub fn min_symplectic_eigenvalue(cov: &DMatrix<f64>) -> Result<f64> {
    Ok(symplectic_eigenvalues(cov)?[0])
}

/// Checks the uncertainty bound `V + (i/4) Ω ≥ 0`: true iff `cov` is
/// symmetric, positive definite, and its smallest symplectic eigenvalue is
/// at least `1/4 − tol`.
pub fn is_physical(cov: &DMatrix<f64>, tol: f64) -> bool {
    match min_symplectic_eigenvalue(cov) {
        Ok(nu_min) => nu_min >= SHOT_NOISE_VARIANCE - tol,
        Err(_) => false,
    }
}

/// Two-mode covariance in block form `[[A, C], [Cᵀ, B]]`, where A and B are
/// the per-mode 2x2 blocks and C the cross block.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoModeCovariance {
    matrix: DMatrix<f64>,
}

impl TwoModeCovariance {
    pub fn from_matrix(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != 4 || matrix.ncols() != 4 {
            return Err(Error::DimensionMismatch { expected: 4, actual: matrix.nrows() });
        }
        let asym = (&matrix - matrix.transpose()).abs().max();
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric { max_deviation: asym });
        }
        Ok(Self { matrix })
    }

    pub fn from_state(state: &GaussianState) -> Result<Self> {
        if state.num_modes() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                actual: 2 * state.num_modes(),
            });
        }
        Self::from_matrix(state.cov().clone())
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn block_a(&self) -> Matrix2<f64> {
        self.matrix.fixed_view::<2, 2>(0, 0).into()
    }

    pub fn block_b(&self) -> Matrix2<f64> {
        self.matrix.fixed_view::<2, 2>(2, 2).into()
    }

    pub fn block_c(&self) -> Matrix2<f64> {
        self.matrix.fixed_view::<2, 2>(0, 2).into()
    }

    /// Phase-space partial transpose: flips the sign of the chosen mode's
    /// momentum row and column.
    pub fn partial_transpose(&self, mode: usize) -> Result<DMatrix<f64>> {
        if mode > 1 {
            return Err(Error::ModeOutOfRange { mode, num_modes: 2 });
        }
        let p = 2 * mode + 1;
        let mut out = self.matrix.clone();
        for k in 0..4 {
            out[(p, k)] = -out[(p, k)];
            out[(k, p)] = -out[(k, p)];
        }
        Ok(out)
    }
}

/// Logarithmic negativity of a two-mode Gaussian state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NegativityResult {
    /// `E_N = max(0, −ln 4ν̃₋)`, in natural-log units.
    pub log_negativity: f64,
    /// Smallest symplectic eigenvalue of the partially transposed
    /// covariance; entanglement iff below 1/4.
    pub nu_tilde_minus: f64,
}

/// Computes the logarithmic negativity of a physical two-mode covariance by
/// partial transposition of the second mode.
pub fn log_negativity(cov: &TwoModeCovariance) -> Result<NegativityResult> {
    let nu_min = min_symplectic_eigenvalue(cov.matrix())?;
    if nu_min < SHOT_NOISE_VARIANCE - crate::conventions::PHYSICALITY_TOL {
        return Err(Error::Unphysical { nu_min });
    }
    let pt = cov.partial_transpose(1)?;
    let nu_tilde_minus = min_symplectic_eigenvalue(&pt)?;
    let log_negativity = (-(4.0 * nu_tilde_minus).ln()).max(0.0);
    Ok(NegativityResult { log_negativity, nu_tilde_minus })
}

/// Closed-form log-negativity of the parallel gate's output for vacuum
/// inputs with resource squeezing r: `−ln(√(2(1 + e^{−2r})) − 1)`, floored
/// at zero. Accepts `r = ∞` for the ideal gate (0.8814).
pub fn qnd_negativity_analytic(r: f64) -> f64 {
    let e2r = (-2.0 * r).exp();
    (-((2.0 * (1.0 + e2r)).sqrt() - 1.0).ln()).max(0.0)
}
