//! Units, orderings, and sign conventions used by the whole engine.
//!
//! Everything downstream assumes the choices made here; tests pin them.
//!
//! - hbar = 1/2, so `[x_j, p_k] = i δ_jk / 2` and the vacuum variance of
//!   every quadrature (the shot noise level, SNL) is 1/4.
//! - Quadratures are interleaved: the phase-space vector of an n-mode state
//!   is `(x_1, p_1, ..., x_n, p_n)`, so each mode's 2x2 block is contiguous.
//! - The symplectic form is block diagonal, one `[[0, -1], [1, 0]]` block
//!   per mode. A transform `S` is symplectic iff `S Ω Sᵀ = Ω`; a covariance
//!   `V` is physical iff `V + (i/4) Ω ≥ 0`, i.e. every symplectic
//!   eigenvalue of `V` is at least 1/4.
//! - Balanced beamsplitter sign convention on modes (i, j):
//!   `ξ_i' = (ξ_i − ξ_j)/√2`, `ξ_j' = (ξ_i + ξ_j)/√2` for both x and p.
//!   General reflectivity R uses `√(1−R)` on the diagonal and `∓√R`/`+√R`
//!   off it.
//! - Squeezing in dB is a variance ratio: `dB = 10·log10(e^{−2r})`, so
//!   "−4 dB" means `e^{−2r} = 10^{−0.4}`.
//! - Quadrature powers are reported as `10·log10((mean² + variance)/SNL)`;
//!   the vacuum reads 0 dB.

use nalgebra::DMatrix;
// Float trait supplies f64 math in no_std builds; on test builds the
// inherent std methods shadow it.
#[allow(unused_imports)]
use num_traits::Float;

/// Vacuum variance of a single quadrature (shot noise level) with hbar = 1/2.
pub const SHOT_NOISE_VARIANCE: f64 = 0.25;

/// Default tolerance on the physicality bound for symplectic eigenvalues.
pub const PHYSICALITY_TOL: f64 = 1e-9;

/// Tolerance for covariance-matrix symmetry checks.
pub const SYMMETRY_TOL: f64 = 1e-10;

/// Tolerance for the symplectic defining property `S Ω Sᵀ = Ω`.
pub const SYMPLECTIC_TOL: f64 = 1e-12;

/// Cutoff below which a measured variance is treated as exactly zero during
/// homodyne conditioning (generalized-inverse regularization).
pub const PSEUDO_INVERSE_CUTOFF: f64 = 1e-12;

/// Quadrature label: position-like (x) or momentum-like (p).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Quadrature {
    X,
    P,
}

impl Quadrature {
    /// Offset of this quadrature inside a mode's 2-slot block.
    pub fn offset(self) -> usize {
        match self {
            Quadrature::X => 0,
            Quadrature::P => 1,
        }
    }

    /// The conjugate quadrature.
    pub fn conjugate(self) -> Self {
        match self {
            Quadrature::X => Quadrature::P,
            Quadrature::P => Quadrature::X,
        }
    }
}

/// Index of a quadrature inside the interleaved phase-space vector.
pub fn quad_index(mode: usize, quadrature: Quadrature) -> usize {
    2 * mode + quadrature.offset()
}

/// The symplectic form Ω for `num_modes` modes (interleaved ordering).
pub fn symplectic_form(num_modes: usize) -> DMatrix<f64> {
    let mut omega = DMatrix::zeros(2 * num_modes, 2 * num_modes);
    for m in 0..num_modes {
        omega[(2 * m, 2 * m + 1)] = -1.0;
        omega[(2 * m + 1, 2 * m)] = 1.0;
    }
    omega
}

/// Squeezing parameter r corresponding to a quoted level in dB.
///
/// Negative dB means squeezing below shot noise: `-4.0` maps to
/// `e^{−2r} = 10^{−0.4}`, r ≈ 0.4605.
pub fn r_from_squeezing_db(db: f64) -> f64 {
    -db * core::f64::consts::LN_10 / 20.0
}

/// Squeezed-quadrature variance ratio `e^{−2r}` quoted in dB.
pub fn squeezing_db_from_r(r: f64) -> f64 {
    10.0 * (-2.0 * r * core::f64::consts::LOG10_E)
}

/// Power (mean² + variance, in quadrature units) expressed in dB above the
/// shot noise level.
pub fn db_above_snl(power: f64) -> f64 {
    10.0 * (power / SHOT_NOISE_VARIANCE).log10()
}

/// Coherent amplitude whose quadrature power sits `db` above shot noise.
///
/// Inverts `mean² + SNL = SNL·10^{db/10}`; the stated input levels 11.0 dB
/// and 12.5 dB map to amplitudes ≈ 1.7021 and ≈ 2.0483.
pub fn coherent_amplitude_for_power_db(db: f64) -> f64 {
    (SHOT_NOISE_VARIANCE * ((10.0f64).powf(db / 10.0) - 1.0)).sqrt()
}
