//! Symplectic transforms: the linear part of every Gaussian unitary.
//!
//! A transform carries a 2n x 2n symplectic matrix plus a displacement
//! vector; acting on a state maps `mean -> S mean + d` and
//! `cov -> S cov Sᵀ`. Constructors are provided for the gates the protocol
//! needs: beamsplitters, the two-mode QND sum gate, the ∓3 dB squeezer pair,
//! and pure displacements.

use nalgebra::{DMatrix, DVector};
// Float trait supplies f64 math in no_std builds; on test builds the
// inherent std methods shadow it.
#[allow(unused_imports)]
use num_traits::Float;

use crate::conventions::{quad_index, symplectic_form, Quadrature, SYMPLECTIC_TOL};
use crate::error::{Error, Result};

/// Direction of the fixed −3 dB squeezer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SqueezeDirection {
    /// x → x/√2, p → √2 p (−3.0 dB on the x variance).
    Forward,
    /// The adjoint: x → √2 x, p → p/√2.
    Inverse,
}

/// Linear symplectic matrix plus displacement on n modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticTransform {
    matrix: DMatrix<f64>,
    displacement: DVector<f64>,
}

impl SymplecticTransform {
    /// Identity on `num_modes` modes.
    pub fn identity(num_modes: usize) -> Self {
        let dim = 2 * num_modes;
        Self {
            matrix: DMatrix::identity(dim, dim),
            displacement: DVector::zeros(dim),
        }
    }

    /// Builds a transform from explicit parts, validating the symplectic
    /// condition `S Ω Sᵀ = Ω` to within [`SYMPLECTIC_TOL`].
    pub fn from_parts(matrix: DMatrix<f64>, displacement: DVector<f64>) -> Result<Self> {
        let dim = matrix.nrows();
        if dim == 0 || !dim.is_multiple_of(2) || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: matrix.ncols(),
            });
        }
        if displacement.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: displacement.len(),
            });
        }
        let t = Self { matrix, displacement };
        let dev = t.symplectic_deviation();
        if dev > SYMPLECTIC_TOL {
            return Err(Error::NotSymplectic { max_deviation: dev });
        }
        Ok(t)
    }

    /// Beamsplitter on modes (i, j) with the stated reflectivity.
    ///
    /// Convention (both quadratures): `ξ_i' = √(1−R)·ξ_i − √R·ξ_j` and
    /// `ξ_j' = √R·ξ_i + √(1−R)·ξ_j`; at R = 1/2 this is
    /// `(ξ_i − ξ_j)/√2` and `(ξ_i + ξ_j)/√2`.
    pub fn beamsplitter(num_modes: usize, i: usize, j: usize, reflectivity: f64) -> Result<Self> {
        check_mode(i, num_modes)?;
        check_mode(j, num_modes)?;
        if i == j {
            return Err(Error::DuplicateMode { mode: i });
        }
        if !(reflectivity > 0.0 && reflectivity < 1.0) {
            return Err(Error::InvalidParameter {
                name: "reflectivity",
                value: reflectivity,
            });
        }
        let t = (1.0 - reflectivity).sqrt();
        let r = reflectivity.sqrt();
        let mut out = Self::identity(num_modes);
        for q in [Quadrature::X, Quadrature::P] {
            let a = quad_index(i, q);
            let b = quad_index(j, q);
            out.matrix[(a, a)] = t;
            out.matrix[(a, b)] = -r;
            out.matrix[(b, a)] = r;
            out.matrix[(b, b)] = t;
        }
        Ok(out)
    }

    /// Two-mode QND sum gate with the given gain.
    ///
    /// Heisenberg action: `x_target += gain · x_control`,
    /// `p_control −= gain · p_target`; the other quadratures are untouched.
    pub fn qnd_sum(num_modes: usize, control: usize, target: usize, gain: f64) -> Result<Self> {
        check_mode(control, num_modes)?;
        check_mode(target, num_modes)?;
        if control == target {
            return Err(Error::DuplicateMode { mode: control });
        }
        if !gain.is_finite() {
            return Err(Error::InvalidParameter { name: "gain", value: gain });
        }
        let mut out = Self::identity(num_modes);
        out.matrix[(quad_index(target, Quadrature::X), quad_index(control, Quadrature::X))] = gain;
        out.matrix[(quad_index(control, Quadrature::P), quad_index(target, Quadrature::P))] = -gain;
        Ok(out)
    }

    /// Fixed −3 dB squeezer on one mode (or its inverse).
    pub fn squeezer(num_modes: usize, mode: usize, direction: SqueezeDirection) -> Result<Self> {
        check_mode(mode, num_modes)?;
        let inv_sqrt2 = core::f64::consts::FRAC_1_SQRT_2;
        let sqrt2 = core::f64::consts::SQRT_2;
        let (sx, sp) = match direction {
            SqueezeDirection::Forward => (inv_sqrt2, sqrt2),
            SqueezeDirection::Inverse => (sqrt2, inv_sqrt2),
        };
        let mut out = Self::identity(num_modes);
        out.matrix[(quad_index(mode, Quadrature::X), quad_index(mode, Quadrature::X))] = sx;
        out.matrix[(quad_index(mode, Quadrature::P), quad_index(mode, Quadrature::P))] = sp;
        Ok(out)
    }

    /// Displacement of a single quadrature by `amount`; the matrix part is
    /// the identity.
    pub fn displace(
        num_modes: usize,
        mode: usize,
        quadrature: Quadrature,
        amount: f64,
    ) -> Result<Self> {
        check_mode(mode, num_modes)?;
        if !amount.is_finite() {
            return Err(Error::InvalidParameter { name: "amount", value: amount });
        }
        let mut out = Self::identity(num_modes);
        out.displacement[quad_index(mode, quadrature)] = amount;
        Ok(out)
    }

    /// Composition: apply `self` first, then `next`.
    pub fn then(&self, next: &SymplecticTransform) -> Result<Self> {
        if next.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: next.dim(),
            });
        }
        Ok(Self {
            matrix: &next.matrix * &self.matrix,
            displacement: &next.matrix * &self.displacement + &next.displacement,
        })
    }

    pub fn num_modes(&self) -> usize {
        self.dim() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn displacement(&self) -> &DVector<f64> {
        &self.displacement
    }

    /// Max absolute deviation of `S Ω Sᵀ` from Ω.
    pub fn symplectic_deviation(&self) -> f64 {
        let omega = symplectic_form(self.num_modes());
        let residual = &self.matrix * &omega * self.matrix.transpose() - omega;
        residual.abs().max()
    }

    pub fn is_symplectic(&self, tol: f64) -> bool {
        self.symplectic_deviation() <= tol
    }

    fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

fn check_mode(mode: usize, num_modes: usize) -> Result<()> {
    if mode < num_modes {
        Ok(())
    } else {
        Err(Error::ModeOutOfRange { mode, num_modes })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn builtin_transforms_are_symplectic() {
        let cases = vec![
            SymplecticTransform::beamsplitter(3, 0, 2, 0.5).unwrap(),
            SymplecticTransform::beamsplitter(2, 0, 1, 0.37).unwrap(),
            SymplecticTransform::qnd_sum(2, 0, 1, 1.0).unwrap(),
            SymplecticTransform::qnd_sum(2, 1, 0, -2.5).unwrap(),
            SymplecticTransform::squeezer(1, 0, SqueezeDirection::Forward).unwrap(),
            SymplecticTransform::squeezer(1, 0, SqueezeDirection::Inverse).unwrap(),
            SymplecticTransform::displace(2, 1, Quadrature::P, 0.7).unwrap(),
        ];
        for t in cases {
            assert!(t.symplectic_deviation() <= SYMPLECTIC_TOL);
        }
    }

    #[test]
    fn qnd_gain_zero_is_identity() {
        let t = SymplecticTransform::qnd_sum(2, 0, 1, 0.0).unwrap();
        assert_eq!(t.matrix(), SymplecticTransform::identity(2).matrix());
    }

    #[test]
    fn qnd_inverse_gain_cancels() {
        let fwd = SymplecticTransform::qnd_sum(2, 0, 1, 1.0).unwrap();
        let bwd = SymplecticTransform::qnd_sum(2, 0, 1, -1.0).unwrap();
        let id = fwd.then(&bwd).unwrap();
        let dev = (id.matrix() - SymplecticTransform::identity(2).matrix()).abs().max();
        assert!(dev == 0.0);
    }

    #[test]
    fn squeezer_round_trip() {
        let s = SymplecticTransform::squeezer(1, 0, SqueezeDirection::Forward).unwrap();
        let sd = SymplecticTransform::squeezer(1, 0, SqueezeDirection::Inverse).unwrap();
        let round = s.then(&sd).unwrap();
        let dev = (round.matrix() - SymplecticTransform::identity(1).matrix()).abs().max();
        assert!(dev < 1e-15);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(
            SymplecticTransform::beamsplitter(2, 0, 0, 0.5),
            Err(Error::DuplicateMode { .. })
        ));
        assert!(matches!(
            SymplecticTransform::beamsplitter(2, 0, 3, 0.5),
            Err(Error::ModeOutOfRange { .. })
        ));
        assert!(matches!(
            SymplecticTransform::beamsplitter(2, 0, 1, 1.0),
            Err(Error::InvalidParameter { .. })
        ));
        assert!(matches!(
            SymplecticTransform::qnd_sum(2, 1, 1, 1.0),
            Err(Error::DuplicateMode { .. })
        ));
    }

    #[test]
    fn from_parts_rejects_non_symplectic() {
        let bad = DMatrix::<f64>::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 2.0]);
        let err = SymplecticTransform::from_parts(bad, DVector::zeros(2));
        assert!(matches!(err, Err(Error::NotSymplectic { .. })));
    }
}
