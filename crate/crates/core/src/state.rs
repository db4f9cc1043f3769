//! Gaussian states over n bosonic modes: mean vector plus covariance matrix.
//!
//! States are immutable values; every operation returns a new state. The
//! covariance uses the symmetrized second central moments, so the vacuum is
//! `cov = (1/4)·I` in the hbar = 1/2 convention of [`crate::conventions`].

use alloc::vec::Vec;
// Float trait supplies f64 math in no_std builds; on test builds the
// inherent std methods shadow it.
#[allow(unused_imports)]
use num_traits::Float;
use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::conventions::{
    db_above_snl, quad_index, Quadrature, PHYSICALITY_TOL, PSEUDO_INVERSE_CUTOFF,
    SHOT_NOISE_VARIANCE, SYMMETRY_TOL,
};
use crate::entanglement;
use crate::error::{Error, Result};
use crate::transform::SymplecticTransform;

/// Single-mode squeezing: parameter r ≥ 0 along a chosen quadrature axis.
///
/// The squeezed-axis variance is `e^{−2r}/4`, the conjugate axis `e^{2r}/4`.
/// Levels quoted in dB follow the variance-ratio convention, so −4 dB means
/// `e^{−2r} = 10^{−0.4}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezingSpec {
    r: f64,
    axis: Quadrature,
}

impl SqueezingSpec {
    pub fn new(r: f64, axis: Quadrature) -> Result<Self> {
        if r < 0.0 || !r.is_finite() {
            return Err(Error::InvalidParameter { name: "r", value: r });
        }
        Ok(Self { r, axis })
    }

    /// Builds a squeezing spec from a level in dB (must be ≤ 0).
    pub fn from_db(db: f64, axis: Quadrature) -> Result<Self> {
        if db > 0.0 || !db.is_finite() {
            return Err(Error::InvalidParameter { name: "db", value: db });
        }
        Self::new(crate::conventions::r_from_squeezing_db(db), axis)
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn axis(&self) -> Quadrature {
        self.axis
    }

    /// Variance of the squeezed quadrature, `e^{−2r}/4`.
    pub fn squeezed_variance(&self) -> f64 {
        (-2.0 * self.r).exp() * SHOT_NOISE_VARIANCE
    }

    /// Variance of the conjugate quadrature, `e^{2r}/4`.
    pub fn anti_squeezed_variance(&self) -> f64 {
        (2.0 * self.r).exp() * SHOT_NOISE_VARIANCE
    }
}

/// Gaussian state: `mean` of length 2n and symmetric 2n x 2n `cov`, both in
/// the interleaved quadrature ordering `(x_1, p_1, ..., x_n, p_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    num_modes: usize,
    mean: DVector<f64>,
    cov: DMatrix<f64>,
}

impl GaussianState {
    /// The n-mode vacuum: zero mean, `cov = (1/4)·I`.
    pub fn vacuum(num_modes: usize) -> Result<Self> {
        if num_modes == 0 {
            return Err(Error::NoModes);
        }
        let dim = 2 * num_modes;
        Ok(Self {
            num_modes,
            mean: DVector::zeros(dim),
            cov: DMatrix::identity(dim, dim) * SHOT_NOISE_VARIANCE,
        })
    }

    /// Coherent state: vacuum covariance with the given mean vector.
    pub fn coherent(num_modes: usize, means: &[f64]) -> Result<Self> {
        let mut state = Self::vacuum(num_modes)?;
        if means.len() != 2 * num_modes {
            return Err(Error::DimensionMismatch {
                expected: 2 * num_modes,
                actual: means.len(),
            });
        }
        state.mean = DVector::from_row_slice(means);
        Ok(state)
    }

    /// Single-mode squeezed vacuum.
    pub fn squeezed_vacuum(spec: SqueezingSpec) -> Self {
        let (vx, vp) = match spec.axis() {
            Quadrature::X => (spec.squeezed_variance(), spec.anti_squeezed_variance()),
            Quadrature::P => (spec.anti_squeezed_variance(), spec.squeezed_variance()),
        };
        let mut cov = DMatrix::zeros(2, 2);
        cov[(0, 0)] = vx;
        cov[(1, 1)] = vp;
        Self { num_modes: 1, mean: DVector::zeros(2), cov }
    }

    /// Builds a state from explicit moments, validating symmetry (1e-10)
    /// and physicality (smallest symplectic eigenvalue ≥ 1/4 − 1e-9).
    pub fn from_parts(mean: DVector<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let dim = mean.len();
        if dim == 0 || !dim.is_multiple_of(2) {
            return Err(Error::NoModes);
        }
        if cov.nrows() != dim || cov.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: cov.nrows() });
        }
        let asym = symmetry_deviation(&cov);
        if asym > SYMMETRY_TOL {
            return Err(Error::NotSymmetric { max_deviation: asym });
        }
        let nu_min = entanglement::min_symplectic_eigenvalue(&cov)?;
        if nu_min < SHOT_NOISE_VARIANCE - PHYSICALITY_TOL {
            return Err(Error::Unphysical { nu_min });
        }
        Ok(Self { num_modes: dim / 2, mean, cov })
    }

    /// Internal constructor for moments produced by operations that preserve
    /// physicality by construction.
    pub(crate) fn from_parts_unchecked(mean: DVector<f64>, cov: DMatrix<f64>) -> Self {
        debug_assert_eq!(mean.len(), cov.nrows());
        debug_assert!(symmetry_deviation(&cov) <= 1e-8);
        Self { num_modes: mean.len() / 2, mean, cov }
    }

    /// Same state with the mean shifted by `delta` (classical displacement).
    pub(crate) fn shifted(&self, delta: &DVector<f64>) -> Self {
        debug_assert_eq!(delta.len(), self.mean.len());
        Self {
            num_modes: self.num_modes,
            mean: &self.mean + delta,
            cov: self.cov.clone(),
        }
    }

    pub fn num_modes(&self) -> usize {
        self.num_modes
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Mean of one quadrature.
    pub fn quad_mean(&self, mode: usize, quadrature: Quadrature) -> Result<f64> {
        self.check_mode(mode)?;
        Ok(self.mean[quad_index(mode, quadrature)])
    }

    /// Variance of one quadrature.
    pub fn quad_variance(&self, mode: usize, quadrature: Quadrature) -> Result<f64> {
        self.check_mode(mode)?;
        let k = quad_index(mode, quadrature);
        Ok(self.cov[(k, k)])
    }

    /// Tensor product: `self ⊗ other`, with `other`'s modes appended.
    pub fn tensor(&self, other: &GaussianState) -> Self {
        let d1 = 2 * self.num_modes;
        let d2 = 2 * other.num_modes;
        let mut mean = DVector::zeros(d1 + d2);
        let mut cov = DMatrix::zeros(d1 + d2, d1 + d2);
        mean.rows_mut(0, d1).copy_from(&self.mean);
        mean.rows_mut(d1, d2).copy_from(&other.mean);
        cov.view_mut((0, 0), (d1, d1)).copy_from(&self.cov);
        cov.view_mut((d1, d1), (d2, d2)).copy_from(&other.cov);
        Self { num_modes: self.num_modes + other.num_modes, mean, cov }
    }

    /// Applies a symplectic transform: `mean -> S mean + d`,
    /// `cov -> S cov Sᵀ` (re-symmetrized against rounding).
    pub fn apply(&self, t: &SymplecticTransform) -> Result<Self> {
        if t.num_modes() != self.num_modes {
            return Err(Error::DimensionMismatch {
                expected: 2 * self.num_modes,
                actual: 2 * t.num_modes(),
            });
        }
        let mean = t.matrix() * &self.mean + t.displacement();
        let mut cov = t.matrix() * &self.cov * t.matrix().transpose();
        resymmetrize(&mut cov);
        Ok(Self { num_modes: self.num_modes, mean, cov })
    }

    /// Homodyne detection of one quadrature with a fixed outcome.
    ///
    /// Returns the outcome together with the conditional state on the
    /// remaining modes: `mean += c (s − μ)/v`, `cov -= c cᵀ/v`, where `v` is
    /// the measured variance and `c` the cross-covariance column. A variance
    /// below [`PSEUDO_INVERSE_CUTOFF`] is treated as exactly zero
    /// (generalized inverse), in which case conditioning is a no-op and the
    /// measured mode is simply dropped.
    pub fn homodyne(
        &self,
        mode: usize,
        quadrature: Quadrature,
        outcome: f64,
    ) -> Result<(f64, GaussianState)> {
        self.check_mode(mode)?;
        if self.num_modes < 2 {
            return Err(Error::NoModes);
        }
        let k = quad_index(mode, quadrature);
        let v = self.cov[(k, k)];
        if v < -PSEUDO_INVERSE_CUTOFF {
            return Err(Error::NegativeMeasuredVariance { variance: v });
        }
        let inv_v = if v > PSEUDO_INVERSE_CUTOFF { 1.0 / v } else { 0.0 };

        let dim = 2 * self.num_modes;
        let keep: Vec<usize> = (0..dim).filter(|&q| q / 2 != mode).collect();
        let mut mean = DVector::zeros(keep.len());
        let mut cov = DMatrix::zeros(keep.len(), keep.len());
        let shift = (outcome - self.mean[k]) * inv_v;
        for (a, &qa) in keep.iter().enumerate() {
            mean[a] = self.mean[qa] + self.cov[(qa, k)] * shift;
            for (b, &qb) in keep.iter().enumerate() {
                cov[(a, b)] = self.cov[(qa, qb)] - self.cov[(qa, k)] * self.cov[(k, qb)] * inv_v;
            }
        }
        resymmetrize(&mut cov);
        Ok((outcome, GaussianState::from_parts_unchecked(mean, cov)))
    }

    /// Homodyne detection with the outcome drawn from the quadrature's
    /// Gaussian marginal.
    pub fn homodyne_sample<R: Rng + ?Sized>(
        &self,
        mode: usize,
        quadrature: Quadrature,
        rng: &mut R,
    ) -> Result<(f64, GaussianState)> {
        self.check_mode(mode)?;
        let k = quad_index(mode, quadrature);
        let v = self.cov[(k, k)];
        if v < -PSEUDO_INVERSE_CUTOFF {
            return Err(Error::NegativeMeasuredVariance { variance: v });
        }
        let sigma = v.max(0.0).sqrt();
        let z: f64 = rng.sample(StandardNormal);
        self.homodyne(mode, quadrature, self.mean[k] + sigma * z)
    }

    /// Pure-loss channel with transmissivity `eta` on one mode.
    ///
    /// Means scale by `√η`; the mode's covariance block becomes
    /// `η·block + (1−η)·(1/4)·I`; cross blocks scale by `√η`. `eta = 1` is
    /// the identity and `eta = 0` replaces the mode by vacuum.
    pub fn loss_channel(&self, mode: usize, eta: f64) -> Result<Self> {
        self.check_mode(mode)?;
        if !(0.0..=1.0).contains(&eta) {
            return Err(Error::InvalidParameter { name: "eta", value: eta });
        }
        let sqrt_eta = eta.sqrt();
        let dim = 2 * self.num_modes;
        let mut mean = self.mean.clone();
        let mut cov = self.cov.clone();
        for q in [quad_index(mode, Quadrature::X), quad_index(mode, Quadrature::P)] {
            mean[q] *= sqrt_eta;
            for other in 0..dim {
                if other / 2 != mode {
                    cov[(q, other)] *= sqrt_eta;
                    cov[(other, q)] *= sqrt_eta;
                }
            }
        }
        let (x, p) = (quad_index(mode, Quadrature::X), quad_index(mode, Quadrature::P));
        for (a, b) in [(x, x), (x, p), (p, x), (p, p)] {
            cov[(a, b)] *= eta;
        }
        cov[(x, x)] += (1.0 - eta) * SHOT_NOISE_VARIANCE;
        cov[(p, p)] += (1.0 - eta) * SHOT_NOISE_VARIANCE;
        Ok(Self { num_modes: self.num_modes, mean, cov })
    }

    /// Quadrature power `mean² + variance`, reported in dB above shot noise.
    pub fn power_db(&self, mode: usize, quadrature: Quadrature) -> Result<f64> {
        let m = self.quad_mean(mode, quadrature)?;
        let v = self.quad_variance(mode, quadrature)?;
        Ok(db_above_snl(m * m + v))
    }

    /// Draws one joint phase-space sample from the state's Wigner
    /// distribution (positive for Gaussian states): `mean + L z` with
    /// `L Lᵀ = cov`.
    pub fn sample_quadratures<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<DVector<f64>> {
        let chol = nalgebra::Cholesky::new(self.cov.clone()).ok_or(Error::SingularCovariance)?;
        let z = DVector::from_fn(2 * self.num_modes, |_, _| rng.sample(StandardNormal));
        Ok(&self.mean + chol.l() * z)
    }

    fn check_mode(&self, mode: usize) -> Result<()> {
        if mode < self.num_modes {
            Ok(())
        } else {
            Err(Error::ModeOutOfRange { mode, num_modes: self.num_modes })
        }
    }
}

fn symmetry_deviation(m: &DMatrix<f64>) -> f64 {
    (m - m.transpose()).abs().max()
}

fn resymmetrize(m: &mut DMatrix<f64>) {
    let sym = (&*m + m.transpose()) * 0.5;
    m.copy_from(&sym);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_is_quarter_identity() {
        let st = GaussianState::vacuum(2).unwrap();
        assert_eq!(st.mean().as_slice(), &[0.0; 4]);
        assert_eq!(st.cov(), &(DMatrix::identity(4, 4) * 0.25));
        assert_eq!(st.quad_variance(0, Quadrature::X).unwrap(), 0.25);
        assert!(matches!(GaussianState::vacuum(0), Err(Error::NoModes)));
    }

    #[test]
    fn vacuum_of_three_modes() {
        let st = GaussianState::vacuum(3).unwrap();
        assert_eq!(st.quad_variance(0, Quadrature::X).unwrap(), 0.25);
        assert_eq!(st.quad_variance(2, Quadrature::P).unwrap(), 0.25);
    }

    #[test]
    fn squeezed_vacuum_minus_four_db() {
        let spec = SqueezingSpec::from_db(-4.0, Quadrature::X).unwrap();
        let st = GaussianState::squeezed_vacuum(spec);
        let vx = st.quad_variance(0, Quadrature::X).unwrap();
        let vp = st.quad_variance(0, Quadrature::P).unwrap();
        assert!((vx - 0.25 * (10.0f64).powf(-0.4)).abs() < 1e-14);
        assert!((vp - 0.25 * (10.0f64).powf(0.4)).abs() < 1e-14);
        // rounded values quoted elsewhere (0.6281 is itself a rounding of
        // 0.0625/0.0995, hence the looser band)
        assert!((vx - 0.0995).abs() < 1e-4);
        assert!((vp - 0.6281).abs() < 2.5e-4);
    }

    #[test]
    fn squeezed_vacuum_is_pure_for_any_r() {
        for r in [0.0, 0.3, 1.0, 2.5] {
            let spec = SqueezingSpec::new(r, Quadrature::P).unwrap();
            let st = GaussianState::squeezed_vacuum(spec);
            let det4 = (st.cov() * 4.0).determinant();
            assert!((det4 - 1.0).abs() < 1e-12, "det(4 cov) = {det4} at r = {r}");
        }
    }

    #[test]
    fn zero_squeezing_is_vacuum() {
        let spec = SqueezingSpec::new(0.0, Quadrature::X).unwrap();
        assert_eq!(
            GaussianState::squeezed_vacuum(spec).cov(),
            GaussianState::vacuum(1).unwrap().cov()
        );
    }

    #[test]
    fn coherent_rejects_length_mismatch() {
        assert!(matches!(
            GaussianState::coherent(2, &[1.0, 0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
        let st = GaussianState::coherent(2, &[0.0; 4]).unwrap();
        assert_eq!(&st, &GaussianState::vacuum(2).unwrap());
    }

    #[test]
    fn power_db_examples() {
        let vac = GaussianState::vacuum(1).unwrap();
        assert_eq!(vac.power_db(0, Quadrature::X).unwrap(), 0.0);

        let coh = GaussianState::coherent(1, &[1.702_149_678_931_15, 0.0]).unwrap();
        assert!((coh.power_db(0, Quadrature::X).unwrap() - 11.0).abs() < 1e-12);

        // variance doubled, no displacement: 3.01 dB
        let mut cov = DMatrix::identity(2, 2) * 0.25;
        cov[(0, 0)] = 0.5;
        let st = GaussianState::from_parts(DVector::zeros(2), cov).unwrap();
        assert!((st.power_db(0, Quadrature::X).unwrap() - 3.0103).abs() < 1e-4);
    }

    #[test]
    fn displacement_moves_means_only() {
        let vac = GaussianState::vacuum(1).unwrap();
        let x = SymplecticTransform::displace(1, 0, Quadrature::X, 0.7).unwrap();
        let st = vac.apply(&x).unwrap();
        assert_eq!(st.quad_mean(0, Quadrature::X).unwrap(), 0.7);
        assert_eq!(st.cov(), vac.cov());

        let back = SymplecticTransform::displace(1, 0, Quadrature::X, -0.7).unwrap();
        let st2 = st.apply(&back).unwrap();
        assert_eq!(&st2, &vac);
    }

    #[test]
    fn loss_channel_limits() {
        let spec = SqueezingSpec::from_db(-4.0, Quadrature::X).unwrap();
        let st = GaussianState::squeezed_vacuum(spec);
        assert_eq!(&st.loss_channel(0, 1.0).unwrap(), &st);

        let dark = st.loss_channel(0, 0.0).unwrap();
        assert_eq!(&dark, &GaussianState::vacuum(1).unwrap());

        let lossy = st.loss_channel(0, 0.9).unwrap();
        let expect = 0.9 * st.quad_variance(0, Quadrature::X).unwrap() + 0.1 * 0.25;
        assert!((lossy.quad_variance(0, Quadrature::X).unwrap() - expect).abs() < 1e-15);
        assert!((expect - 0.1146).abs() < 5e-5);

        assert!(matches!(st.loss_channel(0, 1.2), Err(Error::InvalidParameter { .. })));
    }

    #[test]
    fn homodyne_on_uncorrelated_modes_leaves_vacuum() {
        let st = GaussianState::vacuum(2).unwrap();
        let (s, rest) = st.homodyne(0, Quadrature::X, 1.3).unwrap();
        assert_eq!(s, 1.3);
        assert_eq!(&rest, &GaussianState::vacuum(1).unwrap());
    }

    #[test]
    fn homodyne_rejects_single_mode() {
        let st = GaussianState::vacuum(1).unwrap();
        assert!(st.homodyne(0, Quadrature::X, 0.0).is_err());
    }

    #[test]
    fn from_parts_validates() {
        let bad_sym = DMatrix::from_row_slice(2, 2, &[0.25, 0.1, 0.0, 0.25]);
        assert!(matches!(
            GaussianState::from_parts(DVector::zeros(2), bad_sym),
            Err(Error::NotSymmetric { .. })
        ));
        let unphysical = DMatrix::from_row_slice(2, 2, &[0.1, 0.0, 0.0, 0.1]);
        assert!(matches!(
            GaussianState::from_parts(DVector::zeros(2), unphysical),
            Err(Error::Unphysical { .. })
        ));
    }
}
