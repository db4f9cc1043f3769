//! Engine-level checks for states, transforms, homodyne conditioning, and
//! loss channels, including independent brute-force oracles for the
//! Gaussian conditioning rule.

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use qndsim_core::conventions::{self, SYMPLECTIC_TOL};
use qndsim_core::protocol::{entangling_transform, make_epr};
use qndsim_core::{
    GaussianState, Quadrature, SqueezeDirection, SqueezingSpec, SymplecticTransform,
};

const MINUS_4_DB: f64 = 0.460_517_018_598_809_2; // r with e^{-2r} = 10^{-0.4}

fn max_abs_diff(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    (a - b).abs().max()
}

#[test]
fn balanced_beamsplitter_leaves_vacuum_invariant() {
    let vac = GaussianState::vacuum(2).unwrap();
    let bs = SymplecticTransform::beamsplitter(2, 0, 1, 0.5).unwrap();
    let out = vac.apply(&bs).unwrap();
    assert!(max_abs_diff(out.cov(), vac.cov()) < 1e-15);
    assert_eq!(out.mean(), vac.mean());
}

#[test]
fn beamsplitter_squeezed_pair_gives_epr_correlations() {
    // x-squeezed ⊗ p-squeezed through the balanced coupling used for the
    // resource: var(x_E1 − x_E2) = var(p_E1 + p_E2) = e^{−2r}/2.
    for r in [0.2, MINUS_4_DB, 1.5] {
        let epr = make_epr(r).unwrap();
        let v = epr.cov();
        let e2r = (-2.0_f64 * r).exp();
        let var_x_diff = v[(0, 0)] + v[(2, 2)] - 2.0 * v[(0, 2)];
        let var_p_sum = v[(1, 1)] + v[(3, 3)] + 2.0 * v[(1, 3)];
        assert!((var_x_diff - e2r / 2.0).abs() < 1e-13, "r = {r}");
        assert!((var_p_sum - e2r / 2.0).abs() < 1e-13, "r = {r}");
    }
    // -4 dB: 0.199 in absolute units
    let epr = make_epr(MINUS_4_DB).unwrap();
    let v = epr.cov();
    let var_x_diff = v[(0, 0)] + v[(2, 2)] - 2.0 * v[(0, 2)];
    assert!((var_x_diff - 0.199).abs() < 1e-3);
}

#[test]
fn beamsplitter_is_symplectic_for_any_reflectivity() {
    for reflectivity in [0.1, 0.25, 0.5, 0.73, 0.95] {
        let bs = SymplecticTransform::beamsplitter(3, 1, 2, reflectivity).unwrap();
        assert!(bs.symplectic_deviation() <= SYMPLECTIC_TOL);
    }
}

#[test]
fn qnd_sum_first_moments() {
    let input = GaussianState::coherent(2, &[1.0, 0.0, 0.0, 0.0]).unwrap();
    let gate = SymplecticTransform::qnd_sum(2, 0, 1, 1.0).unwrap();
    let out = input.apply(&gate).unwrap();
    assert_eq!(out.mean().as_slice(), &[1.0, 0.0, 1.0, 0.0]);
}

#[test]
fn qnd_sum_back_action_on_vacuum() {
    let vac = GaussianState::vacuum(2).unwrap();
    let gate = SymplecticTransform::qnd_sum(2, 0, 1, 1.0).unwrap();
    let out = vac.apply(&gate).unwrap();
    assert!((out.quad_variance(0, Quadrature::X).unwrap() - 0.25).abs() < 1e-15);
    assert!((out.quad_variance(0, Quadrature::P).unwrap() - 0.5).abs() < 1e-15);
    assert!((out.quad_variance(1, Quadrature::X).unwrap() - 0.5).abs() < 1e-15);
    assert!((out.quad_variance(1, Quadrature::P).unwrap() - 0.25).abs() < 1e-15);
}

#[test]
fn squeezer_level_is_minus_three_db() {
    let vac = GaussianState::vacuum(1).unwrap();
    let s = SymplecticTransform::squeezer(1, 0, SqueezeDirection::Forward).unwrap();
    let out = vac.apply(&s).unwrap();
    assert!((out.quad_variance(0, Quadrature::X).unwrap() - 0.125).abs() < 1e-15);
    let db = out.power_db(0, Quadrature::X).unwrap();
    assert!((db + 3.0103).abs() < 1e-4);
}

#[test]
fn entangling_matrix_factors_into_squeezers_and_qnd() {
    // The gate's input-output matrix equals (inverse −3 dB squeezer on α) ∘
    // (−3 dB squeezer on β) ∘ (QND sum), applied in that composition order.
    let qnd = SymplecticTransform::qnd_sum(2, 0, 1, 1.0).unwrap();
    let s_alpha_dag = SymplecticTransform::squeezer(2, 0, SqueezeDirection::Inverse).unwrap();
    let s_beta = SymplecticTransform::squeezer(2, 1, SqueezeDirection::Forward).unwrap();
    let composed = qnd.then(&s_beta).unwrap().then(&s_alpha_dag).unwrap();
    let direct = entangling_transform();
    assert_eq!(composed.matrix(), direct.matrix());
    assert!(direct.symplectic_deviation() <= SYMPLECTIC_TOL);
}

#[test]
fn entangling_matrix_on_vacua_plus_noise_reproduces_output_covariance() {
    let vac = GaussianState::vacuum(2).unwrap();
    let out = vac.apply(&entangling_transform()).unwrap();
    let e2r = (-2.0_f64 * MINUS_4_DB).exp();
    let mut expected = out.cov().clone();
    expected[(1, 1)] += e2r / 4.0;
    expected[(2, 2)] += e2r / 4.0;
    // matches (1/4)·[[2,0,1,0],[0,1+e,0,−1],[1,0,1+e,0],[0,−1,0,2]]
    let reference = DMatrix::from_row_slice(
        4,
        4,
        &[
            2.0, 0.0, 1.0, 0.0, //
            0.0, 1.0 + e2r, 0.0, -1.0, //
            1.0, 0.0, 1.0 + e2r, 0.0, //
            0.0, -1.0, 0.0, 2.0,
        ],
    ) * 0.25;
    assert!(max_abs_diff(&expected, &reference) < 1e-15);
}

#[test]
fn apply_preserves_symplectic_spectrum() {
    let spec = SqueezingSpec::new(0.8, Quadrature::X).unwrap();
    let st = GaussianState::squeezed_vacuum(spec)
        .tensor(&GaussianState::vacuum(1).unwrap())
        .loss_channel(0, 0.85)
        .unwrap();
    let before = qndsim_core::entanglement::symplectic_eigenvalues(st.cov()).unwrap();
    let word = SymplecticTransform::beamsplitter(2, 0, 1, 0.3)
        .unwrap()
        .then(&SymplecticTransform::qnd_sum(2, 1, 0, 0.7).unwrap())
        .unwrap()
        .then(&SymplecticTransform::squeezer(2, 0, SqueezeDirection::Forward).unwrap())
        .unwrap();
    let after_state = st.apply(&word).unwrap();
    let after = qndsim_core::entanglement::symplectic_eigenvalues(after_state.cov()).unwrap();
    for (a, b) in before.iter().zip(after.iter()) {
        assert!((a - b).abs() < 1e-10);
    }
}

// --- homodyne conditioning -------------------------------------------------

#[test]
fn epr_conditional_mean_matches_closed_form() {
    // Measuring x on one EPR half at outcome s steers the other half's x to
    // s·tanh(2r).
    for r in [0.3, MINUS_4_DB, 1.1] {
        let epr = make_epr(r).unwrap();
        for s in [-1.4, 0.0, 2.2] {
            let (_, rest) = epr.homodyne(0, Quadrature::X, s).unwrap();
            let expected = s * (2.0 * r).tanh();
            let got = rest.quad_mean(0, Quadrature::X).unwrap();
            assert!((got - expected).abs() < 1e-12, "r = {r}, s = {s}");
        }
    }
}

#[test]
fn epr_conditional_mean_matches_rejection_sampling_oracle() {
    // Brute-force check of the conditioning rule: sample the bivariate
    // marginal (x_E1, x_E2), keep pairs with x_E1 near s, and average x_E2.
    let r = MINUS_4_DB;
    let epr = make_epr(r).unwrap();
    let v = epr.cov();
    let (v11, v12, v22) = (v[(0, 0)], v[(0, 2)], v[(2, 2)]);
    let chol_a = v11.sqrt();
    let chol_b = v12 / chol_a;
    let chol_c = (v22 - chol_b * chol_b).sqrt();

    let s_target = 0.8;
    let window = 0.02;
    let mut rng = ChaCha12Rng::seed_from_u64(421);
    let mut kept = 0usize;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..3_000_000 {
        let z1: f64 = rng.sample(StandardNormal);
        let z2: f64 = rng.sample(StandardNormal);
        let x1 = chol_a * z1;
        let x2 = chol_b * z1 + chol_c * z2;
        if (x1 - s_target).abs() < window {
            kept += 1;
            sum += x2;
            sum_sq += x2 * x2;
        }
    }
    assert!(kept > 10_000, "rejection window too tight: {kept}");
    let empirical_mean = sum / kept as f64;
    let empirical_var = sum_sq / kept as f64 - empirical_mean * empirical_mean;
    let std_err = (empirical_var / kept as f64).sqrt();

    let (_, rest) = epr.homodyne(0, Quadrature::X, s_target).unwrap();
    let predicted = rest.quad_mean(0, Quadrature::X).unwrap();
    assert!(
        (empirical_mean - predicted).abs() < 3.0 * std_err + window * window,
        "oracle mean {empirical_mean} vs predicted {predicted} (3σ = {})",
        3.0 * std_err
    );
    let predicted_var = rest.quad_variance(0, Quadrature::X).unwrap();
    assert!((empirical_var - predicted_var).abs() < 0.01);
}

#[test]
fn conditioned_covariance_is_outcome_independent() {
    let epr = make_epr(0.9).unwrap();
    let (_, rest_a) = epr.homodyne(0, Quadrature::X, -3.0).unwrap();
    let (_, rest_b) = epr.homodyne(0, Quadrature::X, 5.5).unwrap();
    assert_eq!(rest_a.cov(), rest_b.cov());
    assert_ne!(rest_a.mean(), rest_b.mean());
}

#[test]
fn sampled_homodyne_outcomes_match_marginal_statistics() {
    let n = 100_000usize;
    let epr = make_epr(MINUS_4_DB).unwrap();
    let marginal_var = epr.quad_variance(0, Quadrature::X).unwrap();
    let mut rng = ChaCha12Rng::seed_from_u64(7);
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n {
        let (s, _) = epr.homodyne_sample(0, Quadrature::X, &mut rng).unwrap();
        sum += s;
        sum_sq += s * s;
    }
    let mean = sum / n as f64;
    let var = sum_sq / n as f64 - mean * mean;
    // standard errors: σ/√N for the mean, var·√(2/N) for the variance
    let se_mean = (marginal_var / n as f64).sqrt();
    let se_var = marginal_var * (2.0 / n as f64).sqrt();
    assert!(mean.abs() < 3.0 * se_mean, "mean {mean} vs 3σ {}", 3.0 * se_mean);
    assert!((var - marginal_var).abs() < 3.0 * se_var);
}

#[test]
fn homodyne_handles_deterministic_quadrature() {
    // Conditioning on a quadrature with (numerically) zero variance must
    // degrade gracefully instead of dividing by zero: squeeze hard and
    // measure the squeezed axis.
    let spec = SqueezingSpec::new(16.0, Quadrature::X).unwrap();
    let st = GaussianState::squeezed_vacuum(spec).tensor(&GaussianState::vacuum(1).unwrap());
    let (s, rest) = st.homodyne(0, Quadrature::X, 0.0).unwrap();
    assert_eq!(s, 0.0);
    assert_eq!(&rest, &GaussianState::vacuum(1).unwrap());
}

// --- loss channels ----------------------------------------------------------

#[test]
fn loss_channels_compose_multiplicatively() {
    let spec = SqueezingSpec::from_db(-4.0, Quadrature::X).unwrap();
    let st = GaussianState::squeezed_vacuum(spec)
        .tensor(&GaussianState::coherent(1, &[0.9, -0.4]).unwrap());
    let twice = st.loss_channel(1, 0.8).unwrap().loss_channel(1, 0.7).unwrap();
    let once = st.loss_channel(1, 0.8 * 0.7).unwrap();
    assert!(max_abs_diff(twice.cov(), once.cov()) < 1e-14);
    assert!((twice.mean() - once.mean()).abs().max() < 1e-14);
}

#[test]
fn loss_preserves_physicality() {
    let spec = SqueezingSpec::new(2.0, Quadrature::P).unwrap();
    let st = GaussianState::squeezed_vacuum(spec);
    for eta in [0.0, 0.1, 0.5, 0.99, 1.0] {
        let lossy = st.loss_channel(0, eta).unwrap();
        assert!(qndsim_core::entanglement::is_physical(lossy.cov(), 1e-9), "eta = {eta}");
    }
}

// --- serialization-free sanity of sampling ----------------------------------

#[test]
fn phase_space_sampling_reproduces_moments() {
    let st = GaussianState::coherent(1, &[1.2, -0.3])
        .unwrap()
        .tensor(&GaussianState::squeezed_vacuum(
            SqueezingSpec::new(0.6, Quadrature::X).unwrap(),
        ));
    let n = 60_000usize;
    let mut rng = ChaCha12Rng::seed_from_u64(99);
    let mut mean = DVector::<f64>::zeros(4);
    let mut second = DMatrix::<f64>::zeros(4, 4);
    for _ in 0..n {
        let q = st.sample_quadratures(&mut rng).unwrap();
        mean += &q;
        second += &q * q.transpose();
    }
    mean /= n as f64;
    second /= n as f64;
    let cov = second - &mean * mean.transpose();
    assert!((mean - st.mean()).abs().max() < 0.02);
    assert!(max_abs_diff(&cov, st.cov()) < 0.02);
}

// quadrature ordering convention pin: x then p within each mode
#[test]
fn quadrature_indexing_convention() {
    assert_eq!(conventions::quad_index(0, Quadrature::X), 0);
    assert_eq!(conventions::quad_index(0, Quadrature::P), 1);
    assert_eq!(conventions::quad_index(2, Quadrature::X), 4);
    let coh = GaussianState::coherent(2, &[1.0, 2.0, 3.0, 4.0]).unwrap();
    assert_eq!(coh.quad_mean(1, Quadrature::P).unwrap(), 4.0);
}
