//! Diagnostics-level checks: the numeric negativity against its closed-form
//! oracle, invariance properties, and the physicality boundary.

use nalgebra::DMatrix;

use qndsim_core::entanglement::{
    is_physical, log_negativity, qnd_negativity_analytic, symplectic_eigenvalues,
    TwoModeCovariance,
};
use qndsim_core::protocol::{parallel_gate, RunMode};
use qndsim_core::{GaussianState, SqueezeDirection, SymplecticTransform};

const MINUS_4_DB: f64 = 0.460_517_018_598_809_2;

fn gate_output_cov(r: f64) -> TwoModeCovariance {
    let vac = GaussianState::vacuum(2).unwrap();
    let run = parallel_gate(&vac, r, RunMode::Analytic, None).unwrap();
    TwoModeCovariance::from_state(&run.output).unwrap()
}

#[test]
fn numeric_negativity_equals_closed_form_over_r_sweep() {
    for k in 0..50 {
        let r = 3.0 * k as f64 / 49.0;
        let numeric = log_negativity(&gate_output_cov(r)).unwrap().log_negativity;
        let analytic = qnd_negativity_analytic(r);
        assert!(
            (numeric - analytic).abs() < 1e-9,
            "r = {r}: numeric {numeric} vs closed form {analytic}"
        );
    }
}

#[test]
fn negativity_headline_values() {
    let ideal = log_negativity(&gate_output_cov(f64::INFINITY)).unwrap();
    assert!((ideal.log_negativity - 0.881_373_587_019_543).abs() < 1e-12);

    let at_minus_4 = log_negativity(&gate_output_cov(MINUS_4_DB)).unwrap();
    assert!((at_minus_4.log_negativity - 0.397_216_488_933_737).abs() < 1e-9);
    assert!((at_minus_4.nu_tilde_minus - 0.168_047_122_127_62).abs() < 1e-9);
}

#[test]
fn entanglement_survives_infinitesimal_squeezing() {
    let tiny = log_negativity(&gate_output_cov(0.01)).unwrap();
    assert!(tiny.log_negativity > 0.0);
    assert!(tiny.nu_tilde_minus < 0.25);

    let none = log_negativity(&gate_output_cov(0.0)).unwrap();
    assert!(none.log_negativity < 1e-12);
    assert!((none.nu_tilde_minus - 0.25).abs() < 1e-12);
}

#[test]
fn closed_form_is_strictly_increasing_in_r() {
    let mut last = -1.0;
    for k in 0..=300 {
        let r = 3.0 * k as f64 / 300.0;
        let en = qnd_negativity_analytic(r);
        assert!(en > last, "not increasing at r = {r}");
        last = en;
    }
}

#[test]
fn negativity_invariant_under_residual_local_squeezing() {
    // The ∓3 dB local pair is exactly the correction the gate leaves behind.
    let local = SymplecticTransform::squeezer(2, 0, SqueezeDirection::Inverse)
        .unwrap()
        .then(&SymplecticTransform::squeezer(2, 1, SqueezeDirection::Forward).unwrap())
        .unwrap();
    for r in [0.0, 0.3, MINUS_4_DB, 1.7] {
        let vac = GaussianState::vacuum(2).unwrap();
        let out = parallel_gate(&vac, r, RunMode::Analytic, None).unwrap().output;
        let before = log_negativity(&TwoModeCovariance::from_state(&out).unwrap()).unwrap();
        let moved = out.apply(&local).unwrap();
        let after = log_negativity(&TwoModeCovariance::from_state(&moved).unwrap()).unwrap();
        assert!(
            (before.log_negativity - after.log_negativity).abs() < 1e-9,
            "r = {r}"
        );
    }
}

#[test]
fn gate_output_spectrum_is_degenerate_and_physical() {
    // At -4 dB the (untransposed) output has a doubly degenerate symplectic
    // eigenvalue ≈ 0.3351 — a good stress case for the pairing logic.
    let cov = gate_output_cov(MINUS_4_DB);
    let nus = symplectic_eigenvalues(cov.matrix()).unwrap();
    assert_eq!(nus.len(), 2);
    assert!((nus[0] - nus[1]).abs() < 1e-9);
    assert!(nus[0] >= 0.25);
    let det = cov.matrix().determinant();
    assert!((nus[0] * nus[1] - det.sqrt()).abs() < 1e-12);
    assert!(is_physical(cov.matrix(), 1e-9));
}

#[test]
fn physicality_boundary() {
    // vacuum sits exactly on the bound
    let vac = GaussianState::vacuum(1).unwrap();
    assert!(is_physical(vac.cov(), 0.0));
    // both quadratures below shot noise violates the uncertainty relation
    let bad = DMatrix::from_diagonal_element(2, 2, 0.1);
    assert!(!is_physical(&bad, 1e-9));
    // asymmetric matrices are rejected outright
    let mut asym = DMatrix::from_diagonal_element(2, 2, 0.3);
    asym[(0, 1)] = 0.1;
    assert!(!is_physical(&asym, 1e-9));
    // so are indefinite ones
    let mut indef = DMatrix::from_diagonal_element(2, 2, 0.3);
    indef[(0, 0)] = -0.3;
    assert!(!is_physical(&indef, 1e-9));
}

#[test]
fn two_mode_blocks_expose_structure() {
    let cov = gate_output_cov(MINUS_4_DB);
    let a = cov.block_a();
    let b = cov.block_b();
    let c = cov.block_c();
    assert!((a[(0, 0)] - 0.5).abs() < 1e-15);
    assert!((b[(1, 1)] - 0.5).abs() < 1e-15);
    assert!((c[(0, 0)] - 0.25).abs() < 1e-15);
    assert!((c[(1, 1)] + 0.25).abs() < 1e-15);
}
