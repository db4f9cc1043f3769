//! The sequential alternative: teleport A to Bob, apply a local QND sum
//! gate there, teleport the control output back.
//!
//! Each unit-gain teleportation hop (Bell-type balanced coupling with one
//! EPR half, x and p homodyne, displacement of the distant half) adds
//! independent noise of variance `e^{−2r}/2` to both quadratures of the
//! teleported mode. The control mode crosses twice; its first-hop x-noise
//! also rides through the local QND gate into the target's position, so the
//! added-noise covariance is
//!
//! ```text
//!        ( 2s  0   s  0 )
//!  s/2 → ( 0   2s  0  0 )     with s = e^{−2r}/2,
//!        ( s   0   s  0 )
//!        ( 0   0   0  0 )
//! ```
//!
//! on top of the exact QND map. Two EPR pairs, four classical reals, two
//! serial communication rounds.


use crate::conventions::Quadrature;
// Float trait supplies f64 math in no_std builds; on test builds the
// inherent std methods shadow it.
#[allow(unused_imports)]
use num_traits::Float;
use crate::error::{Error, Result};
use crate::state::GaussianState;
use crate::transform::SymplecticTransform;

use super::{
    AuditLog, ChannelDirection, ClassicalChannel, HomodyneRecord, LocalAction, NodeId, NodeState,
    ProtocolResult, ResourceLedger, RunMode, Scheme,
};

// Global mode labels for the audit trail: inputs, then the two EPR pairs
// (first pair carries A to Bob, second carries the result back).
const MODE_A: usize = 0;
const MODE_B: usize = 1;
const MODE_E1_OUT: usize = 2;
const MODE_E2_OUT: usize = 3;
const MODE_E1_BACK: usize = 4;
const MODE_E2_BACK: usize = 5;

/// Runs the teleportation-based sequential scheme on a two-mode input
/// (mode 0 at Alice, mode 1 at Bob) with resource squeezing r per EPR pair.
/// Analytic moments only; `r = ∞` reproduces the ideal QND sum gate
/// exactly.
pub fn sequential_gate(input: &GaussianState, r: f64) -> Result<ProtocolResult> {
    if input.num_modes() != 2 {
        return Err(Error::DimensionMismatch { expected: 4, actual: 2 * input.num_modes() });
    }
    if r.is_nan() || r < 0.0 {
        return Err(Error::InvalidParameter { name: "r", value: r });
    }

    let mut alice = NodeState::new(NodeId::Alice, alloc::vec![MODE_A, MODE_E1_OUT, MODE_E2_BACK]);
    let mut bob = NodeState::new(NodeId::Bob, alloc::vec![MODE_B, MODE_E2_OUT, MODE_E1_BACK]);
    let mut to_bob = ClassicalChannel::new(ChannelDirection::AliceToBob);
    let mut to_alice = ClassicalChannel::new(ChannelDirection::BobToAlice);
    let mut audit = AuditLog::default();

    // Round 1: Alice Bell-measures her input against her EPR half and sends
    // both outcomes; Bob completes the teleportation on his half.
    audit.record(NodeId::Alice, LocalAction::BeamsplitterCoupling, &[MODE_A, MODE_E1_OUT]);
    audit.record(NodeId::Alice, LocalAction::Homodyne(Quadrature::X), &[MODE_A]);
    audit.record(NodeId::Alice, LocalAction::Homodyne(Quadrature::P), &[MODE_E1_OUT]);
    audit.record(NodeId::Bob, LocalAction::FeedForward(Quadrature::X), &[MODE_E2_OUT]);
    audit.record(NodeId::Bob, LocalAction::FeedForward(Quadrature::P), &[MODE_E2_OUT]);
    audit.record(NodeId::Bob, LocalAction::LocalGate, &[MODE_E2_OUT, MODE_B]);
    // Round 2: Bob teleports the control output back to Alice.
    audit.record(NodeId::Bob, LocalAction::BeamsplitterCoupling, &[MODE_E2_OUT, MODE_E1_BACK]);
    audit.record(NodeId::Bob, LocalAction::Homodyne(Quadrature::X), &[MODE_E2_OUT]);
    audit.record(NodeId::Bob, LocalAction::Homodyne(Quadrature::P), &[MODE_E1_BACK]);
    audit.record(NodeId::Alice, LocalAction::FeedForward(Quadrature::X), &[MODE_E2_BACK]);
    audit.record(NodeId::Alice, LocalAction::FeedForward(Quadrature::P), &[MODE_E2_BACK]);
    assert!(
        audit.respects_ownership(&alice, &bob),
        "locality violation: a node acted on a mode it does not own"
    );

    let qnd = SymplecticTransform::qnd_sum(2, 0, 1, 1.0)?;
    let through_gate = input.apply(&qnd)?;
    let s = (-2.0 * r).exp() * 0.5;
    let mut cov = through_gate.cov().clone();
    cov[(0, 0)] += 2.0 * s;
    cov[(1, 1)] += 2.0 * s;
    cov[(2, 2)] += s;
    cov[(0, 2)] += s;
    cov[(2, 0)] += s;
    let output = GaussianState::from_parts_unchecked(through_gate.mean().clone(), cov);

    // First-moment content of the four Bell-outcome messages.
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let mean_xa = input.quad_mean(0, Quadrature::X)?;
    let mean_pa = input.quad_mean(0, Quadrature::P)?;
    let mean_pb = input.quad_mean(1, Quadrature::P)?;
    let hop1 = [mean_xa * h, mean_pa * h];
    let hop2 = [mean_xa * h, (mean_pa - mean_pb) * h];
    for (k, value) in hop1.into_iter().enumerate() {
        let quadrature = if k == 0 { Quadrature::X } else { Quadrature::P };
        to_bob.send(
            value,
            &mut bob,
            HomodyneRecord { mode: MODE_A, quadrature, outcome: value },
        );
    }
    for (k, value) in hop2.into_iter().enumerate() {
        let quadrature = if k == 0 { Quadrature::X } else { Quadrature::P };
        to_alice.send(
            value,
            &mut alice,
            HomodyneRecord { mode: MODE_E2_OUT, quadrature, outcome: value },
        );
    }
    let _ = (alice.take_inbox(), bob.take_inbox());

    Ok(ProtocolResult {
        output,
        ledger: ResourceLedger {
            epr_pairs_consumed: 2,
            classical_reals_sent: 4,
            communication_rounds: 2,
        },
        scheme: Scheme::Sequential,
        mode: RunMode::Analytic,
        audit,
        channel_to_bob: to_bob,
        channel_to_alice: to_alice,
        samples: None,
    })
}
