//! The parallel nonlocal QND sum gate.
//!
//! Global mode layout during a run: `0 = input A`, `1 = input B`,
//! `2 = EPR half at Alice`, `3 = EPR half at Bob`. Alice owns {0, 2}, Bob
//! owns {1, 3}. Alice's beamsplitter turns slot 0 into the measured port
//! `(ξ_A − ξ_E1)/√2` and slot 2 into the kept mode α; Bob's does the same
//! with slots 1 and 3.
//!
//! Output quadratures relate to the inputs through
//!
//! ```text
//! ( x_α )   ( √2      0       0      0   ) ( x_A )   (    0     )
//! ( p_α ) = ( 0      1/√2     0    −1/√2 ) ( p_A ) + ( e⁻ʳ p₂⁽⁰⁾ )
//! ( x_β )   ( 1/√2    0      1/√2    0   ) ( x_B )   ( e⁻ʳ x₁⁽⁰⁾ )
//! ( p_β )   ( 0       0       0      √2  ) ( p_B )   (    0     )
//! ```
//!
//! with the noise terms coming from the squeezed quadratures of the
//! resource; their anti-squeezed partners cancel in the feed-forward. The
//! matrix factors as (−3 dB squeezer on α)† · (−3 dB squeezer on β) · (QND
//! sum gate), so the gate is the QND sum up to known local squeezing.

use alloc::vec;
use alloc::vec::Vec;
use nalgebra::{DMatrix, DVector};
// Float trait supplies f64 math in no_std builds; on test builds the
// inherent std methods shadow it.
#[allow(unused_imports)]
use num_traits::Float;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::conventions::Quadrature;
use crate::error::{Error, Result};
use crate::state::{GaussianState, SqueezingSpec};
use crate::transform::SymplecticTransform;

use super::{
    AuditLog, ChannelDirection, ClassicalChannel, HomodyneRecord, ImperfectionConfig, LocalAction,
    NodeId, NodeState, NoiseVector, ProtocolResult, ResourceLedger, RunMode, Scheme,
    TrajectorySample,
};

const MODE_A: usize = 0;
const MODE_B: usize = 1;
const MODE_E1: usize = 2;
const MODE_E2: usize = 3;

/// Two-mode EPR resource with squeezing parameter r: two single-mode
/// squeezed vacua (x-squeezed and p-squeezed) combined on a balanced
/// beamsplitter, so that `var(x_{E1} − x_{E2}) = var(p_{E1} + p_{E2}) =
/// e^{−2r}/2`. Pure for every r; r = 0 gives two uncorrelated vacua.
pub fn make_epr(r: f64) -> Result<GaussianState> {
    if r < 0.0 || !r.is_finite() {
        return Err(Error::InvalidParameter { name: "r", value: r });
    }
    let squeezed_x = GaussianState::squeezed_vacuum(SqueezingSpec::new(r, Quadrature::X)?);
    let squeezed_p = GaussianState::squeezed_vacuum(SqueezingSpec::new(r, Quadrature::P)?);
    let pair = squeezed_x.tensor(&squeezed_p);
    pair.apply(&SymplecticTransform::beamsplitter(2, 1, 0, 0.5)?)
}

/// The 4x4 input–output matrix of the parallel gate (zero displacement).
/// Factors as (inverse −3 dB squeezer on α) · (−3 dB squeezer on β) ·
/// (QND sum gate); a test pins the factorization.
pub fn entangling_transform() -> SymplecticTransform {
    let s = core::f64::consts::SQRT_2;
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let matrix = DMatrix::from_row_slice(
        4,
        4,
        &[
            s, 0.0, 0.0, 0.0, //
            0.0, h, 0.0, -h, //
            h, 0.0, h, 0.0, //
            0.0, 0.0, 0.0, s,
        ],
    );
    SymplecticTransform::from_parts(matrix, DVector::zeros(4))
        .expect("entangling matrix is symplectic")
}

/// Runs the parallel nonlocal QND sum gate on a two-mode input (mode 0 at
/// Alice, mode 1 at Bob) with resource squeezing r.
///
/// Analytic mode returns the exact output moments; with all imperfection
/// knobs off this is the closed-form map above and accepts `r = ∞` for the
/// ideal gate. With imperfections (or in Monte Carlo mode) the run
/// propagates the assembled four-mode state, which requires finite r
/// (usable up to r ≈ 8 before the anti-squeezed variances exhaust double
/// precision).
pub fn parallel_gate(
    input: &GaussianState,
    r: f64,
    mode: RunMode,
    imperfections: Option<&ImperfectionConfig>,
) -> Result<ProtocolResult> {
    if input.num_modes() != 2 {
        return Err(Error::DimensionMismatch { expected: 4, actual: 2 * input.num_modes() });
    }
    if r.is_nan() || r < 0.0 {
        return Err(Error::InvalidParameter { name: "r", value: r });
    }
    let default_cfg = ImperfectionConfig::default();
    let cfg = imperfections.unwrap_or(&default_cfg);
    cfg.validate()?;

    let run = Run::new();
    match mode {
        RunMode::Analytic if cfg.is_ideal() => run.analytic_closed_form(input, r),
        RunMode::Analytic => run.analytic_pipeline(input, r, cfg),
        RunMode::MonteCarlo { seed, samples } => run.monte_carlo(input, r, cfg, seed, samples),
    }
}

/// Per-run bookkeeping: the two nodes, the two channels, and the audit
/// trail. All local operations below go through `alice_op`/`bob_op` so the
/// ownership guard sees everything.
struct Run {
    alice: NodeState,
    bob: NodeState,
    to_bob: ClassicalChannel,
    to_alice: ClassicalChannel,
    audit: AuditLog,
}

impl Run {
    fn new() -> Self {
        Self {
            alice: NodeState::new(NodeId::Alice, vec![MODE_A, MODE_E1]),
            bob: NodeState::new(NodeId::Bob, vec![MODE_B, MODE_E2]),
            to_bob: ClassicalChannel::new(ChannelDirection::AliceToBob),
            to_alice: ClassicalChannel::new(ChannelDirection::BobToAlice),
            audit: AuditLog::default(),
        }
    }

    fn alice_op(&mut self, action: LocalAction, modes: &[usize]) {
        self.audit.record(NodeId::Alice, action, modes);
    }

    fn bob_op(&mut self, action: LocalAction, modes: &[usize]) {
        self.audit.record(NodeId::Bob, action, modes);
    }

    fn ledger() -> ResourceLedger {
        ResourceLedger { epr_pairs_consumed: 1, classical_reals_sent: 2, communication_rounds: 1 }
    }

    fn finish(
        self,
        output: GaussianState,
        mode: RunMode,
        samples: Option<Vec<TrajectorySample>>,
    ) -> Result<ProtocolResult> {
        assert!(
            self.audit.respects_ownership(&self.alice, &self.bob),
            "locality violation: a node acted on a mode it does not own"
        );
        Ok(ProtocolResult {
            output,
            ledger: Self::ledger(),
            scheme: Scheme::Parallel,
            mode,
            audit: self.audit,
            channel_to_bob: self.to_bob,
            channel_to_alice: self.to_alice,
            samples,
        })
    }

    /// Records the step sequence shared by every execution path.
    fn log_protocol_steps(&mut self, cfg: &ImperfectionConfig) {
        if cfg.path_transmissivities[0] < 1.0 {
            self.alice_op(LocalAction::PathLoss, &[MODE_A]);
        }
        if cfg.path_transmissivities[1] < 1.0 {
            self.bob_op(LocalAction::PathLoss, &[MODE_B]);
        }
        if cfg.path_transmissivities[2] < 1.0 {
            self.alice_op(LocalAction::PathLoss, &[MODE_E1]);
        }
        if cfg.path_transmissivities[3] < 1.0 {
            self.bob_op(LocalAction::PathLoss, &[MODE_E2]);
        }
        self.alice_op(LocalAction::BeamsplitterCoupling, &[MODE_A, MODE_E1]);
        self.bob_op(LocalAction::BeamsplitterCoupling, &[MODE_B, MODE_E2]);
        if cfg.homodyne_efficiency() < 1.0 {
            self.alice_op(LocalAction::DetectionLoss, &[MODE_A]);
            self.bob_op(LocalAction::DetectionLoss, &[MODE_B]);
        }
        self.alice_op(LocalAction::Homodyne(Quadrature::X), &[MODE_A]);
        self.bob_op(LocalAction::Homodyne(Quadrature::P), &[MODE_B]);
        // Feed-forward on the kept modes: Alice displaces α with her own
        // outcome and Bob's received one; Bob mirrors this on β.
        self.alice_op(LocalAction::FeedForward(Quadrature::X), &[MODE_E1]);
        self.alice_op(LocalAction::FeedForward(Quadrature::P), &[MODE_E1]);
        self.bob_op(LocalAction::FeedForward(Quadrature::X), &[MODE_E2]);
        self.bob_op(LocalAction::FeedForward(Quadrature::P), &[MODE_E2]);
        if cfg.homodyne_efficiency() < 1.0 {
            self.alice_op(LocalAction::DetectionLoss, &[MODE_E1]);
            self.bob_op(LocalAction::DetectionLoss, &[MODE_E2]);
        }
    }

    /// Exchanges the two measurement records (one real each way).
    fn exchange(&mut self, s_alice: f64, s_bob: f64) {
        self.to_bob.send(
            s_alice,
            &mut self.bob,
            HomodyneRecord { mode: MODE_A, quadrature: Quadrature::X, outcome: s_alice },
        );
        self.to_alice.send(
            s_bob,
            &mut self.alice,
            HomodyneRecord { mode: MODE_B, quadrature: Quadrature::P, outcome: s_bob },
        );
    }

    /// Ideal-resource analytic path: closed-form moment map, exact for any
    /// r including infinity.
    fn analytic_closed_form(mut self, input: &GaussianState, r: f64) -> Result<ProtocolResult> {
        let cfg = ImperfectionConfig::default();
        self.log_protocol_steps(&cfg);

        let gate = entangling_transform();
        let mut out = input.apply(&gate)?;
        let mut cov = out.cov().clone();
        for (k, v) in NoiseVector::gate_output(r).variances().into_iter().enumerate() {
            cov[(k, k)] += v;
        }
        out = GaussianState::from_parts_unchecked(out.mean().clone(), cov);

        // First-moment content of the two messages.
        let h = core::f64::consts::FRAC_1_SQRT_2;
        let s_alice = input.quad_mean(0, Quadrature::X)? * h;
        let s_bob = input.quad_mean(1, Quadrature::P)? * h;
        self.exchange(s_alice, s_bob);
        self.finish(out, RunMode::Analytic, None)
    }

    /// Analytic path with loss channels: exact moment propagation of the
    /// assembled four-mode state, folding measurement-plus-feed-forward as
    /// a linear map on the pre-measurement moments.
    fn analytic_pipeline(
        mut self,
        input: &GaussianState,
        r: f64,
        cfg: &ImperfectionConfig,
    ) -> Result<ProtocolResult> {
        if !r.is_finite() {
            return Err(Error::InvalidParameter { name: "r", value: r });
        }
        self.log_protocol_steps(cfg);
        let pre = premeasurement_state(input, r, cfg)?;

        // Output rows over the 8 pre-measurement quadratures:
        //   x_α = x_{α'} + s_A      p_α = p_{α'} − s_B
        //   x_β = x_{β'} + s_A      p_β = p_{β'} + s_B
        // where s_A is the measured x of slot 0 and s_B the measured p of
        // slot 1; the conjugates of the measured ports never appear, which
        // is what makes the fold exact.
        let mut t = DMatrix::zeros(4, 8);
        t[(0, 2 * MODE_E1)] = 1.0;
        t[(0, 2 * MODE_A)] = 1.0;
        t[(1, 2 * MODE_E1 + 1)] = 1.0;
        t[(1, 2 * MODE_B + 1)] = -1.0;
        t[(2, 2 * MODE_E2)] = 1.0;
        t[(2, 2 * MODE_A)] = 1.0;
        t[(3, 2 * MODE_E2 + 1)] = 1.0;
        t[(3, 2 * MODE_B + 1)] = 1.0;

        let mean = &t * pre.mean();
        let mut cov = &t * pre.cov() * t.transpose();
        let sym = (&cov + cov.transpose()) * 0.5;
        cov.copy_from(&sym);
        let mut out = GaussianState::from_parts_unchecked(mean, cov);
        out = apply_verification_loss(&out, cfg)?;

        let s_alice = pre.quad_mean(MODE_A, Quadrature::X)?;
        let s_bob = pre.quad_mean(MODE_B, Quadrature::P)?;
        self.exchange(s_alice, s_bob);
        self.finish(out, RunMode::Analytic, None)
    }

    /// Trajectory sampling: per trajectory, draw both homodyne outcomes,
    /// exchange them, displace, and record one joint phase-space sample of
    /// the output. Ensemble moments use the unbiased (N−1) estimator.
    fn monte_carlo(
        mut self,
        input: &GaussianState,
        r: f64,
        cfg: &ImperfectionConfig,
        seed: u64,
        samples: usize,
    ) -> Result<ProtocolResult> {
        if !r.is_finite() {
            return Err(Error::InvalidParameter { name: "r", value: r });
        }
        if samples < 2 {
            return Err(Error::InvalidParameter { name: "samples", value: samples as f64 });
        }
        self.log_protocol_steps(cfg);
        let pre = premeasurement_state(input, r, cfg)?;

        let mut raw: Vec<TrajectorySample> = Vec::with_capacity(samples);
        let mut sum = DVector::<f64>::zeros(4);
        for trajectory in 0..samples {
            let mut rng = ChaCha12Rng::seed_from_u64(seed);
            rng.set_stream(trajectory as u64);

            // Alice measures x on her beamsplitter port, Bob measures p on
            // his; conditioning after the first outcome keeps the joint
            // outcome statistics exact.
            let (s_alice, rest) = pre.homodyne_sample(MODE_A, Quadrature::X, &mut rng)?;
            let (s_bob, rest) = rest.homodyne_sample(0, Quadrature::P, &mut rng)?;
            self.exchange(s_alice, s_bob);
            let records_alice = self.alice.take_inbox();
            let records_bob = self.bob.take_inbox();
            debug_assert_eq!(records_alice.len(), 1);
            debug_assert_eq!(records_bob.len(), 1);
            let received_by_alice = records_alice[0].outcome;
            let received_by_bob = records_bob[0].outcome;

            // Feed-forward: α gets X(s_A) Z(−s_B), β gets X(s_A) Z(s_B),
            // each node using only its own outcome plus the received one.
            let shift = DVector::from_row_slice(&[
                s_alice,
                -received_by_alice,
                received_by_bob,
                s_bob,
            ]);
            let mut out = rest.shifted(&shift);
            out = apply_verification_loss(&out, cfg)?;

            let q = out.sample_quadratures(&mut rng)?;
            sum += &q;
            raw.push(TrajectorySample {
                outcome_alice: s_alice,
                outcome_bob: s_bob,
                quadratures: [q[0], q[1], q[2], q[3]],
            });
        }

        let mean = sum / samples as f64;
        let mut cov = DMatrix::<f64>::zeros(4, 4);
        for s in &raw {
            for i in 0..4 {
                for j in 0..4 {
                    cov[(i, j)] += (s.quadratures[i] - mean[i]) * (s.quadratures[j] - mean[j]);
                }
            }
        }
        cov /= (samples - 1) as f64;
        let output = GaussianState::from_parts(mean, cov)?;
        self.finish(output, RunMode::MonteCarlo { seed, samples }, Some(raw))
    }
}

/// Assembles the four-mode state right before the homodynes: inputs ⊗ EPR,
/// path losses, the two local beamsplitters, and in-gate detection loss on
/// the measured ports.
fn premeasurement_state(
    input: &GaussianState,
    r: f64,
    cfg: &ImperfectionConfig,
) -> Result<GaussianState> {
    let mut state = input.tensor(&make_epr(r)?);
    for (mode, &eta) in cfg.path_transmissivities.iter().enumerate() {
        if eta < 1.0 {
            state = state.loss_channel(mode, eta)?;
        }
    }
    let couple_alice = SymplecticTransform::beamsplitter(4, MODE_A, MODE_E1, 0.5)?;
    let couple_bob = SymplecticTransform::beamsplitter(4, MODE_B, MODE_E2, 0.5)?;
    state = state.apply(&couple_alice.then(&couple_bob)?)?;
    let eff = cfg.homodyne_efficiency();
    if eff < 1.0 {
        state = state.loss_channel(MODE_A, eff)?;
        state = state.loss_channel(MODE_B, eff)?;
    }
    Ok(state)
}

/// Detection loss of the two output verification homodynes.
fn apply_verification_loss(output: &GaussianState, cfg: &ImperfectionConfig) -> Result<GaussianState> {
    let eff = cfg.homodyne_efficiency();
    if eff < 1.0 {
        output.loss_channel(0, eff)?.loss_channel(1, eff)
    } else {
        Ok(output.clone())
    }
}
