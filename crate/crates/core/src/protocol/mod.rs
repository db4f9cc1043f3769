//! Two-node LOCC layer: the parallel nonlocal QND sum gate, the sequential
//! teleport–gate–teleport alternative, and the bookkeeping both need
//! (nodes, classical channels, resource ledger, noise vectors).
//!
//! Protocol flow of the parallel gate:
//!
//! 1. An EPR pair (two squeezed vacua on a balanced beamsplitter) is
//!    distributed ahead of time: one half to Alice, one to Bob.
//! 2. Each node couples its input to its EPR half on a local balanced
//!    beamsplitter and homodynes one output port (Alice measures x, Bob
//!    measures p).
//! 3. The two outcomes cross the classical channels simultaneously; each
//!    node applies conditional displacements to its kept mode.
//!
//! The result realizes the QND sum gate up to a known ∓3 dB local squeezing
//! pair, consuming one EPR pair, two classical reals, and a single
//! communication round.

mod compare;
mod parallel;
mod sequential;

pub use compare::{compare_schemes, SchemeComparison, SchemeSummary};
pub use parallel::{entangling_transform, make_epr, parallel_gate};
pub use sequential::sequential_gate;

use alloc::vec::Vec;
// Float trait supplies f64 math in no_std builds; on test builds the
// inherent std methods shadow it.
#[allow(unused_imports)]
use num_traits::Float;

use crate::conventions::Quadrature;
use crate::error::{Error, Result};
use crate::state::GaussianState;
use crate::transform::{SqueezeDirection, SymplecticTransform};

/// The two parties of the protocol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeId {
    Alice,
    Bob,
}

/// One homodyne measurement: which quadrature of which mode, and the
/// recorded real outcome. These are the classical messages the nodes
/// exchange.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HomodyneRecord {
    pub mode: usize,
    pub quadrature: Quadrature,
    pub outcome: f64,
}

/// A node's local view: its identity, the global mode indices it owns, and
/// the classical records received from the other node.
#[derive(Debug, Clone)]
pub struct NodeState {
    id: NodeId,
    owned_modes: Vec<usize>,
    inbox: Vec<HomodyneRecord>,
}

impl NodeState {
    pub fn new(id: NodeId, owned_modes: Vec<usize>) -> Self {
        Self { id, owned_modes, inbox: Vec::new() }
    }

    pub fn id(&self) -> NodeId {
        self.id
    }

    pub fn owns(&self, mode: usize) -> bool {
        self.owned_modes.contains(&mode)
    }

    pub fn owned_modes(&self) -> &[usize] {
        &self.owned_modes
    }

    pub fn receive(&mut self, record: HomodyneRecord) {
        self.inbox.push(record);
    }

    /// Drains the pending inbox; feed-forward may use only what arrives
    /// here plus the node's own outcomes.
    pub fn take_inbox(&mut self) -> Vec<HomodyneRecord> {
        core::mem::take(&mut self.inbox)
    }
}

/// Direction of a one-way classical channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ChannelDirection {
    AliceToBob,
    BobToAlice,
}

/// One-way classical channel with an abstract integer latency and a log of
/// every real number it carried. A single parallel-gate use sends exactly
/// one real through each of the two channels.
#[derive(Debug, Clone)]
pub struct ClassicalChannel {
    direction: ChannelDirection,
    latency_ticks: u32,
    log: Vec<f64>,
}

impl ClassicalChannel {
    pub fn new(direction: ChannelDirection) -> Self {
        Self { direction, latency_ticks: 1, log: Vec::new() }
    }

    pub fn direction(&self) -> ChannelDirection {
        self.direction
    }

    pub fn latency_ticks(&self) -> u32 {
        self.latency_ticks
    }

    /// Transmits one real: logs it and delivers it to the receiving node.
    pub fn send(&mut self, value: f64, receiver: &mut NodeState, record: HomodyneRecord) {
        self.log.push(value);
        receiver.receive(record);
    }

    pub fn log(&self) -> &[f64] {
        &self.log
    }

    pub fn reals_sent(&self) -> usize {
        self.log.len()
    }
}

/// Nonlocal resources consumed by one gate use.
///
/// Parallel scheme: (1 EPR pair, 2 reals, 1 round). Sequential scheme:
/// (2 EPR pairs, 4 reals, 2 rounds) — the second round cannot start before
/// the first completes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ResourceLedger {
    pub epr_pairs_consumed: u32,
    pub classical_reals_sent: u32,
    pub communication_rounds: u32,
}

/// Additive noise variances entering the four output quadratures
/// `(x_α, p_α, x_β, p_β)` because the resource squeezing is finite.
///
/// Only the back-action quadratures `p_α` and `x_β` are affected; the
/// anti-squeezed resource quadratures are cancelled by the feed-forward and
/// never appear. Everything vanishes as r → ∞.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseVector {
    variances: [f64; 4],
}

impl NoiseVector {
    /// Noise added to the gate output as produced (local squeezing still
    /// attached): `e^{−2r}/4` on `p_α` and `x_β`.
    pub fn gate_output(r: f64) -> Self {
        let v = (-2.0 * r).exp() * 0.25;
        Self { variances: [0.0, v, v, 0.0] }
    }

    /// Noise in the exact-QND frame, after undoing the ∓3 dB local
    /// squeezing: `e^{−2r}/2` on `p_α` and `x_β`.
    pub fn qnd_frame(r: f64) -> Self {
        let v = (-2.0 * r).exp() * 0.5;
        Self { variances: [0.0, v, v, 0.0] }
    }

    pub fn variances(&self) -> [f64; 4] {
        self.variances
    }
}

/// Imperfections of the optical implementation, all expressed as
/// transmissivities feeding pure-loss channels.
///
/// `path_transmissivities` act on the four beams before the local
/// couplings, ordered `[input A, input B, resource half to Alice, resource
/// half to Bob]`. Each homodyne station (the two in-gate detectors and the
/// two output verification detectors) has efficiency
/// `detector_efficiency · visibility²`. Defaults are all 1 (knobs off).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImperfectionConfig {
    pub path_transmissivities: [f64; 4],
    pub detector_efficiency: f64,
    pub visibility: f64,
}

impl Default for ImperfectionConfig {
    fn default() -> Self {
        Self {
            path_transmissivities: [1.0; 4],
            detector_efficiency: 1.0,
            visibility: 1.0,
        }
    }
}

impl ImperfectionConfig {
    pub fn validate(&self) -> Result<()> {
        for eta in self.path_transmissivities {
            if !(0.0..=1.0).contains(&eta) {
                return Err(Error::InvalidParameter { name: "path transmissivity", value: eta });
            }
        }
        if !(0.0..=1.0).contains(&self.detector_efficiency) {
            return Err(Error::InvalidParameter {
                name: "detector_efficiency",
                value: self.detector_efficiency,
            });
        }
        if !(0.0..=1.0).contains(&self.visibility) {
            return Err(Error::InvalidParameter { name: "visibility", value: self.visibility });
        }
        Ok(())
    }

    /// Effective efficiency of each homodyne station.
    pub fn homodyne_efficiency(&self) -> f64 {
        self.detector_efficiency * self.visibility * self.visibility
    }

    pub fn is_ideal(&self) -> bool {
        self.path_transmissivities.iter().all(|&e| e == 1.0)
            && self.detector_efficiency == 1.0
            && self.visibility == 1.0
    }
}

/// How a protocol run evaluates its output moments.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunMode {
    /// Closed-form propagation of means and covariances.
    Analytic,
    /// Trajectory sampling: homodyne outcomes drawn per trajectory, each
    /// with its own counter-derived RNG substream; deterministic given
    /// (seed, samples).
    MonteCarlo { seed: u64, samples: usize },
}

/// One Monte Carlo trajectory: both communicated outcomes plus a joint
/// sample of the four output quadratures `(x_α, p_α, x_β, p_β)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub outcome_alice: f64,
    pub outcome_bob: f64,
    pub quadratures: [f64; 4],
}

/// Which scheme produced a result (decides what local corrections remain).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Output carries the residual local squeezing `S_A† S_B`.
    Parallel,
    /// Output is already in the exact-QND frame.
    Sequential,
}

/// Kinds of local operations recorded in the audit log.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalAction {
    BeamsplitterCoupling,
    PathLoss,
    DetectionLoss,
    Homodyne(Quadrature),
    FeedForward(Quadrature),
    LocalGate,
}

/// One audited local operation: who did what to which global modes.
#[derive(Debug, Clone, PartialEq)]
pub struct AuditEntry {
    pub node: NodeId,
    pub action: LocalAction,
    pub modes: Vec<usize>,
}

/// Append-only trace of every local operation in a run; the locality guard
/// checks each entry against the acting node's owned modes.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AuditLog {
    entries: Vec<AuditEntry>,
}

impl AuditLog {
    pub fn from_entries(entries: Vec<AuditEntry>) -> Self {
        Self { entries }
    }

    pub(crate) fn record(&mut self, node: NodeId, action: LocalAction, modes: &[usize]) {
        self.entries.push(AuditEntry { node, action, modes: modes.to_vec() });
    }

    pub fn entries(&self) -> &[AuditEntry] {
        &self.entries
    }

    /// True iff every logged operation touched only modes owned by the
    /// acting node.
    pub fn respects_ownership(&self, alice: &NodeState, bob: &NodeState) -> bool {
        self.entries.iter().all(|e| {
            let owner = match e.node {
                NodeId::Alice => alice,
                NodeId::Bob => bob,
            };
            e.modes.iter().all(|&m| owner.owns(m))
        })
    }
}

/// Outcome of one protocol run: output moments, resource accounting, the
/// audit trail, the channels with their logs, and (for Monte Carlo mode)
/// the raw trajectories.
#[derive(Debug, Clone)]
pub struct ProtocolResult {
    pub output: GaussianState,
    pub ledger: ResourceLedger,
    pub scheme: Scheme,
    pub mode: RunMode,
    pub audit: AuditLog,
    pub channel_to_bob: ClassicalChannel,
    pub channel_to_alice: ClassicalChannel,
    pub samples: Option<Vec<TrajectorySample>>,
}

impl ProtocolResult {
    /// Removes the scheme's residual local corrections, expressing the
    /// output as the exact QND sum gate plus additive noise.
    ///
    /// For the parallel scheme this applies the −3 dB squeezer to mode α
    /// and its inverse to mode β, mapping means `(x̄_α, p̄_α, x̄_β, p̄_β)` to
    /// `(x̄_A, p̄_A − p̄_B, x̄_A + x̄_B, p̄_B)` and leaving the entanglement
    /// unchanged (local unitary). Sequential outputs are already in this
    /// frame and pass through untouched.
    pub fn undo_local_squeezing(&self) -> Result<GaussianState> {
        match self.scheme {
            Scheme::Sequential => Ok(self.output.clone()),
            Scheme::Parallel => {
                let undo_alpha = SymplecticTransform::squeezer(2, 0, SqueezeDirection::Forward)?;
                let undo_beta = SymplecticTransform::squeezer(2, 1, SqueezeDirection::Inverse)?;
                self.output.apply(&undo_alpha.then(&undo_beta)?)
            }
        }
    }
}
