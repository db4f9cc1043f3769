//! Gaussian-state engine and two-node LOCC protocol layer for a nonlocal
//! continuous-variable QND sum gate.
//!
//! The crate is `no_std` (alloc only) and splits into:
//!
//! - [`conventions`]: units (hbar = 1/2, shot noise 1/4), quadrature
//!   ordering, the symplectic form, and dB definitions — everything else
//!   assumes these.
//! - [`state`] / [`transform`]: Gaussian states as mean + covariance, and
//!   the symplectic gates that move them (beamsplitters, QND sum,
//!   squeezers, displacements), plus homodyne conditioning and loss
//!   channels.
//! - [`entanglement`]: symplectic spectra, the physicality bound, and
//!   logarithmic negativity with its closed-form oracle.
//! - [`protocol`]: the parallel EPR-plus-feed-forward gate (analytic and
//!   Monte Carlo), the sequential teleportation-based alternative, and the
//!   resource ledger comparing the two.
//!
//! States and transforms are immutable values; all operations are pure
//! functions of their inputs plus an explicit RNG stream, so independent
//! Monte Carlo trajectories can run in parallel with per-trajectory
//! substreams.

#![no_std]

extern crate alloc;

pub mod conventions;
pub mod entanglement;
pub mod error;
pub mod protocol;
pub mod state;
pub mod transform;

pub use conventions::Quadrature;
pub use error::{Error, Result};
pub use state::{GaussianState, SqueezingSpec};
pub use transform::{SqueezeDirection, SymplecticTransform};
