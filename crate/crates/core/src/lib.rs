//! Fixed-phase quantum amplitude amplification.
//!
//! The search operator is `D = W R_s(phi) W R_t(phi)` acting on the uniform
//! superposition of `N = 2^n` items with `M` marked items. Iterating `D` with the
//! fixed phase `phi* = 6.021930660106538 (~1.91684 pi)` for `q = floor(phi / sin theta)`
//! steps finds a marked item with probability above 99.5% for every `1 <= M <= N`.
//!
//! Modules:
//!
//! - [`amplitude`]: closed forms on the two-dimensional invariant subspace
//!   (angles, Chebyshev amplitudes, success probability, schedules).
//! - [`statevector`]: brute-force simulator of the full `2^n` system, used as an
//!   independent oracle for the closed forms.
//! - [`optimizer`]: max-min search for the phase over a match-fraction grid.
//! - [`unknown`]: the randomized driver for an unknown number of matches, its
//!   cost model and Monte-Carlo measurement.
//! - [`commands`] and [`validate`]: the pieces behind the `fixphase` binary.

pub mod amplitude;
pub mod commands;
mod error;
pub mod optimizer;
pub mod statevector;
pub mod unknown;
pub mod validate;

pub use amplitude::{Geometry, PhaseConfig, Schedule, SubspaceState, PHI_STAR};
pub use error::{Error, Result};
pub use optimizer::{EnvelopeSpec, FractionGrid, IterationRule, OptimizationResult};
pub use statevector::{MarkedSpec, SearchInstance, Statevector};
pub use unknown::{Backend, MCap, RunRecord, UnknownMConfig};
