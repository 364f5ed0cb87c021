//! Inhomogeneous random graph processes driven by exponential edge clocks,
//! spectral checks on their rate matrices, and certificates for packings of
//! Hamilton cycles and perfect matchings.
//!
//! The crate is organised bottom-up:
//!
//! - [`spectral`]: rate matrices, transition matrices, eigenvalues, `gamma_k`.
//! - [`process`]: clock samples, hitting times, the truncated subgraph `H`.
//! - [`graph`]: graph snapshots, k-graphs, exact oracles, expansion checks.
//! - [`packing`]: rotations, Hamilton search, matchings, boosters.
//! - [`walks`]: alternating random walks on `(R, G)`.
//! - [`sprinkle`]: random edge sprinkling and booster hit probabilities.
//! - [`experiments`]: host generators and the batch experiment harness.

pub mod error;
pub mod experiments;
pub mod graph;
pub mod numeric;
pub mod packing;
pub mod process;
pub mod rng;
pub mod spectral;
pub mod sprinkle;
pub mod walks;

pub use error::{Error, Result};
pub use graph::{Edge, Graph, KGraph};
pub use process::{ClockAssignment, DirectedClockAssignment};
pub use spectral::{RateMatrix, SpectralSummary, TransitionMatrix};
