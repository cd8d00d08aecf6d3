//! Capability regions for noisy, mitigated and error-corrected quantum computers.
//!
//! A program of width `n` (qubits) and depth `d` (gate layers) has size
//! `s = n * d` quantum operations ("quops"). A capability region collects every
//! `(width, depth)` shape a machine runs with success probability at or above a
//! threshold, `1/e` by default. This crate computes such regions four ways:
//!
//! - [`quop`]: closed form from per-operation error rates.
//! - [`bench`]: Monte Carlo simulation of randomized mirror circuits under
//!   stochastic bit-flip noise, with errors propagated through two-qubit gates.
//! - [`mitigation`]: bias removal paid for with exponentially many samples,
//!   under a fixed shot budget.
//! - [`qec`]: surface-code encoding under a physical-qubit budget.
//!
//! [`atlas`] parses scenario files and renders regions as CSV tables and
//! log-log SVG diagrams.

pub mod atlas;
pub mod bench;
mod error;
pub mod mitigation;
pub mod qec;
pub mod quop;
pub mod region;
pub mod seed;

pub use error::{Error, Result};
pub use quop::{AnalysisConfig, ErrorRates, ProgramShape, INV_E};
pub use region::{CapabilityRegion, FrontierPoint, RegionSource};
