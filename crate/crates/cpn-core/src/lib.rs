//! Simulation and optimization toolkit for adaptive conditional-pulse-nulling (CPN)
//! receivers discriminating coherent-state codewords.
//!
//! The crate models a receiver that observes an M-slot optical codeword through an
//! on-off photon detector, applying a per-slot displacement ("nulling") control that
//! may depend on the click history of earlier slots. It provides:
//!
//! - signal ensembles: L-pulse M-slot PPM (MPPM) and binary-coded OOK/BPSK codeword
//!   sets, including the Hamming(7,4) code ([`signal`]);
//! - exact click statistics for ideal and mildly non-ideal detectors ([`detection`]);
//! - exact evaluation and dynamic-programming optimization of feedback strategy
//!   trees, with JSON export/import ([`strategy`]);
//! - baseline receivers: direct detection + ML, homodyne + ML, the square-root
//!   measurement, and the Holevo information bound ([`baselines`]);
//! - a seeded, counter-based Monte Carlo validator ([`montecarlo`]);
//! - parameter sweeps producing CSV curves ([`sweep`]), driven by the `cpn-lab` binary.
//!
//! Throughout the crate, `n_bar` denotes the **per-pulse** mean photon number |α|²
//! of the coherent pulse amplitude α.

pub mod baselines;
pub mod detection;
pub mod error;
pub mod linalg;
pub mod montecarlo;
pub mod signal;
pub mod strategy;
pub mod sweep;

pub use error::{CpnError, Result};
pub use signal::{Amplitude, Codeword, Family, SignalEnsemble, SlotSymbol};
pub use detection::{Control, DetectionModel};
pub use strategy::{BeliefState, ClickOutcome, Evaluation, StrategyNode, StrategyTree};
