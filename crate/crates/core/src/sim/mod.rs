//! Exact dense simulator: pure states, (controlled) unitaries,
//! post-selection, sampling, density matrices with global depolarizing
//! noise, fidelity and purification.
//!
//! Qubit `0` is the most significant bit of the amplitude index, so for a
//! state on `n` qubits, qubit `q` of basis index `i` is
//! `(i >> (n - 1 - q)) & 1`. Circuits in [`crate::lcu`] lay registers out
//! as flag, select, working from qubit `0` upward.

mod density;
mod state;

pub use density::DensityMatrix;
pub use state::{QState, MAX_QUBITS};

/// Probability below which post-selection is reported as failed.
pub const POSTSELECT_MIN_PROB: f64 = 1e-14;
