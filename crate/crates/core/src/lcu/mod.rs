//! One gradient step as a linear combination of unitaries.
//!
//! Register layout (qubit 0 first): one flag qubit, `t1 = ⌈log2(Kp)⌉`
//! select qubits, `⌈log2 N⌉` working qubits holding `|x⟩` zero padded to a
//! power of two. The circuit for one iteration is
//!
//! 1. `V0` on the flag, then `V` on the select register controlled on
//!    flag = 1;
//! 2. for every `m`, `σ_m A_m` on the working register controlled on
//!    flag = 1 and select = `m`;
//! 3. the inverse of step 1;
//! 4. post-selection of flag and select on all zeros.
//!
//! With `V0|0⟩ = (|0⟩ + √(β−1)|1⟩)/√β` and `V|0⟩ = Σ_m √(η|c_m| / (β−1)) |m⟩`
//! the surviving working state is `(x − η D x) / β`, so the success
//! probability is `‖x − η D x‖² / β²` with `β = 1 + η Σ_m |c_m|`.

mod circuit;
mod estimate;
mod optimize;
mod prepare;

pub use circuit::{read_point, run_iteration, run_lcu, IterationOptions, IterationOutcome, Label, LcuRun};
pub use estimate::{estimate_b, BEstimate, BranchCounts};
pub use optimize::{optimize, IterationRecord, OptimizeOptions, Trajectory};
pub use prepare::{build_prepare, PrepareSpec};

use serde::{Deserialize, Serialize};

/// How ancilla outcomes are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    /// Exact amplitudes and projection probabilities.
    Exact,
    /// Finite-shot sampling of the ancilla registers.
    Sampled { shots: u64, seed: u64 },
}

impl Mode {
    /// Same mode with the seed shifted by `offset`; exact mode is unchanged.
    pub fn reseeded(self, offset: u64) -> Self {
        match self {
            Mode::Exact => Mode::Exact,
            Mode::Sampled { shots, seed } => Mode::Sampled {
                shots,
                seed: seed.wrapping_add(offset),
            },
        }
    }
}

/// `⌈log2 n⌉`, with `0` for `n ≤ 1`.
pub fn ceil_log2(n: usize) -> usize {
    if n <= 1 {
        0
    } else {
        (usize::BITS - (n - 1).leading_zeros()) as usize
    }
}

/// Qubit counts for flag, select and working registers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegisterLayout {
    pub select_qubits: usize,
    pub work_qubits: usize,
}

impl RegisterLayout {
    pub fn new(flat_len: usize, dim: usize) -> Self {
        Self {
            select_qubits: ceil_log2(flat_len),
            work_qubits: ceil_log2(dim),
        }
    }

    pub fn total_qubits(&self) -> usize {
        1 + self.select_qubits + self.work_qubits
    }

    pub const FLAG: usize = 0;

    pub fn select(&self) -> Vec<usize> {
        (1..=self.select_qubits).collect()
    }

    pub fn work(&self) -> Vec<usize> {
        (1 + self.select_qubits..self.total_qubits()).collect()
    }

    /// Flag followed by select qubits.
    pub fn ancillas(&self) -> Vec<usize> {
        (0..=self.select_qubits).collect()
    }

    pub fn work_dim(&self) -> usize {
        1 << self.work_qubits
    }
}

/// Analytic resource counts for one iteration.
///
/// Gate figures are order-of-magnitude accounting, not a synthesised
/// circuit: `Kp·log2 N` basic gates for the select step,
/// `log2(N + Kp + 1)` for state preparation, `√(Kp)` amplitude
/// amplification rounds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceEstimate {
    pub layout: RegisterLayout,
    pub total_qubits: usize,
    pub controlled_unitaries: usize,
    pub select_gates: f64,
    pub prepare_steps: f64,
    pub aa_rounds: f64,
    pub steps_per_iteration: f64,
    pub query_complexity: f64,
}

impl ResourceEstimate {
    pub fn new(num_terms: usize, order: usize, dim: usize) -> Self {
        let kp = (num_terms * order) as f64;
        let log_n = (dim as f64).log2().max(1.0);
        let prep = (dim as f64 + kp + 1.0).log2();
        let layout = RegisterLayout::new(num_terms * order, dim);
        Self {
            layout,
            total_qubits: layout.total_qubits(),
            controlled_unitaries: num_terms * order,
            select_gates: kp * log_n,
            prepare_steps: prep,
            aa_rounds: kp.sqrt(),
            steps_per_iteration: kp.powf(1.5) * log_n + kp.sqrt() * prep,
            query_complexity: kp.sqrt() * kp + kp,
        }
    }
}
