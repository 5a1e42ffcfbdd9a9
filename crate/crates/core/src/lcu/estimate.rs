use super::circuit::{bits, embed};
use super::{ceil_log2, Mode};
use crate::poly::{Point, TensorDecomposition, IMAG_TOL};
use crate::sim::QState;
use crate::{CMatrix, Error, Result, C64};

/// Shot counts for one select branch in sampled mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchCounts {
    /// Shots that landed on this select outcome.
    pub shots: u64,
    /// Of those, shots where the working register passed the `|x⟩⟨x|`
    /// projector.
    pub hits: u64,
}

impl BranchCounts {
    pub fn frequency(&self) -> f64 {
        self.hits as f64 / self.shots as f64
    }
}

/// Estimated Rayleigh quotients, `K × p`, with the exact values alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct BEstimate {
    pub values: Vec<Vec<f64>>,
    pub exact: Vec<Vec<f64>>,
    /// Flattened-order branch statistics; `None` in exact mode.
    pub branches: Option<Vec<BranchCounts>>,
}

/// Coefficient-estimation circuit.
///
/// Hadamards on a `⌈log2 Kp⌉`-qubit select register, `A_m` on the working
/// register `|x⟩` controlled on select = `m`, then the working register is
/// measured in a basis containing `|x⟩` (a reflection mapping `|x⟩` to
/// `|0⟩` followed by a computational measurement). In branch `m` the
/// probability of the `|x⟩` outcome is `|⟨x|A_m|x⟩|²`.
///
/// Exact mode reads `⟨x|A_m|x⟩` from the amplitudes. Sampled mode
/// estimates the magnitude from hit frequencies and copies the sign from
/// the exact overlap, which the projector statistics cannot reveal.
pub fn estimate_b(decomp: &TensorDecomposition, x: &Point, mode: Mode) -> Result<BEstimate> {
    if x.dim() != decomp.dim() {
        return Err(Error::DimensionMismatch {
            expected: decomp.dim(),
            found: x.dim(),
        });
    }
    let kp = decomp.flat_len();
    let select_qubits = ceil_log2(kp);
    let work_qubits = ceil_log2(decomp.dim());
    let work_dim = 1usize << work_qubits;
    let select: Vec<usize> = (0..select_qubits).collect();
    let work: Vec<usize> = (select_qubits..select_qubits + work_qubits).collect();

    let mut state = QState::zero(select_qubits)?.tensor(&QState::from_real_padded(x.coords(), work_qubits)?)?;
    let h = hadamard();
    for &q in &select {
        state = state.apply_unitary(&h, &[q])?;
    }
    for (m, factor) in decomp.flat_factors().enumerate() {
        let gate = embed(factor.matrix(), work_dim);
        state = state.apply_controlled(&gate, &select, &bits(m, select_qubits), &work)?;
    }
    if !work.is_empty() {
        state = state.apply_unitary(&reflection_to_origin(x.coords(), work_dim), &work)?;
    }

    let scale = ((1usize << select_qubits) as f64).sqrt();
    let mut exact_flat = Vec::with_capacity(kp);
    for m in 0..kp {
        let amp = state.amplitudes()[m << work_qubits] * scale;
        if amp.im.abs() > IMAG_TOL {
            return Err(Error::ComplexRayleigh(amp.im));
        }
        exact_flat.push(amp.re);
    }

    let (values_flat, branches) = match mode {
        Mode::Exact => (exact_flat.clone(), None),
        Mode::Sampled { shots, seed } => {
            let all: Vec<usize> = (0..state.num_qubits()).collect();
            let counts = state.measure_sample(&all, seed, shots)?;
            let branches: Vec<BranchCounts> = (0..kp)
                .map(|m| BranchCounts {
                    shots: counts[m << work_qubits..(m + 1) << work_qubits].iter().sum(),
                    hits: counts[m << work_qubits],
                })
                .collect();
            let mut values = Vec::with_capacity(kp);
            for (b, exact) in branches.iter().zip(&exact_flat) {
                if b.shots == 0 {
                    return Err(Error::PostSelection(0.0));
                }
                let sign = if *exact < 0.0 { -1.0 } else { 1.0 };
                values.push(sign * b.frequency().sqrt());
            }
            (values, Some(branches))
        }
    };

    let p = decomp.order();
    let reshape = |flat: Vec<f64>| flat.chunks(p).map(<[f64]>::to_vec).collect::<Vec<_>>();
    Ok(BEstimate {
        values: reshape(values_flat),
        exact: reshape(exact_flat),
        branches,
    })
}

fn hadamard() -> CMatrix {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    CMatrix::from_row_slice(2, 2, &[h, h, h, -h])
}

/// Householder reflection `I − 2uuᵀ/‖u‖²` with `u = x − e_0`, mapping the
/// zero-padded unit vector `x` to `e_0`.
fn reflection_to_origin(x: &[f64], padded: usize) -> CMatrix {
    let mut u = vec![0.0; padded];
    u[..x.len()].copy_from_slice(x);
    u[0] -= 1.0;
    let norm_sqr: f64 = u.iter().map(|v| v * v).sum();
    if norm_sqr < 1e-30 {
        return CMatrix::identity(padded, padded);
    }
    CMatrix::from_fn(padded, padded, |r, c| {
        let delta = if r == c { 1.0 } else { 0.0 };
        C64::new(delta - 2.0 * u[r] * u[c] / norm_sqr, 0.0)
    })
}
