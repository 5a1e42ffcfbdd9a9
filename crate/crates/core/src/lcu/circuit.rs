use super::{Mode, PrepareSpec, RegisterLayout};
use crate::poly::{Point, TensorDecomposition};
use crate::sim::QState;
use crate::{CMatrix, Error, Result, C64};

/// Largest imaginary or padding component tolerated when reading a real
/// point back from the working register.
const READOUT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Label {
    Continue,
    Converged,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationOptions {
    pub eta: f64,
    pub mode: Mode,
    /// Step-size threshold used for the [`Label`].
    pub threshold: f64,
}

impl Default for IterationOptions {
    fn default() -> Self {
        Self {
            eta: 1.0,
            mode: Mode::Exact,
            threshold: 1e-3,
        }
    }
}

/// Full circuit output for a generic weighted sum of unitaries.
#[derive(Debug, Clone)]
pub struct LcuRun {
    pub layout: RegisterLayout,
    pub prepare: PrepareSpec,
    /// State after un-preparation, before post-selection.
    pub raw_state: QState,
    /// Working register after post-selecting flag and select on zero.
    pub post_state: QState,
    /// Exact projection probability.
    pub success_prob: f64,
}

#[derive(Debug, Clone)]
pub struct IterationOutcome {
    pub next_point: Point,
    /// Exact in [`Mode::Exact`], the observed hit frequency in
    /// [`Mode::Sampled`].
    pub success_prob: f64,
    pub expected_bernoulli_reps: f64,
    pub aa_reps_estimate: u64,
    pub raw_state: QState,
    pub post_state: QState,
    pub beta: f64,
    /// `‖next − x‖` after sign alignment.
    pub step_norm: f64,
    pub label: Label,
}

/// Runs prepare / select / unprepare / post-select for
/// `x − η Σ_m c_m A_m x` on the real vector `x` (length `N`, unit norm).
pub fn run_lcu(weights: &[f64], unitaries: &[&CMatrix], x: &[f64], eta: f64) -> Result<LcuRun> {
    if weights.len() != unitaries.len() {
        return Err(Error::DimensionMismatch {
            expected: weights.len(),
            found: unitaries.len(),
        });
    }
    let dim = x.len();
    if let Some(u) = unitaries.iter().find(|u| u.nrows() != dim || u.ncols() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: u.nrows(),
        });
    }
    let prepare = PrepareSpec::from_weights(weights, eta)?;
    let layout = RegisterLayout::new(weights.len(), dim);
    let flag = RegisterLayout::FLAG;
    let select = layout.select();
    let work = layout.work();

    let ancilla = QState::zero(1 + layout.select_qubits)?;
    let working = QState::from_real_padded(x, layout.work_qubits)?;
    let mut state = ancilla.tensor(&working)?;

    state = state.apply_unitary(&prepare.v0, &[flag])?;
    if !select.is_empty() {
        state = state.apply_controlled(&prepare.v, &[flag], &[true], &select)?;
    }

    for (m, (u, sign)) in unitaries.iter().zip(&prepare.signs).enumerate() {
        let gate = embed(u, layout.work_dim()) * C64::new(*sign, 0.0);
        let mut controls = vec![flag];
        controls.extend(&select);
        let mut pattern = vec![true];
        pattern.extend(bits(m, layout.select_qubits));
        state = state.apply_controlled(&gate, &controls, &pattern, &work)?;
    }

    if !select.is_empty() {
        state = state.apply_controlled(&prepare.v.adjoint(), &[flag], &[true], &select)?;
    }
    state = state.apply_unitary(&prepare.v0.adjoint(), &[flag])?;

    let ancillas = layout.ancillas();
    let zeros = vec![false; ancillas.len()];
    let (post_state, success_prob) = state.postselect(&ancillas, &zeros)?;
    Ok(LcuRun {
        layout,
        prepare,
        raw_state: state,
        post_state,
        success_prob,
    })
}

/// One descent step executed on the simulator.
pub fn run_iteration(
    decomp: &TensorDecomposition,
    x: &Point,
    options: &IterationOptions,
) -> Result<IterationOutcome> {
    if !(options.eta > 0.0 && options.eta.is_finite()) {
        return Err(Error::InvalidEta(options.eta));
    }
    let coeffs = decomp.coefficients(x)?;
    let unitaries: Vec<&CMatrix> = decomp.flat_factors().map(|f| f.matrix()).collect();
    let run = match run_lcu(&coeffs.c, &unitaries, x.coords(), options.eta) {
        Err(Error::PostSelection(p)) => return Err(Error::DegenerateStep(p.sqrt())),
        other => other?,
    };

    let success_prob = match options.mode {
        Mode::Exact => run.success_prob,
        Mode::Sampled { shots, seed } => {
            let counts = run.raw_state.measure_sample(&run.layout.ancillas(), seed, shots)?;
            if counts[0] == 0 {
                return Err(Error::PostSelection(0.0));
            }
            counts[0] as f64 / shots as f64
        }
    };

    let next_point = read_point(&run.post_state, x.dim())?.aligned_with(x);
    let step_norm = next_point.distance(x)?;
    Ok(IterationOutcome {
        next_point,
        success_prob,
        expected_bernoulli_reps: 1.0 / success_prob,
        aa_reps_estimate: aa_repetitions(success_prob),
        raw_state: run.raw_state,
        post_state: run.post_state,
        beta: run.prepare.beta,
        step_norm,
        label: if step_norm <= options.threshold {
            Label::Converged
        } else {
            Label::Continue
        },
    })
}

/// `⌈π / (4 asin √P)⌉`, the amplitude-amplification round count.
pub(crate) fn aa_repetitions(success_prob: f64) -> u64 {
    let angle = success_prob.clamp(0.0, 1.0).sqrt().asin();
    (std::f64::consts::PI / (4.0 * angle)).ceil() as u64
}

/// Reads a real point of dimension `dim` from a (padded) register.
pub fn read_point(state: &QState, dim: usize) -> Result<Point> {
    let amps = state.amplitudes();
    let worst_imag = amps.iter().map(|a| a.im.abs()).fold(0.0, f64::max);
    if worst_imag > READOUT_TOL {
        return Err(Error::ComplexUpdate(worst_imag));
    }
    let padding = amps[dim..].iter().map(|a| a.norm()).fold(0.0, f64::max);
    if padding > READOUT_TOL {
        return Err(Error::InvalidState(format!("padding amplitude {padding:.3e}")));
    }
    Point::normalized(amps[..dim].iter().map(|a| a.re).collect())
}

/// `U ⊕ I` acting on the padded working register.
pub(crate) fn embed(u: &CMatrix, padded: usize) -> CMatrix {
    let n = u.nrows();
    if n == padded {
        return u.clone();
    }
    let mut out = CMatrix::identity(padded, padded);
    out.view_mut((0, 0), (n, n)).copy_from(u);
    out
}

/// Big-endian bits of `value` over `width` positions.
pub(crate) fn bits(value: usize, width: usize) -> Vec<bool> {
    (0..width).rev().map(|k| (value >> k) & 1 == 1).collect()
}
