use serde::Serialize;

use super::circuit::read_point;
use super::{run_iteration, IterationOptions, Label, Mode};
use crate::poly::{Point, TensorDecomposition};
use crate::sim::DensityMatrix;
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeOptions {
    pub eta: f64,
    /// Stop once `‖x_{t+1} − x_t‖ ≤ threshold` (sign aligned).
    pub threshold: f64,
    pub max_iters: usize,
    pub mode: Mode,
    /// Depolarizing strength applied to the post-selected working state
    /// before purification; `0` disables the noisy path.
    pub noise_eps: f64,
    /// Optional point to report overlaps against.
    pub reference: Option<Point>,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        Self {
            eta: 1.0,
            threshold: 1e-3,
            max_iters: 50,
            mode: Mode::Exact,
            noise_eps: 0.0,
            reference: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iter: usize,
    pub point: Point,
    pub f_value: f64,
    pub success_prob: f64,
    pub expected_bernoulli_reps: f64,
    pub aa_reps_estimate: u64,
    pub overlap: Option<f64>,
    /// Fidelity of the noisy working state against the exact one.
    pub fidelity: Option<f64>,
    pub step_norm: f64,
    pub label: Label,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub initial: Point,
    pub initial_f: f64,
    pub initial_overlap: Option<f64>,
    pub records: Vec<IterationRecord>,
    pub converged: bool,
}

impl Trajectory {
    pub fn final_point(&self) -> &Point {
        self.records.last().map_or(&self.initial, |r| &r.point)
    }

    pub fn final_f(&self) -> f64 {
        self.records.last().map_or(self.initial_f, |r| r.f_value)
    }
}

/// Repeats [`run_iteration`] until the step size drops below the threshold
/// or the iteration budget runs out.
///
/// In sampled mode iteration `t` (1-based) uses seed `seed + t − 1`. With
/// `noise_eps > 0` the post-selected working state is depolarized and the
/// purified vector becomes the next iterate.
pub fn optimize(decomp: &TensorDecomposition, x0: &Point, options: &OptimizeOptions) -> Result<Trajectory> {
    if options.max_iters == 0 {
        return Err(Error::InvalidArgument("max_iters must be at least 1".into()));
    }
    if !(options.threshold > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold must be positive, got {}",
            options.threshold
        )));
    }
    if !(0.0..=1.0).contains(&options.noise_eps) {
        return Err(Error::InvalidNoise(options.noise_eps));
    }
    let overlap = |p: &Point| -> Result<Option<f64>> {
        options.reference.as_ref().map(|r| p.dot(r)).transpose()
    };

    let mut x = x0.clone();
    let mut records = Vec::new();
    let mut converged = false;
    for t in 1..=options.max_iters {
        let step_options = IterationOptions {
            eta: options.eta,
            mode: options.mode.reseeded((t - 1) as u64),
            threshold: options.threshold,
        };
        let outcome = run_iteration(decomp, &x, &step_options)?;

        let (point, fidelity) = if options.noise_eps > 0.0 {
            let exact = DensityMatrix::from_pure(&outcome.post_state);
            let noisy = exact.depolarize(options.noise_eps)?;
            let fidelity = exact.fidelity(&noisy)?;
            let purified = crate::sim::QState::from_real_padded(&noisy.purify()?, outcome.post_state.num_qubits())?;
            (read_point(&purified, x.dim())?.aligned_with(&x), Some(fidelity))
        } else {
            (outcome.next_point, None)
        };

        let step_norm = point.distance(&x)?;
        let label = if step_norm <= options.threshold {
            Label::Converged
        } else {
            Label::Continue
        };
        records.push(IterationRecord {
            iter: t,
            f_value: decomp.objective(&point)?,
            overlap: overlap(&point)?,
            point: point.clone(),
            success_prob: outcome.success_prob,
            expected_bernoulli_reps: outcome.expected_bernoulli_reps,
            aa_reps_estimate: outcome.aa_reps_estimate,
            fidelity,
            step_norm,
            label,
        });
        x = point;
        if label == Label::Converged {
            converged = true;
            break;
        }
    }

    Ok(Trajectory {
        initial_f: decomp.objective(x0)?,
        initial_overlap: overlap(x0)?,
        initial: x0.clone(),
        records,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::UnitaryFactor;

    fn experiment() -> TensorDecomposition {
        let f = |l| UnitaryFactor::pauli(l).unwrap();
        TensorDecomposition::new(vec![vec![f("-I"), f("X")], vec![f("X"), f("Z")]], 0.5).unwrap()
    }

    fn optimum() -> Point {
        Point::new(vec![0.5, 3f64.sqrt() / 2.0]).unwrap()
    }

    #[test]
    fn stationary_start_converges_immediately() {
        let traj = optimize(&experiment(), &optimum(), &OptimizeOptions::default()).unwrap();
        assert_eq!(traj.records.len(), 1);
        assert_eq!(traj.records[0].label, Label::Converged);
        assert!(traj.converged);
    }

    #[test]
    fn s2_start_converges_at_unit_rate() {
        let x0 = Point::normalized(vec![0.86, 0.50]).unwrap();
        let opts = OptimizeOptions {
            reference: Some(optimum()),
            ..Default::default()
        };
        let traj = optimize(&experiment(), &x0, &opts).unwrap();
        assert!(traj.converged);
        assert!(traj.records.last().unwrap().overlap.unwrap().abs() >= 0.999);
    }

    #[test]
    fn budget_exhaustion_is_not_an_error() {
        let x0 = Point::normalized(vec![0.86, 0.50]).unwrap();
        let opts = OptimizeOptions {
            max_iters: 1,
            ..Default::default()
        };
        let traj = optimize(&experiment(), &x0, &opts).unwrap();
        assert_eq!(traj.records.len(), 1);
        assert!(!traj.converged);
    }

    #[test]
    fn option_validation() {
        let x0 = optimum();
        let bad = |o: OptimizeOptions| optimize(&experiment(), &x0, &o).is_err();
        assert!(bad(OptimizeOptions { max_iters: 0, ..Default::default() }));
        assert!(bad(OptimizeOptions { threshold: 0.0, ..Default::default() }));
        assert!(bad(OptimizeOptions { noise_eps: 1.5, ..Default::default() }));
        assert!(bad(OptimizeOptions { eta: -1.0, ..Default::default() }));
    }

    #[test]
    fn noisy_run_reports_fidelity() {
        let x0 = Point::normalized(vec![0.86, 0.50]).unwrap();
        let opts = OptimizeOptions {
            noise_eps: 0.05,
            reference: Some(optimum()),
            ..Default::default()
        };
        let traj = optimize(&experiment(), &x0, &opts).unwrap();
        let f = traj.records[0].fidelity.unwrap();
        assert!(f < 1.0 && f > 0.9);
    }
}
