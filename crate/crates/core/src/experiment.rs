//! The two-dimensional quartic benchmark.
//!
//! `f(x) = ½ (x ⊗ x)ᵀ (−I ⊗ X + X ⊗ Z) (x ⊗ x)` on the unit circle, which
//! reduces to `−2 sin³θ cos θ` for `x = (cos θ, sin θ)`. Its minimum on
//! the circle is at `θ = π/3` (and the antipode), `θ = 0` is an unstable
//! stationary point. Two starting points are tracked: S1 at
//! `(−0.38, 0.92)` and S2 at `(0.86, 0.50)`, both renormalised.

use std::fmt;
use std::io::{self, Write};
use std::str::FromStr;

use serde::Serialize;

use crate::lcu::{optimize, Mode, OptimizeOptions};
use crate::poly::{Point, TensorDecomposition, UnitaryFactor};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Case {
    S1,
    S2,
}

impl Case {
    pub const ALL: [Case; 2] = [Case::S1, Case::S2];

    pub fn index(self) -> u64 {
        match self {
            Case::S1 => 0,
            Case::S2 => 1,
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Case::S1 => "s1",
            Case::S2 => "s2",
        })
    }
}

impl FromStr for Case {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s1" => Ok(Case::S1),
            "s2" => Ok(Case::S2),
            other => Err(Error::InvalidArgument(format!("unknown case {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub decomposition: TensorDecomposition,
    pub x0_s1: Point,
    pub x0_s2: Point,
    pub x_opt: Point,
    /// Step scale on the ½-prefactor decomposition. `2` gives circuit
    /// weights `c_m = Π_{i≠j} b_i^α` on the unitaries `−I, X, X, Z`.
    pub eta: f64,
    pub threshold: f64,
    pub max_iters: usize,
}

impl ExperimentConfig {
    pub fn quartic() -> Self {
        Self {
            decomposition: quartic_decomposition(),
            x0_s1: Point::normalized(vec![-0.38, 0.92]).expect("non-zero"),
            x0_s2: Point::normalized(vec![0.86, 0.50]).expect("non-zero"),
            x_opt: Point::new(vec![0.5, 3f64.sqrt() / 2.0]).expect("unit"),
            eta: 2.0,
            threshold: 1e-3,
            max_iters: 12,
        }
    }

    pub fn start(&self, case: Case) -> &Point {
        match case {
            Case::S1 => &self.x0_s1,
            Case::S2 => &self.x0_s2,
        }
    }
}

/// `½ (−I ⊗ X + X ⊗ Z)`.
pub fn quartic_decomposition() -> TensorDecomposition {
    let f = |label| UnitaryFactor::pauli(label).expect("valid label");
    TensorDecomposition::new(vec![vec![f("-I"), f("X")], vec![f("X"), f("Z")]], 0.5).expect("consistent shapes")
}

/// `−2 sin³θ cos θ`.
pub fn objective_theta(theta: f64) -> f64 {
    -2.0 * theta.sin().powi(3) * theta.cos()
}

/// `d/dθ (−2 sin³θ cos θ) = −2 sin²θ (3 cos²θ − sin²θ)`.
pub fn objective_theta_derivative(theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    -2.0 * s * s * (3.0 * c * c - s * s)
}

/// `⟨a|b⟩` for real points.
pub fn overlap(a: &Point, b: &Point) -> Result<f64> {
    a.dot(b)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryRecord {
    pub iter: usize,
    pub point: Point,
    pub f_value: f64,
    pub overlap: f64,
    /// Absent for the starting point.
    pub success_prob: Option<f64>,
    pub fidelity: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CaseRun {
    pub case: Case,
    pub records: Vec<TrajectoryRecord>,
    pub converged: bool,
}

impl CaseRun {
    pub fn final_record(&self) -> &TrajectoryRecord {
        self.records.last().expect("starting point is always recorded")
    }

    /// First iteration whose `|overlap|` reaches `level`.
    pub fn first_reaching(&self, level: f64) -> Option<usize> {
        self.records.iter().find(|r| r.overlap.abs() >= level).map(|r| r.iter)
    }
}

/// Runs one case with the config's step scale, threshold and budget.
/// Record `0` is the starting point.
pub fn run_case(config: &ExperimentConfig, case: Case, mode: Mode, noise_eps: f64) -> Result<CaseRun> {
    let x0 = config.start(case);
    let options = OptimizeOptions {
        eta: config.eta,
        threshold: config.threshold,
        max_iters: config.max_iters,
        mode,
        noise_eps,
        reference: Some(config.x_opt.clone()),
    };
    let traj = optimize(&config.decomposition, x0, &options)?;
    let mut records = vec![TrajectoryRecord {
        iter: 0,
        point: x0.clone(),
        f_value: traj.initial_f,
        overlap: overlap(x0, &config.x_opt)?,
        success_prob: None,
        fidelity: None,
    }];
    records.extend(traj.records.iter().map(|r| TrajectoryRecord {
        iter: r.iter,
        point: r.point.clone(),
        f_value: r.f_value,
        overlap: r.overlap.expect("reference supplied"),
        success_prob: Some(r.success_prob),
        fidelity: r.fidelity,
    }));
    Ok(CaseRun {
        case,
        records,
        converged: traj.converged,
    })
}

/// Writes `iter,case,x1,x2,f,overlap,success_prob` rows, plus a `fidelity`
/// column when any record carries one.
pub fn write_csv<W: Write>(mut out: W, runs: &[CaseRun]) -> io::Result<()> {
    let noisy = runs.iter().flat_map(|r| &r.records).any(|r| r.fidelity.is_some());
    write!(out, "iter,case,x1,x2,f,overlap,success_prob")?;
    if noisy {
        write!(out, ",fidelity")?;
    }
    writeln!(out)?;
    let opt = |v: Option<f64>| v.map(|v| v.to_string()).unwrap_or_default();
    for run in runs {
        for r in &run.records {
            let c = r.point.coords();
            write!(
                out,
                "{},{},{},{},{},{},{}",
                r.iter,
                run.case,
                c[0],
                c[1],
                r.f_value,
                r.overlap,
                opt(r.success_prob)
            )?;
            if noisy {
                write!(out, ",{}", opt(r.fidelity))?;
            }
            writeln!(out)?;
        }
    }
    Ok(())
}
