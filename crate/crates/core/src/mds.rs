//! Metric multidimensional scaling in trace form.
//!
//! With `A_ij = (e_i − e_j)(e_i − e_j)ᵀ` the pairwise squared distance of a
//! configuration `X` (`n × m`) is `tr(Xᵀ A_ij X)`. The raw stress
//! `½ ΣΣ w_ij (d_ij − δ_ij)²` splits as `½ ΣΣ w_ij δ_ij² − 2 g(X) + h²(X)`
//! with `g = tr(Xᵀ B X)`, `h² = tr(Xᵀ C X)` and
//!
//! ```text
//! B(X) = ½ ΣΣ w_ij δ_ij k_ij(X) A_ij,   k_ij = 1/d_ij if d_ij ≠ 0 else 0
//! C    = ½ ΣΣ w_ij A_ij
//! D(X) = C − 2 B(X)
//! ```
//!
//! so the variable part of the stress is `tr(Xᵀ D(X) X)`. The optimizer
//! steps along `(C − B(X)) X`, which is half the stress gradient (the
//! dependence of `B` on `X` halves the `B` contribution relative to a
//! frozen `D`).

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::lcu::run_lcu;
use crate::poly::pauli::decompose_symmetric;
use crate::poly::Point;
use crate::{CMatrix, Error, Result};

const INPUT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct Dissimilarities(DMatrix<f64>);

#[derive(Debug, Clone, PartialEq)]
pub struct Weights(DMatrix<f64>);

/// `n` points in `m` dimensions, one point per row.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration(DMatrix<f64>);

fn check_square_symmetric(m: &DMatrix<f64>, what: &str) -> Result<()> {
    let n = m.nrows();
    if n == 0 || n != m.ncols() {
        return Err(Error::InvalidMdsInput(format!("{what} must be square, got {}x{}", n, m.ncols())));
    }
    for i in 0..n {
        if m[(i, i)] != 0.0 {
            return Err(Error::InvalidMdsInput(format!("{what} has non-zero diagonal entry at {i}")));
        }
        for j in 0..n {
            let v = m[(i, j)];
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidMdsInput(format!("{what}[{i}][{j}] = {v} must be finite and >= 0")));
            }
            if (v - m[(j, i)]).abs() > INPUT_TOL {
                return Err(Error::InvalidMdsInput(format!("{what} is not symmetric at ({i}, {j})")));
            }
        }
    }
    Ok(())
}

impl Dissimilarities {
    pub fn new(delta: DMatrix<f64>) -> Result<Self> {
        check_square_symmetric(&delta, "dissimilarity matrix")?;
        Ok(Self(delta))
    }

    /// Pairwise distances of a configuration.
    pub fn from_configuration(x: &Configuration) -> Self {
        Self(distances(x))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

impl Weights {
    pub fn new(w: DMatrix<f64>) -> Result<Self> {
        check_square_symmetric(&w, "weight matrix")?;
        Ok(Self(w))
    }

    /// Unit weights off the diagonal.
    pub fn ones(n: usize) -> Self {
        Self(DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { 1.0 }))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

impl Configuration {
    pub fn new(x: DMatrix<f64>) -> Result<Self> {
        if x.nrows() == 0 || x.ncols() == 0 {
            return Err(Error::InvalidMdsInput("configuration must be non-empty".into()));
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidMdsInput("configuration has non-finite entries".into()));
        }
        Ok(Self(x))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidMdsInput("ragged configuration rows".into()));
        }
        Self::new(DMatrix::from_fn(n, m, |i, j| rows[i][j]))
    }

    /// Uniform coordinates in `[-1, 1)`.
    pub fn random(n: usize, dims: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self(DMatrix::from_fn(n, dims, |_, _| rng.random_range(-1.0..1.0)))
    }

    pub fn n(&self) -> usize {
        self.0.nrows()
    }

    pub fn dims(&self) -> usize {
        self.0.ncols()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n()).map(|i| self.0.row(i).iter().copied().collect()).collect()
    }
}

/// Stress with its decomposition `stress = constant − 2g + h²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StressParts {
    pub stress: f64,
    pub constant: f64,
    pub g: f64,
    pub h2: f64,
}

fn check_shapes(delta: &Dissimilarities, w: &Weights, x: Option<&Configuration>) -> Result<()> {
    let n = delta.n();
    let bad = |found| Err(Error::DimensionMismatch { expected: n, found });
    if w.n() != n {
        return bad(w.n());
    }
    match x {
        Some(x) if x.n() != n => bad(x.n()),
        _ => Ok(()),
    }
}

/// Classical (Torgerson) scaling: the top `dims` eigenpairs of the
/// double-centred matrix `−½ J Δ² J`, negative eigenvalues clamped to zero.
pub fn classical_scaling(delta: &Dissimilarities, dims: usize) -> Result<Configuration> {
    let n = delta.n();
    if dims == 0 || dims > n {
        return Err(Error::InvalidArgument(format!("cannot embed {n} points in {dims} dimensions")));
    }
    let sq = delta.matrix().map(|v| v * v);
    let j = DMatrix::identity(n, n) - DMatrix::from_element(n, n, 1.0 / n as f64);
    let b = &j * sq * &j * -0.5;
    let eig = b.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &c| eig.eigenvalues[c].total_cmp(&eig.eigenvalues[a]));
    let x = DMatrix::from_fn(n, dims, |i, k| {
        let idx = order[k];
        eig.eigenvectors[(i, idx)] * eig.eigenvalues[idx].max(0.0).sqrt()
    });
    Configuration::new(x)
}

/// Euclidean distance matrix of the rows of `x`.
pub fn distances(x: &Configuration) -> DMatrix<f64> {
    let n = x.n();
    let m = x.matrix();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            0.0
        } else {
            (m.row(i) - m.row(j)).norm()
        }
    })
}

pub fn stress(delta: &Dissimilarities, w: &Weights, x: &Configuration) -> Result<StressParts> {
    check_shapes(delta, w, Some(x))?;
    let d = distances(x);
    let (w, delta) = (w.matrix(), delta.matrix());
    let n = d.nrows();
    let (mut stress, mut constant, mut g, mut h2) = (0.0, 0.0, 0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            let (wij, dij, sij) = (w[(i, j)], d[(i, j)], delta[(i, j)]);
            stress += wij * (dij - sij).powi(2);
            constant += wij * sij * sij;
            g += wij * sij * dij;
            h2 += wij * dij * dij;
        }
    }
    Ok(StressParts {
        stress: 0.5 * stress,
        constant: 0.5 * constant,
        g: 0.5 * g,
        h2: 0.5 * h2,
    })
}

/// `Σ_ij coef_ij A_ij` over ordered pairs, scaled by ½.
fn laplacian(n: usize, coef: impl Fn(usize, usize) -> f64) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let c = 0.5 * coef(i, j);
            out[(i, i)] += c;
            out[(j, j)] += c;
            out[(i, j)] -= c;
            out[(j, i)] -= c;
        }
    }
    out
}

pub fn b_matrix(delta: &Dissimilarities, w: &Weights, x: &Configuration) -> Result<DMatrix<f64>> {
    check_shapes(delta, w, Some(x))?;
    let d = distances(x);
    Ok(laplacian(delta.n(), |i, j| {
        let k = if d[(i, j)] != 0.0 { 1.0 / d[(i, j)] } else { 0.0 };
        w.matrix()[(i, j)] * delta.matrix()[(i, j)] * k
    }))
}

pub fn c_matrix(w: &Weights) -> DMatrix<f64> {
    laplacian(w.n(), |i, j| w.matrix()[(i, j)])
}

/// `C − 2 B(X)`.
pub fn d_matrix(delta: &Dissimilarities, w: &Weights, x: &Configuration) -> Result<DMatrix<f64>> {
    Ok(c_matrix(w) - b_matrix(delta, w, x)? * 2.0)
}

/// `C − B(X)`, the operator the optimizer applies columnwise.
pub fn gradient_operator(delta: &Dissimilarities, w: &Weights, x: &Configuration) -> Result<DMatrix<f64>> {
    Ok(c_matrix(w) - b_matrix(delta, w, x)?)
}

/// `Σ_v X_vᵀ D(X) X_v` over the columns of `X`.
pub fn f_prime(delta: &Dissimilarities, w: &Weights, x: &Configuration) -> Result<f64> {
    let d = d_matrix(delta, w, x)?;
    Ok(x.matrix()
        .column_iter()
        .map(|col| {
            let col: DVector<f64> = col.into_owned();
            col.dot(&(&d * &col))
        })
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MdsOptions {
    pub eta: f64,
    pub max_iters: usize,
    /// Stop once a step improves the stress by less than this.
    pub tol: f64,
}

impl Default for MdsOptions {
    fn default() -> Self {
        Self {
            eta: 0.05,
            max_iters: 500,
            tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MdsStep {
    pub iter: usize,
    pub config: Configuration,
    pub stress: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MdsRun {
    /// Step `0` is the starting configuration.
    pub steps: Vec<MdsStep>,
    pub converged: bool,
    /// Steps at which the stress went up.
    pub increases: Vec<usize>,
}

impl MdsRun {
    pub fn final_step(&self) -> &MdsStep {
        self.steps.last().expect("starting configuration is always recorded")
    }
}

/// Fixed-step descent `X ← X − η (C − B(X)) X`.
///
/// Stops when a step lowers the stress by less than `tol` (and not below
/// zero improvement) or after `max_iters` steps. Stress increases are
/// recorded and the run continues.
pub fn mds_optimize(delta: &Dissimilarities, w: &Weights, x0: &Configuration, options: &MdsOptions) -> Result<MdsRun> {
    check_shapes(delta, w, Some(x0))?;
    if !(options.eta > 0.0 && options.eta.is_finite()) {
        return Err(Error::InvalidEta(options.eta));
    }
    let mut x = x0.clone();
    let mut current = stress(delta, w, &x)?.stress;
    let mut steps = vec![MdsStep {
        iter: 0,
        config: x.clone(),
        stress: current,
    }];
    let mut increases = Vec::new();
    let mut converged = false;
    for iter in 1..=options.max_iters {
        let g = gradient_operator(delta, w, &x)?;
        let next = Configuration::new(x.matrix() - &g * x.matrix() * options.eta)?;
        let next_stress = stress(delta, w, &next)?.stress;
        let improvement = current - next_stress;
        if improvement < 0.0 {
            increases.push(iter);
        }
        steps.push(MdsStep {
            iter,
            config: next.clone(),
            stress: next_stress,
        });
        x = next;
        current = next_stress;
        if (0.0..options.tol).contains(&improvement) {
            converged = true;
            break;
        }
    }
    Ok(MdsRun {
        steps,
        converged,
        increases,
    })
}

/// One column of `X` pushed through the circuit next to the classical step.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnDemo {
    pub column: usize,
    /// Number of Pauli strings in the expansion of `C − B(X)`.
    pub terms: usize,
    pub classical: Vec<f64>,
    pub quantum: Vec<f64>,
    pub success_prob: f64,
    pub max_abs_diff: f64,
}

/// Normalises column `column` of `X`, expands `C − B(X)` in Pauli strings
/// (`n` must be a power of two) and applies `v ↦ v − η (C − B) v` on the
/// simulator. The classical normalised update is returned for comparison.
pub fn quantum_column_step(
    delta: &Dissimilarities,
    w: &Weights,
    x: &Configuration,
    column: usize,
    eta: f64,
) -> Result<ColumnDemo> {
    if column >= x.dims() {
        return Err(Error::InvalidArgument(format!("column {column} out of range")));
    }
    let op = gradient_operator(delta, w, x)?;
    let terms = decompose_symmetric(&op, 1e-12)?;
    let v = Point::normalized(x.matrix().column(column).iter().copied().collect())?;

    let classical_raw: Vec<f64> = {
        let vv = DVector::from_column_slice(v.coords());
        (&vv - &op * &vv * eta).iter().copied().collect()
    };
    let classical = Point::normalized(classical_raw)?;

    let weights: Vec<f64> = terms.iter().map(|(c, _)| *c).collect();
    let unitaries: Vec<&CMatrix> = terms.iter().map(|(_, f)| f.matrix()).collect();
    let run = run_lcu(&weights, &unitaries, v.coords(), eta)?;
    let quantum = crate::lcu::read_point(&run.post_state, v.dim())?.aligned_with(&classical);

    let max_abs_diff = quantum
        .coords()
        .iter()
        .zip(classical.coords())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok(ColumnDemo {
        column,
        terms: terms.len(),
        classical: classical.into_coords(),
        quantum: quantum.into_coords(),
        success_prob: run.success_prob,
        max_abs_diff,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> Configuration {
        Configuration::from_rows(&[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap()
    }

    #[test]
    fn validation() {
        let asym = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 2.0, 0.0]);
        assert!(Dissimilarities::new(asym).is_err());
        let neg = DMatrix::from_row_slice(2, 2, &[0.0, -1.0, -1.0, 0.0]);
        assert!(Dissimilarities::new(neg.clone()).is_err());
        assert!(Weights::new(neg).is_err());
        let diag = DMatrix::from_row_slice(2, 2, &[1.0, 1.0, 1.0, 0.0]);
        assert!(Dissimilarities::new(diag).is_err());
        assert!(Configuration::from_rows(&[vec![0.0], vec![1.0, 2.0]]).is_err());
        assert!(Configuration::from_rows(&[vec![f64::NAN]]).is_err());
    }

    #[test]
    fn three_four_five() {
        let x = Configuration::from_rows(&[vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(distances(&x)[(0, 1)], 5.0);
        let same = Configuration::from_rows(&[vec![1.0, 2.0], vec![1.0, 2.0]]).unwrap();
        assert_eq!(distances(&same), DMatrix::zeros(2, 2));
    }

    #[test]
    fn perfect_fit_has_zero_stress() {
        let x = square();
        let delta = Dissimilarities::from_configuration(&x);
        let w = Weights::ones(4);
        let s = stress(&delta, &w, &x).unwrap();
        assert!(s.stress.abs() < 1e-15);
        assert!((f_prime(&delta, &w, &x).unwrap() + s.constant).abs() < 1e-12);
    }

    #[test]
    fn zero_weights() {
        let x = square();
        let delta = Dissimilarities::from_configuration(&x);
        let w = Weights::new(DMatrix::zeros(4, 4)).unwrap();
        assert_eq!(b_matrix(&delta, &w, &x).unwrap(), DMatrix::zeros(4, 4));
        assert_eq!(c_matrix(&w), DMatrix::zeros(4, 4));
        assert_eq!(d_matrix(&delta, &w, &x).unwrap(), DMatrix::zeros(4, 4));
        assert_eq!(f_prime(&delta, &w, &x).unwrap(), 0.0);
    }

    #[test]
    fn coincident_points_skip_b() {
        let x = Configuration::from_rows(&vec![vec![0.5, 0.5]; 3]).unwrap();
        let delta = Dissimilarities::new(DMatrix::from_fn(3, 3, |i, j| if i == j { 0.0 } else { 1.0 })).unwrap();
        let w = Weights::ones(3);
        assert_eq!(b_matrix(&delta, &w, &x).unwrap(), DMatrix::zeros(3, 3));
        assert_eq!(d_matrix(&delta, &w, &x).unwrap(), c_matrix(&w));
    }

    #[test]
    fn row_sums_vanish() {
        let x = Configuration::from_rows(&[vec![0.1, 0.3], vec![1.2, -0.4], vec![0.7, 0.9]]).unwrap();
        let delta = Dissimilarities::new(DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 2.0, 1.0, 0.0, 1.5, 2.0, 1.5, 0.0])).unwrap();
        let w = Weights::ones(3);
        for m in [b_matrix(&delta, &w, &x).unwrap(), c_matrix(&w), d_matrix(&delta, &w, &x).unwrap()] {
            for i in 0..3 {
                assert!(m.row(i).sum().abs() < 1e-14);
                for j in 0..3 {
                    assert_eq!(m[(i, j)], m[(j, i)]);
                }
            }
        }
    }

    #[test]
    fn perfect_embedding_stays_put() {
        let x = square();
        let delta = Dissimilarities::from_configuration(&x);
        let run = mds_optimize(&delta, &Weights::ones(4), &x, &MdsOptions::default()).unwrap();
        assert!(run.steps.iter().all(|s| s.stress < 1e-20));
        assert!(run.converged);
    }

    #[test]
    fn quantum_column_matches_classical() {
        let x = Configuration::from_rows(&[vec![0.1, 0.2], vec![0.9, -0.1], vec![1.1, 1.0], vec![-0.2, 0.8]]).unwrap();
        let delta = Dissimilarities::from_configuration(&square());
        let w = Weights::ones(4);
        for column in 0..2 {
            let demo = quantum_column_step(&delta, &w, &x, column, 0.1).unwrap();
            assert!(demo.max_abs_diff < 1e-9, "{demo:?}");
            assert!(demo.success_prob > 0.0 && demo.success_prob <= 1.0);
        }
        let three = Configuration::from_rows(&[vec![0.0], vec![1.0], vec![2.0]]).unwrap();
        let d3 = Dissimilarities::from_configuration(&three);
        assert!(quantum_column_step(&d3, &Weights::ones(3), &three, 0, 0.1).is_err());
    }

    #[test]
    fn classical_scaling_recovers_square() {
        let delta = Dissimilarities::from_configuration(&square());
        let x = classical_scaling(&delta, 2).unwrap();
        let s = stress(&delta, &Weights::ones(4), &x).unwrap().stress;
        assert!(s < 1e-20, "{s}");
        assert!(classical_scaling(&delta, 5).is_err());
    }

    #[test]
    fn shape_mismatch() {
        let x = square();
        let delta = Dissimilarities::from_configuration(&x);
        assert!(stress(&delta, &Weights::ones(3), &x).is_err());
    }
}
