use nalgebra::linalg::SymmetricEigen;

use super::QState;
use crate::{CMatrix, Error, Result, C64};

const DENSITY_TOL: f64 = 1e-10;
/// Minimum separation between the two largest eigenvalues in
/// [`DensityMatrix::purify`].
pub const PURIFY_GAP: f64 = 1e-10;

/// Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let n = matrix.nrows();
        if n == 0 || n != matrix.ncols() {
            return Err(Error::InvalidDensity(format!("shape {}x{}", n, matrix.ncols())));
        }
        let herm = crate::poly::max_abs_diff(&matrix, &matrix.adjoint());
        if !(herm <= DENSITY_TOL) {
            return Err(Error::InvalidDensity(format!("not Hermitian (deviation {herm:.3e})")));
        }
        let trace = matrix.trace();
        if !((trace - C64::new(1.0, 0.0)).norm() <= DENSITY_TOL) {
            return Err(Error::InvalidDensity(format!("trace {trace} differs from 1")));
        }
        let min_eig = SymmetricEigen::new(matrix.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min);
        if min_eig < -DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min_eig:.3e}")));
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|`.
    pub fn from_pure(state: &QState) -> Self {
        let v = nalgebra::DVector::from_column_slice(state.amplitudes());
        Self {
            matrix: &v * v.adjoint(),
        }
    }

    /// `I / dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim) * C64::new(1.0 / dim as f64, 0.0),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// `(1 − ε) ρ + ε I / dim`.
    pub fn depolarize(&self, eps: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps) {
            return Err(Error::InvalidNoise(eps));
        }
        let mixed = Self::maximally_mixed(self.dim());
        Ok(Self {
            matrix: &self.matrix * C64::new(1.0 - eps, 0.0) + mixed.matrix * C64::new(eps, 0.0),
        })
    }

    /// `tr(ρ σ)`, real part.
    pub fn trace_product(&self, other: &DensityMatrix) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        let n = self.dim();
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..n {
            for j in 0..n {
                acc += self.matrix[(i, j)] * other.matrix[(j, i)];
            }
        }
        Ok(acc.re)
    }

    /// `tr(ρ²)`.
    pub fn purity(&self) -> f64 {
        self.trace_product(self).expect("same dimension")
    }

    /// `tr(ρ σ) / √(tr(ρ²) tr(σ²))`.
    pub fn fidelity(&self, other: &DensityMatrix) -> Result<f64> {
        let cross = self.trace_product(other)?;
        Ok(cross / (self.purity() * other.purity()).sqrt())
    }

    /// Dominant eigenvector as a real unit vector.
    ///
    /// The phase is fixed so that the largest-magnitude component is real
    /// and positive; remaining imaginary parts are discarded and the result
    /// renormalised.
    pub fn purify(&self) -> Result<Vec<f64>> {
        let n = self.dim();
        if n == 1 {
            return Ok(vec![1.0]);
        }
        let eig = SymmetricEigen::new(self.matrix.clone());
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
        let gap = eig.eigenvalues[order[0]] - eig.eigenvalues[order[1]];
        if gap < PURIFY_GAP {
            return Err(Error::DegenerateEigenvalue(gap));
        }
        let v = eig.eigenvectors.column(order[0]);
        let pivot = (0..n)
            .max_by(|&a, &b| v[a].norm().total_cmp(&v[b].norm()).then(b.cmp(&a)))
            .expect("non-empty");
        let phase = v[pivot].conj() / v[pivot].norm();
        let real: Vec<f64> = v.iter().map(|z| (z * phase).re).collect();
        let norm = real.iter().map(|r| r * r).sum::<f64>().sqrt();
        Ok(real.into_iter().map(|r| r / norm).collect())
    }
}
