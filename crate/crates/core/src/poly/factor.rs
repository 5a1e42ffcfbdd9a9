use nalgebra::DMatrix;

use super::{pauli, Point, IMAG_TOL, SYMMETRY_TOL, UNITARY_TOL};
use crate::{CMatrix, Error, Result, C64};

/// A square unitary matrix used as one tensor factor `A_i^α`.
///
/// Construction checks unitarity; the symmetric flag and an optional Pauli
/// label (used for compact serialisation) are derived at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryFactor {
    matrix: CMatrix,
    symmetric: bool,
    label: Option<String>,
}

impl UnitaryFactor {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(Error::InvalidDecomposition(format!(
                "factor must be a non-empty square matrix, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let deviation = unitarity_deviation(&matrix);
        if !(deviation <= UNITARY_TOL) {
            return Err(Error::NotUnitary(deviation));
        }
        let symmetric = max_abs_diff(&matrix, &matrix.transpose()) <= SYMMETRY_TOL;
        Ok(Self {
            matrix,
            symmetric,
            label: None,
        })
    }

    /// Builds a real factor from a row-major slice.
    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: entries.len(),
            });
        }
        Self::new(DMatrix::from_row_iterator(
            dim,
            dim,
            entries.iter().map(|&v| C64::new(v, 0.0)),
        ))
    }

    /// Parses a signed Pauli string such as `"X"`, `"-I"` or `"XZ"`.
    pub fn pauli(label: &str) -> Result<Self> {
        let (canonical, matrix) = pauli::parse_label(label)?;
        let mut factor = Self::new(matrix)?;
        factor.label = Some(canonical);
        Ok(factor)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim),
            symmetric: true,
            label: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn pauli_label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn is_real(&self) -> bool {
        self.matrix.iter().all(|z| z.im == 0.0)
    }

    /// Returns `-U`, keeping the Pauli label in sync.
    pub fn negated(&self) -> Self {
        Self {
            matrix: -self.matrix.clone(),
            symmetric: self.symmetric,
            label: self.label.as_ref().map(|l| match l.strip_prefix('-') {
                Some(rest) => rest.to_string(),
                None => format!("-{l}"),
            }),
        }
    }

    /// `U x` for a real vector.
    pub(crate) fn apply_real(&self, x: &[f64]) -> Vec<C64> {
        let n = self.dim();
        (0..n)
            .map(|r| (0..n).map(|c| self.matrix[(r, c)] * x[c]).sum())
            .collect()
    }
}

/// `xᵀ U x` for a real unit vector. Fails when the result has a
/// non-negligible imaginary part.
pub fn rayleigh(factor: &UnitaryFactor, x: &Point) -> Result<f64> {
    if factor.dim() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: factor.dim(),
            found: x.dim(),
        });
    }
    let ux = factor.apply_real(x.coords());
    let value: C64 = x.coords().iter().zip(&ux).map(|(a, b)| b * *a).sum();
    if value.im.abs() > IMAG_TOL {
        return Err(Error::ComplexRayleigh(value.im));
    }
    Ok(value.re)
}

pub(crate) fn unitarity_deviation(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let product = m * m.adjoint();
    max_abs_diff(&product, &CMatrix::identity(n, n))
}

pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_unitary() {
        let err = UnitaryFactor::from_real(2, &[1.0, 1.0, 0.0, 1.0]).unwrap_err();
        assert!(matches!(err, Error::NotUnitary(_)));
    }

    #[test]
    fn symmetric_flag() {
        assert!(UnitaryFactor::pauli("X").unwrap().is_symmetric());
        assert!(!UnitaryFactor::pauli("Y").unwrap().is_symmetric());
        let rot = UnitaryFactor::from_real(2, &[0.6, -0.8, 0.8, 0.6]).unwrap();
        assert!(!rot.is_symmetric());
    }

    #[test]
    fn rayleigh_eigenvectors() {
        let z = UnitaryFactor::pauli("Z").unwrap();
        let x = UnitaryFactor::pauli("X").unwrap();
        let minus_i = UnitaryFactor::pauli("-I").unwrap();
        let e0 = Point::new(vec![1.0, 0.0]).unwrap();
        let plus = Point::normalized(vec![1.0, 1.0]).unwrap();
        assert_eq!(rayleigh(&z, &e0).unwrap(), 1.0);
        assert!((rayleigh(&x, &plus).unwrap() - 1.0).abs() < 1e-15);
        let any = Point::normalized(vec![0.3, -0.7]).unwrap();
        assert!((rayleigh(&minus_i, &any).unwrap() + 1.0).abs() < 1e-15);
    }

    #[test]
    fn rayleigh_rejects_complex_value() {
        // S = diag(1, i) gives x0² + i x1²
        let s = UnitaryFactor::new(CMatrix::from_row_slice(
            2,
            2,
            &[C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0)],
        ))
        .unwrap();
        let plus = Point::normalized(vec![1.0, 1.0]).unwrap();
        assert!(matches!(rayleigh(&s, &plus), Err(Error::ComplexRayleigh(_))));
    }

    #[test]
    fn rayleigh_dimension_mismatch() {
        let z = UnitaryFactor::pauli("Z").unwrap();
        let p = Point::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(rayleigh(&z, &p), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn negation_flips_label() {
        let x = UnitaryFactor::pauli("X").unwrap();
        assert_eq!(x.negated().pauli_label(), Some("-X"));
        assert_eq!(x.negated().negated().pauli_label(), Some("X"));
    }
}
