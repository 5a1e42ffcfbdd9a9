use super::{Point, TensorDecomposition, IMAG_TOL};
use crate::{CMatrix, Error, Result, C64};

/// Rayleigh quotients, per-term products and LCU weights at one point.
///
/// `c` is in flattened order `m = α·p + j` and already carries the
/// decomposition prefactor: `c_m = s · Π_{i≠j} b_i^α`.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientSet {
    /// `b[α][j] = xᵀ A_j^α x`.
    pub b: Vec<Vec<f64>>,
    /// `M^α = Π_i b_i^α`.
    pub big_m: Vec<f64>,
    pub c: Vec<f64>,
    /// `1 + Σ_m |c_m|`.
    pub total_weight: f64,
}

impl CoefficientSet {
    /// Builds the set from a `K × p` Rayleigh table.
    ///
    /// `c_m` is the product over the other factors of the same term, never
    /// `M^α / b_j^α`, so vanishing quotients are handled.
    pub fn from_rayleigh(b: Vec<Vec<f64>>, prefactor: f64) -> Self {
        let big_m: Vec<f64> = b.iter().map(|row| row.iter().product()).collect();
        let c: Vec<f64> = b
            .iter()
            .flat_map(|row| {
                (0..row.len()).map(move |j| {
                    let others: f64 = row
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != j)
                        .map(|(_, v)| v)
                        .product();
                    prefactor * others
                })
            })
            .collect();
        let total_weight = 1.0 + c.iter().map(|v| v.abs()).sum::<f64>();
        Self {
            b,
            big_m,
            c,
            total_weight,
        }
    }

    pub fn flat_len(&self) -> usize {
        self.c.len()
    }
}

/// The point-dependent operator `D = Σ_m c_m A_m`.
#[derive(Debug, Clone, PartialEq)]
pub struct DOperator {
    pub matrix: CMatrix,
}

impl DOperator {
    pub(crate) fn assemble(decomp: &TensorDecomposition, coeffs: &CoefficientSet) -> Self {
        let n = decomp.dim();
        let mut matrix = CMatrix::zeros(n, n);
        for (c, factor) in coeffs.c.iter().zip(decomp.flat_factors()) {
            if *c != 0.0 {
                matrix += factor.matrix() * C64::new(*c, 0.0);
            }
        }
        Self { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `D x` for a real point; fails if the result is not real.
    pub fn apply(&self, x: &Point) -> Result<Vec<f64>> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: x.dim(),
            });
        }
        let n = self.dim();
        let mut out = Vec::with_capacity(n);
        for r in 0..n {
            let v: C64 = (0..n).map(|c| self.matrix[(r, c)] * x.coords()[c]).sum();
            if v.im.abs() > IMAG_TOL {
                return Err(Error::ComplexUpdate(v.im));
            }
            out.push(v.re);
        }
        Ok(out)
    }
}
