use super::ceil_log2;
use crate::poly::CoefficientSet;
use crate::{CMatrix, Error, Result, C64};

const GRAM_SCHMIDT_TOL: f64 = 1e-10;

/// State-preparation data for one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct PrepareSpec {
    /// `1 + η Σ_m |c_m|`.
    pub beta: f64,
    /// Flag rotation with first column `(1/√β, √((β−1)/β))`.
    pub v0: CMatrix,
    /// Select-register unitary whose first column is `amplitudes`.
    pub v: CMatrix,
    /// `√(η|c_m| / (η Σ|c|))`, zero padded to `2^t1`.
    pub amplitudes: Vec<f64>,
    /// `σ_m = sign(−η c_m)`, with `+1` for `c_m = 0`.
    pub signs: Vec<f64>,
}

pub fn build_prepare(coeffs: &CoefficientSet, eta: f64) -> Result<PrepareSpec> {
    PrepareSpec::from_weights(&coeffs.c, eta)
}

impl PrepareSpec {
    /// Preparation for the weighted sum `x − η Σ_m c_m A_m x`.
    pub fn from_weights(c: &[f64], eta: f64) -> Result<Self> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidEta(eta));
        }
        if c.is_empty() || c.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("weights must be non-empty and finite".into()));
        }
        let width = 1usize << ceil_log2(c.len());
        let scaled: Vec<f64> = c.iter().map(|v| eta * v.abs()).collect();
        let total: f64 = scaled.iter().sum();
        let beta = 1.0 + total;
        let signs = c.iter().map(|v| if -eta * v < 0.0 { -1.0 } else { 1.0 }).collect();

        let mut amplitudes = vec![0.0; width];
        if total > 0.0 {
            for (a, s) in amplitudes.iter_mut().zip(&scaled) {
                *a = (s / total).sqrt();
            }
        } else {
            amplitudes[0] = 1.0;
        }

        let v0 = if total > 0.0 {
            let a = 1.0 / beta.sqrt();
            let b = (total / beta).sqrt();
            CMatrix::from_row_slice(2, 2, &[re(a), re(b), re(b), re(-a)])
        } else {
            CMatrix::identity(2, 2)
        };
        let v = complete_basis(&amplitudes);
        Ok(Self {
            beta,
            v0,
            v,
            amplitudes,
            signs,
        })
    }
}

fn re(v: f64) -> C64 {
    C64::new(v, 0.0)
}

/// Orthonormal completion of a unit vector by Gram–Schmidt over the
/// standard basis `e_0, e_1, …`, returned as the columns of a unitary.
fn complete_basis(first: &[f64]) -> CMatrix {
    let d = first.len();
    let mut columns: Vec<Vec<f64>> = vec![first.to_vec()];
    for k in 0..d {
        if columns.len() == d {
            break;
        }
        let mut w = vec![0.0; d];
        w[k] = 1.0;
        // classical Gram–Schmidt, applied twice
        for _ in 0..2 {
            for q in &columns {
                let proj: f64 = q.iter().zip(&w).map(|(a, b)| a * b).sum();
                for (wi, qi) in w.iter_mut().zip(q) {
                    *wi -= proj * qi;
                }
            }
        }
        let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > GRAM_SCHMIDT_TOL {
            columns.push(w.into_iter().map(|v| v / norm).collect());
        }
    }
    CMatrix::from_fn(d, d, |r, c| re(columns[c][r]))
}
