use super::{Point, TensorDecomposition};
use crate::{Error, Result};

/// Upper bound on `N^(2p)` for [`DenseTensor`].
pub const MAX_TENSOR_ENTRIES: usize = 1 << 20;

/// Dense real coefficient tensor of rank `2p`, stored row-major with `i_1`
/// most significant.
///
/// Index pair `(i_k, i_{p+k})` addresses row and column of factor `k`, so
/// `a_{i_1…i_2p} = s · Σ_α Π_k A_k^α[i_k, i_{p+k}]`. Only the real part is
/// kept: for real `x` the imaginary part contracts to zero whenever the
/// objective itself is real.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseTensor {
    dim: usize,
    rank: usize,
    data: Vec<f64>,
}

impl DenseTensor {
    pub(crate) fn from_decomposition(decomp: &TensorDecomposition) -> Result<Self> {
        let dim = decomp.dim();
        let order = decomp.order();
        let rank = 2 * order;
        let len = checked_len(dim, rank)?;
        let mut data = vec![0.0; len];
        let mut index = vec![0usize; rank];
        for (flat, slot) in data.iter_mut().enumerate() {
            decode(flat, dim, &mut index);
            let mut acc = 0.0;
            for term in decomp.terms() {
                let mut prod = num_complex::Complex64::new(1.0, 0.0);
                for (k, factor) in term.iter().enumerate() {
                    prod *= factor.matrix()[(index[k], index[order + k])];
                }
                acc += prod.re;
            }
            *slot = decomp.prefactor() * acc;
        }
        Ok(Self { dim, rank, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn get(&self, index: &[usize]) -> f64 {
        let flat = index.iter().fold(0, |acc, &i| acc * self.dim + i);
        self.data[flat]
    }

    /// Raw row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// `Σ a_{i_1…i_2p} x_{i_1} ⋯ x_{i_2p}`.
    pub fn contract(&self, x: &Point) -> Result<f64> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        let mut index = vec![0usize; self.rank];
        let mut total = 0.0;
        for (flat, a) in self.data.iter().enumerate() {
            if *a == 0.0 {
                continue;
            }
            decode(flat, self.dim, &mut index);
            total += a * index.iter().map(|&i| x.coords()[i]).product::<f64>();
        }
        Ok(total)
    }
}

fn checked_len(dim: usize, rank: usize) -> Result<usize> {
    let mut len: usize = 1;
    for _ in 0..rank {
        len = len.saturating_mul(dim);
    }
    if len > MAX_TENSOR_ENTRIES {
        return Err(Error::Capacity(len));
    }
    Ok(len)
}

fn decode(mut flat: usize, dim: usize, index: &mut [usize]) {
    for slot in index.iter_mut().rev() {
        *slot = flat % dim;
        flat /= dim;
    }
}
