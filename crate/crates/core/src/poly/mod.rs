//! Tensor-decomposed homogeneous polynomials on the unit sphere.
//!
//! A [`TensorDecomposition`] stores `K` terms of `p` unitary factors each
//! together with a global real prefactor `s`; it represents
//!
//! ```text
//! f(x) = s · (x ⊗ … ⊗ x)ᵀ (Σ_α A_1^α ⊗ … ⊗ A_p^α) (x ⊗ … ⊗ x)
//!      = s · Σ_α Π_i xᵀ A_i^α x
//! ```
//!
//! Factors are addressed in flattened order `m = α·p + j` (zero based)
//! wherever a single index is needed.

mod coefficients;
mod decomposition;
mod factor;
pub mod io;
pub mod pauli;
mod point;
mod tensor;

pub use coefficients::{CoefficientSet, DOperator};
pub use decomposition::{ClassicalStep, TensorDecomposition};
pub use factor::{rayleigh, UnitaryFactor};
pub(crate) use factor::{max_abs_diff, unitarity_deviation as factor_unitarity};
pub use point::Point;
pub use tensor::DenseTensor;

/// Entrywise tolerance for the unitarity check on factors.
pub const UNITARY_TOL: f64 = 1e-10;
/// Entrywise tolerance below which a factor is considered symmetric.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Largest imaginary part tolerated in `xᵀ U x` for real `x`.
pub const IMAG_TOL: f64 = 1e-12;
