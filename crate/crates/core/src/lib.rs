#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! Gradient descent on the unit sphere for homogeneous polynomial objectives,
//! executed as a linear combination of unitaries on an exact statevector
//! simulator.
//!
//! The objective is `f(x) = s · Σ_α Π_i xᵀ A_i^α x` for unitary factors
//! `A_i^α` (see [`poly::TensorDecomposition`]). One descent step maps the
//! current unit vector `x` to `(x − η D x) / ‖x − η D x‖`, where `D` is the
//! coefficient-weighted sum of the factors built in [`poly::CoefficientSet`].
//! The [`lcu`] module realises that step as a prepare / select / unprepare
//! circuit with post-selection on the ancilla registers and checks it against
//! the classical update.
//!
//! Modules:
//!
//! - [`poly`]: decompositions, objective evaluation, coefficients, the `D`
//!   operator and the classical update.
//! - [`sim`]: dense statevector and density-matrix simulator.
//! - [`lcu`]: the circuit for one iteration, coefficient estimation circuit
//!   and the optimisation loop.
//! - [`experiment`]: the two-dimensional quartic benchmark with its two
//!   starting points.
//! - [`mds`]: metric multidimensional scaling expressed in the same
//!   operator form.

pub mod error;
pub mod experiment;
pub mod lcu;
pub mod mds;
pub mod poly;
pub mod sim;

pub use error::{Error, Result};

/// Complex scalar used throughout.
pub type C64 = num_complex::Complex64;

/// Dense complex matrix.
pub type CMatrix = nalgebra::DMatrix<C64>;
