use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not unitary (max |UU† - I| = {0:.3e})")]
    NotUnitary(f64),

    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("point must have unit norm, found norm {0}")]
    NotUnitNorm(f64),

    #[error("dense coefficient tensor needs {0} entries, limit is 2^20")]
    Capacity(usize),

    #[error("x^T U x has imaginary part {0:.3e}; factors must be real on real points")]
    ComplexRayleigh(f64),

    #[error("update x - eta*Dx has imaginary part {0:.3e}")]
    ComplexUpdate(f64),

    #[error("degenerate step: ||x - eta*Dx|| = {0:.3e}")]
    DegenerateStep(f64),

    #[error("learning rate must be positive and finite, got {0}")]
    InvalidEta(f64),

    #[error("invalid qubit selection: {0}")]
    BadQubits(String),

    #[error("state needs {0} qubits, limit is 20")]
    TooManyQubits(usize),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("post-selection failed: outcome probability {0:.3e}")]
    PostSelection(f64),

    #[error("depolarizing strength must lie in [0, 1], got {0}")]
    InvalidNoise(f64),

    #[error("invalid density matrix: {0}")]
    InvalidDensity(String),

    #[error("dominant eigenvalue is degenerate (gap {0:.3e})")]
    DegenerateEigenvalue(f64),

    #[error("invalid MDS input: {0}")]
    InvalidMdsInput(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed problem file: {0}")]
    Parse(String),
}
