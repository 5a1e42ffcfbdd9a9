//! JSON form of decompositions and optimisation problems.
//!
//! ```json
//! {
//!   "dim": 2,
//!   "p": 2,
//!   "prefactor": 0.5,
//!   "terms": [
//!     [{"pauli": "-I"}, {"pauli": "X"}],
//!     [{"pauli": "X"}, {"dense": [[1,0],[0,0],[0,0],[-1,0]]}]
//!   ],
//!   "x0": [0.86, 0.5],
//!   "reference": [0.5, 0.8660254037844386]
//! }
//! ```
//!
//! A factor is either a signed Pauli string (one letter per qubit, so its
//! length must be `log2(dim)`) or a dense row-major list of `dim²`
//! `[re, im]` pairs. `x0` and `reference` are optional and only read by the
//! problem-level API; `x0` is renormalised onto the sphere.

use serde::{Deserialize, Serialize};

use super::{Point, TensorDecomposition, UnitaryFactor};
use crate::{CMatrix, Error, Result, C64};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactorSpec {
    Pauli(String),
    Dense(Vec<[f64; 2]>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionSpec {
    pub dim: usize,
    pub p: usize,
    pub prefactor: f64,
    pub terms: Vec<Vec<FactorSpec>>,
}

/// A decomposition plus optional start and reference points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProblemSpec {
    #[serde(flatten)]
    pub decomposition: DecompositionSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x0: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference: Option<Vec<f64>>,
}

/// Parsed and validated problem.
#[derive(Debug, Clone, PartialEq)]
pub struct Problem {
    pub decomposition: TensorDecomposition,
    pub x0: Option<Point>,
    pub reference: Option<Point>,
}

impl FactorSpec {
    fn build(&self, dim: usize) -> Result<UnitaryFactor> {
        match self {
            FactorSpec::Pauli(label) => {
                let f = UnitaryFactor::pauli(label)?;
                if f.dim() != dim {
                    return Err(Error::Parse(format!(
                        "Pauli label {label:?} has dimension {}, expected {dim}",
                        f.dim()
                    )));
                }
                Ok(f)
            }
            FactorSpec::Dense(entries) => {
                if entries.len() != dim * dim {
                    return Err(Error::Parse(format!(
                        "dense factor has {} entries, expected {}",
                        entries.len(),
                        dim * dim
                    )));
                }
                UnitaryFactor::new(CMatrix::from_row_iterator(
                    dim,
                    dim,
                    entries.iter().map(|[re, im]| C64::new(*re, *im)),
                ))
            }
        }
    }

    fn describe(factor: &UnitaryFactor) -> Self {
        match factor.pauli_label() {
            Some(label) => FactorSpec::Pauli(label.to_string()),
            None => {
                let m = factor.matrix();
                let n = factor.dim();
                FactorSpec::Dense(
                    (0..n)
                        .flat_map(|r| (0..n).map(move |c| (r, c)))
                        .map(|(r, c)| [m[(r, c)].re, m[(r, c)].im])
                        .collect(),
                )
            }
        }
    }
}

impl DecompositionSpec {
    pub fn build(&self) -> Result<TensorDecomposition> {
        if self.dim == 0 {
            return Err(Error::Parse("dim must be positive".into()));
        }
        for (alpha, term) in self.terms.iter().enumerate() {
            if term.len() != self.p {
                return Err(Error::Parse(format!(
                    "term {alpha} has {} factors but p = {}",
                    term.len(),
                    self.p
                )));
            }
        }
        let terms = self
            .terms
            .iter()
            .map(|term| term.iter().map(|f| f.build(self.dim)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        TensorDecomposition::new(terms, self.prefactor)
    }

    pub fn describe(decomp: &TensorDecomposition) -> Self {
        Self {
            dim: decomp.dim(),
            p: decomp.order(),
            prefactor: decomp.prefactor(),
            terms: decomp
                .terms()
                .iter()
                .map(|t| t.iter().map(FactorSpec::describe).collect())
                .collect(),
        }
    }
}

impl ProblemSpec {
    pub fn build(&self) -> Result<Problem> {
        let decomposition = self.decomposition.build()?;
        let point = |v: &Option<Vec<f64>>| -> Result<Option<Point>> {
            v.as_ref()
                .map(|c| {
                    if c.len() != decomposition.dim() {
                        return Err(Error::DimensionMismatch {
                            expected: decomposition.dim(),
                            found: c.len(),
                        });
                    }
                    Point::normalized(c.clone())
                })
                .transpose()
        };
        Ok(Problem {
            x0: point(&self.x0)?,
            reference: point(&self.reference)?,
            decomposition,
        })
    }
}

impl Problem {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: ProblemSpec = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.build()
    }

    pub fn to_spec(&self) -> ProblemSpec {
        ProblemSpec {
            decomposition: DecompositionSpec::describe(&self.decomposition),
            x0: self.x0.as_ref().map(|p| p.coords().to_vec()),
            reference: self.reference.as_ref().map(|p| p.coords().to_vec()),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_spec()).expect("problem spec serialises")
    }
}

impl TensorDecomposition {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: DecompositionSpec =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        spec.build()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&DecompositionSpec::describe(self)).expect("decomposition serialises")
    }
}
