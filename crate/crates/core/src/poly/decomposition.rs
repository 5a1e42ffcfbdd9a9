use super::point::l2;
use super::{rayleigh, CoefficientSet, DOperator, DenseTensor, Point, UnitaryFactor};
use crate::{Error, Result};

/// Degenerate-step threshold for `‖x − η D x‖`.
pub const DEGENERATE_STEP: f64 = 1e-14;

/// `s · Σ_α A_1^α ⊗ … ⊗ A_p^α` with every factor an `N × N` unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorDecomposition {
    dim: usize,
    order: usize,
    terms: Vec<Vec<UnitaryFactor>>,
    prefactor: f64,
}

/// Result of one classical update `x ↦ (x − η D x) / ‖x − η D x‖`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalStep {
    pub point: Point,
    /// `‖x − η D x‖` before normalisation.
    pub diff_norm: f64,
}

impl TensorDecomposition {
    pub fn new(terms: Vec<Vec<UnitaryFactor>>, prefactor: f64) -> Result<Self> {
        let first = terms
            .first()
            .ok_or_else(|| Error::InvalidDecomposition("at least one term is required".into()))?;
        let order = first.len();
        if order == 0 {
            return Err(Error::InvalidDecomposition("terms must have p >= 1 factors".into()));
        }
        let dim = first[0].dim();
        for (alpha, term) in terms.iter().enumerate() {
            if term.len() != order {
                return Err(Error::InvalidDecomposition(format!(
                    "term {alpha} has {} factors, expected {order}",
                    term.len()
                )));
            }
            if let Some(f) = term.iter().find(|f| f.dim() != dim) {
                return Err(Error::InvalidDecomposition(format!(
                    "term {alpha} mixes factor dimensions {} and {dim}",
                    f.dim()
                )));
            }
        }
        if !prefactor.is_finite() {
            return Err(Error::InvalidDecomposition(format!("prefactor {prefactor} is not finite")));
        }
        Ok(Self {
            dim,
            order,
            terms,
            prefactor,
        })
    }

    /// Same factors with a different global prefactor.
    pub fn with_prefactor(&self, prefactor: f64) -> Result<Self> {
        Self::new(self.terms.clone(), prefactor)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `p`: number of factors per term.
    pub fn order(&self) -> usize {
        self.order
    }

    /// `K`: number of terms.
    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// `K · p`.
    pub fn flat_len(&self) -> usize {
        self.terms.len() * self.order
    }

    pub fn prefactor(&self) -> f64 {
        self.prefactor
    }

    pub fn terms(&self) -> &[Vec<UnitaryFactor>] {
        &self.terms
    }

    /// Factors in flattened order `m = α·p + j`.
    pub fn flat_factors(&self) -> impl Iterator<Item = &UnitaryFactor> {
        self.terms.iter().flatten()
    }

    pub fn is_symmetric(&self) -> bool {
        self.flat_factors().all(UnitaryFactor::is_symmetric)
    }

    fn check_dim(&self, x: &Point) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.dim(),
            });
        }
        Ok(())
    }

    /// `b_j^α = xᵀ A_j^α x` as a `K × p` table.
    pub fn rayleigh_table(&self, x: &Point) -> Result<Vec<Vec<f64>>> {
        self.check_dim(x)?;
        self.terms
            .iter()
            .map(|term| term.iter().map(|f| rayleigh(f, x)).collect())
            .collect()
    }

    /// `s · Σ_α Π_i xᵀ A_i^α x`.
    pub fn objective(&self, x: &Point) -> Result<f64> {
        let b = self.rayleigh_table(x)?;
        Ok(self.prefactor * b.iter().map(|row| row.iter().product::<f64>()).sum::<f64>())
    }

    pub fn coefficients(&self, x: &Point) -> Result<CoefficientSet> {
        Ok(CoefficientSet::from_rayleigh(self.rayleigh_table(x)?, self.prefactor))
    }

    /// `D = Σ_m c_m A_m` at `x`.
    pub fn d_operator(&self, x: &Point) -> Result<DOperator> {
        let coeffs = self.coefficients(x)?;
        Ok(DOperator::assemble(self, &coeffs))
    }

    /// `D x`. For symmetric factors this is half the Euclidean gradient of
    /// [`objective`](Self::objective).
    pub fn gradient(&self, x: &Point) -> Result<Vec<f64>> {
        self.d_operator(x)?.apply(x)
    }

    /// `normalize(x − η D x)`.
    pub fn iterate(&self, x: &Point, eta: f64) -> Result<ClassicalStep> {
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidEta(eta));
        }
        let dx = self.gradient(x)?;
        let diff: Vec<f64> = x.coords().iter().zip(&dx).map(|(a, g)| a - eta * g).collect();
        let diff_norm = l2(&diff);
        if diff_norm < DEGENERATE_STEP {
            return Err(Error::DegenerateStep(diff_norm));
        }
        Ok(ClassicalStep {
            point: Point::normalized(diff)?,
            diff_norm,
        })
    }

    /// Lagrange condition on the sphere: `‖D x − (xᵀ D x) x‖ ≤ tol`.
    pub fn is_stationary(&self, x: &Point, tol: f64) -> Result<bool> {
        Ok(self.stationarity_residual(x)? <= tol)
    }

    /// `‖D x − (xᵀ D x) x‖`.
    pub fn stationarity_residual(&self, x: &Point) -> Result<f64> {
        let dx = self.gradient(x)?;
        let lambda: f64 = x.coords().iter().zip(&dx).map(|(a, b)| a * b).sum();
        let residual: Vec<f64> = dx.iter().zip(x.coords()).map(|(g, a)| g - lambda * a).collect();
        Ok(l2(&residual))
    }

    /// Dense coefficient tensor `a_{i_1…i_2p}` of the expanded polynomial.
    pub fn expand(&self) -> Result<DenseTensor> {
        DenseTensor::from_decomposition(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn experiment() -> TensorDecomposition {
        let f = |l| UnitaryFactor::pauli(l).unwrap();
        TensorDecomposition::new(vec![vec![f("-I"), f("X")], vec![f("X"), f("Z")]], 0.5).unwrap()
    }

    #[test]
    fn construction_errors() {
        let x = UnitaryFactor::pauli("X").unwrap();
        let xx = UnitaryFactor::pauli("XX").unwrap();
        assert!(TensorDecomposition::new(vec![], 1.0).is_err());
        assert!(TensorDecomposition::new(vec![vec![]], 1.0).is_err());
        assert!(TensorDecomposition::new(vec![vec![x.clone()], vec![x.clone(), x.clone()]], 1.0).is_err());
        assert!(TensorDecomposition::new(vec![vec![x.clone(), xx]], 1.0).is_err());
        assert!(TensorDecomposition::new(vec![vec![x]], f64::NAN).is_err());
    }

    #[test]
    fn objective_known_values() {
        let d = experiment();
        let e0 = Point::new(vec![1.0, 0.0]).unwrap();
        assert_eq!(d.objective(&e0).unwrap(), 0.0);
        let diag = Point::normalized(vec![1.0, 1.0]).unwrap();
        assert!((d.objective(&diag).unwrap() + 0.5).abs() < 1e-15);
        let bad = Point::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(d.objective(&bad), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn gradient_and_step_at_diagonal() {
        let d = experiment();
        let x = Point::normalized(vec![1.0, 1.0]).unwrap();
        let g = d.gradient(&x).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((g[0] + 0.5 * h).abs() < 1e-15);
        assert!((g[1] + 1.5 * h).abs() < 1e-15);
        let step = d.iterate(&x, 1.0).unwrap();
        assert!((step.diff_norm - 4.25f64.sqrt()).abs() < 1e-14);
        // (1.06066, 1.76777) / 2.06155
        assert!((step.point.coords()[0] - 1.5 * h / 4.25f64.sqrt()).abs() < 1e-14);
        assert!((step.point.coords()[1] - 2.5 * h / 4.25f64.sqrt()).abs() < 1e-14);
        assert!((step.point.coords()[0] - 0.5145).abs() < 1e-4);
        assert!((step.point.coords()[1] - 0.8575).abs() < 1e-4);
    }

    #[test]
    fn stationary_points() {
        let d = experiment();
        let opt = Point::new(vec![0.5, 3f64.sqrt() / 2.0]).unwrap();
        assert!(d.is_stationary(&opt, 1e-6).unwrap());
        let e0 = Point::new(vec![1.0, 0.0]).unwrap();
        assert!(d.is_stationary(&e0, 1e-6).unwrap());
        let diag = Point::normalized(vec![1.0, 1.0]).unwrap();
        assert!(!d.is_stationary(&diag, 1e-3).unwrap());

        // (1 - λ) x renormalises to x with λ = -3√3/4
        let step = d.iterate(&opt, 1.0).unwrap();
        assert!(step.point.distance(&opt).unwrap() < 1e-14);
        assert!((step.diff_norm - (1.0 + 3.0 * 3f64.sqrt() / 4.0)).abs() < 1e-14);
    }

    #[test]
    fn identity_problem() {
        let d = TensorDecomposition::new(vec![vec![UnitaryFactor::identity(3)]], 1.0).unwrap();
        let x = Point::normalized(vec![0.2, -0.4, 0.1]).unwrap();
        let g = d.gradient(&x).unwrap();
        for (a, b) in g.iter().zip(x.coords()) {
            assert!((a - b).abs() < 1e-15);
        }
        // x - 1·Ix = 0 annihilates the state
        assert!(matches!(d.iterate(&x, 1.0), Err(Error::DegenerateStep(_))));
        assert!(matches!(d.iterate(&x, 0.0), Err(Error::InvalidEta(_))));
        assert!(matches!(d.iterate(&x, -1.0), Err(Error::InvalidEta(_))));
    }

    #[test]
    fn zero_gradient_returns_input() {
        // s = 0 makes every coefficient vanish
        let d = experiment().with_prefactor(0.0).unwrap();
        let x = Point::normalized(vec![0.3, 0.7]).unwrap();
        assert_eq!(d.iterate(&x, 1.0).unwrap().point, x);
    }
}
