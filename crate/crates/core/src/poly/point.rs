use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Unit-norm tolerance enforced on every [`Point`].
pub const UNIT_TOL: f64 = 1e-12;

/// A real unit vector, the iterate under the spherical constraint.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    /// Wraps coordinates that are already unit norm.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        let norm = l2(&coords);
        if coords.is_empty() || !((norm - 1.0).abs() <= UNIT_TOL) {
            return Err(Error::NotUnitNorm(norm));
        }
        Ok(Self { coords })
    }

    /// Rescales arbitrary non-zero coordinates onto the sphere.
    pub fn normalized(coords: Vec<f64>) -> Result<Self> {
        let norm = l2(&coords);
        if coords.is_empty() || !norm.is_finite() || norm == 0.0 {
            return Err(Error::NotUnitNorm(norm));
        }
        Ok(Self {
            coords: coords.into_iter().map(|c| c / norm).collect(),
        })
    }

    /// `(cos θ, sin θ)`.
    pub fn from_angle(theta: f64) -> Self {
        Self {
            coords: vec![theta.cos(), theta.sin()],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn dot(&self, other: &Point) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self.coords.iter().zip(&other.coords).map(|(a, b)| a * b).sum())
    }

    pub fn negated(&self) -> Self {
        Self {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }

    /// Flips the sign so that the inner product with `reference` is
    /// nonnegative.
    pub fn aligned_with(self, reference: &Point) -> Self {
        match self.dot(reference) {
            Ok(d) if d < 0.0 => self.negated(),
            _ => self,
        }
    }

    /// Euclidean distance.
    pub fn distance(&self, other: &Point) -> Result<f64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(l2(&self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a - b)
            .collect::<Vec<_>>()))
    }

    /// Distance to the nearer of `other` and `-other`.
    pub fn distance_up_to_sign(&self, other: &Point) -> Result<f64> {
        Ok(self.distance(other)?.min(self.distance(&other.negated())?))
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Point::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.coords
    }
}

pub(crate) fn l2(v: &[f64]) -> f64 {
    v.iter().map(|c| c * c).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_unit() {
        assert!(matches!(Point::new(vec![1.0, 1.0]), Err(Error::NotUnitNorm(_))));
        assert!(Point::normalized(vec![0.0, 0.0]).is_err());
        assert!(Point::new(vec![]).is_err());
    }

    #[test]
    fn renormalizes_rounded_values() {
        let p = Point::normalized(vec![-0.38, 0.92]).unwrap();
        assert!((l2(p.coords()) - 1.0).abs() < 1e-15);
        assert!(p.coords()[0] < 0.0);
    }

    #[test]
    fn sign_alignment() {
        let a = Point::normalized(vec![1.0, 1.0]).unwrap();
        let b = Point::normalized(vec![-1.0, -0.5]).unwrap();
        assert!(b.clone().aligned_with(&a).dot(&a).unwrap() > 0.0);
        assert!(b.distance_up_to_sign(&b.negated()).unwrap() < 1e-15);
    }
}
