//! Coordinate carriers for the three stages of the pipeline.
//!
//! [`CubePoint`] lives in the open unit cube `(0,1)^d`, [`EuclideanPoint`]
//! in `R^d`, and [`ChartVector`] in an open tangent ball `B^d(0,R)`. They
//! are thin `Vec<f64>` wrappers; the newtypes exist so signatures state
//! which space a value belongs to.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
#[cfg(not(feature = "std"))]
use crate::math::FloatExt;

/// A point of the open unit cube `(0,1)^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct CubePoint {
    coords: Vec<f64>,
}

impl CubePoint {
    /// Wraps coordinates, requiring every entry to lie strictly in `(0,1)`.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("cube point needs dim >= 1".into()));
        }
        for (index, &value) in coords.iter().enumerate() {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::Boundary { index, value });
            }
        }
        Ok(Self { coords })
    }

    /// Dimension `d`.
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Coordinate slice.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }
}

/// A point of `R^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanPoint {
    coords: Vec<f64>,
}

impl EuclideanPoint {
    /// Wraps coordinates, requiring every entry to be finite.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::InvalidParameter("point needs dim >= 1".into()));
        }
        for &value in &coords {
            if !value.is_finite() {
                return Err(Error::Domain {
                    what: "euclidean point",
                    value,
                });
            }
        }
        Ok(Self { coords })
    }

    /// The origin of `R^d`.
    pub fn zero(dim: usize) -> Self {
        Self {
            coords: vec![0.0; dim],
        }
    }

    /// Dimension `d`.
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Coordinate slice.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        norm(&self.coords)
    }
}

/// A tangent vector in an open ball `B^d(0,R)` around the base point.
#[derive(Debug, Clone, PartialEq)]
pub struct ChartVector {
    coords: Vec<f64>,
}

impl ChartVector {
    /// Wraps coordinates without a radius check; callers enforce `R`.
    pub fn new(coords: Vec<f64>) -> Self {
        Self { coords }
    }

    /// The zero vector (the chart origin).
    pub fn zero(dim: usize) -> Self {
        Self {
            coords: vec![0.0; dim],
        }
    }

    /// Dimension `d`.
    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    /// Coordinate slice.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Euclidean norm, i.e. the geodesic distance to the base point.
    pub fn norm(&self) -> f64 {
        norm(&self.coords)
    }
}

/// Euclidean norm of a coordinate slice.
pub(crate) fn norm(coords: &[f64]) -> f64 {
    coords.iter().map(|c| c * c).sum::<f64>().sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_point_rejects_boundary() {
        assert!(CubePoint::new(vec![0.5, 0.0]).is_err());
        assert!(CubePoint::new(vec![1.0]).is_err());
        assert!(CubePoint::new(vec![0.5, 0.25]).is_ok());
    }

    #[test]
    fn euclidean_point_rejects_non_finite() {
        assert!(EuclideanPoint::new(vec![f64::NAN]).is_err());
        assert!(EuclideanPoint::new(vec![f64::INFINITY, 0.0]).is_err());
    }

    #[test]
    fn norms() {
        let p = EuclideanPoint::new(vec![3.0, 4.0]).unwrap();
        assert_eq!(p.norm(), 5.0);
        assert_eq!(ChartVector::zero(4).norm(), 0.0);
    }
}
