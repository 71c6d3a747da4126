//! The componentwise map from the open unit cube to the standard Gaussian.
//!
//! Uniform measure on `(0,1)^d` pushes forward to `N(0, I_d)` through
//! `y_i = sqrt(2) * erf_inv(2 x_i - 1)`, coordinate by coordinate. The
//! inverse applies the Gaussian CDF. Other variances are reached by the
//! radial rescaling profile in [`crate::radial`], so this module always
//! targets unit variance.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::point::{CubePoint, EuclideanPoint};
use crate::specfun::{erf, erf_inv};

use core::f64::consts::SQRT_2;

/// Width parameter of a centered Gaussian measure `N(0, c)` on `R^d`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianMeasure {
    /// Variance `c > 0`.
    pub c: f64,
}

impl Default for GaussianMeasure {
    fn default() -> Self {
        Self { c: 1.0 }
    }
}

impl GaussianMeasure {
    /// A Gaussian measure with the given variance.
    pub fn new(c: f64) -> Result<Self> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(Error::InvalidParameter(
                "gaussian variance must be positive".into(),
            ));
        }
        Ok(Self { c })
    }

    /// Density `(2πc)^{-d/2} exp(-|y|²/(2c))` at a point.
    pub fn density(&self, y: &EuclideanPoint) -> f64 {
        let d = y.dim() as f64;
        let r2: f64 = y.coords().iter().map(|c| c * c).sum();
        (-r2 / (2.0 * self.c)).exp() * (2.0 * core::f64::consts::PI * self.c).powf(-d / 2.0)
    }
}

/// What to do with cube coordinates that sit exactly on the boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryPolicy {
    /// Reject the input; the map diverges on the boundary.
    #[default]
    Reject,
    /// Nudge the coordinate to the nearest representable interior value.
    Clamp,
}

// Smallest spacing that keeps 1.0 - CLAMP below 1.0 in binary64.
const INTERIOR_EPS: f64 = f64::EPSILON / 2.0;

/// Applies the boundary policy to raw coordinates and produces a cube point.
pub fn interior_point(coords: &[f64], policy: BoundaryPolicy) -> Result<CubePoint> {
    match policy {
        BoundaryPolicy::Reject => CubePoint::new(coords.to_vec()),
        BoundaryPolicy::Clamp => {
            let clamped: Vec<f64> = coords
                .iter()
                .map(|&x| x.clamp(INTERIOR_EPS, 1.0 - INTERIOR_EPS))
                .collect();
            CubePoint::new(clamped)
        }
    }
}

/// The cube-to-Gaussian map, componentwise `sqrt(2) * erf_inv(2 x_i - 1)`.
///
/// Pushes the uniform measure on `(0,1)^d` to `N(0, I_d)`; odd around the
/// cube center.
pub fn phi_rd(x: &CubePoint) -> Result<EuclideanPoint> {
    let mut out = Vec::with_capacity(x.dim());
    for &xi in x.coords() {
        // 2x - 1 in (-1, 1) strictly, so erf_inv is total here.
        out.push(SQRT_2 * erf_inv(2.0 * xi - 1.0)?);
    }
    EuclideanPoint::new(out)
}

/// Inverse of [`phi_rd`]: `x_i = (1 + erf(y_i / sqrt 2)) / 2`.
///
/// For large `|y_i|` the Gaussian CDF rounds to 0 or 1 in binary64; the
/// result is clamped one step inside the open cube so it remains a valid
/// preimage.
pub fn phi_rd_inv(y: &EuclideanPoint) -> Result<CubePoint> {
    let coords: Vec<f64> = y
        .coords()
        .iter()
        .map(|&yi| {
            let x = 0.5 * (1.0 + erf(yi / SQRT_2));
            x.clamp(INTERIOR_EPS, 1.0 - INTERIOR_EPS)
        })
        .collect();
    CubePoint::new(coords)
}
