//! Measure-preserving maps from the open unit cube to constant-curvature
//! targets.
//!
//! The crate builds bijections that push the uniform measure on `(0,1)^d`
//! forward to the uniform measure on
//!
//! * the unit ball `B^d`,
//! * the sphere `S^n`,
//! * the real, complex, and quaternionic projective spaces `RP^n`, `CP^n`,
//!   `HP^n`, and the Cayley plane `OP^2` (chart representation),
//! * finite products of the above, and
//! * odd spheres `S^{2n+1}` through the Hopf circle bundle over `CP^n`.
//!
//! Every map factors through the same pipeline: a componentwise Gaussian
//! reshaping of the cube ([`cube_gauss`]), a radial transport in `R^d`
//! matching cumulative radial masses ([`radial`]), and an exponential chart
//! onto the target ([`crosses`]). Closed-form shortcuts are provided where
//! the radius map has an elementary expression, and agree with the generic
//! pipeline to ~1e-12.
//!
//! The crate is `no_std`-compatible (`default-features = false`; requires
//! `alloc`). Transcendental functions fall back to [`libm`] without `std`.
//!
//! ```
//! use crossmap_core::{crosses::{CrossKind, CrossSpace}, point::CubePoint};
//!
//! let sphere = CrossSpace::new(CrossKind::Sphere(2)).unwrap();
//! let x = CubePoint::new(vec![0.25, 0.625]).unwrap();
//! let p = sphere.phi(&x).unwrap();
//! let norm: f64 = p.ambient().iter().map(|c| c * c).sum::<f64>().sqrt();
//! assert!((norm - 1.0).abs() < 1e-12);
//! ```

#![cfg_attr(not(feature = "std"), no_std)]
#![warn(missing_docs)]
// Negated comparisons like `!(x > 0.0)` are load-bearing: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod algebra;
pub mod bundles;
pub mod crosses;
pub mod cube_gauss;
pub mod error;
pub(crate) mod math;
pub mod point;
pub mod radial;
pub mod specfun;

pub use error::{Error, Result};
pub use point::{ChartVector, CubePoint, EuclideanPoint};
