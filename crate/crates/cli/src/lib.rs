//! Point generation, serialization, and statistical validation on top of
//! [`crossmap_core`]: the pieces that need an operating system.
//!
//! The [`target`] module keys every supported space by a flat string
//! (`sphere:2`, `cp:3`, `product:sphere:2+ball:3`, ...), [`sampler`]
//! produces deterministic index-addressable cube samples, [`cloud`] maps
//! them (optionally across threads) and serializes the result, and
//! [`validate`] hosts the measure-preservation test battery.

// Negated comparisons like `!(x > 0.0)` are load-bearing: they reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cloud;
pub mod config;
pub mod sampler;
pub mod target;
pub mod validate;

pub use cloud::{generate, write_cloud, Format, PointCloud};
pub use sampler::{Sampler, SamplerSpec};
pub use target::Target;
pub use validate::TestReport;
