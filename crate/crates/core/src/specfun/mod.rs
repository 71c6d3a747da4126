//! Double-precision special functions and numerical kernels.
//!
//! Everything the transport maps need lives here: the error function and
//! its inverse, the lower incomplete gamma function with fast paths for
//! the integer and half-integer orders the maps actually use, antiderivatives
//! of `sin^m`, adaptive Gauss–Legendre quadrature, and a bisection-safeguarded
//! Newton solver for strictly increasing functions.
//!
//! All operations are pure and reentrant.

mod erf_fn;
mod gamma_fn;
mod quad;
mod root;

pub use erf_fn::{erf, erf_inv, erfc};
pub(crate) use gamma_fn::{cos_power_integral, sin_power_integral};
pub use gamma_fn::{
    gamma, gamma_p, gamma_p_inv, gamma_q, gamma_q_inv, incomplete_beta_sin, ln_gamma,
    lower_incomplete_gamma,
};
pub use quad::{gauss_legendre_panel, integrate, QuadratureSpec};
pub use root::{solve_monotone, solve_monotone_newton, RootSpec};
