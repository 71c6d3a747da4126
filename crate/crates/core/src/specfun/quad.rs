//! Adaptive Gauss–Legendre quadrature on finite intervals.

use crate::error::{Error, Result};

/// Tuning knobs for [`integrate`].
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureSpec {
    /// Absolute tolerance on the integral.
    pub abs_tol: f64,
    /// Maximum bisection depth before giving up.
    pub max_subdivisions: u32,
    /// Points per panel; 7 and 15 are supported.
    pub rule_order: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            max_subdivisions: 60,
            rule_order: 15,
        }
    }
}

impl QuadratureSpec {
    /// Validates the invariants `abs_tol > 0` and `max_subdivisions >= 1`.
    pub fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) {
            return Err(Error::InvalidParameter("abs_tol must be positive".into()));
        }
        if self.max_subdivisions < 1 {
            return Err(Error::InvalidParameter(
                "max_subdivisions must be >= 1".into(),
            ));
        }
        if self.rule_order != 7 && self.rule_order != 15 {
            return Err(Error::InvalidParameter("rule_order must be 7 or 15".into()));
        }
        Ok(())
    }
}

// Gauss-Legendre nodes/weights on [-1, 1], positive half; the node 0 is
// listed first with its full weight.
const GL15_NODES: [f64; 8] = [
    0.0,
    0.2011940939974345,
    0.3941513470775634,
    0.5709721726085388,
    0.7244177313601701,
    0.8482065834104272,
    0.937273392400706,
    0.9879925180204854,
];
const GL15_WEIGHTS: [f64; 8] = [
    0.2025782419255613,
    0.1984314853271116,
    0.1861610000155622,
    0.1662692058169939,
    0.1395706779261543,
    0.1071592204671719,
    0.0703660474881081,
    0.0307532419961173,
];

const GL7_NODES: [f64; 4] = [
    0.0,
    0.4058451513773972,
    0.7415311855993945,
    0.9491079123427585,
];
const GL7_WEIGHTS: [f64; 4] = [
    0.4179591836734694,
    0.3818300505051189,
    0.2797053914892766,
    0.1294849661688697,
];

/// Single fixed-order Gauss–Legendre panel over `[a, b]`.
pub fn gauss_legendre_panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, order: usize) -> f64 {
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let (nodes, weights): (&[f64], &[f64]) = if order == 7 {
        (&GL7_NODES, &GL7_WEIGHTS)
    } else {
        (&GL15_NODES, &GL15_WEIGHTS)
    };
    let mut acc = weights[0] * f(mid);
    for i in 1..nodes.len() {
        let dx = half * nodes[i];
        acc += weights[i] * (f(mid + dx) + f(mid - dx));
    }
    acc * half
}

/// Adaptive quadrature of a continuous `f` over `[a, b]`.
///
/// Panels are bisected until the two-half refinement of each panel moves
/// the estimate by less than its share of `abs_tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    spec.validate()?;
    if !(a <= b) {
        return Err(Error::Domain {
            what: "integrate bounds",
            value: b - a,
        });
    }
    if a == b {
        return Ok(0.0);
    }
    let whole = gauss_legendre_panel(&f, a, b, spec.rule_order);
    adaptive(
        &f,
        a,
        b,
        whole,
        spec.abs_tol,
        spec.max_subdivisions,
        spec.rule_order,
    )
}

fn adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    whole: f64,
    tol: f64,
    depth_left: u32,
    order: usize,
) -> Result<f64> {
    let mid = 0.5 * (a + b);
    let left = gauss_legendre_panel(f, a, mid, order);
    let right = gauss_legendre_panel(f, mid, b, order);
    let refined = left + right;
    let err = (refined - whole).abs();
    if err <= tol || mid <= a || mid >= b {
        return Ok(refined);
    }
    if depth_left == 0 {
        return Err(Error::Convergence {
            what: "integrate",
            residual: err,
        });
    }
    let half_tol = 0.5 * tol;
    Ok(adaptive(f, a, mid, left, half_tol, depth_left - 1, order)?
        + adaptive(f, mid, b, right, half_tol, depth_left - 1, order)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use core::f64::consts::PI;

    #[test]
    fn polynomial_and_sine() {
        let spec = QuadratureSpec::default();
        assert_abs_diff_eq!(
            integrate(|s| s, 0.0, 1.0, &spec).unwrap(),
            0.5,
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(
            integrate(|s| s.sin(), 0.0, PI, &spec).unwrap(),
            2.0,
            epsilon = 1e-12
        );
    }

    #[test]
    fn trig_power_matches_brute_force() {
        // Frozen from a 10^7-panel trapezoid oracle (tests/specfun_oracles.rs).
        let spec = QuadratureSpec::default();
        let value =
            integrate(|s| s.sin().powi(15) * s.cos().powi(7), 0.0, PI / 4.0, &spec).unwrap();
        assert_abs_diff_eq!(value, 4.290956439393939e-5, epsilon = 1e-12);
    }

    #[test]
    fn empty_interval_and_bad_bounds() {
        let spec = QuadratureSpec::default();
        assert_eq!(integrate(|s| s, 2.0, 2.0, &spec).unwrap(), 0.0);
        assert!(integrate(|s| s, 1.0, 0.0, &spec).is_err());
    }

    #[test]
    fn discontinuity_exhausts_subdivisions() {
        // A jump cannot be resolved to 1e-14 in two bisection levels.
        let spec = QuadratureSpec {
            max_subdivisions: 2,
            abs_tol: 1e-14,
            ..Default::default()
        };
        let step = |s: f64| if s < 0.3 { 0.0 } else { 1.0 };
        match integrate(step, 0.0, 1.0, &spec) {
            Err(crate::error::Error::Convergence { .. }) => {}
            other => panic!("expected convergence error, got {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_spec() {
        let spec = QuadratureSpec {
            abs_tol: 0.0,
            ..QuadratureSpec::default()
        };
        assert!(integrate(|s| s, 0.0, 1.0, &spec).is_err());
        let spec = QuadratureSpec {
            rule_order: 9,
            ..QuadratureSpec::default()
        };
        assert!(integrate(|s| s, 0.0, 1.0, &spec).is_err());
    }

    #[test]
    fn gl7_panel_agrees() {
        let spec = QuadratureSpec {
            rule_order: 7,
            ..QuadratureSpec::default()
        };
        assert_abs_diff_eq!(
            integrate(|s| (s * s).exp_m1(), 0.0, 1.0, &spec).unwrap(),
            integrate(|s| (s * s).exp_m1(), 0.0, 1.0, &QuadratureSpec::default()).unwrap(),
            epsilon = 1e-12
        );
    }
}
