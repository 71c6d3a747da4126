//! Root finding for strictly increasing functions on a bracket.

use crate::error::{Error, Result};

/// Tolerances for [`solve_monotone`] / [`solve_monotone_newton`].
#[derive(Debug, Clone, PartialEq)]
pub struct RootSpec {
    /// Bracket-width stopping tolerance.
    pub x_tol: f64,
    /// Residual stopping tolerance on `|g(x) - target|`.
    pub f_tol: f64,
    /// Iteration budget.
    pub max_iter: u32,
}

impl Default for RootSpec {
    fn default() -> Self {
        Self {
            x_tol: 1e-12,
            f_tol: 1e-14,
            max_iter: 200,
        }
    }
}

impl RootSpec {
    fn validate(&self) -> Result<()> {
        if !(self.x_tol > 0.0 && self.f_tol > 0.0) {
            return Err(Error::InvalidParameter(
                "root tolerances must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Solves `g(x) = target` for strictly increasing `g` on `[lo, hi]` by
/// bisection.
pub fn solve_monotone<G>(g: G, target: f64, lo: f64, hi: f64, spec: &RootSpec) -> Result<f64>
where
    G: Fn(f64) -> f64,
{
    driver(&g, None, target, lo, hi, spec)
}

/// Solves `g(x) = target` for strictly increasing `g` on `[lo, hi]` with
/// Newton steps from the analytic derivative, falling back to bisection
/// whenever a step leaves the bracket.
pub fn solve_monotone_newton<G, D>(
    g: G,
    dg: D,
    target: f64,
    lo: f64,
    hi: f64,
    spec: &RootSpec,
) -> Result<f64>
where
    G: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    driver(&g, Some(&dg), target, lo, hi, spec)
}

fn driver(
    g: &dyn Fn(f64) -> f64,
    dg: Option<&dyn Fn(f64) -> f64>,
    target: f64,
    mut lo: f64,
    mut hi: f64,
    spec: &RootSpec,
) -> Result<f64> {
    spec.validate()?;
    if !(lo <= hi) {
        return Err(Error::InvalidParameter("empty bracket".into()));
    }
    let f_lo = g(lo) - target;
    let f_hi = g(hi) - target;
    if f_lo.abs() <= spec.f_tol {
        return Ok(lo);
    }
    if f_hi.abs() <= spec.f_tol {
        return Ok(hi);
    }
    if f_lo > 0.0 || f_hi < 0.0 {
        return Err(Error::Bracket {
            target,
            g_lo: f_lo + target,
            g_hi: f_hi + target,
        });
    }

    let mut x = 0.5 * (lo + hi);
    let mut step_old = hi - lo;
    for _ in 0..spec.max_iter {
        let fx = g(x) - target;
        if fx.abs() <= spec.f_tol {
            return Ok(x);
        }
        if fx > 0.0 {
            hi = x;
        } else {
            lo = x;
        }
        if hi - lo <= spec.x_tol || hi - lo <= f64::EPSILON * lo.abs().max(hi.abs()) {
            // Converged in x, or the bracket has collapsed to adjacent
            // floats and the residual tolerance is below evaluation noise.
            return Ok(0.5 * (lo + hi));
        }
        // Newton step, accepted only while it stays in the bracket and
        // keeps shrinking fast enough; otherwise bisect.
        let mut next = f64::NAN;
        let mut step = step_old;
        if let Some(dg) = dg {
            let slope = dg(x);
            if slope.is_finite() && slope > 0.0 && (2.0 * fx).abs() <= (step_old * slope).abs() {
                let candidate = x - fx / slope;
                if candidate > lo && candidate < hi {
                    next = candidate;
                    step = (candidate - x).abs();
                }
            }
        }
        step_old = step;
        x = if next.is_finite() {
            next
        } else {
            step_old = 0.5 * (hi - lo);
            0.5 * (lo + hi)
        };
    }
    Err(Error::Convergence {
        what: "solve_monotone",
        residual: g(x) - target,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn identity_and_square() {
        let spec = RootSpec::default();
        assert_abs_diff_eq!(
            solve_monotone(|x| x, 0.3, 0.0, 1.0, &spec).unwrap(),
            0.3,
            epsilon = 1e-12
        );
        assert_abs_diff_eq!(
            solve_monotone_newton(|x| x * x, |x| 2.0 * x, 2.0, 0.0, 2.0, &spec).unwrap(),
            core::f64::consts::SQRT_2,
            epsilon = 1e-12
        );
    }

    #[test]
    fn bracket_violation_is_reported() {
        let spec = RootSpec::default();
        match solve_monotone(|x| x, 5.0, 0.0, 1.0, &spec) {
            Err(Error::Bracket { .. }) => {}
            other => panic!("expected bracket error, got {other:?}"),
        }
    }

    #[test]
    fn endpoints_within_tolerance_short_circuit() {
        let spec = RootSpec::default();
        assert_eq!(solve_monotone(|x| x, 0.0, 0.0, 1.0, &spec).unwrap(), 0.0);
        assert_eq!(solve_monotone(|x| x, 1.0, 0.0, 1.0, &spec).unwrap(), 1.0);
    }

    #[test]
    fn newton_with_misleading_slope_still_converges() {
        // Derivative deliberately scaled; the bisection safeguard keeps the
        // iterate inside the bracket.
        let spec = RootSpec::default();
        let x = solve_monotone_newton(
            |x| x.tan(),
            |x| 40.0 / (x.cos() * x.cos()),
            1.0,
            0.0,
            1.5,
            &spec,
        )
        .unwrap();
        assert_abs_diff_eq!(x, core::f64::consts::FRAC_PI_4, epsilon = 1e-10);
    }
}
