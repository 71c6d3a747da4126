//! Radial transport in `R^d`: matching Gaussian radial mass to a target
//! radial measure.
//!
//! A [`RadialProfile`] describes a probability measure `ω(|x|) dλ(x)` on an
//! open ball `B^d(0, R)` through its weight `ω`, cumulative
//! `G(ρ) = ∫_0^ρ ω(s) s^{d-1} ds`, and the radius map `ρ(r)` solving
//!
//! ```text
//! G(ρ) = γ(d/2, r²/2) / (2 π^{d/2})
//! ```
//!
//! The induced vector map `x ↦ x ρ(|x|)/|x|` then carries the standard
//! Gaussian on `R^d` to the profile's measure. Profiles for the catalogued
//! targets use a closed antiderivative where one exists and quadrature
//! otherwise; the radius map likewise uses a closed inverse where known and
//! a Newton solve (with the analytic derivative `ω(ρ)ρ^{d-1}`) otherwise.
//!
//! Profiles are immutable after construction; the quadrature-backed ones
//! carry a cumulative table built once and only read afterwards.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
#[cfg(not(feature = "std"))]
use crate::math::FloatExt;
use crate::point::{ChartVector, EuclideanPoint};
use crate::specfun::{
    self, gamma_p, gamma_p_inv, gamma_q, gauss_legendre_panel, integrate, ln_gamma, QuadratureSpec,
    RootSpec,
};

use core::f64::consts::PI;
use core::fmt;

/// Fraction of the ball radius kept clear of the boundary: once the
/// Gaussian radial CDF saturates (`P > 1 - 1e-16`), the radius map returns
/// `R (1 - BOUNDARY_MARGIN)` so chart points stay strictly inside the ball
/// where the exponential chart is a diffeomorphism.
const BOUNDARY_MARGIN: f64 = 1e-9;
const CDF_SATURATION: f64 = 1.0 - 1e-16;

/// Number of panels in a quadrature-backed cumulative table.
const TABLE_PANELS: usize = 2048;

/// Shared weight-function type for custom profiles.
pub type WeightFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// The catalogue of radial profiles.
#[derive(Clone)]
pub enum ProfileKind {
    /// Uniform measure on the unit ball `B^d`.
    Ball(usize),
    /// Pullback of the uniform sphere `S^n` measure under its exponential
    /// chart; density `sin^{n-1} r` on `B^n(0, π)`.
    Sphere(usize),
    /// Real projective space `RP^n`; density `sin^{n-1} r` on `B^n(0, π/2)`.
    RealProj(usize),
    /// Complex projective space `CP^n`; density `sin^{2n-1} r cos r`.
    ComplexProj(usize),
    /// Quaternionic projective space `HP^n`; density `sin^{4n-1} r cos^3 r`.
    QuatProj(usize),
    /// The Cayley plane `OP^2`; density `sin^15 r cos^7 r` on `B^16(0, π/2)`.
    Octonion,
    /// Centered Gaussian `N(0, b)` on `R^d` (rescaling profile).
    Gaussian {
        /// Dimension of the ambient space.
        dim: usize,
        /// Target variance `b > 0`.
        variance: f64,
    },
    /// The planar measure that makes stereographic projection from `S^2`
    /// measure preserving.
    Stereographic2d,
    /// A user-supplied radial weight on `B^d(0, radius)`.
    Custom {
        /// Dimension of the ambient space.
        dim: usize,
        /// Ball radius (may be `f64::INFINITY`).
        radius: f64,
        /// Weight `ω(s) > 0` on `(0, radius)`.
        weight: WeightFn,
        /// Rescale the weight to unit mass instead of rejecting it when the
        /// normalization check fails.
        auto_normalize: bool,
    },
}

impl fmt::Debug for ProfileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileKind::Ball(d) => write!(f, "Ball({d})"),
            ProfileKind::Sphere(n) => write!(f, "Sphere({n})"),
            ProfileKind::RealProj(n) => write!(f, "RealProj({n})"),
            ProfileKind::ComplexProj(n) => write!(f, "ComplexProj({n})"),
            ProfileKind::QuatProj(n) => write!(f, "QuatProj({n})"),
            ProfileKind::Octonion => write!(f, "Octonion"),
            ProfileKind::Gaussian { dim, variance } => {
                write!(f, "Gaussian {{ dim: {dim}, variance: {variance} }}")
            }
            ProfileKind::Stereographic2d => write!(f, "Stereographic2d"),
            ProfileKind::Custom { dim, radius, .. } => {
                write!(f, "Custom {{ dim: {dim}, radius: {radius} }}")
            }
        }
    }
}

/// Weight evaluation, kept separately from the cumulative so the Newton
/// derivative `ω(ρ) ρ^{d-1}` comes for free.
#[derive(Clone)]
enum Weight {
    /// Constant `ω` (uniform ball).
    Const(f64),
    /// `coef · sin^m(s) cos^b(s) / s^m`, with `m = d - 1`.
    SinCos { coef: f64, m: u32, b: u32 },
    /// `exp(-s²/(2b)) / (2πb)^{d/2}`.
    Gaussian { inv_two_b: f64, log_norm: f64 },
    /// `1 / (π (1 + s²)²)`.
    Stereo2d,
    /// User weight times a normalization factor.
    Custom { weight: WeightFn, scale: f64 },
}

impl Weight {
    /// The paper's `ω(s)`.
    fn omega(&self, s: f64, _d: usize) -> f64 {
        match self {
            Weight::Const(c) => *c,
            Weight::SinCos { coef, m, b } => {
                coef * sinc(s).powi(*m as i32) * s.cos().powi(*b as i32)
            }
            Weight::Gaussian {
                inv_two_b,
                log_norm,
                ..
            } => (-s * s * inv_two_b + log_norm).exp(),
            Weight::Stereo2d => {
                let q = 1.0 + s * s;
                1.0 / (PI * q * q)
            }
            Weight::Custom { weight, scale } => weight(s) * scale,
        }
    }

    /// `ω(s) s^{d-1}`, stable at `s = 0`.
    fn density(&self, s: f64, d: usize) -> f64 {
        match self {
            Weight::SinCos { coef, m, b } => {
                coef * s.sin().powi(*m as i32) * s.cos().powi(*b as i32)
            }
            _ => self.omega(s, d) * s.powi(d as i32 - 1),
        }
    }
}

/// `sin(s)/s` with the removable singularity filled in.
fn sinc(s: f64) -> f64 {
    if s.abs() < 1e-5 {
        1.0 - s * s / 6.0
    } else {
        s.sin() / s
    }
}

/// Normalized cumulative `Ĝ(ρ) = G(ρ) / G(R)` (the radial CDF).
#[derive(Clone, Debug)]
enum Cumulative {
    /// `ρ^d` (unit ball).
    PowDim,
    /// `J_m(ρ) / J_m(R)` with `J_m` the `sin^m` antiderivative.
    SinPowRatio { m: u32, total: f64 },
    /// `sin^{2n}(ρ)` (complex projective).
    SinPowEven { two_n: i32 },
    /// `P(d/2, ρ² / (2b))`.
    GaussianCdf { half_dim: f64, inv_two_b: f64 },
    /// `ρ² / (1 + ρ²)`.
    Stereo2d,
    /// Prefix table of panel integrals plus a one-panel correction.
    Table(GTable),
}

/// Cumulative quadrature table: `prefix[i]` holds the raw integral of the
/// density over `[0, i·step]` in the integration variable and `suffix[i]`
/// the complementary integral up to the ball boundary, so both the CDF and
/// the survival function evaluate with relative accuracy. `scale` is the
/// total used for normalization. Infinite-radius profiles integrate in the
/// compactified variable `t = s/(1+s)` so the grid always spans the full
/// mass.
#[derive(Clone, Debug)]
struct GTable {
    step: f64,
    upper: f64,
    transformed: bool,
    prefix: Vec<f64>,
    suffix: Vec<f64>,
    scale: f64,
}

/// Closed-form radius maps `ρ(r)`.
#[derive(Clone, Copy, Debug)]
enum ClosedRho {
    /// `P(d/2, r²/2)^{1/d}` (unit ball).
    BallRoot,
    /// `π erf(r/√2)` (`S^1`).
    SphereOne,
    /// `2 arccos e^{-r²/4}` (`S^2`).
    SphereTwo,
    /// `(π/2) erf(r/√2)` (`RP^1`).
    RpOne,
    /// `arccos e^{-r²/2}` (`RP^2`).
    RpTwo,
    /// `arcsin(P(n, r²/2)^{1/(2n)})` (`CP^n`).
    CpArcsin { n: f64 },
    /// `r sqrt(b)` (Gaussian rescaling).
    Scale { factor: f64 },
    /// `sqrt(e^{r²/2} - 1)` (stereographic, d = 2).
    Stereo2d,
}

/// A target radial measure together with its radius maps.
#[derive(Clone, Debug)]
pub struct RadialProfile {
    kind: ProfileKind,
    dim: usize,
    radius: f64,
    /// `G(R) = Γ(d/2) / (2 π^{d/2})`.
    g_total: f64,
    weight: Weight,
    cumulative: Cumulative,
    closed_rho: Option<ClosedRho>,
    root_spec: RootSpec,
}

impl fmt::Debug for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Weight::Const(c) => write!(f, "Const({c})"),
            Weight::SinCos { coef, m, b } => write!(f, "SinCos {{ coef: {coef}, m: {m}, b: {b} }}"),
            Weight::Gaussian { inv_two_b, .. } => {
                write!(f, "Gaussian {{ inv_two_b: {inv_two_b} }}")
            }
            Weight::Stereo2d => write!(f, "Stereo2d"),
            Weight::Custom { scale, .. } => write!(f, "Custom {{ scale: {scale} }}"),
        }
    }
}

/// Builds the profile for a catalogue entry. Alias of [`RadialProfile::new`].
pub fn make_profile(kind: ProfileKind) -> Result<RadialProfile> {
    RadialProfile::new(kind)
}

impl RadialProfile {
    /// Builds the profile for a catalogue entry.
    pub fn new(kind: ProfileKind) -> Result<Self> {
        match kind {
            ProfileKind::Ball(d) => {
                require(d >= 1, "ball dimension must be >= 1")?;
                let g_total = total_gaussian_mass(d);
                let omega = (ln_gamma(d as f64 / 2.0 + 1.0) - (d as f64 / 2.0) * PI.ln()).exp();
                Ok(Self {
                    kind: ProfileKind::Ball(d),
                    dim: d,
                    radius: 1.0,
                    g_total,
                    weight: Weight::Const(omega),
                    cumulative: Cumulative::PowDim,
                    closed_rho: Some(ClosedRho::BallRoot),
                    root_spec: RootSpec::default(),
                })
            }
            ProfileKind::Sphere(n) => {
                require(n >= 1, "sphere dimension must be >= 1")?;
                let volume = sphere_volume(n);
                let m = (n - 1) as u32;
                let total = specfun::sin_power_integral(m, PI);
                let closed = match n {
                    1 => Some(ClosedRho::SphereOne),
                    2 => Some(ClosedRho::SphereTwo),
                    _ => None,
                };
                Ok(Self {
                    kind: ProfileKind::Sphere(n),
                    dim: n,
                    radius: PI,
                    g_total: total_gaussian_mass(n),
                    weight: Weight::SinCos {
                        coef: 1.0 / volume,
                        m,
                        b: 0,
                    },
                    cumulative: Cumulative::SinPowRatio { m, total },
                    closed_rho: closed,
                    root_spec: RootSpec::default(),
                })
            }
            ProfileKind::RealProj(n) => {
                require(n >= 1, "projective dimension must be >= 1")?;
                let volume = sphere_volume(n) / 2.0;
                let m = (n - 1) as u32;
                let total = specfun::sin_power_integral(m, PI / 2.0);
                let closed = match n {
                    1 => Some(ClosedRho::RpOne),
                    2 => Some(ClosedRho::RpTwo),
                    _ => None,
                };
                Ok(Self {
                    kind: ProfileKind::RealProj(n),
                    dim: n,
                    radius: PI / 2.0,
                    g_total: total_gaussian_mass(n),
                    weight: Weight::SinCos {
                        coef: 1.0 / volume,
                        m,
                        b: 0,
                    },
                    cumulative: Cumulative::SinPowRatio { m, total },
                    closed_rho: closed,
                    root_spec: RootSpec::default(),
                })
            }
            ProfileKind::ComplexProj(n) => {
                require(n >= 1, "projective dimension must be >= 1")?;
                let d = 2 * n;
                let coef = (ln_gamma(n as f64 + 1.0) - n as f64 * PI.ln()).exp(); // n!/π^n
                Ok(Self {
                    kind: ProfileKind::ComplexProj(n),
                    dim: d,
                    radius: PI / 2.0,
                    g_total: total_gaussian_mass(d),
                    weight: Weight::SinCos {
                        coef,
                        m: (d - 1) as u32,
                        b: 1,
                    },
                    cumulative: Cumulative::SinPowEven { two_n: d as i32 },
                    closed_rho: Some(ClosedRho::CpArcsin { n: n as f64 }),
                    root_spec: RootSpec::default(),
                })
            }
            ProfileKind::QuatProj(n) => {
                require(n >= 1, "projective dimension must be >= 1")?;
                let d = 4 * n;
                let coef = (ln_gamma(2.0 * n as f64 + 2.0) - 2.0 * n as f64 * PI.ln()).exp(); // (2n+1)!/π^{2n}
                let weight = Weight::SinCos {
                    coef,
                    m: (d - 1) as u32,
                    b: 3,
                };
                let table = build_table(&weight, d, PI / 2.0);
                Ok(Self {
                    kind: ProfileKind::QuatProj(n),
                    dim: d,
                    radius: PI / 2.0,
                    g_total: total_gaussian_mass(d),
                    weight,
                    cumulative: Cumulative::Table(table),
                    closed_rho: None,
                    root_spec: RootSpec::default(),
                })
            }
            ProfileKind::Octonion => {
                let d = 16;
                let coef = 1320.0 * 5040.0 / PI.powi(8); // 1320 Γ(8) / π^8
                let weight = Weight::SinCos { coef, m: 15, b: 7 };
                let table = build_table(&weight, d, PI / 2.0);
                Ok(Self {
                    kind: ProfileKind::Octonion,
                    dim: d,
                    radius: PI / 2.0,
                    g_total: total_gaussian_mass(d),
                    weight,
                    cumulative: Cumulative::Table(table),
                    closed_rho: None,
                    root_spec: RootSpec::default(),
                })
            }
            ProfileKind::Gaussian { dim, variance } => {
                require(dim >= 1, "gaussian dimension must be >= 1")?;
                if !(variance > 0.0) || !variance.is_finite() {
                    return Err(Error::InvalidParameter(
                        "gaussian variance must be positive".into(),
                    ));
                }
                let half_dim = dim as f64 / 2.0;
                let log_norm = -half_dim * (2.0 * PI * variance).ln();
                Ok(Self {
                    kind: ProfileKind::Gaussian { dim, variance },
                    dim,
                    radius: f64::INFINITY,
                    g_total: total_gaussian_mass(dim),
                    weight: Weight::Gaussian {
                        inv_two_b: 0.5 / variance,
                        log_norm,
                    },
                    cumulative: Cumulative::GaussianCdf {
                        half_dim,
                        inv_two_b: 0.5 / variance,
                    },
                    closed_rho: Some(ClosedRho::Scale {
                        factor: variance.sqrt(),
                    }),
                    root_spec: RootSpec::default(),
                })
            }
            ProfileKind::Stereographic2d => Ok(Self {
                kind: ProfileKind::Stereographic2d,
                dim: 2,
                radius: f64::INFINITY,
                g_total: total_gaussian_mass(2),
                weight: Weight::Stereo2d,
                cumulative: Cumulative::Stereo2d,
                closed_rho: Some(ClosedRho::Stereo2d),
                root_spec: RootSpec::default(),
            }),
            ProfileKind::Custom {
                dim,
                radius,
                weight,
                auto_normalize,
            } => {
                require(dim >= 1, "custom dimension must be >= 1")?;
                if !(radius > 0.0) {
                    return Err(Error::InvalidParameter(
                        "custom radius must be positive".into(),
                    ));
                }
                let g_total = total_gaussian_mass(dim);
                let raw = Weight::Custom {
                    weight: weight.clone(),
                    scale: 1.0,
                };
                let mass = integrated_mass(&raw, dim, radius, g_total)? / g_total;
                let scale = if auto_normalize {
                    1.0 / mass
                } else {
                    if (mass - 1.0).abs() > 1e-8 {
                        return Err(Error::Normalization { mass });
                    }
                    1.0
                };
                let live = Weight::Custom {
                    weight: weight.clone(),
                    scale,
                };
                let table = build_table(&live, dim, radius);
                Ok(Self {
                    kind: ProfileKind::Custom {
                        dim,
                        radius,
                        weight,
                        auto_normalize,
                    },
                    dim,
                    radius,
                    g_total,
                    weight: live,
                    cumulative: Cumulative::Table(table),
                    closed_rho: None,
                    root_spec: RootSpec::default(),
                })
            }
        }
    }

    /// The catalogue entry this profile was built from.
    pub fn kind(&self) -> &ProfileKind {
        &self.kind
    }

    /// Dimension `d` of the ambient Euclidean space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Ball radius `R` (the diameter of the target for chart profiles).
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Whether `ρ(r)` has a closed form.
    pub fn has_closed_rho(&self) -> bool {
        self.closed_rho.is_some()
    }

    /// The weight `ω(s)`.
    pub fn omega(&self, s: f64) -> f64 {
        self.weight.omega(s, self.dim)
    }

    /// The radial density `ω(s) s^{d-1}`, the integrand of `G`.
    pub fn radial_density(&self, s: f64) -> f64 {
        self.weight.density(s, self.dim)
    }

    /// The paper's cumulative `G(ρ)` (so `G(R) = Γ(d/2) / (2π^{d/2})`).
    pub fn g_cumulative(&self, rho: f64) -> Result<f64> {
        if !(0.0..=self.radius).contains(&rho) {
            return Err(Error::Domain {
                what: "g_cumulative",
                value: rho,
            });
        }
        Ok(self.radial_cdf(rho) * self.g_total)
    }

    /// The radial CDF `Ĝ(ρ) = G(ρ)/G(R)`, extended by 0 and 1 outside
    /// `[0, R]`. This is the pushforward law of the chart radius.
    pub fn radial_cdf(&self, rho: f64) -> f64 {
        if rho <= 0.0 {
            return 0.0;
        }
        if rho >= self.radius {
            return 1.0;
        }
        let value = match &self.cumulative {
            Cumulative::PowDim => rho.powi(self.dim as i32),
            Cumulative::SinPowRatio { m, total } => specfun::sin_power_integral(*m, rho) / total,
            Cumulative::SinPowEven { two_n } => rho.sin().powi(*two_n),
            Cumulative::GaussianCdf {
                half_dim,
                inv_two_b,
            } => gamma_p(*half_dim, rho * rho * inv_two_b).unwrap_or(f64::NAN),
            Cumulative::Stereo2d => rho * rho / (1.0 + rho * rho),
            Cumulative::Table(table) => self.table_eval(table, rho),
        };
        value.clamp(0.0, 1.0)
    }

    /// The survival function `1 - Ĝ(ρ)`, evaluated with relative accuracy
    /// near the boundary where the CDF saturates.
    pub fn radial_sf(&self, rho: f64) -> f64 {
        if rho <= 0.0 {
            return 1.0;
        }
        if rho >= self.radius {
            return 0.0;
        }
        let value = match &self.cumulative {
            // 1 - rho^d without cancellation.
            Cumulative::PowDim => -(self.dim as f64 * rho.ln()).exp_m1(),
            Cumulative::SinPowRatio { m, total } => {
                if self.radius == PI {
                    // Tail integral of sin^m over [rho, pi] equals the head
                    // over [0, pi - rho] by symmetry.
                    specfun::sin_power_integral(*m, PI - rho) / total
                } else {
                    // Over [rho, pi/2] substitute s -> pi/2 - s.
                    specfun::cos_power_integral(*m, PI / 2.0 - rho) / total
                }
            }
            Cumulative::SinPowEven { two_n } => {
                let c = rho.cos();
                let n = (*two_n as f64) / 2.0;
                -(n * (-c * c).ln_1p()).exp_m1()
            }
            Cumulative::GaussianCdf {
                half_dim,
                inv_two_b,
            } => gamma_q(*half_dim, rho * rho * inv_two_b).unwrap_or(f64::NAN),
            Cumulative::Stereo2d => 1.0 / (1.0 + rho * rho),
            Cumulative::Table(table) => self.table_sf(table, rho),
        };
        value.clamp(0.0, 1.0)
    }

    fn table_panel(&self, table: &GTable, a: f64, b: f64) -> f64 {
        let weight = &self.weight;
        let d = self.dim;
        if table.transformed {
            gauss_legendre_panel(
                &|t| {
                    let s = t / (1.0 - t);
                    weight.density(s, d) / ((1.0 - t) * (1.0 - t))
                },
                a,
                b,
                15,
            )
        } else {
            gauss_legendre_panel(&|s| weight.density(s, d), a, b, 15)
        }
    }

    fn table_eval(&self, table: &GTable, rho: f64) -> f64 {
        let x = if table.transformed {
            rho / (1.0 + rho)
        } else {
            rho
        };
        if x >= table.upper {
            return 1.0;
        }
        let idx = ((x / table.step) as usize).min(table.prefix.len() - 2);
        let x0 = idx as f64 * table.step;
        let partial = self.table_panel(table, x0, x);
        ((table.prefix[idx] + partial) / table.scale).clamp(0.0, 1.0)
    }

    fn table_sf(&self, table: &GTable, rho: f64) -> f64 {
        let x = if table.transformed {
            rho / (1.0 + rho)
        } else {
            rho
        };
        if x >= table.upper {
            return 0.0;
        }
        let idx = ((x / table.step) as usize).min(table.prefix.len() - 2);
        let x1 = (idx + 1) as f64 * table.step;
        let partial = self.table_panel(table, x, x1);
        ((table.suffix[idx + 1] + partial) / table.scale).clamp(0.0, 1.0)
    }

    /// The radius map `ρ(r)`, through the closed form when one exists.
    pub fn rho_of_r(&self, r: f64) -> Result<f64> {
        match self.closed_rho {
            Some(closed) => self.rho_closed(closed, r),
            None => self.rho_of_r_numeric(r),
        }
    }

    /// The radius map through the numeric route: invert `Ĝ` against the
    /// Gaussian radial CDF with safeguarded Newton.
    ///
    /// The equation is normalized by the target so the residual tolerance
    /// acts relatively, and it flips to the survival-function form past the
    /// median, where the CDF saturates and absolute residuals would stop
    /// carrying information.
    pub fn rho_of_r_numeric(&self, r: f64) -> Result<f64> {
        if r.is_nan() || r < 0.0 {
            return Err(Error::Domain {
                what: "rho_of_r",
                value: r,
            });
        }
        if r == 0.0 {
            return Ok(0.0);
        }
        let half_dim = self.dim as f64 / 2.0;
        let target = gamma_p(half_dim, 0.5 * r * r)?;
        if target >= CDF_SATURATION {
            return Ok(self.capped_radius());
        }
        let hi = if self.radius.is_finite() {
            self.radius
        } else {
            let mut hi = r.max(1.0);
            while self.radial_cdf(hi) < target {
                hi *= 2.0;
                if hi > 1e160 {
                    return Err(Error::Convergence {
                        what: "rho bracket",
                        residual: target,
                    });
                }
            }
            hi
        };
        let g_total = self.g_total;
        let rho = if target <= 0.9 {
            specfun::solve_monotone_newton(
                |rho| self.radial_cdf(rho) / target,
                |rho| self.radial_density(rho) / g_total / target,
                1.0,
                0.0,
                hi,
                &self.root_spec,
            )?
        } else {
            let tail = gamma_q(half_dim, 0.5 * r * r)?;
            specfun::solve_monotone_newton(
                |rho| -(self.radial_sf(rho) / tail).ln(),
                |rho| self.radial_density(rho) / g_total / self.radial_sf(rho),
                0.0,
                0.0,
                hi,
                &self.root_spec,
            )?
        };
        Ok(if self.radius.is_finite() {
            rho.min(self.capped_radius())
        } else {
            rho
        })
    }

    fn capped_radius(&self) -> f64 {
        self.radius * (1.0 - BOUNDARY_MARGIN)
    }

    fn rho_closed(&self, closed: ClosedRho, r: f64) -> Result<f64> {
        if r.is_nan() || r < 0.0 {
            return Err(Error::Domain {
                what: "rho_of_r",
                value: r,
            });
        }
        if r == 0.0 {
            return Ok(0.0);
        }
        let d = self.dim as f64;
        let rho = match closed {
            ClosedRho::BallRoot => gamma_p(d / 2.0, 0.5 * r * r)?.powf(1.0 / d),
            ClosedRho::SphereOne => PI * specfun::erf(r / core::f64::consts::SQRT_2),
            ClosedRho::SphereTwo => 2.0 * (-r * r / 4.0).exp().acos(),
            ClosedRho::RpOne => PI / 2.0 * specfun::erf(r / core::f64::consts::SQRT_2),
            ClosedRho::RpTwo => (-r * r / 2.0).exp().acos(),
            ClosedRho::CpArcsin { n } => gamma_p(n, 0.5 * r * r)?.powf(0.5 / n).asin(),
            ClosedRho::Scale { factor } => factor * r,
            // e^{r²/4} sqrt(1 - e^{-r²/2}) stays representable far past the
            // point where e^{r²/2} - 1 overflows.
            ClosedRho::Stereo2d => (0.25 * r * r).exp() * (-(-0.5 * r * r).exp_m1()).sqrt(),
        };
        Ok(if self.radius.is_finite() {
            rho.min(self.capped_radius())
        } else {
            rho
        })
    }

    /// Inverse radius map: the `r` with `ρ(r) = rho`, obtained from the
    /// inverse regularized gamma function (through the complementary form
    /// past the median).
    pub fn r_of_rho(&self, rho: f64) -> Result<f64> {
        if rho.is_nan() || rho < 0.0 || rho >= self.radius {
            return Err(Error::Domain {
                what: "r_of_rho",
                value: rho,
            });
        }
        if rho == 0.0 {
            return Ok(0.0);
        }
        let half_dim = self.dim as f64 / 2.0;
        let u = self.radial_cdf(rho);
        let x = if u <= 0.9 {
            gamma_p_inv(half_dim, u)?
        } else {
            let q = self.radial_sf(rho).max(f64::MIN_POSITIVE);
            specfun::gamma_q_inv(half_dim, q)?
        };
        Ok((2.0 * x).sqrt())
    }

    /// The vector transport `φ(y) = y ρ(|y|)/|y|`, extended by `φ(0) = 0`.
    pub fn varphi(&self, y: &EuclideanPoint) -> Result<ChartVector> {
        if y.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: y.dim(),
            });
        }
        let r = y.norm();
        if r == 0.0 {
            return Ok(ChartVector::zero(self.dim));
        }
        let rho = self.rho_of_r(r)?;
        let scale = rho / r;
        Ok(ChartVector::new(
            y.coords().iter().map(|c| c * scale).collect(),
        ))
    }

    /// Inverse transport `φ⁻¹(v) = v ρ⁻¹(|v|)/|v|`.
    pub fn varphi_inv(&self, v: &ChartVector) -> Result<EuclideanPoint> {
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: v.dim(),
            });
        }
        let rho = v.norm();
        if rho == 0.0 {
            return Ok(EuclideanPoint::zero(self.dim));
        }
        let r = self.r_of_rho(rho)?;
        let scale = r / rho;
        EuclideanPoint::new(v.coords().iter().map(|c| c * scale).collect())
    }

    /// Residual of the probability normalization
    /// `(2π^{d/2}/Γ(d/2)) ∫_0^R ω(s) s^{d-1} ds = 1`, by quadrature.
    pub fn normalization_residual(&self) -> Result<f64> {
        let mass = integrated_mass(&self.weight, self.dim, self.radius, self.g_total)?;
        Ok((mass / self.g_total - 1.0).abs())
    }
}

/// Quadrature of the radial density over the full ball, in the native
/// variable for finite radii and in `t = s/(1+s)` otherwise.
fn integrated_mass(weight: &Weight, d: usize, radius: f64, scale_hint: f64) -> Result<f64> {
    let spec = QuadratureSpec {
        abs_tol: 1e-13 * scale_hint.max(1e-300),
        ..QuadratureSpec::default()
    };
    if radius.is_finite() {
        integrate(|s| weight.density(s, d), 0.0, radius, &spec)
    } else {
        integrate(
            |t| {
                let s = t / (1.0 - t);
                weight.density(s, d) / ((1.0 - t) * (1.0 - t))
            },
            0.0,
            1.0,
            &spec,
        )
    }
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg.into()))
    }
}

/// `G(R) = Γ(d/2) / (2 π^{d/2})`, the total Gaussian radial mass.
fn total_gaussian_mass(d: usize) -> f64 {
    (ln_gamma(d as f64 / 2.0) - (d as f64 / 2.0) * PI.ln()).exp() / 2.0
}

/// Volume of the unit sphere `S^n`.
pub(crate) fn sphere_volume(n: usize) -> f64 {
    2.0 * (0.5 * (n as f64 + 1.0) * PI.ln() - ln_gamma((n as f64 + 1.0) / 2.0)).exp()
}

fn build_table(weight: &Weight, d: usize, radius: f64) -> GTable {
    let transformed = !radius.is_finite();
    let upper = if transformed { 1.0 } else { radius };
    let step = upper / TABLE_PANELS as f64;
    let mut panels = Vec::with_capacity(TABLE_PANELS);
    for i in 0..TABLE_PANELS {
        let a = i as f64 * step;
        let panel = if transformed {
            gauss_legendre_panel(
                &|t| {
                    let s = t / (1.0 - t);
                    weight.density(s, d) / ((1.0 - t) * (1.0 - t))
                },
                a,
                a + step,
                15,
            )
        } else {
            gauss_legendre_panel(&|s| weight.density(s, d), a, a + step, 15)
        };
        panels.push(panel);
    }
    let mut prefix = Vec::with_capacity(TABLE_PANELS + 1);
    prefix.push(0.0);
    let mut acc = 0.0;
    for &panel in &panels {
        acc += panel;
        prefix.push(acc);
    }
    let mut suffix = vec![0.0; TABLE_PANELS + 1];
    let mut tail = 0.0;
    for i in (0..TABLE_PANELS).rev() {
        tail += panels[i];
        suffix[i] = tail;
    }
    GTable {
        step,
        upper,
        transformed,
        prefix,
        suffix,
        scale: acc,
    }
}
