//! Exponential charts, point representations, distances, and the composed
//! cube-to-manifold maps for spheres and projective spaces.
//!
//! Each target is described by a [`CrossSpace`]: dimension, diameter,
//! volume, and the radial profile of its exponential-chart pullback
//! density. The full map factors as chart ∘ radial transport ∘ Gaussian
//! reshaping; a handful of targets also carry a dedicated closed-form
//! evaluator which must agree with the composed route.
//!
//! Projective points are stored as unit-norm homogeneous representatives
//! with the last nonzero coordinate real and positive (the tan-form chart
//! image normalized, which stays finite arbitrarily close to the cut
//! locus). The Cayley plane has no computable ambient model here and lives
//! entirely in its chart ball `B^16(0, π/2)`.

use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{Complex, Quaternion};
use crate::cube_gauss::{phi_rd, phi_rd_inv};
use crate::error::{Error, Result};
#[cfg(not(feature = "std"))]
use crate::math::FloatExt;
use crate::point::{norm, ChartVector, CubePoint, EuclideanPoint};
use crate::radial::{sphere_volume, ProfileKind, RadialProfile};
use crate::specfun::{gamma_p, gamma_p_inv, gamma_q, ln_gamma};

use core::f64::consts::PI;

/// Points closer than this to the cut locus are rejected by the log chart.
const CUT_LOCUS_TOL: f64 = 1e-9;

/// Division algebra underlying a projective space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    /// Real numbers.
    Real,
    /// Complex numbers.
    Complex,
    /// Quaternions.
    Quaternion,
}

impl Field {
    /// Real components per field scalar.
    pub fn components(self) -> usize {
        match self {
            Field::Real => 1,
            Field::Complex => 2,
            Field::Quaternion => 4,
        }
    }
}

/// The compact rank one symmetric spaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CrossKind {
    /// The unit sphere `S^n`.
    Sphere(usize),
    /// Real projective space `RP^n`.
    RealProj(usize),
    /// Complex projective space `CP^n`.
    ComplexProj(usize),
    /// Quaternionic projective space `HP^n`.
    QuatProj(usize),
    /// The Cayley plane `OP^2`.
    Octonion,
}

/// A point on a target space.
///
/// Sphere points are unit vectors; projective points are canonical
/// unit-norm homogeneous representatives packed as interleaved real
/// components; Cayley-plane points are chart vectors.
#[derive(Debug, Clone, PartialEq)]
pub enum ManifoldPoint {
    /// Unit vector in `R^{n+1}`.
    Sphere(Vec<f64>),
    /// Canonical unit representative in `F^{n+1}`.
    Proj {
        /// Scalar field of the projective space.
        field: Field,
        /// Interleaved real components, `(n+1) * field.components()` long.
        coords: Vec<f64>,
    },
    /// Chart-ball representation of a Cayley-plane point.
    OctChart(ChartVector),
}

impl ManifoldPoint {
    /// Ambient real coordinates (the chart vector for `OP^2`).
    pub fn ambient(&self) -> &[f64] {
        match self {
            ManifoldPoint::Sphere(v) => v,
            ManifoldPoint::Proj { coords, .. } => coords,
            ManifoldPoint::OctChart(v) => v.coords(),
        }
    }

    /// Canonical form of the point. Idempotent: applying it twice yields
    /// bitwise the same coordinates.
    pub fn canonicalized(&self) -> Result<ManifoldPoint> {
        match self {
            ManifoldPoint::Proj { field, coords } => {
                let mut c = coords.clone();
                canonicalize(&mut c, *field)?;
                Ok(ManifoldPoint::Proj {
                    field: *field,
                    coords: c,
                })
            }
            other => Ok(other.clone()),
        }
    }
}

/// Rescales to unit norm and rotates the last nonzero field coordinate to
/// the positive real axis, in place.
fn canonicalize(coords: &mut [f64], field: Field) -> Result<()> {
    let k = field.components();
    debug_assert_eq!(coords.len() % k, 0);
    let blocks = coords.len() / k;
    let pivot = (0..blocks)
        .rev()
        .find(|&j| coords[j * k..(j + 1) * k].iter().any(|&c| c != 0.0))
        .ok_or(Error::Domain {
            what: "canonicalize (zero vector)",
            value: 0.0,
        })?;
    let block = &coords[pivot * k..(pivot + 1) * k];
    let already_positive_real = block[0] > 0.0 && block[1..].iter().all(|&c| c == 0.0);
    if !already_positive_real {
        let modulus = norm(block);
        match field {
            Field::Real => {
                let sign = block[0].signum();
                for c in coords.iter_mut() {
                    *c *= sign;
                }
            }
            Field::Complex => {
                let phase = Complex::new(block[0], block[1]).conj().scale(1.0 / modulus);
                for j in 0..blocks {
                    let z = Complex::new(coords[2 * j], coords[2 * j + 1]) * phase;
                    coords[2 * j] = z.re;
                    coords[2 * j + 1] = z.im;
                }
            }
            Field::Quaternion => {
                let phase = Quaternion::new(block[0], block[1], block[2], block[3])
                    .conj()
                    .scale(1.0 / modulus);
                for j in 0..blocks {
                    let q = Quaternion::new(
                        coords[4 * j],
                        coords[4 * j + 1],
                        coords[4 * j + 2],
                        coords[4 * j + 3],
                    ) * phase;
                    coords[4 * j] = q.w;
                    coords[4 * j + 1] = q.x;
                    coords[4 * j + 2] = q.y;
                    coords[4 * j + 3] = q.z;
                }
            }
        }
        // The pivot is now |q| by construction; write it exactly so the
        // imaginary parts are zero rather than rounding residue.
        coords[pivot * k] = modulus;
        for c in coords[pivot * k + 1..(pivot + 1) * k].iter_mut() {
            *c = 0.0;
        }
    }
    let total = norm(coords);
    if (total - 1.0).abs() > 1e-13 {
        for c in coords.iter_mut() {
            *c /= total;
        }
    }
    Ok(())
}

/// A CROSS target with its chart profile.
#[derive(Debug, Clone)]
pub struct CrossSpace {
    kind: CrossKind,
    profile: RadialProfile,
}

impl CrossSpace {
    /// Builds the space descriptor and its radial profile.
    pub fn new(kind: CrossKind) -> Result<Self> {
        let profile = match kind {
            CrossKind::Sphere(n) => RadialProfile::new(ProfileKind::Sphere(n))?,
            CrossKind::RealProj(n) => RadialProfile::new(ProfileKind::RealProj(n))?,
            CrossKind::ComplexProj(n) => RadialProfile::new(ProfileKind::ComplexProj(n))?,
            CrossKind::QuatProj(n) => RadialProfile::new(ProfileKind::QuatProj(n))?,
            CrossKind::Octonion => RadialProfile::new(ProfileKind::Octonion)?,
        };
        Ok(Self { kind, profile })
    }

    /// Which CROSS this is.
    pub fn kind(&self) -> CrossKind {
        self.kind
    }

    /// The chart pullback profile.
    pub fn profile(&self) -> &RadialProfile {
        &self.profile
    }

    /// Real dimension `d` (the cube dimension).
    pub fn real_dim(&self) -> usize {
        self.profile.dim()
    }

    /// Diameter `D`: `π` for spheres, `π/2` for the projective spaces.
    pub fn diameter(&self) -> f64 {
        self.profile.radius()
    }

    /// Riemannian volume `V`.
    pub fn volume(&self) -> f64 {
        match self.kind {
            CrossKind::Sphere(n) => sphere_volume(n),
            CrossKind::RealProj(n) => sphere_volume(n) / 2.0,
            CrossKind::ComplexProj(n) => (n as f64 * PI.ln() - ln_gamma(n as f64 + 1.0)).exp(),
            CrossKind::QuatProj(n) => {
                (2.0 * n as f64 * PI.ln() - ln_gamma(2.0 * n as f64 + 2.0)).exp()
            }
            CrossKind::Octonion => PI.powi(8) / (1320.0 * 5040.0),
        }
    }

    /// Scalar field of a projective target.
    fn field(&self) -> Option<Field> {
        match self.kind {
            CrossKind::Sphere(_) | CrossKind::Octonion => None,
            CrossKind::RealProj(_) => Some(Field::Real),
            CrossKind::ComplexProj(_) => Some(Field::Complex),
            CrossKind::QuatProj(_) => Some(Field::Quaternion),
        }
    }

    /// Ambient coordinate count of returned points.
    pub fn ambient_dim(&self) -> usize {
        match self.kind {
            CrossKind::Sphere(n) => n + 1,
            CrossKind::RealProj(n) => n + 1,
            CrossKind::ComplexProj(n) => 2 * (n + 1),
            CrossKind::QuatProj(n) => 4 * (n + 1),
            CrossKind::Octonion => 16,
        }
    }

    /// Wraps ambient coordinates produced by this space back into a point,
    /// validating the dimension and (for sphere/projective points) the
    /// unit-norm invariant.
    pub fn point_from_ambient(&self, coords: &[f64]) -> Result<ManifoldPoint> {
        if coords.len() != self.ambient_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim(),
                got: coords.len(),
            });
        }
        match self.kind {
            CrossKind::Octonion => {
                let v = ChartVector::new(coords.to_vec());
                if v.norm() >= self.diameter() {
                    return Err(Error::Domain {
                        what: "point_from_ambient",
                        value: v.norm(),
                    });
                }
                Ok(ManifoldPoint::OctChart(v))
            }
            CrossKind::Sphere(_) => {
                let n = norm(coords);
                if (n - 1.0).abs() > 1e-9 {
                    return Err(Error::Domain {
                        what: "point_from_ambient (norm)",
                        value: n,
                    });
                }
                Ok(ManifoldPoint::Sphere(coords.to_vec()))
            }
            _ => {
                let n = norm(coords);
                if (n - 1.0).abs() > 1e-9 {
                    return Err(Error::Domain {
                        what: "point_from_ambient (norm)",
                        value: n,
                    });
                }
                ManifoldPoint::Proj {
                    field: self.field().unwrap(),
                    coords: coords.to_vec(),
                }
                .canonicalized()
            }
        }
    }

    /// The base point of the chart (image of the zero vector).
    pub fn base_point(&self) -> ManifoldPoint {
        match self.kind {
            CrossKind::Sphere(_) => {
                let mut v = vec![0.0; self.ambient_dim()];
                *v.last_mut().unwrap() = 1.0;
                ManifoldPoint::Sphere(v)
            }
            CrossKind::Octonion => ManifoldPoint::OctChart(ChartVector::zero(16)),
            _ => {
                let field = self.field().unwrap();
                let mut coords = vec![0.0; self.ambient_dim()];
                let last_block = coords.len() - field.components();
                coords[last_block] = 1.0;
                ManifoldPoint::Proj { field, coords }
            }
        }
    }

    /// Exponential chart at the base point.
    ///
    /// Spheres map `v` to `((v/|v|) sin|v|, cos|v|)`; projective spaces to
    /// the unit-norm representative of `((v/|v|) tan|v|, 1)`, which is the
    /// same expression with `(sin, cos)` in place of `(tan, 1)`. The Cayley
    /// plane keeps the chart vector.
    pub fn exp_chart(&self, v: &ChartVector) -> Result<ManifoldPoint> {
        let d = self.real_dim();
        if v.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: v.dim(),
            });
        }
        let r = v.norm();
        if r >= self.diameter() {
            return Err(Error::Domain {
                what: "exp_chart",
                value: r,
            });
        }
        match self.kind {
            CrossKind::Octonion => Ok(ManifoldPoint::OctChart(v.clone())),
            CrossKind::Sphere(_) => {
                let mut out = vec![0.0; d + 1];
                if r > 0.0 {
                    let scale = r.sin() / r;
                    for (o, c) in out.iter_mut().zip(v.coords()) {
                        *o = c * scale;
                    }
                }
                out[d] = r.cos();
                Ok(ManifoldPoint::Sphere(out))
            }
            _ => {
                let field = self.field().unwrap();
                let k = field.components();
                let mut coords = vec![0.0; d + k];
                if r > 0.0 {
                    let scale = r.sin() / r;
                    for (o, c) in coords.iter_mut().zip(v.coords()) {
                        *o = c * scale;
                    }
                }
                coords[d] = r.cos();
                Ok(ManifoldPoint::Proj { field, coords })
            }
        }
    }

    /// Inverse of the exponential chart.
    ///
    /// Fails on (or within `1e-9` of) the cut locus: the antipode for
    /// spheres, vanishing last homogeneous coordinate for projective
    /// spaces. The error carries the distance to the cut locus.
    pub fn log_chart(&self, p: &ManifoldPoint) -> Result<ChartVector> {
        let d = self.real_dim();
        match (self.kind, p) {
            (CrossKind::Octonion, ManifoldPoint::OctChart(v)) => {
                if v.dim() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        got: v.dim(),
                    });
                }
                Ok(v.clone())
            }
            (CrossKind::Sphere(_), ManifoldPoint::Sphere(coords)) => {
                if coords.len() != d + 1 {
                    return Err(Error::DimensionMismatch {
                        expected: d + 1,
                        got: coords.len(),
                    });
                }
                let theta = coords[d].clamp(-1.0, 1.0).acos();
                let margin = PI - theta;
                if margin <= CUT_LOCUS_TOL {
                    return Err(Error::CutLocus { distance: margin });
                }
                Ok(direction_scaled(&coords[..d], theta))
            }
            (_, ManifoldPoint::Proj { field, coords }) => {
                let expected_field = self.field().ok_or(Error::Unsupported(
                    "projective point on a non-projective space",
                ))?;
                if *field != expected_field {
                    return Err(Error::Unsupported("field mismatch"));
                }
                let k = field.components();
                if coords.len() != d + k {
                    return Err(Error::DimensionMismatch {
                        expected: d + k,
                        got: coords.len(),
                    });
                }
                let mut canon = coords.clone();
                canonicalize(&mut canon, *field)?;
                // After canonicalization the last block is (t, 0, ...) with
                // t >= 0; t = cos(theta) in the chart.
                let t = canon[d].clamp(0.0, 1.0);
                let theta = t.acos();
                let margin = self.diameter() - theta;
                if margin <= CUT_LOCUS_TOL {
                    return Err(Error::CutLocus { distance: margin });
                }
                Ok(direction_scaled(&canon[..d], theta))
            }
            _ => Err(Error::Unsupported("point variant does not match space")),
        }
    }

    /// The full measure-preserving map from the cube, using closed radius
    /// maps where the profile has them.
    pub fn phi(&self, x: &CubePoint) -> Result<ManifoldPoint> {
        let y = phi_rd(x)?;
        let v = self.profile.varphi(&y)?;
        self.exp_chart(&v)
    }

    /// The composed pipeline with the numeric inversion of `G` forced, for
    /// cross-checking against closed forms.
    pub fn phi_pipeline(&self, x: &CubePoint) -> Result<ManifoldPoint> {
        let y = phi_rd(x)?;
        let r = y.norm();
        if r == 0.0 {
            return self.exp_chart(&ChartVector::zero(self.real_dim()));
        }
        let rho = self.profile.rho_of_r_numeric(r)?;
        let scale = rho / r;
        let v = ChartVector::new(y.coords().iter().map(|c| c * scale).collect());
        self.exp_chart(&v)
    }

    /// Dedicated closed-form evaluator where a closed expression for the
    /// whole map exists (`S^1`, `S^2`, `RP^1`, `RP^2`, `CP^n`); `None`
    /// otherwise.
    pub fn phi_closed(&self, x: &CubePoint) -> Option<Result<ManifoldPoint>> {
        if x.dim() != self.real_dim() {
            return Some(Err(Error::DimensionMismatch {
                expected: self.real_dim(),
                got: x.dim(),
            }));
        }
        match self.kind {
            CrossKind::Sphere(1) => {
                let t = 2.0 * PI * x.coords()[0];
                Some(Ok(ManifoldPoint::Sphere(vec![-t.sin(), -t.cos()])))
            }
            CrossKind::Sphere(2) => Some(self.closed_sphere2(x)),
            CrossKind::RealProj(1) => {
                let t = PI * x.coords()[0];
                // (-cot(πx), 1), normalized.
                let mut coords = vec![-t.cos() / t.sin(), 1.0];
                match canonicalize(&mut coords, Field::Real) {
                    Ok(()) => Some(Ok(ManifoldPoint::Proj {
                        field: Field::Real,
                        coords,
                    })),
                    Err(e) => Some(Err(e)),
                }
            }
            CrossKind::RealProj(2) => Some(self.closed_rp2(x)),
            CrossKind::ComplexProj(n) => Some(self.closed_cp(n, x)),
            _ => None,
        }
    }

    fn closed_sphere2(&self, x: &CubePoint) -> Result<ManifoldPoint> {
        let y = phi_rd(x)?;
        let r2 = y.coords().iter().map(|c| c * c).sum::<f64>();
        if r2 == 0.0 {
            return Ok(self.base_point());
        }
        let r = r2.sqrt();
        let a = (-r2 / 4.0).exp();
        let radial = 2.0 * a * (1.0 - a * a).sqrt();
        let mut out: Vec<f64> = y.coords().iter().map(|c| c / r * radial).collect();
        out.push(2.0 * a * a - 1.0);
        Ok(ManifoldPoint::Sphere(out))
    }

    fn closed_rp2(&self, x: &CubePoint) -> Result<ManifoldPoint> {
        let y = phi_rd(x)?;
        let r2 = y.coords().iter().map(|c| c * c).sum::<f64>();
        if r2 == 0.0 {
            return Ok(self.base_point());
        }
        let r = r2.sqrt();
        // ((y/|y|) sqrt(e^{|y|²} - 1), 1), normalized; written with the
        // complementary exponential so it cannot overflow.
        let w = r2.exp_m1().sqrt();
        let mut coords: Vec<f64> = y.coords().iter().map(|c| c / r * w).collect();
        coords.push(1.0);
        canonicalize(&mut coords, Field::Real)?;
        Ok(ManifoldPoint::Proj {
            field: Field::Real,
            coords,
        })
    }

    fn closed_cp(&self, n: usize, x: &CubePoint) -> Result<ManifoldPoint> {
        let y = phi_rd(x)?;
        let r2 = y.coords().iter().map(|c| c * c).sum::<f64>();
        if r2 == 0.0 {
            return Ok(self.base_point());
        }
        let r = r2.sqrt();
        // Table form ((y/|y|) sqrt(-1 + 1/(1 - u^{1/n})), 1) with
        // u = P(n, r²/2); 1 - u^{1/n} is computed from the complementary
        // Q = 1 - u to stay exact when u rounds to 1.
        let q = gamma_q(n as f64, r2 / 2.0)?;
        let c2 = -((-q).ln_1p() / n as f64).exp_m1(); // 1 - u^{1/n}
        let w = (1.0 / c2 - 1.0).sqrt();
        let mut coords: Vec<f64> = y.coords().iter().map(|c| c / r * w).collect();
        coords.push(1.0);
        coords.push(0.0);
        canonicalize(&mut coords, Field::Complex)?;
        Ok(ManifoldPoint::Proj {
            field: Field::Complex,
            coords,
        })
    }

    /// Inverse of [`CrossSpace::phi`], defined off the cut locus.
    pub fn phi_inv(&self, p: &ManifoldPoint) -> Result<CubePoint> {
        let v = self.log_chart(p)?;
        let y = self.profile.varphi_inv(&v)?;
        phi_rd_inv(&y)
    }

    /// Riemannian distance between two points.
    ///
    /// Spheres use `arccos⟨p,q⟩`, projective spaces `arccos|⟨p,q⟩_F|` with
    /// the field-sesquilinear inner product of unit representatives. For
    /// the chart-only Cayley plane only distances to the base point are
    /// defined (the chart norm).
    pub fn distance(&self, p: &ManifoldPoint, q: &ManifoldPoint) -> Result<f64> {
        match (self.kind, p, q) {
            (CrossKind::Sphere(_), ManifoldPoint::Sphere(a), ManifoldPoint::Sphere(b)) => {
                if a.len() != b.len() {
                    return Err(Error::DimensionMismatch {
                        expected: a.len(),
                        got: b.len(),
                    });
                }
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                Ok(dot.clamp(-1.0, 1.0).acos())
            }
            (
                _,
                ManifoldPoint::Proj {
                    field: fa,
                    coords: a,
                },
                ManifoldPoint::Proj {
                    field: fb,
                    coords: b,
                },
            ) => {
                if fa != fb || a.len() != b.len() {
                    return Err(Error::Unsupported("mismatched projective points"));
                }
                let m = match fa {
                    Field::Real => {
                        let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                        dot.abs()
                    }
                    Field::Complex => {
                        let mut acc = Complex::default();
                        for j in 0..a.len() / 2 {
                            let pj = Complex::new(a[2 * j], a[2 * j + 1]);
                            let qj = Complex::new(b[2 * j], b[2 * j + 1]);
                            let term = pj.conj() * qj;
                            acc = Complex::new(acc.re + term.re, acc.im + term.im);
                        }
                        acc.norm_sqr().sqrt()
                    }
                    Field::Quaternion => {
                        let mut acc = Quaternion::default();
                        for j in 0..a.len() / 4 {
                            let pj =
                                Quaternion::new(a[4 * j], a[4 * j + 1], a[4 * j + 2], a[4 * j + 3]);
                            let qj =
                                Quaternion::new(b[4 * j], b[4 * j + 1], b[4 * j + 2], b[4 * j + 3]);
                            let term = pj.conj() * qj;
                            acc = Quaternion::new(
                                acc.w + term.w,
                                acc.x + term.x,
                                acc.y + term.y,
                                acc.z + term.z,
                            );
                        }
                        acc.norm_sqr().sqrt()
                    }
                };
                Ok(m.clamp(0.0, 1.0).acos())
            }
            (CrossKind::Octonion, ManifoldPoint::OctChart(a), ManifoldPoint::OctChart(b)) => {
                if a.norm() == 0.0 {
                    Ok(b.norm())
                } else if b.norm() == 0.0 {
                    Ok(a.norm())
                } else {
                    Err(Error::Unsupported(
                        "Cayley-plane distance is only defined against the base point",
                    ))
                }
            }
            _ => Err(Error::Unsupported("point variants do not match space")),
        }
    }
}

/// `u · (theta / |u|)`, the zero vector when `u` vanishes.
fn direction_scaled(u: &[f64], theta: f64) -> ChartVector {
    let n = norm(u);
    if n == 0.0 || theta == 0.0 {
        return ChartVector::zero(u.len());
    }
    let scale = theta / n;
    ChartVector::new(u.iter().map(|c| c * scale).collect())
}

/// The cube-to-ball map `Φ_B = φ_B ∘ Φ_{R^d}`:
/// `φ_B(y) = (y/|y|) (P(d/2, |y|²/2))^{1/d}`.
pub fn phi_ball(d: usize, x: &CubePoint) -> Result<ChartVector> {
    if x.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: x.dim(),
        });
    }
    let y = phi_rd(x)?;
    let r2: f64 = y.coords().iter().map(|c| c * c).sum();
    if r2 == 0.0 {
        return Ok(ChartVector::zero(d));
    }
    let radius = gamma_p(d as f64 / 2.0, r2 / 2.0)?.powf(1.0 / d as f64);
    let scale = radius / r2.sqrt();
    Ok(ChartVector::new(
        y.coords().iter().map(|c| c * scale).collect(),
    ))
}

/// Inverse of [`phi_ball`] on the open unit ball.
pub fn phi_ball_inv(d: usize, v: &ChartVector) -> Result<CubePoint> {
    if v.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: v.dim(),
        });
    }
    let rho = v.norm();
    if rho >= 1.0 {
        return Err(Error::Domain {
            what: "phi_ball_inv",
            value: rho,
        });
    }
    if rho == 0.0 {
        return phi_rd_inv(&EuclideanPoint::zero(d));
    }
    let u = rho.powi(d as i32).min(1.0 - 1e-16);
    let r = (2.0 * gamma_p_inv(d as f64 / 2.0, u)?).sqrt();
    let scale = r / rho;
    phi_rd_inv(&EuclideanPoint::new(
        v.coords().iter().map(|c| c * scale).collect(),
    )?)
}
