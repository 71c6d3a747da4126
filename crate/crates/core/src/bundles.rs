//! Product spaces and fiber-bundle compositions.
//!
//! Products split the cube coordinates and map each block with its factor's
//! map. For a fiber bundle with constant normal Jacobian, a base map, a
//! fiber map, and a measure-preserving fiber placement compose to a map
//! onto the total space; the one concrete instance here is the complex
//! Hopf circle bundle over `CP^n`, which yields closed-form maps onto the
//! odd spheres `S^{2n+1}`.

use alloc::vec::Vec;

use crate::algebra::Complex;
use crate::crosses::{CrossKind, CrossSpace, Field, ManifoldPoint};
use crate::error::{Error, Result};
#[cfg(not(feature = "std"))]
use crate::math::FloatExt;
use crate::point::{norm, ChartVector, CubePoint};

use core::f64::consts::PI;

/// One factor of a product target.
#[derive(Debug, Clone)]
#[allow(clippy::large_enum_variant)]
pub enum Factor {
    /// A CROSS target.
    Cross(CrossSpace),
    /// The uniform unit ball `B^d`.
    Ball(usize),
}

impl Factor {
    /// Cube dimension consumed by this factor.
    pub fn cube_dim(&self) -> usize {
        match self {
            Factor::Cross(space) => space.real_dim(),
            Factor::Ball(d) => *d,
        }
    }

    /// Ambient coordinates produced by this factor.
    pub fn ambient_dim(&self) -> usize {
        match self {
            Factor::Cross(space) => space.ambient_dim(),
            Factor::Ball(d) => *d,
        }
    }
}

/// A point of one product factor.
#[derive(Debug, Clone, PartialEq)]
pub enum FactorPoint {
    /// Point on a CROSS.
    Manifold(ManifoldPoint),
    /// Point of the unit ball.
    Ball(ChartVector),
}

impl FactorPoint {
    /// Ambient real coordinates.
    pub fn ambient(&self) -> &[f64] {
        match self {
            FactorPoint::Manifold(p) => p.ambient(),
            FactorPoint::Ball(v) => v.coords(),
        }
    }
}

/// An ordered finite product of targets.
#[derive(Debug, Clone)]
pub struct ProductSpace {
    factors: Vec<Factor>,
}

impl ProductSpace {
    /// Builds a product; needs at least one factor.
    pub fn new(factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter(
                "product needs at least one factor".into(),
            ));
        }
        Ok(Self { factors })
    }

    /// The ordered factors.
    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    /// Total cube dimension (sum over factors).
    pub fn cube_dim(&self) -> usize {
        self.factors.iter().map(Factor::cube_dim).sum()
    }

    /// Total ambient dimension of emitted points.
    pub fn ambient_dim(&self) -> usize {
        self.factors.iter().map(Factor::ambient_dim).sum()
    }

    /// Splits the cube coordinates and maps each block with its factor.
    pub fn phi(&self, x: &CubePoint) -> Result<Vec<FactorPoint>> {
        if x.dim() != self.cube_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.cube_dim(),
                got: x.dim(),
            });
        }
        let mut out = Vec::with_capacity(self.factors.len());
        let mut offset = 0;
        for factor in &self.factors {
            let d = factor.cube_dim();
            let block = CubePoint::new(x.coords()[offset..offset + d].to_vec())?;
            offset += d;
            out.push(match factor {
                Factor::Cross(space) => FactorPoint::Manifold(space.phi(&block)?),
                Factor::Ball(dim) => FactorPoint::Ball(crate::crosses::phi_ball(*dim, &block)?),
            });
        }
        Ok(out)
    }

    /// Factor-wise inverse, off the factors' cut loci.
    pub fn phi_inv(&self, points: &[FactorPoint]) -> Result<CubePoint> {
        if points.len() != self.factors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.factors.len(),
                got: points.len(),
            });
        }
        let mut coords = Vec::with_capacity(self.cube_dim());
        for (factor, point) in self.factors.iter().zip(points) {
            let block = match (factor, point) {
                (Factor::Cross(space), FactorPoint::Manifold(p)) => space.phi_inv(p)?,
                (Factor::Ball(d), FactorPoint::Ball(v)) => crate::crosses::phi_ball_inv(*d, v)?,
                _ => return Err(Error::Unsupported("factor/point variant mismatch")),
            };
            coords.extend_from_slice(block.coords());
        }
        CubePoint::new(coords)
    }
}

/// Generic fiber-bundle composition: `x ↦ Ψ_{Φ_B(y)}(Φ_F(z))` where the
/// cube coordinates split as `x = (y, z)`.
///
/// `place` realizes the fiber placement `Ψ`; it must be a measure-preserving
/// map of the fiber onto the fiber over the base point for the composition
/// to preserve measure (constant normal Jacobian of the projection).
pub struct FiberMap<B, F, E, PB, PF, PL>
where
    PB: Fn(&CubePoint) -> Result<B>,
    PF: Fn(&CubePoint) -> Result<F>,
    PL: Fn(&B, &F) -> Result<E>,
{
    base_dim: usize,
    fiber_dim: usize,
    phi_base: PB,
    phi_fiber: PF,
    place: PL,
}

impl<B, F, E, PB, PF, PL> FiberMap<B, F, E, PB, PF, PL>
where
    PB: Fn(&CubePoint) -> Result<B>,
    PF: Fn(&CubePoint) -> Result<F>,
    PL: Fn(&B, &F) -> Result<E>,
{
    /// Assembles the composition from its three legs.
    pub fn new(base_dim: usize, fiber_dim: usize, phi_base: PB, phi_fiber: PF, place: PL) -> Self {
        Self {
            base_dim,
            fiber_dim,
            phi_base,
            phi_fiber,
            place,
        }
    }

    /// Total cube dimension.
    pub fn cube_dim(&self) -> usize {
        self.base_dim + self.fiber_dim
    }

    /// Applies the composed map.
    pub fn map(&self, x: &CubePoint) -> Result<E> {
        if x.dim() != self.cube_dim() {
            return Err(Error::DimensionMismatch {
                expected: self.cube_dim(),
                got: x.dim(),
            });
        }
        let base = CubePoint::new(x.coords()[..self.base_dim].to_vec())?;
        let fiber = CubePoint::new(x.coords()[self.base_dim..].to_vec())?;
        let b = (self.phi_base)(&base)?;
        let f = (self.phi_fiber)(&fiber)?;
        (self.place)(&b, &f)
    }
}

/// The odd sphere `S^{2n+1}` built over `CP^n` through the Hopf bundle.
#[derive(Debug, Clone)]
pub struct HopfTarget {
    n: usize,
    complex_proj: CrossSpace,
}

impl HopfTarget {
    /// Builds the target for `S^{2n+1}`, `n >= 1`.
    pub fn new(n: usize) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidParameter(
                "hopf parameter must be >= 1".into(),
            ));
        }
        Ok(Self {
            n,
            complex_proj: CrossSpace::new(CrossKind::ComplexProj(n))?,
        })
    }

    /// The complex-projective parameter `n`.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Sphere dimension `2n + 1`.
    pub fn sphere_dim(&self) -> usize {
        2 * self.n + 1
    }

    /// Cube dimension `2n + 1`.
    pub fn cube_dim(&self) -> usize {
        2 * self.n + 1
    }

    /// Ambient coordinates: `C^{n+1}` packed as `2(n+1)` reals.
    pub fn ambient_dim(&self) -> usize {
        2 * (self.n + 1)
    }

    /// The underlying base-space map (for projection consistency checks).
    pub fn complex_proj(&self) -> &CrossSpace {
        &self.complex_proj
    }

    /// Maps `(y, t)` with `y` the first `2n` coordinates: the unit
    /// representative of the `CP^n` image of `y`, rotated by the circle
    /// phase `-i e^{-i 2π t}`.
    pub fn phi(&self, x: &CubePoint) -> Result<ManifoldPoint> {
        let fiber = FiberMap::new(
            2 * self.n,
            1,
            |y: &CubePoint| self.complex_proj.phi(y),
            |t: &CubePoint| Ok(circle_phase(t.coords()[0])),
            |rep: &ManifoldPoint, phase: &Complex| place_on_fiber(rep, *phase),
        );
        fiber.map(x)
    }

    /// Recovers `(y, t)` from a sphere point, off the exceptional set.
    pub fn phi_inv(&self, p: &ManifoldPoint) -> Result<CubePoint> {
        let coords = match p {
            ManifoldPoint::Sphere(c) if c.len() == self.ambient_dim() => c,
            _ => return Err(Error::Unsupported("expected a packed-complex sphere point")),
        };
        let projected = hopf_project(p)?;
        let rep = match &projected {
            ManifoldPoint::Proj { coords, .. } => coords,
            _ => unreachable!(),
        };
        // Phase from the largest representative coordinate: p_j = zeta rep_j.
        let blocks = coords.len() / 2;
        let j = (0..blocks)
            .max_by(|&a, &b| {
                let na = rep[2 * a] * rep[2 * a] + rep[2 * a + 1] * rep[2 * a + 1];
                let nb = rep[2 * b] * rep[2 * b] + rep[2 * b + 1] * rep[2 * b + 1];
                na.partial_cmp(&nb).unwrap()
            })
            .unwrap();
        let rj = Complex::new(rep[2 * j], rep[2 * j + 1]);
        let pj = Complex::new(coords[2 * j], coords[2 * j + 1]);
        let zeta = (pj * rj.conj()).scale(1.0 / rj.norm_sqr());
        // zeta = -i e^{-i 2π t}  =>  i zeta = e^{-i 2π t}.
        let w = Complex::new(0.0, 1.0) * zeta;
        let mut t = -w.im.atan2(w.re) / (2.0 * PI);
        if t <= 0.0 {
            t += 1.0;
        }
        let y = self.complex_proj.phi_inv(&projected)?;
        let mut cube = y.coords().to_vec();
        cube.push(t.clamp(f64::EPSILON / 2.0, 1.0 - f64::EPSILON / 2.0));
        CubePoint::new(cube)
    }
}

/// `Φ_{S^1}(t) = -i e^{-i 2π t}` as a unimodular complex number.
fn circle_phase(t: f64) -> Complex {
    let angle = 2.0 * PI * t;
    Complex::new(-angle.sin(), -angle.cos())
}

/// Scalar multiplication of a unit `CP^n` representative by a circle
/// element: the fiber placement of the Hopf bundle (an isometry onto the
/// fiber through the representative).
fn place_on_fiber(rep: &ManifoldPoint, phase: Complex) -> Result<ManifoldPoint> {
    let coords = match rep {
        ManifoldPoint::Proj {
            field: Field::Complex,
            coords,
        } => coords,
        _ => {
            return Err(Error::Unsupported(
                "fiber placement needs a complex representative",
            ))
        }
    };
    let mut out = Vec::with_capacity(coords.len());
    for j in 0..coords.len() / 2 {
        let z = phase * Complex::new(coords[2 * j], coords[2 * j + 1]);
        out.push(z.re);
        out.push(z.im);
    }
    Ok(ManifoldPoint::Sphere(out))
}

/// The Hopf projection `h(y_1, ..., y_{n+1}) = [y_1 : ... : y_{n+1}]`,
/// returned as the canonical unit representative.
pub fn hopf_project(p: &ManifoldPoint) -> Result<ManifoldPoint> {
    let coords = match p {
        ManifoldPoint::Sphere(c) if c.len() % 2 == 0 && c.len() >= 4 => c,
        _ => {
            return Err(Error::Unsupported(
                "hopf projection needs a packed-complex sphere point",
            ))
        }
    };
    let n = (norm(coords) - 1.0).abs();
    if n > 1e-9 {
        return Err(Error::Domain {
            what: "hopf_project (unit sphere)",
            value: 1.0 + n,
        });
    }
    ManifoldPoint::Proj {
        field: Field::Complex,
        coords: coords.clone(),
    }
    .canonicalized()
}
