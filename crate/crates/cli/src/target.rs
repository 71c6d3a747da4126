//! Target descriptors keyed by flat strings.
//!
//! Grammar: `ball:D`, `sphere:N`, `rp:N`, `cp:N`, `hp:N`, `op2`, `hopf:N`,
//! and `product:<factor>+<factor>+...` where factors are any of the
//! non-product forms.

use anyhow::{anyhow, bail, Context, Result};
use crossmap_core::bundles::{Factor, FactorPoint, HopfTarget, ProductSpace};
use crossmap_core::crosses::{phi_ball, phi_ball_inv, CrossKind, CrossSpace, ManifoldPoint};
use crossmap_core::point::{ChartVector, CubePoint};
use crossmap_core::radial::{ProfileKind, RadialProfile};
use crossmap_core::specfun::incomplete_beta_sin;

use std::f64::consts::PI;

/// Any space the command line can address.
#[derive(Debug, Clone)]
pub enum Target {
    /// Uniform unit ball `B^d`.
    Ball(usize),
    /// A CROSS (sphere or projective space).
    Cross(CrossSpace),
    /// Finite product of balls and CROSSes.
    Product(ProductSpace),
    /// Odd sphere through the Hopf bundle.
    Hopf(HopfTarget),
}

impl Target {
    /// Parses a target descriptor string.
    pub fn parse(spec: &str) -> Result<Target> {
        let spec = spec.trim();
        if let Some(rest) = spec.strip_prefix("product:") {
            let factors = rest
                .split('+')
                .map(|part| {
                    let target = Target::parse(part)?;
                    match target {
                        Target::Ball(d) => Ok(Factor::Ball(d)),
                        Target::Cross(space) => Ok(Factor::Cross(space)),
                        _ => bail!("product factors must be balls or CROSS spaces: {part}"),
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            return Ok(Target::Product(ProductSpace::new(factors)?));
        }
        if spec == "op2" {
            return Ok(Target::Cross(CrossSpace::new(CrossKind::Octonion)?));
        }
        let (kind, param) = spec
            .split_once(':')
            .ok_or_else(|| anyhow!("expected `kind:param` or `op2`, got `{spec}`"))?;
        let n: usize = param
            .parse()
            .with_context(|| format!("bad parameter in `{spec}`"))?;
        match kind {
            "ball" => {
                if n == 0 {
                    bail!("ball dimension must be >= 1");
                }
                Ok(Target::Ball(n))
            }
            "sphere" => Ok(Target::Cross(CrossSpace::new(CrossKind::Sphere(n))?)),
            "rp" => Ok(Target::Cross(CrossSpace::new(CrossKind::RealProj(n))?)),
            "cp" => Ok(Target::Cross(CrossSpace::new(CrossKind::ComplexProj(n))?)),
            "hp" => Ok(Target::Cross(CrossSpace::new(CrossKind::QuatProj(n))?)),
            "hopf" => Ok(Target::Hopf(HopfTarget::new(n)?)),
            other => bail!("unknown target kind `{other}`"),
        }
    }

    /// Canonical descriptor string.
    pub fn name(&self) -> String {
        match self {
            Target::Ball(d) => format!("ball:{d}"),
            Target::Cross(space) => match space.kind() {
                CrossKind::Sphere(n) => format!("sphere:{n}"),
                CrossKind::RealProj(n) => format!("rp:{n}"),
                CrossKind::ComplexProj(n) => format!("cp:{n}"),
                CrossKind::QuatProj(n) => format!("hp:{n}"),
                CrossKind::Octonion => "op2".into(),
            },
            Target::Product(product) => {
                let parts: Vec<String> = product
                    .factors()
                    .iter()
                    .map(|f| match f {
                        Factor::Ball(d) => format!("ball:{d}"),
                        Factor::Cross(space) => Target::Cross(space.clone()).name(),
                    })
                    .collect();
                format!("product:{}", parts.join("+"))
            }
            Target::Hopf(hopf) => format!("hopf:{}", hopf.n()),
        }
    }

    /// Input (cube) dimension.
    pub fn cube_dim(&self) -> usize {
        match self {
            Target::Ball(d) => *d,
            Target::Cross(space) => space.real_dim(),
            Target::Product(product) => product.cube_dim(),
            Target::Hopf(hopf) => hopf.cube_dim(),
        }
    }

    /// Output (ambient) dimension of emitted rows.
    pub fn ambient_dim(&self) -> usize {
        match self {
            Target::Ball(d) => *d,
            Target::Cross(space) => space.ambient_dim(),
            Target::Product(product) => product.ambient_dim(),
            Target::Hopf(hopf) => hopf.ambient_dim(),
        }
    }

    /// Maps one cube point to an ambient coordinate row.
    pub fn map_row(&self, x: &CubePoint) -> Result<Vec<f64>> {
        Ok(match self {
            Target::Ball(d) => phi_ball(*d, x)?.coords().to_vec(),
            Target::Cross(space) => space.phi(x)?.ambient().to_vec(),
            Target::Product(product) => {
                let points = product.phi(x)?;
                let mut row = Vec::with_capacity(self.ambient_dim());
                for p in &points {
                    row.extend_from_slice(p.ambient());
                }
                row
            }
            Target::Hopf(hopf) => hopf.phi(x)?.ambient().to_vec(),
        })
    }

    /// Maps an ambient row back to cube coordinates (off the cut locus).
    pub fn inv_row(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.ambient_dim() {
            bail!(
                "row has {} coordinates, target needs {}",
                row.len(),
                self.ambient_dim()
            );
        }
        Ok(match self {
            Target::Ball(d) => phi_ball_inv(*d, &ChartVector::new(row.to_vec()))?
                .coords()
                .to_vec(),
            Target::Cross(space) => {
                let p = space.point_from_ambient(row)?;
                space.phi_inv(&p)?.coords().to_vec()
            }
            Target::Product(product) => {
                let mut points = Vec::with_capacity(product.factors().len());
                let mut offset = 0;
                for factor in product.factors() {
                    let width = factor.ambient_dim();
                    let slice = &row[offset..offset + width];
                    offset += width;
                    points.push(match factor {
                        Factor::Ball(_) => FactorPoint::Ball(ChartVector::new(slice.to_vec())),
                        Factor::Cross(space) => {
                            FactorPoint::Manifold(space.point_from_ambient(slice)?)
                        }
                    });
                }
                product.phi_inv(&points)?.coords().to_vec()
            }
            Target::Hopf(hopf) => hopf
                .phi_inv(&ManifoldPoint::Sphere(row.to_vec()))?
                .coords()
                .to_vec(),
        })
    }

    /// Geodesic (chart for `OP^2`, Euclidean for balls) distance from an
    /// ambient row to the base point. Not defined for products.
    pub fn distance_to_base(&self, row: &[f64]) -> Result<f64> {
        match self {
            Target::Ball(_) => Ok(row.iter().map(|c| c * c).sum::<f64>().sqrt()),
            Target::Cross(space) => {
                let p = space.point_from_ambient(row)?;
                Ok(space.distance(&space.base_point(), &p)?)
            }
            Target::Hopf(_) => {
                // Real geodesic distance on S^{2n+1} to the fixed unit
                // vector along the last real axis.
                let last = row[row.len() - 1];
                Ok(last.clamp(-1.0, 1.0).acos())
            }
            Target::Product(_) => bail!("distance-to-base is per-factor on products"),
        }
    }

    /// Radial CDF of the uniform measure: the law of
    /// [`Target::distance_to_base`] under the map. Not defined for
    /// products.
    pub fn radial_cdf(&self, t: f64) -> Result<f64> {
        match self {
            Target::Ball(d) => Ok(t.clamp(0.0, 1.0).powi(*d as i32)),
            Target::Cross(space) => Ok(space.profile().radial_cdf(t)),
            Target::Hopf(hopf) => {
                let m = 2 * hopf.n() as u32 + 1;
                let t = t.clamp(0.0, PI);
                Ok(incomplete_beta_sin(m, t)? / incomplete_beta_sin(m, PI)?)
            }
            Target::Product(_) => bail!("radial CDF is per-factor on products"),
        }
    }

    /// Largest possible distance to the base point.
    pub fn max_distance(&self) -> f64 {
        match self {
            Target::Ball(_) => 1.0,
            Target::Cross(space) => space.diameter(),
            Target::Hopf(_) => PI,
            Target::Product(_) => f64::NAN,
        }
    }

    /// The radial profile backing the target, if it is a single-factor
    /// space (used by the `rho` command and the Jacobian checks).
    pub fn radial_profile(&self) -> Result<RadialProfile> {
        match self {
            Target::Ball(d) => Ok(RadialProfile::new(ProfileKind::Ball(*d))?),
            Target::Cross(space) => Ok(space.profile().clone()),
            Target::Hopf(hopf) => Ok(RadialProfile::new(ProfileKind::Sphere(hopf.sphere_dim()))?),
            Target::Product(_) => bail!("products have no single radial profile"),
        }
    }

    /// Checks the output invariant of one ambient row: unit norm for
    /// sphere/projective points, chart bound for `OP^2`, open-ball bound
    /// for balls, factor-wise for products.
    pub fn verify_row(&self, row: &[f64]) -> bool {
        if row.len() != self.ambient_dim() || row.iter().any(|c| !c.is_finite()) {
            return false;
        }
        let norm = |s: &[f64]| s.iter().map(|c| c * c).sum::<f64>().sqrt();
        match self {
            Target::Ball(_) => norm(row) < 1.0,
            Target::Cross(space) => match space.kind() {
                CrossKind::Octonion => norm(row) < PI / 2.0,
                _ => (norm(row) - 1.0).abs() <= 1e-12,
            },
            Target::Hopf(_) => (norm(row) - 1.0).abs() <= 1e-12,
            Target::Product(product) => {
                let mut offset = 0;
                for factor in product.factors() {
                    let width = factor.ambient_dim();
                    let slice = &row[offset..offset + width];
                    offset += width;
                    let ok = match factor {
                        Factor::Ball(_) => norm(slice) < 1.0,
                        Factor::Cross(space) => match space.kind() {
                            CrossKind::Octonion => norm(slice) < PI / 2.0,
                            _ => (norm(slice) - 1.0).abs() <= 1e-12,
                        },
                    };
                    if !ok {
                        return false;
                    }
                }
                true
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_grammar_form() {
        for spec in [
            "ball:4",
            "sphere:2",
            "rp:3",
            "cp:2",
            "hp:1",
            "op2",
            "hopf:2",
            "product:sphere:2+ball:3",
        ] {
            let target = Target::parse(spec).unwrap();
            assert_eq!(target.name(), spec);
            assert!(target.cube_dim() >= 1);
        }
        assert_eq!(
            Target::parse("product:sphere:2+sphere:2")
                .unwrap()
                .cube_dim(),
            4
        );
        assert_eq!(Target::parse("hopf:1").unwrap().ambient_dim(), 4);
        assert_eq!(Target::parse("op2").unwrap().cube_dim(), 16);
    }

    #[test]
    fn rejects_malformed_specs() {
        for bad in [
            "",
            "sphere",
            "sphere:",
            "sphere:x",
            "ball:0",
            "wat:3",
            "product:hopf:1",
        ] {
            assert!(Target::parse(bad).is_err(), "{bad} should not parse");
        }
    }

    #[test]
    fn map_and_invert_round_trip() {
        let targets = [
            "ball:3",
            "sphere:2",
            "cp:2",
            "product:sphere:2+ball:2",
            "hopf:1",
        ];
        for spec in targets {
            let target = Target::parse(spec).unwrap();
            let x = CubePoint::new(vec![0.3; target.cube_dim()]).unwrap();
            let row = target.map_row(&x).unwrap();
            assert_eq!(row.len(), target.ambient_dim());
            assert!(target.verify_row(&row), "{spec} row fails verification");
            let back = target.inv_row(&row).unwrap();
            for (a, b) in back.iter().zip(x.coords()) {
                assert!((a - b).abs() < 1e-8, "{spec}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn radial_cdf_endpoints() {
        for spec in ["ball:3", "sphere:3", "cp:2", "hopf:1", "op2"] {
            let target = Target::parse(spec).unwrap();
            assert!(target.radial_cdf(0.0).unwrap() < 1e-12);
            let top = target.max_distance();
            assert!(
                (target.radial_cdf(top).unwrap() - 1.0).abs() < 1e-12,
                "{spec}"
            );
        }
    }
}
