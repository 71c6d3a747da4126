//! Statistical and numerical verification that the maps preserve measure:
//! pushforward CDF tests, equal-measure cell counts, cap fractions,
//! Jacobian identities, and cap discrepancy estimation.
//!
//! Tests are deterministic for a fixed seed; each owns its RNG stream.

use anyhow::{bail, Result};
use crossmap_core::bundles::hopf_project;
use crossmap_core::crosses::{CrossKind, CrossSpace, ManifoldPoint};
use crossmap_core::cube_gauss::GaussianMeasure;
use crossmap_core::point::{CubePoint, EuclideanPoint};
use crossmap_core::radial::RadialProfile;
use crossmap_core::specfun::gamma_p_inv;
use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::sampler::Sampler;
use crate::target::Target;

use std::f64::consts::PI;
use std::fmt;

/// Kolmogorov-Smirnov critical factor at significance 0.01.
pub const KS_C_001: f64 = 1.63;

/// Outcome of one statistical or numerical check.
#[derive(Debug, Clone)]
pub struct TestReport {
    /// Which test ran.
    pub test_name: String,
    /// Number of samples (or probe points) used.
    pub sample_size: usize,
    /// The computed statistic.
    pub statistic: f64,
    /// Pass threshold; `passed` iff `statistic <= threshold`.
    pub threshold: f64,
    /// Whether the test passed.
    pub passed: bool,
    /// Free-text context.
    pub details: String,
}

impl TestReport {
    /// Builds a report, deriving `passed` from the comparison.
    pub fn new(
        test_name: impl Into<String>,
        sample_size: usize,
        statistic: f64,
        threshold: f64,
        details: impl Into<String>,
    ) -> Self {
        Self {
            test_name: test_name.into(),
            sample_size,
            statistic,
            threshold,
            passed: statistic <= threshold,
            details: details.into(),
        }
    }
}

impl fmt::Display for TestReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "test={} n={} statistic={:.6e} threshold={:.6e} passed={} details={}",
            self.test_name,
            self.sample_size,
            self.statistic,
            self.threshold,
            self.passed,
            self.details
        )
    }
}

/// Equal-volume partition of the cube into `k^dim` axis-aligned cells.
#[derive(Debug, Clone, Copy)]
pub struct CellPartition {
    k: usize,
    dim: usize,
}

impl CellPartition {
    /// `k` cells per axis in `dim` dimensions.
    pub fn new(k: usize, dim: usize) -> Result<Self> {
        if k == 0 || dim == 0 {
            bail!("cell partition needs k >= 1 and dim >= 1");
        }
        if k.checked_pow(dim as u32).is_none() {
            bail!("cell count k^dim overflows");
        }
        Ok(Self { k, dim })
    }

    /// Total cell count `k^dim`.
    pub fn cells(&self) -> usize {
        self.k.pow(self.dim as u32)
    }

    /// Index of the cell containing a cube point.
    pub fn index(&self, coords: &[f64]) -> usize {
        let mut idx = 0;
        for &c in coords.iter().rev() {
            let digit = ((c * self.k as f64) as usize).min(self.k - 1);
            idx = idx * self.k + digit;
        }
        idx
    }
}

/// One-sample KS statistic of `samples` against a continuous CDF.
/// Sorts in place.
pub fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
    samples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let n = samples.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x);
        sup = sup
            .max((f - i as f64 / n).abs())
            .max(((i + 1) as f64 / n - f).abs());
    }
    sup
}

/// Two-sample KS statistic. Sorts both inputs in place.
pub fn ks_two_sample_statistic(a: &mut [f64], b: &mut [f64]) -> f64 {
    a.sort_by(|x, y| x.partial_cmp(y).unwrap());
    b.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (n, m) = (a.len(), b.len());
    let mut sup = 0.0f64;
    let (mut i, mut j) = (0usize, 0usize);
    while i < n && j < m {
        if a[i] <= b[j] {
            i += 1;
        } else {
            j += 1;
        }
        sup = sup.max((i as f64 / n as f64 - j as f64 / m as f64).abs());
    }
    sup
}

/// Compares the empirical distance-to-base CDF of `n` mapped sampler
/// points against the target's radial law, at significance 0.01.
///
/// Products run the test on every factor marginal and report the worst
/// factor.
pub fn ks_radial_test(target: &Target, sampler: &Sampler, n: usize) -> Result<TestReport> {
    if n < 1_000 {
        bail!("radial KS needs n >= 1000");
    }
    let threshold = KS_C_001 / (n as f64).sqrt();
    if let Target::Product(product) = target {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| target.map_row(&CubePoint::new(sampler.point(i))?))
            .collect::<Result<_>>()?;
        let mut worst = 0.0f64;
        let mut worst_factor = String::new();
        let mut offset = 0;
        for factor in product.factors() {
            let sub = match factor {
                crossmap_core::bundles::Factor::Ball(d) => Target::Ball(*d),
                crossmap_core::bundles::Factor::Cross(space) => Target::Cross(space.clone()),
            };
            let width = sub.ambient_dim();
            let mut distances = rows
                .iter()
                .map(|row| sub.distance_to_base(&row[offset..offset + width]))
                .collect::<Result<Vec<f64>>>()?;
            offset += width;
            let cdf = |t: f64| sub.radial_cdf(t).unwrap_or(f64::NAN);
            let stat = ks_statistic(&mut distances, cdf);
            if stat > worst {
                worst = stat;
                worst_factor = sub.name();
            }
        }
        return Ok(TestReport::new(
            "radial-ks",
            n,
            worst,
            threshold,
            format!(
                "target={} worst_factor={worst_factor} sampler={}",
                target.name(),
                sampler.name()
            ),
        ));
    }

    let mut distances = Vec::with_capacity(n);
    for i in 0..n {
        let x = CubePoint::new(sampler.point(i))?;
        let row = target.map_row(&x)?;
        distances.push(target.distance_to_base(&row)?);
    }
    let cdf = |t: f64| target.radial_cdf(t).unwrap_or(f64::NAN);
    let stat = ks_statistic(&mut distances, cdf);
    Ok(TestReport::new(
        "radial-ks",
        n,
        stat,
        threshold,
        format!("target={} sampler={}", target.name(), sampler.name()),
    ))
}

/// Two-sample KS between the radial laws of two point generators (used for
/// the Hopf vs direct odd-sphere comparison).
pub fn ks_radial_two_sample(name: &str, a: &mut [f64], b: &mut [f64]) -> Result<TestReport> {
    if a.is_empty() || b.is_empty() {
        bail!("two-sample KS needs nonempty samples");
    }
    let stat = ks_two_sample_statistic(a, b);
    let (n, m) = (a.len() as f64, b.len() as f64);
    let threshold = KS_C_001 * ((n + m) / (n * m)).sqrt();
    Ok(TestReport::new(
        name,
        a.len() + b.len(),
        stat,
        threshold,
        "",
    ))
}

/// Quantile of the chi-square distribution with `dof` degrees of freedom.
pub fn chi_square_quantile(dof: usize, p: f64) -> Result<f64> {
    Ok(2.0 * gamma_p_inv(dof as f64 / 2.0, p)?)
}

/// Equal-measure cell test: maps `n` sampler points, pulls each image back
/// through the inverse map, and counts hits per cube cell. Under measure
/// preservation (and an unbiased sampler) the counts are multinomial with
/// equal weights; the statistic is Pearson's chi-square against the 0.99
/// quantile at `k^d - 1` degrees of freedom.
pub fn chi2_cell_test(
    target: &Target,
    k: usize,
    n: usize,
    sampler: &Sampler,
) -> Result<TestReport> {
    let partition = CellPartition::new(k, target.cube_dim())?;
    let cells = partition.cells();
    if n < 20 * cells {
        bail!("undersampled: need n >= 20 k^d = {}", 20 * cells);
    }
    let mut counts = vec![0u64; cells];
    for i in 0..n {
        let x = CubePoint::new(sampler.point(i))?;
        let row = target.map_row(&x)?;
        let back = target.inv_row(&row)?;
        counts[partition.index(&back)] += 1;
    }
    let expected = n as f64 / cells as f64;
    let stat: f64 = counts
        .iter()
        .map(|&c| (c as f64 - expected) * (c as f64 - expected) / expected)
        .sum();
    // A single cell has zero degrees of freedom and passes trivially.
    let threshold = if cells > 1 {
        chi_square_quantile(cells - 1, 0.99)?
    } else {
        0.0
    };
    Ok(TestReport::new(
        "chi2-cells",
        n,
        stat,
        threshold,
        format!(
            "target={} k={k} cells={cells} sampler={}",
            target.name(),
            sampler.name()
        ),
    ))
}

/// Spherical-cap fraction test on `S^2`: the share of mapped points within
/// angle `theta` of `center` must match the cap area fraction
/// `(1 - cos theta)/2` within three binomial standard deviations.
pub fn cap_test_s2(
    center: &[f64; 3],
    theta: f64,
    sampler: &Sampler,
    n: usize,
) -> Result<TestReport> {
    if !(theta > 0.0 && theta < PI) {
        bail!("cap angle must lie in (0, pi)");
    }
    let norm = (center.iter().map(|c| c * c).sum::<f64>()).sqrt();
    if (norm - 1.0).abs() > 1e-9 {
        bail!("cap center must be a unit vector");
    }
    let sphere = Target::parse("sphere:2")?;
    let mut hits = 0usize;
    for i in 0..n {
        let x = CubePoint::new(sampler.point(i))?;
        let row = sphere.map_row(&x)?;
        let dot: f64 = row.iter().zip(center).map(|(a, b)| a * b).sum();
        if dot.clamp(-1.0, 1.0).acos() <= theta {
            hits += 1;
        }
    }
    let expected = 0.5 * (1.0 - theta.cos());
    let fraction = hits as f64 / n as f64;
    let sigma = (expected * (1.0 - expected) / n as f64).sqrt();
    Ok(TestReport::new(
        "cap-s2",
        n,
        (fraction - expected).abs(),
        3.0 * sigma.max(1.0 / n as f64),
        format!("theta={theta:.4} fraction={fraction:.5} expected={expected:.5}"),
    ))
}

/// Finite-difference check of the transport Jacobian identity: the
/// determinant of the chart map times `ω(ρ(|y|))` must equal the Gaussian
/// density at `y`, to 1e-5 relative with the default step `h = 1e-5`.
pub fn jacobian_check(profile: &RadialProfile, y: &[f64], h: f64) -> Result<TestReport> {
    let d = profile.dim();
    if y.len() != d {
        bail!("probe point has dimension {}, profile needs {d}", y.len());
    }
    let r = y.iter().map(|c| c * c).sum::<f64>().sqrt();
    if h > 1e-3 {
        bail!("step too large (h = {h}); finite differences would cancel");
    }
    if r < 10.0 * h {
        bail!("probe point too close to the origin (|y| = {r}, h = {h})");
    }
    let mut jac = vec![vec![0.0f64; d]; d];
    for j in 0..d {
        let mut fwd = y.to_vec();
        let mut bwd = y.to_vec();
        fwd[j] += h;
        bwd[j] -= h;
        let vf = profile.varphi(&EuclideanPoint::new(fwd)?)?;
        let vb = profile.varphi(&EuclideanPoint::new(bwd)?)?;
        for (row, (f, b)) in jac.iter_mut().zip(vf.coords().iter().zip(vb.coords())) {
            row[j] = (f - b) / (2.0 * h);
        }
    }
    let det = determinant(&mut jac);
    let rho = profile.rho_of_r(r)?;
    let omega = profile.omega(rho);
    let gaussian = GaussianMeasure::default().density(&EuclideanPoint::new(y.to_vec())?);
    let stat = (det * omega / gaussian - 1.0).abs();
    Ok(TestReport::new(
        "jacobian",
        d,
        stat,
        1e-5,
        format!("|y|={r:.4} det={det:.6e} omega={omega:.6e}"),
    ))
}

/// LU determinant with partial pivoting; consumes the matrix.
#[allow(clippy::needless_range_loop)] // elimination borrows two rows at once
fn determinant(m: &mut [Vec<f64>]) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).unwrap())
            .unwrap();
        if m[pivot][col] == 0.0 {
            return 0.0;
        }
        if pivot != col {
            m.swap(pivot, col);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..n {
            let factor = m[row][col] / m[col][col];
            for k in col..n {
                m[row][k] -= factor * m[col][k];
            }
        }
    }
    det
}

/// Spherical-cap discrepancy estimate: the supremum over `m` random caps
/// of |empirical fraction - cap area fraction|. Reported, not thresholded.
pub fn discrepancy_cap_estimate(points: &[Vec<f64>], m: usize, seed: u64) -> Result<f64> {
    if points.is_empty() {
        bail!("discrepancy estimate needs points");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = points.len() as f64;
    let mut sup = 0.0f64;
    for _ in 0..m {
        // Uniform cap center via Box-Muller normals; uniform area fraction.
        let mut center = [0.0f64; 3];
        for pair in center.chunks_mut(2) {
            let u1: f64 = rng.sample(Open01);
            let u2: f64 = rng.sample(Open01);
            let radius = (-2.0 * u1.ln()).sqrt();
            let angle = 2.0 * PI * u2;
            pair[0] = radius * angle.cos();
            if pair.len() > 1 {
                pair[1] = radius * angle.sin();
            }
        }
        let norm = (center.iter().map(|c| c * c).sum::<f64>()).sqrt();
        if norm == 0.0 {
            continue;
        }
        for c in center.iter_mut() {
            *c /= norm;
        }
        let area: f64 = rng.sample(Open01);
        let height = 1.0 - 2.0 * area; // cos(theta)
        let hits = points
            .iter()
            .filter(|p| {
                let dot: f64 = p.iter().zip(center.iter()).map(|(a, b)| a * b).sum();
                dot >= height
            })
            .count();
        sup = sup.max((hits as f64 / n - area).abs());
    }
    Ok(sup)
}

/// Finite-difference spot check that the normal Jacobian of the Hopf
/// projection is constant: the relative variance of `NJac h` estimates
/// across random points must stay below 1e-6.
pub fn hopf_njac_check(n: usize, probes: usize, seed: u64) -> Result<TestReport> {
    let cp = CrossSpace::new(CrossKind::ComplexProj(n))?;
    let hopf = crossmap_core::bundles::HopfTarget::new(n)?;
    let dim = 2 * n + 2; // ambient real dimension of S^{2n+1}
    let horizontal = 2 * n;
    let eps: f64 = 1e-5;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut values = Vec::with_capacity(probes);
    for _ in 0..probes {
        let cube = CubePoint::new(
            (0..2 * n + 1)
                .map(|_| rng.sample::<f64, _>(Open01))
                .collect::<Vec<f64>>(),
        )?;
        let p = hopf.phi(&cube)?;
        let p = p.ambient().to_vec();
        // Vertical direction: i·p componentwise.
        let mut vertical = vec![0.0; dim];
        for j in 0..dim / 2 {
            vertical[2 * j] = -p[2 * j + 1];
            vertical[2 * j + 1] = p[2 * j];
        }
        // Horizontal orthonormal basis: complement of {p, ip}.
        let mut basis: Vec<Vec<f64>> = Vec::with_capacity(horizontal);
        let mut axis = 0;
        while basis.len() < horizontal && axis < dim {
            let mut v = vec![0.0; dim];
            v[axis] = 1.0;
            axis += 1;
            for reference in [&p, &vertical] {
                let dot: f64 = v.iter().zip(reference.iter()).map(|(a, b)| a * b).sum();
                let nrm: f64 = reference.iter().map(|c| c * c).sum();
                for (vi, ri) in v.iter_mut().zip(reference.iter()) {
                    *vi -= dot / nrm * ri;
                }
            }
            for prior in &basis {
                let dot: f64 = v.iter().zip(prior.iter()).map(|(a, b)| a * b).sum();
                for (vi, ri) in v.iter_mut().zip(prior.iter()) {
                    *vi -= dot * ri;
                }
            }
            let nrm = v.iter().map(|c| c * c).sum::<f64>().sqrt();
            if nrm > 1e-6 {
                for c in v.iter_mut() {
                    *c /= nrm;
                }
                basis.push(v);
            }
        }
        if basis.len() < horizontal {
            bail!("failed to build a horizontal basis");
        }
        let project = |direction: &[f64]| -> Result<f64> {
            // |Dh v| from the Fubini-Study distance along the great circle
            // exp_p(eps v) = cos(eps) p + sin(eps) v.
            let moved: Vec<f64> = p
                .iter()
                .zip(direction)
                .map(|(pi, vi)| eps.cos() * pi + eps.sin() * vi)
                .collect();
            let a = hopf_project(&ManifoldPoint::Sphere(p.clone()))?;
            let b = hopf_project(&ManifoldPoint::Sphere(moved))?;
            Ok(cp.distance(&a, &b)? / eps)
        };
        // Gram matrix of Dh on the horizontal space by polarization.
        let mut gram = vec![vec![0.0f64; horizontal]; horizontal];
        let mut norms = vec![0.0f64; horizontal];
        for (a, base_a) in basis.iter().enumerate() {
            norms[a] = project(base_a)?;
            gram[a][a] = norms[a] * norms[a];
        }
        for a in 0..horizontal {
            for b in a + 1..horizontal {
                let mixed: Vec<f64> = basis[a]
                    .iter()
                    .zip(&basis[b])
                    .map(|(x, y)| (x + y) / std::f64::consts::SQRT_2)
                    .collect();
                let q = project(&mixed)?;
                let inner = q * q - 0.5 * (gram[a][a] + gram[b][b]);
                gram[a][b] = inner;
                gram[b][a] = inner;
            }
        }
        values.push(determinant(&mut gram).abs().sqrt());
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let variance =
        values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64;
    let stat = variance / (mean * mean);
    Ok(TestReport::new(
        "hopf-njac",
        probes,
        stat,
        1e-6,
        format!("n={n} mean={mean:.8}"),
    ))
}
