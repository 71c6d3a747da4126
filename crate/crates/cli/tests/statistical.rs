//! Statistical invariants beyond the acceptance gate: the radial transport
//! law checked directly on Gaussian inputs, equal-measure cells across the
//! whole catalogue, and sphere symmetry.

use crossmap::sampler::Sampler;
use crossmap::target::Target;
use crossmap::validate::{chi2_cell_test, ks_statistic, KS_C_001};
use crossmap_core::point::EuclideanPoint;
use crossmap_core::radial::{ProfileKind, RadialProfile};
use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use std::f64::consts::PI;

fn gaussian_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim)
        .map(|_| {
            let u1: f64 = rng.sample(Open01);
            let u2: f64 = rng.sample(Open01);
            (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
        })
        .collect()
}

#[test]
fn radial_transport_pushforward_law() {
    // For standard-normal inputs the norm of the transported vector must
    // follow the profile's radial CDF; N = 2e5, significance 0.01.
    let kinds = [
        ProfileKind::Ball(1),
        ProfileKind::Ball(2),
        ProfileKind::Ball(3),
        ProfileKind::Ball(4),
        ProfileKind::Sphere(1),
        ProfileKind::Sphere(2),
        ProfileKind::Sphere(3),
        ProfileKind::Sphere(4),
        ProfileKind::RealProj(1),
        ProfileKind::RealProj(2),
        ProfileKind::RealProj(3),
        ProfileKind::ComplexProj(1),
        ProfileKind::ComplexProj(2),
        ProfileKind::ComplexProj(3),
        ProfileKind::QuatProj(1),
        ProfileKind::QuatProj(2),
        ProfileKind::Octonion,
        ProfileKind::Gaussian {
            dim: 2,
            variance: 0.5,
        },
        ProfileKind::Stereographic2d,
    ];
    const N: usize = 200_000;
    let threshold = KS_C_001 / (N as f64).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(0xAB5);
    for kind in kinds {
        let profile = RadialProfile::new(kind).unwrap();
        let dim = profile.dim();
        let mut norms = Vec::with_capacity(N);
        for _ in 0..N {
            let y = EuclideanPoint::new(gaussian_vector(&mut rng, dim)).unwrap();
            norms.push(profile.varphi(&y).unwrap().norm());
        }
        let stat = ks_statistic(&mut norms, |t| profile.radial_cdf(t));
        assert!(
            stat < threshold,
            "{:?}: KS {stat} >= {threshold}",
            profile.kind()
        );
    }
}

#[test]
fn equal_measure_cells_across_catalogue() {
    // chi-square preimage-cell counts for every map, three disjoint seeds;
    // the per-axis resolution keeps the expected count at >= 20.
    let specs = [
        "ball:2",
        "ball:3",
        "sphere:1",
        "sphere:2",
        "sphere:3",
        "rp:2",
        "cp:1",
        "cp:2",
        "hp:1",
        "op2",
        "hopf:1",
        "product:sphere:2+ball:2",
    ];
    const N: usize = 100_000;
    for spec in specs {
        let target = Target::parse(spec).unwrap();
        let dim = target.cube_dim();
        let k = (((N / 20) as f64).powf(1.0 / dim as f64).floor() as usize).max(1);
        for seed in [11u64, 22, 33] {
            let sampler = Sampler::parse("random", dim, seed).unwrap();
            let outcome = chi2_cell_test(&target, k, N, &sampler).unwrap();
            assert!(outcome.passed, "{spec} seed {seed}: {outcome}");
        }
    }
}

#[test]
fn sphere_images_have_no_preferred_direction() {
    // Empirical mean of mapped points stays within 4/sqrt(N) of zero.
    const N: usize = 100_000;
    for spec in ["sphere:2", "sphere:3"] {
        let target = Target::parse(spec).unwrap();
        let sampler = Sampler::parse("random", target.cube_dim(), 0xD1CE).unwrap();
        let mut mean = vec![0.0f64; target.ambient_dim()];
        for i in 0..N {
            let x = crossmap_core::point::CubePoint::new(sampler.point(i)).unwrap();
            for (m, v) in mean.iter_mut().zip(target.map_row(&x).unwrap()) {
                *m += v;
            }
        }
        let norm = mean
            .iter()
            .map(|m| (m / N as f64).powi(2))
            .sum::<f64>()
            .sqrt();
        assert!(norm < 4.0 / (N as f64).sqrt(), "{spec}: mean norm {norm}");
    }
}
