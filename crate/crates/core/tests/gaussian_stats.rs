//! Statistical checks that the cube-to-Gaussian map pushes the uniform
//! measure to independent standard normals.

use crossmap_core::cube_gauss::phi_rd;
use crossmap_core::point::CubePoint;
use crossmap_core::specfun::erf;
use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::SQRT_2;

fn standard_normal_cdf(y: f64) -> f64 {
    0.5 * (1.0 + erf(y / SQRT_2))
}

/// One-sample Kolmogorov-Smirnov statistic against a continuous CDF.
fn ks_statistic(samples: &mut [f64], cdf: impl Fn(f64) -> f64) -> f64 {
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

#[test]
fn output_coordinates_are_standard_normal() {
    const N: usize = 100_000;
    const DIM: usize = 3;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
    let mut columns: Vec<Vec<f64>> = (0..DIM).map(|_| Vec::with_capacity(N)).collect();
    for _ in 0..N {
        let x = CubePoint::new((0..DIM).map(|_| rng.sample::<f64, _>(Open01)).collect()).unwrap();
        let y = phi_rd(&x).unwrap();
        for (column, &value) in columns.iter_mut().zip(y.coords()) {
            column.push(value);
        }
    }
    // KS against N(0,1) at significance 0.01 (c = 1.63).
    let threshold = 1.63 / (N as f64).sqrt();
    for (i, column) in columns.iter_mut().enumerate() {
        let stat = ks_statistic(column, standard_normal_cdf);
        assert!(stat < threshold, "coordinate {i}: KS {stat} >= {threshold}");
    }
}

#[test]
fn output_coordinates_are_uncorrelated() {
    const N: usize = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
    let mut sums = [0.0f64; 3];
    let mut cross = [[0.0f64; 3]; 3];
    for _ in 0..N {
        let x = CubePoint::new((0..3).map(|_| rng.sample::<f64, _>(Open01)).collect()).unwrap();
        let y = phi_rd(&x).unwrap();
        let c = y.coords();
        for i in 0..3 {
            sums[i] += c[i];
            for j in 0..3 {
                cross[i][j] += c[i] * c[j];
            }
        }
    }
    let n = N as f64;
    let bound = 3.0 / n.sqrt();
    for i in 0..3 {
        for j in 0..i {
            let cov = cross[i][j] / n - sums[i] / n * sums[j] / n;
            let var_i = cross[i][i] / n - (sums[i] / n) * (sums[i] / n);
            let var_j = cross[j][j] / n - (sums[j] / n) * (sums[j] / n);
            let corr = cov / (var_i * var_j).sqrt();
            assert!(corr.abs() < bound, "corr({i},{j}) = {corr}");
        }
    }
}

#[test]
fn warped_inputs_fail_the_normal_test() {
    // Negative control: squaring the cube coordinates must be detected.
    const N: usize = 100_000;
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0003);
    let mut column = Vec::with_capacity(N);
    for _ in 0..N {
        let raw: f64 = rng.sample(Open01);
        let x = CubePoint::new(vec![raw * raw]).unwrap();
        column.push(phi_rd(&x).unwrap().coords()[0]);
    }
    let stat = ks_statistic(&mut column, standard_normal_cdf);
    assert!(
        stat > 1.63 / (N as f64).sqrt() * 10.0,
        "warp not detected: {stat}"
    );
}
