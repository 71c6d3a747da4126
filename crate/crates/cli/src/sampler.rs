//! Deterministic, index-addressable samplers over the open unit cube.
//!
//! Every sampler produces point `i` independently of the others, so point
//! clouds can be generated in parallel chunks while remaining byte-stable
//! across thread counts. All outputs are strictly interior to `(0,1)^d`.

use anyhow::{bail, Context, Result};
use rand::distributions::Open01;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Sampler selection.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SamplerSpec {
    /// Pseudorandom, one ChaCha stream per point index.
    Random {
        /// Stream seed.
        seed: u64,
    },
    /// Midpoint lattice `(i + 0.5)/k` per axis, `k^d` points.
    Grid {
        /// Cells per axis.
        k: usize,
    },
    /// One uniform point per lattice cell, `k^d` points.
    Stratified {
        /// Cells per axis.
        k: usize,
        /// Jitter seed.
        seed: u64,
    },
    /// Halton sequence with the first `d` primes, index offset 1.
    Halton,
}

/// A sampler bound to a cube dimension.
#[derive(Debug, Clone)]
pub struct Sampler {
    spec: SamplerSpec,
    dim: usize,
    bases: Vec<u64>,
    warp: bool,
}

impl Sampler {
    /// Binds a spec to a dimension.
    pub fn new(spec: SamplerSpec, dim: usize) -> Result<Self> {
        if dim == 0 {
            bail!("sampler dimension must be >= 1");
        }
        match spec {
            SamplerSpec::Grid { k } | SamplerSpec::Stratified { k, .. } if k == 0 => {
                bail!("grid resolution must be >= 1");
            }
            _ => {}
        }
        let bases = if matches!(spec, SamplerSpec::Halton) {
            first_primes(dim)
        } else {
            Vec::new()
        };
        Ok(Self {
            spec,
            dim,
            bases,
            warp: false,
        })
    }

    /// Parses `random`, `grid:K`, `stratified:K`, or `halton`; `seed` feeds
    /// the stochastic variants.
    pub fn parse(text: &str, dim: usize, seed: u64) -> Result<Self> {
        let spec = match text.split_once(':') {
            None => match text {
                "random" => SamplerSpec::Random { seed },
                "halton" => SamplerSpec::Halton,
                other => bail!("unknown sampler `{other}`"),
            },
            Some((kind, param)) => {
                let k: usize = param
                    .parse()
                    .with_context(|| format!("bad sampler parameter `{param}`"))?;
                match kind {
                    "grid" => SamplerSpec::Grid { k },
                    "stratified" => SamplerSpec::Stratified { k, seed },
                    other => bail!("unknown sampler `{other}`"),
                }
            }
        };
        Sampler::new(spec, dim)
    }

    /// Canonical descriptor string.
    pub fn name(&self) -> String {
        match &self.spec {
            SamplerSpec::Random { seed } => format!("random(seed={seed})"),
            SamplerSpec::Grid { k } => format!("grid:{k}"),
            SamplerSpec::Stratified { k, seed } => format!("stratified:{k}(seed={seed})"),
            SamplerSpec::Halton => "halton".into(),
        }
    }

    /// Cube dimension.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Applies the `x -> x²` coordinate warp (negative control for the
    /// statistical tests; the output is no longer uniform).
    pub fn warped(mut self) -> Self {
        self.warp = true;
        self
    }

    /// Whether the negative-control warp is active.
    pub fn is_warped(&self) -> bool {
        self.warp
    }

    /// The count dictated by the spec (lattice samplers), if any.
    pub fn natural_count(&self) -> Option<usize> {
        match self.spec {
            SamplerSpec::Grid { k } | SamplerSpec::Stratified { k, .. } => {
                k.checked_pow(self.dim as u32)
            }
            _ => None,
        }
    }

    /// The `index`-th cube point.
    pub fn point(&self, index: usize) -> Vec<f64> {
        let mut coords = match &self.spec {
            SamplerSpec::Random { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(index as u64 + 1);
                (0..self.dim)
                    .map(|_| rng.sample::<f64, _>(Open01))
                    .collect::<Vec<f64>>()
            }
            SamplerSpec::Grid { k } => {
                let mut rest = index;
                (0..self.dim)
                    .map(|_| {
                        let digit = rest % k;
                        rest /= k;
                        (digit as f64 + 0.5) / *k as f64
                    })
                    .collect()
            }
            SamplerSpec::Stratified { k, seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(*seed);
                rng.set_stream(index as u64 + 1);
                let mut rest = index;
                (0..self.dim)
                    .map(|_| {
                        let digit = rest % k;
                        rest /= k;
                        (digit as f64 + rng.sample::<f64, _>(Open01)) / *k as f64
                    })
                    .collect()
            }
            SamplerSpec::Halton => self
                .bases
                .iter()
                .map(|&base| radical_inverse(base, index as u64 + 1))
                .collect(),
        };
        if self.warp {
            for c in coords.iter_mut() {
                *c *= *c;
            }
        }
        for c in coords.iter_mut() {
            *c = c.clamp(f64::EPSILON / 2.0, 1.0 - f64::EPSILON / 2.0);
        }
        coords
    }
}

/// Van der Corput radical inverse of `n >= 1` in the given base.
fn radical_inverse(base: u64, mut n: u64) -> f64 {
    let inv_base = 1.0 / base as f64;
    let mut inv = inv_base;
    let mut result = 0.0;
    while n > 0 {
        result += (n % base) as f64 * inv;
        n /= base;
        inv *= inv_base;
    }
    result
}

/// The first `count` primes (Halton bases).
fn first_primes(count: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(count);
    let mut candidate = 2u64;
    while primes.len() < count {
        if primes.iter().all(|&p| !candidate.is_multiple_of(p)) {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

/// Resolves the worker count: the explicit request, capped by the
/// `CROSSMAP_THREADS` environment variable, defaulting to the machine
/// parallelism.
pub fn effective_threads(requested: Option<usize>) -> usize {
    let available = std::thread::available_parallelism()
        .map(std::num::NonZeroUsize::get)
        .unwrap_or(1);
    let mut threads = requested.unwrap_or(available).max(1);
    if let Ok(value) = std::env::var("CROSSMAP_THREADS") {
        if let Ok(cap) = value.trim().parse::<usize>() {
            threads = threads.min(cap.max(1));
        }
    }
    threads
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_radical_inverse() {
        assert_eq!(first_primes(6), vec![2, 3, 5, 7, 11, 13]);
        assert_eq!(radical_inverse(2, 1), 0.5);
        assert_eq!(radical_inverse(2, 2), 0.25);
        assert_eq!(radical_inverse(2, 3), 0.75);
        assert_eq!(radical_inverse(3, 1), 1.0 / 3.0);
    }

    #[test]
    fn grid_is_midpoint_lattice() {
        let sampler = Sampler::new(SamplerSpec::Grid { k: 2 }, 2).unwrap();
        assert_eq!(sampler.natural_count(), Some(4));
        assert_eq!(sampler.point(0), vec![0.25, 0.25]);
        assert_eq!(sampler.point(3), vec![0.75, 0.75]);
    }

    #[test]
    fn points_are_interior_and_deterministic() {
        for text in ["random", "grid:5", "stratified:3", "halton"] {
            let sampler = Sampler::parse(text, 3, 42).unwrap();
            for i in 0..200 {
                let p = sampler.point(i);
                assert_eq!(p, sampler.point(i), "{text} not deterministic");
                assert!(p.iter().all(|&c| c > 0.0 && c < 1.0), "{text} not interior");
            }
        }
    }

    #[test]
    fn random_streams_differ_per_index() {
        let sampler = Sampler::parse("random", 2, 7).unwrap();
        assert_ne!(sampler.point(0), sampler.point(1));
        let other = Sampler::parse("random", 2, 8).unwrap();
        assert_ne!(sampler.point(0), other.point(0));
    }

    #[test]
    fn stratified_stays_in_cell() {
        let sampler = Sampler::parse("stratified:4", 2, 3).unwrap();
        for i in 0..16 {
            let p = sampler.point(i);
            assert_eq!(((p[0] * 4.0) as usize), i % 4);
            assert_eq!(((p[1] * 4.0) as usize), i / 4);
        }
    }

    #[test]
    fn warp_biases_towards_zero() {
        let plain = Sampler::parse("random", 1, 1).unwrap();
        let warped = plain.clone().warped();
        let mean_plain: f64 = (0..1000).map(|i| plain.point(i)[0]).sum::<f64>() / 1000.0;
        let mean_warped: f64 = (0..1000).map(|i| warped.point(i)[0]).sum::<f64>() / 1000.0;
        assert!(mean_warped < mean_plain - 0.1);
    }

    #[test]
    fn rejects_bad_specs() {
        assert!(Sampler::parse("grid:0", 2, 0).is_err());
        assert!(Sampler::parse("nope", 2, 0).is_err());
        assert!(Sampler::parse("grid:x", 2, 0).is_err());
    }
}
