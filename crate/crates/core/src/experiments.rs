//! Synthetic point clouds and the non-liftable line sweep.

use std::f64::consts::PI;
use std::io::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finite_field::{is_prime, range_bound, OddPrime};
use crate::lifting::scaling_search;

pub const GENERATOR: &str = "ChaCha8Rng";

/// Provenance embedded in every experiment output.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub seed: u64,
    pub generator: String,
    pub version: String,
}

impl Metadata {
    pub fn new(seed: u64) -> Self {
        Metadata { seed, generator: GENERATOR.to_string(), version: env!("CARGO_PKG_VERSION").to_string() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SparsityRow {
    pub p: u64,
    pub samples: u64,
    pub non_liftable: u64,
    pub proportion: f64,
}

/// The RNG stream for one prime of a sweep.
fn prime_rng(seed: u64, p: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(p);
    rng
}

/// A line `{r·v}` in `F_p^n` is liftable when some `r ≠ 0` puts every
/// coordinate within `⌊(p−1)/k⌋` of zero.
pub fn line_is_liftable(v: &[u64], p: OddPrime, k: u64) -> bool {
    let bounds = vec![range_bound(p, k); v.len()];
    scaling_search(v, &bounds, p).is_some()
}

fn sweep_prime(n: usize, p: OddPrime, samples: u64, k: u64, seed: u64) -> SparsityRow {
    let mut rng = prime_rng(seed, p.get());
    let mut v = vec![0u64; n];
    let mut non_liftable = 0;
    for _ in 0..samples {
        loop {
            v.iter_mut().for_each(|x| *x = rng.random_range(0..p.get()));
            if v.iter().any(|&x| x != 0) {
                break;
            }
        }
        if !line_is_liftable(&v, p, k) {
            non_liftable += 1;
        }
    }
    let proportion = if samples == 0 { 0.0 } else { non_liftable as f64 / samples as f64 };
    SparsityRow { p: p.get(), samples, non_liftable, proportion }
}

/// Odd primes in `[lo, hi]`.
pub fn odd_primes_between(lo: u64, hi: u64) -> Vec<OddPrime> {
    (lo.max(3)..=hi).filter(|&p| is_prime(p)).map(|p| OddPrime::new(p).expect("checked prime")).collect()
}

/// Fraction of uniformly sampled nonzero lines in `F_p^n` that cannot be
/// scaled into range, for every odd prime in `[prime_min, prime_max]`.
/// Primes run in parallel; each has its own stream derived from `(seed, p)`.
pub fn sparsity_sweep(n: usize, prime_min: u64, prime_max: u64, samples_per_prime: u64, k: u64, seed: u64) -> Result<Vec<SparsityRow>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if k < 2 {
        return Err(Error::InvalidArgument("k must be at least 2".into()));
    }
    if prime_min > prime_max {
        return Err(Error::InvalidArgument(format!("empty prime range [{prime_min}, {prime_max}]")));
    }
    let primes = odd_primes_between(prime_min, prime_max);
    Ok(primes.into_par_iter().map(|p| sweep_prime(n, p, samples_per_prime, k, seed)).collect())
}

/// Least-squares slope of proportion against `p`.
pub fn trend_slope(rows: &[SparsityRow]) -> f64 {
    let n = rows.len() as f64;
    if rows.len() < 2 {
        return 0.0;
    }
    let mx = rows.iter().map(|r| r.p as f64).sum::<f64>() / n;
    let my = rows.iter().map(|r| r.proportion).sum::<f64>() / n;
    let sxy: f64 = rows.iter().map(|r| (r.p as f64 - mx) * (r.proportion - my)).sum();
    let sxx: f64 = rows.iter().map(|r| (r.p as f64 - mx).powi(2)).sum();
    sxy / sxx
}

pub fn write_sparsity_csv<W: Write>(rows: &[SparsityRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r).map_err(|e| Error::Format(e.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Points on the unit circle at angles `2π·i/count`, carried into
/// `ambient_dim` dimensions by a random isometric embedding of the plane,
/// plus isotropic Gaussian noise. Also returns the angles as turns.
pub fn sample_circle(count: usize, noise_sd: f64, ambient_dim: usize, seed: u64) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    if ambient_dim < 2 {
        return Err(Error::InvalidArgument("ambient dimension must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let frame = if ambient_dim == 2 { identity_frame() } else { random_frame(&mut rng, ambient_dim) };
    let noise = normal(noise_sd)?;
    let turns: Vec<f64> = (0..count).map(|i| i as f64 / count as f64).collect();
    let points = turns
        .iter()
        .map(|&t| {
            let (s, c) = (2.0 * PI * t).sin_cos();
            (0..ambient_dim).map(|d| c * frame[0][d] + s * frame[1][d] + noise.sample(&mut rng)).collect()
        })
        .collect();
    Ok((points, turns))
}

fn identity_frame() -> [Vec<f64>; 2] {
    [vec![1.0, 0.0], vec![0.0, 1.0]]
}

/// Two orthonormal vectors from Gram-Schmidt on Gaussian draws.
fn random_frame(rng: &mut ChaCha8Rng, dim: usize) -> [Vec<f64>; 2] {
    let g = Normal::new(0.0, 1.0).expect("unit normal");
    let unit = |v: Vec<f64>| {
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        v.into_iter().map(|x| x / n).collect::<Vec<f64>>()
    };
    let a = unit((0..dim).map(|_| g.sample(rng)).collect());
    let b: Vec<f64> = (0..dim).map(|_| g.sample(rng)).collect();
    let proj: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
    let b = unit(b.iter().zip(&a).map(|(y, x)| y - proj * x).collect());
    [a, b]
}

fn normal(sd: f64) -> Result<Normal<f64>> {
    Normal::new(0.0, sd).map_err(|e| Error::InvalidArgument(format!("noise: {e}")))
}

pub fn trefoil(t: f64) -> [f64; 3] {
    [t.sin() + 2.0 * (2.0 * t).sin(), t.cos() - 2.0 * (2.0 * t).cos(), -(3.0 * t).sin()]
}

/// The trefoil knot at `count` equally spaced parameters, plus noise.
pub fn sample_trefoil(count: usize, noise_sd: f64, seed: u64) -> Result<Vec<Vec<f64>>> {
    if count < 3 {
        return Err(Error::InvalidArgument("trefoil needs at least 3 points".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = normal(noise_sd)?;
    Ok((0..count)
        .map(|i| trefoil(2.0 * PI * i as f64 / count as f64).iter().map(|x| x + noise.sample(&mut rng)).collect())
        .collect())
}
