//! Seeded generators for synthetic functional datasets.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::dataset::{FunctionalDataset, Grid};
use crate::error::Result;

fn noise(sigma: f64) -> Normal<f64> {
    Normal::new(0.0, sigma).expect("noise scale must be finite and nonnegative")
}

/// Two groups of noisy sinusoids on `[0, 1]` separated by a vertical offset.
///
/// Curve `i` of group `g` is `sin(2πt + φᵢ) + g·offset + εᵢ(t)` with a small
/// random phase `φᵢ` and iid Gaussian noise. Returns the dataset and the
/// true group (0 or 1) of each curve, groups stored one after the other.
pub fn two_regimes(
    per_group: usize,
    p: usize,
    offset: f64,
    sigma: f64,
    seed: u64,
) -> Result<(FunctionalDataset, Vec<usize>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eps = noise(sigma);
    let denom = (p.max(2) - 1) as f64;
    let mut data = Vec::with_capacity(2 * per_group * p);
    let mut groups = Vec::with_capacity(2 * per_group);
    for g in 0..2 {
        for _ in 0..per_group {
            let phase: f64 = rng.random_range(-0.2..0.2);
            for k in 0..p {
                let t = k as f64 / denom;
                data.push((2.0 * PI * t + phase).sin() + g as f64 * offset + eps.sample(&mut rng));
            }
            groups.push(g);
        }
    }
    let points = (0..p).map(|k| k as f64 / denom).collect();
    Ok((FunctionalDataset::new(Grid::uniform(points)?, data, None)?, groups))
}

/// Daily profiles shaped like hourly-averaged wind speed: `n` curves of `p`
/// points with a diurnal cycle, a random daily level, and a few regimes.
pub fn daily_profiles(n: usize, p: usize, seed: u64) -> Result<FunctionalDataset> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let eps = noise(0.6);
    let level = noise(1.5);
    let mut data = Vec::with_capacity(n * p);
    for _ in 0..n {
        let regime = rng.random_range(0..3) as f64;
        let base = 4.0 + 2.5 * regime + level.sample(&mut rng);
        let amp = 1.0 + 0.5 * regime;
        for k in 0..p {
            let t = k as f64 / p as f64;
            let v = base + amp * (2.0 * PI * (t - 0.25)).sin() + eps.sample(&mut rng);
            data.push(v.max(0.0));
        }
    }
    FunctionalDataset::new(Grid::index(p)?, data, None)
}
