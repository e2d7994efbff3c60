//! Brute-force reference implementations and random data generators shared
//! by the integration tests. Everything here is written from the
//! definitions, independently of the library code paths.

#![allow(dead_code)]

use fdepth::{FunctionalDataset, Grid};
use rand::{Rng, RngCore};

pub type Curves = Vec<Vec<f64>>;

pub fn curves_of(ds: &FunctionalDataset) -> Curves {
    ds.curves().map(<[f64]>::to_vec).collect()
}

pub fn dataset(curves: &[Vec<f64>]) -> FunctionalDataset {
    FunctionalDataset::from_rows(curves).unwrap()
}

fn frac(count: usize, n: usize) -> f64 {
    count as f64 / n as f64
}

/// `min(#{yᵢ ≤ y}, #{yᵢ ≥ y}) / n`.
pub fn hr_depth(y: &[f64], curves: &[Vec<f64>]) -> f64 {
    let below = curves
        .iter()
        .filter(|c| (0..y.len()).all(|k| c[k] <= y[k]))
        .count();
    let above = curves
        .iter()
        .filter(|c| (0..y.len()).all(|k| c[k] >= y[k]))
        .count();
    frac(below.min(above), curves.len())
}

/// Modified half-region depth with uniform weights, accumulated as integer
/// grid-point counts and divided once at the end.
pub fn mhr_depth_uniform(y: &[f64], curves: &[Vec<f64>]) -> f64 {
    let p = y.len();
    let mut up = 0usize;
    let mut down = 0usize;
    for c in curves {
        up += (0..p).filter(|&k| c[k] >= y[k]).count();
        down += (0..p).filter(|&k| c[k] <= y[k]).count();
    }
    up.min(down) as f64 / (curves.len() * p) as f64
}

/// Local half-region depth with the slabs written as shifted curves.
pub fn local_hr_depth(y: &[f64], curves: &[Vec<f64>], tau: &[f64]) -> f64 {
    let p = y.len();
    let lower = curves
        .iter()
        .filter(|c| (0..p).all(|k| y[k] - tau[k] <= c[k] && c[k] <= y[k]))
        .count();
    let upper = curves
        .iter()
        .filter(|c| (0..p).all(|k| y[k] <= c[k] && c[k] <= y[k] + tau[k]))
        .count();
    frac(lower.min(upper), curves.len())
}

/// Local modified half-region depth with uniform weights.
pub fn local_mhr_depth_uniform(y: &[f64], curves: &[Vec<f64>], tau: &[f64]) -> f64 {
    let p = y.len();
    let mut up = 0usize;
    let mut down = 0usize;
    for c in curves {
        let inside = (0..p).all(|k| y[k] - tau[k] <= c[k] && c[k] <= y[k] + tau[k]);
        if inside {
            up += (0..p).filter(|&k| c[k] >= y[k]).count();
            down += (0..p).filter(|&k| c[k] <= y[k]).count();
        }
    }
    up.min(down) as f64 / (curves.len() * p) as f64
}

/// Fraction of sample curves identical to `y`.
pub fn duplicate_fraction(y: &[f64], curves: &[Vec<f64>]) -> f64 {
    frac(curves.iter().filter(|c| c.as_slice() == y).count(), curves.len())
}

/// Local halfspace depth on the line from a sorted copy of the sample.
pub fn halfspace_1d(x: f64, sample: &[f64], tau: f64) -> f64 {
    let mut s = sample.to_vec();
    s.sort_by(f64::total_cmp);
    let le = |v: f64| s.partition_point(|&z| z <= v);
    let lt = |v: f64| s.partition_point(|&z| z < v);
    let lower = le(x) - lt(x - tau);
    let upper = le(x + tau) - lt(x);
    frac(lower.min(upper), s.len())
}

/// Box probability `P(x − τ ≤ Z ≤ x)` or `P(x ≤ Z ≤ x + τ)` by enumeration.
pub fn box_prob(x: &[f64], points: &[Vec<f64>], tau: &[f64], upper: bool) -> f64 {
    let p = x.len();
    let hits = points
        .iter()
        .filter(|z| {
            (0..p).all(|j| {
                if upper {
                    x[j] <= z[j] && z[j] <= x[j] + tau[j]
                } else {
                    x[j] - tau[j] <= z[j] && z[j] <= x[j]
                }
            })
        })
        .count();
    frac(hits, points.len())
}

/// Standard normal CDF by composite Simpson integration of the density
/// from 0, accurate to about 1e-13 for |x| ≤ 8.
pub fn normal_cdf(x: f64) -> f64 {
    let steps = 20_000;
    let h = x / steps as f64;
    let pdf = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut acc = pdf(0.0) + pdf(x);
    for i in 1..steps {
        let coef = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += coef * pdf(i as f64 * h);
    }
    0.5 + acc * h / 3.0
}

/// Ward.D by brute force: at every step scan all active pairs, merge the
/// smallest (ties to the smallest slot pair), update with Lance–Williams.
/// Returns merge heights in order.
pub fn ward_heights(n: usize, d: &[f64]) -> Vec<f64> {
    let mut dist: Vec<Vec<f64>> = (0..n).map(|i| d[i * n..(i + 1) * n].to_vec()).collect();
    let mut size = vec![1usize; n];
    let mut active = vec![true; n];
    let mut heights = Vec::new();
    for _ in 1..n {
        let mut best = (f64::INFINITY, 0, 0);
        for i in 0..n {
            for j in i + 1..n {
                if active[i] && active[j] && dist[i][j] < best.0 {
                    best = (dist[i][j], i, j);
                }
            }
        }
        let (h, a, b) = best;
        heights.push(h);
        for k in 0..n {
            if active[k] && k != a && k != b {
                let (na, nb, nk) = (size[a] as f64, size[b] as f64, size[k] as f64);
                let v = ((na + nk) * dist[a][k] + (nb + nk) * dist[b][k] - nk * h) / (na + nb + nk);
                dist[a][k] = v;
                dist[k][a] = v;
            }
        }
        size[a] += size[b];
        active[b] = false;
    }
    heights
}

/// Integer-valued entries in `[lo, hi]`, optionally split into quarters so
/// that sums and differences stay exact.
pub fn dyadic(rng: &mut impl RngCore, lo: i32, hi: i32) -> f64 {
    let q = rng.random_range(lo * 4..=hi * 4);
    q as f64 / 4.0
}

/// Random dataset with many ties and duplicate curves.
pub fn tied_curves(rng: &mut impl RngCore, n: usize, p: usize) -> Curves {
    let mut curves: Curves = Vec::with_capacity(n);
    for _ in 0..n {
        if !curves.is_empty() && rng.random_bool(0.15) {
            let src = rng.random_range(0..curves.len());
            curves.push(curves[src].clone());
        } else {
            curves.push((0..p).map(|_| dyadic(rng, -3, 3)).collect());
        }
    }
    curves
}

/// Random continuous dataset.
pub fn smooth_curves(rng: &mut impl RngCore, n: usize, p: usize) -> Curves {
    (0..n)
        .map(|_| {
            let level: f64 = rng.random_range(-2.0..2.0);
            let slope: f64 = rng.random_range(-1.0..1.0);
            (0..p)
                .map(|k| level + slope * k as f64 / p as f64 + rng.random_range(-0.5..0.5))
                .collect()
        })
        .collect()
}

pub fn uniform_dataset(curves: &[Vec<f64>]) -> FunctionalDataset {
    let p = curves[0].len();
    let grid = Grid::uniform((0..p).map(|k| k as f64).collect()).unwrap();
    FunctionalDataset::new(grid, curves.concat(), None).unwrap()
}
