//! Sampling experiments against closed-form population depths.
//!
//! For a process whose grid values are independent with known marginal
//! CDFs `F_k`, the probability that a path stays in the lower slab of `y`
//! factorizes as `Π_k [F_k(y_k) − F_k(y_k − τ_k)]`, and similarly for the
//! upper slab. That gives an exact target for the sample local depth.
//!
//! Every replicate draws from its own ChaCha stream derived from
//! `(seed, size index, replicate index)`, so reports do not depend on
//! scheduling or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Uniform};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use libm::erfc;

use crate::dataset::{FunctionalDataset, Grid, TauFunction};
use crate::depth::DepthMethod;
use crate::error::{Error, Result};
use crate::local_depth::local_depth_hr;

/// Marginal law shared by every grid point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Marginal {
    Uniform { a: f64, b: f64 },
    Gaussian { mean: f64, sd: f64 },
}

impl Marginal {
    pub fn cdf(&self, x: f64) -> f64 {
        match *self {
            Marginal::Uniform { a, b } => ((x - a) / (b - a)).clamp(0.0, 1.0),
            Marginal::Gaussian { mean, sd } => {
                if x == f64::INFINITY {
                    1.0
                } else if x == f64::NEG_INFINITY {
                    0.0
                } else {
                    0.5 * erfc(-(x - mean) / (sd * std::f64::consts::SQRT_2))
                }
            }
        }
    }

    fn check(&self) -> Result<()> {
        let ok = match *self {
            Marginal::Uniform { a, b } => a.is_finite() && b.is_finite() && a < b,
            Marginal::Gaussian { mean, sd } => mean.is_finite() && sd.is_finite() && sd > 0.0,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("invalid marginal {self:?}")))
        }
    }
}

/// A process with independent, identically distributed grid values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IidProcessSpec {
    pub marginal: Marginal,
    pub p: usize,
    pub seed: u64,
}

impl IidProcessSpec {
    pub fn new(marginal: Marginal, p: usize, seed: u64) -> Result<Self> {
        marginal.check()?;
        if p == 0 {
            return Err(Error::InvalidArgument("grid size must be positive".into()));
        }
        Ok(Self { marginal, p, seed })
    }

    pub fn gaussian(p: usize, seed: u64) -> Result<Self> {
        Self::new(Marginal::Gaussian { mean: 0.0, sd: 1.0 }, p, seed)
    }

    /// Draws `n` curves on the index grid.
    pub fn sample(&self, n: usize, rng: &mut ChaCha8Rng) -> Result<FunctionalDataset> {
        let len = n * self.p;
        let data: Vec<f64> = match self.marginal {
            Marginal::Uniform { a, b } => {
                let dist = Uniform::new(a, b)
                    .map_err(|e| Error::InvalidArgument(e.to_string()))?;
                dist.sample_iter(rng).take(len).collect()
            }
            Marginal::Gaussian { mean, sd } => {
                let dist =
                    Normal::new(mean, sd).map_err(|e| Error::InvalidArgument(e.to_string()))?;
                dist.sample_iter(rng).take(len).collect()
            }
        };
        FunctionalDataset::new(Grid::index(self.p)?, data, None)
    }

    /// Generator for replicate `replicate` of ladder step `step`.
    pub fn rng(&self, step: usize, replicate: usize) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(((step as u64) << 32) | replicate as u64);
        rng
    }
}

/// Population local half-region depth of `y` under an iid process.
///
/// Only [`DepthMethod::Hr`] has a closed form here.
pub fn population_local_depth_iid(
    spec: &IidProcessSpec,
    y: &[f64],
    tau: &TauFunction,
    method: DepthMethod,
) -> Result<f64> {
    if method != DepthMethod::Hr {
        return Err(Error::InvalidArgument(
            "population oracle is only available for HR".into(),
        ));
    }
    if y.len() != spec.p {
        return Err(Error::LengthMismatch {
            expected: spec.p,
            found: y.len(),
        });
    }
    tau.check(spec.p)?;
    let f = |x: f64| spec.marginal.cdf(x);
    let (lower, upper) = y
        .iter()
        .zip(tau.values())
        .fold((1.0, 1.0), |(lo, up), (&yk, &tk)| {
            (lo * (f(yk) - f(yk - tk)), up * (f(yk + tk) - f(yk)))
        });
    Ok(lower.min(upper))
}

/// Mean absolute error of the sample local depth across a ladder of sizes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub sizes: Vec<usize>,
    pub errors: Vec<f64>,
    /// Mean sample depth per size.
    pub estimates: Vec<f64>,
    pub population: f64,
    pub replicates: usize,
    pub seed: u64,
}

impl ConsistencyReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// True when no error exceeds the one before it.
    pub fn is_non_increasing(&self) -> bool {
        self.errors.windows(2).all(|w| w[1] <= w[0])
    }
}

fn check_ladder(sizes: &[usize], replicates: usize) -> Result<()> {
    if replicates == 0 {
        return Err(Error::InvalidArgument("need at least one replicate".into()));
    }
    if sizes.is_empty() || sizes[0] == 0 || sizes.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "sizes must be positive and strictly increasing".into(),
        ));
    }
    Ok(())
}

/// For each sample size, draws `replicates` samples and compares the
/// sample local HR depth of `y` with the population value.
pub fn consistency_experiment(
    spec: &IidProcessSpec,
    y: &[f64],
    tau: &TauFunction,
    sizes: &[usize],
    replicates: usize,
) -> Result<ConsistencyReport> {
    check_ladder(sizes, replicates)?;
    let population = population_local_depth_iid(spec, y, tau, DepthMethod::Hr)?;
    let mut errors = Vec::with_capacity(sizes.len());
    let mut estimates = Vec::with_capacity(sizes.len());
    for (step, &n) in sizes.iter().enumerate() {
        let depths = (0..replicates)
            .into_par_iter()
            .map(|r| {
                let ds = spec.sample(n, &mut spec.rng(step, r))?;
                local_depth_hr(y, &ds, tau)
            })
            .collect::<Result<Vec<f64>>>()?;
        let reps = replicates as f64;
        errors.push(depths.iter().map(|d| (d - population).abs()).sum::<f64>() / reps);
        estimates.push(depths.iter().sum::<f64>() / reps);
    }
    Ok(ConsistencyReport {
        sizes: sizes.to_vec(),
        errors,
        estimates,
        population,
        replicates,
        seed: spec.seed,
    })
}

/// Tracks the sample maximizer of local depth over a fixed candidate family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximizerReport {
    pub sizes: Vec<usize>,
    /// Index of the candidate with the largest population depth.
    pub population_argmax: usize,
    /// Fraction of replicates whose sample maximizer is the population one.
    pub hit_rates: Vec<f64>,
    /// Mean over replicates of `max_c |ld_n(c) − ld(c)|`.
    pub uniform_errors: Vec<f64>,
    pub replicates: usize,
    pub seed: u64,
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Sample maximizer and sup-error over `candidates` across a ladder of sizes.
///
/// Ties in either maximization go to the lowest candidate index.
pub fn maximizer_experiment(
    spec: &IidProcessSpec,
    candidates: &[Vec<f64>],
    tau: &TauFunction,
    sizes: &[usize],
    replicates: usize,
) -> Result<MaximizerReport> {
    check_ladder(sizes, replicates)?;
    if candidates.is_empty() {
        return Err(Error::InvalidArgument("no candidate curves".into()));
    }
    let population = candidates
        .iter()
        .map(|c| population_local_depth_iid(spec, c, tau, DepthMethod::Hr))
        .collect::<Result<Vec<f64>>>()?;
    let population_argmax = argmax(&population);
    let mut hit_rates = Vec::with_capacity(sizes.len());
    let mut uniform_errors = Vec::with_capacity(sizes.len());
    for (step, &n) in sizes.iter().enumerate() {
        let outcomes = (0..replicates)
            .into_par_iter()
            .map(|r| {
                let ds = spec.sample(n, &mut spec.rng(step, r))?;
                let depths = candidates
                    .iter()
                    .map(|c| local_depth_hr(c, &ds, tau))
                    .collect::<Result<Vec<f64>>>()?;
                let sup = depths
                    .iter()
                    .zip(&population)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max);
                Ok((argmax(&depths) == population_argmax, sup))
            })
            .collect::<Result<Vec<(bool, f64)>>>()?;
        let reps = replicates as f64;
        hit_rates.push(outcomes.iter().filter(|o| o.0).count() as f64 / reps);
        uniform_errors.push(outcomes.iter().map(|o| o.1).sum::<f64>() / reps);
    }
    Ok(MaximizerReport {
        sizes: sizes.to_vec(),
        population_argmax,
        hit_rates,
        uniform_errors,
        replicates,
        seed: spec.seed,
    })
}
