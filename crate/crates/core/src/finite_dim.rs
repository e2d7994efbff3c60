//! Local half-region depth for points in `R^p`.
//!
//! Each coordinate gets its own slab width. The production path counts
//! points inside the box directly; [`slab_region_prob_ie`] rewrites the box
//! probability as an alternating sum of empirical distribution function
//! values and is kept as an independent check.

use rayon::prelude::*;

use crate::dataset::check_len;
use crate::error::{Error, Result};

/// Largest dimension accepted by the inclusion–exclusion path (`2^p` terms).
pub const MAX_IE_DIM: usize = 20;

/// Empirical distribution of `m` points in `R^p`, each with mass `1/m`.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSample {
    data: Vec<f64>,
    m: usize,
    p: usize,
}

impl PointSample {
    /// Row-major `m × p` values.
    pub fn new(data: Vec<f64>, p: usize) -> Result<Self> {
        if p == 0 || data.is_empty() || !data.len().is_multiple_of(p) {
            return Err(Error::InvalidArgument(format!(
                "{} values do not form rows of length {p}",
                data.len()
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("non-finite sample value".into()));
        }
        let m = data.len() / p;
        Ok(Self { data, m, p })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let p = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != p) {
            return Err(Error::LengthMismatch {
                expected: p,
                found: bad.len(),
            });
        }
        Self::new(rows.concat(), p)
    }

    /// One-dimensional sample.
    pub fn univariate(values: Vec<f64>) -> Result<Self> {
        Self::new(values, 1)
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn dim(&self) -> usize {
        self.p
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.p)
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.p..(i + 1) * self.p]
    }

    fn reflected(&self) -> Self {
        Self {
            data: self.data.iter().map(|v| -v).collect(),
            m: self.m,
            p: self.p,
        }
    }
}

/// Which closed slab around `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `x − τ ≤ z ≤ x`
    Lower,
    /// `x ≤ z ≤ x + τ`
    Upper,
}

fn check_args(x: &[f64], sample: &PointSample, tau: &[f64]) -> Result<()> {
    check_len(sample.dim(), x.len())?;
    check_len(sample.dim(), tau.len())?;
    for (index, &value) in tau.iter().enumerate() {
        if !(value >= 0.0) {
            return Err(Error::NegativeTau { index, value });
        }
    }
    Ok(())
}

fn box_count(x: &[f64], sample: &PointSample, tau: &[f64], side: Side) -> usize {
    sample
        .rows()
        .filter(|z| {
            z.iter().zip(x).zip(tau).all(|((&zj, &xj), &tj)| match side {
                Side::Lower => xj - tj <= zj && zj <= xj,
                Side::Upper => xj <= zj && zj <= xj + tj,
            })
        })
        .count()
}

/// Empirical probability of the slab box on `side`, by direct counting.
pub fn slab_region_prob_direct(
    x: &[f64],
    sample: &PointSample,
    tau: &[f64],
    side: Side,
) -> Result<f64> {
    check_args(x, sample, tau)?;
    Ok(box_count(x, sample, tau, side) as f64 / sample.len() as f64)
}

/// Count of points with `z_j < v_j` for `j` in `strict` and `z_j ≤ v_j`
/// elsewhere: the empirical distribution function at `v` with left limits
/// taken in the coordinates flagged by the bitmask.
fn ecdf_count(sample: &PointSample, v: &[f64], strict: u32) -> usize {
    sample
        .rows()
        .filter(|z| {
            z.iter().zip(v).enumerate().all(|(j, (zj, vj))| {
                if strict & (1 << j) != 0 {
                    zj < vj
                } else {
                    zj <= vj
                }
            })
        })
        .count()
}

fn lower_ie(x: &[f64], sample: &PointSample, tau: &[f64]) -> f64 {
    let p = x.len();
    let mut shifted = vec![0.0; p];
    let mut total: i64 = 0;
    for subset in 0u32..(1 << p) {
        for j in 0..p {
            shifted[j] = if subset & (1 << j) != 0 {
                x[j] - tau[j]
            } else {
                x[j]
            };
        }
        let term = ecdf_count(sample, &shifted, subset) as i64;
        if subset.count_ones() % 2 == 0 {
            total += term;
        } else {
            total -= term;
        }
    }
    total as f64 / sample.len() as f64
}

/// Slab box probability through inclusion–exclusion over all `2^p` subsets
/// of coordinates.
///
/// The upper box `[x, x + τ]` is handled by reflecting the sample and `x`
/// through the origin, which maps it onto a lower box.
pub fn slab_region_prob_ie(
    x: &[f64],
    sample: &PointSample,
    tau: &[f64],
    side: Side,
) -> Result<f64> {
    check_args(x, sample, tau)?;
    if x.len() > MAX_IE_DIM {
        return Err(Error::InvalidArgument(format!(
            "inclusion-exclusion needs 2^{} terms; dimension limit is {MAX_IE_DIM}",
            x.len()
        )));
    }
    Ok(match side {
        Side::Lower => lower_ie(x, sample, tau),
        Side::Upper => {
            let neg_x: Vec<f64> = x.iter().map(|v| -v).collect();
            lower_ie(&neg_x, &sample.reflected(), tau)
        }
    })
}

/// `min` of the lower and upper slab box probabilities.
pub fn local_depth_hr_finite(x: &[f64], sample: &PointSample, tau: &[f64]) -> Result<f64> {
    check_args(x, sample, tau)?;
    let lower = box_count(x, sample, tau, Side::Lower);
    let upper = box_count(x, sample, tau, Side::Upper);
    Ok(lower.min(upper) as f64 / sample.len() as f64)
}

/// Local depth of each row of `queries`.
pub fn local_depth_hr_finite_all(
    queries: &PointSample,
    sample: &PointSample,
    tau: &[f64],
) -> Result<Vec<f64>> {
    check_args(queries.row(0), sample, tau)?;
    Ok((0..queries.len())
        .into_par_iter()
        .map(|i| {
            let x = queries.row(i);
            let lower = box_count(x, sample, tau, Side::Lower);
            let upper = box_count(x, sample, tau, Side::Upper);
            lower.min(upper) as f64 / sample.len() as f64
        })
        .collect())
}

/// Local halfspace depth on the line,
/// `min(F(x) − F((x − τ)⁻), F(x + τ) − F(x⁻))` with `F` the empirical CDF.
pub fn local_halfspace_depth_1d(x: f64, sample: &PointSample, tau: f64) -> Result<f64> {
    check_args(&[x], sample, &[tau])?;
    let m = sample.len();
    let values: Vec<f64> = sample.rows().map(|r| r[0]).collect();
    let cdf = |v: f64| values.iter().filter(|&&z| z <= v).count();
    let cdf_left = |v: f64| values.iter().filter(|&&z| z < v).count();
    let lower = cdf(x) - cdf_left(x - tau);
    let upper = cdf(x + tau) - cdf_left(x);
    Ok(lower.min(upper) as f64 / m as f64)
}
