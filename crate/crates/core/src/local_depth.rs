//! Local half-region and local modified half-region depths.
//!
//! The threshold `τ` restricts the hypograph and epigraph of a curve `y`
//! to the closed slabs `[y − τ, y]` and `[y, y + τ]`. Large `τ` recovers
//! the global depths of [`crate::depth`]; `τ = 0` counts exact duplicates.
//!
//! All slab tests are written on differences (`y − yᵢ ≤ τ`) rather than on
//! shifted curves (`y − τ ≤ yᵢ`). Rounding is monotone, so any `τ` at least
//! as large as the data range contains every curve on the right side.

use rayon::prelude::*;

use crate::dataset::{check_len, FunctionalDataset, TauFunction};
use crate::depth::{DepthMethod, DepthReport, TimeTotal};
use crate::error::Result;

/// True iff `center − τ ≤ member ≤ center + τ` at every grid point.
pub fn band_contains(member: &[f64], center: &[f64], tau: &TauFunction) -> Result<bool> {
    check_len(center.len(), member.len())?;
    tau.check(center.len())?;
    Ok(in_band(member, center, tau.values()))
}

#[inline]
pub(crate) fn in_band(member: &[f64], center: &[f64], tau: &[f64]) -> bool {
    member
        .iter()
        .zip(center)
        .zip(tau)
        .all(|((m, c), t)| c - m <= *t && m - c <= *t)
}

#[inline]
fn in_lower_slab(yi: &[f64], y: &[f64], tau: &[f64]) -> bool {
    yi.iter()
        .zip(y)
        .zip(tau)
        .all(|((a, b), t)| a <= b && b - a <= *t)
}

#[inline]
fn in_upper_slab(yi: &[f64], y: &[f64], tau: &[f64]) -> bool {
    yi.iter()
        .zip(y)
        .zip(tau)
        .all(|((a, b), t)| a >= b && a - b <= *t)
}

fn check(y: &[f64], ds: &FunctionalDataset, tau: &TauFunction) -> Result<()> {
    ds.check_curve(y)?;
    tau.check(ds.p())
}

/// Fractions of sample curves inside the lower slab `[y − τ, y]` and the
/// upper slab `[y, y + τ]` at every grid point.
pub fn local_hypo_epi_proportions(
    y: &[f64],
    ds: &FunctionalDataset,
    tau: &TauFunction,
) -> Result<(f64, f64)> {
    check(y, ds, tau)?;
    Ok(local_hypo_epi_unchecked(y, ds, tau.values()))
}

fn local_hypo_epi_unchecked(y: &[f64], ds: &FunctionalDataset, tau: &[f64]) -> (f64, f64) {
    let mut lower = 0usize;
    let mut upper = 0usize;
    for yi in ds.curves() {
        if in_lower_slab(yi, y, tau) {
            lower += 1;
        }
        if in_upper_slab(yi, y, tau) {
            upper += 1;
        }
    }
    let n = ds.n() as f64;
    (lower as f64 / n, upper as f64 / n)
}

/// Local half-region depth: the smaller of the two slab proportions.
pub fn local_depth_hr(y: &[f64], ds: &FunctionalDataset, tau: &TauFunction) -> Result<f64> {
    let (lower, upper) = local_hypo_epi_proportions(y, ds, tau)?;
    Ok(lower.min(upper))
}

/// Band-restricted proportions of time.
///
/// Only curves inside the band `[y − τ, y + τ]` contribute. For those,
/// `lel` averages the weighted time spent in `[y, y + τ]` and `lhl` the
/// time spent in `[y − τ, y]`.
pub fn local_length_proportions(
    y: &[f64],
    ds: &FunctionalDataset,
    tau: &TauFunction,
) -> Result<(f64, f64)> {
    check(y, ds, tau)?;
    Ok(local_length_unchecked(y, ds, tau.values()))
}

fn local_length_unchecked(y: &[f64], ds: &FunctionalDataset, tau: &[f64]) -> (f64, f64) {
    let w = ds.weights();
    let mut total = TimeTotal::default();
    'curves: for yi in ds.curves() {
        let (mut up, mut down) = (0.0, 0.0);
        let (mut up_points, mut down_points) = (0, 0);
        for k in 0..y.len() {
            let (a, b, t) = (yi[k], y[k], tau[k]);
            if !(b - a <= t && a - b <= t) {
                continue 'curves;
            }
            if b <= a {
                up += w[k];
                up_points += 1;
            }
            if a <= b {
                down += w[k];
                down_points += 1;
            }
        }
        total.up += up;
        total.down += down;
        total.up_points += up_points;
        total.down_points += down_points;
    }
    total.shares(ds)
}

/// Local modified half-region depth: `min(lel, lhl)`.
pub fn local_depth_mhr(y: &[f64], ds: &FunctionalDataset, tau: &TauFunction) -> Result<f64> {
    let (lel, lhl) = local_length_proportions(y, ds, tau)?;
    Ok(lel.min(lhl))
}

/// Local depth of every sample curve against the full sample.
pub fn local_depth_all(
    ds: &FunctionalDataset,
    tau: &TauFunction,
    method: DepthMethod,
) -> Result<DepthReport> {
    tau.check(ds.p())?;
    let t = tau.values();
    let values = (0..ds.n())
        .into_par_iter()
        .map(|i| {
            let y = ds.curve(i);
            let (a, b) = match method {
                DepthMethod::Hr => local_hypo_epi_unchecked(y, ds, t),
                DepthMethod::Mhr => local_length_unchecked(y, ds, t),
            };
            a.min(b)
        })
        .collect();
    Ok(DepthReport::new(method, Some(tau.clone()), values))
}
