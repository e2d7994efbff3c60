//! Global half-region and modified half-region depths.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{FunctionalDataset, TauFunction};
use crate::error::{Error, Result};

/// Which depth family to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DepthMethod {
    /// Half-region depth: whole-graph containment in hypograph/epigraph.
    #[serde(rename = "HR")]
    Hr,
    /// Modified half-region depth: mean proportion of time above/below.
    #[serde(rename = "MHR")]
    Mhr,
}

impl fmt::Display for DepthMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DepthMethod::Hr => "HR",
            DepthMethod::Mhr => "MHR",
        })
    }
}

impl FromStr for DepthMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hr" => Ok(DepthMethod::Hr),
            "mhr" => Ok(DepthMethod::Mhr),
            other => Err(Error::InvalidArgument(format!("unknown depth method {other:?}"))),
        }
    }
}

/// Per-curve depth values for one method, with ranks (1 = deepest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthReport {
    pub method: DepthMethod,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<TauFunction>,
    pub values: Vec<f64>,
    pub ranks: Vec<usize>,
}

impl DepthReport {
    pub fn new(method: DepthMethod, tau: Option<TauFunction>, values: Vec<f64>) -> Self {
        let ranks = depth_ranks(&values);
        Self {
            method,
            tau,
            values,
            ranks,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    /// Writes `label,value,rank` rows with a header line.
    pub fn write_csv(&self, labels: &[String], writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["label", "value", "rank"])?;
        for ((label, value), rank) in labels.iter().zip(&self.values).zip(&self.ranks) {
            w.write_record([label.as_str(), &value.to_string(), &rank.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Ranks by descending value; ties go to the lower curve index first.
pub fn depth_ranks(values: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    let mut ranks = vec![0; values.len()];
    for (pos, &i) in order.iter().enumerate() {
        ranks[i] = pos + 1;
    }
    ranks
}

/// Fractions of sample curves lying entirely in the hypograph and in the
/// epigraph of `y`. Ties count on both sides.
pub fn hypo_epi_proportions(y: &[f64], ds: &FunctionalDataset) -> Result<(f64, f64)> {
    ds.check_curve(y)?;
    Ok(hypo_epi_unchecked(y, ds))
}

pub(crate) fn hypo_epi_unchecked(y: &[f64], ds: &FunctionalDataset) -> (f64, f64) {
    let mut below = 0usize;
    let mut above = 0usize;
    for yi in ds.curves() {
        if yi.iter().zip(y).all(|(a, b)| a <= b) {
            below += 1;
        }
        if yi.iter().zip(y).all(|(a, b)| a >= b) {
            above += 1;
        }
    }
    let n = ds.n() as f64;
    (below as f64 / n, above as f64 / n)
}

/// Half-region depth of `y` with respect to the sample.
pub fn depth_hr(y: &[f64], ds: &FunctionalDataset) -> Result<f64> {
    let (hyp, epi) = hypo_epi_proportions(y, ds)?;
    Ok(hyp.min(epi))
}

/// Mean weighted proportion of time sample curves spend on or above `y`
/// (`el`) and on or below `y` (`hl`).
pub fn length_proportions(y: &[f64], ds: &FunctionalDataset) -> Result<(f64, f64)> {
    ds.check_curve(y)?;
    Ok(length_unchecked(y, ds))
}

/// Running total of weighted time over sample curves.
///
/// Grid-point counts are kept next to the weighted sums. On a uniform grid
/// the count is used, which makes the result exact and independent of the
/// order of the curves.
#[derive(Default)]
pub(crate) struct TimeTotal {
    pub up: f64,
    pub down: f64,
    pub up_points: usize,
    pub down_points: usize,
}

impl TimeTotal {
    /// `(up, down)` averaged over the `n` curves of `ds`.
    pub fn shares(&self, ds: &FunctionalDataset) -> (f64, f64) {
        if ds.grid().is_uniform() {
            let total = (ds.n() * ds.p()) as f64;
            (self.up_points as f64 / total, self.down_points as f64 / total)
        } else {
            let n = ds.n() as f64;
            (self.up / n, self.down / n)
        }
    }
}

pub(crate) fn length_unchecked(y: &[f64], ds: &FunctionalDataset) -> (f64, f64) {
    let w = ds.weights();
    let mut total = TimeTotal::default();
    for yi in ds.curves() {
        let mut up = 0.0;
        let mut down = 0.0;
        for ((a, b), wk) in yi.iter().zip(y).zip(w) {
            if b <= a {
                up += wk;
                total.up_points += 1;
            }
            if b >= a {
                down += wk;
                total.down_points += 1;
            }
        }
        total.up += up;
        total.down += down;
    }
    total.shares(ds)
}

/// Modified half-region depth of `y` with respect to the sample.
pub fn depth_mhr(y: &[f64], ds: &FunctionalDataset) -> Result<f64> {
    let (el, hl) = length_proportions(y, ds)?;
    Ok(el.min(hl))
}

/// Depth of every sample curve against the full sample (itself included).
pub fn depth_all(ds: &FunctionalDataset, method: DepthMethod) -> DepthReport {
    let values = (0..ds.n())
        .into_par_iter()
        .map(|i| {
            let y = ds.curve(i);
            let (a, b) = match method {
                DepthMethod::Hr => hypo_epi_unchecked(y, ds),
                DepthMethod::Mhr => length_unchecked(y, ds),
            };
            a.min(b)
        })
        .collect();
    DepthReport::new(method, None, values)
}
