//! Functional datasets on a shared time grid.
//!
//! A [`FunctionalDataset`] holds `n` curves evaluated on the same `p` grid
//! points. The grid carries positive weights summing to one; they stand in
//! for the normalized Lebesgue measure wherever a "proportion of time" is
//! needed.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WEIGHT_TOLERANCE: f64 = 1e-12;

/// Ordered time points with integration weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl Grid {
    /// Builds a grid from explicit points and weights, checking every invariant.
    pub fn new(points: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let grid = Self::from_raw(points, weights);
        let violations = grid.violations();
        if violations.is_empty() {
            Ok(grid)
        } else {
            Err(Error::Invalid(violations))
        }
    }

    /// Builds a grid without validation. Use [`Grid::violations`] to inspect it.
    pub fn from_raw(points: Vec<f64>, weights: Vec<f64>) -> Self {
        Self { points, weights }
    }

    /// Grid `1, 2, ..., p` with weights `1/p`.
    pub fn index(p: usize) -> Result<Self> {
        Self::uniform((1..=p).map(|k| k as f64).collect())
    }

    /// Equal weights on the given points.
    pub fn uniform(points: Vec<f64>) -> Result<Self> {
        let p = points.len();
        Self::new(points, vec![1.0 / p as f64; p])
    }

    /// Trapezoidal-rule weights on the given points, normalized to sum to one.
    ///
    /// A single point gets weight one.
    pub fn trapezoidal(points: Vec<f64>) -> Result<Self> {
        let p = points.len();
        if p < 2 {
            return Self::uniform(points);
        }
        let span = points[p - 1] - points[0];
        let mut weights = vec![0.0; p];
        for k in 0..p {
            let left = if k == 0 { 0.0 } else { points[k] - points[k - 1] };
            let right = if k + 1 == p { 0.0 } else { points[k + 1] - points[k] };
            weights[k] = 0.5 * (left + right) / span;
        }
        Self::new(points, weights)
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// True when every weight equals `1/p` exactly.
    pub fn is_uniform(&self) -> bool {
        let w = 1.0 / self.len() as f64;
        self.weights.iter().all(|&x| x == w)
    }

    /// Lists every violated grid invariant.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.points.is_empty() {
            out.push("grid is empty".to_string());
        }
        if self.points.iter().any(|x| !x.is_finite()) {
            out.push("grid points not finite".to_string());
        }
        if self.points.windows(2).any(|w| w[0] >= w[1]) {
            out.push("grid not strictly increasing".to_string());
        }
        if self.weights.len() != self.points.len() {
            out.push(format!(
                "grid has {} points but {} weights",
                self.points.len(),
                self.weights.len()
            ));
        }
        if self.weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            out.push("weights not positive".to_string());
        }
        let total: f64 = self.weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            out.push("weights not normalized".to_string());
        }
        out
    }
}

/// `n` curves sampled on a shared grid, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionalDataset {
    grid: Grid,
    data: Vec<f64>,
    n: usize,
    labels: Vec<String>,
}

impl FunctionalDataset {
    /// Builds a dataset from row-major values and validates it.
    ///
    /// `labels` defaults to `"1".."n"` when `None`.
    pub fn new(grid: Grid, data: Vec<f64>, labels: Option<Vec<String>>) -> Result<Self> {
        let p = grid.len();
        if p == 0 {
            return Err(Error::Invalid(vec!["grid is empty".into()]));
        }
        if !data.len().is_multiple_of(p) {
            return Err(Error::LengthMismatch {
                expected: (data.len() / p + 1) * p,
                found: data.len(),
            });
        }
        let n = data.len() / p;
        let ds = Self::from_raw(grid, data, n, labels);
        let violations = validate(&ds);
        if violations.is_empty() {
            Ok(ds)
        } else {
            Err(Error::Invalid(violations))
        }
    }

    /// Builds a dataset from one vector per curve on the index grid `1..p`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let p = rows.first().map_or(0, Vec::len);
        for row in rows {
            if row.len() != p {
                return Err(Error::LengthMismatch {
                    expected: p,
                    found: row.len(),
                });
            }
        }
        Self::new(Grid::index(p)?, rows.concat(), None)
    }

    /// Builds a dataset without validation; see [`validate`].
    pub fn from_raw(grid: Grid, data: Vec<f64>, n: usize, labels: Option<Vec<String>>) -> Self {
        let labels = labels.unwrap_or_else(|| (1..=n).map(|i| i.to_string()).collect());
        Self {
            grid,
            data,
            n,
            labels,
        }
    }

    /// Number of curves.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of grid points.
    pub fn p(&self) -> usize {
        self.grid.len()
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn weights(&self) -> &[f64] {
        self.grid.weights()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Row-major `n × p` values.
    pub fn values(&self) -> &[f64] {
        &self.data
    }

    pub fn curve(&self, i: usize) -> &[f64] {
        let p = self.p();
        &self.data[i * p..(i + 1) * p]
    }

    pub fn curves(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.data.chunks_exact(self.p())
    }

    /// Smallest and largest value over all curves and grid points.
    pub fn value_range(&self) -> (f64, f64) {
        self.data
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
                (lo.min(v), hi.max(v))
            })
    }

    /// Keeps the curves at `indices`, in that order.
    pub fn select(&self, indices: &[usize]) -> Self {
        let mut data = Vec::with_capacity(indices.len() * self.p());
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            data.extend_from_slice(self.curve(i));
            labels.push(self.labels[i].clone());
        }
        Self::from_raw(self.grid.clone(), data, indices.len(), Some(labels))
    }

    pub(crate) fn check_curve(&self, y: &[f64]) -> Result<()> {
        check_len(self.p(), y.len())
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, found })
    }
}

/// Reports every violated dataset invariant. An empty list means the dataset is valid.
pub fn validate(ds: &FunctionalDataset) -> Vec<String> {
    let mut out = ds.grid.violations();
    if ds.n == 0 {
        out.push("dataset has no curves".to_string());
    }
    if ds.data.len() != ds.n * ds.grid.len() {
        out.push(format!(
            "expected {} values for {} curves of length {}, found {}",
            ds.n * ds.grid.len(),
            ds.n,
            ds.grid.len(),
            ds.data.len()
        ));
    }
    if let Some(pos) = ds.data.iter().position(|v| !v.is_finite()) {
        let p = ds.grid.len().max(1);
        out.push(format!(
            "non-finite value in curve {} at grid index {}",
            pos / p + 1,
            pos % p + 1
        ));
    }
    if ds.labels.len() != ds.n {
        out.push(format!(
            "{} labels for {} curves",
            ds.labels.len(),
            ds.n
        ));
    }
    out
}

/// Nonnegative locality threshold, one value per grid point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TauFunction {
    values: Vec<f64>,
}

impl TauFunction {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        for (index, &value) in values.iter().enumerate() {
            if !(value >= 0.0) {
                return Err(Error::NegativeTau { index, value });
            }
        }
        Ok(Self { values })
    }

    /// The constant `c` broadcast over `p` grid points.
    pub fn constant(c: f64, p: usize) -> Result<Self> {
        Self::new(vec![c; p])
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// `|a_k| · τ_k`, the threshold matching an affine rescaling by `a`.
    pub fn rescaled(&self, a: &[f64]) -> Result<Self> {
        let a = broadcast(a, self.len())?;
        Self::new(
            self.values
                .iter()
                .zip(&a)
                .map(|(t, s)| t * s.abs())
                .collect(),
        )
    }

    pub(crate) fn check(&self, p: usize) -> Result<()> {
        check_len(p, self.len())
    }
}

/// Quantiles of the pairwise sup-norm distances, used to pick τ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TauSelection {
    pub probs: Vec<f64>,
    pub quantiles: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stats: Option<Vec<f64>>,
}

impl TauSelection {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

/// `max_k |a_k − b_k|`.
pub fn sup_distance(a: &[f64], b: &[f64]) -> Result<f64> {
    check_len(a.len(), b.len())?;
    Ok(sup_distance_unchecked(a, b))
}

fn sup_distance_unchecked(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .fold(0.0_f64, |acc, (x, y)| acc.max((x - y).abs()))
}

/// Sup-norm distance for every pair `i < j`, ordered `(0,1), (0,2), ..., (n−2,n−1)`.
pub fn pairwise_sup_distances(ds: &FunctionalDataset) -> Result<Vec<f64>> {
    let n = ds.n();
    if n < 2 {
        return Err(Error::TooFewCurves { needed: 2, found: n });
    }
    let rows: Vec<Vec<f64>> = (0..n - 1)
        .into_par_iter()
        .map(|i| {
            let yi = ds.curve(i);
            (i + 1..n)
                .map(|j| sup_distance_unchecked(yi, ds.curve(j)))
                .collect()
        })
        .collect();
    Ok(rows.concat())
}

/// Linear interpolation between order statistics of an ascending slice,
/// at position `h = (m − 1)·prob`.
pub fn quantile_sorted(sorted: &[f64], prob: f64) -> f64 {
    let m = sorted.len();
    let h = (m - 1) as f64 * prob;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(m - 1);
    let frac = h - lo as f64;
    if frac == 0.0 {
        sorted[lo]
    } else {
        sorted[lo] + frac * (sorted[hi] - sorted[lo])
    }
}

/// Quantiles of the pairwise sup-norm distance distribution at each order in `probs`.
pub fn select_tau(ds: &FunctionalDataset, probs: &[f64], keep_stats: bool) -> Result<TauSelection> {
    if let Some(&bad) = probs.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(Error::InvalidArgument(format!(
            "quantile order {bad} outside [0, 1]"
        )));
    }
    let stats = pairwise_sup_distances(ds)?;
    let mut sorted = stats.clone();
    sorted.sort_by(f64::total_cmp);
    let quantiles = probs.iter().map(|&p| quantile_sorted(&sorted, p)).collect();
    Ok(TauSelection {
        probs: probs.to_vec(),
        quantiles,
        stats: keep_stats.then_some(stats),
    })
}

fn broadcast(v: &[f64], p: usize) -> Result<Vec<f64>> {
    match v.len() {
        1 => Ok(vec![v[0]; p]),
        len if len == p => Ok(v.to_vec()),
        len => Err(Error::LengthMismatch {
            expected: p,
            found: len,
        }),
    }
}

/// Maps every value `y_i(t_k)` to `a_k·y_i(t_k) + b_k`.
///
/// `a` and `b` have length `p` or length one (broadcast). `a` must be
/// nonzero with the same sign at every grid point.
pub fn affine_transform(ds: &FunctionalDataset, a: &[f64], b: &[f64]) -> Result<FunctionalDataset> {
    let p = ds.p();
    let a = broadcast(a, p)?;
    let b = broadcast(b, p)?;
    let all_pos = a.iter().all(|&x| x > 0.0);
    let all_neg = a.iter().all(|&x| x < 0.0);
    if !(all_pos || all_neg) {
        return Err(Error::InvalidArgument(
            "scale must be nonzero with constant sign".into(),
        ));
    }
    let data = ds
        .curves()
        .flat_map(|y| y.iter().zip(&a).zip(&b).map(|((v, s), t)| s * v + t))
        .collect();
    Ok(FunctionalDataset::from_raw(
        ds.grid.clone(),
        data,
        ds.n,
        Some(ds.labels.clone()),
    ))
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let m = values.len();
    if m % 2 == 1 {
        values[m / 2]
    } else {
        0.5 * (values[m / 2 - 1] + values[m / 2])
    }
}

/// Centers each grid coordinate at its median and divides by its median
/// absolute deviation (no consistency constant).
pub fn standardize_mad(ds: &FunctionalDataset) -> Result<FunctionalDataset> {
    let (n, p) = (ds.n(), ds.p());
    let mut center = vec![0.0; p];
    let mut scale = vec![0.0; p];
    let mut column = vec![0.0; n];
    for k in 0..p {
        for (i, c) in column.iter_mut().enumerate() {
            *c = ds.curve(i)[k];
        }
        let med = median(&mut column);
        for c in column.iter_mut() {
            *c = (*c - med).abs();
        }
        let mad = median(&mut column);
        if !(mad > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "zero MAD at grid index {}",
                k + 1
            )));
        }
        center[k] = med;
        scale[k] = mad;
    }
    let data = ds
        .curves()
        .flat_map(|y| {
            y.iter()
                .zip(center.iter().zip(&scale))
                .map(|(v, (c, s))| (v - c) / s)
        })
        .collect();
    Ok(FunctionalDataset::from_raw(
        ds.grid.clone(),
        data,
        n,
        Some(ds.labels.clone()),
    ))
}

/// How to read a CSV table into curves.
#[derive(Debug, Clone)]
pub struct LoadOptions {
    /// Rows are curves. Otherwise columns are curves.
    pub byrow: bool,
    pub has_header: bool,
    /// When reading by row, the first column holds curve labels.
    pub row_labels: bool,
    /// Grid to use instead of `1..p` with uniform weights.
    pub grid: Option<Grid>,
}

impl Default for LoadOptions {
    fn default() -> Self {
        Self {
            byrow: true,
            has_header: false,
            row_labels: false,
            grid: None,
        }
    }
}

fn is_missing(field: &str) -> bool {
    matches!(
        field,
        "" | "NA" | "na" | "N/A" | "NaN" | "nan" | "NAN" | "null" | "NULL"
    )
}

/// Reads a dataset from a CSV file.
pub fn load_csv(path: impl AsRef<Path>, opts: &LoadOptions) -> Result<FunctionalDataset> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_csv(file, opts)
}

/// Reads a dataset from CSV text.
///
/// Row and column numbers in errors are 1-based positions in the file.
pub fn read_csv(reader: impl Read, opts: &LoadOptions) -> Result<FunctionalDataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(opts.has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let header: Option<Vec<String>> = if opts.has_header {
        Some(rdr.headers()?.iter().map(str::to_string).collect())
    } else {
        None
    };
    let skip = usize::from(opts.byrow && opts.row_labels);

    let mut table: Vec<Vec<f64>> = Vec::new();
    let mut row_names = Vec::new();
    let mut width = None;
    for record in rdr.records() {
        let record = record?;
        let row = record.position().map_or(table.len() + 1, |p| p.line() as usize);
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(Error::Shape {
                row,
                expected,
                found: record.len(),
            });
        }
        if skip == 1 {
            row_names.push(record[0].to_string());
        }
        let mut values = Vec::with_capacity(record.len() - skip);
        for (c, field) in record.iter().enumerate().skip(skip) {
            let column = c + 1;
            if is_missing(field) {
                return Err(Error::MissingValue { row, column });
            }
            let parsed: f64 = field.parse().map_err(|_| Error::Parse {
                row,
                column,
                value: field.to_string(),
            })?;
            if !parsed.is_finite() {
                return Err(Error::Parse {
                    row,
                    column,
                    value: field.to_string(),
                });
            }
            values.push(parsed);
        }
        table.push(values);
    }
    if table.is_empty() || table[0].is_empty() {
        return Err(Error::Invalid(vec!["dataset has no curves".into()]));
    }

    let (rows, labels) = if opts.byrow {
        let labels = (skip == 1).then_some(row_names);
        (table, labels)
    } else {
        let (r, c) = (table.len(), table[0].len());
        let transposed = (0..c)
            .map(|j| (0..r).map(|i| table[i][j]).collect())
            .collect();
        let labels = header.map(|h| h.into_iter().collect());
        (transposed, labels)
    };
    let p = rows[0].len();
    let grid = match &opts.grid {
        Some(g) => {
            check_len(p, g.len())?;
            g.clone()
        }
        None => Grid::index(p)?,
    };
    FunctionalDataset::new(grid, rows.concat(), labels)
}

/// Writes curves one per row, without header or labels.
///
/// Values use the shortest representation that parses back to the same
/// `f64`, so [`read_csv`] with default options restores the values exactly.
pub fn write_csv(ds: &FunctionalDataset, mut writer: impl Write) -> Result<()> {
    let mut line = String::new();
    for y in ds.curves() {
        line.clear();
        for (k, v) in y.iter().enumerate() {
            if k > 0 {
                line.push(',');
            }
            line.push_str(&v.to_string());
        }
        line.push('\n');
        writer.write_all(line.as_bytes())?;
    }
    Ok(())
}
