//! Depth-based similarity between pairs of curves and the Gower
//! dissimilarity built from it.
//!
//! For a pair `(x, y)` let `w = x ∧ y` and `z = x ∨ y` be the pointwise
//! envelopes. The global similarity counts sample curves below `w` and
//! above `z`. The local variants restrict those counts to the band where
//! both curves' slabs overlap:
//!
//! * hypograph side: `z − τ ≤ yᵢ ≤ w`, the intersection of the lower slabs
//!   of `x` and `y`;
//! * epigraph side: `z ≤ yᵢ ≤ w + τ`, the intersection of the upper slabs;
//! * the modified variant weights curves inside `[z − τ, w + τ]` by their
//!   time in `[z, z + τ]` and `[w − τ, w]`.
//!
//! With `x = y` every similarity reduces to the matching depth, bit for bit.
//!
//! Dense matrices need `O(n²)` memory. [`similarity_rows`] computes a block
//! of full rows at a time for callers that stream results to disk.

use std::fmt;
use std::io::{Read, Write};
use std::ops::Range;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dataset::{check_len, FunctionalDataset, TauFunction};
use crate::depth::TimeTotal;
use crate::error::{Error, Result};

/// Header of the binary matrix format.
pub const BINARY_MAGIC: &[u8; 8] = b"FDSIMM01";

const GOWER_TOLERANCE: f64 = 1e-12;

/// Which depth the similarity is built from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SimilarityMethod {
    #[serde(rename = "HR")]
    Hr,
    #[serde(rename = "localHR")]
    LocalHr,
    #[serde(rename = "localMHR")]
    LocalMhr,
}

impl SimilarityMethod {
    pub fn is_local(self) -> bool {
        !matches!(self, SimilarityMethod::Hr)
    }
}

impl fmt::Display for SimilarityMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimilarityMethod::Hr => "HR",
            SimilarityMethod::LocalHr => "localHR",
            SimilarityMethod::LocalMhr => "localMHR",
        })
    }
}

impl FromStr for SimilarityMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hr" => Ok(SimilarityMethod::Hr),
            "localhr" => Ok(SimilarityMethod::LocalHr),
            "localmhr" => Ok(SimilarityMethod::LocalMhr),
            other => Err(Error::InvalidArgument(format!(
                "unknown similarity method {other:?}"
            ))),
        }
    }
}

/// Symmetric `n × n` similarity matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    pub method: SimilarityMethod,
    pub tau: Option<TauFunction>,
    n: usize,
    data: Vec<f64>,
}

impl SimilarityMatrix {
    pub fn from_raw(
        method: SimilarityMethod,
        tau: Option<TauFunction>,
        n: usize,
        data: Vec<f64>,
    ) -> Result<Self> {
        check_len(n * n, data.len())?;
        Ok(Self {
            method,
            tau,
            n,
            data,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.n).map(|i| self.get(i, i)).collect()
    }
}

/// Symmetric `n × n` dissimilarity matrix with zero diagonal, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DissimilarityMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DissimilarityMatrix {
    /// Checks symmetry, zero diagonal and nonnegativity.
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        check_len(n * n, data.len())?;
        for i in 0..n {
            if data[i * n + i] != 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "nonzero diagonal at {}",
                    i + 1
                )));
            }
            for j in 0..i {
                let v = data[i * n + j];
                if !(v >= 0.0) || !v.is_finite() || v != data[j * n + i] {
                    return Err(Error::InvalidArgument(format!(
                        "entry ({}, {}) is negative, non-finite or asymmetric",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(Self { n, data })
    }

    /// Builds a matrix from the `n(n−1)/2` upper-triangle entries in
    /// row-major `(i, j), i < j` order.
    pub fn from_condensed(n: usize, condensed: &[f64]) -> Result<Self> {
        check_len(n * n.saturating_sub(1) / 2, condensed.len())?;
        let mut data = vec![0.0; n * n];
        let mut it = condensed.iter();
        for i in 0..n {
            for j in i + 1..n {
                let v = *it.next().unwrap();
                data[i * n + j] = v;
                data[j * n + i] = v;
            }
        }
        Self::new(n, data)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }
}

/// Pointwise minimum and maximum of two curves.
pub fn envelope(x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    check_len(x.len(), y.len())?;
    let mut w = vec![0.0; x.len()];
    let mut z = vec![0.0; x.len()];
    fill_envelope(x, y, &mut w, &mut z);
    Ok((w, z))
}

#[inline]
fn fill_envelope(x: &[f64], y: &[f64], w: &mut [f64], z: &mut [f64]) {
    for k in 0..x.len() {
        w[k] = x[k].min(y[k]);
        z[k] = x[k].max(y[k]);
    }
}

fn hr_kernel(w: &[f64], z: &[f64], ds: &FunctionalDataset) -> f64 {
    let mut below = 0usize;
    let mut above = 0usize;
    for yi in ds.curves() {
        if yi.iter().zip(w).all(|(a, b)| a <= b) {
            below += 1;
        }
        if yi.iter().zip(z).all(|(a, b)| a >= b) {
            above += 1;
        }
    }
    below.min(above) as f64 / ds.n() as f64
}

fn local_hr_kernel(w: &[f64], z: &[f64], ds: &FunctionalDataset, tau: &[f64]) -> f64 {
    // Both slab intersections are empty once the envelopes are more than τ apart.
    if w.iter().zip(z).zip(tau).any(|((a, b), t)| b - a > *t) {
        return 0.0;
    }
    let mut below = 0usize;
    let mut above = 0usize;
    for yi in ds.curves() {
        if (0..yi.len()).all(|k| yi[k] <= w[k] && z[k] - yi[k] <= tau[k]) {
            below += 1;
        }
        if (0..yi.len()).all(|k| yi[k] >= z[k] && yi[k] - w[k] <= tau[k]) {
            above += 1;
        }
    }
    below.min(above) as f64 / ds.n() as f64
}

fn local_mhr_kernel(w: &[f64], z: &[f64], ds: &FunctionalDataset, tau: &[f64]) -> f64 {
    if w
        .iter()
        .zip(z)
        .zip(tau)
        .any(|((a, b), t)| b - a > 2.0 * t * (1.0 + 1e-9))
    {
        return 0.0;
    }
    let weights = ds.weights();
    let mut total = TimeTotal::default();
    'curves: for yi in ds.curves() {
        let (mut up, mut down) = (0.0, 0.0);
        let (mut up_points, mut down_points) = (0, 0);
        for k in 0..yi.len() {
            let (a, lo, hi, t) = (yi[k], w[k], z[k], tau[k]);
            if !(hi - a <= t && a - lo <= t) {
                continue 'curves;
            }
            if hi <= a && a - hi <= t {
                up += weights[k];
                up_points += 1;
            }
            if a <= lo && lo - a <= t {
                down += weights[k];
                down_points += 1;
            }
        }
        total.up += up;
        total.down += down;
        total.up_points += up_points;
        total.down_points += down_points;
    }
    let (el, hl) = total.shares(ds);
    el.min(hl)
}

fn check_pair(x: &[f64], y: &[f64], ds: &FunctionalDataset) -> Result<()> {
    ds.check_curve(x)?;
    ds.check_curve(y)
}

/// Global half-region depth similarity.
pub fn sim_hr(x: &[f64], y: &[f64], ds: &FunctionalDataset) -> Result<f64> {
    check_pair(x, y, ds)?;
    let (w, z) = envelope(x, y)?;
    Ok(hr_kernel(&w, &z, ds))
}

/// Local half-region depth similarity.
pub fn local_sim_hr(
    x: &[f64],
    y: &[f64],
    ds: &FunctionalDataset,
    tau: &TauFunction,
) -> Result<f64> {
    check_pair(x, y, ds)?;
    tau.check(ds.p())?;
    let (w, z) = envelope(x, y)?;
    Ok(local_hr_kernel(&w, &z, ds, tau.values()))
}

/// Local modified half-region depth similarity.
pub fn local_sim_mhr(
    x: &[f64],
    y: &[f64],
    ds: &FunctionalDataset,
    tau: &TauFunction,
) -> Result<f64> {
    check_pair(x, y, ds)?;
    tau.check(ds.p())?;
    let (w, z) = envelope(x, y)?;
    Ok(local_mhr_kernel(&w, &z, ds, tau.values()))
}

struct PairKernel<'a> {
    ds: &'a FunctionalDataset,
    method: SimilarityMethod,
    tau: &'a [f64],
}

impl<'a> PairKernel<'a> {
    fn new(
        ds: &'a FunctionalDataset,
        method: SimilarityMethod,
        tau: Option<&'a TauFunction>,
    ) -> Result<Self> {
        let tau = match (method.is_local(), tau) {
            (true, None) => {
                return Err(Error::InvalidArgument(format!(
                    "{method} similarity needs tau"
                )))
            }
            (true, Some(t)) => {
                t.check(ds.p())?;
                t.values()
            }
            (false, _) => &[],
        };
        Ok(Self { ds, method, tau })
    }

    fn eval(&self, i: usize, j: usize, w: &mut [f64], z: &mut [f64]) -> f64 {
        fill_envelope(self.ds.curve(i), self.ds.curve(j), w, z);
        match self.method {
            SimilarityMethod::Hr => hr_kernel(w, z, self.ds),
            SimilarityMethod::LocalHr => local_hr_kernel(w, z, self.ds, self.tau),
            SimilarityMethod::LocalMhr => local_mhr_kernel(w, z, self.ds, self.tau),
        }
    }
}

/// Similarity between every pair of sample curves.
///
/// The diagonal holds the matching (local) depth of each curve. `tau` is
/// required for local methods and ignored for [`SimilarityMethod::Hr`].
pub fn similarity_matrix(
    ds: &FunctionalDataset,
    method: SimilarityMethod,
    tau: Option<&TauFunction>,
) -> Result<SimilarityMatrix> {
    let kernel = PairKernel::new(ds, method, tau)?;
    let (n, p) = (ds.n(), ds.p());
    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map_init(
            || (vec![0.0; p], vec![0.0; p]),
            |(w, z), i| (i..n).map(|j| kernel.eval(i, j, w, z)).collect(),
        )
        .collect();
    let mut data = vec![0.0; n * n];
    for (i, row) in upper.into_iter().enumerate() {
        for (offset, v) in row.into_iter().enumerate() {
            let j = i + offset;
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
    }
    SimilarityMatrix::from_raw(method, tau.filter(|_| method.is_local()).cloned(), n, data)
}

/// Full rows `rows` of the similarity matrix, row-major, without
/// materializing the rest. Values match [`similarity_matrix`] exactly.
pub fn similarity_rows(
    ds: &FunctionalDataset,
    method: SimilarityMethod,
    tau: Option<&TauFunction>,
    rows: Range<usize>,
) -> Result<Vec<f64>> {
    let kernel = PairKernel::new(ds, method, tau)?;
    let (n, p) = (ds.n(), ds.p());
    if rows.end > n {
        return Err(Error::InvalidArgument(format!(
            "row range {rows:?} exceeds {n} curves"
        )));
    }
    let block: Vec<Vec<f64>> = rows
        .into_par_iter()
        .map_init(
            || (vec![0.0; p], vec![0.0; p]),
            |(w, z), i| (0..n).map(|j| kernel.eval(i, j, w, z)).collect(),
        )
        .collect();
    Ok(block.concat())
}

/// Diagonal of the similarity matrix, equal to the matching depth of each curve.
pub fn similarity_diagonal(
    ds: &FunctionalDataset,
    method: SimilarityMethod,
    tau: Option<&TauFunction>,
) -> Result<Vec<f64>> {
    let kernel = PairKernel::new(ds, method, tau)?;
    let p = ds.p();
    Ok((0..ds.n())
        .into_par_iter()
        .map_init(
            || (vec![0.0; p], vec![0.0; p]),
            |(w, z), i| kernel.eval(i, i, w, z),
        )
        .collect())
}

/// Gower distance for one entry. Values within `1e-12` below zero clamp to zero.
pub fn gower_entry(s_ii: f64, s_jj: f64, s_ij: f64) -> Result<f64> {
    let radicand = s_ii + s_jj - 2.0 * s_ij;
    if radicand < -GOWER_TOLERANCE {
        return Err(Error::Invariant(format!(
            "similarity {s_ij} exceeds the mean of its diagonal entries {s_ii}, {s_jj}"
        )));
    }
    Ok(radicand.max(0.0).sqrt())
}

/// `d_ij = (s_ii + s_jj − 2 s_ij)^{1/2}`.
pub fn gower_dissimilarity(s: &SimilarityMatrix) -> Result<DissimilarityMatrix> {
    let n = s.n();
    let diag = s.diagonal();
    let mut data = vec![0.0; n * n];
    for i in 0..n {
        for j in i + 1..n {
            let d = gower_entry(diag[i], diag[j], s.get(i, j))?;
            data[i * n + j] = d;
            data[j * n + i] = d;
        }
    }
    DissimilarityMatrix::new(n, data)
}

/// Writes a square matrix as CSV with a header line of labels.
pub fn write_matrix_csv(labels: &[String], values: &[f64], writer: impl Write) -> Result<()> {
    let n = labels.len();
    check_len(n * n, values.len())?;
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(labels)?;
    for row in values.chunks_exact(n.max(1)) {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()?;
    Ok(())
}

/// Writes `FDSIMM01`, `n` as little-endian `u64`, then the `n²` entries as
/// little-endian `f64`, row-major.
pub fn write_matrix_binary(n: usize, values: &[f64], mut writer: impl Write) -> Result<()> {
    check_len(n * n, values.len())?;
    write_binary_header(n, &mut writer)?;
    write_binary_values(values, &mut writer)
}

pub(crate) fn write_binary_header(n: usize, mut writer: impl Write) -> Result<()> {
    writer.write_all(BINARY_MAGIC)?;
    writer.write_all(&(n as u64).to_le_bytes())?;
    Ok(())
}

pub(crate) fn write_binary_values(values: &[f64], mut writer: impl Write) -> Result<()> {
    let mut buf = Vec::with_capacity(values.len() * 8);
    for v in values {
        buf.extend_from_slice(&v.to_le_bytes());
    }
    writer.write_all(&buf)?;
    Ok(())
}

/// Reads the binary format written by [`write_matrix_binary`].
pub fn read_matrix_binary(mut reader: impl Read) -> Result<(usize, Vec<f64>)> {
    let mut magic = [0u8; 8];
    reader.read_exact(&mut magic)?;
    if &magic != BINARY_MAGIC {
        return Err(Error::InvalidArgument("not an FDSIMM01 matrix".into()));
    }
    let mut len = [0u8; 8];
    reader.read_exact(&mut len)?;
    let n = u64::from_le_bytes(len) as usize;
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    check_len(n * n * 8, bytes.len())?;
    let values = bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok((n, values))
}
