//! Ward agglomerative clustering on a dissimilarity matrix, tree cutting,
//! and silhouette widths.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::similarity::DissimilarityMatrix;

/// How Lance–Williams is applied.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WardVariant {
    /// Update raw dissimilarities; heights are on the input scale.
    #[default]
    D,
    /// Square the input first and report square-rooted heights.
    D2,
}

/// One agglomeration step.
///
/// Leaves have ids `0..n`; the cluster created by merge `m` has id `n + m`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "(usize, usize, f64, usize)", from = "(usize, usize, f64, usize)")]
pub struct Merge {
    pub left: usize,
    pub right: usize,
    pub height: f64,
    pub size: usize,
}

impl From<Merge> for (usize, usize, f64, usize) {
    fn from(m: Merge) -> Self {
        (m.left, m.right, m.height, m.size)
    }
}

impl From<(usize, usize, f64, usize)> for Merge {
    fn from((left, right, height, size): (usize, usize, f64, usize)) -> Self {
        Self {
            left,
            right,
            height,
            size,
        }
    }
}

/// Merge sequence of an agglomerative clustering of `n` leaves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dendrogram {
    pub merges: Vec<Merge>,
    pub n: usize,
}

impl Dendrogram {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let dg: Self = serde_json::from_str(text)?;
        dg.check()?;
        Ok(dg)
    }

    fn check(&self) -> Result<()> {
        let n = self.n;
        if self.merges.len() + 1 != n {
            return Err(Error::Invariant(format!(
                "{} merges for {n} leaves",
                self.merges.len()
            )));
        }
        let mut used = vec![false; 2 * n - 1];
        for (m, merge) in self.merges.iter().enumerate() {
            for id in [merge.left, merge.right] {
                if id >= n + m || used[id] {
                    return Err(Error::Invariant(format!("bad child id {id} at merge {m}")));
                }
                used[id] = true;
            }
            if !merge.height.is_finite() {
                return Err(Error::Invariant(format!("non-finite height at merge {m}")));
            }
        }
        Ok(())
    }

    /// Newick text with branch lengths `parent height − child height`.
    pub fn to_newick(&self, labels: &[String]) -> Result<String> {
        if labels.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                found: labels.len(),
            });
        }
        let n = self.n;
        if n == 1 {
            return Ok(format!("{};", labels[0]));
        }
        let height = |id: usize| if id < n { 0.0 } else { self.merges[id - n].height };
        let mut text: Vec<Option<String>> = labels.iter().cloned().map(Some).collect();
        for m in &self.merges {
            let h = m.height;
            let l = text[m.left].take().unwrap_or_default();
            let r = text[m.right].take().unwrap_or_default();
            text.push(Some(format!(
                "({l}:{},{r}:{})",
                h - height(m.left),
                h - height(m.right)
            )));
        }
        Ok(format!("{};", text.pop().flatten().unwrap_or_default()))
    }
}

/// Ward linkage (Lance–Williams recurrence) on `d`.
///
/// Every step merges the pair of active clusters at minimum distance. Ties
/// go to the lexicographically smallest `(slot, slot)` pair, where a cluster
/// lives in the slot of its smallest leaf index.
pub fn ward_linkage(d: &DissimilarityMatrix, variant: WardVariant) -> Result<Dendrogram> {
    let n = d.n();
    if n < 2 {
        return Err(Error::TooFewCurves { needed: 2, found: n });
    }
    let mut dist: Vec<f64> = match variant {
        WardVariant::D => d.as_slice().to_vec(),
        WardVariant::D2 => d.as_slice().iter().map(|v| v * v).collect(),
    };
    let mut active = vec![true; n];
    let mut size = vec![1usize; n];
    let mut id: Vec<usize> = (0..n).collect();
    let mut nn = vec![usize::MAX; n];
    let mut nn_dist = vec![f64::INFINITY; n];

    let refresh = |i: usize, dist: &[f64], active: &[bool], nn: &mut [usize], nn_dist: &mut [f64]| {
        let mut best = f64::INFINITY;
        let mut arg = usize::MAX;
        for j in i + 1..n {
            if active[j] && dist[i * n + j] < best {
                best = dist[i * n + j];
                arg = j;
            }
        }
        nn[i] = arg;
        nn_dist[i] = best;
    };
    for i in 0..n - 1 {
        refresh(i, &dist, &active, &mut nn, &mut nn_dist);
    }

    let mut merges = Vec::with_capacity(n - 1);
    for step in 0..n - 1 {
        let mut a = usize::MAX;
        let mut best = f64::INFINITY;
        for i in 0..n {
            if active[i] && nn[i] != usize::MAX && (a == usize::MAX || nn_dist[i] < best) {
                a = i;
                best = nn_dist[i];
            }
        }
        if a == usize::MAX {
            return Err(Error::Invariant("no mergeable pair".into()));
        }
        let b = nn[a];
        let height = match variant {
            WardVariant::D => best,
            WardVariant::D2 => best.sqrt(),
        };
        let (na, nb) = (size[a] as f64, size[b] as f64);
        merges.push(Merge {
            left: id[a],
            right: id[b],
            height,
            size: size[a] + size[b],
        });

        active[b] = false;
        nn[b] = usize::MAX;
        for k in 0..n {
            if !active[k] || k == a {
                continue;
            }
            let nk = size[k] as f64;
            let v = ((na + nk) * dist[a * n + k] + (nb + nk) * dist[b * n + k] - nk * best)
                / (na + nb + nk);
            dist[a * n + k] = v;
            dist[k * n + a] = v;
        }
        size[a] += size[b];
        id[a] = n + step;

        refresh(a, &dist, &active, &mut nn, &mut nn_dist);
        for i in 0..b {
            if !active[i] || i == a {
                continue;
            }
            if nn[i] == a || nn[i] == b {
                refresh(i, &dist, &active, &mut nn, &mut nn_dist);
            } else if i < a {
                let v = dist[i * n + a];
                if v < nn_dist[i] || (v == nn_dist[i] && a < nn[i]) {
                    nn[i] = a;
                    nn_dist[i] = v;
                }
            }
        }
    }
    let dg = Dendrogram { merges, n };
    dg.check()?;
    Ok(dg)
}

/// Cluster assignment with labels `1..=k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterLabels {
    pub labels: Vec<usize>,
    pub k: usize,
}

impl ClusterLabels {
    /// Relabels arbitrary group ids to `1..=k` in order of first appearance.
    pub fn from_groups(groups: &[usize]) -> Self {
        let mut seen: Vec<(usize, usize)> = Vec::new();
        let labels = groups
            .iter()
            .map(|g| match seen.iter().find(|(key, _)| key == g) {
                Some(&(_, l)) => l,
                None => {
                    let l = seen.len() + 1;
                    seen.push((*g, l));
                    l
                }
            })
            .collect();
        Self {
            labels,
            k: seen.len(),
        }
    }

    pub fn write_csv(&self, names: &[String], writer: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["label", "cluster"])?;
        for (name, l) in names.iter().zip(&self.labels) {
            w.write_record([name.as_str(), &l.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

/// Partition into `k` groups obtained by undoing the last `k − 1` merges.
pub fn cut_tree(dg: &Dendrogram, k: usize) -> Result<ClusterLabels> {
    let n = dg.n;
    if k < 1 || k > n {
        return Err(Error::InvalidArgument(format!("k = {k} outside [1, {n}]")));
    }
    let mut parent: Vec<usize> = (0..2 * n - 1).collect();
    for (m, merge) in dg.merges.iter().take(n - k).enumerate() {
        parent[merge.left] = n + m;
        parent[merge.right] = n + m;
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    Ok(ClusterLabels::from_groups(&roots))
}

/// Silhouette widths with per-cluster and overall means.
#[derive(Debug, Clone, PartialEq)]
pub struct SilhouetteReport {
    pub widths: Vec<f64>,
    /// Mean width of cluster `c` at index `c − 1`.
    pub cluster_means: Vec<f64>,
    pub mean: f64,
    /// Set when the widths are undefined (a single cluster) and reported as zero.
    pub warning: Option<String>,
}

impl SilhouetteReport {
    pub fn write_csv(
        &self,
        names: &[String],
        labels: &ClusterLabels,
        writer: impl Write,
    ) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["label", "cluster", "width"])?;
        for ((name, l), s) in names.iter().zip(&labels.labels).zip(&self.widths) {
            w.write_record([name.as_str(), &l.to_string(), &s.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Silhouette `s(i) = (b − a) / max(a, b)`; members of singleton clusters get 0.
pub fn silhouette(labels: &ClusterLabels, d: &DissimilarityMatrix) -> Result<SilhouetteReport> {
    let n = d.n();
    if labels.labels.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: labels.labels.len(),
        });
    }
    let k = labels.k;
    if labels.labels.iter().any(|&l| l == 0 || l > k) {
        return Err(Error::InvalidArgument("cluster label out of range".into()));
    }
    let mut counts = vec![0usize; k];
    for &l in &labels.labels {
        counts[l - 1] += 1;
    }
    if k < 2 {
        return Ok(SilhouetteReport {
            widths: vec![0.0; n],
            cluster_means: vec![0.0; k],
            mean: 0.0,
            warning: Some("silhouette undefined for a single cluster".into()),
        });
    }

    let mut widths = vec![0.0; n];
    let mut sums = vec![0.0; k];
    for (i, width) in widths.iter_mut().enumerate() {
        let own = labels.labels[i] - 1;
        if counts[own] == 1 {
            continue;
        }
        sums.iter_mut().for_each(|s| *s = 0.0);
        for j in 0..n {
            if j != i {
                sums[labels.labels[j] - 1] += d.get(i, j);
            }
        }
        let a = sums[own] / (counts[own] - 1) as f64;
        let b = (0..k)
            .filter(|&c| c != own && counts[c] > 0)
            .map(|c| sums[c] / counts[c] as f64)
            .fold(f64::INFINITY, f64::min);
        let denom = a.max(b);
        *width = if denom > 0.0 { (b - a) / denom } else { 0.0 };
    }

    let mut cluster_means = vec![0.0; k];
    for (&l, &s) in labels.labels.iter().zip(&widths) {
        cluster_means[l - 1] += s;
    }
    for (m, &c) in cluster_means.iter_mut().zip(&counts) {
        *m /= c as f64;
    }
    let mean = widths.iter().sum::<f64>() / n as f64;
    Ok(SilhouetteReport {
        widths,
        cluster_means,
        mean,
        warning: None,
    })
}

/// Adjusted Rand index between two partitions of the same items.
pub fn adjusted_rand_index(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let a = ClusterLabels::from_groups(a);
    let b = ClusterLabels::from_groups(b);
    let mut table = vec![0u64; a.k * b.k];
    for (x, y) in a.labels.iter().zip(&b.labels) {
        table[(x - 1) * b.k + (y - 1)] += 1;
    }
    let pairs = |c: u64| (c * c.saturating_sub(1) / 2) as f64;
    let index: f64 = table.iter().map(|&c| pairs(c)).sum();
    let rows: f64 = (0..a.k)
        .map(|r| pairs(table[r * b.k..(r + 1) * b.k].iter().sum()))
        .sum();
    let cols: f64 = (0..b.k)
        .map(|c| pairs((0..a.k).map(|r| table[r * b.k + c]).sum()))
        .sum();
    let total = pairs(a.labels.len() as u64);
    let expected = rows * cols / total;
    let max = 0.5 * (rows + cols);
    if max == expected {
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}
