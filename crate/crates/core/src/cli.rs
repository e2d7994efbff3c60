//! The `fdepth` command line.
//!
//! Data goes to stdout (or `--out`), diagnostics to stderr. Exit codes:
//! 0 success, 2 usage or input error, 3 internal invariant breach.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::clustering::{cut_tree, silhouette, ward_linkage, WardVariant};
use crate::dataset::{
    load_csv, select_tau, standardize_mad, FunctionalDataset, Grid, LoadOptions, TauFunction,
};
use crate::depth::{depth_all, DepthMethod, DepthReport};
use crate::error::{Error, Result};
use crate::finite_dim::{local_depth_hr_finite_all, PointSample};
use crate::local_depth::local_depth_all;
use crate::montecarlo::{consistency_experiment, IidProcessSpec, Marginal};
use crate::similarity::{
    gower_dissimilarity, gower_entry, similarity_diagonal, similarity_matrix, similarity_rows,
    write_binary_header, write_binary_values, write_matrix_binary, write_matrix_csv,
    SimilarityMethod,
};

#[derive(Debug, Parser)]
#[command(name = "fdepth", version, about = "Half-region depths and depth-based clustering for functional data")]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "FDEPTH_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Quantiles of pairwise sup-norm distances, for choosing τ.
    Tau(TauCmd),
    /// Global depth, plus local depth when τ is given.
    Depth(DepthCmd),
    /// Global and local depth side by side, ready for a DD-plot.
    Ddplot(DdplotCmd),
    /// Pairwise depth similarity (or Gower dissimilarity) matrix.
    Similarity(SimilarityCmd),
    /// Similarity, Gower, Ward, then cut and silhouette for each k.
    Cluster(ClusterCmd),
    /// Monte Carlo check of sample local depth against the iid population value.
    Consistency(ConsistencyCmd),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WeightScheme {
    Uniform,
    Trapezoid,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// CSV file with one curve per row.
    input: PathBuf,
    /// Curves are stored in columns instead of rows.
    #[arg(long)]
    bycol: bool,
    /// The first line is a header.
    #[arg(long)]
    header: bool,
    /// The first column holds curve labels (row layout only).
    #[arg(long)]
    row_labels: bool,
    /// CSV file with the grid time points (default 1..p).
    #[arg(long)]
    grid: Option<PathBuf>,
    /// Grid weights.
    #[arg(long, value_enum, default_value = "uniform")]
    weights: WeightScheme,
    /// Center each grid point at its median and divide by its MAD.
    #[arg(long)]
    standardize: bool,
}

#[derive(Debug, Args)]
struct TauArgs {
    /// Threshold: a number, or a CSV file with one value per grid point.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "tau_prob")]
    tau: Option<String>,
    /// Threshold set to this quantile order of pairwise sup-norm distances.
    #[arg(long)]
    tau_prob: Option<f64>,
}

#[derive(Debug, Args)]
struct TauCmd {
    #[command(flatten)]
    input: InputArgs,
    /// Quantile orders in [0, 1].
    #[arg(long, value_delimiter = ',', default_values_t = [0.05, 0.1, 0.15, 0.2, 0.25, 0.3])]
    probs: Vec<f64>,
    /// Include every pairwise distance.
    #[arg(long)]
    stats: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MethodArg {
    Hr,
    Mhr,
}

impl From<MethodArg> for DepthMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Hr => DepthMethod::Hr,
            MethodArg::Mhr => DepthMethod::Mhr,
        }
    }
}

#[derive(Debug, Args)]
struct DepthCmd {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "mhr")]
    method: MethodArg,
    #[command(flatten)]
    tau: TauArgs,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write JSON instead of CSV.
    #[arg(long)]
    json: bool,
    /// Treat rows as points in R^p and use slab boxes (HR only).
    #[arg(long)]
    finite: bool,
}

#[derive(Debug, Args)]
struct DdplotCmd {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "mhr")]
    method: MethodArg,
    #[command(flatten)]
    tau: TauArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SimilarityArg {
    Hr,
    Localhr,
    Localmhr,
}

impl From<SimilarityArg> for SimilarityMethod {
    fn from(m: SimilarityArg) -> Self {
        match m {
            SimilarityArg::Hr => SimilarityMethod::Hr,
            SimilarityArg::Localhr => SimilarityMethod::LocalHr,
            SimilarityArg::Localmhr => SimilarityMethod::LocalMhr,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MatrixFormat {
    Csv,
    Binary,
}

#[derive(Debug, Args)]
struct SimilarityCmd {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "localmhr")]
    method: SimilarityArg,
    #[command(flatten)]
    tau: TauArgs,
    /// Output file (default stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: MatrixFormat,
    /// Write the Gower dissimilarity instead of the similarity.
    #[arg(long)]
    dissimilarity: bool,
    /// Compute and write this many rows at a time instead of the whole matrix.
    #[arg(long)]
    block_rows: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum WardArg {
    D,
    D2,
}

#[derive(Debug, Args)]
struct ClusterCmd {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, default_value = "localmhr")]
    method: SimilarityArg,
    #[command(flatten)]
    tau: TauArgs,
    /// Numbers of groups: a list `2,3,5` or a range `2..6` (inclusive).
    #[arg(long, default_value = "2")]
    k: String,
    /// Prefix for the output files.
    #[arg(long)]
    out_prefix: PathBuf,
    #[arg(long, value_enum, default_value = "d")]
    ward: WardArg,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum MarginalArg {
    Gaussian,
    Uniform,
}

#[derive(Debug, Args)]
struct ConsistencyCmd {
    #[arg(long, value_enum, default_value = "gaussian")]
    marginal: MarginalArg,
    /// Marginal parameters: mean,sd for gaussian or a,b for uniform.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_values_t = [0.0, 1.0])]
    params: Vec<f64>,
    /// Grid size.
    #[arg(long, default_value_t = 2)]
    p: usize,
    /// Constant value of the evaluated curve.
    #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
    y: f64,
    #[arg(long, default_value_t = 1.0)]
    tau: f64,
    #[arg(long, value_delimiter = ',', default_values_t = [100, 1000, 10000])]
    sizes: Vec<usize>,
    #[arg(long, default_value_t = 20)]
    replicates: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Print the report as JSON instead of a table.
    #[arg(long)]
    json: bool,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send)) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { 2 } else {
                let _ = write!(stdout, "{}", e.render());
                0
            };
        }
    };
    let outcome = match cli.threads {
        Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t).build() {
            Ok(pool) => pool.install(|| dispatch(&cli.command, stdout, stderr)),
            Err(e) => Err(Error::InvalidArgument(e.to_string())),
        },
        None => dispatch(&cli.command, stdout, stderr),
    };
    match outcome {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "fdepth: {e}");
            match e {
                Error::Invariant(_) => 3,
                _ => 2,
            }
        }
    }
}

fn dispatch(cmd: &Command, stdout: &mut (dyn Write + Send), stderr: &mut (dyn Write + Send)) -> Result<()> {
    match cmd {
        Command::Tau(c) => cmd_tau(c, stdout),
        Command::Depth(c) => cmd_depth(c, stdout, stderr),
        Command::Ddplot(c) => cmd_ddplot(c, stdout),
        Command::Similarity(c) => cmd_similarity(c, stdout, stderr),
        Command::Cluster(c) => cmd_cluster(c, stderr),
        Command::Consistency(c) => cmd_consistency(c, stdout),
    }
}

fn read_numbers(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .enumerate()
        .map(|(i, s)| {
            s.parse().map_err(|_| Error::Parse {
                row: 1,
                column: i + 1,
                value: s.to_string(),
            })
        })
        .collect()
}

fn load(args: &InputArgs) -> Result<FunctionalDataset> {
    let grid = match &args.grid {
        Some(path) => {
            let points = read_numbers(path)?;
            Some(match args.weights {
                WeightScheme::Uniform => Grid::uniform(points)?,
                WeightScheme::Trapezoid => Grid::trapezoidal(points)?,
            })
        }
        None => None,
    };
    let opts = LoadOptions {
        byrow: !args.bycol,
        has_header: args.header,
        row_labels: args.row_labels,
        grid,
    };
    let mut ds = load_csv(&args.input, &opts)?;
    if matches!(args.weights, WeightScheme::Trapezoid) && args.grid.is_none() {
        let points = ds.grid().points().to_vec();
        let labels = ds.labels().to_vec();
        ds = FunctionalDataset::new(Grid::trapezoidal(points)?, ds.values().to_vec(), Some(labels))?;
    }
    if args.standardize {
        ds = standardize_mad(&ds)?;
    }
    Ok(ds)
}

fn resolve_tau(args: &TauArgs, ds: &FunctionalDataset) -> Result<Option<TauFunction>> {
    let p = ds.p();
    if let Some(q) = args.tau_prob {
        let sel = select_tau(ds, &[q], false)?;
        return TauFunction::constant(sel.quantiles[0], p).map(Some);
    }
    let Some(raw) = &args.tau else {
        return Ok(None);
    };
    if let Ok(v) = raw.parse::<f64>() {
        return TauFunction::constant(v, p).map(Some);
    }
    let values = read_numbers(Path::new(raw))?;
    let tau = TauFunction::new(values)?;
    tau.check(p)?;
    Ok(Some(tau))
}

fn require_tau(args: &TauArgs, ds: &FunctionalDataset, what: &str) -> Result<TauFunction> {
    resolve_tau(args, ds)?
        .ok_or_else(|| Error::InvalidArgument(format!("{what} needs --tau or --tau-prob")))
}

fn open_out<'a>(path: Option<&PathBuf>, stdout: &'a mut dyn Write) -> Result<Box<dyn Write + 'a>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| Error::Io {
            path: p.clone(),
            source,
        })?)),
        None => Box::new(stdout),
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|source| Error::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn cmd_tau(c: &TauCmd, stdout: &mut dyn Write) -> Result<()> {
    let ds = load(&c.input)?;
    let sel = select_tau(&ds, &c.probs, c.stats)?;
    writeln!(stdout, "{}", sel.to_json()?)?;
    Ok(())
}

fn finite_depths(ds: &FunctionalDataset, tau: Option<&TauFunction>) -> Result<(DepthReport, Option<DepthReport>)> {
    let sample = PointSample::new(ds.values().to_vec(), ds.p())?;
    let wide = vec![f64::INFINITY; ds.p()];
    let global = local_depth_hr_finite_all(&sample, &sample, &wide)?;
    let global = DepthReport::new(DepthMethod::Hr, None, global);
    let local = match tau {
        Some(t) => {
            let values = local_depth_hr_finite_all(&sample, &sample, t.values())?;
            Some(DepthReport::new(DepthMethod::Hr, Some(t.clone()), values))
        }
        None => None,
    };
    Ok((global, local))
}

#[derive(Serialize)]
struct DepthOutput<'a> {
    labels: &'a [String],
    global: &'a DepthReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    local: Option<&'a DepthReport>,
}

fn cmd_depth(c: &DepthCmd, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let ds = load(&c.input)?;
    let method = DepthMethod::from(c.method);
    let tau = resolve_tau(&c.tau, &ds)?;
    let (global, local) = if c.finite {
        if method != DepthMethod::Hr {
            writeln!(stderr, "warning: --finite computes HR depth; --method ignored")?;
        }
        finite_depths(&ds, tau.as_ref())?
    } else {
        let global = depth_all(&ds, method);
        let local = tau
            .as_ref()
            .map(|t| local_depth_all(&ds, t, method))
            .transpose()?;
        (global, local)
    };
    let mut out = open_out(c.out.as_ref(), stdout)?;
    if c.json {
        let doc = DepthOutput {
            labels: ds.labels(),
            global: &global,
            local: local.as_ref(),
        };
        writeln!(out, "{}", serde_json::to_string(&doc)?)?;
    } else {
        let mut w = csv::Writer::from_writer(&mut out);
        match &local {
            Some(l) => {
                w.write_record(["label", "depth", "local_depth", "rank", "local_rank"])?;
                for i in 0..ds.n() {
                    w.write_record([
                        ds.labels()[i].clone(),
                        global.values[i].to_string(),
                        l.values[i].to_string(),
                        global.ranks[i].to_string(),
                        l.ranks[i].to_string(),
                    ])?;
                }
            }
            None => {
                w.write_record(["label", "depth", "rank"])?;
                for i in 0..ds.n() {
                    w.write_record([
                        ds.labels()[i].clone(),
                        global.values[i].to_string(),
                        global.ranks[i].to_string(),
                    ])?;
                }
            }
        }
        w.flush()?;
    }
    out.flush()?;
    Ok(())
}

fn cmd_ddplot(c: &DdplotCmd, stdout: &mut dyn Write) -> Result<()> {
    let ds = load(&c.input)?;
    let method = DepthMethod::from(c.method);
    let tau = require_tau(&c.tau, &ds, "ddplot")?;
    let global = depth_all(&ds, method);
    let local = local_depth_all(&ds, &tau, method)?;
    let mut out = open_out(c.out.as_ref(), stdout)?;
    let mut w = csv::Writer::from_writer(&mut out);
    w.write_record(["label", "depth", "local_depth"])?;
    for i in 0..ds.n() {
        w.write_record([
            ds.labels()[i].clone(),
            global.values[i].to_string(),
            local.values[i].to_string(),
        ])?;
    }
    w.flush()?;
    drop(w);
    out.flush()?;
    Ok(())
}

fn similarity_tau(
    method: SimilarityMethod,
    args: &TauArgs,
    ds: &FunctionalDataset,
    stderr: &mut dyn Write,
) -> Result<Option<TauFunction>> {
    if method.is_local() {
        require_tau(args, ds, &format!("{method} similarity")).map(Some)
    } else {
        if args.tau.is_some() || args.tau_prob.is_some() {
            writeln!(stderr, "warning: tau is ignored for HR similarity")?;
        }
        Ok(None)
    }
}

fn cmd_similarity(c: &SimilarityCmd, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<()> {
    let ds = load(&c.input)?;
    let method = SimilarityMethod::from(c.method);
    let tau = similarity_tau(method, &c.tau, &ds, stderr)?;
    let n = ds.n();
    let mut out = open_out(c.out.as_ref(), stdout)?;

    match c.block_rows {
        None => {
            let s = similarity_matrix(&ds, method, tau.as_ref())?;
            let values = if c.dissimilarity {
                gower_dissimilarity(&s)?.as_slice().to_vec()
            } else {
                s.as_slice().to_vec()
            };
            match c.format {
                MatrixFormat::Csv => write_matrix_csv(ds.labels(), &values, &mut out)?,
                MatrixFormat::Binary => write_matrix_binary(n, &values, &mut out)?,
            }
        }
        Some(block) => {
            if block == 0 {
                return Err(Error::InvalidArgument("--block-rows must be positive".into()));
            }
            let diag = similarity_diagonal(&ds, method, tau.as_ref())?;
            match c.format {
                MatrixFormat::Csv => {
                    let mut w = csv::Writer::from_writer(&mut out);
                    w.write_record(ds.labels())?;
                    w.flush()?;
                }
                MatrixFormat::Binary => write_binary_header(n, &mut out)?,
            }
            let mut start = 0;
            while start < n {
                let end = (start + block).min(n);
                let mut rows = similarity_rows(&ds, method, tau.as_ref(), start..end)?;
                if c.dissimilarity {
                    for (r, row) in rows.chunks_exact_mut(n).enumerate() {
                        let i = start + r;
                        for (j, v) in row.iter_mut().enumerate() {
                            *v = if i == j { 0.0 } else { gower_entry(diag[i], diag[j], *v)? };
                        }
                    }
                }
                match c.format {
                    MatrixFormat::Csv => {
                        let mut w = csv::Writer::from_writer(&mut out);
                        for row in rows.chunks_exact(n) {
                            w.write_record(row.iter().map(|v| v.to_string()))?;
                        }
                        w.flush()?;
                    }
                    MatrixFormat::Binary => write_binary_values(&rows, &mut out)?,
                }
                start = end;
            }
        }
    }
    out.flush()?;
    Ok(())
}

/// Parses `2,3,5` or the inclusive range `2..6`.
fn parse_k(spec: &str) -> Result<Vec<usize>> {
    let bad = || Error::InvalidArgument(format!("cannot parse k {spec:?}"));
    if let Some((lo, hi)) = spec.split_once("..") {
        let lo: usize = lo.trim().parse().map_err(|_| bad())?;
        let hi: usize = hi.trim().parse().map_err(|_| bad())?;
        if lo > hi {
            return Err(bad());
        }
        return Ok((lo..=hi).collect());
    }
    spec.split(',')
        .map(|s| s.trim().parse().map_err(|_| bad()))
        .collect()
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut s = prefix.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

fn cmd_cluster(c: &ClusterCmd, stderr: &mut dyn Write) -> Result<()> {
    let ds = load(&c.input)?;
    let ks = parse_k(&c.k)?;
    if let Some(&k) = ks.iter().find(|&&k| k < 1 || k > ds.n()) {
        return Err(Error::InvalidArgument(format!("k = {k} outside [1, {}]", ds.n())));
    }
    let method = SimilarityMethod::from(c.method);
    let tau = similarity_tau(method, &c.tau, &ds, stderr)?;
    let s = similarity_matrix(&ds, method, tau.as_ref())?;
    let d = gower_dissimilarity(&s)?;
    let variant = match c.ward {
        WardArg::D => WardVariant::D,
        WardArg::D2 => WardVariant::D2,
    };
    let dg = ward_linkage(&d, variant)?;

    let mut f = create(&with_suffix(&c.out_prefix, ".dendrogram.json"))?;
    writeln!(f, "{}", dg.to_json()?)?;
    f.flush()?;
    let mut f = create(&with_suffix(&c.out_prefix, ".dendrogram.nwk"))?;
    writeln!(f, "{}", dg.to_newick(ds.labels())?)?;
    f.flush()?;

    for k in ks {
        let labels = cut_tree(&dg, k)?;
        let sil = silhouette(&labels, &d)?;
        if let Some(w) = &sil.warning {
            writeln!(stderr, "warning: k = {k}: {w}")?;
        }
        let mut f = create(&with_suffix(&c.out_prefix, &format!(".k{k}.labels.csv")))?;
        labels.write_csv(ds.labels(), &mut f)?;
        f.flush()?;
        let mut f = create(&with_suffix(&c.out_prefix, &format!(".k{k}.silhouette.csv")))?;
        sil.write_csv(ds.labels(), &labels, &mut f)?;
        f.flush()?;
        writeln!(stderr, "k = {k}: mean silhouette {:.4}", sil.mean)?;
    }
    Ok(())
}

fn cmd_consistency(c: &ConsistencyCmd, stdout: &mut dyn Write) -> Result<()> {
    if c.params.len() != 2 {
        return Err(Error::InvalidArgument("--params takes two values".into()));
    }
    let (u, v) = (c.params[0], c.params[1]);
    let marginal = match c.marginal {
        MarginalArg::Gaussian => Marginal::Gaussian { mean: u, sd: v },
        MarginalArg::Uniform => Marginal::Uniform { a: u, b: v },
    };
    let spec = IidProcessSpec::new(marginal, c.p, c.seed)?;
    let tau = TauFunction::constant(c.tau, c.p)?;
    let y = vec![c.y; c.p];
    let report = consistency_experiment(&spec, &y, &tau, &c.sizes, c.replicates)?;
    if c.json {
        writeln!(stdout, "{}", report.to_json()?)?;
    } else {
        writeln!(
            stdout,
            "population depth {:.6} (seed {}, {} replicates)",
            report.population, report.seed, report.replicates
        )?;
        writeln!(stdout, "{:>10} {:>12} {:>12}", "n", "mean_depth", "mean_abs_err")?;
        for ((n, e), d) in report.sizes.iter().zip(&report.errors).zip(&report.estimates) {
            writeln!(stdout, "{n:>10} {d:>12.6} {e:>12.6}")?;
        }
    }
    Ok(())
}
