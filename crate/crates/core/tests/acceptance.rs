//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any fails.

mod common;

use std::time::{Duration, Instant};

use fdepth::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

struct Outcome {
    failures: Vec<String>,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Self {
            failures: Vec::new(),
            detail: String::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok && self.failures.len() < 5 {
            self.failures.push(what());
        } else if !ok {
            self.failures.push(String::new());
        }
    }

    fn budget(&mut self, elapsed: Duration, limit: Duration) {
        self.check(elapsed < limit, || format!("took {elapsed:?}, limit {limit:?}"));
    }
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cases: Vec<(Vec<f64>, f64, f64)> = (0..1000)
        .map(|_| {
            let m = rng.random_range(1..=200);
            let sample = (0..m).map(|_| dyadic(&mut rng, -10, 10)).collect();
            (sample, dyadic(&mut rng, -12, 12), dyadic(&mut rng, 0, 8))
        })
        .collect();
    let start = Instant::now();
    let mut results = Vec::with_capacity(cases.len());
    for (sample, x, tau) in &cases {
        let ps = PointSample::univariate(sample.clone()).unwrap();
        let h = local_halfspace_depth_1d(*x, &ps, *tau).unwrap();
        let f = local_depth_hr_finite(&[*x], &ps, &[*tau]).unwrap();
        results.push((h, f));
    }
    out.budget(start.elapsed(), Duration::from_secs(1));
    for ((sample, x, tau), (h, f)) in cases.iter().zip(results) {
        out.check(h == f, || format!("x={x} tau={tau}: halfspace {h} vs slab {f}"));
        let o = halfspace_1d(*x, sample, *tau);
        out.check(h == o, || format!("x={x} tau={tau}: {h} vs oracle {o}"));
    }
    out.detail = "1000 triples, exact".into();
    out
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for case in 0..500 {
        let p = 1 + case % 4;
        let m = rng.random_range(1..=150);
        let rows: Vec<Vec<f64>> = (0..m)
            .map(|_| (0..p).map(|_| dyadic(&mut rng, -3, 3)).collect())
            .collect();
        let x: Vec<f64> = (0..p).map(|_| dyadic(&mut rng, -3, 3)).collect();
        let tau: Vec<f64> = (0..p).map(|_| dyadic(&mut rng, 0, 3)).collect();
        let sample = PointSample::from_rows(&rows).unwrap();
        for side in [Side::Lower, Side::Upper] {
            let ie = slab_region_prob_ie(&x, &sample, &tau, side).unwrap();
            let direct = slab_region_prob_direct(&x, &sample, &tau, side).unwrap();
            let oracle = box_prob(&x, &rows, &tau, side == Side::Upper);
            worst = worst.max((ie - direct).abs());
            out.check((ie - direct).abs() <= 1e-12, || {
                format!("case {case} {side:?}: ie {ie} vs direct {direct}")
            });
            out.check(direct == oracle, || {
                format!("case {case} {side:?}: direct {direct} vs oracle {oracle}")
            });
        }
    }
    out.budget(start.elapsed(), Duration::from_secs(5));
    out.detail = format!("500 instances, p in 1..=4, max |ie - direct| = {worst:e}");
    out
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut checks = 0usize;
    for case in 0..200 {
        let n = rng.random_range(1..=50);
        let p = rng.random_range(1..=30);
        let curves = tied_curves(&mut rng, n, p);
        let ds = dataset(&curves);
        let (lo, hi) = ds.value_range();
        let mut queries = curves.clone();
        queries.push((0..p).map(|_| dyadic(&mut rng, -3, 3)).collect());
        for (qi, y) in queries.iter().enumerate() {
            let global = depth_hr(y, &ds).unwrap();
            let dup = duplicate_fraction(y, &curves);
            let t1: Vec<f64> = (0..p).map(|_| dyadic(&mut rng, 0, 3)).collect();
            let t2: Vec<f64> = t1.iter().map(|t| t + dyadic(&mut rng, 0, 2)).collect();
            let ld1 = local_depth_hr(y, &ds, &TauFunction::new(t1).unwrap()).unwrap();
            let ld2 = local_depth_hr(y, &ds, &TauFunction::new(t2).unwrap()).unwrap();
            let full = TauFunction::constant(hi - lo, p).unwrap();
            let at_range = local_depth_hr(y, &ds, &full).unwrap();
            let zero = TauFunction::constant(0.0, p).unwrap();
            let at_zero = local_depth_hr(y, &ds, &zero).unwrap();
            out.check(ld1 <= ld2, || format!("case {case}: monotonicity {ld1} > {ld2}"));
            for ld in [ld1, ld2] {
                out.check(dup <= ld && ld <= global, || {
                    format!("case {case}: sandwich {dup} <= {ld} <= {global}")
                });
            }
            out.check(at_range == global, || {
                format!("case {case}: tau=range gives {at_range}, global {global}")
            });
            if qi < n {
                let mhr_range = local_depth_mhr(y, &ds, &full).unwrap();
                out.check(mhr_range == depth_mhr(y, &ds).unwrap(), || {
                    format!("case {case}: MHR at tau=range differs from global")
                });
            }
            out.check(at_zero == dup, || {
                format!("case {case}: tau=0 gives {at_zero}, duplicates {dup}")
            });
            checks += 4 + usize::from(qi < n);
        }
    }
    out.detail = format!("200 datasets, {checks} checks");
    out
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst: f64 = 0.0;
    for case in 0..100 {
        let n = rng.random_range(2..=40);
        let p = rng.random_range(1..=25);
        let ds = dataset(&smooth_curves(&mut rng, n, p));
        let a: Vec<f64> = if case % 2 == 0 {
            vec![rng.random_range(0.1..10.0)]
        } else {
            (0..p).map(|_| rng.random_range(0.1..10.0)).collect()
        };
        let b: Vec<f64> = (0..p).map(|_| rng.random_range(-5.0..5.0)).collect();
        let (lo, hi) = ds.value_range();
        let tau = TauFunction::new((0..p).map(|_| rng.random_range(0.0..hi - lo)).collect())
            .unwrap();
        let moved = affine_transform(&ds, &a, &b).unwrap();
        let moved_tau = tau.rescaled(&a).unwrap();
        for method in [DepthMethod::Hr, DepthMethod::Mhr] {
            let before = local_depth_all(&ds, &tau, method).unwrap().values;
            let after = local_depth_all(&moved, &moved_tau, method).unwrap().values;
            let diff = before
                .iter()
                .zip(&after)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max);
            worst = worst.max(diff);
            out.check(diff <= 1e-12, || format!("case {case} {method}: max diff {diff}"));
        }
    }
    out.detail = format!("100 instances, max diff {worst:e}");
    out
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for case in 0..200 {
        let n = rng.random_range(2..=25);
        let p = rng.random_range(1..=20);
        let curves = if case % 2 == 0 {
            tied_curves(&mut rng, n, p)
        } else {
            smooth_curves(&mut rng, n, p)
        };
        let ds = dataset(&curves);
        let (lo, hi) = ds.value_range();
        let tau = TauFunction::new(
            (0..p)
                .map(|_| rng.random_range(0.0..=(hi - lo).max(0.25)))
                .collect(),
        )
        .unwrap();
        for (method, depth) in [
            (SimilarityMethod::Hr, DepthMethod::Hr),
            (SimilarityMethod::LocalHr, DepthMethod::Hr),
            (SimilarityMethod::LocalMhr, DepthMethod::Mhr),
        ] {
            let s = similarity_matrix(&ds, method, Some(&tau)).unwrap();
            let ld = if method.is_local() {
                local_depth_all(&ds, &tau, depth).unwrap().values
            } else {
                depth_all(&ds, depth).values
            };
            out.check(s.diagonal() == ld, || format!("case {case} {method}: diagonal"));
            for i in 0..n {
                for j in 0..n {
                    let v = s.get(i, j);
                    out.check(v <= ld[i].min(ld[j]), || {
                        format!("case {case} {method}: s({i},{j}) = {v} above depths")
                    });
                }
            }
            match gower_dissimilarity(&s) {
                Ok(d) => {
                    for i in 0..n {
                        out.check(d.get(i, i) == 0.0, || format!("case {case}: diagonal"));
                        for j in 0..n {
                            let v = d.get(i, j);
                            out.check(v >= 0.0 && v == d.get(j, i), || {
                                format!("case {case}: d({i},{j}) = {v}")
                            });
                        }
                    }
                }
                Err(e) => out.check(false, || format!("case {case} {method}: gower {e}")),
            }
        }
    }
    out.detail = "200 datasets, HR / localHR / localMHR".into();
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    let spec = IidProcessSpec::gaussian(2, 6).unwrap();
    let tau = TauFunction::constant(1.0, 2).unwrap();
    let start = Instant::now();
    let report = consistency_experiment(&spec, &[0.0, 0.0], &tau, &[10_000], 20).unwrap();
    out.budget(start.elapsed(), Duration::from_secs(30));
    let expected = (normal_cdf(1.0) - 0.5).powi(2);
    out.check((report.population - expected).abs() < 1e-10, || {
        format!("population {} vs oracle {expected}", report.population)
    });
    out.check((report.population - 0.11652).abs() < 5e-6, || {
        format!("population {} vs 0.11652", report.population)
    });
    let mae = report.errors[0];
    out.check(mae <= 0.02, || format!("mean absolute error {mae}"));
    out.detail = format!(
        "population {:.7}, n=10000 x 20 replicates, MAE {mae:.5}",
        report.population
    );
    out
}

fn criterion_7() -> Outcome {
    let mut out = Outcome::new();
    let start = Instant::now();
    let mut worst_ari = f64::INFINITY;
    let mut worst_sil = f64::INFINITY;
    for seed in 0..10 {
        let (ds, groups) = fdepth::synthetic::two_regimes(50, 50, 4.0, 0.3, seed).unwrap();
        let q = select_tau(&ds, &[0.2], false).unwrap().quantiles[0];
        let tau = TauFunction::constant(q, ds.p()).unwrap();
        let s = similarity_matrix(&ds, SimilarityMethod::LocalMhr, Some(&tau)).unwrap();
        let d = gower_dissimilarity(&s).unwrap();
        let dg = ward_linkage(&d, WardVariant::D).unwrap();
        let labels = cut_tree(&dg, 2).unwrap();
        let ari = adjusted_rand_index(&labels.labels, &groups).unwrap();
        let sil = silhouette(&labels, &d).unwrap().mean;
        worst_ari = worst_ari.min(ari);
        worst_sil = worst_sil.min(sil);
        out.check(ari >= 0.9, || format!("seed {seed}: ARI {ari}"));
        out.check(sil >= 0.3, || format!("seed {seed}: silhouette {sil}"));
    }
    out.budget(start.elapsed(), Duration::from_secs(10));
    out.detail = format!("10 seeds, min ARI {worst_ari:.3}, min silhouette {worst_sil:.3}");
    out
}

fn matrix_bytes(ds: &FunctionalDataset, tau: &TauFunction, threads: usize) -> Vec<u8> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap();
    let s = pool
        .install(|| similarity_matrix(ds, SimilarityMethod::LocalMhr, Some(tau)))
        .unwrap();
    let mut bytes = Vec::new();
    fdepth::similarity::write_matrix_binary(s.n(), s.as_slice(), &mut bytes).unwrap();
    bytes
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::new();
    let ds = fdepth::synthetic::daily_profiles(1420, 96, 8).unwrap();
    let q = select_tau(&ds, &[0.2], false).unwrap().quantiles[0];
    let tau = TauFunction::constant(q, ds.p()).unwrap();

    let start = Instant::now();
    for method in [DepthMethod::Hr, DepthMethod::Mhr] {
        depth_all(&ds, method);
        local_depth_all(&ds, &tau, method).unwrap();
    }
    let depth_time = start.elapsed();
    out.budget(depth_time, Duration::from_secs(5));

    let start = Instant::now();
    let single = matrix_bytes(&ds, &tau, 1);
    let matrix_time = start.elapsed();
    out.budget(matrix_time, Duration::from_secs(600));
    let multi = matrix_bytes(&ds, &tau, 4);
    out.check(single == multi, || "1-thread and 4-thread matrices differ".into());
    out.detail = format!(
        "1420x96: depths {:.2}s, localMHR matrix {:.1}s (1 thread), {} cores available",
        depth_time.as_secs_f64(),
        matrix_time.as_secs_f64(),
        std::thread::available_parallelism().map_or(1, |n| n.get())
    );
    out
}

fn criterion_9() -> Outcome {
    let mut out = Outcome::new();
    let d = DissimilarityMatrix::from_condensed(3, &[1.0, 5.0, 5.0]).unwrap();
    let dg = ward_linkage(&d, WardVariant::D).unwrap();
    let heights: Vec<f64> = dg.merges.iter().map(|m| m.height).collect();
    out.check(heights == [1.0, 19.0 / 3.0], || format!("heights {heights:?}"));
    out.check(heights == ward_heights(3, d.as_slice()), || "oracle heights".into());
    let labels = cut_tree(&dg, 2).unwrap();
    out.check(labels.labels == [1, 1, 2], || format!("labels {:?}", labels.labels));
    let sil = silhouette(&labels, &d).unwrap();
    out.check(sil.widths == [0.8, 0.8, 0.0], || format!("widths {:?}", sil.widths));
    out.detail = "heights [1, 19/3], labels [1, 1, 2], widths [0.8, 0.8, 0]".into();
    out
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("p=1 slab depth equals local halfspace depth", criterion_1),
        ("inclusion-exclusion equals direct counting", criterion_2),
        ("monotonicity, sandwich and limits in tau", criterion_3),
        ("affine invariance of local depths", criterion_4),
        ("similarity identities and Gower", criterion_5),
        ("Monte Carlo consistency", criterion_6),
        ("two-regime clustering recovery", criterion_7),
        ("scale benchmark", criterion_8),
        ("Ward / cut / silhouette hand example", criterion_9),
    ];
    let filter: Vec<String> = std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let id = format!("{}", i + 1);
        if !filter.is_empty() && !filter.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let status = if outcome.failures.is_empty() { "PASS" } else { "FAIL" };
        println!(
            "criterion {id} {status}: {name} [{}] ({:.2}s)",
            outcome.detail,
            start.elapsed().as_secs_f64()
        );
        if !outcome.failures.is_empty() {
            failed += 1;
            println!("    {} violations", outcome.failures.len());
            for f in outcome.failures.iter().filter(|f| !f.is_empty()) {
                println!("    {f}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
