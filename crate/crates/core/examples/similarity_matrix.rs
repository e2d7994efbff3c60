//! Pairwise depth similarities and their Gower dissimilarities.
//!
//! ```text
//! cargo run --example similarity_matrix [out.bin]
//! ```
//!
//! With an output path, the dissimilarity matrix is also written in the
//! binary matrix format and read back.

use std::fs::File;

use fdepth::similarity::{read_matrix_binary, write_matrix_binary};
use fdepth::{
    gower_dissimilarity, local_depth_all, select_tau, similarity_matrix, synthetic, DepthMethod,
    SimilarityMethod, TauFunction,
};

fn main() -> fdepth::Result<()> {
    let (ds, _) = synthetic::two_regimes(10, 25, 4.0, 0.3, 6)?;
    let q = select_tau(&ds, &[0.2], false)?.quantiles[0];
    let tau = TauFunction::constant(q, ds.p())?;

    let s = similarity_matrix(&ds, SimilarityMethod::LocalMhr, Some(&tau))?;
    let depths = local_depth_all(&ds, &tau, DepthMethod::Mhr)?;
    assert_eq!(s.diagonal(), depths.values);

    let d = gower_dissimilarity(&s)?;
    let n = d.n();
    let mean = |pairs: &[(usize, usize)]| {
        pairs.iter().map(|&(i, j)| d.get(i, j)).sum::<f64>() / pairs.len() as f64
    };
    let within: Vec<_> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| (i < 10) == (j < 10))
        .collect();
    let between: Vec<_> = (0..10).flat_map(|i| (10..n).map(move |j| (i, j))).collect();
    println!("tau {q:.3}");
    println!("mean dissimilarity within groups  {:.4}", mean(&within));
    println!("mean dissimilarity between groups {:.4}", mean(&between));

    if let Some(path) = std::env::args().nth(1) {
        write_matrix_binary(n, d.as_slice(), File::create(&path)?)?;
        let (m, values) = read_matrix_binary(File::open(&path)?)?;
        assert_eq!((m, values.as_slice()), (n, d.as_slice()));
        println!("wrote {n}x{n} matrix to {path}");
    }
    Ok(())
}
