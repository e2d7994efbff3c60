//! Choosing the locality threshold τ from pairwise sup-norm distances.
//!
//! ```text
//! cargo run --example tau_selection [curves.csv]
//! ```

use fdepth::{load_csv, select_tau, synthetic, LoadOptions};

fn main() -> fdepth::Result<()> {
    let ds = match std::env::args().nth(1) {
        Some(path) => load_csv(path, &LoadOptions::default())?,
        None => synthetic::daily_profiles(200, 24, 1)?,
    };
    let probs = [0.05, 0.1, 0.2, 0.3, 0.5];
    let sel = select_tau(&ds, &probs, true)?;
    let pairs = sel.stats.as_ref().map_or(0, Vec::len);
    println!("{} curves, {} grid points, {pairs} pairs", ds.n(), ds.p());
    for (p, q) in sel.probs.iter().zip(&sel.quantiles) {
        println!("  {:>4.0}% quantile  tau = {q:.4}", p * 100.0);
    }
    Ok(())
}
