//! Global half-region and modified half-region depths, and the ranking
//! they induce. Prints the three deepest and three most outlying curves.

use fdepth::{depth_all, synthetic, DepthMethod};

fn main() -> fdepth::Result<()> {
    let ds = synthetic::daily_profiles(300, 48, 2)?;
    for method in [DepthMethod::Hr, DepthMethod::Mhr] {
        let report = depth_all(&ds, method);
        let mut order: Vec<usize> = (0..ds.n()).collect();
        order.sort_by_key(|&i| report.ranks[i]);
        let show = |i: &usize| format!("{}({:.3})", ds.labels()[*i], report.values[*i]);
        let top: Vec<String> = order.iter().take(3).map(show).collect();
        let bottom: Vec<String> = order.iter().rev().take(3).map(show).collect();
        println!("{method:>3} deepest: {}", top.join(" "));
        println!("{method:>3} outlying: {}", bottom.join(" "));
    }

    Ok(())
}
