//! How local depth responds to the threshold τ.
//!
//! Small τ counts only near duplicates; τ at least the data range gives
//! the global depth back exactly.

use fdepth::{depth_hr, local_depth_hr, local_depth_mhr, synthetic, TauFunction};

fn main() -> fdepth::Result<()> {
    let ds = synthetic::daily_profiles(150, 24, 4)?;
    let y = ds.curve(0).to_vec();
    let (lo, hi) = ds.value_range();
    println!("curve {} of {}, value range {:.2}..{:.2}", ds.labels()[0], ds.n(), lo, hi);
    println!("{:>8} {:>10} {:>10}", "tau", "local HR", "local MHR");
    for tau in [0.0, 1.0, 2.0, 4.0, 8.0, hi - lo] {
        let t = TauFunction::constant(tau, ds.p())?;
        println!(
            "{tau:>8.2} {:>10.4} {:>10.4}",
            local_depth_hr(&y, &ds, &t)?,
            local_depth_mhr(&y, &ds, &t)?
        );
    }
    println!("global HR {:.4}", depth_hr(&y, &ds)?);
    Ok(())
}
