//! DD-plot data: local depth against global depth for each curve.
//!
//! With two regimes in the sample, central curves of each regime have
//! high local depth but only middling global depth, so the cloud departs
//! from the diagonal. Writes `label,depth,local_depth` CSV to stdout.

use std::io;

use fdepth::{depth_all, local_depth_all, select_tau, synthetic, DepthMethod, TauFunction};

fn main() -> fdepth::Result<()> {
    let (ds, _) = synthetic::two_regimes(40, 30, 3.0, 0.3, 3)?;
    let q = select_tau(&ds, &[0.2], false)?.quantiles[0];
    let tau = TauFunction::constant(q, ds.p())?;
    let global = depth_all(&ds, DepthMethod::Mhr);
    let local = local_depth_all(&ds, &tau, DepthMethod::Mhr)?;

    let mut out = csv::Writer::from_writer(io::stdout());
    out.write_record(["label", "depth", "local_depth"])?;
    for i in 0..ds.n() {
        out.write_record([
            ds.labels()[i].clone(),
            global.values[i].to_string(),
            local.values[i].to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}
