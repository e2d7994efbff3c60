//! Reading curves from CSV, validating, standardizing, and writing depth
//! reports. Uses a temporary file so it runs without inputs.
//!
//! ```text
//! cargo run --example csv_pipeline [curves.csv]
//! ```

use std::io;

use fdepth::{
    depth_all, load_csv, standardize_mad, synthetic, validate, write_csv, DepthMethod,
    LoadOptions,
};

fn main() -> fdepth::Result<()> {
    let path = match std::env::args().nth(1) {
        Some(p) => p.into(),
        None => {
            let path = std::env::temp_dir().join("fdepth_example_curves.csv");
            let ds = synthetic::daily_profiles(12, 8, 9)?;
            write_csv(&ds, std::fs::File::create(&path)?)?;
            path
        }
    };
    let ds = load_csv(&path, &LoadOptions::default())?;
    let problems = validate(&ds);
    println!("{}: {} curves x {} points, {} problems", path.display(), ds.n(), ds.p(), problems.len());

    let standardized = standardize_mad(&ds)?;
    let report = depth_all(&standardized, DepthMethod::Mhr);
    report.write_csv(standardized.labels(), io::stdout())?;
    Ok(())
}
