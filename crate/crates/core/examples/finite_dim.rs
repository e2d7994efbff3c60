//! Local half-region depth of points in R^p, checked against the
//! inclusion–exclusion form and, on the line, the local halfspace depth.

use fdepth::{
    local_depth_hr_finite, local_halfspace_depth_1d, slab_region_prob_direct,
    slab_region_prob_ie, PointSample, Side,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> fdepth::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let rows: Vec<Vec<f64>> = (0..500)
        .map(|_| (0..3).map(|_| rng.random_range(-2.0..2.0)).collect())
        .collect();
    let sample = PointSample::from_rows(&rows)?;
    let x = [0.2, -0.1, 0.4];
    let tau = [0.8, 0.8, 0.8];
    for side in [Side::Lower, Side::Upper] {
        let direct = slab_region_prob_direct(&x, &sample, &tau, side)?;
        let ie = slab_region_prob_ie(&x, &sample, &tau, side)?;
        println!("{side:?} box: direct {direct:.4}, inclusion-exclusion {ie:.4}");
    }
    println!("local depth {:.4}", local_depth_hr_finite(&x, &sample, &tau)?);

    let line = PointSample::univariate(rows.iter().map(|r| r[0]).collect())?;
    for t in [0.25, 0.5, 1.0] {
        let slab = local_depth_hr_finite(&[0.0], &line, &[t])?;
        let half = local_halfspace_depth_1d(0.0, &line, t)?;
        println!("p = 1, tau = {t}: slab {slab:.4}, halfspace {half:.4}");
    }
    Ok(())
}
