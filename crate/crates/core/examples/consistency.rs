//! Monte Carlo check that sample local depth converges to its population
//! value for an iid Gaussian process, and that the sample maximizer over a
//! family of constant curves settles on the population maximizer.

use fdepth::{consistency_experiment, maximizer_experiment, IidProcessSpec, TauFunction};

fn main() -> fdepth::Result<()> {
    let spec = IidProcessSpec::gaussian(2, 42)?;
    let tau = TauFunction::constant(1.0, 2)?;
    let sizes = [100, 1_000, 10_000];

    let report = consistency_experiment(&spec, &[0.0, 0.0], &tau, &sizes, 20)?;
    println!("population local depth {:.6}", report.population);
    println!("{:>7} {:>10} {:>10}", "n", "estimate", "MAE");
    for ((n, e), err) in report.sizes.iter().zip(&report.estimates).zip(&report.errors) {
        println!("{n:>7} {e:>10.5} {err:>10.5}");
    }

    let candidates: Vec<Vec<f64>> = [-1.0, -0.5, 0.0, 0.5, 1.0]
        .iter()
        .map(|&c| vec![c; 2])
        .collect();
    let max = maximizer_experiment(&spec, &candidates, &tau, &sizes, 20)?;
    println!("population maximizer: constant {}", [-1.0, -0.5, 0.0, 0.5, 1.0][max.population_argmax]);
    for ((n, hit), sup) in max.sizes.iter().zip(&max.hit_rates).zip(&max.uniform_errors) {
        println!("{n:>7} hit rate {hit:.2}, sup error {sup:.5}");
    }
    Ok(())
}
