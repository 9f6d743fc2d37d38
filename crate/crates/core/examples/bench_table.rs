//! Repeated seeded runs on one synthetic instance, summarized as the
//! min / max / mean / std table.
//!
//!     cargo run --release --example bench_table -- [n_points] [n_workers] [runs] [algos]
//!
//! `algos` is a comma-separated list of solver labels.

use std::env;

use workload_balance::bench::{parse_algorithms, run_experiment, StatsTable};
use workload_balance::io::{generate_instance, GeneratorSpec};
use workload_balance::solvers::{EAConfig, SeedMix};

fn main() -> workload_balance::Result<()> {
    let args: Vec<String> = env::args().skip(1).collect();
    let num = |i: usize, default: usize| args.get(i).and_then(|a| a.parse().ok()).unwrap_or(default);
    let (n_points, n_workers, runs) = (num(0, 240), num(1, 12), num(2, 10));
    let labels: Vec<&str> = args
        .get(3)
        .map(|s| s.split(',').collect())
        .unwrap_or_else(|| vec!["ea-ie", "ea-ce", "ra-ie", "ra-ce", "ra-ea-ie"]);

    let instance = generate_instance(&GeneratorSpec::uniform(n_points, n_workers, 1))?;
    let algorithms = parse_algorithms(&labels)?;
    let stats = run_experiment(&instance, &algorithms, runs, 0, &EAConfig::default(), &SeedMix::default())?;
    println!("{} points, {} workers, {runs} runs per algorithm\n", n_points, n_workers);
    print!("{}", StatsTable(&stats));
    Ok(())
}
