//! Runs every solver once on a synthetic day and prints fitness and time.
//!
//!     cargo run --release --example compare_solvers -- [n_points] [n_workers] [seed]

use std::env;

use workload_balance::io::{generate_instance, GeneratorSpec};
use workload_balance::solvers::{solve, Algorithm, EAConfig, SeedMix};

fn main() -> workload_balance::Result<()> {
    let args: Vec<u64> = env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let n_points = args.first().copied().unwrap_or(240) as usize;
    let n_workers = args.get(1).copied().unwrap_or(12) as usize;
    let seed = args.get(2).copied().unwrap_or(1);

    let instance = generate_instance(&GeneratorSpec::uniform(n_points, n_workers, seed))?;
    let config = EAConfig::default().with_seed(seed);
    println!("{} points, {} workers, seed {seed}", n_points, n_workers);
    println!("{:<12} {:>12} {:>14} {:>10} {:>8}", "algorithm", "fitness (s)", "total (s)", "wall (s)", "evals");
    for algorithm in Algorithm::ALL {
        let r = solve(&instance, algorithm, &config, &SeedMix::default())?;
        println!(
            "{:<12} {:>12.2} {:>14.2} {:>10.3} {:>8}",
            r.algorithm,
            r.fitness(),
            r.best_evaluation.total_time,
            r.wall_time_s,
            r.evaluations
        );
    }
    Ok(())
}
