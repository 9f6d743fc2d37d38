//! Exhaustive optimum of a tiny instance next to the heuristic solvers.

use workload_balance::bench::{brute_force_optimum, exact_evaluation};
use workload_balance::io::{generate_instance, GeneratorSpec};
use workload_balance::solvers::{solve, Algorithm, EAConfig, SeedMix};

fn main() -> workload_balance::Result<()> {
    let instance = generate_instance(&GeneratorSpec::uniform(7, 2, 42))?;
    let (best, optimum) = brute_force_optimum(&instance)?;
    println!("optimum {:.3} s with {:?}", optimum.fitness, best.assignment());

    for algorithm in [Algorithm::RaIe, Algorithm::EaIe, Algorithm::RaEaIe(Default::default())] {
        let r = solve(&instance, algorithm, &EAConfig::default().with_seed(42), &SeedMix::default())?;
        let exact = exact_evaluation(&instance, &r.best_solution)?;
        println!(
            "{:<10} {:.3} s (exact routes {:.3} s), {:.2}x optimum",
            r.algorithm,
            r.fitness(),
            exact.fitness,
            r.fitness() / optimum.fitness
        );
    }

    let too_big = generate_instance(&GeneratorSpec::uniform(12, 3, 1))?;
    if let Err(e) = brute_force_optimum(&too_big) {
        println!("12 points: {e}");
    }
    Ok(())
}
