//! RA-EA-IE with a custom initial-population mix, with k-means and with
//! spectral clustering behind the seeds.
//!
//!     cargo run --release --example ensemble -- [mix]
//!
//! `mix` is five fractions: random, clustering, mutated clustering, RA-IE,
//! mutated RA-IE (default 0.2 each).

use workload_balance::clustering::Initializer;
use workload_balance::io::{generate_instance, GeneratorSpec};
use workload_balance::solvers::{solve_ra_ea_ie, EAConfig, SeedMix};

fn main() -> workload_balance::Result<()> {
    let mix: SeedMix = match std::env::args().nth(1) {
        Some(s) => s.parse()?,
        None => SeedMix::default(),
    };
    let instance = generate_instance(&GeneratorSpec::uniform(392, 12, 1))?;
    println!("population sources: {:?}", mix.counts(40));
    for init in [Initializer::Kmeans, Initializer::Spectral] {
        let r = solve_ra_ea_ie(&instance, &EAConfig::default().with_seed(3), &mix, init)?;
        let first = r.history[0];
        println!(
            "{:<12} generation 0 best {first:>8.2} s -> final {:>8.2} s ({} generations, {:.2} s)",
            r.algorithm,
            r.fitness(),
            r.history.len() - 1,
            r.wall_time_s
        );
    }
    Ok(())
}
