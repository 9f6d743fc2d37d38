use std::time::Instant;

use super::SolveResult;
use crate::clustering::{kmeans, spectral_cluster, Initializer, DEFAULT_MAX_ITERS};
use crate::error::Result;
use crate::model::Instance;
use crate::objective::Evaluator;

/// Uses the raw cluster labels as the assignment, cluster `c` to worker `c`.
pub fn solve_clustering(instance: &Instance, initializer: Initializer, rng_seed: u64) -> Result<SolveResult> {
    let started = Instant::now();
    let positions = instance.positions();
    let k = instance.n_workers();
    let clusters = match initializer {
        Initializer::Kmeans => kmeans(&positions, k, rng_seed, DEFAULT_MAX_ITERS)?,
        Initializer::Spectral => spectral_cluster(&positions, k, rng_seed)?,
    };
    let assignment = clusters.to_assignment();
    let mut ev = Evaluator::new(instance);
    let best_evaluation = ev.evaluate(&assignment)?;
    Ok(SolveResult {
        algorithm: initializer.to_string(),
        best_solution: assignment,
        circles: None,
        history: vec![best_evaluation.fitness],
        best_evaluation,
        wall_time_s: started.elapsed().as_secs_f64(),
        evaluations: ev.evaluations(),
    })
}
