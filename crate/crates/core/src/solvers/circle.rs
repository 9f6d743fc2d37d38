//! EA-CE: the generational loop over circle-encoded solutions.

use std::time::Instant;

use rand::Rng as _;

use super::evolution::evolve;
use super::operators::{
    crossover_circle_external, crossover_circle_internal, mutate_circle_hard, mutate_circle_smooth,
    random_circle, random_mask,
};
use super::{EAConfig, SolveResult};
use crate::error::Result;
use crate::model::{CircleSolution, Instance};
use crate::objective::Evaluator;
use crate::rng::{derive_seed, rng_from};

/// Initial and hard-mutation radii are drawn from `(0, RADIUS_FRAC * diag]`.
const RADIUS_FRAC: f64 = 0.5;

/// Each child comes from an external (whole circle) or internal (per
/// scalar) crossover with equal odds, then a smooth mutation per scalar and a
/// hard mutation per individual. Fitness is evaluated on the decoded
/// assignment.
pub fn solve_ea_ce(instance: &Instance, config: &EAConfig) -> Result<SolveResult> {
    config.validate()?;
    let started = Instant::now();
    let bounds = instance.bounds();
    let diag = match bounds.diagonal() {
        d if d > 0.0 => d,
        _ => 1.0,
    };
    let r_max = RADIUS_FRAC * diag;
    let sigma = config.smooth_sigma_frac * diag;
    let n_workers = instance.n_workers();

    let mut init_rng = rng_from(derive_seed(config.rng_seed, 1));
    let initial: Vec<CircleSolution> = (0..config.population_size)
        .map(|_| {
            CircleSolution::new(
                (0..n_workers)
                    .map(|_| random_circle(&bounds, r_max, &mut init_rng))
                    .collect(),
            )
        })
        .collect();

    let mut ev = Evaluator::new(instance);
    let mut rng = rng_from(derive_seed(config.rng_seed, 3));
    let outcome = evolve(
        config,
        started,
        initial,
        &mut rng,
        |genome: &CircleSolution| {
            let (decoded, evaluation) = ev.evaluate_circles(genome)?;
            Ok((decoded.assignment, evaluation))
        },
        |p1, p2, rng| {
            let child = if rng.random_bool(0.5) {
                crossover_circle_external(p1, p2, &random_mask(rng, n_workers, config.crossover_frac))?
            } else {
                crossover_circle_internal(p1, p2, &random_mask(rng, 3 * n_workers, config.crossover_frac))?
            };
            let child = mutate_circle_smooth(&child, config.smooth_mutation_prob, sigma, rng)?;
            Ok(mutate_circle_hard(&child, config.mutation_prob, &bounds, r_max, rng))
        },
    )?;

    Ok(SolveResult {
        algorithm: "ea-ce".into(),
        best_solution: outcome.best.assignment,
        circles: Some(outcome.best.genome),
        best_evaluation: outcome.best.evaluation,
        history: outcome.history,
        wall_time_s: started.elapsed().as_secs_f64(),
        evaluations: ev.evaluations(),
    })
}
