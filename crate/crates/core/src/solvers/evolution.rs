//! Generational loop shared by the evolutionary solvers: truncation
//! selection keeps the best fraction, size-2 tournaments among the
//! survivors pick parents, offspring refill the population.

use std::collections::HashSet;
use std::time::Instant;

use rand::Rng as _;

use super::EAConfig;
use crate::error::Result;
use crate::model::{Evaluation, IntegerSolution};
use crate::rng::Rng;

pub(crate) struct Scored<G> {
    pub genome: G,
    pub assignment: IntegerSolution,
    pub evaluation: Evaluation,
}

impl<G> Scored<G> {
    fn fitness(&self) -> f64 {
        self.evaluation.fitness
    }
}

pub(crate) struct Outcome<G> {
    pub best: Scored<G>,
    pub history: Vec<f64>,
}

/// Size-2 tournament over the first `survivors` ranks. The population is
/// sorted, so the lower rank wins.
fn tournament(survivors: usize, rng: &mut Rng) -> usize {
    let a = rng.random_range(0..survivors);
    let b = rng.random_range(0..survivors);
    a.min(b)
}

fn sort<G>(population: &mut [Scored<G>]) {
    population.sort_by(|a, b| a.fitness().total_cmp(&b.fitness()));
}

/// Truncation selection over a sorted population. Survivors are the best
/// individuals with distinct assignments; clones only fill slots left when
/// there are not enough distinct ones. Without this the population collapses
/// onto copies of one individual and crossover stops exploring.
fn select<G>(population: Vec<Scored<G>>, survivors: usize) -> Vec<Scored<G>> {
    let mut seen = HashSet::new();
    let (mut kept, clones): (Vec<_>, Vec<_>) = population
        .into_iter()
        .partition(|s| seen.insert(s.assignment.clone()));
    kept.truncate(survivors);
    let missing = survivors - kept.len().min(survivors);
    kept.extend(clones.into_iter().take(missing));
    sort(&mut kept);
    kept
}

/// Runs the loop until `max_generations` or the time budget (measured from
/// `started`) is exhausted, or a perfectly balanced individual appears.
/// `score` maps a genome to its assignment and evaluation; `breed` produces
/// one mutated child from two parents.
pub(crate) fn evolve<G: Clone>(
    config: &EAConfig,
    started: Instant,
    initial: Vec<G>,
    rng: &mut Rng,
    mut score: impl FnMut(&G) -> Result<(IntegerSolution, Evaluation)>,
    mut breed: impl FnMut(&G, &G, &mut Rng) -> Result<G>,
) -> Result<Outcome<G>> {
    let mut population = initial
        .into_iter()
        .map(|genome| {
            let (assignment, evaluation) = score(&genome)?;
            Ok(Scored {
                genome,
                assignment,
                evaluation,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    sort(&mut population);

    let n = population.len();
    let survivors = ((config.survival_frac * n as f64).ceil() as usize).clamp(1, n);
    let mut history = vec![population[0].fitness()];

    for _ in 0..config.max_generations {
        if population[0].fitness() == 0.0 || started.elapsed().as_secs_f64() >= config.time_budget_s {
            break;
        }
        population = select(population, survivors);
        while population.len() < n {
            let p1 = tournament(survivors, rng);
            let p2 = tournament(survivors, rng);
            let child = breed(&population[p1].genome, &population[p2].genome, rng)?;
            let (assignment, evaluation) = score(&child)?;
            population.push(Scored {
                genome: child,
                assignment,
                evaluation,
            });
        }
        sort(&mut population);
        history.push(population[0].fitness());
    }

    let best = population.swap_remove(0);
    Ok(Outcome { best, history })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::TimeBreakdown;

    fn scored(a: Vec<usize>, fitness: f64) -> Scored<()> {
        let per_worker = vec![TimeBreakdown::default(), TimeBreakdown::from_components(0.0, fitness, 0.0, 0.0, 0.0)];
        Scored {
            genome: (),
            assignment: IntegerSolution::new(a),
            evaluation: Evaluation::from_breakdowns(per_worker),
        }
    }

    #[test]
    fn selection_prefers_distinct_assignments() {
        let pop = vec![
            scored(vec![0, 1], 1.0),
            scored(vec![0, 1], 1.0),
            scored(vec![1, 1], 2.0),
            scored(vec![0, 0], 3.0),
        ];
        let kept = select(pop, 2);
        let a: Vec<_> = kept.iter().map(|s| s.assignment.assignment().to_vec()).collect();
        assert_eq!(a, vec![vec![0, 1], vec![1, 1]]);
    }

    #[test]
    fn clones_fill_missing_slots() {
        let pop = vec![scored(vec![0, 1], 1.0), scored(vec![0, 1], 1.0), scored(vec![0, 1], 1.0)];
        assert_eq!(select(pop, 2).len(), 2);
    }
}
