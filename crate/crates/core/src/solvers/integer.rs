//! Integer-encoded evolutionary solvers. EA-IE and RA-EA-IE share one
//! loop and differ only in how the first population is built.

use std::time::Instant;

use rand::Rng as _;

use super::evolution::evolve;
use super::operators::{crossover_integer, force_mutate_integer, mutate_integer, random_mask};
use super::recursive::{recursive_assignment, Clusterer};
use super::{EAConfig, SeedMix, SolveResult};
use crate::clustering::Initializer;
use crate::error::Result;
use crate::model::{Instance, IntegerSolution, Point};
use crate::objective::Evaluator;
use crate::rng::{derive_seed, rng_from};

const STREAM_RANDOM: u64 = 1;
const STREAM_MUTANTS: u64 = 2;
const STREAM_EVOLVE: u64 = 3;
const STREAM_CLUSTER: u64 = 1 << 20;
const STREAM_RA: u64 = 2 << 20;

/// Builds the initial population from the five sources of `mix`. Every
/// source draws from its own seed stream, so changing one fraction does not
/// perturb the individuals of another.
fn seed_population(
    ev: &mut Evaluator,
    config: &EAConfig,
    mix: &SeedMix,
    initializer: Initializer,
) -> Result<Vec<IntegerSolution>> {
    let instance = ev.instance();
    let n_workers = instance.n_workers();
    let n_points = instance.n_points();
    let [n_random, n_cluster, n_cluster_mut, n_ra, n_ra_mut] = mix.counts(config.population_size);
    let seed = config.rng_seed;
    let mut population = Vec::with_capacity(config.population_size);

    let mut rng = rng_from(derive_seed(seed, STREAM_RANDOM));
    for _ in 0..n_random {
        population.push(IntegerSolution::new(
            (0..n_points).map(|_| rng.random_range(0..n_workers)).collect(),
        ));
    }

    if n_cluster + n_cluster_mut + n_ra + n_ra_mut == 0 {
        return Ok(population);
    }
    let positions = instance.positions();
    let clusterer = Clusterer::new(initializer, &positions, n_workers)?;
    let mut mutants = rng_from(derive_seed(seed, STREAM_MUTANTS));
    let reference = clusterer
        .cluster(&positions, n_workers, derive_seed(seed, STREAM_CLUSTER))?
        .centroids;

    for j in 0..(n_cluster + n_cluster_mut) as u64 {
        let clusters = clusterer.cluster(&positions, n_workers, derive_seed(seed, STREAM_CLUSTER + j))?;
        let perm = align_to(&reference, &clusters.centroids);
        let labels = IntegerSolution::new(clusters.labels.iter().map(|&l| perm[l]).collect());
        if j < n_cluster as u64 {
            population.push(labels);
        } else {
            population.push(force_mutate_integer(&labels, n_workers, &mut mutants));
        }
    }

    for j in 0..(n_ra + n_ra_mut) as u64 {
        let raw = clusterer
            .cluster(&positions, n_workers, derive_seed(seed, STREAM_RA + j))?
            .centroids;
        let perm = align_to(&reference, &raw);
        let mut centroids = raw.clone();
        for (i, c) in raw.into_iter().enumerate() {
            centroids[perm[i]] = c;
        }
        let greedy = recursive_assignment(ev, &centroids)?.assignment;
        if j < n_ra as u64 {
            population.push(greedy);
        } else {
            population.push(force_mutate_integer(&greedy, n_workers, &mut mutants));
        }
    }
    Ok(population)
}

/// Label permutation mapping each centroid of `centroids` to a distinct
/// centroid of `reference`, matching closest pairs first. Clustering labels
/// are arbitrary, so without this two seeded parents name the same region
/// differently and crossover scrambles both.
fn align_to(reference: &[Point], centroids: &[Point]) -> Vec<usize> {
    let k = centroids.len();
    let mut pairs: Vec<(f64, usize, usize)> = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .map(|(i, j)| (centroids[i].distance(&reference[j]), i, j))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut perm = vec![usize::MAX; k];
    let mut taken = vec![false; k];
    for (_, i, j) in pairs {
        if perm[i] == usize::MAX && !taken[j] {
            perm[i] = j;
            taken[j] = true;
        }
    }
    perm
}

fn run(
    instance: &Instance,
    config: &EAConfig,
    mix: &SeedMix,
    initializer: Initializer,
    label: &str,
) -> Result<SolveResult> {
    config.validate()?;
    mix.validate()?;
    let started = Instant::now();
    let mut ev = Evaluator::new(instance);
    let initial = seed_population(&mut ev, config, mix, initializer)?;
    let n_workers = instance.n_workers();
    let mut rng = rng_from(derive_seed(config.rng_seed, STREAM_EVOLVE));

    let outcome = evolve(
        config,
        started,
        initial,
        &mut rng,
        |genome: &IntegerSolution| Ok((genome.clone(), ev.evaluate(genome)?)),
        |p1, p2, rng| {
            let mask = random_mask(rng, p1.len(), config.crossover_frac);
            let child = crossover_integer(p1, p2, &mask)?;
            Ok(mutate_integer(&child, n_workers, config.mutation_prob, rng))
        },
    )?;

    Ok(SolveResult {
        algorithm: label.into(),
        best_solution: outcome.best.assignment,
        circles: None,
        best_evaluation: outcome.best.evaluation,
        history: outcome.history,
        wall_time_s: started.elapsed().as_secs_f64(),
        evaluations: ev.evaluations(),
    })
}

/// EA-IE: half the first population uniformly random, half from independent
/// k-means runs.
pub fn solve_ea_ie(instance: &Instance, config: &EAConfig) -> Result<SolveResult> {
    run(instance, config, &SeedMix::ea_ie(), Initializer::Kmeans, "ea-ie")
}

/// RA-EA-IE: the EA-IE loop started from a population mixing random,
/// clustering, mutated clustering, RA-IE and mutated RA-IE individuals.
pub fn solve_ra_ea_ie(
    instance: &Instance,
    config: &EAConfig,
    mix: &SeedMix,
    initializer: Initializer,
) -> Result<SolveResult> {
    let label = match initializer {
        Initializer::Kmeans => "ra-ea-ie",
        Initializer::Spectral => "ra-ea-ie-sc",
    };
    run(instance, config, mix, initializer, label)
}
