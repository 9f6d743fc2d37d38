//! Recursive greedy heuristics seeded by clustering centroids.
//!
//! RA-IE grows each worker's set one nearest point at a time, feeding only
//! workers below the mean working time. RA-CE grows or shrinks one circle per
//! worker by 3% per round depending on the same comparison.

use std::time::Instant;

use rand::Rng as _;

use super::SolveResult;
use crate::clustering::{kmeans, ClusterResult, Initializer, SpectralEmbedding, DEFAULT_MAX_ITERS};
use crate::error::Result;
use crate::model::{workload_spread, Circle, CircleSolution, Instance, IntegerSolution, Point};
use crate::objective::{covering_worker, decode_circles, Evaluator};
use crate::rng::{derive_seed, rng_from};

/// Round cap for RA-CE when the circles never cover every point.
pub const RA_CE_MAX_ROUNDS: usize = 10_000;

pub(crate) const RADIUS_GROWTH: f64 = 1.03;
pub(crate) const RADIUS_SHRINK: f64 = 0.97;

/// Clustering with the embedding (if any) built once and reused across seeds.
pub(crate) enum Clusterer {
    Kmeans,
    Spectral(SpectralEmbedding),
}

impl Clusterer {
    pub(crate) fn new(initializer: Initializer, positions: &[Point], k: usize) -> Result<Self> {
        Ok(match initializer {
            Initializer::Kmeans => Clusterer::Kmeans,
            Initializer::Spectral => Clusterer::Spectral(SpectralEmbedding::new(positions, k)?),
        })
    }

    pub(crate) fn cluster(&self, positions: &[Point], k: usize, seed: u64) -> Result<ClusterResult> {
        match self {
            Clusterer::Kmeans => kmeans(positions, k, seed, DEFAULT_MAX_ITERS),
            Clusterer::Spectral(emb) => Ok(emb.cluster(positions, seed, DEFAULT_MAX_ITERS)),
        }
    }
}

pub(crate) struct Greedy {
    pub assignment: IntegerSolution,
    pub history: Vec<f64>,
}

/// The RA-IE assignment rounds starting from `centroids`.
///
/// Round one gives every worker a point unconditionally. Later rounds give a
/// point to each worker whose time is strictly below the mean taken at the
/// start of the round; if nobody qualifies, the least-loaded worker (lowest
/// index on ties) takes one so every round makes progress.
pub(crate) fn recursive_assignment(ev: &mut Evaluator, centroids: &[Point]) -> Result<Greedy> {
    let inst = ev.instance();
    let n_workers = centroids.len();
    let mut position = centroids.to_vec();
    let mut sets: Vec<Vec<usize>> = vec![Vec::new(); n_workers];
    let mut times = vec![0.0; n_workers];
    let mut available: Vec<usize> = (0..inst.n_points()).collect();
    let mut assignment = vec![usize::MAX; inst.n_points()];
    let mut history = Vec::new();
    let mut first_round = true;

    let mut give = |w: usize,
                    available: &mut Vec<usize>,
                    position: &mut [Point],
                    sets: &mut [Vec<usize>],
                    times: &mut [f64],
                    ev: &mut Evaluator|
     -> Result<()> {
        let from = position[w];
        let (slot, _) = available
            .iter()
            .enumerate()
            .map(|(slot, &id)| (slot, (from.distance(&inst.point(id).pos()), id)))
            .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0).then(a.1 .1.cmp(&b.1 .1)))
            .expect("caller checks availability");
        let id = available.swap_remove(slot);
        assignment[id] = w;
        position[w] = inst.point(id).pos();
        let at = sets[w].binary_search(&id).unwrap_err();
        sets[w].insert(at, id);
        times[w] = ev.worker_breakdown(&sets[w])?.total;
        Ok(())
    };

    while !available.is_empty() {
        let mean = times.iter().sum::<f64>() / n_workers as f64;
        let mut served = false;
        for w in 0..n_workers {
            if available.is_empty() {
                break;
            }
            if first_round || times[w] < mean {
                give(w, &mut available, &mut position, &mut sets, &mut times, ev)?;
                served = true;
            }
        }
        if !served {
            let w = (0..n_workers)
                .min_by(|&a, &b| times[a].total_cmp(&times[b]).then(a.cmp(&b)))
                .expect("at least one worker");
            give(w, &mut available, &mut position, &mut sets, &mut times, ev)?;
        }
        first_round = false;
        history.push(workload_spread(times.iter().copied()));
    }

    Ok(Greedy {
        assignment: IntegerSolution::new(assignment),
        history,
    })
}

/// RA-IE with k-means centroids.
pub fn solve_ra_ie(instance: &Instance, rng_seed: u64) -> Result<SolveResult> {
    solve_ra_ie_with(instance, rng_seed, Initializer::Kmeans)
}

/// RA-IE with the centroids of the chosen clustering.
pub fn solve_ra_ie_with(instance: &Instance, rng_seed: u64, initializer: Initializer) -> Result<SolveResult> {
    let started = Instant::now();
    let positions = instance.positions();
    let k = instance.n_workers();
    let clusters = Clusterer::new(initializer, &positions, k)?.cluster(&positions, k, rng_seed)?;
    let mut ev = Evaluator::new(instance);
    let greedy = recursive_assignment(&mut ev, &clusters.centroids)?;
    let best_evaluation = ev.evaluate(&greedy.assignment)?;
    Ok(SolveResult {
        algorithm: match initializer {
            Initializer::Kmeans => "ra-ie".into(),
            Initializer::Spectral => "ra-ie-sc".into(),
        },
        best_solution: greedy.assignment,
        circles: None,
        best_evaluation,
        history: greedy.history,
        wall_time_s: started.elapsed().as_secs_f64(),
        evaluations: ev.evaluations(),
    })
}

/// RA-CE with the default round cap.
pub fn solve_ra_ce(instance: &Instance, rng_seed: u64) -> Result<SolveResult> {
    solve_ra_ce_with(instance, rng_seed, RA_CE_MAX_ROUNDS)
}

/// Ids of the points decoded to worker `w` (last covering circle wins);
/// uncovered points belong to nobody here.
fn members(instance: &Instance, circles: &[Circle], w: usize) -> Vec<usize> {
    instance
        .points()
        .iter()
        .filter(|p| covering_worker(circles, p.pos()) == Some(w))
        .map(|p| p.id)
        .collect()
}

fn all_covered(instance: &Instance, circles: &[Circle]) -> bool {
    instance
        .points()
        .iter()
        .all(|p| circles.iter().any(|c| c.contains(p.pos())))
}

/// The RA-CE rounds: grow circles of workers below the mean working time by
/// 3%, shrink those above by 3%, re-timing each worker right after its
/// change. Stops as soon as every point is covered.
pub(crate) fn adjust_radii(
    ev: &mut Evaluator,
    mut circles: Vec<Circle>,
    max_rounds: usize,
) -> Result<(Vec<Circle>, Vec<f64>)> {
    let instance = ev.instance();
    let k = circles.len();
    let mut times = (0..k)
        .map(|w| Ok(ev.worker_breakdown(&members(instance, &circles, w))?.total))
        .collect::<Result<Vec<f64>>>()?;
    let mut history = vec![workload_spread(times.iter().copied())];

    let mut rounds = 0;
    while rounds < max_rounds && !all_covered(instance, &circles) {
        rounds += 1;
        let mean = times.iter().sum::<f64>() / k as f64;
        for w in 0..k {
            if times[w] < mean {
                circles[w].r *= RADIUS_GROWTH;
            } else if times[w] > mean {
                circles[w].r *= RADIUS_SHRINK;
            } else {
                continue;
            }
            times[w] = ev.worker_breakdown(&members(instance, &circles, w))?.total;
        }
        history.push(workload_spread(times.iter().copied()));
    }
    Ok((circles, history))
}

/// RA-CE: k-means centers, random radii in (0.05, 0.25) of the point
/// bounding-box diagonal, then 3% radius steps toward the mean working time
/// until every point is covered or `max_rounds` is reached. Points still
/// uncovered go to the nearest center.
pub fn solve_ra_ce_with(instance: &Instance, rng_seed: u64, max_rounds: usize) -> Result<SolveResult> {
    let started = Instant::now();
    let positions = instance.positions();
    let k = instance.n_workers();
    let clusters = kmeans(&positions, k, rng_seed, DEFAULT_MAX_ITERS)?;
    let diag = match instance.bounds().diagonal() {
        d if d > 0.0 => d,
        _ => 1.0,
    };
    let mut rng = rng_from(derive_seed(rng_seed, 0x7ad1));
    let circles: Vec<Circle> = clusters
        .centroids
        .iter()
        .map(|c| Circle::new(c.x, c.y, diag * rng.random_range(0.05..0.25)))
        .collect();

    let mut ev = Evaluator::new(instance);
    let (circles, history) = adjust_radii(&mut ev, circles, max_rounds)?;

    let circles = CircleSolution::new(circles);
    let decoded = decode_circles(instance, &circles)?;
    let best_evaluation = ev.evaluate(&decoded.assignment)?;
    Ok(SolveResult {
        algorithm: "ra-ce".into(),
        best_solution: decoded.assignment,
        circles: Some(circles),
        best_evaluation,
        history,
        wall_time_s: started.elapsed().as_secs_f64(),
        evaluations: ev.evaluations(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{km_h_to_m_s, DeliveryPoint};

    fn instance(points: &[(f64, f64)], n_workers: usize, handling: f64) -> Instance {
        let pts = points
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| DeliveryPoint::new(i, x, y, handling, handling))
            .collect();
        Instance::new("r", Point::default(), pts, n_workers, km_h_to_m_s(5.0)).unwrap()
    }

    fn scattered(seed: u64, n: usize, n_workers: usize, handling: f64, scale: f64) -> Instance {
        let mut rng = rng_from(seed);
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|_| (scale * rng.random_range(-1000.0..1000.0), scale * rng.random_range(-1000.0..1000.0)))
            .collect();
        instance(&pts, n_workers, handling)
    }

    #[test]
    fn one_point_each_when_counts_match() {
        let inst = instance(&[(100.0, 0.0), (-100.0, 0.0), (0.0, 100.0), (0.0, -100.0)], 4, 60.0);
        let r = solve_ra_ie(&inst, 3).unwrap();
        let mut a = r.best_solution.assignment().to_vec();
        a.sort_unstable();
        assert_eq!(a, vec![0, 1, 2, 3]);
        assert!(r.fitness().abs() < 1e-9);
    }

    #[test]
    fn single_worker_takes_everything() {
        let inst = scattered(1, 30, 1, 50.0, 1.0);
        let r = solve_ra_ie(&inst, 1).unwrap();
        assert!(r.best_solution.assignment().iter().all(|&w| w == 0));
        assert_eq!(r.fitness(), 0.0);
        let c = solve_ra_ce(&inst, 1).unwrap();
        assert_eq!(c.fitness(), 0.0);
        assert!(c.best_solution.assignment().iter().all(|&w| w == 0));
    }

    #[test]
    fn every_round_assigns_a_point() {
        for seed in 0..10 {
            let inst = scattered(seed, 60, 5, 100.0, 1.0);
            let positions = inst.positions();
            let centroids = kmeans(&positions, 5, seed, DEFAULT_MAX_ITERS).unwrap().centroids;
            let mut ev = Evaluator::new(&inst);
            let g = recursive_assignment(&mut ev, &centroids).unwrap();
            // At most n - k + 1 rounds: k points in round one, then >= 1 per round.
            assert!(g.history.len() <= 60 - 5 + 1);
            assert!(g.assignment.validate(&inst).is_ok());
        }
    }

    #[test]
    fn equal_times_do_not_deadlock() {
        // Four points symmetric about the depot, two workers: after round one
        // both workers tie at the mean and the fallback must keep going.
        let inst = instance(&[(100.0, 0.0), (-100.0, 0.0), (0.0, 100.0), (0.0, -100.0)], 2, 60.0);
        let r = solve_ra_ie(&inst, 0).unwrap();
        assert!(r.best_solution.validate(&inst).is_ok());
    }

    #[test]
    fn ra_ie_is_deterministic() {
        let inst = scattered(7, 80, 4, 120.0, 1.0);
        let a = solve_ra_ie(&inst, 5).unwrap();
        let b = solve_ra_ie(&inst, 5).unwrap();
        assert_eq!(a.best_solution, b.best_solution);
        assert_eq!(a.history, b.history);
        let s1 = solve_ra_ie_with(&inst, 5, Initializer::Spectral).unwrap();
        let s2 = solve_ra_ie_with(&inst, 5, Initializer::Spectral).unwrap();
        assert_eq!(s1.best_solution, s2.best_solution);
    }

    #[test]
    fn scaling_coordinates_scales_travel_times() {
        for seed in 0..5 {
            let base = scattered(seed, 40, 4, 0.0, 1.0);
            let scaled = scattered(seed, 40, 4, 0.0, 4.0);
            let a = solve_ra_ie(&base, seed).unwrap();
            let b = solve_ra_ie(&scaled, seed).unwrap();
            assert_eq!(a.best_solution, b.best_solution, "seed {seed}");
            assert!((4.0 * a.fitness() - b.fitness()).abs() <= 1e-9 * b.fitness().max(1.0));
        }
    }

    #[test]
    fn ra_ce_terminates_at_once_when_covered() {
        let inst = scattered(2, 20, 3, 10.0, 1.0);
        let circles = vec![Circle::new(0.0, 0.0, 5000.0); 3];
        let mut ev = Evaluator::new(&inst);
        let (after, history) = adjust_radii(&mut ev, circles.clone(), RA_CE_MAX_ROUNDS).unwrap();
        assert_eq!(after, circles);
        assert_eq!(history.len(), 1);

        let r = solve_ra_ce_with(&inst, 2, 0).unwrap();
        assert_eq!(r.history.len(), 1);
        assert!(r.best_solution.validate(&inst).is_ok());
    }

    #[test]
    fn ra_ce_replays_exactly() {
        let inst = scattered(50, 50, 4, 100.0, 1.0);
        let a = solve_ra_ce(&inst, 50).unwrap();
        let b = solve_ra_ce(&inst, 50).unwrap();
        assert_eq!(a.circles, b.circles);
        assert_eq!(a.best_solution, b.best_solution);
        assert_eq!(a.history, b.history);
    }

    #[test]
    fn ra_ce_stops_once_everything_is_covered() {
        let inst = scattered(8, 40, 3, 100.0, 1.0);
        let r = solve_ra_ce(&inst, 8).unwrap();
        let rounds = r.history.len() - 1;
        let circles = r.circles.as_ref().unwrap().circles();
        if rounds < RA_CE_MAX_ROUNDS {
            assert!(all_covered(&inst, circles));
        }
        assert!(r.best_solution.validate(&inst).is_ok());
    }
}
