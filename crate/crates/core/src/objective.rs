//! Working-time model and fitness.
//!
//! A worker's day is internal handling + depot-to-first-stop travel + route
//! travel + doorstep handling + return travel. Fitness is the spread between
//! the longest and the shortest day; lower is better.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{
    CircleSolution, Evaluation, Instance, IntegerSolution, Point, TimeBreakdown,
};
use crate::routing::RouteCache;

/// A circle solution turned into a total assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecodedAssignment {
    pub assignment: IntegerSolution,
    /// Ids of points that no circle covered; they were handed to the worker
    /// with the nearest circle center.
    pub uncovered: Vec<usize>,
}

/// Highest-indexed circle containing `p`, if any.
pub fn covering_worker(circles: &[crate::model::Circle], p: Point) -> Option<usize> {
    circles.iter().rposition(|c| c.contains(p))
}

/// Index of the circle whose center is nearest to `p`; ties to the lowest index.
pub fn nearest_center(circles: &[crate::model::Circle], p: Point) -> usize {
    let mut best = 0;
    let mut best_d = f64::INFINITY;
    for (i, c) in circles.iter().enumerate() {
        let d = c.center().distance(&p);
        if d < best_d {
            best_d = d;
            best = i;
        }
    }
    best
}

/// Assigns each point to the last circle covering it; uncovered points fall
/// back to the nearest circle center.
pub fn decode_circles(instance: &Instance, sol: &CircleSolution) -> Result<DecodedAssignment> {
    sol.validate(instance)?;
    let circles = sol.circles();
    let mut assignment = Vec::with_capacity(instance.n_points());
    let mut uncovered = Vec::new();
    for p in instance.points() {
        match covering_worker(circles, p.pos()) {
            Some(w) => assignment.push(w),
            None => {
                uncovered.push(p.id);
                assignment.push(nearest_center(circles, p.pos()));
            }
        }
    }
    Ok(DecodedAssignment {
        assignment: IntegerSolution::new(assignment),
        uncovered,
    })
}

/// Evaluates assignments against one instance, memoizing routes.
#[derive(Debug)]
pub struct Evaluator<'a> {
    instance: &'a Instance,
    positions: Vec<Point>,
    cache: RouteCache,
    evaluations: u64,
}

impl<'a> Evaluator<'a> {
    pub fn new(instance: &'a Instance) -> Self {
        Self::with_cache(instance, RouteCache::new())
    }

    pub fn with_cache(instance: &'a Instance, cache: RouteCache) -> Self {
        Self {
            instance,
            positions: instance.positions(),
            cache,
            evaluations: 0,
        }
    }

    pub fn instance(&self) -> &'a Instance {
        self.instance
    }

    /// Number of full-solution evaluations performed so far.
    pub fn evaluations(&self) -> u64 {
        self.evaluations
    }

    pub fn cache(&self) -> &RouteCache {
        &self.cache
    }

    /// Breakdown for one worker serving the points `ids` (ascending).
    /// An empty set is a worker who stays at the depot: all zeros.
    pub fn worker_breakdown(&mut self, ids: &[usize]) -> Result<TimeBreakdown> {
        if ids.is_empty() {
            return Ok(TimeBreakdown::default());
        }
        let inst = self.instance;
        let speed = inst.speed();
        let legs = self.cache.legs(inst.depot(), ids, &self.positions)?;
        let mut t_int = 0.0;
        let mut t_ext = 0.0;
        for &id in ids {
            let p = inst.point(id);
            t_int += p.t_in;
            t_ext += p.t_ex;
        }
        Ok(TimeBreakdown::from_components(
            legs.d_ow / speed,
            t_int,
            legs.d_tra / speed,
            t_ext,
            legs.d_ret / speed,
        ))
    }

    pub fn evaluate(&mut self, sol: &IntegerSolution) -> Result<Evaluation> {
        sol.validate(self.instance)?;
        self.evaluations += 1;
        let groups = sol.groups(self.instance.n_workers());
        let per_worker = groups
            .iter()
            .map(|ids| self.worker_breakdown(ids))
            .collect::<Result<Vec<_>>>()?;
        Ok(Evaluation::from_breakdowns(per_worker))
    }

    pub fn evaluate_circles(&mut self, sol: &CircleSolution) -> Result<(DecodedAssignment, Evaluation)> {
        let decoded = decode_circles(self.instance, sol)?;
        let eval = self.evaluate(&decoded.assignment)?;
        Ok((decoded, eval))
    }
}

/// Evaluates an integer-encoded assignment.
pub fn evaluate(instance: &Instance, sol: &IntegerSolution) -> Result<Evaluation> {
    Evaluator::with_cache(instance, RouteCache::with_capacity(0)).evaluate(sol)
}

/// Decodes a circle solution and evaluates the resulting assignment.
pub fn evaluate_circles(instance: &Instance, sol: &CircleSolution) -> Result<Evaluation> {
    Evaluator::with_cache(instance, RouteCache::with_capacity(0))
        .evaluate_circles(sol)
        .map(|(_, e)| e)
}

/// Fitness of a set of worker totals.
pub fn fitness_from_totals(totals: &[f64]) -> Result<f64> {
    if totals.is_empty() {
        return Err(Error::InvalidInput("no worker totals".into()));
    }
    Ok(crate::model::workload_spread(totals.iter().copied()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{km_h_to_m_s, Circle, DeliveryPoint, DEFAULT_T_EX_S, DEFAULT_T_IN_S};
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn instance(points: &[(f64, f64)], n_workers: usize) -> Instance {
        let pts = points
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| DeliveryPoint::new(i, x, y, DEFAULT_T_IN_S, DEFAULT_T_EX_S))
            .collect();
        Instance::new("t", Point::default(), pts, n_workers, km_h_to_m_s(5.0)).unwrap()
    }

    fn random_instance(seed: u64, n: usize, n_workers: usize) -> Instance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.random_range(-500.0..500.0), rng.random_range(-500.0..500.0)))
            .collect();
        instance(&pts, n_workers)
    }

    #[test]
    fn overlap_goes_to_the_later_worker() {
        let inst = instance(&[(1.0, 0.0), (50.0, 50.0)], 2);
        let sol = CircleSolution::new(vec![Circle::new(0.0, 0.0, 5.0), Circle::new(3.0, 0.0, 5.0)]);
        let d = decode_circles(&inst, &sol).unwrap();
        assert_eq!(d.assignment.assignment()[0], 1);
    }

    #[test]
    fn boundary_counts_as_inside() {
        let inst = instance(&[(5.0, 0.0), (900.0, 0.0)], 2);
        let sol = CircleSolution::new(vec![Circle::new(0.0, 0.0, 5.0), Circle::new(1000.0, 0.0, 1.0)]);
        let d = decode_circles(&inst, &sol).unwrap();
        assert_eq!(d.assignment.assignment()[0], 0);
        assert!(!d.uncovered.contains(&0));
    }

    #[test]
    fn uncovered_falls_back_to_nearest_center() {
        let inst = instance(&[(60.0, 0.0), (0.0, 0.5)], 2);
        let sol = CircleSolution::new(vec![Circle::new(0.0, 0.0, 1.0), Circle::new(100.0, 0.0, 1.0)]);
        let d = decode_circles(&inst, &sol).unwrap();
        assert_eq!(d.uncovered, vec![0]);
        assert_eq!(d.assignment.assignment(), &[1, 0]);
    }

    #[test]
    fn single_point_breakdown() {
        let inst = instance(&[(100.0, 0.0)], 1);
        let e = evaluate(&inst, &IntegerSolution::new(vec![0])).unwrap();
        let b = e.per_worker[0];
        assert!((b.t_ow - 72.0).abs() < 1e-9);
        assert_eq!(b.t_int, 57.64);
        assert_eq!(b.t_tra, 0.0);
        assert_eq!(b.t_ext, 132.76);
        assert!((b.t_ret - 72.0).abs() < 1e-9);
        assert!((b.total - 334.4).abs() < 1e-9);
        assert_eq!(e.fitness, 0.0);
    }

    #[test]
    fn idle_worker_has_zero_breakdown() {
        let inst = instance(&[(10.0, 0.0), (20.0, 0.0)], 2);
        let e = evaluate(&inst, &IntegerSolution::new(vec![0, 0])).unwrap();
        assert_eq!(e.per_worker[1], TimeBreakdown::default());
        assert_eq!(e.fitness, e.per_worker[0].total);
    }

    #[test]
    fn single_worker_fitness_is_zero() {
        let inst = random_instance(1, 12, 1);
        let e = evaluate(&inst, &IntegerSolution::new(vec![0; 12])).unwrap();
        assert_eq!(e.fitness, 0.0);
    }

    #[test]
    fn rejects_invalid_assignment() {
        let inst = random_instance(1, 4, 2);
        assert!(evaluate(&inst, &IntegerSolution::new(vec![0, 1, 2, 0])).is_err());
        assert!(evaluate(&inst, &IntegerSolution::new(vec![0, 1])).is_err());
    }

    #[test]
    fn circles_matching_an_assignment_evaluate_identically() {
        let inst = instance(&[(10.0, 0.0), (12.0, 1.0), (-300.0, 40.0), (-310.0, 45.0)], 2);
        let sol = CircleSolution::new(vec![Circle::new(11.0, 0.5, 5.0), Circle::new(-305.0, 42.0, 10.0)]);
        let direct = evaluate(&inst, &IntegerSolution::new(vec![0, 0, 1, 1])).unwrap();
        let (decoded, via) = Evaluator::new(&inst).evaluate_circles(&sol).unwrap();
        assert!(decoded.uncovered.is_empty());
        assert_eq!(via, direct);
    }

    #[test]
    fn zero_radius_circles_still_decode_totally() {
        let inst = random_instance(4, 20, 3);
        let sol = CircleSolution::new(vec![
            Circle::new(1e4, 1e4, 0.0),
            Circle::new(-1e4, 0.0, 0.0),
            Circle::new(0.0, -1e4, 0.0),
        ]);
        let d = decode_circles(&inst, &sol).unwrap();
        assert_eq!(d.uncovered.len(), 20);
        let e = evaluate_circles(&inst, &sol).unwrap();
        assert!(e.fitness.is_finite());
    }

    #[test]
    fn circle_membership_matches_hand_enumeration() {
        let inst = random_instance(11, 5, 2);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let sol = CircleSolution::new(
            (0..2)
                .map(|_| {
                    Circle::new(
                        rng.random_range(-500.0..500.0),
                        rng.random_range(-500.0..500.0),
                        rng.random_range(100.0..600.0),
                    )
                })
                .collect(),
        );
        // Membership spelled out directly from squared distances.
        let mut expected = Vec::new();
        for p in inst.points() {
            let mut owner = None;
            for (w, c) in sol.circles().iter().enumerate() {
                let dx = p.x - c.cx;
                let dy = p.y - c.cy;
                if dx * dx + dy * dy <= c.r * c.r {
                    owner = Some(w);
                }
            }
            let owner = owner.unwrap_or_else(|| {
                let d: Vec<f64> = sol
                    .circles()
                    .iter()
                    .map(|c| (p.x - c.cx).powi(2) + (p.y - c.cy).powi(2))
                    .collect();
                if d[1] < d[0] { 1 } else { 0 }
            });
            expected.push(owner);
        }
        let e = evaluate_circles(&inst, &sol).unwrap();
        let direct = evaluate(&inst, &IntegerSolution::new(expected)).unwrap();
        assert_eq!(e.fitness, direct.fitness);
    }

    #[test]
    fn duplicate_point_with_no_handling_adds_nothing() {
        for seed in 0..50 {
            let base = random_instance(seed, 9, 2);
            let mut rng = ChaCha8Rng::seed_from_u64(seed + 1000);
            let assignment: Vec<usize> = (0..9).map(|_| rng.random_range(0..2)).collect();
            let twin_of = rng.random_range(0..9);
            let mut pts = base.points().to_vec();
            let src = pts[twin_of];
            pts.push(DeliveryPoint::new(9, src.x, src.y, 0.0, 0.0));
            let grown = Instance::new("g", base.depot(), pts, 2, base.speed()).unwrap();
            let mut grown_assignment = assignment.clone();
            grown_assignment.push(assignment[twin_of]);
            let a = evaluate(&base, &IntegerSolution::new(assignment)).unwrap();
            let b = evaluate(&grown, &IntegerSolution::new(grown_assignment)).unwrap();
            let w = b.per_worker.len();
            for j in 0..w {
                assert!(
                    (a.per_worker[j].total - b.per_worker[j].total).abs() < 1e-9,
                    "seed {seed}, worker {j}"
                );
            }
        }
    }

    proptest! {
        #[test]
        fn breakdown_sums_and_fitness_nonnegative(seed in 0u64..10_000, n in 3usize..25, k in 1usize..4) {
            let inst = random_instance(seed, n, k.min(n));
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let sol = IntegerSolution::new((0..n).map(|_| rng.random_range(0..inst.n_workers())).collect());
            let e = evaluate(&inst, &sol).unwrap();
            prop_assert!(e.fitness >= 0.0);
            for b in &e.per_worker {
                let sum = b.t_ow + b.t_int + b.t_tra + b.t_ext + b.t_ret;
                prop_assert!((sum - b.total).abs() <= 1e-9 * b.total.abs().max(1.0));
                prop_assert!(b.t_ow >= 0.0 && b.t_int >= 0.0 && b.t_tra >= 0.0 && b.t_ext >= 0.0 && b.t_ret >= 0.0);
            }
            let totals = e.totals();
            let all_equal = totals.iter().all(|&t| t == totals[0]);
            prop_assert_eq!(e.fitness == 0.0, all_equal);
        }

        #[test]
        fn relabeling_workers_is_equivariant(seed in 0u64..10_000, n in 4usize..20) {
            let inst = random_instance(seed, n, 3);
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
            let sol: Vec<usize> = (0..n).map(|_| rng.random_range(0..3)).collect();
            let mut perm: Vec<usize> = (0..3).collect();
            perm.shuffle(&mut rng);
            let relabeled: Vec<usize> = sol.iter().map(|&w| perm[w]).collect();
            let a = evaluate(&inst, &IntegerSolution::new(sol)).unwrap();
            let b = evaluate(&inst, &IntegerSolution::new(relabeled)).unwrap();
            prop_assert_eq!(a.fitness, b.fitness);
            prop_assert!((a.total_time - b.total_time).abs() <= 1e-9 * a.total_time);
            for (w, &p) in perm.iter().enumerate() {
                prop_assert_eq!(a.per_worker[w], b.per_worker[p]);
            }
        }
    }
}
