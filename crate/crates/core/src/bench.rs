//! Experiment harness: repeated seeded runs with min/max/mean/std tables,
//! per-worker breakdown reports, and an exhaustive oracle for tiny instances.

use std::collections::HashMap;
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Evaluation, Instance, IntegerSolution, Point, TimeBreakdown};
use crate::routing::{Route, RouteLegs};
use crate::solvers::{solve, Algorithm, EAConfig, SeedMix, SolveResult};

/// One run of one algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub seed: u64,
    pub fitness: f64,
    pub total_time: f64,
    pub wall_time_s: f64,
}

/// Fitness statistics over repeated runs. `std_s` is the population
/// standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunStats {
    pub algorithm: String,
    pub n_runs: usize,
    pub min_s: f64,
    pub max_s: f64,
    pub mean_s: f64,
    pub std_s: f64,
    pub per_run: Vec<RunRecord>,
}

/// Two-pass population standard deviation.
pub fn population_std(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt()
}

impl RunStats {
    pub fn from_runs(algorithm: impl Into<String>, per_run: Vec<RunRecord>) -> Result<Self> {
        if per_run.is_empty() {
            return Err(Error::InvalidParameter("statistics need at least one run".into()));
        }
        let f: Vec<f64> = per_run.iter().map(|r| r.fitness).collect();
        let mean = f.iter().sum::<f64>() / f.len() as f64;
        let min = f.iter().copied().fold(f64::INFINITY, f64::min);
        let max = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            algorithm: algorithm.into(),
            n_runs: per_run.len(),
            min_s: min,
            max_s: max,
            // Rounding can push the mean of identical values a hair outside.
            mean_s: mean.clamp(min, max),
            std_s: population_std(&f),
            per_run,
        })
    }

    pub fn mean_wall_time_s(&self) -> f64 {
        self.per_run.iter().map(|r| r.wall_time_s).sum::<f64>() / self.n_runs as f64
    }

    /// The stats with wall-clock times zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> Self {
        let mut s = self.clone();
        s.per_run.iter_mut().for_each(|r| r.wall_time_s = 0.0);
        s
    }
}

/// Runs every algorithm `n_runs` times with seeds `base_seed..base_seed + n_runs`.
/// `config.rng_seed` is replaced by the run seed.
pub fn run_experiment(
    instance: &Instance,
    algorithms: &[Algorithm],
    n_runs: usize,
    base_seed: u64,
    config: &EAConfig,
    mix: &SeedMix,
) -> Result<Vec<RunStats>> {
    run_experiment_with(instance, algorithms, n_runs, base_seed, config, mix, |_, _| {})
}

/// [`run_experiment`] with a callback after every finished run.
pub fn run_experiment_with(
    instance: &Instance,
    algorithms: &[Algorithm],
    n_runs: usize,
    base_seed: u64,
    config: &EAConfig,
    mix: &SeedMix,
    mut on_run: impl FnMut(Algorithm, &SolveResult),
) -> Result<Vec<RunStats>> {
    if n_runs == 0 {
        return Err(Error::InvalidParameter("n_runs must be at least 1".into()));
    }
    config.validate()?;
    mix.validate()?;
    algorithms
        .iter()
        .map(|&algorithm| {
            let per_run = (0..n_runs as u64)
                .map(|i| {
                    let seed = base_seed + i;
                    let result = solve(instance, algorithm, &config.with_seed(seed), mix)?;
                    on_run(algorithm, &result);
                    Ok(RunRecord {
                        seed,
                        fitness: result.fitness(),
                        total_time: result.best_evaluation.total_time,
                        wall_time_s: result.wall_time_s,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            RunStats::from_runs(algorithm.label(), per_run)
        })
        .collect()
}

/// Parses algorithm labels, failing on the first unknown one.
pub fn parse_algorithms<S: AsRef<str>>(labels: &[S]) -> Result<Vec<Algorithm>> {
    labels.iter().map(|l| l.as_ref().trim().parse()).collect()
}

#[derive(Serialize)]
struct StatsCsvRow<'a> {
    algorithm: &'a str,
    n_runs: usize,
    min_s: f64,
    max_s: f64,
    mean_s: f64,
    std_s: f64,
}

/// CSV with one row per algorithm and the four statistic columns. Wall times
/// are left out so the file is reproducible from the seed.
pub fn write_stats_csv<W: Write>(stats: &[RunStats], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for s in stats {
        w.serialize(StatsCsvRow {
            algorithm: &s.algorithm,
            n_runs: s.n_runs,
            min_s: s.min_s,
            max_s: s.max_s,
            mean_s: s.mean_s,
            std_s: s.std_s,
        })?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))?;
    Ok(())
}

/// Aligned text table of run statistics.
pub struct StatsTable<'a>(pub &'a [RunStats]);

impl fmt::Display for StatsTable<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<12} {:>5} {:>12} {:>12} {:>12} {:>12} {:>10}",
            "algorithm", "runs", "min (s)", "max (s)", "mean (s)", "std (s)", "wall (s)"
        )?;
        for s in self.0 {
            writeln!(
                f,
                "{:<12} {:>5} {:>12.2} {:>12.2} {:>12.2} {:>12.2} {:>10.2}",
                s.algorithm,
                s.n_runs,
                s.min_s,
                s.max_s,
                s.mean_s,
                s.std_s,
                s.mean_wall_time_s()
            )?;
        }
        Ok(())
    }
}

/// One row of a per-worker breakdown; `worker` is 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BreakdownRow {
    pub worker: usize,
    pub t_ow_s: f64,
    pub t_int_s: f64,
    pub t_tra_s: f64,
    pub t_ext_s: f64,
    pub t_ret_s: f64,
    pub total_s: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BreakdownReport {
    pub rows: Vec<BreakdownRow>,
    pub fitness: f64,
    pub total_time: f64,
}

pub fn breakdown_report(evaluation: &Evaluation) -> BreakdownReport {
    let rows = evaluation
        .per_worker
        .iter()
        .enumerate()
        .map(|(i, b)| BreakdownRow {
            worker: i + 1,
            t_ow_s: b.t_ow,
            t_int_s: b.t_int,
            t_tra_s: b.t_tra,
            t_ext_s: b.t_ext,
            t_ret_s: b.t_ret,
            total_s: b.total,
        })
        .collect();
    BreakdownReport {
        rows,
        fitness: evaluation.fitness,
        total_time: evaluation.total_time,
    }
}

impl BreakdownReport {
    /// Columns: worker, t_ow_s, t_int_s, t_tra_s, t_ext_s, t_ret_s, total_s.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for row in &self.rows {
            w.serialize(row)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))?;
        Ok(())
    }
}

impl fmt::Display for BreakdownReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:<10} {:>10} {:>10} {:>10} {:>10} {:>10} {:>11}",
            "worker", "t_ow", "t_int", "t_tra", "t_ext", "t_ret", "total"
        )?;
        for r in &self.rows {
            writeln!(
                f,
                "{:<10} {:>10.2} {:>10.2} {:>10.2} {:>10.2} {:>10.2} {:>11.2}",
                format!("Worker {}", r.worker),
                r.t_ow_s,
                r.t_int_s,
                r.t_tra_s,
                r.t_ext_s,
                r.t_ret_s,
                r.total_s
            )?;
        }
        writeln!(f, "fitness {:.2} s, total time {:.2} s", self.fitness, self.total_time)
    }
}

/// Largest search space the oracle accepts.
pub const ORACLE_MAX_ASSIGNMENTS: u64 = 1_000_000;
/// Largest point count the oracle accepts (exact routes enumerate `n!` orders).
pub const ORACLE_MAX_POINTS: usize = 8;

/// Shortest closed tour depot -> all points -> depot by enumerating every
/// visit order. Only for small sets.
pub fn exact_route(depot: Point, points: &[Point]) -> Result<Route> {
    if points.is_empty() {
        return Err(Error::InvalidInput("cannot route an empty point set".into()));
    }
    if points.len() > ORACLE_MAX_POINTS + 2 {
        return Err(Error::TooLarge(format!(
            "exact routing enumerates n! orders; {} points exceeds the limit of {}",
            points.len(),
            ORACLE_MAX_POINTS + 2
        )));
    }
    let n = points.len();
    let len_of = |order: &[usize]| {
        let mut d = depot.distance(&points[order[0]]);
        for w in order.windows(2) {
            d += points[w[0]].distance(&points[w[1]]);
        }
        d + points[order[n - 1]].distance(&depot)
    };
    let mut order: Vec<usize> = (0..n).collect();
    let mut best = order.clone();
    let mut best_len = len_of(&order);
    while next_permutation(&mut order) {
        let l = len_of(&order);
        if l < best_len {
            best_len = l;
            best.clone_from(&order);
        }
    }
    let d_tra = best.windows(2).map(|w| points[w[0]].distance(&points[w[1]])).sum();
    Ok(Route {
        d_ow: depot.distance(&points[best[0]]),
        d_tra,
        d_ret: points[best[n - 1]].distance(&depot),
        order: best,
    })
}

/// Lexicographic successor; false once the last permutation is reached.
fn next_permutation(v: &mut [usize]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Evaluates worker subsets (bit masks over point ids) with exact routes,
/// caching each subset.
struct ExactEvaluator<'a> {
    instance: &'a Instance,
    positions: Vec<Point>,
    cache: HashMap<u32, TimeBreakdown>,
}

impl<'a> ExactEvaluator<'a> {
    fn new(instance: &'a Instance) -> Self {
        Self {
            instance,
            positions: instance.positions(),
            cache: HashMap::new(),
        }
    }

    fn breakdown(&mut self, mask: u32) -> Result<TimeBreakdown> {
        if mask == 0 {
            return Ok(TimeBreakdown::default());
        }
        if let Some(b) = self.cache.get(&mask) {
            return Ok(*b);
        }
        let inst = self.instance;
        let ids: Vec<usize> = (0..inst.n_points()).filter(|i| mask & (1 << i) != 0).collect();
        let pts: Vec<Point> = ids.iter().map(|&i| self.positions[i]).collect();
        let RouteLegs { d_ow, d_tra, d_ret } = exact_route(inst.depot(), &pts)?.legs();
        let (t_int, t_ext) = ids
            .iter()
            .fold((0.0, 0.0), |(a, b), &i| (a + inst.point(i).t_in, b + inst.point(i).t_ex));
        let v = inst.speed();
        let b = TimeBreakdown::from_components(d_ow / v, t_int, d_tra / v, t_ext, d_ret / v);
        self.cache.insert(mask, b);
        Ok(b)
    }
}

/// Evaluates an assignment with exact (enumerated) routes instead of the
/// heuristic used by the solvers. Limited to tiny instances.
pub fn exact_evaluation(instance: &Instance, solution: &IntegerSolution) -> Result<Evaluation> {
    solution.validate(instance)?;
    if instance.n_points() > ORACLE_MAX_POINTS {
        return Err(Error::TooLarge(format!(
            "exact evaluation accepts at most {ORACLE_MAX_POINTS} points"
        )));
    }
    let mut exact = ExactEvaluator::new(instance);
    let mut masks = vec![0u32; instance.n_workers()];
    for (i, &w) in solution.assignment().iter().enumerate() {
        masks[w] |= 1 << i;
    }
    let per_worker = masks.iter().map(|&m| exact.breakdown(m)).collect::<Result<Vec<_>>>()?;
    Ok(Evaluation::from_breakdowns(per_worker))
}

/// Global optimum by enumerating every assignment with exact routes. Ties go
/// to the lexicographically smallest assignment.
pub fn brute_force_optimum(instance: &Instance) -> Result<(IntegerSolution, Evaluation)> {
    let n = instance.n_points();
    let k = instance.n_workers() as u64;
    let space = (0..n).try_fold(1u64, |acc, _| acc.checked_mul(k).filter(|&v| v <= ORACLE_MAX_ASSIGNMENTS));
    if n > ORACLE_MAX_POINTS {
        return Err(Error::TooLarge(format!(
            "{n} points; the oracle accepts at most {ORACLE_MAX_POINTS} points"
        )));
    }
    if space.is_none() {
        return Err(Error::TooLarge(format!(
            "{k}^{n} assignments; the oracle accepts at most {ORACLE_MAX_ASSIGNMENTS}"
        )));
    }
    let mut exact = ExactEvaluator::new(instance);
    let mut assignment = vec![0usize; n];
    let mut best: Option<(Vec<usize>, Evaluation)> = None;
    loop {
        let mut masks = vec![0u32; k as usize];
        for (i, &w) in assignment.iter().enumerate() {
            masks[w] |= 1 << i;
        }
        let per_worker = masks.iter().map(|&m| exact.breakdown(m)).collect::<Result<Vec<_>>>()?;
        let eval = Evaluation::from_breakdowns(per_worker);
        if best.as_ref().is_none_or(|(_, b)| eval.fitness < b.fitness) {
            best = Some((assignment.clone(), eval));
        }
        // Odometer increment, last position fastest: lexicographic order.
        let mut pos = n;
        loop {
            if pos == 0 {
                let (a, e) = best.expect("at least one assignment");
                return Ok((IntegerSolution::new(a), e));
            }
            pos -= 1;
            assignment[pos] += 1;
            if (assignment[pos] as u64) < k {
                break;
            }
            assignment[pos] = 0;
        }
    }
}
