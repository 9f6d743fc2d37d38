//! The optimization algorithms.
//!
//! | label         | algorithm                                                     |
//! |---------------|---------------------------------------------------------------|
//! | `ea-ie`       | evolutionary algorithm, integer encoding                      |
//! | `ea-ce`       | evolutionary algorithm, circle encoding                       |
//! | `ra-ie`       | recursive greedy assignment from k-means centroids            |
//! | `ra-ce`       | recursive circle growing/shrinking from k-means centroids     |
//! | `ra-ea-ie`    | EA-IE seeded with random, clustering and RA-IE individuals    |
//! | `ra-ea-ie-sc` | as `ra-ea-ie`, spectral clustering instead of k-means         |
//! | `kmeans`      | raw k-means labels as the assignment (baseline)               |
//! | `spectral`    | raw spectral-clustering labels as the assignment (baseline)   |

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::clustering::Initializer;
use crate::error::{Error, Result};
use crate::model::{CircleSolution, Evaluation, Instance, IntegerSolution};

mod baseline;
mod circle;
mod evolution;
mod integer;
pub mod operators;
mod recursive;

pub use baseline::solve_clustering;
pub use circle::solve_ea_ce;
pub use integer::{solve_ea_ie, solve_ra_ea_ie};
pub use recursive::{solve_ra_ce, solve_ra_ce_with, solve_ra_ie, solve_ra_ie_with, RA_CE_MAX_ROUNDS};

/// Evolutionary-algorithm hyper-parameters. Defaults are the reference
/// settings: 40 individuals, 200 generations or 40 minutes, mutation 0.05,
/// crossover and survival fractions 0.5.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EAConfig {
    pub population_size: usize,
    pub max_generations: usize,
    /// Wall-clock cap in seconds, checked after each generation.
    pub time_budget_s: f64,
    /// Per-offspring probability of a single-gene mutation (integer
    /// encoding) and per-individual probability of a hard mutation (circle
    /// encoding).
    pub mutation_prob: f64,
    /// Per-gene probability that a child takes its gene from the first parent.
    pub crossover_frac: f64,
    /// Fraction of the population kept each generation.
    pub survival_frac: f64,
    /// Per-scalar probability of a smooth (Gaussian) circle mutation.
    pub smooth_mutation_prob: f64,
    /// Smooth-mutation standard deviation as a fraction of the point
    /// bounding-box diagonal.
    pub smooth_sigma_frac: f64,
    pub rng_seed: u64,
}

impl Default for EAConfig {
    fn default() -> Self {
        Self {
            population_size: 40,
            max_generations: 200,
            time_budget_s: 40.0 * 60.0,
            mutation_prob: 0.05,
            crossover_frac: 0.5,
            survival_frac: 0.5,
            smooth_mutation_prob: 0.3,
            smooth_sigma_frac: 0.01,
            rng_seed: 0,
        }
    }
}

impl EAConfig {
    pub fn with_seed(&self, rng_seed: u64) -> Self {
        Self {
            rng_seed,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let prob = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be in [0, 1], got {v}")))
            }
        };
        let open = |name: &str, v: f64| {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!("{name} must be in (0, 1), got {v}")))
            }
        };
        if self.population_size < 2 {
            return Err(Error::InvalidParameter(format!(
                "population_size must be at least 2, got {}",
                self.population_size
            )));
        }
        if !(self.time_budget_s >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "time budget must be non-negative, got {}",
                self.time_budget_s
            )));
        }
        if !(self.smooth_sigma_frac > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "smooth_sigma_frac must be positive, got {}",
                self.smooth_sigma_frac
            )));
        }
        prob("mutation_prob", self.mutation_prob)?;
        prob("smooth_mutation_prob", self.smooth_mutation_prob)?;
        open("crossover_frac", self.crossover_frac)?;
        open("survival_frac", self.survival_frac)
    }
}

/// Composition of the RA-EA-IE initial population.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeedMix {
    pub frac_random: f64,
    pub frac_cluster: f64,
    pub frac_cluster_mutated: f64,
    pub frac_ra: f64,
    pub frac_ra_mutated: f64,
}

impl Default for SeedMix {
    fn default() -> Self {
        Self::new(0.2, 0.2, 0.2, 0.2, 0.2).expect("valid default mix")
    }
}

impl SeedMix {
    pub fn new(random: f64, cluster: f64, cluster_mutated: f64, ra: f64, ra_mutated: f64) -> Result<Self> {
        let mix = Self {
            frac_random: random,
            frac_cluster: cluster,
            frac_cluster_mutated: cluster_mutated,
            frac_ra: ra,
            frac_ra_mutated: ra_mutated,
        };
        mix.validate()?;
        Ok(mix)
    }

    /// The EA-IE initialization: half random, half clustering.
    pub fn ea_ie() -> Self {
        Self::new(0.5, 0.5, 0.0, 0.0, 0.0).expect("valid mix")
    }

    fn fractions(&self) -> [f64; 5] {
        [
            self.frac_random,
            self.frac_cluster,
            self.frac_cluster_mutated,
            self.frac_ra,
            self.frac_ra_mutated,
        ]
    }

    pub fn validate(&self) -> Result<()> {
        let f = self.fractions();
        if f.iter().any(|v| !(*v >= 0.0)) {
            return Err(Error::InvalidParameter(format!("seed mix fractions must be non-negative: {f:?}")));
        }
        let sum: f64 = f.iter().sum();
        if (sum - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidParameter(format!("seed mix fractions sum to {sum}, not 1")));
        }
        Ok(())
    }

    /// Splits `n` individuals over the five sources by largest remainder;
    /// ties go to the earlier source.
    pub fn counts(&self, n: usize) -> [usize; 5] {
        let f = self.fractions();
        let mut counts = [0usize; 5];
        let mut rem = [0.0f64; 5];
        for i in 0..5 {
            let exact = f[i] * n as f64;
            counts[i] = exact.floor() as usize;
            rem[i] = exact - counts[i] as f64;
        }
        let mut left = n.saturating_sub(counts.iter().sum());
        let mut order: Vec<usize> = (0..5).collect();
        order.sort_by(|&a, &b| rem[b].total_cmp(&rem[a]).then(a.cmp(&b)));
        for &i in order.iter().cycle() {
            if left == 0 {
                break;
            }
            if f[i] > 0.0 {
                counts[i] += 1;
                left -= 1;
            }
        }
        counts
    }
}

impl FromStr for SeedMix {
    type Err = Error;

    /// Parses `a,b,c,d,e`.
    fn from_str(s: &str) -> Result<Self> {
        let v = s
            .split(',')
            .map(|t| t.trim().parse::<f64>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map_err(|e| Error::Config(format!("bad seed mix `{s}`: {e}")))?;
        match v[..] {
            [a, b, c, d, e] => Self::new(a, b, c, d, e),
            _ => Err(Error::Config(format!("seed mix needs five fractions, got `{s}`"))),
        }
    }
}

/// Outcome of one solver run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveResult {
    pub algorithm: String,
    pub best_solution: IntegerSolution,
    /// Raw zones for circle-encoded solvers.
    pub circles: Option<CircleSolution>,
    pub best_evaluation: Evaluation,
    /// Best fitness per generation (EAs, starting with the initial
    /// population) or per round (recursive algorithms).
    pub history: Vec<f64>,
    pub wall_time_s: f64,
    pub evaluations: u64,
}

impl SolveResult {
    pub fn fitness(&self) -> f64 {
        self.best_evaluation.fitness
    }
}

/// Every solver this crate can run, by label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    EaIe,
    EaCe,
    RaIe,
    RaCe,
    RaEaIe(Initializer),
    Clustering(Initializer),
}

impl Algorithm {
    /// The five core algorithms, the spectral ensemble variant and the two
    /// raw-clustering baselines.
    pub const ALL: [Algorithm; 8] = [
        Algorithm::EaIe,
        Algorithm::EaCe,
        Algorithm::RaIe,
        Algorithm::RaCe,
        Algorithm::RaEaIe(Initializer::Kmeans),
        Algorithm::RaEaIe(Initializer::Spectral),
        Algorithm::Clustering(Initializer::Kmeans),
        Algorithm::Clustering(Initializer::Spectral),
    ];

    pub fn label(&self) -> &'static str {
        match self {
            Algorithm::EaIe => "ea-ie",
            Algorithm::EaCe => "ea-ce",
            Algorithm::RaIe => "ra-ie",
            Algorithm::RaCe => "ra-ce",
            Algorithm::RaEaIe(Initializer::Kmeans) => "ra-ea-ie",
            Algorithm::RaEaIe(Initializer::Spectral) => "ra-ea-ie-sc",
            Algorithm::Clustering(Initializer::Kmeans) => "kmeans",
            Algorithm::Clustering(Initializer::Spectral) => "spectral",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.label() == s)
            .ok_or_else(|| {
                let known: Vec<&str> = Algorithm::ALL.iter().map(Algorithm::label).collect();
                Error::Config(format!("unknown algorithm `{s}` (known: {})", known.join(", ")))
            })
    }
}

/// Runs `algorithm` with the seed in `config.rng_seed`. `mix` is used only by
/// the ensemble.
pub fn solve(instance: &Instance, algorithm: Algorithm, config: &EAConfig, mix: &SeedMix) -> Result<SolveResult> {
    match algorithm {
        Algorithm::EaIe => solve_ea_ie(instance, config),
        Algorithm::EaCe => solve_ea_ce(instance, config),
        Algorithm::RaIe => solve_ra_ie(instance, config.rng_seed),
        Algorithm::RaCe => solve_ra_ce(instance, config.rng_seed),
        Algorithm::RaEaIe(init) => solve_ra_ea_ie(instance, config, mix, init),
        Algorithm::Clustering(init) => solve_clustering(instance, init, config.rng_seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.label().parse::<Algorithm>().unwrap(), a);
        }
        assert!(matches!("ra-ea-ce".parse::<Algorithm>(), Err(Error::Config(_))));
    }

    #[test]
    fn mix_counts_fill_the_population() {
        assert_eq!(SeedMix::default().counts(40), [8, 8, 8, 8, 8]);
        assert_eq!(SeedMix::ea_ie().counts(40), [20, 20, 0, 0, 0]);
        assert_eq!(SeedMix::ea_ie().counts(7), [4, 3, 0, 0, 0]);
        assert_eq!(SeedMix::default().counts(3), [1, 1, 1, 0, 0]);
        let odd = SeedMix::new(0.1, 0.0, 0.3, 0.6, 0.0).unwrap();
        assert_eq!(odd.counts(11).iter().sum::<usize>(), 11);
        assert_eq!(odd.counts(11)[1], 0);
    }

    #[test]
    fn mix_validation() {
        assert!(SeedMix::new(0.5, 0.5, 0.1, 0.0, 0.0).is_err());
        assert!(SeedMix::new(1.2, -0.2, 0.0, 0.0, 0.0).is_err());
        assert_eq!("1,0,0,0,0".parse::<SeedMix>().unwrap().counts(4), [4, 0, 0, 0, 0]);
        assert!("1,0,0".parse::<SeedMix>().is_err());
        assert!("a,b,c,d,e".parse::<SeedMix>().is_err());
    }

    #[test]
    fn config_validation() {
        assert!(EAConfig::default().validate().is_ok());
        let bad = |f: fn(&mut EAConfig)| {
            let mut c = EAConfig::default();
            f(&mut c);
            c.validate().is_err()
        };
        assert!(bad(|c| c.population_size = 1));
        assert!(bad(|c| c.mutation_prob = 1.5));
        assert!(bad(|c| c.crossover_frac = 0.0));
        assert!(bad(|c| c.survival_frac = 1.0));
        assert!(bad(|c| c.time_budget_s = -1.0));
    }

    fn instance(points: &[(f64, f64)], n_workers: usize) -> Instance {
        use crate::model::{km_h_to_m_s, DeliveryPoint, Point};
        let pts = points
            .iter()
            .enumerate()
            .map(|(i, &(x, y))| DeliveryPoint::new(i, x, y, 57.64, 132.76))
            .collect();
        Instance::new("t", Point::default(), pts, n_workers, km_h_to_m_s(5.0)).unwrap()
    }

    fn scattered(n: usize, n_workers: usize, seed: u64) -> Instance {
        crate::io::generate_instance(&crate::io::GeneratorSpec::uniform(n, n_workers, seed)).unwrap()
    }

    fn quick() -> EAConfig {
        EAConfig {
            max_generations: 30,
            ..EAConfig::default()
        }
    }

    #[test]
    fn one_worker_is_always_balanced() {
        let inst = scattered(12, 1, 3);
        for a in Algorithm::ALL {
            let r = solve(&inst, a, &quick(), &SeedMix::default()).unwrap();
            assert_eq!(r.fitness(), 0.0, "{a}");
            assert!(r.best_solution.assignment().iter().all(|&w| w == 0));
        }
    }

    #[test]
    fn symmetric_cross_reaches_zero() {
        let inst = instance(&[(100.0, 0.0), (-100.0, 0.0), (0.0, 100.0), (0.0, -100.0)], 2);
        for a in [Algorithm::EaIe, Algorithm::RaEaIe(Initializer::Kmeans), Algorithm::RaIe] {
            let r = solve(&inst, a, &EAConfig::default().with_seed(42), &SeedMix::default()).unwrap();
            assert!(r.fitness() < 1e-9, "{a}: {}", r.fitness());
        }
    }

    #[test]
    fn every_solver_replays_from_its_seed() {
        let inst = scattered(40, 4, 8);
        for a in Algorithm::ALL {
            let config = quick().with_seed(5);
            let x = solve(&inst, a, &config, &SeedMix::default()).unwrap();
            let y = solve(&inst, a, &config, &SeedMix::default()).unwrap();
            assert_eq!(x.best_solution, y.best_solution, "{a}");
            assert_eq!(x.circles, y.circles, "{a}");
            assert_eq!(x.history, y.history, "{a}");
            assert_eq!(x.best_evaluation, y.best_evaluation, "{a}");
        }
    }

    #[test]
    fn evolutionary_history_never_worsens() {
        let inst = scattered(60, 5, 2);
        for a in [Algorithm::EaIe, Algorithm::EaCe, Algorithm::RaEaIe(Initializer::Kmeans)] {
            for seed in 0..3 {
                let r = solve(&inst, a, &quick().with_seed(seed), &SeedMix::default()).unwrap();
                assert_eq!(r.history.len(), 31, "{a}");
                assert!(r.history.windows(2).all(|w| w[1] <= w[0]), "{a}: {:?}", r.history);
                assert_eq!(*r.history.last().unwrap(), r.fitness());
            }
        }
    }

    #[test]
    fn reported_evaluation_matches_the_solution() {
        let inst = scattered(50, 4, 9);
        for a in Algorithm::ALL {
            let r = solve(&inst, a, &quick().with_seed(1), &SeedMix::default()).unwrap();
            r.best_solution.validate(&inst).unwrap();
            let again = crate::objective::evaluate(&inst, &r.best_solution).unwrap();
            assert!((again.fitness - r.fitness()).abs() < 1e-9, "{a}");
            if let Some(circles) = &r.circles {
                let decoded = crate::objective::decode_circles(&inst, circles).unwrap();
                assert_eq!(decoded.assignment, r.best_solution, "{a}");
            }
        }
    }

    #[test]
    fn ensemble_with_ea_ie_mix_is_ea_ie() {
        let inst = scattered(40, 4, 4);
        let config = quick().with_seed(11);
        let a = solve_ea_ie(&inst, &config).unwrap();
        let b = solve_ra_ea_ie(&inst, &config, &SeedMix::ea_ie(), Initializer::Kmeans).unwrap();
        assert_eq!(a.best_solution, b.best_solution);
        assert_eq!(a.history, b.history);
    }

    #[test]
    fn ea_ie_near_oracle_on_six_points() {
        let inst = scattered(6, 2, 42);
        let (_, opt) = crate::bench::brute_force_optimum(&inst).unwrap();
        let r = solve_ea_ie(&inst, &EAConfig::default().with_seed(42)).unwrap();
        assert!(r.fitness() <= 1.1 * opt.fitness + 1e-6, "{} vs {}", r.fitness(), opt.fitness);
        let r = solve_ra_ea_ie(&inst, &EAConfig::default().with_seed(42), &SeedMix::default(), Initializer::Kmeans)
            .unwrap();
        assert!((r.fitness() - opt.fitness).abs() < 1e-6, "{} vs {}", r.fitness(), opt.fitness);
    }

    #[test]
    fn invalid_config_is_rejected_by_solvers() {
        let inst = scattered(10, 2, 1);
        let bad = EAConfig {
            population_size: 0,
            ..EAConfig::default()
        };
        assert!(solve(&inst, Algorithm::EaIe, &bad, &SeedMix::default()).is_err());
        assert!(solve(&inst, Algorithm::EaCe, &bad, &SeedMix::default()).is_err());
    }
}
