use std::fs::File;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use workload_balance::bench::{breakdown_report, brute_force_optimum, parse_algorithms, run_experiment, write_stats_csv, StatsTable};
use workload_balance::clustering::Initializer;
use workload_balance::io::{
    export_assignment_geojson, generate_instance, load_instance, save_instance, DepotPlacement, GeneratorSpec,
    PointDistribution, ResultFile,
};
use workload_balance::model::BoundingBox;
use workload_balance::solvers::{solve, solve_ra_ie_with, Algorithm, EAConfig, SeedMix};
use workload_balance::{Error, Result};

/// Workload balancing for last-mile delivery crews.
#[derive(Parser)]
#[command(version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write a synthetic instance file.
    Generate(GenerateArgs),
    /// Run one solver on an instance.
    Solve(SolveArgs),
    /// Repeated seeded runs, summarized as min/max/mean/std per algorithm.
    Bench(BenchArgs),
    /// Exhaustive optimum of a tiny instance.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum DistributionArg {
    Uniform,
    Clustered,
}

#[derive(Clone, Copy, ValueEnum)]
enum DepotArg {
    Center,
    Corner,
    Random,
}

#[derive(Args)]
struct GenerateArgs {
    /// Generator spec (JSON). Flags below are ignored when given.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, default_value_t = 240)]
    n_points: usize,
    #[arg(long, default_value_t = 12)]
    n_workers: usize,
    #[arg(long, value_enum, default_value = "uniform")]
    distribution: DistributionArg,
    #[arg(long, default_value_t = 5)]
    n_clusters: usize,
    #[arg(long, default_value_t = 150.0)]
    spread_m: f64,
    /// min_x,min_y,max_x,max_y in meters.
    #[arg(long, value_delimiter = ',', num_args = 4, default_values_t = [0.0, 0.0, 4000.0, 4000.0])]
    bbox: Vec<f64>,
    #[arg(long, value_enum, default_value = "center")]
    depot: DepotArg,
    #[arg(long)]
    name: Option<String>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct EaArgs {
    #[arg(long)]
    generations: Option<usize>,
    #[arg(long)]
    pop: Option<usize>,
    #[arg(long)]
    time_budget_s: Option<f64>,
    #[arg(long)]
    mutation_p: Option<f64>,
    #[arg(long)]
    crossover_frac: Option<f64>,
    #[arg(long)]
    survival_frac: Option<f64>,
    /// Initial-population fractions for the ensemble: random, clustering,
    /// mutated clustering, RA-IE, mutated RA-IE.
    #[arg(long)]
    mix: Option<String>,
}

impl EaArgs {
    fn config(&self, seed: u64) -> Result<(EAConfig, SeedMix)> {
        let d = EAConfig::default();
        let config = EAConfig {
            population_size: self.pop.unwrap_or(d.population_size),
            max_generations: self.generations.unwrap_or(d.max_generations),
            time_budget_s: self.time_budget_s.unwrap_or(d.time_budget_s),
            mutation_prob: self.mutation_p.unwrap_or(d.mutation_prob),
            crossover_frac: self.crossover_frac.unwrap_or(d.crossover_frac),
            survival_frac: self.survival_frac.unwrap_or(d.survival_frac),
            rng_seed: seed,
            ..d
        };
        config.validate()?;
        let mix = match &self.mix {
            Some(s) => s.parse()?,
            None => SeedMix::default(),
        };
        Ok((config, mix))
    }
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    instance: PathBuf,
    /// ea-ie, ea-ce, ra-ie, ra-ce, ra-ea-ie (also ra-ea-ie-sc, kmeans, spectral).
    #[arg(long)]
    algo: String,
    /// Clustering behind ra-ie / ra-ea-ie.
    #[arg(long)]
    init: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    ea: EaArgs,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    geojson: Option<PathBuf>,
    /// Per-worker time breakdown CSV.
    #[arg(long)]
    breakdown: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    instance: PathBuf,
    /// Comma-separated solver labels.
    #[arg(long, value_delimiter = ',', default_value = "ea-ie,ea-ce,ra-ie,ra-ce,ra-ea-ie")]
    algos: Vec<String>,
    #[arg(long, default_value_t = 30)]
    runs: usize,
    /// Run i uses seed + i.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    ea: EaArgs,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    instance: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn generate(args: GenerateArgs) -> Result<()> {
    let spec = match &args.spec {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::Io { path: path.clone(), source: e })?;
            serde_json::from_str::<GeneratorSpec>(&text)?
        }
        None => GeneratorSpec {
            name: args.name.clone(),
            n_points: args.n_points,
            n_workers: args.n_workers,
            distribution: match args.distribution {
                DistributionArg::Uniform => PointDistribution::Uniform,
                DistributionArg::Clustered => PointDistribution::Clustered {
                    n_clusters: args.n_clusters,
                    spread_m: args.spread_m,
                },
            },
            bbox: BoundingBox::new(args.bbox[0], args.bbox[1], args.bbox[2], args.bbox[3]),
            depot_placement: match args.depot {
                DepotArg::Center => DepotPlacement::Center,
                DepotArg::Corner => DepotPlacement::Corner,
                DepotArg::Random => DepotPlacement::Random,
            },
            seed: args.seed,
            ..GeneratorSpec::uniform(args.n_points, args.n_workers, args.seed)
        },
    };
    let instance = generate_instance(&spec)?;
    save_instance(&instance, &args.out)?;
    println!(
        "wrote {} ({} points, {} workers)",
        args.out.display(),
        instance.n_points(),
        instance.n_workers()
    );
    Ok(())
}

fn solve_cmd(args: SolveArgs) -> Result<()> {
    let instance = load_instance(&args.instance)?;
    let (config, mix) = args.ea.config(args.seed)?;
    let algorithm: Algorithm = args.algo.parse()?;
    let init: Option<Initializer> = args.init.as_deref().map(str::parse).transpose()?;
    let result = match (algorithm, init) {
        (Algorithm::RaEaIe(_), Some(init)) => solve(&instance, Algorithm::RaEaIe(init), &config, &mix)?,
        (Algorithm::RaIe, Some(init)) => solve_ra_ie_with(&instance, args.seed, init)?,
        (_, Some(_)) => {
            return Err(Error::Config(format!("--init applies to ra-ie and ra-ea-ie, not {algorithm}")))
        }
        (_, None) => solve(&instance, algorithm, &config, &mix)?,
    };
    let recorded = json!({"ea": config, "mix": mix, "init": init.map(|i| i.to_string())});
    ResultFile::new(&instance, args.seed, &result, Some(recorded)).save(&args.out)?;

    let report = breakdown_report(&result.best_evaluation);
    if let Some(path) = &args.breakdown {
        report.write_csv(File::create(path).map_err(|e| Error::Io { path: path.clone(), source: e })?)?;
    }
    if let Some(path) = &args.geojson {
        export_assignment_geojson(&instance, &result.best_solution, path)?;
    }
    println!("{} on {}: fitness {:.2} s in {:.2} s", result.algorithm, instance.name(), result.fitness(), result.wall_time_s);
    print!("{report}");
    Ok(())
}

fn bench(args: BenchArgs) -> Result<()> {
    let instance = load_instance(&args.instance)?;
    let (config, mix) = args.ea.config(args.seed)?;
    let algorithms = parse_algorithms(&args.algos)?;
    let stats = run_experiment(&instance, &algorithms, args.runs, args.seed, &config, &mix)?;
    write_stats_csv(&stats, File::create(&args.out).map_err(|e| Error::Io { path: args.out.clone(), source: e })?)?;
    print!("{}", StatsTable(&stats));
    Ok(())
}

fn oracle(args: OracleArgs) -> Result<()> {
    let instance = load_instance(&args.instance)?;
    let (solution, evaluation) = brute_force_optimum(&instance)?;
    ResultFile::optimum(&instance, &solution, &evaluation).save(&args.out)?;
    println!("optimum fitness {:.2} s", evaluation.fitness);
    print!("{}", breakdown_report(&evaluation));
    Ok(())
}

fn main() -> ExitCode {
    let result = match Cli::parse().command {
        Command::Generate(a) => generate(a),
        Command::Solve(a) => solve_cmd(a),
        Command::Bench(a) => bench(a),
        Command::Oracle(a) => oracle(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
