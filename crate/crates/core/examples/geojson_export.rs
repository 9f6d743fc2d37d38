//! Solves a clustered instance and writes the assignment as GeoJSON plus the
//! instance file, both to the temp directory.

use workload_balance::io::{
    export_assignment_geojson, generate_instance, import_assignment_geojson, load_instance, save_instance,
    GeneratorSpec,
};
use workload_balance::solvers::{solve, Algorithm, EAConfig, SeedMix};

fn main() -> workload_balance::Result<()> {
    let dir = std::env::temp_dir();
    let instance = generate_instance(&GeneratorSpec::clustered(150, 6, 5, 200.0, 2))?;
    let instance_path = dir.join("clustered-150.json");
    save_instance(&instance, &instance_path)?;
    assert_eq!(load_instance(&instance_path)?, instance);

    let result = solve(&instance, Algorithm::RaEaIe(Default::default()), &EAConfig::default(), &SeedMix::default())?;
    let map = dir.join("clustered-150.geojson");
    export_assignment_geojson(&instance, &result.best_solution, &map)?;
    assert_eq!(import_assignment_geojson(&map)?, result.best_solution);
    println!("fitness {:.2} s", result.fitness());
    println!("instance: {}\nmap:      {}", instance_path.display(), map.display());
    Ok(())
}
