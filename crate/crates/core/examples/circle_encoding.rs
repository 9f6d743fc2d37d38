//! Circle-encoded solutions: decoding rules and the RA-CE / EA-CE solvers.

use workload_balance::io::{generate_instance, GeneratorSpec};
use workload_balance::model::{Circle, CircleSolution};
use workload_balance::objective::decode_circles;
use workload_balance::solvers::{solve_ea_ce, solve_ra_ce, EAConfig};

fn main() -> workload_balance::Result<()> {
    let instance = generate_instance(&GeneratorSpec::uniform(120, 6, 4))?;

    // Overlaps go to the later circle; uncovered points to the nearest center.
    let zones = CircleSolution::new(vec![
        Circle::new(1000.0, 1000.0, 900.0),
        Circle::new(1500.0, 1500.0, 900.0),
        Circle::new(3000.0, 3000.0, 600.0),
        Circle::new(3000.0, 1000.0, 600.0),
        Circle::new(1000.0, 3000.0, 600.0),
        Circle::new(2000.0, 2000.0, 100.0),
    ]);
    let decoded = decode_circles(&instance, &zones)?;
    println!("hand-made zones leave {} of {} points uncovered", decoded.uncovered.len(), instance.n_points());

    let ra = solve_ra_ce(&instance, 1)?;
    println!("ra-ce fitness {:.2} s after {} rounds", ra.fitness(), ra.history.len());
    let ea = solve_ea_ce(&instance, &EAConfig::default().with_seed(1))?;
    println!("ea-ce fitness {:.2} s", ea.fitness());
    for (w, c) in ea.circles.expect("circle solver").circles().iter().enumerate() {
        println!("  worker {w}: center ({:.0}, {:.0}) radius {:.0}", c.cx, c.cy, c.r);
    }
    Ok(())
}
