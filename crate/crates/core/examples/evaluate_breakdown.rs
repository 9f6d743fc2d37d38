//! Scores a hand-made assignment and prints the per-worker time breakdown.

use workload_balance::bench::breakdown_report;
use workload_balance::model::{km_h_to_m_s, DeliveryPoint, Instance, IntegerSolution, Point};
use workload_balance::objective::evaluate;

fn main() -> workload_balance::Result<()> {
    let coords = [(300.0, 0.0), (320.0, 80.0), (-150.0, 400.0), (-90.0, 420.0), (0.0, -500.0), (60.0, -560.0)];
    let points = coords
        .iter()
        .enumerate()
        .map(|(i, &(x, y))| DeliveryPoint::new(i, x, y, 57.64, 132.76))
        .collect();
    let instance = Instance::new("street", Point::new(0.0, 0.0), points, 3, km_h_to_m_s(5.0))?;

    let assignment = IntegerSolution::new(vec![0, 0, 1, 1, 2, 2]);
    let evaluation = evaluate(&instance, &assignment)?;
    print!("{}", breakdown_report(&evaluation));

    // Moving one package changes the balance.
    let skewed = IntegerSolution::new(vec![0, 0, 1, 1, 2, 0]);
    println!("\nafter moving point 5 to worker 1: fitness {:.2} s", evaluate(&instance, &skewed)?.fitness);
    Ok(())
}
