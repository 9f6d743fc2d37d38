//! Nearest-neighbor tour, its 2-opt refinement and the exact optimum on a
//! small random set.

use rand::Rng;
use workload_balance::bench::exact_route;
use workload_balance::model::Point;
use workload_balance::rng::rng_from;
use workload_balance::routing::{nearest_neighbor_tour, solve_route, tour_length, DistanceMatrix};

fn main() -> workload_balance::Result<()> {
    let mut rng = rng_from(17);
    let depot = Point::new(500.0, 500.0);
    let points: Vec<Point> = (0..8)
        .map(|_| Point::new(rng.random_range(0.0..1000.0), rng.random_range(0.0..1000.0)))
        .collect();

    let nodes: Vec<Point> = std::iter::once(depot).chain(points.iter().copied()).collect();
    let nn = tour_length(&nodes, &nearest_neighbor_tour(&DistanceMatrix::new(&nodes)));
    let route = solve_route(depot, &points)?;
    let exact = exact_route(depot, &points)?;

    println!("nearest neighbor  {nn:>8.1} m");
    println!("2-opt             {:>8.1} m  order {:?}", route.length(), route.order);
    println!("exact             {:>8.1} m  order {:?}", exact.length(), exact.order);
    let legs = route.legs();
    println!("legs: out {:.1} m, between stops {:.1} m, back {:.1} m", legs.d_ow, legs.d_tra, legs.d_ret);
    Ok(())
}
