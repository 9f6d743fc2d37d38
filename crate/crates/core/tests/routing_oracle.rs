use rand::Rng;
use workload_balance::bench::exact_route;
use workload_balance::model::Point;
use workload_balance::rng::rng_from;
use workload_balance::routing::solve_route;

#[test]
fn seven_points_match_exhaustive_search() {
    let mut rng = rng_from(17);
    let depot = Point::new(500.0, 500.0);
    let pts: Vec<Point> = (0..7)
        .map(|_| Point::new(rng.random_range(0.0..1000.0), rng.random_range(0.0..1000.0)))
        .collect();
    let heuristic = solve_route(depot, &pts).unwrap().length();
    let exact = exact_route(depot, &pts).unwrap().length();
    assert!(heuristic >= exact - 1e-9);
    assert!(heuristic <= 1.05 * exact, "{heuristic} vs {exact}");
}

#[test]
fn small_sets_are_usually_optimal() {
    let mut rng = rng_from(3);
    let mut optimal = 0;
    for _ in 0..100 {
        let n = rng.random_range(1..=6);
        let pts: Vec<Point> = (0..n)
            .map(|_| Point::new(rng.random_range(-300.0..300.0), rng.random_range(-300.0..300.0)))
            .collect();
        let h = solve_route(Point::default(), &pts).unwrap().length();
        let e = exact_route(Point::default(), &pts).unwrap().length();
        assert!(h >= e - 1e-9);
        if h <= e + 1e-9 {
            optimal += 1;
        }
    }
    assert!(optimal >= 90, "{optimal}/100 optimal");
}
