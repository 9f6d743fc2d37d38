//! Per-worker routes: a closed tour depot -> deliveries -> depot built by
//! nearest-neighbor construction and improved with 2-opt until no improving
//! move remains.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::model::Point;

/// Moves must shorten the tour by more than this to count as improving.
const IMPROVEMENT_EPS: f64 = 1e-9;

/// A worker's visit order and its three travel legs, in meters.
#[derive(Debug, Clone, PartialEq)]
pub struct Route {
    /// Visit order as positions into the slice given to [`solve_route`].
    pub order: Vec<usize>,
    /// Depot to first delivery.
    pub d_ow: f64,
    /// Sum of the legs between consecutive deliveries.
    pub d_tra: f64,
    /// Last delivery back to the depot.
    pub d_ret: f64,
}

impl Route {
    pub fn length(&self) -> f64 {
        self.d_ow + self.d_tra + self.d_ret
    }

    pub fn legs(&self) -> RouteLegs {
        RouteLegs {
            d_ow: self.d_ow,
            d_tra: self.d_tra,
            d_ret: self.d_ret,
        }
    }
}

/// Leg lengths without the visit order; what evaluation needs.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct RouteLegs {
    pub d_ow: f64,
    pub d_tra: f64,
    pub d_ret: f64,
}

/// Dense symmetric distance matrix over `nodes`.
#[derive(Debug, Clone)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<f64>,
}

impl DistanceMatrix {
    pub fn new(nodes: &[Point]) -> Self {
        let n = nodes.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in (i + 1)..n {
                let v = nodes[i].distance(&nodes[j]);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        Self { n, d }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n + j]
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }
}

/// Length of the closed cycle visiting `tour` in order.
pub fn cycle_length(dist: &DistanceMatrix, tour: &[usize]) -> f64 {
    if tour.len() < 2 {
        return 0.0;
    }
    let mut len = 0.0;
    for w in tour.windows(2) {
        len += dist.get(w[0], w[1]);
    }
    len + dist.get(tour[tour.len() - 1], tour[0])
}

/// Nearest-neighbor cycle starting at node 0. Ties go to the lowest node index.
pub fn nearest_neighbor_tour(dist: &DistanceMatrix) -> Vec<usize> {
    let n = dist.len();
    if n == 0 {
        return Vec::new();
    }
    let mut visited = vec![false; n];
    let mut tour = Vec::with_capacity(n);
    let mut current = 0;
    visited[0] = true;
    tour.push(0);
    for _ in 1..n {
        let mut best = usize::MAX;
        let mut best_d = f64::INFINITY;
        for (j, &seen) in visited.iter().enumerate() {
            if !seen {
                let d = dist.get(current, j);
                if d < best_d {
                    best_d = d;
                    best = j;
                }
            }
        }
        visited[best] = true;
        tour.push(best);
        current = best;
    }
    tour
}

/// First-improvement 2-opt on a closed cycle. The node at position 0 never
/// moves. Passes repeat until one completes without an improving move, so
/// the result is a 2-opt local optimum.
pub fn two_opt(dist: &DistanceMatrix, tour: &mut [usize]) {
    let m = tour.len();
    if m < 4 {
        return;
    }
    let mut improved = true;
    while improved {
        improved = false;
        for i in 0..m - 2 {
            for j in (i + 2)..m {
                if i == 0 && j == m - 1 {
                    continue;
                }
                let a = tour[i];
                let b = tour[i + 1];
                let c = tour[j];
                let d = tour[(j + 1) % m];
                let delta = dist.get(a, c) + dist.get(b, d) - dist.get(a, b) - dist.get(c, d);
                if delta < -IMPROVEMENT_EPS {
                    tour[i + 1..=j].reverse();
                    improved = true;
                }
            }
        }
    }
}

/// 2-opt over explicit coordinates. `tour` is a cyclic order of indices into
/// `coords`; its first element stays in place.
pub fn two_opt_improve(coords: &[Point], tour: &[usize]) -> Vec<usize> {
    let dist = DistanceMatrix::new(coords);
    let mut out = tour.to_vec();
    two_opt(&dist, &mut out);
    out
}

/// Closed-cycle length over explicit coordinates.
pub fn tour_length(coords: &[Point], tour: &[usize]) -> f64 {
    let mut len = 0.0;
    for k in 0..tour.len() {
        len += coords[tour[k]].distance(&coords[tour[(k + 1) % tour.len()]]);
    }
    len
}

/// Routes a worker over `points`, starting and ending at `depot`.
pub fn solve_route(depot: Point, points: &[Point]) -> Result<Route> {
    if points.is_empty() {
        return Err(Error::InvalidInput(
            "cannot route an empty point set; a worker without deliveries has no route".into(),
        ));
    }
    let mut nodes = Vec::with_capacity(points.len() + 1);
    nodes.push(depot);
    nodes.extend_from_slice(points);
    let dist = DistanceMatrix::new(&nodes);
    let mut tour = nearest_neighbor_tour(&dist);
    two_opt(&dist, &mut tour);

    let first = tour[1];
    let last = tour[tour.len() - 1];
    let d_tra = tour[1..].windows(2).map(|w| dist.get(w[0], w[1])).sum();
    Ok(Route {
        order: tour[1..].iter().map(|&node| node - 1).collect(),
        d_ow: dist.get(0, first),
        d_tra,
        d_ret: dist.get(last, 0),
    })
}

/// Memoizes route legs by the sorted set of point ids routed.
///
/// Routing is deterministic, so a cached entry is bit-identical to a fresh
/// solve. The cache is owned by one evaluator and not shared across threads.
#[derive(Debug, Default)]
pub struct RouteCache {
    map: HashMap<Vec<u32>, RouteLegs>,
    capacity: usize,
    hits: u64,
    misses: u64,
}

impl RouteCache {
    pub const DEFAULT_CAPACITY: usize = 200_000;

    pub fn new() -> Self {
        Self::with_capacity(Self::DEFAULT_CAPACITY)
    }

    /// `capacity == 0` disables caching.
    pub fn with_capacity(capacity: usize) -> Self {
        Self {
            map: HashMap::new(),
            capacity,
            hits: 0,
            misses: 0,
        }
    }

    /// Legs for the points with the given ids. `ids` must be sorted ascending
    /// and non-empty; `positions` maps an id to its coordinates.
    pub fn legs(&mut self, depot: Point, ids: &[usize], positions: &[Point]) -> Result<RouteLegs> {
        debug_assert!(ids.windows(2).all(|w| w[0] < w[1]));
        let key: Vec<u32> = ids.iter().map(|&i| i as u32).collect();
        if let Some(legs) = self.map.get(&key) {
            self.hits += 1;
            return Ok(*legs);
        }
        self.misses += 1;
        let pts: Vec<Point> = ids.iter().map(|&i| positions[i]).collect();
        let legs = solve_route(depot, &pts)?.legs();
        if self.capacity > 0 {
            if self.map.len() >= self.capacity {
                self.map.clear();
            }
            self.map.insert(key, legs);
        }
        Ok(legs)
    }

    pub fn hits(&self) -> u64 {
        self.hits
    }

    pub fn misses(&self) -> u64 {
        self.misses
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}
