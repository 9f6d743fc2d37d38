//! Domain types shared by every solver: points, instances, the two solution
//! encodings and the per-worker working-time breakdown.
//!
//! Coordinates are planar meters, times are seconds. Worker indices are
//! 0-based everywhere in the library; reports render them 1-based.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default internal (preparation) handling time per package, seconds.
pub const DEFAULT_T_IN_S: f64 = 57.64;
/// Default external (doorstep) handling time per package, seconds.
pub const DEFAULT_T_EX_S: f64 = 132.76;
/// Default walking speed, km/h.
pub const DEFAULT_SPEED_KM_H: f64 = 5.0;

pub fn km_h_to_m_s(km_h: f64) -> f64 {
    km_h * (1000.0 / 3600.0)
}

/// A location in planar meters.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(&self, other: &Point) -> f64 {
        euclidean_distance(*self, *other)
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Self { x, y }
    }
}

pub fn euclidean_distance(a: Point, b: Point) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

/// Time in seconds to cover `distance` meters at `speed` m/s.
pub fn travel_time(distance: f64, speed: f64) -> Result<f64> {
    if !(speed > 0.0) || !speed.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "speed must be positive and finite, got {speed}"
        )));
    }
    if !(distance >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "distance must be non-negative, got {distance}"
        )));
    }
    Ok(distance / speed)
}

/// Axis-aligned rectangle in meters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub min_x: f64,
    pub min_y: f64,
    pub max_x: f64,
    pub max_y: f64,
}

impl BoundingBox {
    pub fn new(min_x: f64, min_y: f64, max_x: f64, max_y: f64) -> Self {
        Self {
            min_x,
            min_y,
            max_x,
            max_y,
        }
    }

    /// Smallest box containing every point. Panics on an empty iterator.
    pub fn around(points: impl IntoIterator<Item = Point>) -> Self {
        let mut it = points.into_iter();
        let first = it.next().expect("bounding box of an empty point set");
        let mut bb = Self::new(first.x, first.y, first.x, first.y);
        for p in it {
            bb.min_x = bb.min_x.min(p.x);
            bb.min_y = bb.min_y.min(p.y);
            bb.max_x = bb.max_x.max(p.x);
            bb.max_y = bb.max_y.max(p.y);
        }
        bb
    }

    pub fn width(&self) -> f64 {
        self.max_x - self.min_x
    }

    pub fn height(&self) -> f64 {
        self.max_y - self.min_y
    }

    pub fn diagonal(&self) -> f64 {
        self.width().hypot(self.height())
    }

    pub fn center(&self) -> Point {
        Point::new(
            0.5 * (self.min_x + self.max_x),
            0.5 * (self.min_y + self.max_y),
        )
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.min_x && p.x <= self.max_x && p.y >= self.min_y && p.y <= self.max_y
    }
}

/// One package to deliver.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeliveryPoint {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    /// Internal handling time, seconds.
    pub t_in: f64,
    /// External handling time, seconds.
    pub t_ex: f64,
}

impl DeliveryPoint {
    pub fn new(id: usize, x: f64, y: f64, t_in: f64, t_ex: f64) -> Self {
        Self {
            id,
            x,
            y,
            t_in,
            t_ex,
        }
    }

    pub fn pos(&self) -> Point {
        Point::new(self.x, self.y)
    }
}

/// Immutable problem description.
///
/// Points are stored ordered by id, so `points[i].id == i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    name: String,
    depot: Point,
    points: Vec<DeliveryPoint>,
    n_workers: usize,
    speed: f64,
}

impl Instance {
    /// Validates and builds an instance. Points may be given in any order;
    /// their ids must be exactly `0..points.len()`.
    pub fn new(
        name: impl Into<String>,
        depot: Point,
        mut points: Vec<DeliveryPoint>,
        n_workers: usize,
        speed: f64,
    ) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("instance has no delivery points".into()));
        }
        if n_workers == 0 {
            return Err(Error::InvalidParameter("n_workers must be at least 1".into()));
        }
        if !(speed > 0.0) || !speed.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "speed must be positive and finite, got {speed}"
            )));
        }
        if points.len() < n_workers {
            return Err(Error::InvalidInput(format!(
                "{} delivery points for {} workers; need at least one point per worker",
                points.len(),
                n_workers
            )));
        }
        if !depot.x.is_finite() || !depot.y.is_finite() {
            return Err(Error::InvalidInput("depot coordinates must be finite".into()));
        }
        points.sort_by_key(|p| p.id);
        for (i, p) in points.iter().enumerate() {
            if p.id != i {
                return Err(Error::InvalidInput(format!(
                    "point ids must be unique and cover 0..{}; found id {} at sorted position {i}",
                    points.len(),
                    p.id
                )));
            }
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "point {} has non-finite coordinates",
                    p.id
                )));
            }
            if !(p.t_in >= 0.0) || !(p.t_ex >= 0.0) {
                return Err(Error::InvalidInput(format!(
                    "point {} has negative handling time",
                    p.id
                )));
            }
        }
        Ok(Self {
            name: name.into(),
            depot,
            points,
            n_workers,
            speed,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn depot(&self) -> Point {
        self.depot
    }

    pub fn points(&self) -> &[DeliveryPoint] {
        &self.points
    }

    pub fn point(&self, id: usize) -> &DeliveryPoint {
        &self.points[id]
    }

    pub fn positions(&self) -> Vec<Point> {
        self.points.iter().map(DeliveryPoint::pos).collect()
    }

    pub fn n_points(&self) -> usize {
        self.points.len()
    }

    pub fn n_workers(&self) -> usize {
        self.n_workers
    }

    /// Worker speed in m/s.
    pub fn speed(&self) -> f64 {
        self.speed
    }

    /// Bounding box of the delivery points (the depot is not included).
    pub fn bounds(&self) -> BoundingBox {
        BoundingBox::around(self.points.iter().map(DeliveryPoint::pos))
    }

    /// Same instance with a different worker count.
    pub fn with_workers(&self, n_workers: usize) -> Result<Self> {
        Self::new(
            self.name.clone(),
            self.depot,
            self.points.clone(),
            n_workers,
            self.speed,
        )
    }
}

/// Direct encoding: the worker index of every delivery point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntegerSolution(pub Vec<usize>);

impl IntegerSolution {
    pub fn new(assignment: Vec<usize>) -> Self {
        Self(assignment)
    }

    pub fn assignment(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn validate(&self, instance: &Instance) -> Result<()> {
        if self.0.len() != instance.n_points() {
            return Err(Error::InvalidInput(format!(
                "assignment has {} entries for {} points",
                self.0.len(),
                instance.n_points()
            )));
        }
        if let Some((i, &w)) = self
            .0
            .iter()
            .enumerate()
            .find(|(_, &w)| w >= instance.n_workers())
        {
            return Err(Error::InvalidInput(format!(
                "point {i} assigned to worker {w}, but there are only {} workers",
                instance.n_workers()
            )));
        }
        Ok(())
    }

    /// Point ids per worker, each list in ascending id order.
    pub fn groups(&self, n_workers: usize) -> Vec<Vec<usize>> {
        let mut groups = vec![Vec::new(); n_workers];
        for (id, &w) in self.0.iter().enumerate() {
            groups[w].push(id);
        }
        groups
    }
}

/// A circular work zone.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Circle {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
}

impl Circle {
    pub fn new(cx: f64, cy: f64, r: f64) -> Self {
        Self { cx, cy, r }
    }

    pub fn center(&self) -> Point {
        Point::new(self.cx, self.cy)
    }

    /// Closed-disk membership: a point on the boundary is inside.
    pub fn contains(&self, p: Point) -> bool {
        self.center().distance(&p) <= self.r
    }
}

/// Indirect encoding: one circular zone per worker.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CircleSolution(pub Vec<Circle>);

impl CircleSolution {
    pub fn new(circles: Vec<Circle>) -> Self {
        Self(circles)
    }

    pub fn circles(&self) -> &[Circle] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn validate(&self, instance: &Instance) -> Result<()> {
        if self.0.len() != instance.n_workers() {
            return Err(Error::InvalidInput(format!(
                "{} circles for {} workers",
                self.0.len(),
                instance.n_workers()
            )));
        }
        if let Some(i) = self.0.iter().position(|c| !(c.r >= 0.0)) {
            return Err(Error::InvalidInput(format!("circle {i} has a negative radius")));
        }
        Ok(())
    }
}

/// The five components of one worker's day, in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct TimeBreakdown {
    /// Depot to first delivery.
    pub t_ow: f64,
    /// Internal handling, summed over the worker's packages.
    pub t_int: f64,
    /// Travel between consecutive deliveries.
    pub t_tra: f64,
    /// External handling, summed over the worker's packages.
    pub t_ext: f64,
    /// Last delivery back to the depot.
    pub t_ret: f64,
    pub total: f64,
}

impl TimeBreakdown {
    pub fn from_components(t_ow: f64, t_int: f64, t_tra: f64, t_ext: f64, t_ret: f64) -> Self {
        Self {
            t_ow,
            t_int,
            t_tra,
            t_ext,
            t_ret,
            total: t_int + t_ow + t_tra + t_ext + t_ret,
        }
    }
}

/// Result of evaluating one assignment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub per_worker: Vec<TimeBreakdown>,
    /// Spread between the busiest and the idlest worker, seconds.
    pub fitness: f64,
    /// Sum of all workers' totals, seconds.
    pub total_time: f64,
}

impl Evaluation {
    pub fn from_breakdowns(per_worker: Vec<TimeBreakdown>) -> Self {
        let fitness = workload_spread(per_worker.iter().map(|b| b.total));
        let total_time = per_worker.iter().map(|b| b.total).sum();
        Self {
            per_worker,
            fitness,
            total_time,
        }
    }

    pub fn totals(&self) -> Vec<f64> {
        self.per_worker.iter().map(|b| b.total).collect()
    }
}

/// `max - min` over worker totals; 0 for an empty or single-worker set.
pub fn workload_spread(totals: impl IntoIterator<Item = f64>) -> f64 {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for t in totals {
        lo = lo.min(t);
        hi = hi.max(t);
    }
    if hi >= lo {
        hi - lo
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn walking() -> f64 {
        km_h_to_m_s(DEFAULT_SPEED_KM_H)
    }

    #[test]
    fn distance_examples() {
        assert_eq!(euclidean_distance(Point::new(0.0, 0.0), Point::new(3.0, 4.0)), 5.0);
        assert_eq!(euclidean_distance(Point::new(7.0, 2.0), Point::new(7.0, 2.0)), 0.0);
        assert_eq!(euclidean_distance(Point::new(0.0, 0.0), Point::new(100.0, 0.0)), 100.0);
    }

    #[test]
    fn travel_time_examples() {
        assert!((travel_time(1000.0, walking()).unwrap() - 720.0).abs() < 1e-9);
        assert_eq!(travel_time(0.0, walking()).unwrap(), 0.0);
        assert!((travel_time(100.0, walking()).unwrap() - 72.0).abs() < 1e-9);
    }

    #[test]
    fn travel_time_rejects_bad_speed() {
        assert!(matches!(travel_time(10.0, 0.0), Err(Error::InvalidParameter(_))));
        assert!(matches!(travel_time(10.0, -1.0), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn instance_validation() {
        let p = |id, x| DeliveryPoint::new(id, x, 0.0, 1.0, 1.0);
        let depot = Point::default();
        assert!(Instance::new("ok", depot, vec![p(1, 1.0), p(0, 2.0)], 2, 1.0).is_ok());
        assert!(Instance::new("dup", depot, vec![p(0, 1.0), p(0, 2.0)], 1, 1.0).is_err());
        assert!(Instance::new("gap", depot, vec![p(0, 1.0), p(2, 2.0)], 1, 1.0).is_err());
        assert!(Instance::new("few", depot, vec![p(0, 1.0)], 2, 1.0).is_err());
        assert!(Instance::new("speed", depot, vec![p(0, 1.0)], 1, 0.0).is_err());
        assert!(Instance::new("empty", depot, vec![], 1, 1.0).is_err());
        let neg = DeliveryPoint::new(0, 0.0, 0.0, -1.0, 0.0);
        assert!(Instance::new("neg", depot, vec![neg], 1, 1.0).is_err());
    }

    #[test]
    fn points_sorted_by_id() {
        let pts = vec![
            DeliveryPoint::new(2, 2.0, 0.0, 0.0, 0.0),
            DeliveryPoint::new(0, 0.0, 0.0, 0.0, 0.0),
            DeliveryPoint::new(1, 1.0, 0.0, 0.0, 0.0),
        ];
        let inst = Instance::new("s", Point::default(), pts, 1, 1.0).unwrap();
        for (i, p) in inst.points().iter().enumerate() {
            assert_eq!(p.id, i);
            assert_eq!(p.x, i as f64);
        }
    }

    #[test]
    fn solution_validation() {
        let pts = (0..3).map(|i| DeliveryPoint::new(i, i as f64, 0.0, 0.0, 0.0)).collect();
        let inst = Instance::new("s", Point::default(), pts, 2, 1.0).unwrap();
        assert!(IntegerSolution::new(vec![0, 1, 1]).validate(&inst).is_ok());
        assert!(IntegerSolution::new(vec![0, 1]).validate(&inst).is_err());
        assert!(IntegerSolution::new(vec![0, 2, 1]).validate(&inst).is_err());
        let circles = CircleSolution::new(vec![Circle::new(0.0, 0.0, 1.0); 2]);
        assert!(circles.validate(&inst).is_ok());
        let bad = CircleSolution::new(vec![Circle::new(0.0, 0.0, -1.0); 2]);
        assert!(bad.validate(&inst).is_err());
    }

    #[test]
    fn spread_of_single_worker_is_zero() {
        assert_eq!(workload_spread([42.0]), 0.0);
        assert_eq!(workload_spread(std::iter::empty()), 0.0);
        assert_eq!(workload_spread([3.0, 10.0, 7.0]), 7.0);
    }

    proptest! {
        #[test]
        fn distance_is_a_metric(
            ax in -1e4f64..1e4, ay in -1e4f64..1e4,
            bx in -1e4f64..1e4, by in -1e4f64..1e4,
            cx in -1e4f64..1e4, cy in -1e4f64..1e4,
        ) {
            let (a, b, c) = (Point::new(ax, ay), Point::new(bx, by), Point::new(cx, cy));
            let ab = euclidean_distance(a, b);
            prop_assert!(ab >= 0.0);
            prop_assert_eq!(ab, euclidean_distance(b, a));
            prop_assert_eq!(euclidean_distance(a, a), 0.0);
            let slack = 1e-9 * (ab + euclidean_distance(b, c) + 1.0);
            prop_assert!(euclidean_distance(a, c) <= ab + euclidean_distance(b, c) + slack);
        }
    }
}
