//! File formats and the synthetic instance generator.
//!
//! Instances are JSON:
//!
//! ```json
//! {
//!   "name": "day-1",
//!   "depot": [1000.0, 1000.0],
//!   "speed_km_h": 5.0,
//!   "default_t_in_s": 57.64,
//!   "default_t_ex_s": 132.76,
//!   "n_workers": 12,
//!   "points": [{"id": 0, "x": 12.5, "y": 830.0}, {"id": 1, "x": 90.0, "y": 14.0, "t_ex_s": 300.0}]
//! }
//! ```
//!
//! Exactly one of `speed_m_s` / `speed_km_h` must be given. Per-point
//! `t_in_s` / `t_ex_s` override the document defaults. Coordinates are planar
//! meters.

use std::collections::HashSet;
use std::fs;
use std::path::Path;

use rand::Rng as _;
use rand_distr::{Distribution as _, Normal};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::model::{
    km_h_to_m_s, BoundingBox, CircleSolution, DeliveryPoint, Evaluation, Instance, IntegerSolution, Point,
    DEFAULT_SPEED_KM_H, DEFAULT_T_EX_S, DEFAULT_T_IN_S,
};
use crate::rng::rng_from;
use crate::solvers::SolveResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub name: String,
    pub depot: [f64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speed_m_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub speed_km_h: Option<f64>,
    #[serde(default = "default_t_in")]
    pub default_t_in_s: f64,
    #[serde(default = "default_t_ex")]
    pub default_t_ex_s: f64,
    pub n_workers: usize,
    pub points: Vec<PointRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointRecord {
    pub id: usize,
    pub x: f64,
    pub y: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_in_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_ex_s: Option<f64>,
}

fn default_t_in() -> f64 {
    DEFAULT_T_IN_S
}

fn default_t_ex() -> f64 {
    DEFAULT_T_EX_S
}

impl InstanceFile {
    pub fn into_instance(self) -> Result<Instance> {
        let speed = match (self.speed_m_s, self.speed_km_h) {
            (Some(_), Some(_)) => {
                return Err(Error::parse("speed_m_s", "give either speed_m_s or speed_km_h, not both"))
            }
            (None, None) => return Err(Error::parse("speed_m_s", "missing speed (speed_m_s or speed_km_h)")),
            (Some(v), None) => check_speed("speed_m_s", v)?,
            (None, Some(v)) => km_h_to_m_s(check_speed("speed_km_h", v)?),
        };
        if self.n_workers == 0 {
            return Err(Error::parse("n_workers", "must be at least 1"));
        }
        if self.points.len() < self.n_workers {
            return Err(Error::parse(
                "points",
                format!("{} points for {} workers", self.points.len(), self.n_workers),
            ));
        }
        for (field, v) in [("default_t_in_s", self.default_t_in_s), ("default_t_ex_s", self.default_t_ex_s)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::parse(field, format!("must be a non-negative number, got {v}")));
            }
        }
        if !self.depot.iter().all(|v| v.is_finite()) {
            return Err(Error::parse("depot", "coordinates must be finite"));
        }
        let mut seen = HashSet::new();
        let mut points = Vec::with_capacity(self.points.len());
        for (i, p) in self.points.into_iter().enumerate() {
            if !seen.insert(p.id) {
                return Err(Error::parse(format!("points[{i}].id"), format!("duplicate id {}", p.id)));
            }
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::parse(format!("points[{i}]"), "coordinates must be finite"));
            }
            let t_in = p.t_in_s.unwrap_or(self.default_t_in_s);
            let t_ex = p.t_ex_s.unwrap_or(self.default_t_ex_s);
            for (field, v) in [("t_in_s", t_in), ("t_ex_s", t_ex)] {
                if !(v >= 0.0) || !v.is_finite() {
                    return Err(Error::parse(format!("points[{i}].{field}"), format!("must be non-negative, got {v}")));
                }
            }
            points.push(DeliveryPoint::new(p.id, p.x, p.y, t_in, t_ex));
        }
        let n = points.len();
        if let Some(p) = points.iter().find(|p| p.id >= n) {
            return Err(Error::parse("points.id", format!("ids must cover 0..{n}; found {}", p.id)));
        }
        Instance::new(self.name, Point::new(self.depot[0], self.depot[1]), points, self.n_workers, speed)
    }

    /// Document-level handling defaults are taken from point 0; other points
    /// carry explicit values only where they differ.
    pub fn from_instance(instance: &Instance) -> Self {
        let first = instance.points()[0];
        let points = instance
            .points()
            .iter()
            .map(|p| PointRecord {
                id: p.id,
                x: p.x,
                y: p.y,
                t_in_s: (p.t_in != first.t_in).then_some(p.t_in),
                t_ex_s: (p.t_ex != first.t_ex).then_some(p.t_ex),
            })
            .collect();
        let depot = instance.depot();
        Self {
            name: instance.name().to_string(),
            depot: [depot.x, depot.y],
            speed_m_s: Some(instance.speed()),
            speed_km_h: None,
            default_t_in_s: first.t_in,
            default_t_ex_s: first.t_ex,
            n_workers: instance.n_workers(),
            points,
        }
    }
}

fn check_speed(field: &str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::parse(field, format!("speed must be positive, got {v}")))
    }
}

/// Maps serde errors to a parse error naming the field when serde does.
fn json_error(e: serde_json::Error) -> Error {
    let msg = e.to_string();
    let field = msg
        .split('`')
        .nth(1)
        .filter(|_| msg.contains("field"))
        .unwrap_or("document")
        .to_string();
    Error::Parse { field, message: msg }
}

pub fn parse_instance(json: &str) -> Result<Instance> {
    serde_json::from_str::<InstanceFile>(json)
        .map_err(json_error)?
        .into_instance()
}

pub fn instance_to_json(instance: &Instance) -> Result<String> {
    Ok(serde_json::to_string_pretty(&InstanceFile::from_instance(instance))? + "\n")
}

pub fn load_instance(path: impl AsRef<Path>) -> Result<Instance> {
    let path = path.as_ref();
    parse_instance(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
}

pub fn save_instance(instance: &Instance, path: impl AsRef<Path>) -> Result<()> {
    write_file(path.as_ref(), &instance_to_json(instance)?)
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PointDistribution {
    Uniform,
    /// Cluster centers uniform in the box, points Gaussian around them
    /// (clamped to the box) with standard deviation `spread_m`.
    Clustered { n_clusters: usize, spread_m: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DepotPlacement {
    Center,
    /// The `(min_x, min_y)` corner.
    Corner,
    Random,
}

/// Synthetic instance description. Reference day profiles are 240/12
/// (low), 392/12 (average) and 628/13 (high).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    #[serde(default)]
    pub name: Option<String>,
    pub n_points: usize,
    pub n_workers: usize,
    pub distribution: PointDistribution,
    #[serde(default = "default_bbox")]
    pub bbox: BoundingBox,
    pub depot_placement: DepotPlacement,
    #[serde(default = "default_speed")]
    pub speed_km_h: f64,
    #[serde(default = "default_t_in")]
    pub t_in_s: f64,
    #[serde(default = "default_t_ex")]
    pub t_ex_s: f64,
    pub seed: u64,
}

/// 4 km square: compact 20-point zones around a central depot then take
/// about 8 000-8 500 s per worker, the scale of a real 240-package day.
fn default_bbox() -> BoundingBox {
    BoundingBox::new(0.0, 0.0, 4000.0, 4000.0)
}

fn default_speed() -> f64 {
    DEFAULT_SPEED_KM_H
}

impl GeneratorSpec {
    /// Uniform points in a 4 km square, depot at the center, reference
    /// handling times and speed.
    pub fn uniform(n_points: usize, n_workers: usize, seed: u64) -> Self {
        Self {
            name: None,
            n_points,
            n_workers,
            distribution: PointDistribution::Uniform,
            bbox: default_bbox(),
            depot_placement: DepotPlacement::Center,
            speed_km_h: DEFAULT_SPEED_KM_H,
            t_in_s: DEFAULT_T_IN_S,
            t_ex_s: DEFAULT_T_EX_S,
            seed,
        }
    }

    pub fn clustered(n_points: usize, n_workers: usize, n_clusters: usize, spread_m: f64, seed: u64) -> Self {
        Self {
            distribution: PointDistribution::Clustered { n_clusters, spread_m },
            ..Self::uniform(n_points, n_workers, seed)
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_workers == 0 || self.n_points < self.n_workers {
            return Err(Error::InvalidParameter(format!(
                "need n_points >= n_workers >= 1, got {} points / {} workers",
                self.n_points, self.n_workers
            )));
        }
        let b = &self.bbox;
        if !(b.max_x >= b.min_x && b.max_y >= b.min_y) || ![b.min_x, b.min_y, b.max_x, b.max_y].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidParameter("bbox must be finite with min <= max".into()));
        }
        if let PointDistribution::Clustered { n_clusters, spread_m } = self.distribution {
            if n_clusters == 0 || !(spread_m >= 0.0) || !spread_m.is_finite() {
                return Err(Error::InvalidParameter(
                    "clustered generation needs n_clusters >= 1 and a finite spread_m >= 0".into(),
                ));
            }
        }
        Ok(())
    }
}

/// A generated instance with the generator's ground truth: cluster centers
/// and each point's component (empty / all zero for uniform instances).
#[derive(Debug, Clone)]
pub struct Generated {
    pub instance: Instance,
    pub centers: Vec<Point>,
    pub components: Vec<usize>,
}

pub fn generate_instance(spec: &GeneratorSpec) -> Result<Instance> {
    Ok(generate_with_truth(spec)?.instance)
}

/// Point `i` of a clustered instance belongs to component `i % n_clusters`.
pub fn generate_with_truth(spec: &GeneratorSpec) -> Result<Generated> {
    spec.validate()?;
    let mut rng = rng_from(spec.seed);
    let b = spec.bbox;
    let uniform = |rng: &mut crate::rng::Rng| {
        Point::new(
            if b.max_x > b.min_x { rng.random_range(b.min_x..b.max_x) } else { b.min_x },
            if b.max_y > b.min_y { rng.random_range(b.min_y..b.max_y) } else { b.min_y },
        )
    };
    let (positions, centers, components) = match spec.distribution {
        PointDistribution::Uniform => (
            (0..spec.n_points).map(|_| uniform(&mut rng)).collect::<Vec<_>>(),
            Vec::new(),
            vec![0; spec.n_points],
        ),
        PointDistribution::Clustered { n_clusters, spread_m } => {
            let centers: Vec<Point> = (0..n_clusters).map(|_| uniform(&mut rng)).collect();
            let noise = Normal::new(0.0, spread_m).expect("validated spread");
            let components: Vec<usize> = (0..spec.n_points).map(|i| i % n_clusters).collect();
            let positions = components
                .iter()
                .map(|&c| {
                    let x = centers[c].x + noise.sample(&mut rng);
                    let y = centers[c].y + noise.sample(&mut rng);
                    Point::new(x.clamp(b.min_x, b.max_x), y.clamp(b.min_y, b.max_y))
                })
                .collect();
            (positions, centers, components)
        }
    };
    let depot = match spec.depot_placement {
        DepotPlacement::Center => b.center(),
        DepotPlacement::Corner => Point::new(b.min_x, b.min_y),
        DepotPlacement::Random => uniform(&mut rng),
    };
    let points = positions
        .iter()
        .enumerate()
        .map(|(i, p)| DeliveryPoint::new(i, p.x, p.y, spec.t_in_s, spec.t_ex_s))
        .collect();
    let name = spec
        .name
        .clone()
        .unwrap_or_else(|| format!("synthetic-{}x{}-s{}", spec.n_points, spec.n_workers, spec.seed));
    let instance = Instance::new(name, depot, points, spec.n_workers, km_h_to_m_s(spec.speed_km_h))?;
    Ok(Generated {
        instance,
        centers,
        components,
    })
}

/// FeatureCollection with one Point per delivery (`id`, `worker`) and one for
/// the depot (`role: "depot"`).
pub fn assignment_geojson(instance: &Instance, assignment: &IntegerSolution) -> Result<Value> {
    assignment.validate(instance)?;
    let mut features: Vec<Value> = instance
        .points()
        .iter()
        .zip(assignment.assignment())
        .map(|(p, &w)| {
            json!({
                "type": "Feature",
                "geometry": {"type": "Point", "coordinates": [p.x, p.y]},
                "properties": {"id": p.id, "worker": w},
            })
        })
        .collect();
    let d = instance.depot();
    features.push(json!({
        "type": "Feature",
        "geometry": {"type": "Point", "coordinates": [d.x, d.y]},
        "properties": {"role": "depot"},
    }));
    Ok(json!({"type": "FeatureCollection", "features": features}))
}

pub fn export_assignment_geojson(
    instance: &Instance,
    assignment: &IntegerSolution,
    path: impl AsRef<Path>,
) -> Result<()> {
    let doc = assignment_geojson(instance, assignment)?;
    write_file(path.as_ref(), &(serde_json::to_string_pretty(&doc)? + "\n"))
}

/// Reads the assignment back from an exported FeatureCollection.
pub fn assignment_from_geojson(doc: &Value) -> Result<IntegerSolution> {
    let features = doc["features"]
        .as_array()
        .ok_or_else(|| Error::parse("features", "expected an array"))?;
    let mut pairs = Vec::new();
    for (i, f) in features.iter().enumerate() {
        let props = &f["properties"];
        if props.get("role").and_then(Value::as_str) == Some("depot") {
            continue;
        }
        let get = |key: &str| {
            props[key]
                .as_u64()
                .map(|v| v as usize)
                .ok_or_else(|| Error::parse(format!("features[{i}].properties.{key}"), "expected an integer"))
        };
        pairs.push((get("id")?, get("worker")?));
    }
    pairs.sort_unstable();
    if pairs.iter().enumerate().any(|(i, &(id, _))| id != i) {
        return Err(Error::parse("features", "point ids must cover 0..n exactly once"));
    }
    Ok(IntegerSolution::new(pairs.into_iter().map(|(_, w)| w).collect()))
}

pub fn import_assignment_geojson(path: impl AsRef<Path>) -> Result<IntegerSolution> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    assignment_from_geojson(&serde_json::from_str(&text).map_err(json_error)?)
}

/// What `solve` writes. Everything here is a function of the instance, the
/// configuration and the seed; wall time is deliberately not recorded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub algorithm: String,
    pub instance: String,
    pub seed: u64,
    pub fitness: f64,
    pub total_time: f64,
    pub assignment: IntegerSolution,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub circles: Option<CircleSolution>,
    pub evaluation: Evaluation,
    pub history: Vec<f64>,
    pub evaluations: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<Value>,
}

impl ResultFile {
    pub fn new(instance: &Instance, seed: u64, result: &SolveResult, config: Option<Value>) -> Self {
        Self {
            algorithm: result.algorithm.clone(),
            instance: instance.name().to_string(),
            seed,
            fitness: result.fitness(),
            total_time: result.best_evaluation.total_time,
            assignment: result.best_solution.clone(),
            circles: result.circles.clone(),
            evaluation: result.best_evaluation.clone(),
            history: result.history.clone(),
            evaluations: result.evaluations,
            config,
        }
    }

    /// Result for an exhaustive optimum.
    pub fn optimum(instance: &Instance, solution: &IntegerSolution, evaluation: &Evaluation) -> Self {
        Self {
            algorithm: "oracle".into(),
            instance: instance.name().to_string(),
            seed: 0,
            fitness: evaluation.fitness,
            total_time: evaluation.total_time,
            assignment: solution.clone(),
            circles: None,
            evaluation: evaluation.clone(),
            history: vec![evaluation.fitness],
            evaluations: 0,
            config: None,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        write_file(path.as_ref(), &self.to_json()?)
    }
}
