//! Clustering used to seed the solvers and as stand-alone baselines:
//! Lloyd's k-means and normalized spectral clustering.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{IntegerSolution, Point};
use crate::rng::{derive_seed, rng_from};

pub const DEFAULT_MAX_ITERS: usize = 300;

/// Independent random initializations per k-means call; the run with the
/// lowest final WCSS is kept.
pub const KMEANS_RESTARTS: u64 = 10;

/// Maximum neighbor count of the spectral similarity graph.
pub const SPECTRAL_NEIGHBORS: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterResult {
    /// Cluster of every input point, in `0..k`.
    pub labels: Vec<usize>,
    /// Member mean of each cluster in the input plane.
    pub centroids: Vec<Point>,
    /// Lloyd iterations run (for spectral: on the embedding).
    pub iterations: usize,
}

impl ClusterResult {
    pub fn k(&self) -> usize {
        self.centroids.len()
    }

    /// Cluster `c` becomes worker `c`.
    pub fn to_assignment(&self) -> IntegerSolution {
        IntegerSolution::new(self.labels.clone())
    }
}

/// Which clustering seeds a solver.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Initializer {
    #[default]
    Kmeans,
    Spectral,
}

impl std::str::FromStr for Initializer {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kmeans" | "k-means" => Ok(Self::Kmeans),
            "spectral" | "sc" => Ok(Self::Spectral),
            other => Err(Error::Config(format!(
                "unknown initializer `{other}` (expected kmeans or spectral)"
            ))),
        }
    }
}

impl std::fmt::Display for Initializer {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Kmeans => "kmeans",
            Self::Spectral => "spectral",
        })
    }
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::InvalidParameter(format!(
            "cluster count must be in 1..={n}, got {k}"
        )));
    }
    Ok(())
}

/// Row-major points of arbitrary dimension.
struct Rows<'a> {
    data: &'a [f64],
    dim: usize,
}

impl Rows<'_> {
    fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

struct Lloyd {
    labels: Vec<usize>,
    centers: Vec<f64>,
    wcss: Vec<f64>,
    iterations: usize,
}

/// Nearest center per row (ties to the lowest center) and the resulting WCSS.
fn assign(rows: &Rows, centers: &[f64], k: usize, labels: &mut [usize]) -> f64 {
    let dim = rows.dim;
    let mut wcss = 0.0;
    for (i, label) in labels.iter_mut().enumerate() {
        let r = rows.row(i);
        let mut best = 0;
        let mut best_d = f64::INFINITY;
        for c in 0..k {
            let d = sq_dist(r, &centers[c * dim..(c + 1) * dim]);
            if d < best_d {
                best_d = d;
                best = c;
            }
        }
        *label = best;
        wcss += best_d;
    }
    wcss
}

/// Member means; clusters without members keep their old center.
fn member_means(rows: &Rows, labels: &[usize], centers: &mut [f64], k: usize) -> Vec<usize> {
    let dim = rows.dim;
    let mut sums = vec![0.0; k * dim];
    let mut counts = vec![0usize; k];
    for (i, &l) in labels.iter().enumerate() {
        counts[l] += 1;
        for (s, v) in sums[l * dim..(l + 1) * dim].iter_mut().zip(rows.row(i)) {
            *s += v;
        }
    }
    for c in 0..k {
        if counts[c] > 0 {
            for d in 0..dim {
                centers[c * dim + d] = sums[c * dim + d] / counts[c] as f64;
            }
        }
    }
    counts
}

/// Best of [`KMEANS_RESTARTS`] Lloyd runs.
fn lloyd_restarts(rows: &Rows, k: usize, seed: u64, max_iters: usize) -> Lloyd {
    let mut best: Option<(f64, Lloyd)> = None;
    for r in 0..KMEANS_RESTARTS {
        let run = lloyd(rows, k, derive_seed(seed, r), max_iters);
        let mut labels = vec![0; rows.len()];
        let score = assign(rows, &run.centers, k, &mut labels);
        if best.as_ref().is_none_or(|(s, _)| score < *s) {
            best = Some((score, run));
        }
    }
    best.expect("at least one restart").1
}

fn lloyd(rows: &Rows, k: usize, seed: u64, max_iters: usize) -> Lloyd {
    let n = rows.len();
    let dim = rows.dim;
    let mut rng = rng_from(seed);
    let mut centers = Vec::with_capacity(k * dim);
    for i in index::sample(&mut rng, n, k) {
        centers.extend_from_slice(rows.row(i));
    }

    let mut labels = vec![0; n];
    let mut wcss = vec![assign(rows, &centers, k, &mut labels)];
    let mut next = vec![0; n];
    let mut iterations = 0;
    while iterations < max_iters {
        iterations += 1;
        let counts = member_means(rows, &labels, &mut centers, k);
        // Re-seed empty clusters with the points farthest from their centers.
        let mut taken = vec![false; n];
        for c in (0..k).filter(|&c| counts[c] == 0) {
            let far = (0..n)
                .filter(|&i| !taken[i])
                .map(|i| {
                    let l = labels[i];
                    (i, sq_dist(rows.row(i), &centers[l * dim..(l + 1) * dim]))
                })
                .fold((usize::MAX, f64::NEG_INFINITY), |best, cur| {
                    if cur.1 > best.1 {
                        cur
                    } else {
                        best
                    }
                })
                .0;
            taken[far] = true;
            centers[c * dim..(c + 1) * dim].copy_from_slice(rows.row(far));
        }
        wcss.push(assign(rows, &centers, k, &mut next));
        if next == labels {
            break;
        }
        std::mem::swap(&mut labels, &mut next);
    }
    member_means(rows, &labels, &mut centers, k);
    Lloyd {
        labels,
        centers,
        wcss,
        iterations,
    }
}

/// Lloyd's k-means. Each restart starts from `k` distinct points drawn
/// uniformly at random; empty clusters are re-seeded with the point farthest
/// from its centroid.
pub fn kmeans(points: &[Point], k: usize, seed: u64, max_iters: usize) -> Result<ClusterResult> {
    kmeans_traced(points, k, seed, max_iters).map(|(r, _)| r)
}

/// [`kmeans`] plus the within-cluster sum of squares after every assignment
/// step of the kept restart.
pub fn kmeans_traced(
    points: &[Point],
    k: usize,
    seed: u64,
    max_iters: usize,
) -> Result<(ClusterResult, Vec<f64>)> {
    check_k(points.len(), k)?;
    let data: Vec<f64> = points.iter().flat_map(|p| [p.x, p.y]).collect();
    let out = lloyd_restarts(&Rows { data: &data, dim: 2 }, k, seed, max_iters);
    let centroids = out
        .centers
        .chunks_exact(2)
        .map(|c| Point::new(c[0], c[1]))
        .collect();
    Ok((
        ClusterResult {
            labels: out.labels,
            centroids,
            iterations: out.iterations,
        },
        out.wcss,
    ))
}

/// Within-cluster sum of squared distances to the reported centroids.
pub fn wcss(points: &[Point], result: &ClusterResult) -> f64 {
    points
        .iter()
        .zip(&result.labels)
        .map(|(p, &l)| {
            let c = result.centroids[l];
            (p.x - c.x).powi(2) + (p.y - c.y).powi(2)
        })
        .sum()
}

/// Spectral embedding of a point set: the first `k` eigenvectors of the
/// symmetric normalized Laplacian of a Gaussian k-nearest-neighbor graph,
/// row-normalized.
///
/// Building the embedding is the expensive part and does not depend on the
/// seed, so callers that need many clusterings of one instance build it once.
#[derive(Debug, Clone)]
pub struct SpectralEmbedding {
    k: usize,
    rows: Vec<f64>,
    eigenvalues: Vec<f64>,
}

impl SpectralEmbedding {
    pub fn new(points: &[Point], k: usize) -> Result<Self> {
        let n = points.len();
        check_k(n, k)?;
        if k == 1 || n == 1 {
            return Ok(Self {
                k,
                rows: vec![1.0; n * k],
                eigenvalues: vec![0.0; k],
            });
        }

        let mut dist = vec![0.0; n * n];
        let mut pairwise = Vec::with_capacity(n * (n - 1) / 2);
        for i in 0..n {
            for j in (i + 1)..n {
                let d = points[i].distance(&points[j]);
                dist[i * n + j] = d;
                dist[j * n + i] = d;
                pairwise.push(d);
            }
        }
        pairwise.sort_by(f64::total_cmp);
        let mid = pairwise.len() / 2;
        let mut bandwidth = if pairwise.len() % 2 == 0 {
            0.5 * (pairwise[mid - 1] + pairwise[mid])
        } else {
            pairwise[mid]
        };
        if !(bandwidth > 0.0) {
            bandwidth = 1.0;
        }

        let m = SPECTRAL_NEIGHBORS.min(n - 1);
        let mut adjacent = vec![false; n * n];
        let mut order: Vec<usize> = Vec::with_capacity(n);
        for i in 0..n {
            order.clear();
            order.extend((0..n).filter(|&j| j != i));
            order.sort_by(|&a, &b| dist[i * n + a].total_cmp(&dist[i * n + b]).then(a.cmp(&b)));
            for &j in &order[..m] {
                adjacent[i * n + j] = true;
                adjacent[j * n + i] = true;
            }
        }

        let two_s2 = 2.0 * bandwidth * bandwidth;
        let mut w = DMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                if adjacent[i * n + j] {
                    let d = dist[i * n + j];
                    w[(i, j)] = (-d * d / two_s2).exp();
                }
            }
        }
        let inv_sqrt_deg: Vec<f64> = (0..n)
            .map(|i| {
                let deg: f64 = w.row(i).sum();
                if deg > 0.0 {
                    1.0 / deg.sqrt()
                } else {
                    0.0
                }
            })
            .collect();
        let mut lap = DMatrix::<f64>::identity(n, n);
        for i in 0..n {
            for j in 0..n {
                if w[(i, j)] != 0.0 {
                    lap[(i, j)] -= inv_sqrt_deg[i] * w[(i, j)] * inv_sqrt_deg[j];
                }
            }
        }

        let eig = SymmetricEigen::new(lap);
        let mut idx: Vec<usize> = (0..n).collect();
        idx.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]).then(a.cmp(&b)));
        let chosen = &idx[..k];

        let mut rows = vec![0.0; n * k];
        for i in 0..n {
            for (c, &col) in chosen.iter().enumerate() {
                rows[i * k + c] = eig.eigenvectors[(i, col)];
            }
            let norm = rows[i * k..(i + 1) * k].iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm > 0.0 {
                rows[i * k..(i + 1) * k].iter_mut().for_each(|v| *v /= norm);
            }
        }
        Ok(Self {
            k,
            rows,
            eigenvalues: chosen.iter().map(|&c| eig.eigenvalues[c]).collect(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// The `k` smallest Laplacian eigenvalues, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    /// Embedded coordinates of point `i`.
    pub fn row(&self, i: usize) -> &[f64] {
        &self.rows[i * self.k..(i + 1) * self.k]
    }

    /// k-means on the embedding; centroids are reported as member means of
    /// the original points.
    pub fn cluster(&self, points: &[Point], seed: u64, max_iters: usize) -> ClusterResult {
        let k = self.k;
        let n = points.len();
        assert_eq!(n * k, self.rows.len(), "embedding built for a different point set");
        let out = lloyd_restarts(&Rows { data: &self.rows, dim: k }, k, seed, max_iters);

        let mut sums = vec![Point::default(); k];
        let mut counts = vec![0usize; k];
        for (p, &l) in points.iter().zip(&out.labels) {
            sums[l].x += p.x;
            sums[l].y += p.y;
            counts[l] += 1;
        }
        let global = {
            let (sx, sy) = points.iter().fold((0.0, 0.0), |(sx, sy), p| (sx + p.x, sy + p.y));
            Point::new(sx / n as f64, sy / n as f64)
        };
        let centroids = sums
            .into_iter()
            .zip(&counts)
            .map(|(s, &c)| {
                if c > 0 {
                    Point::new(s.x / c as f64, s.y / c as f64)
                } else {
                    global
                }
            })
            .collect();
        ClusterResult {
            labels: out.labels,
            centroids,
            iterations: out.iterations,
        }
    }
}

/// Spectral clustering into `k` groups.
pub fn spectral_cluster(points: &[Point], k: usize, seed: u64) -> Result<ClusterResult> {
    Ok(SpectralEmbedding::new(points, k)?.cluster(points, seed, DEFAULT_MAX_ITERS))
}
