//! k-means versus spectral clustering on two concentric rings.

use std::f64::consts::TAU;

use rand::Rng;
use workload_balance::clustering::{kmeans, spectral_cluster, wcss, ClusterResult, DEFAULT_MAX_ITERS};
use workload_balance::model::Point;
use workload_balance::rng::rng_from;

fn purity(result: &ClusterResult, truth: &[usize]) -> f64 {
    let agree = result.labels.iter().zip(truth).filter(|(a, b)| a == b).count();
    agree.max(truth.len() - agree) as f64 / truth.len() as f64
}

fn main() -> workload_balance::Result<()> {
    let mut rng = rng_from(9);
    let mut points = Vec::new();
    let mut truth = Vec::new();
    for (ring, radius) in [(0, 100.0), (1, 400.0)] {
        for _ in 0..100 {
            let a = rng.random_range(0.0..TAU);
            let r = radius + rng.random_range(-10.0..10.0);
            points.push(Point::new(r * a.cos(), r * a.sin()));
            truth.push(ring);
        }
    }

    let km = kmeans(&points, 2, 9, DEFAULT_MAX_ITERS)?;
    let sc = spectral_cluster(&points, 2, 9)?;
    println!("k-means:  purity {:.2}, wcss {:.0}", purity(&km, &truth), wcss(&points, &km));
    println!("spectral: purity {:.2}, wcss {:.0}", purity(&sc, &truth), wcss(&points, &sc));
    Ok(())
}
