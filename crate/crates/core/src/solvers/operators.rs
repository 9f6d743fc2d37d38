//! Variation operators for both encodings.

use rand::Rng as _;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::model::{BoundingBox, Circle, CircleSolution, IntegerSolution};
use crate::rng::Rng;

/// Mask with each entry true with probability `frac`.
pub fn random_mask(rng: &mut Rng, len: usize, frac: f64) -> Vec<bool> {
    (0..len).map(|_| rng.random_bool(frac)).collect()
}

fn check_lengths(a: usize, b: usize, mask: usize) -> Result<()> {
    if a != b || a != mask {
        return Err(Error::InvalidInput(format!(
            "crossover length mismatch: parents {a} and {b}, mask {mask}"
        )));
    }
    Ok(())
}

/// Multi-point crossover: gene `i` from `p1` where `mask[i]`, else from `p2`.
pub fn crossover_integer(p1: &IntegerSolution, p2: &IntegerSolution, mask: &[bool]) -> Result<IntegerSolution> {
    check_lengths(p1.len(), p2.len(), mask.len())?;
    Ok(IntegerSolution::new(
        p1.assignment()
            .iter()
            .zip(p2.assignment())
            .zip(mask)
            .map(|((&a, &b), &take_first)| if take_first { a } else { b })
            .collect(),
    ))
}

/// With probability `prob`, one uniformly chosen gene gets a uniformly drawn
/// worker (possibly its current one).
pub fn mutate_integer(sol: &IntegerSolution, n_workers: usize, prob: f64, rng: &mut Rng) -> IntegerSolution {
    let mut out = sol.clone();
    if !out.is_empty() && rng.random_bool(prob) {
        let gene = rng.random_range(0..out.len());
        out.0[gene] = rng.random_range(0..n_workers);
    }
    out
}

/// Moves one uniformly chosen gene to a different worker. No-op for a
/// single worker.
pub fn force_mutate_integer(sol: &IntegerSolution, n_workers: usize, rng: &mut Rng) -> IntegerSolution {
    let mut out = sol.clone();
    if n_workers > 1 && !out.is_empty() {
        let gene = rng.random_range(0..out.len());
        let shift = rng.random_range(1..n_workers);
        out.0[gene] = (out.0[gene] + shift) % n_workers;
    }
    out
}

/// Whole circles taken from `p1` where `mask[i]`, else from `p2`.
pub fn crossover_circle_external(p1: &CircleSolution, p2: &CircleSolution, mask: &[bool]) -> Result<CircleSolution> {
    check_lengths(p1.len(), p2.len(), mask.len())?;
    Ok(CircleSolution::new(
        p1.circles()
            .iter()
            .zip(p2.circles())
            .zip(mask)
            .map(|((&a, &b), &take_first)| if take_first { a } else { b })
            .collect(),
    ))
}

/// Each of the `3 * n` scalars chosen independently; `mask` is laid out as
/// `[cx0, cy0, r0, cx1, ...]`.
pub fn crossover_circle_internal(p1: &CircleSolution, p2: &CircleSolution, mask: &[bool]) -> Result<CircleSolution> {
    check_lengths(3 * p1.len(), 3 * p2.len(), mask.len())?;
    Ok(CircleSolution::new(
        p1.circles()
            .iter()
            .zip(p2.circles())
            .zip(mask.chunks_exact(3))
            .map(|((a, b), m)| {
                Circle::new(
                    if m[0] { a.cx } else { b.cx },
                    if m[1] { a.cy } else { b.cy },
                    if m[2] { a.r } else { b.r },
                )
            })
            .collect(),
    ))
}

/// Adds N(0, sigma) noise to each scalar with probability `prob`; radii are
/// clamped at zero.
pub fn mutate_circle_smooth(sol: &CircleSolution, prob: f64, sigma: f64, rng: &mut Rng) -> Result<CircleSolution> {
    if !(sigma >= 0.0) {
        return Err(Error::InvalidParameter(format!("smooth mutation sigma must be >= 0, got {sigma}")));
    }
    let noise = Normal::new(0.0, sigma)
        .map_err(|e| Error::InvalidParameter(format!("smooth mutation sigma {sigma}: {e}")))?;
    let mut out = sol.clone();
    for c in &mut out.0 {
        for v in [&mut c.cx, &mut c.cy, &mut c.r] {
            if rng.random_bool(prob) {
                *v += noise.sample(rng);
            }
        }
        c.r = c.r.max(0.0);
    }
    Ok(out)
}

/// Draws a circle with its center uniform in `bounds` and radius in `(0, r_max]`.
pub fn random_circle(bounds: &BoundingBox, r_max: f64, rng: &mut Rng) -> Circle {
    let cx = uniform(rng, bounds.min_x, bounds.max_x);
    let cy = uniform(rng, bounds.min_y, bounds.max_y);
    // 1 - U[0, 1) lies in (0, 1].
    let r = r_max * (1.0 - rng.random::<f64>());
    Circle::new(cx, cy, r)
}

fn uniform(rng: &mut Rng, lo: f64, hi: f64) -> f64 {
    if hi > lo {
        rng.random_range(lo..=hi)
    } else {
        lo
    }
}

/// With probability `prob`, replaces one uniformly chosen circle by a fresh
/// random one.
pub fn mutate_circle_hard(
    sol: &CircleSolution,
    prob: f64,
    bounds: &BoundingBox,
    r_max: f64,
    rng: &mut Rng,
) -> CircleSolution {
    let mut out = sol.clone();
    if !out.is_empty() && rng.random_bool(prob) {
        let i = rng.random_range(0..out.len());
        out.0[i] = random_circle(bounds, r_max, rng);
    }
    out
}
