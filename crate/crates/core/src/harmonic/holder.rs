use crate::energy::VertexFunction;
use crate::error::{invalid, Result};
use crate::geometry::VertexGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MAX_PAIRS: usize = 4_000_000;

/// `max |u(p) - u(q)|^2 / (E |p - q|^{beta - alpha})` over vertex pairs, where
/// `E` is a semi-norm value of `u`. All pairs are used when there are at most
/// `MAX_PAIRS` of them, otherwise a fixed-seed sample.
pub fn holder_constant(g: &VertexGraph, u: &VertexFunction<f64>, seminorm: f64, beta: f64) -> Result<f64> {
    if !(seminorm > 0.0) {
        return invalid("Hölder statistic needs a positive semi-norm");
    }
    if u.level != g.level || u.kind != g.kind {
        return invalid("function does not live on this graph");
    }
    let expo = (beta - g.kind.alpha()) / 2.0;
    let pts: Vec<(f64, f64)> = (0..g.num_vertices()).map(|v| g.coords_f64(v)).collect();
    let stat = |i: usize, j: usize| {
        let (dx, dy) = (pts[i].0 - pts[j].0, pts[i].1 - pts[j].1);
        let d2 = dx * dx + dy * dy;
        let du = u.values[i] - u.values[j];
        du * du / d2.powf(expo)
    };
    let n = g.num_vertices();
    let mut best: f64 = 0.0;
    if n * (n - 1) / 2 <= MAX_PAIRS {
        for i in 0..n {
            for j in i + 1..n {
                best = best.max(stat(i, j));
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for _ in 0..MAX_PAIRS {
            let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
            if i != j {
                best = best.max(stat(i, j));
            }
        }
    }
    Ok(best / seminorm)
}
