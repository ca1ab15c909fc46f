use super::WalkParams;
use crate::error::{invalid, Result};
use crate::stats::mean_stderr;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McStat {
    pub mean: f64,
    pub stderr: f64,
    /// Paths that hit the step cap; they are excluded from the estimate.
    pub capped: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct HitDistribution {
    pub m: usize,
    /// Counts of level-`m` prefixes in lexicographic order.
    pub counts: Vec<u64>,
    pub freqs: Vec<f64>,
    pub capped: usize,
}

impl HitDistribution {
    /// Every frequency lies within `k` binomial standard deviations of `3^-m`.
    pub fn within_uniform_band(&self, k: f64) -> bool {
        let total: u64 = self.counts.iter().sum();
        let q = 1.0 / self.counts.len() as f64;
        let sd = (q * (1.0 - q) / total as f64).sqrt();
        self.freqs.iter().all(|f| (f - q).abs() <= k * sd)
    }
}

enum Move {
    Up,
    Down(u8),
    Sibling(u8),
    TypeTwo,
}

/// Trailing run length of the last digit.
fn trailing_run(w: &[u8]) -> usize {
    match w.last() {
        None => 0,
        Some(&b) => w.iter().rev().take_while(|&&d| d == b).count(),
    }
}

/// Position-independent weights (in units of `(3 lambda)^-n`) of the moves from `w`.
fn choose(w: &[u8], p: &WalkParams, rng: &mut ChaCha8Rng) -> Move {
    if w.is_empty() {
        return Move::Down(rng.random_range(0..3));
    }
    let has_two = trailing_run(w) < w.len();
    let total = 3.0 * p.lambda + 3.0 + 2.0 * p.c1 + if has_two { p.c2 } else { 0.0 };
    let mut r = rng.random::<f64>() * total;
    r -= 3.0 * p.lambda;
    if r < 0.0 {
        return Move::Up;
    }
    for d in 0..3 {
        r -= 1.0;
        if r < 0.0 {
            return Move::Down(d);
        }
    }
    for k in 1..=2 {
        r -= p.c1;
        if r < 0.0 {
            return Move::Sibling(k);
        }
    }
    if has_two {
        Move::TypeTwo
    } else {
        Move::Sibling(2)
    }
}

fn apply(w: &mut Vec<u8>, mv: Move) {
    match mv {
        Move::Up => {
            w.pop();
        }
        Move::Down(d) => w.push(d),
        Move::Sibling(k) => {
            let last = w.len() - 1;
            w[last] = (w[last] + k) % 3;
        }
        Move::TypeTwo => {
            let m = trailing_run(w);
            let k = w.len() - m - 1;
            let (a, b) = (w[k], w[w.len() - 1]);
            w[k] = b;
            w[k + 1..].iter_mut().for_each(|d| *d = a);
        }
    }
}

/// Runs `samples` paths split over the parameter's RNG streams. `path` returns
/// `None` for paths that hit the step cap.
fn run_paths<T: Send>(
    p: &WalkParams,
    path: impl Fn(&mut ChaCha8Rng) -> Option<T> + Sync,
) -> (Vec<T>, usize) {
    let per = p.samples.div_ceil(p.streams);
    let chunks: Vec<(Vec<T>, usize)> = (0..p.streams)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
            rng.set_stream(s as u64);
            let count = per.min(p.samples.saturating_sub(s * per));
            let mut out = Vec::with_capacity(count);
            let mut capped = 0;
            for _ in 0..count {
                match path(&mut rng) {
                    Some(v) => out.push(v),
                    None => capped += 1,
                }
            }
            (out, capped)
        })
        .collect();
    let capped = chunks.iter().map(|c| c.1).sum();
    (chunks.into_iter().flat_map(|c| c.0).collect(), capped)
}

fn stat(values: Vec<f64>, capped: usize) -> Result<McStat> {
    if values.len() < 2 {
        return invalid("fewer than two completed paths");
    }
    let (mean, stderr) = mean_stderr(&values);
    Ok(McStat { mean, stderr, capped })
}

/// Mean number of visits to `o` (the start counts) before reaching the escape depth.
pub fn green_oo_mc(p: &WalkParams) -> Result<McStat> {
    p.validate()?;
    let depth = p.escape_depth();
    let (v, capped) = run_paths(p, |rng| {
        let mut w = Vec::with_capacity(depth + 1);
        let mut visits = 1u64;
        for _ in 0..p.step_cap {
            let mv = choose(&w, p, rng);
            apply(&mut w, mv);
            if w.is_empty() {
                visits += 1;
            }
            if w.len() >= depth {
                return Some(visits as f64);
            }
        }
        None
    });
    stat(v, capped)
}

/// Level-`m` prefix of the word at the escape depth.
pub fn boundary_hit_distribution(p: &WalkParams, m: usize) -> Result<HitDistribution> {
    p.validate()?;
    if p.samples == 0 {
        return invalid("samples must be at least 1");
    }
    let depth = p.escape_depth().max(m + 1);
    if m > 12 {
        return invalid("prefix level too large");
    }
    let (v, capped) = run_paths(p, |rng| {
        let mut w = Vec::with_capacity(depth + 1);
        for _ in 0..p.step_cap {
            let mv = choose(&w, p, rng);
            apply(&mut w, mv);
            if w.len() >= depth {
                return Some(w[..m].iter().fold(0usize, |acc, &d| acc * 3 + d as usize));
            }
        }
        None
    });
    let mut counts = vec![0u64; 3usize.pow(m as u32)];
    for i in &v {
        counts[*i] += 1;
    }
    let total = v.len().max(1) as f64;
    let freqs = counts.iter().map(|&c| c as f64 / total).collect();
    Ok(HitDistribution { m, counts, freqs, capped })
}

/// Lifetime of the continuous-time walk: holding times at `x` are exponential
/// with mean `m(x) / pi(x)`.
pub fn ctrw_lifetime(p: &WalkParams) -> Result<McStat> {
    p.validate()?;
    let depth = p.escape_depth();
    let (v, capped) = run_paths(p, |rng| {
        let mut w: Vec<u8> = Vec::with_capacity(depth + 1);
        let mut t = 0.0;
        for _ in 0..p.step_cap {
            let n = w.len();
            let mean = if n == 0 {
                1.0 / 3.0
            } else {
                let two = if trailing_run(&w) < n { p.c2 } else { 0.0 };
                p.c.powi(n as i32) / (3.0 * p.lambda + 3.0 + 2.0 * p.c1 + two)
            };
            let e: f64 = rng.sample(Exp1);
            t += mean * e;
            let mv = choose(&w, p, rng);
            apply(&mut w, mv);
            if w.len() >= depth {
                return Some(t);
            }
        }
        None
    });
    stat(v, capped)
}

/// Fraction of paths whose level reaches `level` within `steps` steps.
pub fn escape_fraction(p: &WalkParams, level: usize, steps: usize) -> Result<f64> {
    p.validate()?;
    let (v, _) = run_paths(p, |rng| {
        let mut w = Vec::with_capacity(level + 1);
        for _ in 0..steps {
            let mv = choose(&w, p, rng);
            apply(&mut w, mv);
            if w.len() >= level {
                return Some(1.0);
            }
        }
        Some(0.0)
    });
    Ok(v.iter().sum::<f64>() / v.len().max(1) as f64)
}
