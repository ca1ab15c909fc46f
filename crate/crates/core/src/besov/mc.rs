use crate::energy::VertexFunction;
use crate::error::{invalid, Result};
use crate::geometry::point::{graph_scale, raw_vertex};
use crate::geometry::{ExactPoint, FractalKind, VertexGraph};
use crate::harmonic::{SgHarmonic, TriadicFn};
use crate::stats::mean_stderr;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

/// A function that can be evaluated at the vertices `P_{wj}` of cells.
pub trait PointFunction: Sync {
    fn kind(&self) -> FractalKind;
    /// Deepest cell level at which [`PointFunction::value`] is defined.
    fn max_depth(&self) -> usize;
    /// Value at `f_w(p_j)`.
    fn value(&self, w: &[u8], j: u8) -> f64;
}

impl PointFunction for SgHarmonic {
    fn kind(&self) -> FractalKind {
        FractalKind::SG
    }
    fn max_depth(&self) -> usize {
        usize::MAX
    }
    fn value(&self, w: &[u8], j: u8) -> f64 {
        SgHarmonic::value(self, w, j)
    }
}

/// A vertex function on `V_N`, evaluated on cells of depth at most `N`.
pub struct GraphPointFunction<'a> {
    pub graph: &'a VertexGraph,
    pub u: &'a VertexFunction<f64>,
}

impl PointFunction for GraphPointFunction<'_> {
    fn kind(&self) -> FractalKind {
        self.graph.kind
    }
    fn max_depth(&self) -> usize {
        self.graph.level
    }
    fn value(&self, w: &[u8], j: u8) -> f64 {
        let kind = self.graph.kind;
        let (x, y) = raw_vertex(kind, w, j);
        let p = ExactPoint::new(kind, x, y, graph_scale(kind, w.len()));
        let v = self.graph.find(&p).expect("cell vertex of depth <= N lies in V_N");
        self.u.values[v as usize]
    }
}

/// `a f(x) + b f(y)` on the SC with the triadic function `f`, at any depth.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScSeparableFn {
    pub a: f64,
    pub b: f64,
}

impl PointFunction for ScSeparableFn {
    fn kind(&self) -> FractalKind {
        FractalKind::SC
    }
    fn max_depth(&self) -> usize {
        usize::MAX
    }
    fn value(&self, w: &[u8], j: u8) -> f64 {
        let (x, y) = raw_vertex(FractalKind::SC, w, j);
        let n = w.len() as u32;
        self.a * TriadicFn::half_grid_f64(x as u64, n) + self.b * TriadicFn::half_grid_f64(y as u64, n)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McParams {
    pub beta: f64,
    /// Sample points are random vertices of random cells of this depth.
    pub depth: usize,
    pub samples: usize,
    pub seed: u64,
    /// Walk dimension used for the proposal on the common-prefix length.
    pub beta_star: f64,
    /// Independent RNG streams; results do not depend on the thread count.
    pub streams: usize,
}

impl McParams {
    pub fn new(kind: FractalKind, beta: f64, depth: usize, samples: usize, seed: u64) -> Self {
        let beta_star = match kind {
            FractalKind::SG => super::sg_beta_star(),
            // Only shapes the proposal; the estimate is unbiased for any value.
            FractalKind::SC => (8.0f64 * 1.25).ln() / 3f64.ln(),
        };
        McParams { beta, depth, samples, seed, beta_star, streams: 64 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    /// `beta >= beta*` and the function is not constant: the integral may be infinite.
    pub may_diverge: bool,
}

fn max_depth_for(kind: FractalKind) -> usize {
    match kind {
        FractalKind::SG => 50,
        FractalKind::SC => 35,
    }
}

/// Monte Carlo estimate of `int int (u(x)-u(y))^2 / |x-y|^{alpha+beta} dnu dnu`.
///
/// The length `k` of the common address prefix of `x` and `y` is drawn from a
/// truncated geometric proposal with ratio `base^{beta - beta*}` and each sample
/// is reweighted by its exact probability `b^-k (1 - 1/b)`. Pairs inside one
/// depth-`d` cell are omitted.
pub fn besov_double_integral_mc<F: PointFunction + ?Sized>(u: &F, p: &McParams) -> Result<McEstimate> {
    let kind = u.kind();
    if p.depth == 0 || p.depth > u.max_depth() || p.depth > max_depth_for(kind) {
        return invalid("sample depth out of range for this function");
    }
    if p.samples < 2 || p.streams == 0 {
        return invalid("need at least two samples and one stream");
    }
    if !(p.beta > 0.0 && p.beta.is_finite()) {
        return invalid("beta must be positive");
    }
    let b = kind.alphabet_size();
    let arity = kind.cell_arity() as u8;
    let d = p.depth;
    let ratio = (kind.base() as f64).powf(p.beta - p.beta_star);
    let mut proposal: Vec<f64> = (0..d).map(|k| ratio.powi(k as i32)).collect();
    let total: f64 = proposal.iter().sum();
    proposal.iter_mut().for_each(|q| *q /= total);
    let mut cdf = proposal.clone();
    for k in 1..d {
        cdf[k] += cdf[k - 1];
    }
    let weight: Vec<f64> = (0..d)
        .map(|k| (b as f64).powi(-(k as i32)) * (1.0 - 1.0 / b as f64) / proposal[k])
        .collect();
    let expo = kind.alpha() + p.beta;
    let per = p.samples.div_ceil(p.streams);

    let draws: Vec<Vec<f64>> = (0..p.streams)
        .into_par_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
            rng.set_stream(s as u64);
            let count = per.min(p.samples.saturating_sub(s * per));
            let (mut wx, mut wy) = (vec![0u8; d], vec![0u8; d]);
            (0..count)
                .map(|_| {
                    let r: f64 = rng.random();
                    let k = cdf.iter().position(|&c| r < c).unwrap_or(d - 1);
                    for i in 0..k {
                        let c = rng.random_range(0..b as u8);
                        wx[i] = c;
                        wy[i] = c;
                    }
                    let a = rng.random_range(0..b as u8);
                    let mut c = rng.random_range(0..b as u8 - 1);
                    if c >= a {
                        c += 1;
                    }
                    wx[k] = a;
                    wy[k] = c;
                    for i in k + 1..d {
                        wx[i] = rng.random_range(0..b as u8);
                        wy[i] = rng.random_range(0..b as u8);
                    }
                    let (jx, jy) = (rng.random_range(0..arity), rng.random_range(0..arity));
                    let px = point(kind, &wx, jx);
                    let py = point(kind, &wy, jy);
                    let dist = px.dist(&py);
                    if dist == 0.0 {
                        return 0.0;
                    }
                    let du = u.value(&wx, jx) - u.value(&wy, jy);
                    weight[k] * du * du / dist.powf(expo)
                })
                .collect()
        })
        .collect();
    let all: Vec<f64> = draws.into_iter().flatten().collect();
    let (estimate, stderr) = mean_stderr(&all);
    Ok(McEstimate { estimate, stderr, may_diverge: p.beta >= p.beta_star && estimate > 0.0 })
}

fn point(kind: FractalKind, w: &[u8], j: u8) -> ExactPoint {
    let (x, y) = raw_vertex(kind, w, j);
    ExactPoint::new(kind, x, y, graph_scale(kind, w.len()))
}
