use crate::error::{invalid, Error, Result};
use crate::geometry::{FractalKind, VertexGraph};
use crate::network::{SolverOptions, WeightedNetwork};
use num_rational::Ratio;

/// A Euclidean ball `B(center, r)` in the unit square with inner ratio `delta`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HarnackBall {
    pub cx: Ratio<i128>,
    pub cy: Ratio<i128>,
    pub r: Ratio<i128>,
    pub delta: Ratio<i128>,
}

impl HarnackBall {
    /// Center `(1/2, 1/3)`, radius `1/4`, inner ratio `1/2`.
    pub fn standard() -> HarnackBall {
        HarnackBall {
            cx: Ratio::new(1, 2),
            cy: Ratio::new(1, 3),
            r: Ratio::new(1, 4),
            delta: Ratio::new(1, 2),
        }
    }

    /// Image of the ball under the SC contraction `f_w`.
    pub fn mapped(&self, w: &[u8]) -> HarnackBall {
        let mut b = *self;
        for &d in w.iter().rev() {
            let (px, py) = crate::geometry::point_of(FractalKind::SC, &crate::Word::power(d, 1))
                .map(|p| (Ratio::new(p.x as i128, 2), Ratio::new(p.y as i128, 2)))
                .expect("single digit words have a point");
            let third = Ratio::new(1, 3);
            b.cx = (b.cx + px * 2) * third;
            b.cy = (b.cy + py * 2) * third;
            b.r *= third;
        }
        b
    }
}

/// Dirichlet problem on `V_n ∩ B(center, r)`: vertices strictly inside are
/// unknowns, their neighbours outside (including on the sphere) carry data.
#[derive(Clone, Debug)]
pub struct HarnackProblem {
    net: WeightedNetwork,
    interior: Vec<usize>,
    pub boundary: Vec<usize>,
    inner: Vec<usize>,
    opts: SolverOptions,
}

fn dist2(g: &VertexGraph, v: usize, cx: Ratio<i128>, cy: Ratio<i128>) -> Ratio<i128> {
    let (x, y) = g.raw_coords(v);
    let den = 2 * 3i128.pow(g.scale());
    let dx = Ratio::new(x as i128, den) - cx;
    let dy = Ratio::new(y as i128, den) - cy;
    dx * dx + dy * dy
}

impl HarnackProblem {
    pub fn new(g: &VertexGraph, ball: &HarnackBall) -> Result<Self> {
        if g.kind != FractalKind::SC {
            return invalid("Harnack experiments run on the SC");
        }
        if !(ball.delta > Ratio::from_integer(0) && ball.delta < Ratio::from_integer(1)) {
            return invalid("delta must lie in (0, 1)");
        }
        let r2 = ball.r * ball.r;
        let ir2 = r2 * ball.delta * ball.delta;
        let mut local = vec![usize::MAX; g.num_vertices()];
        let mut interior = Vec::new();
        let mut inner = Vec::new();
        for v in 0..g.num_vertices() {
            let d = dist2(g, v, ball.cx, ball.cy);
            if d < r2 {
                local[v] = interior.len();
                interior.push(v);
                if d < ir2 {
                    inner.push(local[v]);
                }
            }
        }
        if inner.is_empty() {
            return Err(Error::InvalidArgument("inner ball contains no vertices".into()));
        }
        let mut boundary = Vec::new();
        let mut edges = Vec::new();
        for &(i, j, m) in g.edges() {
            let (i, j) = (i as usize, j as usize);
            let (ii, jj) = (local[i] < interior.len(), local[j] < interior.len());
            if !(ii || jj) {
                continue;
            }
            for (v, inside) in [(i, ii), (j, jj)] {
                if !inside && local[v] == usize::MAX {
                    local[v] = interior.len() + boundary.len();
                    boundary.push(v);
                }
            }
            edges.push((local[i] as u32, local[j] as u32, m as f64));
        }
        let net = WeightedNetwork::from_edges(interior.len() + boundary.len(), edges)?;
        Ok(HarnackProblem { net, interior, boundary, inner, opts: SolverOptions::default() })
    }

    pub fn interior(&self) -> &[usize] {
        &self.interior
    }

    pub fn inner_count(&self) -> usize {
        self.inner.len()
    }

    /// `max / min` over the inner ball of the harmonic extension of `values`
    /// (one per entry of [`HarnackProblem::boundary`]). `+inf` if the min is 0.
    pub fn ratio(&self, values: &[f64]) -> Result<f64> {
        if values.len() != self.boundary.len() {
            return invalid("one value per boundary vertex required");
        }
        if values.iter().any(|&v| !(v >= 0.0)) || values.iter().all(|&v| v == 0.0) {
            return invalid("boundary values must be nonnegative and not all zero");
        }
        let fixed: Vec<usize> = (0..self.boundary.len()).map(|k| self.interior.len() + k).collect();
        let (u, _, _) = self.net.dirichlet_solve(&fixed, values, &self.opts)?;
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &k in &self.inner {
            lo = lo.min(u[k]);
            hi = hi.max(u[k]);
        }
        Ok(if lo <= 0.0 { f64::INFINITY } else { hi / lo })
    }
}

/// Max and mean of the Harnack ratio over `trials` boundary vectors drawn
/// i.i.d. uniform on `[0, 1]` from a ChaCha8 stream seeded with `seed`.
pub fn harnack_trials(g: &VertexGraph, ball: &HarnackBall, trials: usize, seed: u64) -> Result<(f64, f64)> {
    use rand::{Rng, SeedableRng};
    let p = HarnackProblem::new(g, ball)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let (mut max, mut sum) = (0.0f64, 0.0);
    for _ in 0..trials {
        let v: Vec<f64> = (0..p.boundary.len()).map(|_| rng.random::<f64>()).collect();
        let r = p.ratio(&v)?;
        max = max.max(r);
        sum += r;
    }
    Ok((max, sum / trials.max(1) as f64))
}

pub fn harnack_ratio(g: &VertexGraph, ball: &HarnackBall, values: &[f64]) -> Result<f64> {
    HarnackProblem::new(g, ball)?.ratio(values)
}
