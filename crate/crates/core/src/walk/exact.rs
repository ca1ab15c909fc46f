use super::tree::{level_offset, Node, TreeEdge, TreeGraph};
use super::WalkParams;
use crate::error::{invalid, Error, Result};
use crate::geometry::Word;
use crate::network::solver::{solve_spd, Csr, SolverOptions};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FBracket {
    pub lower: f64,
    pub upper: f64,
}

impl FBracket {
    pub fn width(&self) -> f64 {
        self.upper - self.lower
    }
    pub fn contains(&self, v: f64, tol: f64) -> bool {
        self.lower - tol <= v && v <= self.upper + tol
    }
}

/// Absorbing solve on `B_N` for `h(x) = P_x(hit o before S_N)`.
#[derive(Clone, Debug)]
pub struct HittingBracket {
    pub depth_cut: usize,
    pub tree: TreeGraph,
    pub h: Vec<f64>,
    /// Largest up/down conductance ratio over the levels of `B_N`.
    pub level_ratio: f64,
    pub residual: f64,
}

impl HittingBracket {
    /// `h(x) <= F(x, o) <= h(x) + (1 - h(x)) q^N`, where `q` is the up/down ratio of
    /// the level process: from `S_N` the walk returns to `o` with probability `q^N`.
    pub fn f(&self, x: &Word) -> Result<FBracket> {
        let node = Node::from_word(x)?;
        if node.level as usize >= self.depth_cut {
            return invalid("need |x| <= depth_cut - 1");
        }
        let lower = self.h[self.tree.id(node) as usize];
        let tail = self.level_ratio.powi(self.depth_cut as i32);
        Ok(FBracket { lower, upper: lower + (1.0 - lower) * tail })
    }
}

pub fn hitting_bracket(p: &WalkParams, depth_cut: usize) -> Result<HittingBracket> {
    p.validate()?;
    if depth_cut < 1 {
        return invalid("depth_cut must be at least 1");
    }
    let tree = TreeGraph::new(depth_cut)?;
    let net = tree.network(p);
    let mut up = vec![0.0; tree.num_nodes()];
    let mut down = vec![0.0; tree.num_nodes()];
    for (&(a, b, t, _), &(_, _, c)) in tree.edges().iter().zip(net.edges()) {
        if t == TreeEdge::Vertical {
            down[a as usize] += c;
            up[b as usize] += c;
        }
    }
    let inner = level_offset(depth_cut) as usize;
    let mut level_ratio = 0.0f64;
    for id in 1..inner {
        let r = up[id] / down[id];
        if (r - p.lambda).abs() > 1e-12 * p.lambda {
            return Err(Error::Degenerate(format!("level ratio {r} at node {id} differs from lambda")));
        }
        level_ratio = level_ratio.max(r);
    }
    let mut fixed = vec![0usize];
    let mut values = vec![1.0];
    fixed.extend(inner..tree.num_nodes());
    values.resize(fixed.len(), 0.0);
    let (h, residual, _) = net.dirichlet_solve(&fixed, &values, &SolverOptions::default())?;
    Ok(HittingBracket { depth_cut, tree, h, level_ratio, residual })
}

/// `G(o, o) = 1 / (1 - r)` with `r` the return probability, bracketed by the
/// two ends of the `F` bracket at the children of `o`.
pub fn green_oo_exact(p: &WalkParams, depth_cut: usize) -> Result<(f64, f64)> {
    if depth_cut < 2 {
        return invalid("depth_cut must be at least 2");
    }
    let hb = hitting_bracket(p, depth_cut)?;
    let (mut lo, mut hi) = (0.0, 0.0);
    for d in 0..3 {
        let b = hb.f(&Node::ROOT.child(d).word())?;
        lo += b.lower / 3.0;
        hi += b.upper / 3.0;
    }
    Ok((1.0 / (1.0 - lo), 1.0 / (1.0 - hi)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct MartinStats {
    /// `ratios[j][i] = K(x_i, xi_j) / (lambda^|x_i| (3/lambda)^{|x_i ^ xi_j|})`.
    pub ratios: Vec<Vec<f64>>,
    pub min: f64,
    pub max: f64,
}

impl MartinStats {
    pub fn spread(&self) -> f64 {
        self.max / self.min
    }
}

/// `K(x, xi) = G(x, xi) / G(o, xi)` for the walk killed at `S_N`.
pub fn martin_kernel_check(p: &WalkParams, depth: usize, xs: &[Node], xis: &[Node]) -> Result<MartinStats> {
    p.validate()?;
    let tree = TreeGraph::new(depth)?;
    if xis.iter().chain(xs).any(|x| x.level as usize >= depth || !tree.contains(*x)) {
        return invalid("depth too small for the given points");
    }
    let inner = level_offset(depth) as usize;
    let mut trip = Vec::new();
    for &(a, b, t, l) in tree.edges() {
        let c = p.conductance(t, l as usize);
        let (a, b) = (a as usize, b as usize);
        if a < inner {
            trip.push((a as u32, a as u32, c));
        }
        if b < inner {
            trip.push((b as u32, b as u32, c));
            trip.push((a as u32, b as u32, -c));
            trip.push((b as u32, a as u32, -c));
        }
    }
    let lap = Csr::from_triplets(inner, trip);
    let mut ratios = Vec::with_capacity(xis.len());
    let (mut min, mut max) = (f64::INFINITY, 0.0f64);
    for &xi in xis {
        let mut rhs = vec![0.0; inner];
        rhs[tree.id(xi) as usize] = 1.0;
        let g = solve_spd(&lap, &rhs, &SolverOptions::default())?.x;
        let g0 = g[0];
        let dist = tree.distances(xi)?;
        let row: Vec<f64> = xs
            .iter()
            .map(|&x| {
                let k = g[tree.id(x) as usize] / g0;
                let gp = (x.level as f64 + xi.level as f64 - dist[tree.id(x) as usize] as f64) / 2.0;
                k / (p.lambda.powi(x.level as i32) * (3.0 / p.lambda).powf(gp))
            })
            .collect();
        for &r in &row {
            min = min.min(r);
            max = max.max(r);
        }
        ratios.push(row);
    }
    Ok(MartinStats { ratios, min, max })
}
