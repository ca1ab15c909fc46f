//! The augmented rooted tree over SG words with lambda-return-ratio conductances.

mod exact;
mod mc;
mod tree;

pub use exact::{green_oo_exact, hitting_bracket, martin_kernel_check, FBracket, HittingBracket, MartinStats};
pub use mc::{boundary_hit_distribution, ctrw_lifetime, escape_fraction, green_oo_mc, HitDistribution, McStat};
pub use tree::{gromov_delta, Node, TreeEdge, TreeGraph};

use crate::error::{invalid, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WalkParams {
    pub lambda: f64,
    pub c1: f64,
    pub c2: f64,
    /// Measure parameter of the continuous-time walk, `0 < c < lambda`.
    pub c: f64,
    pub seed: u64,
    pub samples: usize,
    /// Depth at which simulated paths count as escaped; `None` picks a depth
    /// at which the return probability `lambda^depth` is below `escape_tol`.
    pub depth_cut: Option<usize>,
    pub escape_tol: f64,
    pub step_cap: usize,
    pub streams: usize,
}

impl WalkParams {
    pub fn new(lambda: f64) -> Self {
        WalkParams {
            lambda,
            c1: 1.0,
            c2: 1.0,
            c: lambda / 2.0,
            seed: 0,
            samples: 100_000,
            depth_cut: None,
            escape_tol: 1e-6,
            step_cap: 10_000_000,
            streams: 64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 0.0 && self.lambda < 1.0) {
            return invalid("lambda must lie in (0, 1)");
        }
        if !(self.c1 > 0.0 && self.c2 > 0.0 && self.c1.is_finite() && self.c2.is_finite()) {
            return invalid("C1 and C2 must be positive");
        }
        if !(self.c > 0.0 && self.c < self.lambda) {
            return invalid("c must lie in (0, lambda)");
        }
        if self.streams == 0 || !(self.escape_tol > 0.0 && self.escape_tol < 1.0) {
            return invalid("need at least one stream and an escape tolerance in (0, 1)");
        }
        Ok(())
    }

    pub fn escape_depth(&self) -> usize {
        self.depth_cut
            .unwrap_or_else(|| ((self.escape_tol.ln() / self.lambda.ln()).ceil() as usize).max(8))
    }

    /// `(3 lambda)^-n`.
    pub fn level_unit(&self, n: usize) -> f64 {
        (3.0 * self.lambda).powi(-(n as i32))
    }

    pub fn conductance(&self, edge: TreeEdge, level: usize) -> f64 {
        let u = self.level_unit(level);
        match edge {
            TreeEdge::Vertical => u,
            TreeEdge::Horizontal(crate::EdgeType::I) => self.c1 * u,
            TreeEdge::Horizontal(crate::EdgeType::II) => self.c2 * u,
        }
    }

    /// `pi(x)`, the total conductance at `x`.
    pub fn pi(&self, x: Node) -> f64 {
        if x.level == 0 {
            return 3.0;
        }
        let h = 2.0 * self.c1 + if x.type_two().is_some() { self.c2 } else { 0.0 };
        self.level_unit(x.level as usize) * (3.0 * self.lambda + 3.0 + h)
    }

    /// `m(x) = (c / (3 lambda))^|x|`.
    pub fn measure(&self, x: Node) -> f64 {
        (self.c / (3.0 * self.lambda)).powi(x.level as i32)
    }
}
