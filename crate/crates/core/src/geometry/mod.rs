//! Words, exact points and the level-n approximation graphs of the SG and SC.

mod graph;
pub(crate) mod point;
mod word;

pub use graph::{
    cell_graph, sg_type_two_neighbor, vertex_graph, vertex_graph_capped, CellGraph, EdgeType,
    VertexGraph,
};
pub use point::{point_of, ExactPoint};
pub use word::{enumerate_words, Word};

use serde::{Deserialize, Serialize};

/// Default level caps for graph construction.
pub const SG_LEVEL_CAP: usize = 12;
pub const SC_LEVEL_CAP: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FractalKind {
    SG,
    SC,
}

impl FractalKind {
    pub fn alphabet_size(self) -> usize {
        match self {
            FractalKind::SG => 3,
            FractalKind::SC => 8,
        }
    }

    /// Denominator of the contraction ratio.
    pub fn base(self) -> i64 {
        match self {
            FractalKind::SG => 2,
            FractalKind::SC => 3,
        }
    }

    /// Hausdorff dimension.
    pub fn alpha(self) -> f64 {
        match self {
            FractalKind::SG => 3f64.ln() / 2f64.ln(),
            FractalKind::SC => 8f64.ln() / 3f64.ln(),
        }
    }

    pub fn default_level_cap(self) -> usize {
        match self {
            FractalKind::SG => SG_LEVEL_CAP,
            FractalKind::SC => SC_LEVEL_CAP,
        }
    }

    pub fn tag(self) -> &'static str {
        match self {
            FractalKind::SG => "sg",
            FractalKind::SC => "sc",
        }
    }

    pub fn parse(s: &str) -> crate::Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "sg" | "gasket" => Ok(FractalKind::SG),
            "sc" | "carpet" => Ok(FractalKind::SC),
            other => crate::error::invalid(format!("unknown fractal kind '{other}'")),
        }
    }

    /// Number of vertices in each cell's `V_w`.
    pub fn cell_arity(self) -> usize {
        self.alphabet_size()
    }
}

impl std::fmt::Display for FractalKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.tag())
    }
}
