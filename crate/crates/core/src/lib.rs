//! Approximation graphs, discrete energies, effective resistances, Besov
//! semi-norms and random walks on the Sierpinski gasket and carpet.

pub mod besov;
pub mod cli;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod harmonic;
pub mod network;
pub mod scalar;
pub mod stats;
pub mod walk;

pub use error::{Error, Result};
pub use geometry::{CellGraph, EdgeType, ExactPoint, FractalKind, VertexGraph, Word};
pub use network::{ResistanceResult, WeightedNetwork};
