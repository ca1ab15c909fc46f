use crate::energy::VertexFunction;
use crate::error::{invalid, Result};
use crate::geometry::{FractalKind, VertexGraph};
use crate::scalar::Scalar;

/// One step of the harmonic extension: corner values of the three children.
fn children<T: Scalar>(c: &[T; 3]) -> [[T; 3]; 3] {
    let mid = |i: usize, j: usize| {
        let k = 3 - i - j;
        (T::frac(2, 1) * c[i].clone() + T::frac(2, 1) * c[j].clone() + c[k].clone()) * T::frac(1, 5)
    };
    let (m01, m12, m02) = (mid(0, 1), mid(1, 2), mid(0, 2));
    [
        [c[0].clone(), m01.clone(), m02.clone()],
        [m01, c[1].clone(), m12.clone()],
        [m02, m12, c[2].clone()],
    ]
}

/// Values on `V_n` of the harmonic function with boundary values `(x0, x1, x2)`.
pub fn sg_harmonic<T: Scalar>(g: &VertexGraph, boundary: [T; 3]) -> Result<VertexFunction<T>> {
    if g.kind != FractalKind::SG {
        return invalid("SG harmonic functions live on the gasket");
    }
    let mut corners = vec![boundary];
    for _ in 0..g.level {
        corners = corners.iter().flat_map(children).collect();
    }
    let mut values = vec![T::zero(); g.num_vertices()];
    for (c, vals) in corners.into_iter().enumerate() {
        for (j, v) in vals.into_iter().enumerate() {
            values[g.cell(c)[j] as usize] = v;
        }
    }
    VertexFunction::new(g, values)
}

/// A member `U^{(x0,x1,x2)}` of the harmonic family, evaluable at any depth.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SgHarmonic {
    pub boundary: [f64; 3],
}

impl SgHarmonic {
    pub fn new(x0: f64, x1: f64, x2: f64) -> Self {
        SgHarmonic { boundary: [x0, x1, x2] }
    }

    /// `S = (x0-x1)^2 + (x1-x2)^2 + (x0-x2)^2`.
    pub fn boundary_energy(&self) -> f64 {
        let [a, b, c] = self.boundary;
        (a - b).powi(2) + (b - c).powi(2) + (a - c).powi(2)
    }

    /// Corner values of the cell `K_w`.
    pub fn cell_corners(&self, w: &[u8]) -> [f64; 3] {
        let mut c = self.boundary;
        for &d in w {
            c = children(&c)[d as usize];
        }
        c
    }

    /// `U(P_{wj})`.
    pub fn value(&self, w: &[u8], j: u8) -> f64 {
        self.cell_corners(w)[j as usize]
    }

    pub fn on_graph(&self, g: &VertexGraph) -> Result<VertexFunction<f64>> {
        sg_harmonic(g, self.boundary)
    }
}
