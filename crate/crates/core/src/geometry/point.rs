use super::{FractalKind, Word};
use crate::error::{invalid, Result};
use num_rational::Ratio;

/// Vertex representatives at the coarsest scale.
///
/// SG: `(a, b)` at scale 1 means `(a/2, b*sqrt(3)/2)`.
/// SC: `(nx, ny)` at scale 0 means `(nx/2, ny/2)`.
pub(crate) const SG_P: [(i64, i64); 3] = [(0, 0), (2, 0), (1, 1)];
pub(crate) const SC_P: [(i64, i64); 8] =
    [(0, 0), (1, 0), (2, 0), (2, 1), (2, 2), (1, 2), (0, 2), (0, 1)];

/// Exact coordinates of a point of the SG or SC.
///
/// SG: `(a 2^-s, b sqrt(3) 2^-s)`; SC: `(nx, ny) / (2 3^s)`. Always stored in
/// canonical (minimal scale) form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExactPoint {
    pub kind: FractalKind,
    pub x: i64,
    pub y: i64,
    pub scale: u32,
}

impl ExactPoint {
    pub fn new(kind: FractalKind, x: i64, y: i64, scale: u32) -> Self {
        let b = kind.base();
        let (mut x, mut y, mut scale) = (x, y, scale);
        while scale > 0 && x % b == 0 && y % b == 0 {
            x /= b;
            y /= b;
            scale -= 1;
        }
        ExactPoint { kind, x, y, scale }
    }

    /// Numerators at a finer scale, if `target >= self.scale`.
    pub fn at_scale(&self, target: u32) -> Option<(i64, i64)> {
        if target < self.scale {
            return None;
        }
        let f = self.kind.base().pow(target - self.scale);
        Some((self.x * f, self.y * f))
    }

    pub fn to_f64(&self) -> (f64, f64) {
        let b = self.kind.base() as f64;
        match self.kind {
            FractalKind::SG => {
                let s = b.powi(self.scale as i32);
                (self.x as f64 / s, self.y as f64 * 3f64.sqrt() / s)
            }
            FractalKind::SC => {
                let s = 2.0 * b.powi(self.scale as i32);
                (self.x as f64 / s, self.y as f64 / s)
            }
        }
    }

    /// Exact squared Euclidean distance.
    pub fn dist2(&self, other: &ExactPoint) -> Ratio<i128> {
        assert_eq!(self.kind, other.kind, "points from different fractals");
        let s = self.scale.max(other.scale);
        let (x1, y1) = self.at_scale(s).unwrap();
        let (x2, y2) = other.at_scale(s).unwrap();
        let (dx, dy) = ((x1 - x2) as i128, (y1 - y2) as i128);
        let b = self.kind.base() as i128;
        match self.kind {
            FractalKind::SG => Ratio::new(dx * dx + 3 * dy * dy, b.pow(2 * s)),
            FractalKind::SC => Ratio::new(dx * dx + dy * dy, 4 * b.pow(2 * s)),
        }
    }

    pub fn dist(&self, other: &ExactPoint) -> f64 {
        let d = self.dist2(other);
        (*d.numer() as f64 / *d.denom() as f64).sqrt()
    }
}

/// Raw numerators of `f_w(p_j)` at scale `|w| + 1` (SG) or `|w|` (SC).
pub(crate) fn raw_vertex(kind: FractalKind, w: &[u8], j: u8) -> (i64, i64) {
    let (ox, oy) = raw_cell_offset(kind, w);
    let (px, py) = match kind {
        FractalKind::SG => SG_P[j as usize],
        FractalKind::SC => SC_P[j as usize],
    };
    (ox + px, oy + py)
}

/// Offset of the cell `K_w` in the raw units of [`raw_vertex`].
pub(crate) fn raw_cell_offset(kind: FractalKind, w: &[u8]) -> (i64, i64) {
    let (mut ox, mut oy) = (0i64, 0i64);
    match kind {
        FractalKind::SG => {
            for &d in w {
                let (px, py) = SG_P[d as usize];
                ox = 2 * ox + px;
                oy = 2 * oy + py;
            }
        }
        FractalKind::SC => {
            for &d in w {
                let (px, py) = SC_P[d as usize];
                ox = 3 * ox + 2 * px;
                oy = 3 * oy + 2 * py;
            }
        }
    }
    (ox, oy)
}

pub(crate) fn graph_scale(kind: FractalKind, level: usize) -> u32 {
    match kind {
        FractalKind::SG => level as u32 + 1,
        FractalKind::SC => level as u32,
    }
}

/// `P_w = f_{w_1} ... f_{w_{n-1}}(p_{w_n})`.
pub fn point_of(kind: FractalKind, w: &Word) -> Result<ExactPoint> {
    let Some(j) = w.last() else {
        return invalid("point_of needs a nonempty word");
    };
    let head = &w.digits()[..w.level() - 1];
    let (x, y) = raw_vertex(kind, head, j);
    Ok(ExactPoint::new(kind, x, y, graph_scale(kind, head.len())))
}
