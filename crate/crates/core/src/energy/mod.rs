//! Discrete energies, cell averages and the mean-value operator.

pub mod monotone;

use crate::error::{invalid, Error, Result};
use crate::geometry::{CellGraph, ExactPoint, FractalKind, VertexGraph};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct VertexFunction<T = f64> {
    pub kind: FractalKind,
    pub level: usize,
    pub values: Vec<T>,
}

impl<T: Scalar> VertexFunction<T> {
    pub fn new(g: &VertexGraph, values: Vec<T>) -> Result<Self> {
        if values.len() != g.num_vertices() {
            return invalid(format!(
                "expected {} vertex values, got {}",
                g.num_vertices(),
                values.len()
            ));
        }
        if values.iter().any(|v| !v.to_f64().is_finite()) {
            return invalid("vertex values must be finite");
        }
        Ok(VertexFunction { kind: g.kind, level: g.level, values })
    }

    pub fn from_fn(g: &VertexGraph, f: impl Fn(&ExactPoint) -> T) -> Result<Self> {
        let values = (0..g.num_vertices()).map(|v| f(&g.point(v))).collect();
        VertexFunction::new(g, values)
    }

    pub fn constant(g: &VertexGraph, c: T) -> Self {
        VertexFunction { kind: g.kind, level: g.level, values: vec![c; g.num_vertices()] }
    }

    /// Restriction to a coarser vertex set.
    pub fn restrict(&self, fine: &VertexGraph, coarse: &VertexGraph) -> Result<Self> {
        check_graph(fine, self.kind, self.level)?;
        let map = fine.restriction_map(coarse)?;
        let values = map.iter().map(|&v| self.values[v as usize].clone()).collect();
        Ok(VertexFunction { kind: coarse.kind, level: coarse.level, values })
    }

    pub fn add_constant(&self, c: T) -> Self {
        let values = self.values.iter().map(|v| v.clone() + c.clone()).collect();
        VertexFunction { values, ..self.clone() }
    }

    pub fn to_f64(&self) -> VertexFunction<f64> {
        VertexFunction {
            kind: self.kind,
            level: self.level,
            values: self.values.iter().map(|v| v.to_f64()).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CellFunction<T = f64> {
    pub kind: FractalKind,
    pub level: usize,
    pub values: Vec<T>,
}

impl<T: Scalar> CellFunction<T> {
    pub fn new(kind: FractalKind, level: usize, values: Vec<T>) -> Result<Self> {
        let n = kind.alphabet_size().pow(level as u32);
        if values.len() != n {
            return invalid(format!("expected {n} cell values, got {}", values.len()));
        }
        if values.iter().any(|v| !v.to_f64().is_finite()) {
            return invalid("cell values must be finite");
        }
        Ok(CellFunction { kind, level, values })
    }
}

fn check_graph(g: &VertexGraph, kind: FractalKind, level: usize) -> Result<()> {
    if g.kind != kind {
        return invalid("function and graph belong to different fractals");
    }
    if g.level != level {
        return Err(Error::LevelMismatch { expected: g.level, got: level });
    }
    Ok(())
}

fn check_cells<T>(g: &CellGraph, f: &CellFunction<T>) -> Result<()> {
    if g.kind != f.kind {
        return invalid("function and graph belong to different fractals");
    }
    if g.level != f.level {
        return Err(Error::LevelMismatch { expected: g.level, got: f.level });
    }
    Ok(())
}

fn sq<T: Scalar>(a: &T, b: &T) -> T {
    let d = a.clone() - b.clone();
    d.clone() * d
}

/// `B_n(u)`: sum over cells of the three unordered pair differences squared.
pub fn sg_pointwise_energy_bn<T: Scalar>(g: &VertexGraph, u: &VertexFunction<T>) -> Result<T> {
    if g.kind != FractalKind::SG {
        return invalid("B_n is defined on the SG");
    }
    check_graph(g, u.kind, u.level)?;
    let mut acc = T::zero();
    for c in 0..g.num_cells() {
        let v = g.cell(c);
        let (a, b, d) = (&u.values[v[0] as usize], &u.values[v[1] as usize], &u.values[v[2] as usize]);
        acc = acc + sq(a, b) + sq(b, d) + sq(a, d);
    }
    Ok(acc)
}

/// Kigami's energy `(5/3)^n B_n(u)`.
pub fn kigami_energy_en<T: Scalar>(g: &VertexGraph, u: &VertexFunction<T>) -> Result<T> {
    let b = sg_pointwise_energy_bn(g, u)?;
    Ok(T::powi(T::frac(5, 3), g.level) * b)
}

/// `D_n(u)`: per-cell sum over the eight short perimeter pairs; a pair shared
/// by two cells is counted twice.
pub fn sc_pointwise_energy_dn<T: Scalar>(g: &VertexGraph, u: &VertexFunction<T>) -> Result<T> {
    if g.kind != FractalKind::SC {
        return invalid("D_n is defined on the SC");
    }
    check_graph(g, u.kind, u.level)?;
    let mut acc = T::zero();
    for &(i, j, m) in g.edges() {
        let d = sq(&u.values[i as usize], &u.values[j as usize]);
        acc = acc + T::frac(m as i64, 1) * d;
    }
    Ok(acc)
}

/// `a_n(u) = rho^n D_n(u)`.
pub fn sc_scaled_energy_an(g: &VertexGraph, u: &VertexFunction<f64>, rho: f64) -> Result<f64> {
    Ok(rho.powi(g.level as i32) * sc_pointwise_energy_dn(g, u)?)
}

/// Mean of `u` over each `V_w`. For SG harmonic functions this is `P_n u` exactly.
pub fn cell_average_corners<T: Scalar>(
    g: &VertexGraph,
    u: &VertexFunction<T>,
) -> Result<CellFunction<T>> {
    check_graph(g, u.kind, u.level)?;
    let a = g.kind.cell_arity();
    let inv = T::frac(1, a as i64);
    let values = (0..g.num_cells())
        .map(|c| {
            let s = g.cell(c).iter().fold(T::zero(), |s, &v| s + u.values[v as usize].clone());
            s * inv.clone()
        })
        .collect();
    Ok(CellFunction { kind: g.kind, level: g.level, values })
}

/// Quadrature for `P_n u` from values on a finer vertex set `V_{n+m}`, `m >= 1`:
/// corner means of the level-(n+m) cells, averaged up by `M_{n,m}`.
pub fn cell_average_quadrature<T: Scalar>(
    fine: &VertexGraph,
    u: &VertexFunction<T>,
    n: usize,
) -> Result<CellFunction<T>> {
    if fine.level <= n {
        return invalid("quadrature needs a strictly finer vertex set (m >= 1)");
    }
    let deep = cell_average_corners(fine, u)?;
    mean_value_mnm(&deep, n)
}

/// `(M_{n,m} u)(w) = N^{-m} sum_{v in W_m} u(wv)` for `u` on `W_{n+m}`.
pub fn mean_value_mnm<T: Scalar>(u: &CellFunction<T>, n: usize) -> Result<CellFunction<T>> {
    if u.level <= n {
        return invalid("mean value operator needs m >= 1");
    }
    let block = u.kind.alphabet_size().pow((u.level - n) as u32);
    let inv = T::frac(1, block as i64);
    let values = u
        .values
        .chunks(block)
        .map(|c| c.iter().fold(T::zero(), |s, x| s + x.clone()) * inv.clone())
        .collect();
    Ok(CellFunction { kind: u.kind, level: n, values })
}

/// Unit-weight edge sum `sum_{w1 ~ w2} (f(w1) - f(w2))^2` over a cell graph.
pub fn cell_edge_sum<T: Scalar>(g: &CellGraph, f: &CellFunction<T>) -> Result<T> {
    check_cells(g, f)?;
    Ok(g.edges()
        .iter()
        .fold(T::zero(), |s, &(a, b)| s + sq(&f.values[a as usize], &f.values[b as usize])))
}

/// `A_n(u)` from cell averages on the SG cell graph.
pub fn sg_graph_energy_an<T: Scalar>(g: &CellGraph, pnu: &CellFunction<T>) -> Result<T> {
    if g.kind != FractalKind::SG {
        return invalid("A_n is defined on the SG");
    }
    cell_edge_sum(g, pnu)
}

/// `G_n(u) = (5/3)^n A_n(u)`.
pub fn sg_scaled_graph_energy<T: Scalar>(g: &CellGraph, f: &CellFunction<T>) -> Result<T> {
    Ok(T::powi(T::frac(5, 3), g.level) * sg_graph_energy_an(g, f)?)
}

/// `b_n(u) = rho^n sum_{w1 ~ w2} (P_n u(w1) - P_n u(w2))^2` on the SC cell graph.
pub fn sc_cell_energy_bn(g: &CellGraph, pnu: &CellFunction<f64>, rho: f64) -> Result<f64> {
    if g.kind != FractalKind::SC {
        return invalid("b_n is defined on the SC");
    }
    Ok(rho.powi(g.level as i32) * cell_edge_sum(g, pnu)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{cell_graph, vertex_graph};
    use crate::harmonic::sg_harmonic;
    use crate::scalar::rat;
    use num_rational::BigRational;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn harmonic(b: (i64, i64, i64), n: usize) -> (VertexGraph, VertexFunction<BigRational>) {
        let g = vertex_graph(FractalKind::SG, n).unwrap();
        let u = sg_harmonic(&g, [rat(b.0, 1), rat(b.1, 1), rat(b.2, 1)]).unwrap();
        (g, u)
    }

    #[test]
    fn bn_of_harmonic_010() {
        let (g, u) = harmonic((0, 1, 0), 0);
        assert_eq!(sg_pointwise_energy_bn(&g, &u).unwrap(), rat(2, 1));
        let (g, u) = harmonic((0, 1, 0), 1);
        assert_eq!(sg_pointwise_energy_bn(&g, &u).unwrap(), rat(6, 5));
        for n in 0..5 {
            let (g, u) = harmonic((0, 1, 0), n);
            assert_eq!(kigami_energy_en(&g, &u).unwrap(), rat(2, 1));
        }
    }

    #[test]
    fn constants_have_zero_energy() {
        let g = vertex_graph(FractalKind::SG, 3).unwrap();
        let u = VertexFunction::constant(&g, 0.7);
        assert_eq!(sg_pointwise_energy_bn(&g, &u).unwrap(), 0.0);
        let s = vertex_graph(FractalKind::SC, 2).unwrap();
        assert_eq!(sc_pointwise_energy_dn(&s, &VertexFunction::constant(&s, 3.0)).unwrap(), 0.0);
        let cg = cell_graph(FractalKind::SC, 2).unwrap();
        let f = CellFunction::new(FractalKind::SC, 2, vec![1.5; 64]).unwrap();
        assert_eq!(sc_cell_energy_bn(&cg, &f, 1.25).unwrap(), 0.0);
    }

    #[test]
    fn level_mismatch_rejected() {
        let g2 = vertex_graph(FractalKind::SG, 2).unwrap();
        let g3 = vertex_graph(FractalKind::SG, 3).unwrap();
        let u = VertexFunction::constant(&g3, 0.0);
        assert!(matches!(sg_pointwise_energy_bn(&g2, &u), Err(Error::LevelMismatch { .. })));
        assert!(VertexFunction::new(&g2, vec![0.0; 3]).is_err());
        assert!(VertexFunction::new(&g2, vec![f64::NAN; 15]).is_err());
    }

    #[test]
    fn cell_averages_of_harmonic() {
        let (g, u) = harmonic((0, 1, 0), 1);
        let p = cell_average_corners(&g, &u).unwrap();
        assert_eq!(p.values[0], rat(1, 5));
        let (g, u) = harmonic((0, 1, 2), 0);
        assert_eq!(cell_average_corners(&g, &u).unwrap().values, vec![rat(1, 1)]);
        let g = vertex_graph(FractalKind::SG, 2).unwrap();
        let c = cell_average_corners(&g, &VertexFunction::constant(&g, rat(3, 2))).unwrap();
        assert!(c.values.iter().all(|v| *v == rat(3, 2)));
    }

    #[test]
    fn an_of_harmonic_010() {
        for (n, expect) in [(1usize, rat(8, 25)), (2, rat(2, 3) * (rat(9, 25) - rat(81, 625)) * rat(2, 1))]
        {
            let (g, u) = harmonic((0, 1, 0), n);
            let cg = cell_graph(FractalKind::SG, n).unwrap();
            let p = cell_average_corners(&g, &u).unwrap();
            assert_eq!(sg_graph_energy_an(&cg, &p).unwrap(), expect);
        }
    }

    #[test]
    fn dn_matches_per_cell_sum() {
        let g = vertex_graph(FractalKind::SC, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let u = VertexFunction::new(&g, (0..g.num_vertices()).map(|_| rng.random::<f64>()).collect())
            .unwrap();
        let mut per_cell = 0.0;
        for c in 0..g.num_cells() {
            let v = g.cell(c);
            for j in 0..8 {
                let d = u.values[v[j] as usize] - u.values[v[(j + 1) % 8] as usize];
                per_cell += d * d;
            }
        }
        let dn = sc_pointwise_energy_dn(&g, &u).unwrap();
        assert!((dn - per_cell).abs() < 1e-12 * per_cell);
    }

    #[test]
    fn mean_value_examples() {
        let u = CellFunction::new(FractalKind::SG, 2, (0..9).map(|i| (i % 3) as f64).collect()).unwrap();
        let m = mean_value_mnm(&u, 1).unwrap();
        assert_eq!(m.values, vec![1.0, 1.0, 1.0]);
        assert!(mean_value_mnm(&u, 2).is_err());
        let c = CellFunction::new(FractalKind::SC, 2, vec![4.0; 64]).unwrap();
        assert_eq!(mean_value_mnm(&c, 0).unwrap().values, vec![4.0]);
    }

    #[test]
    fn quadrature_commutes_with_mean_value() {
        let g = vertex_graph(FractalKind::SC, 3).unwrap();
        let u = VertexFunction::from_fn(&g, |p| {
            let (x, y) = p.to_f64();
            (3.0 * x).sin() + y * y
        })
        .unwrap();
        let p1 = cell_average_quadrature(&g, &u, 1).unwrap();
        let p2 = cell_average_quadrature(&g, &u, 2).unwrap();
        let m = mean_value_mnm(&p2, 1).unwrap();
        for (a, b) in p1.values.iter().zip(&m.values) {
            assert!((a - b).abs() < 1e-14);
        }
        assert!(cell_average_quadrature(&g, &u, 3).is_err());
    }

    #[test]
    fn energies_invariant_under_constant_shift() {
        let g = vertex_graph(FractalKind::SG, 3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = VertexFunction::new(&g, (0..g.num_vertices()).map(|_| rng.random::<f64>()).collect())
            .unwrap();
        let e1 = sg_pointwise_energy_bn(&g, &u).unwrap();
        let e2 = sg_pointwise_energy_bn(&g, &u.add_constant(5.0)).unwrap();
        assert!(e1 > 0.0 && (e1 - e2).abs() < 1e-12);
    }
}
