//! Ratio of a coarse energy to a fine energy, `E_c(M u) / E_f(u)`, and its
//! maximization. Used for the weak monotonicity constants.

use crate::error::{invalid, Result};
use crate::geometry::{cell_graph, vertex_graph, FractalKind};
use crate::network::solver::{solve_spd, Csr, SolverOptions};
use crate::network::{cell_network, vertex_network, WeightedNetwork};
use rand::Rng;

#[derive(Clone, Debug)]
pub enum CoarseMap {
    /// Coarse node `i` takes the value of fine node `map[i]`.
    Restriction(Vec<u32>),
    /// Coarse node `i` averages fine nodes `i*block .. (i+1)*block`.
    BlockAverage(usize),
}

#[derive(Clone, Debug)]
pub struct EnergyRatio {
    pub coarse: WeightedNetwork,
    pub coarse_scale: f64,
    pub fine: WeightedNetwork,
    pub fine_scale: f64,
    pub map: CoarseMap,
}

impl EnergyRatio {
    /// `G_n(M_{n,m} u) / G_{n+m}(u)` on the SG cell graphs.
    pub fn sg_cells(n: usize, m: usize) -> Result<Self> {
        Self::cells(FractalKind::SG, n, m, 5.0 / 3.0)
    }

    /// `b_n(M_{n,m} u) / b_{n+m}(u)` on the SC cell graphs.
    pub fn sc_cells(n: usize, m: usize, rho: f64) -> Result<Self> {
        Self::cells(FractalKind::SC, n, m, rho)
    }

    fn cells(kind: FractalKind, n: usize, m: usize, r: f64) -> Result<Self> {
        if m == 0 {
            return invalid("m >= 1 required");
        }
        let c = cell_graph(kind, n)?;
        let f = cell_graph(kind, n + m)?;
        Ok(EnergyRatio {
            coarse: cell_network(&c),
            coarse_scale: r.powi(n as i32),
            fine: cell_network(&f),
            fine_scale: r.powi((n + m) as i32),
            map: CoarseMap::BlockAverage(kind.alphabet_size().pow(m as u32)),
        })
    }

    /// `a_n(u|_{V_n}) / a_{n+m}(u)` on the SC vertex graphs.
    pub fn sc_vertices(n: usize, m: usize, rho: f64) -> Result<Self> {
        if m == 0 {
            return invalid("m >= 1 required");
        }
        let c = vertex_graph(FractalKind::SC, n)?;
        let f = vertex_graph(FractalKind::SC, n + m)?;
        Ok(EnergyRatio {
            coarse: vertex_network(&c),
            coarse_scale: rho.powi(n as i32),
            fine: vertex_network(&f),
            fine_scale: rho.powi((n + m) as i32),
            map: CoarseMap::Restriction(f.restriction_map(&c)?),
        })
    }

    pub fn fine_dim(&self) -> usize {
        self.fine.num_nodes()
    }

    fn apply_map(&self, x: &[f64]) -> Vec<f64> {
        match &self.map {
            CoarseMap::Restriction(map) => map.iter().map(|&i| x[i as usize]).collect(),
            CoarseMap::BlockAverage(b) => {
                x.chunks(*b).map(|c| c.iter().sum::<f64>() / *b as f64).collect()
            }
        }
    }

    fn apply_map_transpose(&self, y: &[f64]) -> Vec<f64> {
        let mut x = vec![0.0; self.fine_dim()];
        match &self.map {
            CoarseMap::Restriction(map) => {
                for (k, &i) in map.iter().enumerate() {
                    x[i as usize] += y[k];
                }
            }
            CoarseMap::BlockAverage(b) => {
                for (k, c) in x.chunks_mut(*b).enumerate() {
                    c.iter_mut().for_each(|v| *v = y[k] / *b as f64);
                }
            }
        }
        x
    }

    pub fn coarse_energy(&self, x: &[f64]) -> f64 {
        self.coarse_scale * self.coarse.energy(&self.apply_map(x))
    }

    pub fn fine_energy(&self, x: &[f64]) -> f64 {
        self.fine_scale * self.fine.energy(x)
    }

    pub fn ratio(&self, x: &[f64]) -> f64 {
        self.coarse_energy(x) / self.fine_energy(x)
    }

    /// Largest ratio over i.i.d. uniform `[0, 1]` vectors.
    pub fn max_ratio_random<R: Rng>(&self, rng: &mut R, trials: usize) -> f64 {
        (0..trials)
            .map(|_| {
                let x: Vec<f64> = (0..self.fine_dim()).map(|_| rng.random::<f64>()).collect();
                self.ratio(&x)
            })
            .fold(0.0, f64::max)
    }

    /// Generalized power iteration `x <- E_f^+ E_c x` (node 0 pinned), which
    /// converges to a maximizer of the ratio. Returns the best ratio seen.
    pub fn max_ratio_power<R: Rng>(&self, rng: &mut R, iterations: usize) -> Result<f64> {
        let n = self.fine_dim();
        let mut trip = Vec::new();
        for &(i, j, c) in self.fine.edges() {
            let (i, j) = (i as usize, j as usize);
            if i > 0 {
                trip.push((i as u32 - 1, i as u32 - 1, c));
            }
            if j > 0 {
                trip.push((j as u32 - 1, j as u32 - 1, c));
            }
            if i > 0 && j > 0 {
                trip.push((i as u32 - 1, j as u32 - 1, -c));
                trip.push((j as u32 - 1, i as u32 - 1, -c));
            }
        }
        let lf = Csr::from_triplets(n - 1, trip);
        let mut x: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
        let mut best = self.ratio(&x);
        let opts = SolverOptions::default();
        for _ in 0..iterations {
            let y = self.apply_map(&x);
            let mut gy = vec![0.0; y.len()];
            for &(i, j, c) in self.coarse.edges() {
                let d = c * (y[i as usize] - y[j as usize]);
                gy[i as usize] += d;
                gy[j as usize] -= d;
            }
            let g = self.apply_map_transpose(&gy);
            let sol = solve_spd(&lf, &g[1..], &opts)?;
            let norm = sol.x.iter().map(|v| v * v).sum::<f64>().sqrt();
            if norm == 0.0 {
                break;
            }
            x = std::iter::once(0.0).chain(sol.x.iter().map(|v| v / norm)).collect();
            best = best.max(self.ratio(&x));
        }
        Ok(best)
    }
}
