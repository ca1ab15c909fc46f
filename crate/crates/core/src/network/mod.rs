//! Electrical networks: Δ-Y, shorting, cutting and effective resistance.

mod deltay;
pub mod solver;

pub use deltay::{delta_to_wye, replace_triangle_with_wye, wye_to_delta};
pub use solver::{SolverChoice, SolverOptions};

use crate::error::{Error, Result};
use crate::geometry::{CellGraph, FractalKind, VertexGraph};
use crate::stats::log_linear_fit;
use solver::{solve_spd, Csr};

/// Nodes `0..n` joined by conductance-weighted edges; parallel edges allowed.
#[derive(Clone, Debug, Default)]
pub struct WeightedNetwork {
    n: usize,
    edges: Vec<(u32, u32, f64)>,
    labels: Option<Vec<String>>,
}

impl WeightedNetwork {
    pub fn new(n: usize) -> Self {
        WeightedNetwork { n, edges: Vec::new(), labels: None }
    }

    pub fn from_edges(n: usize, edges: Vec<(u32, u32, f64)>) -> Result<Self> {
        let mut net = WeightedNetwork::new(n);
        for (i, j, c) in edges {
            net.add_edge(i as usize, j as usize, c)?;
        }
        Ok(net)
    }

    pub fn num_nodes(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(u32, u32, f64)] {
        &self.edges
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn set_labels(&mut self, labels: Vec<String>) -> Result<()> {
        if labels.len() != self.n {
            return crate::error::invalid("one label per node required");
        }
        self.labels = Some(labels);
        Ok(())
    }

    pub fn add_node(&mut self) -> usize {
        self.n += 1;
        if let Some(l) = &mut self.labels {
            l.push(String::new());
        }
        self.n - 1
    }

    pub fn add_edge(&mut self, i: usize, j: usize, conductance: f64) -> Result<()> {
        if i >= self.n {
            return Err(Error::UnknownNode(i));
        }
        if j >= self.n {
            return Err(Error::UnknownNode(j));
        }
        if i == j {
            return crate::error::invalid("self-loops are not allowed");
        }
        if !(conductance > 0.0 && conductance.is_finite()) {
            return crate::error::invalid(format!("conductance must be positive, got {conductance}"));
        }
        self.edges.push((i as u32, j as u32, conductance));
        Ok(())
    }

    /// Total conductance between two nodes, summing parallel edges.
    pub fn conductance_between(&self, i: usize, j: usize) -> f64 {
        self.edges
            .iter()
            .filter(|&&(a, b, _)| {
                (a as usize, b as usize) == (i, j) || (a as usize, b as usize) == (j, i)
            })
            .map(|e| e.2)
            .sum()
    }

    pub fn remove_edges_between(&mut self, i: usize, j: usize) {
        self.edges.retain(|&(a, b, _)| {
            !((a as usize, b as usize) == (i, j) || (a as usize, b as usize) == (j, i))
        });
    }

    /// Dirichlet energy `sum c (u_i - u_j)^2`.
    pub fn energy(&self, u: &[f64]) -> f64 {
        self.edges
            .iter()
            .map(|&(i, j, c)| {
                let d = u[i as usize] - u[j as usize];
                c * d * d
            })
            .sum()
    }

    pub fn scale_conductance(&mut self, edge: usize, factor: f64) -> Result<()> {
        if !(factor > 0.0) || edge >= self.edges.len() {
            return crate::error::invalid("bad edge index or scale factor");
        }
        self.edges[edge].2 *= factor;
        Ok(())
    }

    /// Merges every node of `set` into one. Edges inside `set` disappear.
    /// Returns the new network and the old-to-new node map.
    pub fn short_nodes(&self, set: &[usize]) -> Result<(WeightedNetwork, Vec<usize>)> {
        if set.is_empty() {
            return crate::error::invalid("cannot short an empty set");
        }
        if let Some(&v) = set.iter().find(|&&v| v >= self.n) {
            return Err(Error::UnknownNode(v));
        }
        let mut in_set = vec![false; self.n];
        for &v in set {
            in_set[v] = true;
        }
        let mut map = vec![usize::MAX; self.n];
        let mut merged = None;
        let mut next = 0;
        for v in 0..self.n {
            if in_set[v] {
                map[v] = *merged.get_or_insert_with(|| {
                    next += 1;
                    next - 1
                });
            } else {
                map[v] = next;
                next += 1;
            }
        }
        let mut out = WeightedNetwork::new(next);
        for &(i, j, c) in &self.edges {
            let (a, b) = (map[i as usize], map[j as usize]);
            if a != b {
                out.edges.push((a as u32, b as u32, c));
            }
        }
        Ok((out, map))
    }

    /// Splits node `v`: edges listed in `parts[k]` (indices into [`edges`](Self::edges))
    /// are moved to a fresh copy of `v` for every `k >= 1`. Returns the new
    /// network and the ids of the copies (`parts[0]` stays on `v`).
    pub fn cut_node(&self, v: usize, parts: &[Vec<usize>]) -> Result<(WeightedNetwork, Vec<usize>)> {
        if v >= self.n {
            return Err(Error::UnknownNode(v));
        }
        let incident: Vec<usize> = (0..self.edges.len())
            .filter(|&e| self.edges[e].0 as usize == v || self.edges[e].1 as usize == v)
            .collect();
        let mut listed: Vec<usize> = parts.iter().flatten().copied().collect();
        listed.sort_unstable();
        if listed != incident {
            return crate::error::invalid("partition must cover each incident edge exactly once");
        }
        let mut out = self.clone();
        let mut ids = vec![v];
        for part in &parts[1..] {
            let copy = out.add_node();
            ids.push(copy);
            for &e in part {
                let edge = &mut out.edges[e];
                if edge.0 as usize == v {
                    edge.0 = copy as u32;
                } else {
                    edge.1 = copy as u32;
                }
            }
        }
        Ok((out, ids))
    }

    fn components(&self) -> Vec<usize> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        for &(i, j, _) in &self.edges {
            let (a, b) = (find(&mut parent, i as usize), find(&mut parent, j as usize));
            if a != b {
                parent[a.max(b)] = a.min(b);
            }
        }
        (0..self.n).map(|v| find(&mut parent, v)).collect()
    }

    /// Solves the Dirichlet problem with prescribed `values` on `fixed` nodes.
    /// Nodes in components without any fixed node get 0.
    pub fn dirichlet_solve(
        &self,
        fixed: &[usize],
        values: &[f64],
        opts: &SolverOptions,
    ) -> Result<(Vec<f64>, f64, usize)> {
        let mut bval: Vec<Option<f64>> = vec![None; self.n];
        for (&v, &x) in fixed.iter().zip(values) {
            if v >= self.n {
                return Err(Error::UnknownNode(v));
            }
            bval[v] = Some(x);
        }
        let comp = self.components();
        let mut anchored = vec![false; self.n];
        for &v in fixed {
            anchored[comp[v]] = true;
        }
        let mut index = vec![u32::MAX; self.n];
        let mut unknowns = Vec::new();
        for v in 0..self.n {
            if bval[v].is_none() && anchored[comp[v]] {
                index[v] = unknowns.len() as u32;
                unknowns.push(v);
            }
        }
        let m = unknowns.len();
        let mut trip = Vec::with_capacity(4 * self.edges.len());
        let mut rhs = vec![0.0; m];
        for &(i, j, c) in &self.edges {
            let (i, j) = (i as usize, j as usize);
            let (ii, jj) = (index[i], index[j]);
            if ii != u32::MAX {
                trip.push((ii, ii, c));
            }
            if jj != u32::MAX {
                trip.push((jj, jj, c));
            }
            match (ii != u32::MAX, jj != u32::MAX) {
                (true, true) => {
                    trip.push((ii, jj, -c));
                    trip.push((jj, ii, -c));
                }
                (true, false) => rhs[ii as usize] += c * bval[j].unwrap_or(0.0),
                (false, true) => rhs[jj as usize] += c * bval[i].unwrap_or(0.0),
                (false, false) => {}
            }
        }
        let a = Csr::from_triplets(m, trip);
        let sol = solve_spd(&a, &rhs, opts)?;
        let mut u: Vec<f64> = bval.iter().map(|b| b.unwrap_or(0.0)).collect();
        for (k, &v) in unknowns.iter().enumerate() {
            u[v] = sol.x[k];
        }
        Ok((u, sol.residual, sol.iterations))
    }
}

#[derive(Clone, Debug)]
pub struct ResistanceResult {
    /// Effective resistance; `f64::INFINITY` when no path joins the terminals.
    pub value: f64,
    /// Minimizing potential: 0 on `A`, 1 on `B`.
    pub potentials: Vec<f64>,
    /// Residual norm of the reduced linear system.
    pub residual: f64,
    pub iterations: usize,
}

impl ResistanceResult {
    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }

    pub fn energy(&self) -> f64 {
        1.0 / self.value
    }
}

pub fn effective_resistance(
    net: &WeightedNetwork,
    a: &[usize],
    b: &[usize],
) -> Result<ResistanceResult> {
    effective_resistance_with(net, a, b, &SolverOptions::default())
}

pub fn effective_resistance_with(
    net: &WeightedNetwork,
    a: &[usize],
    b: &[usize],
    opts: &SolverOptions,
) -> Result<ResistanceResult> {
    if a.is_empty() || b.is_empty() {
        return crate::error::invalid("both terminal sets must be nonempty");
    }
    if let Some(&v) = a.iter().chain(b).find(|&&v| v >= net.num_nodes()) {
        return Err(Error::UnknownNode(v));
    }
    let mut side = vec![0u8; net.num_nodes()];
    for &v in a {
        side[v] = 1;
    }
    if b.iter().any(|&v| side[v] == 1) {
        return Err(Error::Degenerate("terminal sets overlap: resistance is zero".into()));
    }
    let fixed: Vec<usize> = a.iter().chain(b).copied().collect();
    let values: Vec<f64> = a.iter().map(|_| 0.0).chain(b.iter().map(|_| 1.0)).collect();
    let (u, residual, iterations) = net.dirichlet_solve(&fixed, &values, opts)?;
    let energy = net.energy(&u);
    let value = if energy > 0.0 { 1.0 / energy } else { f64::INFINITY };
    Ok(ResistanceResult { value, potentials: u, residual, iterations })
}

/// Unit-conductance network on the cells of a cell graph.
pub fn cell_network(g: &CellGraph) -> WeightedNetwork {
    let edges = g.edges().iter().map(|&(a, b)| (a, b, 1.0)).collect();
    WeightedNetwork { n: g.num_nodes(), edges, labels: None }
}

/// Network on `V_n` with conductance equal to the edge multiplicity.
pub fn vertex_network(g: &VertexGraph) -> WeightedNetwork {
    let edges = g.edges().iter().map(|&(a, b, m)| (a, b, m as f64)).collect();
    WeightedNetwork { n: g.num_vertices(), edges, labels: None }
}

/// `R_n(w1, w2)` on the SG cell graph with unit conductances.
pub fn sg_cell_resistance(n: usize, w1: usize, w2: usize) -> Result<ResistanceResult> {
    let g = crate::geometry::cell_graph(FractalKind::SG, n)?;
    effective_resistance(&cell_network(&g), &[w1], &[w2])
}

/// Left and right sides `{x = 0}`, `{x = 1}` of an SC vertex graph.
pub fn sc_sides(g: &VertexGraph) -> (Vec<usize>, Vec<usize>) {
    let side = g.side();
    let left = (0..g.num_vertices()).filter(|&v| g.raw_coords(v).0 == 0).collect();
    let right = (0..g.num_vertices()).filter(|&v| g.raw_coords(v).0 == side).collect();
    (left, right)
}

/// `R_n^V`: resistance between the left and right sides of the SC under `D_n`.
pub fn sc_rnv(g: &VertexGraph, opts: &SolverOptions) -> Result<ResistanceResult> {
    if g.kind != FractalKind::SC || g.level == 0 {
        return crate::error::invalid("R_n^V needs an SC vertex graph of level >= 1");
    }
    let (left, right) = sc_sides(g);
    effective_resistance_with(&vertex_network(g), &left, &right, opts)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RhoEstimate {
    pub rho_hat: f64,
    pub beta_star_hat: f64,
}

/// Fits `log R_n = c + n log rho` by least squares.
pub fn rho_estimate(values: &[(usize, f64)]) -> Result<RhoEstimate> {
    if values.len() < 3 {
        return crate::error::invalid("rho_estimate needs at least 3 levels");
    }
    if values.iter().any(|&(_, r)| !(r > 0.0 && r.is_finite())) {
        return crate::error::invalid("resistances must be positive and finite");
    }
    let xs: Vec<f64> = values.iter().map(|&(n, _)| n as f64).collect();
    let ys: Vec<f64> = values.iter().map(|&(_, r)| r.ln()).collect();
    let (slope, _) = log_linear_fit(&xs, &ys);
    let rho_hat = slope.exp();
    Ok(RhoEstimate { rho_hat, beta_star_hat: (8.0 * rho_hat).ln() / 3f64.ln() })
}
