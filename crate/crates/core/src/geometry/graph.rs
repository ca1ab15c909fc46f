use super::point::{graph_scale, raw_cell_offset, SC_P, SG_P};
use super::{point_of, ExactPoint, FractalKind, Word};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeType {
    I,
    II,
}

/// The level-n vertex set `V_n` together with the cell incidences `V_w`.
#[derive(Clone, Debug)]
pub struct VertexGraph {
    pub kind: FractalKind,
    pub level: usize,
    coords: Vec<(i64, i64)>,
    address: Vec<(u32, u8)>,
    cells: Vec<u32>,
    edges: Vec<(u32, u32, u8)>,
    lookup: HashMap<(i64, i64), u32>,
}

impl VertexGraph {
    pub fn num_vertices(&self) -> usize {
        self.coords.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len() / self.kind.cell_arity()
    }

    /// Scale of the raw coordinates returned by [`VertexGraph::raw_coords`].
    pub fn scale(&self) -> u32 {
        graph_scale(self.kind, self.level)
    }

    /// Vertex ids of `V_w`, ordered by the last digit: `cell(w)[j] = P_{wj}`.
    pub fn cell(&self, w: usize) -> &[u32] {
        let a = self.kind.cell_arity();
        &self.cells[w * a..(w + 1) * a]
    }

    pub fn cells_flat(&self) -> &[u32] {
        &self.cells
    }

    pub fn raw_coords(&self, v: usize) -> (i64, i64) {
        self.coords[v]
    }

    pub fn all_raw_coords(&self) -> &[(i64, i64)] {
        &self.coords
    }

    pub fn point(&self, v: usize) -> ExactPoint {
        let (x, y) = self.coords[v];
        ExactPoint::new(self.kind, x, y, self.scale())
    }

    pub fn coords_f64(&self, v: usize) -> (f64, f64) {
        self.point(v).to_f64()
    }

    /// Short edges with multiplicity (number of cells containing the pair),
    /// sorted by `(i, j)` with `i < j`. For the SG every side lies in one cell.
    pub fn edges(&self) -> &[(u32, u32, u8)] {
        &self.edges
    }

    pub fn find(&self, p: &ExactPoint) -> Option<u32> {
        if p.kind != self.kind {
            return None;
        }
        let xy = p.at_scale(self.scale())?;
        self.lookup.get(&xy).copied()
    }

    /// Lexicographically smallest address `w j` (|w| = level) of vertex `v`.
    pub fn address(&self, v: usize) -> Word {
        let (cell, j) = self.address[v];
        let mut w = Word::from_index(self.kind, self.level, cell as usize);
        w.push(j);
        w
    }

    pub fn canonical_address(&self, p: &ExactPoint) -> Result<Word> {
        self.find(p)
            .map(|v| self.address(v as usize))
            .ok_or(Error::PointNotInGraph(self.level))
    }

    /// For each vertex of `coarse` (a lower level of the same fractal), its id here.
    pub fn restriction_map(&self, coarse: &VertexGraph) -> Result<Vec<u32>> {
        if coarse.kind != self.kind || coarse.level > self.level {
            return crate::error::invalid("restriction needs a coarser graph of the same kind");
        }
        let f = self.kind.base().pow((self.level - coarse.level) as u32);
        coarse
            .coords
            .iter()
            .map(|&(x, y)| {
                self.lookup.get(&(x * f, y * f)).copied().ok_or(Error::PointNotInGraph(self.level))
            })
            .collect()
    }

    /// Extent of the raw coordinates: the right/top side of the unit square
    /// (SC) or the right end of the base segment (SG) has raw value `side()`.
    pub fn side(&self) -> i64 {
        match self.kind {
            FractalKind::SG => 1 << self.scale(),
            FractalKind::SC => 2 * 3i64.pow(self.scale()),
        }
    }

    pub fn address_table(&self) -> &[(u32, u8)] {
        &self.address
    }

    pub(crate) fn from_parts(
        kind: FractalKind,
        level: usize,
        coords: Vec<(i64, i64)>,
        address: Vec<(u32, u8)>,
        cells: Vec<u32>,
        edges: Vec<(u32, u32, u8)>,
    ) -> Result<Self> {
        let arity = kind.cell_arity();
        let n_cells = arity.pow(level as u32);
        if cells.len() != n_cells * arity || address.len() != coords.len() {
            return Err(Error::Cache("inconsistent vertex graph payload".into()));
        }
        if cells.iter().any(|&v| v as usize >= coords.len())
            || edges.iter().any(|&(i, j, _)| i as usize >= coords.len() || j as usize >= coords.len())
        {
            return Err(Error::Cache("vertex id out of range".into()));
        }
        let lookup = coords.iter().enumerate().map(|(i, &c)| (c, i as u32)).collect();
        Ok(VertexGraph { kind, level, coords, address, cells, edges, lookup })
    }

    /// JSON export: `{kind, level, vertices: [[num, num, scale]...], edges: [[i, j, mult]...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Export<'a> {
            kind: &'a str,
            level: usize,
            vertices: Vec<[i64; 3]>,
            edges: Vec<[u32; 3]>,
        }
        let vertices = (0..self.num_vertices())
            .map(|v| {
                let p = self.point(v);
                [p.x, p.y, p.scale as i64]
            })
            .collect();
        let edges = self.edges.iter().map(|&(i, j, m)| [i, j, m as u32]).collect();
        serde_json::to_value(Export { kind: self.kind.tag(), level: self.level, vertices, edges })
            .expect("vertex graph export is always serializable")
    }
}

pub fn vertex_graph(kind: FractalKind, n: usize) -> Result<VertexGraph> {
    vertex_graph_capped(kind, n, kind.default_level_cap())
}

pub fn vertex_graph_capped(kind: FractalKind, n: usize, cap: usize) -> Result<VertexGraph> {
    if n > cap {
        return Err(Error::LevelCap { level: n, cap });
    }
    let arity = kind.cell_arity();
    let reps: &[(i64, i64)] = match kind {
        FractalKind::SG => &SG_P,
        FractalKind::SC => &SC_P,
    };
    let n_cells = arity.pow(n as u32);
    let mut coords = Vec::new();
    let mut address = Vec::new();
    let mut cells = Vec::with_capacity(n_cells * arity);
    let mut lookup: HashMap<(i64, i64), u32> = HashMap::new();
    for c in 0..n_cells {
        let w = Word::from_index(kind, n, c);
        let (ox, oy) = raw_cell_offset(kind, w.digits());
        for (j, &(px, py)) in reps.iter().enumerate() {
            let key = (ox + px, oy + py);
            let id = *lookup.entry(key).or_insert_with(|| {
                coords.push(key);
                address.push((c as u32, j as u8));
                (coords.len() - 1) as u32
            });
            cells.push(id);
        }
    }
    let mut keys: Vec<u64> = Vec::with_capacity(n_cells * arity);
    for c in 0..n_cells {
        let vs = &cells[c * arity..(c + 1) * arity];
        let pairs: Vec<(u32, u32)> = match kind {
            FractalKind::SG => vec![(vs[0], vs[1]), (vs[1], vs[2]), (vs[0], vs[2])],
            FractalKind::SC => (0..8).map(|j| (vs[j], vs[(j + 1) % 8])).collect(),
        };
        for (a, b) in pairs {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            keys.push(((lo as u64) << 32) | hi as u64);
        }
    }
    keys.sort_unstable();
    let mut edges = Vec::new();
    let mut i = 0;
    while i < keys.len() {
        let mut j = i;
        while j < keys.len() && keys[j] == keys[i] {
            j += 1;
        }
        edges.push(((keys[i] >> 32) as u32, keys[i] as u32, (j - i) as u8));
        i = j;
    }
    Ok(VertexGraph { kind, level: n, coords, address, cells, edges, lookup })
}

/// The level-n cell graph: nodes are the words of `W_n` in lexicographic order.
#[derive(Clone, Debug)]
pub struct CellGraph {
    pub kind: FractalKind,
    pub level: usize,
    edges: Vec<(u32, u32)>,
    edge_types: Vec<EdgeType>,
}

impl CellGraph {
    pub fn num_nodes(&self) -> usize {
        self.kind.alphabet_size().pow(self.level as u32)
    }

    pub fn word(&self, i: usize) -> Word {
        Word::from_index(self.kind, self.level, i)
    }

    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    /// Edge labels, parallel to [`CellGraph::edges`]; empty for the SC.
    pub fn edge_types(&self) -> &[EdgeType] {
        &self.edge_types
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let key = if a < b { (a as u32, b as u32) } else { (b as u32, a as u32) };
        self.edges.binary_search(&key).is_ok()
    }

    pub fn edge_type(&self, a: usize, b: usize) -> Option<EdgeType> {
        let key = if a < b { (a as u32, b as u32) } else { (b as u32, a as u32) };
        let i = self.edges.binary_search(&key).ok()?;
        self.edge_types.get(i).copied()
    }

    pub fn adjacency(&self) -> Vec<Vec<u32>> {
        let mut adj = vec![Vec::new(); self.num_nodes()];
        for &(a, b) in &self.edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        adj
    }
}

pub fn cell_graph(kind: FractalKind, n: usize) -> Result<CellGraph> {
    match kind {
        FractalKind::SG => sg_cell_graph(n),
        FractalKind::SC => sc_cell_graph(n),
    }
}

fn sg_cell_graph(n: usize) -> Result<CellGraph> {
    let kind = FractalKind::SG;
    let vg = vertex_graph(kind, n)?;
    let mut first: Vec<u32> = vec![u32::MAX; vg.num_vertices()];
    let mut edges = Vec::new();
    for c in 0..vg.num_cells() {
        for &v in vg.cell(c) {
            let slot = &mut first[v as usize];
            if *slot == u32::MAX {
                *slot = c as u32;
            } else {
                edges.push((*slot, c as u32));
            }
        }
    }
    edges.sort_unstable();
    let edge_types = edges
        .iter()
        .map(|&(a, b)| {
            let p = point_of(kind, &Word::from_index(kind, n, a as usize)).unwrap();
            let q = point_of(kind, &Word::from_index(kind, n, b as usize)).unwrap();
            if p != q {
                EdgeType::I
            } else {
                EdgeType::II
            }
        })
        .collect();
    Ok(CellGraph { kind, level: n, edges, edge_types })
}

fn sc_cell_graph(n: usize) -> Result<CellGraph> {
    let kind = FractalKind::SC;
    if n > kind.default_level_cap() {
        return Err(Error::LevelCap { level: n, cap: kind.default_level_cap() });
    }
    let side = 3usize.pow(n as u32);
    let n_cells = 8usize.pow(n as u32);
    let mut grid = vec![u32::MAX; side * side];
    let mut pos = Vec::with_capacity(n_cells);
    for c in 0..n_cells {
        let w = Word::from_index(kind, n, c);
        let (mut x, mut y) = (0usize, 0usize);
        for &d in w.digits() {
            let (px, py) = SC_P[d as usize];
            x = 3 * x + px as usize;
            y = 3 * y + py as usize;
        }
        grid[y * side + x] = c as u32;
        pos.push((x, y));
    }
    let mut edges = Vec::new();
    for (c, &(x, y)) in pos.iter().enumerate() {
        for (nx, ny) in [(x + 1, y), (x, y + 1)] {
            if nx < side && ny < side {
                let d = grid[ny * side + nx];
                if d != u32::MAX {
                    let (a, b) = (c as u32, d);
                    edges.push(if a < b { (a, b) } else { (b, a) });
                }
            }
        }
    }
    edges.sort_unstable();
    Ok(CellGraph { kind, level: n, edges, edge_types: Vec::new() })
}

/// The unique type-II neighbour of an SG word: `v a b^m -> v b a^m` with the
/// trailing run `b^m` maximal. Constant words have none.
pub fn sg_type_two_neighbor(w: &[u8]) -> Option<Vec<u8>> {
    let &b = w.last()?;
    let m = w.iter().rev().take_while(|&&d| d == b).count();
    if m == w.len() {
        return None;
    }
    let k = w.len() - m - 1;
    let a = w[k];
    let mut out = w[..k].to_vec();
    out.push(b);
    out.extend(std::iter::repeat(a).take(m));
    Some(out)
}
