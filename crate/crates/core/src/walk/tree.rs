use super::WalkParams;
use crate::error::{Error, Result};
use crate::geometry::{EdgeType, FractalKind, Word};
use crate::network::WeightedNetwork;
use num_rational::Ratio;
use std::collections::VecDeque;

/// A vertex of the tree: the SG word of length `level` with lexicographic index `index`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    pub level: u32,
    pub index: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TreeEdge {
    Vertical,
    Horizontal(EdgeType),
}

impl Node {
    pub const ROOT: Node = Node { level: 0, index: 0 };

    pub fn from_word(w: &Word) -> Result<Node> {
        if w.digits().iter().any(|&d| d > 2) || w.level() > 39 {
            return Err(Error::InvalidArgument(format!("{w} is not an SG word of supported depth")));
        }
        Ok(Node { level: w.level() as u32, index: w.index(FractalKind::SG) as u64 })
    }

    pub fn word(&self) -> Word {
        Word::from_index(FractalKind::SG, self.level as usize, self.index as usize)
    }

    pub fn parent(&self) -> Option<Node> {
        (self.level > 0).then(|| Node { level: self.level - 1, index: self.index / 3 })
    }

    pub fn child(&self, d: u8) -> Node {
        Node { level: self.level + 1, index: 3 * self.index + d as u64 }
    }

    /// The two siblings; they are the type-I neighbours.
    pub fn siblings(&self) -> [Node; 2] {
        let base = self.index - self.index % 3;
        let d = self.index % 3;
        let s = |k: u64| Node { level: self.level, index: base + (d + k) % 3 };
        [s(1), s(2)]
    }

    /// The type-II neighbour `v a b^m -> v b a^m`.
    pub fn type_two(&self) -> Option<Node> {
        let n = self.level;
        if n < 2 {
            return None;
        }
        let b = self.index % 3;
        let (mut m, mut p, mut rest) = (0u32, 1u64, self.index);
        while m < n && rest % 3 == b {
            rest /= 3;
            p *= 3;
            m += 1;
        }
        if m == n {
            return None;
        }
        let a = rest % 3;
        let prefix = rest / 3;
        Some(Node { level: n, index: (prefix * 3 + b) * p + a * (p - 1) / 2 })
    }

    /// All neighbours with edge types and the level of the conductance.
    pub fn neighbours(&self) -> Vec<(Node, TreeEdge, usize)> {
        let mut out = Vec::with_capacity(7);
        let n = self.level as usize;
        if let Some(p) = self.parent() {
            out.push((p, TreeEdge::Vertical, n - 1));
            for s in self.siblings() {
                out.push((s, TreeEdge::Horizontal(EdgeType::I), n));
            }
        }
        for d in 0..3 {
            out.push((self.child(d), TreeEdge::Vertical, n));
        }
        if let Some(t) = self.type_two() {
            out.push((t, TreeEdge::Horizontal(EdgeType::II), n));
        }
        out
    }
}

/// `B_N`: all words of levels `0..=N` with vertical and horizontal edges.
#[derive(Clone, Debug)]
pub struct TreeGraph {
    pub depth: usize,
    /// `(a, b, type, level)` with ids `a < b`; `level` is that of the conductance.
    edges: Vec<(u32, u32, TreeEdge, u32)>,
}

pub(crate) fn level_offset(n: usize) -> u64 {
    (3u64.pow(n as u32) - 1) / 2
}

impl TreeGraph {
    pub fn new(depth: usize) -> Result<TreeGraph> {
        if depth > 13 {
            return Err(Error::LevelCap { level: depth, cap: 13 });
        }
        let mut t = TreeGraph { depth, edges: Vec::new() };
        let mut edges = Vec::new();
        for n in 0..=depth {
            for i in 0..3u64.pow(n as u32) {
                let x = Node { level: n as u32, index: i };
                let a = t.id(x);
                for (y, ty, lev) in x.neighbours() {
                    if y.level as usize > depth {
                        continue;
                    }
                    let b = t.id(y);
                    if a < b {
                        edges.push((a, b, ty, lev as u32));
                    }
                }
            }
        }
        edges.sort_unstable_by_key(|e| (e.0, e.1));
        t.edges = edges;
        Ok(t)
    }

    pub fn num_nodes(&self) -> usize {
        level_offset(self.depth + 1) as usize
    }

    pub fn id(&self, x: Node) -> u32 {
        (level_offset(x.level as usize) + x.index) as u32
    }

    pub fn node(&self, id: u32) -> Node {
        let mut n = 0;
        while level_offset(n + 1) <= id as u64 {
            n += 1;
        }
        Node { level: n as u32, index: id as u64 - level_offset(n) }
    }

    pub fn contains(&self, x: Node) -> bool {
        (x.level as usize) <= self.depth && x.index < 3u64.pow(x.level)
    }

    pub fn edges(&self) -> &[(u32, u32, TreeEdge, u32)] {
        &self.edges
    }

    /// Horizontal edges at level `n` as pairs of lexicographic indices.
    pub fn horizontal_edges(&self, n: usize) -> Vec<(u32, u32, EdgeType)> {
        let off = level_offset(n) as u32;
        let mut v: Vec<_> = self
            .edges
            .iter()
            .filter_map(|&(a, b, t, l)| match t {
                TreeEdge::Horizontal(ty) if l as usize == n => Some((a - off, b - off, ty)),
                _ => None,
            })
            .collect();
        v.sort_unstable();
        v
    }

    pub fn vertical_count(&self) -> usize {
        self.edges.iter().filter(|e| e.2 == TreeEdge::Vertical).count()
    }

    pub fn network(&self, p: &WalkParams) -> WeightedNetwork {
        let e = self.edges.iter().map(|&(a, b, t, l)| (a, b, p.conductance(t, l as usize))).collect();
        WeightedNetwork::from_edges(self.num_nodes(), e).expect("tree edges are valid")
    }

    /// Graph distances from `x` within `B_N`.
    pub fn distances(&self, x: Node) -> Result<Vec<u32>> {
        if !self.contains(x) {
            return Err(Error::InvalidArgument(format!("{} is not in B_{}", x.word(), self.depth)));
        }
        let mut dist = vec![u32::MAX; self.num_nodes()];
        let mut q = VecDeque::new();
        dist[self.id(x) as usize] = 0;
        q.push_back(x);
        while let Some(y) = q.pop_front() {
            let dy = dist[self.id(y) as usize];
            for (z, _, _) in y.neighbours() {
                if self.contains(z) && dist[self.id(z) as usize] == u32::MAX {
                    dist[self.id(z) as usize] = dy + 1;
                    q.push_back(z);
                }
            }
        }
        Ok(dist)
    }

    /// `|x ^ y| = (|x| + |y| - d(x, y)) / 2`.
    pub fn gromov_product(&self, x: Node, y: Node) -> Result<Ratio<i64>> {
        let d = self.distances(x)?[self.id(y) as usize];
        Ok(Ratio::new(x.level as i64 + y.level as i64 - d as i64, 2))
    }

    /// `exp(-a |x ^ y|)`, and 0 for `x = y`.
    pub fn rho_a(&self, x: Node, y: Node, a: f64) -> Result<f64> {
        if x == y {
            return Ok(0.0);
        }
        let g = self.gromov_product(x, y)?;
        Ok((-a * *g.numer() as f64 / *g.denom() as f64).exp())
    }
}

/// Largest `min(|x^z|, |z^y|) - |x^y|` over the given triples.
pub fn gromov_delta(t: &TreeGraph, triples: &[(Node, Node, Node)]) -> Result<f64> {
    let mut best = 0.0f64;
    for &(x, y, z) in triples {
        let dx = t.distances(x)?;
        let dz = t.distances(z)?;
        let gp = |a: Node, b: Node, d: &[u32]| (a.level as f64 + b.level as f64 - d[t.id(b) as usize] as f64) / 2.0;
        let xy = gp(x, y, &dx);
        let xz = gp(x, z, &dx);
        let zy = gp(z, y, &dz);
        best = best.max(xz.min(zy) - xy);
    }
    Ok(best)
}
