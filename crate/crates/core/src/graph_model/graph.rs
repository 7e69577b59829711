use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A simple labelled graph on `0..n`, stored as a sorted edge list plus
/// bitset adjacency rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    words: usize,
    adj: Vec<u64>,
}

/// Patterns H and H^[r] are ordinary graphs.
pub type PatternGraph = Graph;

impl Graph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self { n, edges: Vec::new(), words, adj: vec![0; words * n] }
    }

    /// Builds a graph from 0-indexed edges. Rejects loops, repeats and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::empty(n);
        for (u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        g.edges.sort_unstable();
        Ok(g)
    }

    fn try_add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u >= self.n || v >= self.n {
            return Err(Error::InvalidGraph(format!("edge ({u}, {v}) out of range for n = {}", self.n)));
        }
        if u == v {
            return Err(Error::InvalidGraph(format!("loop at vertex {u}")));
        }
        if self.has_edge(u, v) {
            return Err(Error::InvalidGraph(format!("repeated edge ({u}, {v})")));
        }
        self.set(u, v, true);
        self.edges.push((u.min(v), u.max(v)));
        Ok(())
    }

    /// Adds an edge, keeping the edge list sorted.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        self.try_add_edge(u, v)?;
        self.edges.sort_unstable();
        Ok(())
    }

    /// Removes an edge if present; returns whether it was there.
    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if u >= self.n || v >= self.n || !self.has_edge(u, v) {
            return false;
        }
        self.set(u, v, false);
        let key = (u.min(v), u.max(v));
        if let Ok(i) = self.edges.binary_search(&key) {
            self.edges.remove(i);
        }
        true
    }

    fn set(&mut self, u: usize, v: usize, on: bool) {
        let (wu, bu) = (u / 64, u % 64);
        let (wv, bv) = (v / 64, v % 64);
        if on {
            self.adj[u * self.words + wv] |= 1 << bv;
            self.adj[v * self.words + wu] |= 1 << bu;
        } else {
            self.adj[u * self.words + wv] &= !(1 << bv);
            self.adj[v * self.words + wu] &= !(1 << bu);
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] >> (v % 64) & 1 == 1
    }

    pub(crate) fn row(&self, u: usize) -> &[u64] {
        &self.adj[u * self.words..(u + 1) * self.words]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n).map(|u| self.degree(u)).collect()
    }

    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.n).filter(move |&v| self.has_edge(u, v))
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    pub fn isolated_count(&self) -> usize {
        (0..self.n).filter(|&u| self.degree(u) == 0).count()
    }

    /// The graph on the same vertices with `u -> perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n {
            return Err(Error::SizeMismatch(format!("permutation of length {} for n = {}", perm.len(), self.n)));
        }
        Self::from_edges(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }

    /// Pads with isolated vertices up to `n` total vertices.
    pub fn with_isolated(&self, n: usize) -> Result<Self> {
        if n < self.n {
            return Err(Error::SizeMismatch(format!("cannot shrink {} vertices to {n}", self.n)));
        }
        Self::from_edges(n, self.edges.iter().copied())
    }

    pub fn complement(&self) -> Self {
        let mut e = Vec::new();
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.has_edge(u, v) {
                    e.push((u, v));
                }
            }
        }
        Self::from_edges(self.n, e).expect("complement of a simple graph is simple")
    }

    /// The subgraph induced on `0..r`.
    pub fn induced_prefix(&self, r: usize) -> Result<Self> {
        if r > self.n {
            return Err(Error::SizeMismatch(format!("prefix {r} exceeds n = {}", self.n)));
        }
        Self::from_edges(r, self.edges.iter().copied().filter(|&(_, v)| v < r))
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    pub fn is_regular_of_degree(&self, h: usize) -> bool {
        (0..self.n).all(|u| self.degree(u) == h)
    }

    // Standard patterns.

    pub fn complete(n: usize) -> Self {
        Self::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::pre("a cycle needs at least 3 vertices"));
        }
        Self::from_edges(n, (0..n).map(|u| (u, (u + 1) % n)))
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|u| (u - 1, u))).unwrap()
    }

    pub fn star(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|u| (0, u))).unwrap()
    }

    pub fn perfect_matching(n: usize) -> Result<Self> {
        if n % 2 == 1 {
            return Err(Error::pre("a perfect matching needs an even vertex count"));
        }
        Self::from_edges(n, (0..n / 2).map(|i| (2 * i, 2 * i + 1)))
    }

    /// K_r on the first r vertices plus `n - r` isolated vertices.
    pub fn clique_with_isolated(r: usize, n: usize) -> Result<Self> {
        Self::complete(r).with_isolated(n)
    }

    pub fn petersen() -> Self {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (i + 5, (i + 2) % 5 + 5));
        Self::from_edges(10, outer.chain(spokes).chain(inner)).unwrap()
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph").field("n", &self.n).field("edges", &self.edges).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr { n: self.n, edges: self.edges.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GraphRepr::deserialize(d)?;
        Graph::from_edges(r.n, r.edges).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders() {
        let c = Graph::cycle(5).unwrap();
        assert_eq!(c.edge_count(), 5);
        assert!(c.is_regular_of_degree(2));
        assert_eq!(Graph::complete(4).edge_count(), 6);
        let p = Graph::petersen();
        assert!(p.is_regular_of_degree(3));
        assert_eq!(p.edge_count(), 15);
        assert_eq!(Graph::perfect_matching(6).unwrap().degrees(), vec![1; 6]);
        assert!(Graph::perfect_matching(5).is_err());
        let k3 = Graph::clique_with_isolated(3, 6).unwrap();
        assert_eq!(k3.isolated_count(), 3);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(Graph::from_edges(3, [(0, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 1), (1, 0)]).is_err());
        assert!(Graph::from_edges(3, [(0, 3)]).is_err());
    }

    #[test]
    fn handshake_and_relabel() {
        let g = Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (1, 4)]).unwrap();
        assert_eq!(g.degrees().iter().sum::<usize>(), 2 * g.edge_count());
        let h = g.relabel(&[4, 3, 2, 1, 0]).unwrap();
        assert_eq!(h.degree(3), 3);
        assert_eq!(g.complement().edge_count(), 10 - 4);
        assert_eq!(g.induced_prefix(3).unwrap().edge_count(), 2);
    }

    #[test]
    fn wide_graph_bitsets() {
        let g = Graph::cycle(130).unwrap();
        assert!(g.has_edge(129, 0));
        assert!(g.has_edge(64, 63));
        assert!(g.is_connected());
        let mut h = g.clone();
        assert!(h.remove_edge(0, 129));
        assert!(!h.has_edge(129, 0));
        assert_eq!(h.edge_count(), 129);
    }
}
