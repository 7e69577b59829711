//! Counting copies of a pattern inside one host graph.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::asymptotics::FORMULA_AUT_LIMIT;
use crate::error::{Error, Result};
use crate::graph_model::Graph;
use crate::pattern_stats::automorphism_count;

/// A pattern prepared for repeated copy counting: the vertices to embed, an
/// embedding order, and the automorphism count to divide by.
#[derive(Debug, Clone)]
pub struct CopyCounter {
    induced: bool,
    /// Pattern vertices in embedding order.
    order: Vec<usize>,
    /// For position `i`, the earlier positions adjacent in the pattern.
    back_adj: Vec<Vec<usize>>,
    /// For position `i`, the earlier positions non-adjacent in the pattern.
    back_non: Vec<Vec<usize>>,
    aut: u128,
    /// Set when the pattern's non-isolated part is a perfect matching on
    /// some vertices, which is counted by a memoized matching recursion.
    matching_edges: Option<usize>,
}

impl CopyCounter {
    /// Spanning copies (edge subsets isomorphic to `h`) when `induced` is
    /// false; vertex subsets inducing `h` when true. Isolated pattern
    /// vertices are not embedded in the spanning case.
    pub fn new(h: &Graph, induced: bool) -> Result<Self> {
        let core: Vec<usize> = if induced {
            (0..h.vertex_count()).collect()
        } else {
            (0..h.vertex_count()).filter(|&v| h.degree(v) > 0).collect()
        };
        let pattern = if induced { h.clone() } else { compact(h, &core) };
        let aut = automorphism_count(&pattern, FORMULA_AUT_LIMIT)?
            .to_u128()
            .ok_or_else(|| Error::pre("pattern automorphism count exceeds u128"))?;
        let k = pattern.vertex_count();
        let matching_edges = (!induced && k > 0 && pattern.is_regular_of_degree(1)).then_some(k / 2);
        let order = embedding_order(&pattern);
        let mut back_adj = Vec::with_capacity(k);
        let mut back_non = Vec::with_capacity(k);
        for (i, &p) in order.iter().enumerate() {
            let (adj, non): (Vec<usize>, Vec<usize>) = (0..i).partition(|&j| pattern.has_edge(p, order[j]));
            back_adj.push(adj);
            back_non.push(non);
        }
        Ok(Self { induced, order, back_adj, back_non, aut, matching_edges })
    }

    pub fn automorphisms(&self) -> u128 {
        self.aut
    }

    /// Number of copies of the pattern in `g`.
    pub fn count(&self, g: &Graph) -> Result<u128> {
        let n = g.vertex_count();
        if n > 64 {
            return Err(Error::pre(format!("copy counting supports hosts with n <= 64, got {n}")));
        }
        if self.order.len() > n {
            return Ok(0);
        }
        let rows: Vec<u64> = (0..n).map(|v| g.row(v)[0]).collect();
        if let Some(m) = self.matching_edges {
            return Ok(count_matchings(&rows, m));
        }
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        let mut images = vec![0usize; self.order.len()];
        let emb = self.embed(0, &rows, all, &mut images);
        debug_assert_eq!(emb % self.aut, 0);
        Ok(emb / self.aut)
    }

    fn embed(&self, i: usize, rows: &[u64], free: u64, images: &mut [usize]) -> u128 {
        if i == self.order.len() {
            return 1;
        }
        let mut cand = free;
        for &j in &self.back_adj[i] {
            cand &= rows[images[j]];
        }
        if self.induced {
            for &j in &self.back_non[i] {
                cand &= !rows[images[j]];
            }
        }
        let mut total = 0u128;
        while cand != 0 {
            let v = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            images[i] = v;
            total += self.embed(i + 1, rows, free & !(1u64 << v), images);
        }
        total
    }
}

fn compact(h: &Graph, keep: &[usize]) -> Graph {
    let mut pos = vec![usize::MAX; h.vertex_count()];
    for (i, &v) in keep.iter().enumerate() {
        pos[v] = i;
    }
    Graph::from_edges(keep.len(), h.edges().iter().map(|&(a, b)| (pos[a], pos[b]))).expect("relabelled pattern is simple")
}

/// Highest-degree vertex first, then repeatedly the vertex with the most
/// already-placed neighbours, so candidate sets shrink early.
fn embedding_order(p: &Graph) -> Vec<usize> {
    let k = p.vertex_count();
    let mut placed = vec![false; k];
    let mut order = Vec::with_capacity(k);
    for _ in 0..k {
        let next = (0..k)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let back = p.neighbors(v).filter(|&w| placed[w]).count();
                (back, p.degree(v), std::cmp::Reverse(v))
            })
            .expect("an unplaced vertex remains");
        placed[next] = true;
        order.push(next);
    }
    order
}

/// Number of `m`-edge matchings in the graph given by adjacency rows.
fn count_matchings(rows: &[u64], m: usize) -> u128 {
    fn rec(rows: &[u64], avail: u64, m: usize, memo: &mut HashMap<(u64, usize), u128>) -> u128 {
        if m == 0 {
            return 1;
        }
        if (avail.count_ones() as usize) < 2 * m {
            return 0;
        }
        if let Some(&c) = memo.get(&(avail, m)) {
            return c;
        }
        let v = avail.trailing_zeros() as usize;
        let rest = avail & !(1u64 << v);
        // Either v stays unmatched, or it is matched to a later neighbour.
        let mut total = rec(rows, rest, m, memo);
        let mut nb = rows[v] & rest;
        while nb != 0 {
            let w = nb.trailing_zeros() as usize;
            nb &= nb - 1;
            total += rec(rows, rest & !(1u64 << w), m - 1, memo);
        }
        memo.insert((avail, m), total);
        total
    }
    let n = rows.len();
    let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    rec(rows, all, m, &mut HashMap::new())
}

/// Copies of `h` in `g`; see [`CopyCounter::new`] for the two senses.
pub fn count_copies(g: &Graph, h: &Graph, induced: bool) -> Result<u128> {
    CopyCounter::new(h, induced)?.count(g)
}

/// `|Aut|` as used by the copy counter, exposed for the exact expectations.
pub(crate) fn aut_big(h: &Graph) -> Result<BigUint> {
    automorphism_count(h, FORMULA_AUT_LIMIT)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn copies_in_complete_graphs() {
        let k5 = Graph::complete(5);
        assert_eq!(count_copies(&k5, &Graph::clique_with_isolated(3, 5).unwrap(), false).unwrap(), 10);
        assert_eq!(count_copies(&k5, &Graph::complete(3), true).unwrap(), 10);
        assert_eq!(count_copies(&k5, &Graph::cycle(5).unwrap(), false).unwrap(), 12);
        assert_eq!(count_copies(&k5, &Graph::path(5), false).unwrap(), 60);
        let k6 = Graph::complete(6);
        assert_eq!(count_copies(&k6, &Graph::perfect_matching(6).unwrap(), false).unwrap(), 15);
        assert_eq!(count_copies(&k6, &Graph::empty(2), true).unwrap(), 0);
    }

    #[test]
    fn induced_respects_non_edges() {
        let c4 = Graph::cycle(4).unwrap();
        assert_eq!(count_copies(&c4, &Graph::empty(2), true).unwrap(), 2);
        assert_eq!(count_copies(&c4, &Graph::path(3), true).unwrap(), 4);
        assert_eq!(count_copies(&c4, &Graph::path(3).with_isolated(4).unwrap(), false).unwrap(), 4);
        assert_eq!(count_copies(&c4, &Graph::complete(2), true).unwrap(), 4);
    }

    #[test]
    fn matching_path_agrees_with_embedding() {
        let g = Graph::petersen();
        let pm = Graph::perfect_matching(10).unwrap();
        let by_matching = count_copies(&g, &pm, false).unwrap();
        assert_eq!(by_matching, 6);
        let mut c = CopyCounter::new(&pm, false).unwrap();
        c.matching_edges = None;
        assert_eq!(c.count(&g).unwrap(), 6);
        let two = Graph::from_edges(10, [(0, 1), (2, 3)]).unwrap();
        let mut c = CopyCounter::new(&two, false).unwrap();
        let fast = c.count(&g).unwrap();
        c.matching_edges = None;
        assert_eq!(c.count(&g).unwrap(), fast);
    }
}
