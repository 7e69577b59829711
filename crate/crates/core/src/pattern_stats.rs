//! Pattern-side statistics: power moments of the pattern degrees, their
//! λ-centred versions for induced patterns, mixed moments against degree
//! deviations, and the automorphism group order.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph_model::{DegreeSequence, Graph};
use crate::numeric::{csum, factorial};

/// Default cap on the non-isolated part for [`automorphism_count`].
pub const DEFAULT_AUT_LIMIT: usize = 12;

/// `m`, `mu_t = (1/n) sum h_j^t` for t = 1, 2, 3, and `sum_{jk in E} h_j h_k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternMoments {
    pub n: usize,
    pub m: usize,
    pub mu: [f64; 3],
    pub edge_prod_sum: f64,
}

impl PatternMoments {
    pub fn mu(&self, t: usize) -> f64 {
        self.mu[t - 1]
    }
}

pub fn pattern_moments(h: &Graph) -> PatternMoments {
    let deg = h.degrees();
    let n = h.vertex_count();
    let nf = n.max(1) as f64;
    // Power sums are integers; keep them exact until the final division.
    let mut sums = [0u128; 3];
    for &x in &deg {
        let x = x as u128;
        sums[0] += x;
        sums[1] += x * x;
        sums[2] += x * x * x;
    }
    let edge_prod: u128 = h.edges().iter().map(|&(u, v)| (deg[u] * deg[v]) as u128).sum();
    PatternMoments {
        n,
        m: h.edge_count(),
        mu: sums.map(|s| s as f64 / nf),
        edge_prod_sum: edge_prod as f64,
    }
}

/// `omega_t = sum_{j<=r} (h_j - lambda(r-1))^t` for t = 1, 2, 3.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InducedMoments {
    pub r: usize,
    pub m: usize,
    pub omega: [f64; 3],
    pub lambda_used: f64,
}

impl InducedMoments {
    pub fn omega(&self, t: usize) -> f64 {
        if t == 0 {
            self.r as f64
        } else {
            self.omega[t - 1]
        }
    }
}

pub fn induced_moments(hr: &Graph, lambda: f64) -> Result<InducedMoments> {
    if !(lambda > 0.0 && lambda < 1.0) {
        return Err(Error::range(format!("lambda = {lambda} must lie strictly between 0 and 1")));
    }
    let r = hr.vertex_count();
    let shift = lambda * (r as f64 - 1.0);
    let c: Vec<f64> = hr.degrees().iter().map(|&x| x as f64 - shift).collect();
    let omega = [1, 2, 3].map(|t| csum(c.iter().map(|x| x.powi(t))));
    Ok(InducedMoments { r, m: hr.edge_count(), omega, lambda_used: lambda })
}

/// `omega_{s,t} = sum_{j<=r} (d_{sigma_j} - dbar)^s (h_j - lambda(r-1))^t`
/// for `0 <= s, t <= 3`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedMoments {
    pub omega_st: [[f64; 4]; 4],
}

impl MixedMoments {
    pub fn get(&self, s: usize, t: usize) -> f64 {
        self.omega_st[s][t]
    }
}

/// Mixed moments from pattern degrees `h` and the degree deviations
/// `dev[j] = d_{sigma_j} - dbar` of the host vertices they sit on.
pub fn mixed_from_parts(h: &[usize], dev: &[f64], lambda: f64) -> MixedMoments {
    let r = h.len();
    let shift = lambda * (r as f64 - 1.0);
    let mut omega_st = [[0.0; 4]; 4];
    for (s, row) in omega_st.iter_mut().enumerate() {
        for (t, cell) in row.iter_mut().enumerate() {
            *cell = csum(
                h.iter()
                    .zip(dev)
                    .map(|(&hj, &dj)| dj.powi(s as i32) * (hj as f64 - shift).powi(t as i32)),
            );
        }
    }
    MixedMoments { omega_st }
}

/// Mixed moments of `hr` placed on host vertices `sigma[0..r]`. `sigma` is a
/// permutation of `0..n` (0-indexed); only its first `r` entries matter.
pub fn mixed_moments(hr: &Graph, d: &DegreeSequence, sigma: &[usize]) -> Result<MixedMoments> {
    let n = d.len();
    let r = hr.vertex_count();
    if r > n {
        return Err(Error::SizeMismatch(format!("pattern has {r} vertices but n = {n}")));
    }
    check_permutation(sigma, n)?;
    let stats = d.stats()?;
    let dev: Vec<f64> = sigma[..r].iter().map(|&v| d.degrees()[v] as f64 - stats.mean_degree).collect();
    Ok(mixed_from_parts(&hr.degrees(), &dev, stats.lambda))
}

pub(crate) fn check_permutation(sigma: &[usize], n: usize) -> Result<()> {
    if sigma.len() != n {
        return Err(Error::SizeMismatch(format!("permutation of length {} for n = {n}", sigma.len())));
    }
    let mut seen = vec![false; n];
    for &x in sigma {
        if x >= n || std::mem::replace(&mut seen[x], true) {
            return Err(Error::pre("sigma is not a permutation of 0..n"));
        }
    }
    Ok(())
}

/// `|Aut(H)|`. Isolated vertices contribute `k!` analytically, so `limit`
/// bounds only the number of non-isolated vertices searched.
pub fn automorphism_count(h: &Graph, limit: usize) -> Result<BigUint> {
    let core: Vec<usize> = (0..h.vertex_count()).filter(|&v| h.degree(v) > 0).collect();
    if core.len() > limit {
        return Err(Error::BudgetExceeded(format!(
            "automorphism search over {} non-isolated vertices exceeds the limit {limit}",
            core.len()
        )));
    }
    let isolated = (h.vertex_count() - core.len()) as u64;
    let sub = relabel_onto(h, &core);
    Ok(stabilizer_chain_order(&sub) * factorial(isolated))
}

fn relabel_onto(h: &Graph, keep: &[usize]) -> Vec<Vec<bool>> {
    keep.iter().map(|&u| keep.iter().map(|&v| h.has_edge(u, v)).collect()).collect()
}

/// Group order as the product of basic orbit lengths along the base
/// `0, 1, ..., k-1`.
fn stabilizer_chain_order(adj: &[Vec<bool>]) -> BigUint {
    let k = adj.len();
    let mut order = BigUint::from(1u32);
    let mut fixed: Vec<usize> = Vec::new();
    for b in 0..k {
        let base_col = individualize_all(adj, &fixed);
        let cell = base_col[b];
        let mut orbit = 0u64;
        for w in 0..k {
            if base_col[w] != cell {
                continue;
            }
            if w == b || maps_to(adj, &fixed, b, w) {
                orbit += 1;
            }
        }
        order *= orbit;
        fixed.push(b);
    }
    order
}

fn individualize_all(adj: &[Vec<bool>], points: &[usize]) -> Vec<usize> {
    let mut col = vec![0usize; adj.len()];
    for &p in points {
        individualize(&mut col, p);
    }
    refine(adj, &mut col);
    col
}

fn individualize(col: &mut [usize], v: usize) {
    let top = col.iter().copied().max().unwrap_or(0);
    col[v] = top + 1;
}

/// Iterated degree refinement until the number of cells is stable. New
/// colours are ranks of `(old colour, neighbour counts per colour)`, so the
/// result commutes with isomorphisms.
fn refine(adj: &[Vec<bool>], col: &mut [usize]) {
    let k = adj.len();
    loop {
        let ncol = col.iter().copied().max().map_or(0, |x| x + 1);
        let sigs: Vec<(usize, Vec<usize>)> = (0..k)
            .map(|v| {
                let mut cnt = vec![0usize; ncol];
                for u in 0..k {
                    if adj[v][u] {
                        cnt[col[u]] += 1;
                    }
                }
                (col[v], cnt)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        for v in 0..k {
            col[v] = distinct.binary_search(&sigs[v]).unwrap();
        }
        if distinct.len() == ncol {
            return;
        }
    }
}

fn cell_profile(col: &[usize]) -> Vec<usize> {
    let mut sizes = vec![0usize; col.iter().copied().max().map_or(0, |x| x + 1)];
    for &c in col {
        sizes[c] += 1;
    }
    sizes
}

/// Is there an automorphism fixing `fixed` pointwise and sending `b` to `w`?
fn maps_to(adj: &[Vec<bool>], fixed: &[usize], b: usize, w: usize) -> bool {
    let mut left: Vec<usize> = fixed.to_vec();
    let mut right: Vec<usize> = fixed.to_vec();
    left.push(b);
    right.push(w);
    search(adj, &mut left, &mut right)
}

fn search(adj: &[Vec<bool>], left: &mut Vec<usize>, right: &mut Vec<usize>) -> bool {
    let cl = individualize_all(adj, left);
    let cr = individualize_all(adj, right);
    if cell_profile(&cl) != cell_profile(&cr) {
        return false;
    }
    let sizes = cell_profile(&cl);
    match sizes.iter().position(|&s| s > 1) {
        None => {
            // Discrete: the unique colour-preserving bijection.
            let k = adj.len();
            let mut map = vec![0usize; k];
            let mut inv = vec![0usize; k];
            for v in 0..k {
                inv[cr[v]] = v;
            }
            for v in 0..k {
                map[v] = inv[cl[v]];
            }
            (0..k).all(|u| (0..k).all(|v| adj[u][v] == adj[map[u]][map[v]]))
        }
        Some(cell) => {
            let x = (0..adj.len()).find(|&v| cl[v] == cell).unwrap();
            let candidates: Vec<usize> = (0..adj.len()).filter(|&v| cr[v] == cell).collect();
            left.push(x);
            for y in candidates {
                right.push(y);
                let ok = search(adj, left, right);
                right.pop();
                if ok {
                    left.pop();
                    return true;
                }
            }
            left.pop();
            false
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::LexPermutations;
    use approx::assert_relative_eq;

    fn naive_aut(h: &Graph) -> u64 {
        let n = h.vertex_count();
        LexPermutations::new(n)
            .filter(|p| h.edges().iter().all(|&(u, v)| h.has_edge(p[u], p[v])))
            .count() as u64
    }

    #[test]
    fn moments_of_standard_patterns() {
        let pm = pattern_moments(&Graph::perfect_matching(8).unwrap());
        assert_eq!(pm.mu, [1.0, 1.0, 1.0]);
        assert_eq!(pm.m, 4);
        assert_eq!(pm.edge_prod_sum, 4.0);
        let c = pattern_moments(&Graph::cycle(7).unwrap());
        assert_eq!(c.mu, [2.0, 4.0, 8.0]);
        assert_eq!(c.edge_prod_sum, 28.0);
        let e = pattern_moments(&Graph::empty(5));
        assert_eq!(e.mu, [0.0; 3]);
        assert_eq!(e.m, 0);
    }

    #[test]
    fn induced_examples() {
        let single = induced_moments(&Graph::empty(1), 0.3).unwrap();
        assert_eq!(single.omega, [0.0; 3]);
        let k2 = induced_moments(&Graph::complete(2), 0.5).unwrap();
        assert_relative_eq!(k2.omega[0], 1.0);
        assert_relative_eq!(k2.omega[1], 0.5);
        assert_relative_eq!(k2.omega[2], 0.25);
        let (r, lam) = (5usize, 0.37);
        let kr = induced_moments(&Graph::complete(r), lam).unwrap();
        for t in 1..=3 {
            let want = r as f64 * ((1.0 - lam) * (r as f64 - 1.0)).powi(t as i32);
            assert_relative_eq!(kr.omega(t), want, max_relative = 1e-12);
        }
        assert!(induced_moments(&Graph::complete(2), 1.0).is_err());
    }

    #[test]
    fn mixed_examples() {
        let d = DegreeSequence::new(vec![3; 6]).unwrap();
        let hr = Graph::path(3);
        let id: Vec<usize> = (0..6).collect();
        let mm = mixed_moments(&hr, &d, &id).unwrap();
        let im = induced_moments(&hr, 0.6).unwrap();
        for s in 1..4 {
            for t in 0..4 {
                assert_eq!(mm.get(s, t), 0.0);
            }
        }
        for t in 1..4 {
            assert_relative_eq!(mm.get(0, t), im.omega(t), max_relative = 1e-12);
        }
        assert!(mixed_moments(&Graph::path(7), &d, &id).is_err());
        assert!(mixed_moments(&hr, &d, &[0, 0, 1, 2, 3, 4]).is_err());
    }

    #[test]
    fn mixed_irregular_against_loop() {
        let d = DegreeSequence::new(vec![1, 2, 3, 2, 2, 2]).unwrap();
        let hr = Graph::from_edges(3, [(0, 1)]).unwrap();
        let sigma = [2, 0, 5, 1, 3, 4];
        let mm = mixed_moments(&hr, &d, &sigma).unwrap();
        let dbar = 2.0;
        let lam: f64 = 0.4;
        let h: [f64; 3] = [1.0, 1.0, 0.0];
        for s in 0..4 {
            for t in 0..4 {
                let mut want = 0.0;
                for j in 0..3 {
                    let a = d.degrees()[sigma[j]] as f64 - dbar;
                    let b = h[j] - lam * 2.0;
                    want += a.powi(s as i32) * b.powi(t as i32);
                }
                assert_relative_eq!(mm.get(s, t), want, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn automorphisms_of_standard_patterns() {
        assert_eq!(automorphism_count(&Graph::empty(6), 12).unwrap(), factorial(6));
        assert_eq!(automorphism_count(&Graph::perfect_matching(4).unwrap(), 12).unwrap(), BigUint::from(8u32));
        for n in 3..=8 {
            let c = Graph::cycle(n).unwrap();
            assert_eq!(automorphism_count(&c, 12).unwrap(), BigUint::from(2 * n as u32));
        }
        assert_eq!(automorphism_count(&Graph::petersen(), 12).unwrap(), BigUint::from(120u32));
        assert_eq!(automorphism_count(&Graph::complete(7), 12).unwrap(), factorial(7));
        assert!(automorphism_count(&Graph::cycle(13).unwrap(), 12).is_err());
        let k3 = Graph::clique_with_isolated(3, 40).unwrap();
        assert_eq!(automorphism_count(&k3, 12).unwrap(), factorial(3) * factorial(37));
    }

    #[test]
    fn automorphisms_match_naive_on_small_graphs() {
        let samples = [
            Graph::path(6),
            Graph::star(6),
            Graph::from_edges(6, [(0, 1), (1, 2), (2, 0), (3, 4)]).unwrap(),
            Graph::from_edges(7, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 4), (2, 5), (5, 6)]).unwrap(),
            Graph::from_edges(8, [(0, 1), (2, 3), (4, 5), (6, 7), (0, 2), (4, 6)]).unwrap(),
        ];
        for g in &samples {
            assert_eq!(automorphism_count(g, 12).unwrap(), BigUint::from(naive_aut(g)), "{g:?}");
        }
    }

    #[test]
    fn large_structured_patterns() {
        let m = Graph::perfect_matching(40).unwrap();
        let want = factorial(20) * (BigUint::from(1u32) << 20);
        assert_eq!(automorphism_count(&m, 64).unwrap(), want);
        assert_eq!(automorphism_count(&Graph::cycle(30).unwrap(), 64).unwrap(), BigUint::from(60u32));
    }
}
