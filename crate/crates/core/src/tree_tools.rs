//! Labelled trees: counts by degree sequence, Prüfer enumeration and
//! sampling, the tree-edge averaging identity, degree moments of a uniform
//! random tree, and Matrix-Tree spanning-tree counts.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph_model::{DegreeSequence, Graph};
use crate::numeric::{csum, factorial};

/// Largest n for which [`enumerate_trees`] will run (n^{n-2} ≈ 4.8M at 9).
pub const MAX_ENUMERATION_N: usize = 9;

/// Degree sequence of a labelled tree: entries in `1..=n-1`, sum `2n-2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TreeDegreeSequence(Vec<usize>);

impl TreeDegreeSequence {
    pub fn new(x: Vec<usize>) -> Result<Self> {
        let n = x.len();
        if n < 2 {
            return Err(Error::pre("tree degree sequences need n >= 2"));
        }
        if let Some(&bad) = x.iter().find(|&&v| v == 0 || v > n - 1) {
            return Err(Error::range(format!("tree degree {bad} outside 1..={}", n - 1)));
        }
        let sum: usize = x.iter().sum();
        if sum != 2 * n - 2 {
            return Err(Error::pre(format!("tree degrees sum to {sum}, expected {}", 2 * n - 2)));
        }
        Ok(Self(x))
    }

    pub fn degrees(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All tree degree sequences on `n` vertices, in lexicographic order.
    pub fn all(n: usize) -> Vec<Self> {
        let mut out = Vec::new();
        if n < 2 {
            return out;
        }
        // Distribute n-2 extra units over n slots.
        let mut cur = vec![0usize; n];
        fn rec(i: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<TreeDegreeSequence>) {
            let n = cur.len();
            if i == n - 1 {
                cur[i] = left;
                out.push(TreeDegreeSequence(cur.iter().map(|e| e + 1).collect()));
                return;
            }
            for e in 0..=left {
                cur[i] = e;
                rec(i + 1, left - e, cur, out);
            }
        }
        rec(0, n - 2, &mut cur, &mut out);
        out
    }
}

/// Number of labelled trees with degree sequence `x`: the multinomial
/// `(n-2)! / prod (x_j - 1)!`.
pub fn count_trees_with_degrees(x: &TreeDegreeSequence) -> BigUint {
    let n = x.len() as u64;
    let denom = x.degrees().iter().fold(BigUint::one(), |acc, &v| acc * factorial(v as u64 - 1));
    factorial(n - 2) / denom
}

/// Decodes a Prüfer sequence over `0..n` (length `n-2`) into a tree.
pub fn prufer_decode(seq: &[usize], n: usize) -> Result<Graph> {
    if n < 2 || seq.len() != n - 2 || seq.iter().any(|&v| v >= n) {
        return Err(Error::pre("not a Prüfer sequence for this n"));
    }
    let mut degree = vec![1usize; n];
    for &v in seq {
        degree[v] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &v in seq {
        let leaf = (0..n).find(|&u| degree[u] == 1).unwrap();
        edges.push((leaf, v));
        degree[leaf] -= 1;
        degree[v] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&u| degree[u] == 1).collect();
    edges.push((rest[0], rest[1]));
    Graph::from_edges(n, edges)
}

/// Every labelled tree on `0..n` exactly once, by decoding all Prüfer
/// sequences in lexicographic order.
pub fn enumerate_trees(n: usize) -> Result<impl Iterator<Item = Graph>> {
    if n > MAX_ENUMERATION_N {
        return Err(Error::BudgetExceeded(format!("tree enumeration limited to n <= {MAX_ENUMERATION_N}")));
    }
    if n == 0 {
        return Err(Error::pre("trees need at least one vertex"));
    }
    let total = if n < 2 { 1 } else { n.pow((n - 2) as u32) };
    Ok((0..total).map(move |mut code| {
        if n == 1 {
            return Graph::empty(1);
        }
        let mut seq = vec![0usize; n - 2];
        for slot in seq.iter_mut().rev() {
            *slot = code % n;
            code /= n;
        }
        prufer_decode(&seq, n).expect("valid Prüfer code")
    }))
}

/// A uniform random labelled tree.
pub fn random_tree<R: Rng>(n: usize, rng: &mut R) -> Graph {
    if n < 2 {
        return Graph::empty(n);
    }
    let seq: Vec<usize> = (0..n - 2).map(|_| rng.gen_range(0..n)).collect();
    prufer_decode(&seq, n).expect("valid Prüfer code")
}

fn check_phi(x: &TreeDegreeSequence, phi: &[f64]) -> Result<()> {
    if x.len() < 3 {
        return Err(Error::pre("the averaging identity needs n >= 3"));
    }
    if phi.len() != x.len() {
        return Err(Error::SizeMismatch(format!("{} weights for {} vertices", phi.len(), x.len())));
    }
    Ok(())
}

/// Average over trees with degree sequence `x` of `sum_{jk in E(T)} phi_j phi_k`.
pub fn tree_edge_average(x: &TreeDegreeSequence, phi: &[f64]) -> Result<f64> {
    check_phi(x, phi)?;
    let n = x.len() as f64;
    let excess: Vec<f64> = x.degrees().iter().map(|&v| v as f64 - 1.0).collect();
    let s = csum(phi.iter().copied());
    let s1 = csum(excess.iter().zip(phi).map(|(e, p)| e * p));
    let s2 = csum(excess.iter().zip(phi).map(|(e, p)| e * p * p));
    Ok((s * s1 - s2) / (n - 2.0))
}

/// Estimate of the average of `exp(-sum_{jk in E(T)} phi_j phi_k)` over trees
/// with degree sequence `x`: the true value lies in `center * e^{±k_bound}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeExpBound {
    pub center: f64,
    /// `(1/8) n (max phi - min phi)^4`.
    pub k_bound: f64,
    /// `(1/8) n (max |phi| - min |phi|)^4`. Kept for comparison only: it is
    /// not a valid bound when the weights change sign.
    pub k_bound_abs: f64,
}

pub fn tree_exp_average_bound(x: &TreeDegreeSequence, phi: &[f64]) -> Result<TreeExpBound> {
    let avg = tree_edge_average(x, phi)?;
    let n = x.len() as f64;
    let spread = |v: &mut dyn Iterator<Item = f64>| {
        let (lo, hi) = v.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p), hi.max(p)));
        hi - lo
    };
    let w = spread(&mut phi.iter().copied());
    let wa = spread(&mut phi.iter().map(|p| p.abs()));
    Ok(TreeExpBound { center: (-avg).exp(), k_bound: n * w.powi(4) / 8.0, k_bound_abs: n * wa.powi(4) / 8.0 })
}

/// `phi_j = (d_j - dbar) / (n sqrt(lambda (1 - lambda)))`.
pub fn phi_weights(d: &DegreeSequence) -> Result<Vec<f64>> {
    let s = d.stats()?;
    s.require_proper_density()?;
    let scale = s.nf() * (s.lambda * (1.0 - s.lambda)).sqrt();
    Ok(d.degrees().iter().map(|&x| (x as f64 - s.mean_degree) / scale).collect())
}

/// Moments of the truncated degree `Z_j = min(X_j, floor(n^trunc_exponent))`
/// of a vertex in a uniform random labelled tree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TreeDegreeMoments {
    pub n: usize,
    pub cap: usize,
    pub exact: bool,
    pub samples: usize,
    pub mean: f64,
    pub mean_sq: f64,
    pub var: f64,
    pub var_sq: f64,
    /// `Cov(Z_1^s, Z_2^t)` for `(s, t)` in `(1,1), (1,2), (2,1), (2,2)`.
    pub cov: [f64; 4],
}

impl TreeDegreeMoments {
    /// Deviations from the limits `(2, 5, 1, 27)` followed by the four
    /// covariances (limit 0).
    pub fn deviations(&self) -> [f64; 8] {
        [
            self.mean - 2.0,
            self.mean_sq - 5.0,
            self.var - 1.0,
            self.var_sq - 27.0,
            self.cov[0],
            self.cov[1],
            self.cov[2],
            self.cov[3],
        ]
    }
}

#[derive(Default)]
struct PairSums {
    count: u128,
    z1: [u128; 5],
    mixed: [[u128; 3]; 3],
}

impl PairSums {
    fn add(&mut self, a: u128, b: u128, weight: u128) {
        self.count += weight;
        let mut p = 1u128;
        for k in 0..5 {
            self.z1[k] += weight * p;
            p *= a;
        }
        for s in 0..3u32 {
            for t in 0..3u32 {
                self.mixed[s as usize][t as usize] += weight * a.pow(s) * b.pow(t);
            }
        }
    }

    fn finish(&self, n: usize, cap: usize, exact: bool, samples: usize) -> TreeDegreeMoments {
        let c = self.count as f64;
        let e = |k: usize| self.z1[k] as f64 / c;
        let em = |s: usize, t: usize| self.mixed[s][t] as f64 / c;
        let (m1, m2, m4) = (e(1), e(2), e(4));
        let cov = |s: usize, t: usize| em(s, t) - em(s, 0) * em(0, t);
        TreeDegreeMoments {
            n,
            cap,
            exact,
            samples,
            mean: m1,
            mean_sq: m2,
            var: m2 - m1 * m1,
            var_sq: m4 - m2 * m2,
            cov: [cov(1, 1), cov(1, 2), cov(2, 1), cov(2, 2)],
        }
    }
}

fn cap_for(n: usize, trunc_exponent: f64) -> usize {
    ((n as f64).powf(trunc_exponent).floor() as usize).max(1)
}

/// Exact moments for `n <= 9`, by running over all Prüfer sequences.
/// Vertices are exchangeable, so vertices 0 and 1 stand for `j != k`.
pub fn tree_degree_moments(n: usize, trunc_exponent: f64) -> Result<TreeDegreeMoments> {
    if n < 3 {
        return Err(Error::pre("tree degree moments need n >= 3"));
    }
    if n > MAX_ENUMERATION_N {
        return Err(Error::BudgetExceeded(format!(
            "exact tree moments limited to n <= {MAX_ENUMERATION_N}; use the sampled version"
        )));
    }
    let cap = cap_for(n, trunc_exponent);
    let total = n.pow((n - 2) as u32);
    let mut sums = PairSums::default();
    for mut code in 0..total {
        let (mut x0, mut x1) = (1usize, 1usize);
        for _ in 0..n - 2 {
            match code % n {
                0 => x0 += 1,
                1 => x1 += 1,
                _ => {}
            }
            code /= n;
        }
        sums.add(x0.min(cap) as u128, x1.min(cap) as u128, 1);
    }
    Ok(sums.finish(n, cap, true, total))
}

/// Monte Carlo version for larger n, from `samples` seeded random trees.
pub fn tree_degree_moments_sampled(n: usize, trunc_exponent: f64, samples: usize, seed: u64) -> Result<TreeDegreeMoments> {
    if n < 3 || samples == 0 {
        return Err(Error::pre("need n >= 3 and at least one sample"));
    }
    let cap = cap_for(n, trunc_exponent);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sums = PairSums::default();
    for _ in 0..samples {
        let (mut x0, mut x1) = (1usize, 1usize);
        for _ in 0..n - 2 {
            match rng.gen_range(0..n) {
                0 => x0 += 1,
                1 => x1 += 1,
                _ => {}
            }
        }
        sums.add(x0.min(cap) as u128, x1.min(cap) as u128, 1);
    }
    Ok(sums.finish(n, cap, false, samples))
}

/// Number of spanning trees: a Laplacian cofactor, computed by fraction-free
/// (Bareiss) elimination over big integers.
pub fn spanning_tree_count(g: &Graph) -> BigUint {
    let n = g.vertex_count();
    if n <= 1 {
        return BigUint::one();
    }
    let k = n - 1;
    let mut a: Vec<Vec<BigInt>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| {
                    if i == j {
                        BigInt::from(g.degree(i))
                    } else if g.has_edge(i, j) {
                        BigInt::from(-1)
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for p in 0..k {
        if a[p][p].is_zero() {
            match (p + 1..k).find(|&r| !a[r][p].is_zero()) {
                Some(r) => {
                    a.swap(p, r);
                    sign = -sign;
                }
                None => return BigUint::zero(),
            }
        }
        for i in p + 1..k {
            for j in p + 1..k {
                let v = &a[i][j] * &a[p][p] - &a[i][p] * &a[p][j];
                let (q, rem) = v.div_rem(&prev);
                debug_assert!(rem.is_zero());
                a[i][j] = q;
            }
            a[i][p] = BigInt::zero();
        }
        prev = a[p][p].clone();
    }
    let det = if sign < 0 { -prev } else { prev };
    debug_assert!(!det.is_negative());
    det.to_biguint().unwrap_or_default()
}

/// Convenience for callers that want a float.
pub fn spanning_tree_count_f64(g: &Graph) -> f64 {
    spanning_tree_count(g).to_f64().unwrap_or(f64::INFINITY)
}

/// Non-isomorphic trees on `n` vertices (one labelled representative each),
/// grown by leaf addition and deduplicated by a canonical string.
pub fn unlabelled_trees(n: usize) -> Vec<Graph> {
    if n == 0 {
        return Vec::new();
    }
    let mut level: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
    for size in 2..=n {
        let mut seen = std::collections::BTreeSet::new();
        let mut next = Vec::new();
        for edges in &level {
            for attach in 0..size - 1 {
                let mut e = edges.clone();
                e.push((attach, size - 1));
                let code = tree_canonical_form(size, &e);
                if seen.insert(code) {
                    next.push(e);
                }
            }
        }
        level = next;
    }
    level.into_iter().map(|e| Graph::from_edges(n, e).unwrap()).collect()
}

/// Canonical string of an unrooted tree: the minimum AHU encoding over its
/// centres.
pub fn tree_canonical_form(n: usize, edges: &[(usize, usize)]) -> String {
    if n == 1 {
        return "()".into();
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    // Peel leaves to find the centre(s).
    let mut deg: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut removed = layer.len();
    while removed < n {
        let mut next = Vec::new();
        for &leaf in &layer {
            for &u in &adj[leaf] {
                if deg[u] > 1 {
                    deg[u] -= 1;
                    if deg[u] == 1 {
                        next.push(u);
                    }
                }
            }
        }
        removed += next.len();
        layer = next;
    }
    fn encode(v: usize, parent: usize, adj: &[Vec<usize>]) -> String {
        let mut kids: Vec<String> = adj[v].iter().filter(|&&u| u != parent).map(|&u| encode(u, v, adj)).collect();
        kids.sort();
        format!("({})", kids.concat())
    }
    layer.iter().map(|&c| encode(c, usize::MAX, &adj)).min().unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tds(x: &[usize]) -> TreeDegreeSequence {
        TreeDegreeSequence::new(x.to_vec()).unwrap()
    }

    #[test]
    fn counts_by_degree_sequence() {
        assert_eq!(count_trees_with_degrees(&tds(&[2, 2, 1, 1])), BigUint::from(2u32));
        assert_eq!(count_trees_with_degrees(&tds(&[5, 1, 1, 1, 1, 1])), BigUint::one());
        for n in 2..=7usize {
            let total: BigUint = TreeDegreeSequence::all(n).iter().map(count_trees_with_degrees).sum();
            assert_eq!(total, BigUint::from(n).pow(n as u32 - 2));
        }
        assert!(TreeDegreeSequence::new(vec![2, 2, 2, 1]).is_err());
        assert!(TreeDegreeSequence::new(vec![0, 3, 2, 1]).is_err());
    }

    #[test]
    fn enumeration_sizes() {
        assert_eq!(enumerate_trees(3).unwrap().count(), 3);
        assert_eq!(enumerate_trees(4).unwrap().count(), 16);
        assert!(enumerate_trees(10).is_err());
        for t in enumerate_trees(5).unwrap() {
            assert_eq!(t.edge_count(), 4);
            assert!(t.is_connected());
            assert_eq!(spanning_tree_count(&t), BigUint::one());
        }
    }

    #[test]
    fn averaging_identity_unique_trees() {
        let phi = [0.3, -0.2, 0.5, 0.1, -0.4];
        let star = tds(&[4, 1, 1, 1, 1]);
        let want = phi[0] * (phi.iter().sum::<f64>() - phi[0]);
        assert_relative_eq!(tree_edge_average(&star, &phi).unwrap(), want, max_relative = 1e-12);
        let p3 = [0.7, -0.3, 0.2];
        assert_relative_eq!(
            tree_edge_average(&tds(&[1, 2, 1]), &p3).unwrap(),
            p3[1] * (p3[0] + p3[2]),
            max_relative = 1e-12
        );
        let b = tree_exp_average_bound(&tds(&[1, 2, 1]), &p3).unwrap();
        assert_relative_eq!(b.center, (-p3[1] * (p3[0] + p3[2])).exp(), max_relative = 1e-12);
        assert!(tree_edge_average(&tds(&[1, 1]), &[0.0, 0.0]).is_err());
    }

    #[test]
    fn equal_weights_zero_bound() {
        let b = tree_exp_average_bound(&tds(&[2, 2, 1, 1]), &[0.4; 4]).unwrap();
        assert_eq!(b.k_bound, 0.0);
        // Mixed signs with equal magnitudes: the |phi| form collapses to zero
        // even though the trees with this degree sequence disagree.
        let phi = [0.4, -0.4, 0.4, -0.4];
        let b = tree_exp_average_bound(&tds(&[2, 2, 1, 1]), &phi).unwrap();
        assert_eq!(b.k_bound_abs, 0.0);
        assert!(b.k_bound > 0.0);
    }

    #[test]
    fn phi_examples() {
        assert!(phi_weights(&DegreeSequence::regular(6, 3).unwrap()).unwrap().iter().all(|&p| p == 0.0));
        let d = DegreeSequence::new(vec![1, 2, 3, 2]).unwrap();
        let phi = phi_weights(&d).unwrap();
        let lam: f64 = 2.0 / 3.0;
        let scale = 4.0 * (lam * (1.0 - lam)).sqrt();
        assert_relative_eq!(phi[0], -1.0 / scale, max_relative = 1e-12);
        assert_relative_eq!(phi[2], 1.0 / scale, max_relative = 1e-12);
        assert_eq!(phi[1], 0.0);
    }

    #[test]
    fn degree_moment_small_cases() {
        let m = tree_degree_moments(3, 1.0).unwrap();
        assert_relative_eq!(m.mean, 4.0 / 3.0, max_relative = 1e-12);
        for n in 4..=7 {
            let m = tree_degree_moments(n, 1.0).unwrap();
            assert_relative_eq!(m.mean, 2.0 - 2.0 / n as f64, max_relative = 1e-12);
            let nf = n as f64;
            assert_relative_eq!(m.mean_sq, 5.0 - 11.0 / nf + 6.0 / (nf * nf), max_relative = 1e-12);
        }
        let s = tree_degree_moments_sampled(8, 1.0, 20000, 7).unwrap();
        let e = tree_degree_moments(8, 1.0).unwrap();
        assert!((s.mean - e.mean).abs() < 0.03);
    }

    #[test]
    fn matrix_tree_examples() {
        assert_eq!(spanning_tree_count(&Graph::complete(4)), BigUint::from(16u32));
        assert_eq!(spanning_tree_count(&Graph::cycle(5).unwrap()), BigUint::from(5u32));
        assert_eq!(spanning_tree_count(&Graph::petersen()), BigUint::from(2000u32));
        let disconnected = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        assert_eq!(spanning_tree_count(&disconnected), BigUint::zero());
        for n in 1..=9usize {
            let want = BigUint::from(n).pow(n.saturating_sub(2) as u32);
            assert_eq!(spanning_tree_count(&Graph::complete(n)), want);
        }
    }

    #[test]
    fn unlabelled_tree_counts() {
        let counts: Vec<usize> = (1..=10).map(|n| unlabelled_trees(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 1, 2, 3, 6, 11, 23, 47, 106]);
    }
}
