//! Degree statistics, graphicality and pattern statistics against brute force.

use std::collections::HashSet;

use num_bigint::BigUint;
use proptest::prelude::*;

use degseq_core::graph_model::{check_assumptions, is_graphical};
use degseq_core::numeric::LexPermutations;
use degseq_core::pattern_stats::{automorphism_count, induced_moments, pattern_moments};
use degseq_core::{DegreeSequence, Graph};

fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    Graph::from_edges(n, pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &p)| p)).unwrap()
}

fn sorted_sequences(n: usize, max: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, cap: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in (0..=cap).rev() {
            cur.push(x);
            rec(n, x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, max, &mut Vec::new(), &mut out);
    out
}

#[test]
fn graphicality_matches_edge_set_search() {
    for n in 1..=7usize {
        let pairs = n * (n - 1) / 2;
        let mut realizable = HashSet::new();
        for mask in 0..1u64 << pairs {
            let mut d = graph_from_mask(n, mask).degrees();
            d.sort_unstable_by(|a, b| b.cmp(a));
            realizable.insert(d);
        }
        for d in sorted_sequences(n, n - 1) {
            let seq = DegreeSequence::new(d.clone()).unwrap();
            assert_eq!(is_graphical(&seq), realizable.contains(&d), "{d:?}");
        }
    }
}

#[test]
fn regular_sequences_have_zero_spread_diagnostics() {
    for (n, k) in [(6, 3), (9, 4), (12, 5)] {
        let d = DegreeSequence::regular(n, k).unwrap();
        let s = d.stats().unwrap();
        assert_eq!((s.max_dev, s.spread), (0.0, 0.0));
        let r = check_assumptions(&d, 0.25, 0.05).unwrap().with_subgraph_pattern(&s, &[2; 6]).with_induced_pattern(&s, &[1, 2, 1]);
        assert_eq!(r.subgraph_assumption, Some(0.0));
        assert_eq!(r.induced_assumption, Some(0.0));
    }
}

#[test]
fn automorphisms_match_naive_search() {
    let mut state = 0x2545_f491_4f6c_dd1du64;
    for _ in 0..60 {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        let n = 2 + (state % 7) as usize;
        let g = graph_from_mask(n, state >> 8);
        let naive = LexPermutations::new(n).filter(|p| g.edges().iter().all(|&(a, b)| g.has_edge(p[a], p[b]))).count();
        assert_eq!(automorphism_count(&g, 12).unwrap(), BigUint::from(naive));
    }
}

proptest! {
    #[test]
    fn mean_degree_reconstructs_the_sum(raw in prop::collection::vec(0usize..40, 2..40)) {
        let n = raw.len();
        let mut d: Vec<usize> = raw.iter().map(|x| x % n).collect();
        if d.iter().sum::<usize>() % 2 == 1 {
            d[0] = if d[0] > 0 { d[0] - 1 } else { 1 };
        }
        let seq = DegreeSequence::new(d.clone()).unwrap();
        let s = seq.stats().unwrap();
        let sum = d.iter().sum::<usize>() as f64;
        prop_assert!((s.mean_degree * n as f64 - sum).abs() <= 4.0 * f64::EPSILON * sum.max(1.0));
    }

    #[test]
    fn edge_products_bounded_by_third_moment(n in 2usize..9, mask in any::<u64>()) {
        let g = graph_from_mask(n, mask);
        let pm = pattern_moments(&g);
        prop_assert!(2.0 * pm.edge_prod_sum <= n as f64 * pm.mu(3) + 1e-9);
    }

    #[test]
    fn first_induced_moment(r in 1usize..9, mask in any::<u64>(), lam in 0.05f64..0.95) {
        let g = graph_from_mask(r, mask);
        let om = induced_moments(&g, lam).unwrap();
        let want = 2.0 * g.edge_count() as f64 - lam * (r * (r - 1)) as f64;
        prop_assert!((om.omega(1) - want).abs() <= 1e-12 * want.abs().max(1.0));
    }
}
