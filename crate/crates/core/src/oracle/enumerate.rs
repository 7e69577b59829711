//! Exhaustive listing of the realizations of a degree sequence.

use crate::error::{Error, Result};
use crate::graph_model::{is_graphical_slice, DegreeSequence, Graph};
use crate::numeric::for_each_combination;

use super::count::count_realizations;

/// Calls `f` on every labelled simple graph with degree sequence `d`, each
/// exactly once and in lexicographic order of edge sets. Returns the number
/// of graphs visited; a non-graphical `d` visits nothing.
///
/// `|G_d|` is counted first and the call fails with `BudgetExceeded` rather
/// than starting a listing larger than `budget`.
pub fn visit_realizations<F: FnMut(&Graph)>(d: &DegreeSequence, budget: u128, mut f: F) -> Result<u128> {
    let total = count_realizations(d.degrees())?;
    if total > budget {
        return Err(Error::BudgetExceeded(format!("|G_d| = {total} exceeds the budget {budget}")));
    }
    if total == 0 {
        return Ok(0);
    }
    let n = d.len();
    let mut res = d.degrees().to_vec();
    let mut edges = Vec::with_capacity(d.sum() / 2);
    let mut visited = 0u128;
    rec(n, 0, &mut res, &mut edges, &mut |edges| {
        let g = Graph::from_edges(n, edges.iter().copied()).expect("backtracking produces simple graphs");
        visited += 1;
        f(&g);
    });
    debug_assert_eq!(visited, total);
    Ok(visited)
}

fn rec(n: usize, v: usize, res: &mut [usize], edges: &mut Vec<(usize, usize)>, emit: &mut dyn FnMut(&[(usize, usize)])) {
    if v == n {
        emit(edges);
        return;
    }
    let need = res[v];
    let cands: Vec<usize> = (v + 1..n).filter(|&w| res[w] > 0).collect();
    if cands.len() < need {
        return;
    }
    res[v] = 0;
    let mark = edges.len();
    for_each_combination(cands.len(), need, |pick| {
        for &i in pick {
            res[cands[i]] -= 1;
            edges.push((v, cands[i]));
        }
        if is_graphical_slice(&res[v + 1..]) {
            rec(n, v + 1, res, edges, emit);
        }
        for &i in pick {
            res[cands[i]] += 1;
        }
        edges.truncate(mark);
    });
    res[v] = need;
}

/// All realizations of `d`, collected.
pub fn enumerate_realizations(d: &DegreeSequence, budget: u128) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    visit_realizations(d, budget, |g| out.push(g.clone()))?;
    Ok(out)
}
