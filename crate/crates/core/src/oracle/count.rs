//! Exact realization counting. Vertices are processed in order; at vertex `v`
//! every admissible set of later neighbours is tried and the remaining
//! residual degrees are memoized. Once no forbidden pair remains among the
//! unprocessed vertices the residual vector is sorted, so symmetric tails
//! share one entry.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graph_model::is_graphical_slice;
use crate::numeric::for_each_combination;

/// Largest `n` handled by the counter (residuals are packed four bits each).
pub const MAX_COUNT_N: usize = 16;

pub(crate) struct Counter {
    n: usize,
    /// `allowed[v]` has bit `w` set when the pair `vw` may still be added.
    allowed: Vec<u32>,
    /// From this vertex on every remaining pair is allowed.
    free_from: usize,
    memo: HashMap<(u8, u64), u128>,
    scratch: Vec<usize>,
}

impl Counter {
    pub(crate) fn new(n: usize, forbidden: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_COUNT_N {
            return Err(Error::pre(format!("exact counting supports n <= {MAX_COUNT_N}, got {n}")));
        }
        let full = (1u32 << n) - 1;
        let mut allowed: Vec<u32> = (0..n).map(|v| full & !(1u32 << v)).collect();
        let mut free_from = 0;
        for &(a, b) in forbidden {
            if a >= n || b >= n || a == b {
                return Err(Error::InvalidGraph(format!("forbidden pair ({a}, {b}) out of range")));
            }
            allowed[a] &= !(1u32 << b);
            allowed[b] &= !(1u32 << a);
            free_from = free_from.max(a.min(b) + 1);
        }
        Ok(Self { n, allowed, free_from, memo: HashMap::new(), scratch: Vec::with_capacity(n) })
    }

    /// Number of simple graphs with the given degrees that avoid every
    /// forbidden pair.
    pub(crate) fn count(&mut self, degrees: &[usize]) -> u128 {
        assert_eq!(degrees.len(), self.n);
        if degrees.iter().any(|&x| x >= self.n) || !is_graphical_slice(degrees) {
            return 0;
        }
        let mut res: Vec<u8> = degrees.iter().map(|&x| x as u8).collect();
        self.rec(0, &mut res)
    }

    fn key(&self, v: usize, res: &[u8]) -> (u8, u64) {
        let tail = &res[v..];
        let mut packed = 0u64;
        if v >= self.free_from {
            let mut sorted = tail.to_vec();
            sorted.sort_unstable();
            for &x in &sorted {
                packed = (packed << 4) | x as u64;
            }
        } else {
            for &x in tail {
                packed = (packed << 4) | x as u64;
            }
        }
        (v as u8, packed)
    }

    fn rec(&mut self, v: usize, res: &mut [u8]) -> u128 {
        if v == self.n {
            return 1;
        }
        let need = res[v] as usize;
        let cands: Vec<usize> = (v + 1..self.n).filter(|&w| res[w] > 0 && self.allowed[v] >> w & 1 == 1).collect();
        if cands.len() < need {
            return 0;
        }
        let key = self.key(v, res);
        if let Some(&c) = self.memo.get(&key) {
            return c;
        }
        let mut total = 0u128;
        res[v] = 0;
        for_each_combination(cands.len(), need, |pick| {
            for &i in pick {
                res[cands[i]] -= 1;
            }
            self.scratch.clear();
            self.scratch.extend(res[v + 1..].iter().map(|&x| x as usize));
            if is_graphical_slice(&self.scratch) {
                total += self.rec(v + 1, res);
            }
            for &i in pick {
                res[cands[i]] += 1;
            }
        });
        res[v] = need as u8;
        self.memo.insert(key, total);
        total
    }
}

/// `|G_d|` computed without enumeration.
pub fn count_realizations(degrees: &[usize]) -> Result<u128> {
    Ok(Counter::new(degrees.len(), &[])?.count(degrees))
}

/// Number of realizations of `degrees` that contain none of `forbidden`.
pub fn count_realizations_avoiding(degrees: &[usize], forbidden: &[(usize, usize)]) -> Result<u128> {
    Ok(Counter::new(degrees.len(), forbidden)?.count(degrees))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_counts() {
        assert_eq!(count_realizations(&[1, 1]).unwrap(), 1);
        assert_eq!(count_realizations(&[2, 2, 2]).unwrap(), 1);
        assert_eq!(count_realizations(&[2, 2, 2, 2]).unwrap(), 3);
        assert_eq!(count_realizations(&[3; 6]).unwrap(), 70);
        assert_eq!(count_realizations(&[3; 8]).unwrap(), 19355);
        assert_eq!(count_realizations(&[4; 8]).unwrap(), 19355);
        assert_eq!(count_realizations(&[1, 1, 2, 2]).unwrap(), 2);
        assert_eq!(count_realizations(&[3, 3, 1, 1]).unwrap(), 0);
    }

    #[test]
    fn ten_vertex_five_regular() {
        assert_eq!(count_realizations(&[5; 10]).unwrap(), 66_462_606);
    }
}
