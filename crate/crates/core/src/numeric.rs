//! Small numeric helpers shared across modules: compensated summation,
//! log-factorials, big-integer logarithms and lexicographic permutations.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Compensated sum of an iterator of floats.
pub fn csum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

/// ln(n!), exact summation for small n and log-gamma beyond.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    if n <= 64 {
        return csum((2..=n).map(|k| (k as f64).ln()));
    }
    statrs::function::gamma::ln_gamma(n as f64 + 1.0)
}

/// ln C(n, k); `-inf` when k > n.
pub fn ln_binomial(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

pub fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Natural log of a (possibly huge) positive big integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    if x.is_zero() {
        return f64::NEG_INFINITY;
    }
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::INFINITY);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Iterator over all permutations of `0..n` in lexicographic order.
///
/// Lexicographic order means that the permutations sharing a prefix of
/// length k form a contiguous block of (n-k)! entries, which the martingale
/// code relies on.
#[derive(Debug, Clone)]
pub struct LexPermutations {
    current: Vec<usize>,
    done: bool,
}

impl LexPermutations {
    pub fn new(n: usize) -> Self {
        Self { current: (0..n).collect(), done: false }
    }
}

impl Iterator for LexPermutations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.current.clone();
        let p = &mut self.current;
        let n = p.len();
        match (0..n.saturating_sub(1)).rev().find(|&i| p[i] < p[i + 1]) {
            Some(i) => {
                let j = (i + 1..n).rev().find(|&j| p[j] > p[i]).unwrap();
                p.swap(i, j);
                p[i + 1..].reverse();
            }
            None => self.done = true,
        }
        Some(out)
    }
}

/// Lexicographic rank of a permutation of `0..n`.
pub fn perm_rank(perm: &[usize]) -> usize {
    let n = perm.len();
    let mut rank = 0usize;
    let mut fact = 1usize;
    // Lehmer code read right to left.
    for i in (0..n).rev() {
        let smaller = perm[i + 1..].iter().filter(|&&x| x < perm[i]).count();
        rank += smaller * fact;
        fact *= n - i;
    }
    rank
}

/// Calls `f` with every `k`-subset of `0..n` as increasing indices, in
/// lexicographic order.
pub fn for_each_combination<F: FnMut(&[usize])>(n: usize, k: usize, mut f: F) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        f(&idx);
        let mut i = k;
        while i > 0 && idx[i - 1] == n - k + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return;
        }
        idx[i - 1] += 1;
        for j in i..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

pub fn small_factorial(n: usize) -> usize {
    (1..=n).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn combinations_are_lexicographic() {
        let mut seen = Vec::new();
        for_each_combination(4, 2, |c| seen.push(c.to_vec()));
        assert_eq!(seen, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        let mut empty = 0;
        for_each_combination(3, 0, |_| empty += 1);
        assert_eq!(empty, 1);
    }

    #[test]
    fn lex_order_and_rank_agree() {
        for n in 0..=5 {
            let perms: Vec<_> = LexPermutations::new(n).collect();
            assert_eq!(perms.len(), small_factorial(n));
            for (i, p) in perms.iter().enumerate() {
                assert_eq!(perm_rank(p), i);
            }
        }
    }

    #[test]
    fn ln_factorial_matches_big_integer() {
        for n in [0u64, 1, 5, 20, 64, 65, 100, 300] {
            let exact = ln_biguint(&factorial(n));
            let approx = ln_factorial(n);
            assert!((exact - approx).abs() <= 1e-9 * exact.max(1.0), "n={n}");
        }
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let xs = [1e16, 1.0, -1e16, 1.0];
        assert_eq!(csum(xs), 2.0);
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(10, 3), BigUint::from(120u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert!((ln_binomial(50, 25) - ln_biguint(&binomial(50, 25))).abs() < 1e-9);
    }
}
