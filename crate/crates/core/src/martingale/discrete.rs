//! Fixed-size subsets and count vectors (hypergeometric, multinomial).

use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{binomial, for_each_combination, ln_binomial, ln_factorial};

use super::perm::{weighted_exp_mean, weighted_moments, Moments};
use super::{certificate, BoundCertificate, Order};

/// Largest support enumerated exhaustively.
pub const MAX_SUPPORT: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Support {
    /// Uniform `m`-subsets of `0..n`; points are passed as sorted members.
    Subset { n: usize, m: usize },
    /// Counts drawn without replacement from classes of the given sizes.
    Hypergeometric { sizes: Vec<usize>, m: usize },
    /// Counts of `m` independent draws with class probabilities `probs`.
    Multinomial { probs: Vec<f64>, m: usize },
}

impl Support {
    pub fn m(&self) -> usize {
        match self {
            Support::Subset { m, .. } | Support::Hypergeometric { m, .. } | Support::Multinomial { m, .. } => *m,
        }
    }

    /// Checks the preconditions under which the estimates hold.
    pub fn validate(&self) -> Result<()> {
        match self {
            Support::Subset { n, m } => {
                if 2 * m > *n {
                    return Err(Error::pre(format!("subset size m = {m} exceeds n/2 = {}", *n as f64 / 2.0)));
                }
                if *n > 64 {
                    return Err(Error::pre("subsets are limited to n <= 64"));
                }
            }
            Support::Hypergeometric { sizes, m } => {
                let n: usize = sizes.iter().sum();
                if sizes.is_empty() || n < 2 * m {
                    return Err(Error::pre(format!("hypergeometric needs n = {n} >= 2m = {}", 2 * m)));
                }
            }
            Support::Multinomial { probs, .. } => {
                if probs.is_empty() || probs.iter().any(|&p| !(p > 0.0)) {
                    return Err(Error::pre("multinomial probabilities must be positive"));
                }
                let s: f64 = probs.iter().sum();
                if (s - 1.0).abs() > 1e-9 {
                    return Err(Error::pre(format!("multinomial probabilities sum to {s}, not 1")));
                }
            }
        }
        let size = self.size();
        if size > MAX_SUPPORT as f64 {
            return Err(Error::BudgetExceeded(format!("support of size {size} exceeds {MAX_SUPPORT}")));
        }
        Ok(())
    }

    fn size(&self) -> f64 {
        match self {
            Support::Subset { n, m } => ln_binomial(*n as u64, *m as u64).exp(),
            Support::Hypergeometric { sizes, m } => compositions_count(sizes.len(), *m),
            Support::Multinomial { probs, m } => compositions_count(probs.len(), *m),
        }
    }

    /// All points with their probabilities (zero-probability count vectors
    /// of the hypergeometric case are included; they carry weight 0).
    pub fn points(&self) -> Result<Vec<(Vec<usize>, f64)>> {
        self.validate()?;
        Ok(match self {
            Support::Subset { n, m } => {
                let p = 1.0 / binomial(*n as u64, *m as u64).to_f64().unwrap_or(f64::INFINITY);
                subsets(*n, *m).into_iter().map(|mask| (members(mask), p)).collect()
            }
            Support::Hypergeometric { sizes, m } => {
                let n: usize = sizes.iter().sum();
                let ln_total = ln_binomial(n as u64, *m as u64);
                compositions(sizes.len(), *m)
                    .into_iter()
                    .map(|x| {
                        let p = if x.iter().zip(sizes).any(|(&xi, &ni)| xi > ni) {
                            0.0
                        } else {
                            let ln: f64 = x.iter().zip(sizes).map(|(&xi, &ni)| ln_binomial(ni as u64, xi as u64)).sum();
                            (ln - ln_total).exp()
                        };
                        (x, p)
                    })
                    .collect()
            }
            Support::Multinomial { probs, m } => compositions(probs.len(), *m)
                .into_iter()
                .map(|x| {
                    let ln = ln_factorial(*m as u64)
                        + x.iter().zip(probs).map(|(&xi, &p)| xi as f64 * p.ln() - ln_factorial(xi as u64)).sum::<f64>();
                    (x, ln.exp())
                })
                .collect(),
        })
    }
}

fn compositions_count(l: usize, m: usize) -> f64 {
    if l == 0 {
        return 0.0;
    }
    ln_binomial((m + l - 1) as u64, (l - 1) as u64).exp()
}

/// All `x` in `N^l` with `Σ x = m`, in lexicographic order.
fn compositions(l: usize, m: usize) -> Vec<Vec<usize>> {
    fn rec(l: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == l {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for x in 0..=left {
            cur.push(x);
            rec(l, left - x, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if l > 0 {
        rec(l, m, &mut Vec::with_capacity(l), &mut out);
    }
    out
}

fn subsets(n: usize, m: usize) -> Vec<u64> {
    let mut out = Vec::new();
    for_each_combination(n, m, |c| out.push(c.iter().fold(0u64, |acc, &i| acc | 1 << i)));
    out
}

fn members(mask: u64) -> Vec<usize> {
    (0..64).filter(|&i| mask >> i & 1 == 1).collect()
}

/// `(α_max, Δ_max)` over all `m`-subsets of `0..n`: the largest effect of
/// exchanging one member `j` for one non-member `a`, and of two such
/// exchanges with four distinct indices.
pub fn subset_alpha_delta(n: usize, m: usize, f: &dyn Fn(&[usize]) -> Complex64) -> Result<(f64, f64)> {
    if n > 64 || ln_binomial(n as u64, m.min(n) as u64).exp() > MAX_SUPPORT as f64 {
        return Err(Error::BudgetExceeded(format!("C({n}, {m}) subsets exceed the support budget")));
    }
    let all = subsets(n, m);
    let val: HashMap<u64, Complex64> = all.iter().map(|&s| (s, f(&members(s)))).collect();
    let mut alpha = 0.0f64;
    let mut delta = 0.0f64;
    for &s in &all {
        let ins = members(s);
        let outs: Vec<usize> = (0..n).filter(|&i| s >> i & 1 == 0).collect();
        let f0 = val[&s];
        for &j in &ins {
            for &a in &outs {
                let sja = s ^ (1 << j) ^ (1 << a);
                let fja = val[&sja];
                alpha = alpha.max((f0 - fja).norm());
                for &k in &ins {
                    for &b in &outs {
                        if k == j || b == a {
                            continue;
                        }
                        let skb = s ^ (1 << k) ^ (1 << b);
                        let d = f0 - fja - val[&skb] + val[&(skb ^ (1 << j) ^ (1 << a))];
                        delta = delta.max(d.norm());
                    }
                }
            }
        }
    }
    Ok((alpha, delta))
}

/// `(α_max, Δ_max)` for the support. Count-vector moves add one to entry
/// `j` and take one from a positive entry `a`; the maxima run over all of
/// `N_{l,m}`.
pub fn discrete_alpha_delta(support: &Support, f: &dyn Fn(&[usize]) -> Complex64) -> Result<(f64, f64)> {
    support.validate()?;
    let (l, m) = match support {
        Support::Subset { n, m } => return subset_alpha_delta(*n, *m, f),
        Support::Hypergeometric { sizes, m } => (sizes.len(), *m),
        Support::Multinomial { probs, m } => (probs.len(), *m),
    };
    let pts = compositions(l, m);
    let val: HashMap<Vec<usize>, Complex64> = pts.iter().map(|x| (x.clone(), f(x))).collect();
    let moved = |x: &[usize], j: usize, a: usize| {
        let mut y = x.to_vec();
        y[j] += 1;
        y[a] -= 1;
        y
    };
    let mut alpha = 0.0f64;
    let mut delta = 0.0f64;
    for x in &pts {
        let f0 = val[x];
        for a in (0..l).filter(|&a| x[a] > 0) {
            for j in (0..l).filter(|&j| j != a) {
                let xja = moved(x, j, a);
                let fja = val[&xja];
                alpha = alpha.max((f0 - fja).norm());
                for b in (0..l).filter(|&b| x[b] > 0 && b != a && b != j) {
                    for k in (0..l).filter(|&k| k != a && k != b && k != j) {
                        let xkb = moved(x, k, b);
                        let xboth = moved(&xkb, j, a);
                        let d = f0 - fja - val[&xkb] + val[&xboth];
                        delta = delta.max(d.norm());
                    }
                }
            }
        }
    }
    Ok((alpha, delta))
}

/// Certificate from `m`, `α_max`, `Δ_max` and the moments of `f`.
/// First order: `|K| <= exp(m α²/8) − 1`. Second order:
/// `|L| <= exp(m α³/2 + m² α² Δ/6 + 2m α⁴ + 5 m³ α² Δ²/8) − 1`.
pub fn discrete_certificate(m: usize, alpha: f64, delta: f64, order: Order, moments: &Moments) -> BoundCertificate {
    let mf = m as f64;
    let raw = match order {
        Order::First => (mf * alpha * alpha / 8.0).exp_m1(),
        Order::Second => (0.5 * mf * alpha.powi(3)
            + mf * mf * alpha * alpha * delta / 6.0
            + 2.0 * mf * alpha.powi(4)
            + 5.0 / 8.0 * mf.powi(3) * alpha * alpha * delta * delta)
            .exp_m1(),
    };
    certificate(order, moments, raw, true)
}

/// Certificate for `E e^{f(X)}` on `support`, with the difference
/// statistics computed exhaustively and the caller's moments.
pub fn discrete_expectation_bound(
    support: &Support,
    f: &dyn Fn(&[usize]) -> Complex64,
    order: Order,
    moments: &Moments,
) -> Result<BoundCertificate> {
    let (a, d) = discrete_alpha_delta(support, f)?;
    Ok(discrete_certificate(support.m(), a, d, order, moments))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteCheck {
    pub alpha_max: f64,
    pub delta_max: f64,
    pub moments: Moments,
    pub exact_value: Complex64,
    pub first: BoundCertificate,
    pub second: BoundCertificate,
}

impl DiscreteCheck {
    pub fn sound(&self) -> bool {
        self.first.contains(self.exact_value) && self.second.contains(self.exact_value)
    }
}

/// Exhaustive moments, exact `E e^f`, and both certificates.
pub fn discrete_check(support: &Support, f: &dyn Fn(&[usize]) -> Complex64) -> Result<DiscreteCheck> {
    let weighted: Vec<(f64, Complex64)> = support.points()?.iter().map(|(x, p)| (*p, f(x))).collect();
    let moments = weighted_moments(&weighted);
    let exact_value = weighted_exp_mean(&weighted);
    let (alpha_max, delta_max) = discrete_alpha_delta(support, f)?;
    let m = support.m();
    Ok(DiscreteCheck {
        alpha_max,
        delta_max,
        moments,
        exact_value,
        first: discrete_certificate(m, alpha_max, delta_max, Order::First, &moments),
        second: discrete_certificate(m, alpha_max, delta_max, Order::Second, &moments),
    })
}
