//! Exponential-of-martingale estimates of `E e^{f(X)}` for `X` uniform on
//! permutations, uniform on fixed-size subsets, hypergeometric or
//! multinomial. Each estimate comes as a [`BoundCertificate`]: a center and
//! a relative envelope that must contain the true value.

mod discrete;
mod perm;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use discrete::{
    discrete_alpha_delta, discrete_check, discrete_expectation_bound, subset_alpha_delta, DiscreteCheck, Support,
    MAX_SUPPORT,
};
pub use perm::{
    complex_diameter, lemma_perm_check, perm_alpha_delta, perm_exp_mean, perm_moments, table_alpha_delta,
    telescope_check, weighted_exp_mean, weighted_moments, AlphaDeltaSummary, DiameterCheck, LemmaPermReport, Mode,
    Moments, PermTable, PermutationFunction, TelescopeReport, DIAMETER_ANGLES, MAX_DOOB_N, MAX_EXHAUSTIVE_N,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Order {
    First,
    Second,
}

impl Order {
    pub fn from_int(k: u8) -> Result<Self> {
        match k {
            1 => Ok(Order::First),
            2 => Ok(Order::Second),
            _ => Err(Error::pre(format!("order must be 1 or 2, got {k}"))),
        }
    }
}

/// `E e^f = center · (1 + ζ)` with `|ζ| <= envelope`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub order: Order,
    /// `E f` (first order) or `E f + V f / 2` (second order).
    pub center_log: Complex64,
    /// `|K|` bound, or `|L| e^{Var Im f / 2}` bound.
    pub envelope: f64,
    /// The bound on `|K|` or `|L|` before the imaginary-variance factor.
    pub raw_bound: f64,
    /// False when the difference statistics were only sampled.
    pub certified: bool,
}

/// Relative slack allowed for floating-point rounding in containment tests.
pub const CONTAINMENT_TOL: f64 = 1e-9;

impl BoundCertificate {
    pub fn center(&self) -> Complex64 {
        self.center_log.exp()
    }

    /// Enclosure `[c(1 − e), c(1 + e)]` when the center is real.
    pub fn interval(&self) -> Option<(f64, f64)> {
        if self.center_log.im != 0.0 {
            return None;
        }
        let c = self.center_log.re.exp();
        Some((c * (1.0 - self.envelope), c * (1.0 + self.envelope)))
    }

    /// Relative distance `|value / center − 1|`.
    pub fn relative_error(&self, value: Complex64) -> f64 {
        (value / self.center() - 1.0).norm()
    }

    pub fn contains(&self, value: Complex64) -> bool {
        self.relative_error(value) <= self.envelope * (1.0 + CONTAINMENT_TOL) + CONTAINMENT_TOL
    }
}

fn certificate(order: Order, m: &Moments, raw_bound: f64, certified: bool) -> BoundCertificate {
    match order {
        Order::First => BoundCertificate { order, center_log: m.mean, envelope: raw_bound, raw_bound, certified },
        Order::Second => BoundCertificate {
            order,
            center_log: m.mean + m.pseudo_var / 2.0,
            envelope: raw_bound * (m.var_im / 2.0).exp(),
            raw_bound,
            certified,
        },
    }
}

/// Certificate for `E e^{f(X)}`, `X` uniform on `S_n`, from the difference
/// statistics and the exact (or analytic) moments of `f`.
///
/// First order: `|K| <= exp(Σ α_j² / 8) − 1`. Second order:
/// `|L| <= exp(Σ (α_j³/6 + α_j β_j/3 + 5α_j⁴/8 + 5β_j²/8)) − 1`.
pub fn perm_expectation_bound(summary: &AlphaDeltaSummary, order: Order, moments: &Moments) -> BoundCertificate {
    let raw = match order {
        Order::First => (summary.alpha_sq_sum() / 8.0).exp_m1(),
        Order::Second => {
            let beta = summary.beta();
            let s: f64 = summary
                .alpha
                .iter()
                .zip(&beta)
                .map(|(&a, &b)| a.powi(3) / 6.0 + a * b / 3.0 + 5.0 * a.powi(4) / 8.0 + 5.0 * b * b / 8.0)
                .sum();
            s.exp_m1()
        }
    };
    certificate(order, moments, raw, summary.exact)
}

/// Everything about one function on `S_n` computed exhaustively.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PermCheck {
    pub summary: AlphaDeltaSummary,
    pub moments: Moments,
    pub exact_value: Complex64,
    pub first: BoundCertificate,
    pub second: BoundCertificate,
}

impl PermCheck {
    pub fn sound(&self) -> bool {
        self.first.contains(self.exact_value) && self.second.contains(self.exact_value)
    }
}

pub fn perm_check(t: &PermTable) -> PermCheck {
    let summary = table_alpha_delta(t);
    let moments = perm_moments(t);
    let exact_value = perm_exp_mean(t);
    let first = perm_expectation_bound(&summary, Order::First, &moments);
    let second = perm_expectation_bound(&summary, Order::Second, &moments);
    PermCheck { summary, moments, exact_value, first, second }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_gives_exact_center() {
        let t = PermutationFunction::real(5, |_| 0.7).tabulate().unwrap();
        let c = perm_check(&t);
        assert_eq!(c.first.envelope, 0.0);
        assert_eq!(c.second.envelope, 0.0);
        assert!((c.first.center() - c.exact_value).norm() < 1e-12);
        assert!(c.sound());
    }

    #[test]
    fn scaled_psi_on_six() {
        let t = PermutationFunction::real(6, |w| 0.3 * (0..6).map(|j| (j * w[j]) as f64).sum::<f64>()).tabulate().unwrap();
        let c = perm_check(&t);
        assert!(c.sound());
        let (lo, hi) = c.first.interval().unwrap();
        assert!(lo <= c.exact_value.re && c.exact_value.re <= hi);
    }

    #[test]
    fn imaginary_psi_uses_pseudovariance() {
        let theta = 0.05;
        let t = PermutationFunction::new(6, |w| Complex64::new(0.0, theta * (0..6).map(|j| (j * w[j]) as f64).sum::<f64>()))
            .tabulate()
            .unwrap();
        let c = perm_check(&t);
        assert!(c.moments.pseudo_var.re < 0.0);
        assert!((c.moments.pseudo_var.re + c.moments.var_im).abs() < 1e-9);
        assert!(c.sound());
    }

    #[test]
    fn sampled_summaries_are_not_certified() {
        let f = PermutationFunction::real(5, |w| w[0] as f64 * 0.1);
        let s = perm_alpha_delta(&f, Mode::Sampled { samples: 10, seed: 1 }).unwrap();
        let m = perm_moments(&f.tabulate().unwrap());
        assert!(!perm_expectation_bound(&s, Order::First, &m).certified);
    }
}
