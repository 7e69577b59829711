use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::csum;

/// Default `a` in the density lower bound `min{d, n-d-1} >= n / (3a log n)`.
pub const DEFAULT_A: f64 = 0.25;
/// Default `eps` in the spread condition `delta = O(n^{1/2+eps})`.
pub const DEFAULT_EPS: f64 = 0.05;

/// A degree sequence `d_1..d_n` on the labelled vertex set `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DegreeSequence(Vec<usize>);

impl DegreeSequence {
    /// Checks that every degree lies in `0..=n-1`. Parity is not checked here;
    /// odd sums are rejected by [`is_graphical`].
    pub fn new(degrees: Vec<usize>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::EmptySequence);
        }
        let max = degrees.len() - 1;
        if let Some((vertex, &degree)) = degrees.iter().enumerate().find(|(_, &x)| x > max) {
            return Err(Error::DegreeOutOfRange { vertex, degree, max });
        }
        Ok(Self(degrees))
    }

    pub fn regular(n: usize, d: usize) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degrees(&self) -> &[usize] {
        &self.0
    }

    pub fn sum(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn is_regular(&self) -> bool {
        self.0.windows(2).all(|w| w[0] == w[1])
    }

    /// The sequence `n-1-d_j` of the complement graph.
    pub fn complement(&self) -> Self {
        let n = self.len();
        Self(self.0.iter().map(|&x| n - 1 - x).collect())
    }

    pub fn stats(&self) -> Result<DegreeStats> {
        compute_stats(self)
    }
}

impl AsRef<[usize]> for DegreeSequence {
    fn as_ref(&self) -> &[usize] {
        &self.0
    }
}

/// Mean degree, density, spread and maximum deviation of a degree sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeStats {
    pub n: usize,
    /// Mean degree.
    pub mean_degree: f64,
    /// `mean_degree / (n-1)`.
    pub lambda: f64,
    /// `(1/n) sum (d_j - mean)^2`.
    pub spread: f64,
    /// `max_j |d_j - mean|`.
    pub max_dev: f64,
}

impl DegreeStats {
    pub fn nf(&self) -> f64 {
        self.n as f64
    }

    pub fn is_regular(&self) -> bool {
        self.max_dev == 0.0
    }

    /// Rejects the degenerate densities 0 and 1.
    pub fn require_proper_density(&self) -> Result<()> {
        if self.lambda > 0.0 && self.lambda < 1.0 {
            Ok(())
        } else {
            Err(Error::range(format!("lambda = {} must lie strictly between 0 and 1", self.lambda)))
        }
    }
}

pub fn compute_stats(d: &DegreeSequence) -> Result<DegreeStats> {
    raw_stats(d.degrees())
}

/// The same statistics for an arbitrary list of nonnegative integers, without
/// the range check on individual entries.
pub fn raw_stats(degrees: &[usize]) -> Result<DegreeStats> {
    let n = degrees.len();
    if n < 2 {
        return Err(Error::pre("degree statistics need n >= 2"));
    }
    let nf = n as f64;
    // The mean is rational with denominator n; sum exactly in integers first.
    let mean = degrees.iter().sum::<usize>() as f64 / nf;
    let devs: Vec<f64> = degrees.iter().map(|&x| x as f64 - mean).collect();
    let spread = csum(devs.iter().map(|x| x * x)) / nf;
    let max_dev = devs.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    Ok(DegreeStats { n, mean_degree: mean, lambda: mean / (nf - 1.0), spread, max_dev })
}

/// Erdős–Gallai test. Works on a sorted copy; the input is left untouched.
pub fn is_graphical(d: &DegreeSequence) -> bool {
    is_graphical_slice(d.degrees())
}

pub(crate) fn is_graphical_slice(degrees: &[usize]) -> bool {
    let n = degrees.len();
    if degrees.iter().sum::<usize>() % 2 == 1 {
        return false;
    }
    if degrees.iter().any(|&x| x >= n.max(1)) && n > 0 {
        return false;
    }
    let mut sorted = degrees.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    let mut lhs = 0usize;
    for k in 1..=n {
        lhs += sorted[k - 1];
        let rhs = k * (k - 1) + sorted[k..].iter().map(|&x| x.min(k)).sum::<usize>();
        if lhs > rhs {
            return false;
        }
    }
    true
}

/// Raw ratios behind the density/spread validity conditions. Thresholds in
/// those conditions carry unspecified constants, so the flags below use unit
/// constants and the ratios are kept for the caller to judge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssumptionReport {
    pub a: f64,
    pub eps: f64,
    /// `delta / n^{1/2+eps}`.
    pub delta_ratio: f64,
    /// `min{d, n-d-1} * 3a log n / n`; the density condition asks for >= 1.
    pub degree_ratio: f64,
    pub delta_condition: bool,
    pub degree_condition: bool,
    /// `delta^3 mu_3 / (lambda^3 n^2)` for a spanning pattern, when supplied.
    pub subgraph_assumption: Option<f64>,
    /// `delta^3 / (lambda^3 (1-lambda)^3 n^3) * sum_j |h_j - lambda(r-1)|^3`, when supplied.
    pub induced_assumption: Option<f64>,
}

pub fn check_assumptions(d: &DegreeSequence, a: f64, eps: f64) -> Result<AssumptionReport> {
    if !(a > 0.0 && a < 0.5) {
        return Err(Error::range(format!("a = {a} must lie in (0, 1/2)")));
    }
    if !(eps > 0.0) {
        return Err(Error::range(format!("eps = {eps} must be positive")));
    }
    let s = compute_stats(d)?;
    let nf = s.nf();
    let delta_ratio = s.max_dev / nf.powf(0.5 + eps);
    let min_side = s.mean_degree.min(nf - s.mean_degree - 1.0);
    let degree_ratio = min_side * 3.0 * a * nf.ln() / nf;
    Ok(AssumptionReport {
        a,
        eps,
        delta_ratio,
        degree_ratio,
        delta_condition: delta_ratio <= 1.0,
        degree_condition: degree_ratio >= 1.0,
        subgraph_assumption: None,
        induced_assumption: None,
    })
}

impl AssumptionReport {
    pub fn with_subgraph_pattern(mut self, stats: &DegreeStats, pattern_degrees: &[usize]) -> Self {
        self.subgraph_assumption = Some(subgraph_assumption_value(stats, pattern_degrees));
        self
    }

    pub fn with_induced_pattern(mut self, stats: &DegreeStats, pattern_degrees: &[usize]) -> Self {
        self.induced_assumption = Some(induced_assumption_value(stats, pattern_degrees));
        self
    }
}

/// `delta^3 mu_3 / (lambda^3 n^2)` with `mu_3 = (1/n) sum h_j^3` over all n vertices.
pub fn subgraph_assumption_value(stats: &DegreeStats, h: &[usize]) -> f64 {
    if stats.max_dev == 0.0 {
        return 0.0;
    }
    let nf = stats.nf();
    let mu3 = csum(h.iter().map(|&x| (x as f64).powi(3))) / nf;
    stats.max_dev.powi(3) * mu3 / (stats.lambda.powi(3) * nf * nf)
}

/// The induced-pattern analogue, with `r = h.len()`.
pub fn induced_assumption_value(stats: &DegreeStats, h: &[usize]) -> f64 {
    if stats.max_dev == 0.0 {
        return 0.0;
    }
    let nf = stats.nf();
    let lam = stats.lambda;
    let shift = lam * (h.len() as f64 - 1.0);
    let s3 = csum(h.iter().map(|&x| (x as f64 - shift).abs().powi(3)));
    stats.max_dev.powi(3) / (lam * (1.0 - lam) * nf).powi(3) * s3
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ds(v: &[usize]) -> DegreeSequence {
        DegreeSequence::new(v.to_vec()).unwrap()
    }

    #[test]
    fn stats_regular() {
        let s = compute_stats(&ds(&[2, 2, 2, 2])).unwrap();
        assert_eq!(s.n, 4);
        assert_eq!(s.mean_degree, 2.0);
        assert_relative_eq!(s.lambda, 2.0 / 3.0);
        assert_eq!(s.spread, 0.0);
        assert_eq!(s.max_dev, 0.0);
    }

    #[test]
    fn stats_irregular_by_hand() {
        let s = compute_stats(&ds(&[1, 2, 3, 3])).unwrap();
        assert_relative_eq!(s.mean_degree, 2.25);
        // (1.5625 + 0.0625 + 0.5625 + 0.5625) / 4
        assert_relative_eq!(s.spread, 0.6875);
        assert_relative_eq!(s.max_dev, 1.25);
    }

    #[test]
    fn stats_one_two_three_four() {
        // Degree 4 is out of range on four vertices, so the checked
        // constructor refuses it; the raw formulas still evaluate.
        let s = DegreeSequence::new(vec![1, 2, 3, 4]);
        assert!(matches!(s, Err(Error::DegreeOutOfRange { vertex: 3, degree: 4, max: 3 })));
        let stats = raw_stats(&[1, 2, 3, 4]).unwrap();
        assert_relative_eq!(stats.mean_degree, 2.5);
        assert_relative_eq!(stats.lambda, 5.0 / 6.0);
        assert_relative_eq!(stats.spread, 1.25);
        assert_relative_eq!(stats.max_dev, 1.5);
    }

    #[test]
    fn complete_graph_sequence() {
        let s = compute_stats(&ds(&[4; 5])).unwrap();
        assert_eq!(s.lambda, 1.0);
        assert_eq!(s.spread, 0.0);
        assert_eq!(s.max_dev, 0.0);
    }

    #[test]
    fn errors() {
        assert_eq!(DegreeSequence::new(vec![]), Err(Error::EmptySequence));
        assert!(compute_stats(&ds(&[0])).is_err());
    }

    #[test]
    fn graphical_examples() {
        assert!(is_graphical(&ds(&[3, 3, 3, 3])));
        assert!(is_graphical(&ds(&[3, 1, 1, 1])));
        assert!(!is_graphical(&ds(&[3, 3, 1, 1])));
        assert!(!is_graphical(&ds(&[1, 1, 1])));
        let input = ds(&[1, 3, 2, 2]);
        let copy = input.clone();
        let _ = is_graphical(&input);
        assert_eq!(input, copy);
    }

    #[test]
    fn assumptions() {
        let r = check_assumptions(&ds(&[3; 8]), 0.25, 0.1).unwrap();
        assert_eq!(r.delta_ratio, 0.0);
        assert!(r.delta_condition);
        let sparse = check_assumptions(&ds(&[1, 1]), 0.25, 0.1).unwrap();
        assert!(!sparse.degree_condition);
        assert!(check_assumptions(&ds(&[1, 1]), 0.5, 0.1).is_err());
        assert!(check_assumptions(&ds(&[1, 1]), 0.0, 0.1).is_err());
        let s = compute_stats(&ds(&[3; 8])).unwrap();
        let r = r.with_subgraph_pattern(&s, &[1; 8]).with_induced_pattern(&s, &[2, 2, 2]);
        assert_eq!(r.subgraph_assumption, Some(0.0));
        assert_eq!(r.induced_assumption, Some(0.0));
    }
}
