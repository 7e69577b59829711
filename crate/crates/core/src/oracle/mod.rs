//! Ground truth at small `n`: exact counts of realizations, exact averages
//! over all of `G_d` kept as big rationals, and a switch-chain sampler for
//! sizes beyond exhaustive methods.
//!
//! Expectations are computed by one of two exact routes. Enumeration lists
//! every realization. Counting uses the memoized realization counter: a
//! pattern probability is a ratio of two counts, and for regular `d` every
//! placement of a pattern is equally likely, so an expected copy count is
//! the number of placements times one probability.

mod chain;
mod copies;
mod count;
mod enumerate;

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::graph_model::{DegreeSequence, Graph};
use crate::numeric::factorial;
use crate::tree_tools::{spanning_tree_count, unlabelled_trees};

pub use chain::{havel_hakimi, mc_expected_copies, switch_chain_sample, McEstimate, SwitchChain};
pub use copies::{count_copies, CopyCounter};
pub use count::{count_realizations, count_realizations_avoiding, MAX_COUNT_N};
pub use enumerate::{enumerate_realizations, visit_realizations};

/// Default cap on the number of realizations listed by enumeration.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Enumerate when `|G_d|` fits the budget, count otherwise.
    Auto,
    Enumeration,
    Counting,
}

/// An exact average over `G_d`.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub realization_count: BigUint,
    pub expectation: BigRational,
    /// The route actually taken (never `Auto`).
    pub method: Method,
    /// Per-graph values and how many realizations take each, when the
    /// result came from enumeration.
    pub histogram: Option<BTreeMap<BigUint, u128>>,
}

impl OracleResult {
    pub fn value(&self) -> f64 {
        self.expectation.to_f64().unwrap_or(f64::NAN)
    }

    /// `expectation · |G_d|`, an integer whenever the statistic is a count.
    pub fn total(&self) -> BigRational {
        &self.expectation * BigRational::from_integer(BigInt::from(self.realization_count.clone()))
    }
}

impl Serialize for OracleResult {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("OracleResult", 6)?;
        st.serialize_field("realization_count", &self.realization_count.to_string())?;
        st.serialize_field("numerator", &self.expectation.numer().to_string())?;
        st.serialize_field("denominator", &self.expectation.denom().to_string())?;
        st.serialize_field("value", &self.value())?;
        st.serialize_field("method", &self.method)?;
        let hist: Option<Vec<(String, String)>> = self
            .histogram
            .as_ref()
            .map(|h| h.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect());
        st.serialize_field("histogram", &hist)?;
        st.end()
    }
}

/// Budget and route selection for the exact ops.
#[derive(Debug, Clone)]
pub struct OracleConfig {
    pub budget: u128,
    pub method: Method,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { budget: DEFAULT_BUDGET, method: Method::Auto }
    }
}

fn ratio(num: BigUint, den: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den.clone()))
}

fn realizations(d: &DegreeSequence) -> Result<u128> {
    let total = count_realizations(d.degrees())?;
    if total == 0 {
        return Err(Error::NotGraphical);
    }
    Ok(total)
}

/// Count of realizations that contain `h` at its own labels (and, when
/// `induced`, contain no other pair among `0..r`).
fn containing(d: &DegreeSequence, h: &Graph, induced: bool) -> Result<u128> {
    let deg = h.degrees();
    let mut res = d.degrees().to_vec();
    for (v, &x) in deg.iter().enumerate() {
        if res[v] < x {
            return Ok(0);
        }
        res[v] -= x;
    }
    let forbidden: Vec<(usize, usize)> = if induced {
        let r = h.vertex_count();
        (0..r).flat_map(|a| (a + 1..r).map(move |b| (a, b))).collect()
    } else {
        h.edges().to_vec()
    };
    count_realizations_avoiding(&res, &forbidden)
}

fn contains_at_labels(g: &Graph, h: &Graph, induced: bool) -> bool {
    if induced {
        let r = h.vertex_count();
        (0..r).all(|a| (a + 1..r).all(|b| g.has_edge(a, b) == h.has_edge(a, b)))
    } else {
        h.edges().iter().all(|&(a, b)| g.has_edge(a, b))
    }
}

fn check_pattern(d: &DegreeSequence, h: &Graph, induced: bool) -> Result<()> {
    let (k, n) = (h.vertex_count(), d.len());
    if (induced && k > n) || (!induced && k != n) {
        return Err(Error::SizeMismatch(format!("pattern has {k} vertices but the degree sequence has {n}")));
    }
    Ok(())
}

impl OracleConfig {
    fn route(&self, d: &DegreeSequence, total: u128, symmetric_ok: bool) -> Result<Method> {
        match self.method {
            Method::Enumeration => Ok(Method::Enumeration),
            Method::Counting if symmetric_ok => Ok(Method::Counting),
            Method::Counting => Err(Error::pre("the counting route for expectations needs a regular degree sequence")),
            Method::Auto if total <= self.budget => Ok(Method::Enumeration),
            Method::Auto if symmetric_ok && d.is_regular() => Ok(Method::Counting),
            Method::Auto => Err(Error::BudgetExceeded(format!("|G_d| = {total} exceeds the budget {}", self.budget))),
        }
    }

    fn enumerate_stat<F: FnMut(&Graph) -> Result<BigUint>>(&self, d: &DegreeSequence, total: u128, mut stat: F) -> Result<OracleResult> {
        let mut hist: BTreeMap<BigUint, u128> = BTreeMap::new();
        let mut err = None;
        visit_realizations(d, self.budget, |g| {
            if err.is_some() {
                return;
            }
            match stat(g) {
                Ok(v) => *hist.entry(v).or_insert(0) += 1,
                Err(e) => err = Some(e),
            }
        })?;
        if let Some(e) = err {
            return Err(e);
        }
        let sum = hist.iter().fold(BigUint::zero(), |acc, (v, &c)| acc + v * BigUint::from(c));
        let count = BigUint::from(total);
        Ok(OracleResult { expectation: ratio(sum, &count), realization_count: count, method: Method::Enumeration, histogram: Some(hist) })
    }

    /// Exact `E N` (spanning copies) or `E Ñ` (induced copies on any `r`
    /// vertices) over `G_d`.
    pub fn expected_copies(&self, d: &DegreeSequence, h: &Graph, induced: bool) -> Result<OracleResult> {
        check_pattern(d, h, induced)?;
        let total = realizations(d)?;
        match self.route(d, total, d.is_regular())? {
            Method::Enumeration => {
                let counter = CopyCounter::new(h, induced)?;
                self.enumerate_stat(d, total, |g| Ok(BigUint::from(counter.count(g)?)))
            }
            _ => {
                let n = d.len() as u64;
                let r = h.vertex_count() as u64;
                let aut = copies::aut_big(h)?;
                let placements = if induced { factorial(n) / (factorial(n - r) * aut) } else { factorial(n) / aut };
                let hits = BigUint::from(containing(d, h, induced)?);
                let count = BigUint::from(total);
                Ok(OracleResult { expectation: ratio(placements * hits, &count), realization_count: count, method: Method::Counting, histogram: None })
            }
        }
    }

    /// Exact expected number of spanning trees over `G_d`.
    pub fn expected_spanning_trees(&self, d: &DegreeSequence) -> Result<OracleResult> {
        let total = realizations(d)?;
        match self.route(d, total, d.is_regular())? {
            Method::Enumeration => self.enumerate_stat(d, total, |g| Ok(spanning_tree_count(g))),
            _ => {
                let n = d.len() as u64;
                let mut sum = BigUint::zero();
                for t in unlabelled_trees(d.len()) {
                    let placements = factorial(n) / copies::aut_big(&t)?;
                    sum += placements * BigUint::from(containing(d, &t, false)?);
                }
                let count = BigUint::from(total);
                Ok(OracleResult { expectation: ratio(sum, &count), realization_count: count, method: Method::Counting, histogram: None })
            }
        }
    }

    /// Exact probability that `h` is present at its own labels (as a
    /// subgraph, or induced on `0..r`).
    pub fn pattern_probability(&self, d: &DegreeSequence, h: &Graph, induced: bool) -> Result<OracleResult> {
        check_pattern(d, h, induced)?;
        let total = realizations(d)?;
        let method = match self.method {
            Method::Enumeration => Method::Enumeration,
            _ => Method::Counting,
        };
        if method == Method::Enumeration {
            return self.enumerate_stat(d, total, |g| Ok(BigUint::from(contains_at_labels(g, h, induced) as u8)));
        }
        let count = BigUint::from(total);
        let hits = BigUint::from(containing(d, h, induced)?);
        Ok(OracleResult { expectation: ratio(hits, &count), realization_count: count, method, histogram: None })
    }
}

pub fn exact_expected_copies(d: &DegreeSequence, h: &Graph, induced: bool) -> Result<OracleResult> {
    OracleConfig::default().expected_copies(d, h, induced)
}

pub fn exact_expected_spanning_trees(d: &DegreeSequence) -> Result<OracleResult> {
    OracleConfig::default().expected_spanning_trees(d)
}

pub fn exact_pattern_probability(d: &DegreeSequence, h: &Graph, induced: bool) -> Result<OracleResult> {
    OracleConfig::default().pattern_probability(d, h, induced)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[usize]) -> DegreeSequence {
        DegreeSequence::new(v.to_vec()).unwrap()
    }

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn both(d: &DegreeSequence, f: impl Fn(&OracleConfig) -> OracleResult) -> BigRational {
        let e = f(&OracleConfig { method: Method::Enumeration, ..Default::default() });
        let c = f(&OracleConfig { method: Method::Counting, ..Default::default() });
        assert_eq!(e.expectation, c.expectation, "routes disagree on {:?}", d.degrees());
        e.expectation
    }

    #[test]
    fn trivial_expectations() {
        let d = seq(&[2, 2, 2, 2]);
        assert_eq!(exact_expected_copies(&d, &Graph::cycle(4).unwrap(), false).unwrap().expectation, q(1, 1));
        assert_eq!(exact_expected_spanning_trees(&d).unwrap().expectation, q(4, 1));
        assert_eq!(exact_expected_spanning_trees(&seq(&[1, 1, 2, 2])).unwrap().expectation, q(1, 1));
        let p = exact_pattern_probability(&d, &Graph::empty(2), true).unwrap();
        assert_eq!(p.expectation, q(1, 3));
        assert_eq!(exact_pattern_probability(&d, &Graph::empty(4), false).unwrap().expectation, q(1, 1));
    }

    #[test]
    fn routes_agree_on_regular_sequences() {
        for (n, k) in [(6, 3), (7, 2), (7, 4), (8, 3)] {
            let d = DegreeSequence::regular(n, k).unwrap();
            both(&d, |c| c.expected_spanning_trees(&d).unwrap());
            for h in [Graph::cycle(n).unwrap(), Graph::clique_with_isolated(3, n).unwrap(), Graph::path(n)] {
                both(&d, |c| c.expected_copies(&d, &h, false).unwrap());
            }
            for hr in [Graph::complete(3), Graph::path(3), Graph::empty(2)] {
                both(&d, |c| c.expected_copies(&d, &hr, true).unwrap());
                both(&d, |c| c.pattern_probability(&d, &hr, true).unwrap());
            }
        }
    }

    #[test]
    fn edge_probability_is_lambda() {
        let d = DegreeSequence::regular(6, 3).unwrap();
        let p = exact_pattern_probability(&d, &Graph::from_edges(6, [(0, 1)]).unwrap(), false).unwrap();
        assert_eq!(p.expectation, q(3, 5));
        assert_eq!(p.realization_count, BigUint::from(70u32));
    }

    #[test]
    fn induced_edge_count_is_deterministic() {
        let d = seq(&[3, 1, 2, 2, 3, 1]);
        let r = exact_expected_copies(&d, &Graph::complete(2), true).unwrap();
        assert_eq!(r.expectation, q(6, 1));
        assert_eq!(r.histogram.unwrap().len(), 1);
    }

    #[test]
    fn large_regular_uses_counting() {
        let d = DegreeSequence::regular(10, 5).unwrap();
        let cfg = OracleConfig { budget: 1000, method: Method::Auto };
        let r = cfg.expected_copies(&d, &Graph::perfect_matching(10).unwrap(), false).unwrap();
        assert_eq!(r.method, Method::Counting);
        assert!(r.total().is_integer());
        let irregular = seq(&[3, 3, 2, 2, 2, 2, 2, 2]);
        assert!(matches!(cfg.expected_spanning_trees(&irregular), Err(Error::BudgetExceeded(_))));
    }
}
