//! Closed-form asymptotic expectations and pattern probabilities. Every
//! formula is returned as an [`ExponentReport`]: the log of its combinatorial
//! prefactor plus each displayed exponent summand under a stable name.

mod counts;
mod probability;

use indexmap::IndexMap;
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph_model::{DegreeSequence, DegreeStats, Graph};
use crate::numeric::{csum, ln_biguint};
use crate::pattern_stats::automorphism_count;

pub use counts::*;
pub use probability::*;

/// Default exponent of the reported error envelope `n^{-b}`.
pub const DEFAULT_B: f64 = 0.2;
/// Automorphism search limit used by the formula ops (non-isolated vertices).
pub const FORMULA_AUT_LIMIT: usize = 64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExponentReport {
    /// Stable identifier of the formula that produced the report.
    pub formula: String,
    pub log_prefactor: f64,
    pub terms: IndexMap<String, f64>,
    pub log_value: f64,
    pub diagnostics: IndexMap<String, f64>,
}

impl ExponentReport {
    pub(crate) fn new(formula: &str, log_prefactor: f64, terms: Vec<(&str, f64)>) -> Self {
        // `+ 0.0` maps a negative zero to zero so renderings stay stable.
        let terms: IndexMap<String, f64> = terms.into_iter().map(|(k, v)| (k.to_string(), v + 0.0)).collect();
        let log_value = log_prefactor + csum(terms.values().copied());
        Self { formula: formula.to_string(), log_prefactor, terms, log_value, diagnostics: IndexMap::new() }
    }

    pub(crate) fn diag(mut self, name: &str, value: f64) -> Self {
        self.diagnostics.insert(name.to_string(), value);
        self
    }

    /// Sum of the exponent terms.
    pub fn exponent(&self) -> f64 {
        csum(self.terms.values().copied())
    }

    pub fn value(&self) -> f64 {
        self.log_value.exp()
    }

    pub fn term(&self, name: &str) -> Option<f64> {
        self.terms.get(name).copied()
    }
}

/// Knobs shared by the formula ops.
#[derive(Debug, Clone)]
pub struct Config {
    /// Exponent of the diagnostic error envelope `n^{-b}`.
    pub b: f64,
    /// Stands in for the non-constructive ε where a formula's precondition
    /// depends on it (tree degree threshold `n^{3 eps}`).
    pub eps: f64,
    /// Caller-supplied `|Aut(H)|`, skipping the search.
    pub aut_override: Option<BigUint>,
    pub aut_limit: usize,
}

impl Default for Config {
    fn default() -> Self {
        Self { b: DEFAULT_B, eps: crate::graph_model::DEFAULT_EPS, aut_override: None, aut_limit: FORMULA_AUT_LIMIT }
    }
}

impl Config {
    pub fn with_aut(mut self, aut: BigUint) -> Self {
        self.aut_override = Some(aut);
        self
    }

    pub(crate) fn ln_aut(&self, h: &Graph) -> Result<f64> {
        match &self.aut_override {
            Some(a) => Ok(ln_biguint(a)),
            None => Ok(ln_biguint(&automorphism_count(h, self.aut_limit)?)),
        }
    }

    pub(crate) fn envelope(&self, n: usize) -> f64 {
        (n as f64).powf(-self.b)
    }
}

/// Stats with `0 < lambda < 1`, as required by all ops except spanning trees.
pub(crate) fn proper_stats(d: &DegreeSequence) -> Result<DegreeStats> {
    let s = d.stats()?;
    s.require_proper_density()?;
    Ok(s)
}

pub(crate) fn deviations(d: &DegreeSequence, mean: f64) -> Vec<f64> {
    d.degrees().iter().map(|&x| x as f64 - mean).collect()
}

pub(crate) fn require_spanning(d: &DegreeSequence, h: &Graph) -> Result<()> {
    if h.vertex_count() != d.len() {
        return Err(Error::SizeMismatch(format!(
            "pattern has {} vertices but the degree sequence has {}",
            h.vertex_count(),
            d.len()
        )));
    }
    Ok(())
}

pub(crate) fn require_prefix(d: &DegreeSequence, hr: &Graph) -> Result<()> {
    if hr.vertex_count() > d.len() {
        return Err(Error::SizeMismatch(format!(
            "pattern has {} vertices but the degree sequence has {}",
            hr.vertex_count(),
            d.len()
        )));
    }
    Ok(())
}
