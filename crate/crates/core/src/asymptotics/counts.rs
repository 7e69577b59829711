use crate::error::{Error, Result};
use crate::graph_model::{subgraph_assumption_value, induced_assumption_value, DegreeSequence, DegreeStats, Graph};
use crate::numeric::{csum, ln_binomial, ln_factorial};
use crate::pattern_stats::{induced_moments, pattern_moments, InducedMoments, PatternMoments};

use super::{deviations, proper_stats, require_prefix, require_spanning, Config, ExponentReport};

fn c2(r: usize) -> f64 {
    (r * r.saturating_sub(1) / 2) as f64
}

/// The four exponent summands of the spanning-subgraph count.
fn subgraph_terms(s: &DegreeStats, pm: &PatternMoments) -> [(&'static str, f64); 4] {
    let (lam, nf, r) = (s.lambda, s.nf(), s.spread);
    let [mu1, mu2, mu3] = pm.mu;
    [
        ("mu_quadratic", (1.0 - lam) / (4.0 * lam) * (mu1 * mu1 + 2.0 * mu1 - 2.0 * mu2)),
        ("R_term", -r / (2.0 * lam * lam * nf) * (mu1 * mu1 + mu1 - mu2)),
        ("mu3_term", -(1.0 - lam * lam) / (6.0 * lam * lam * nf) * mu3),
        ("edge_product", -(1.0 - lam) / (lam * nf * nf) * pm.edge_prod_sum),
    ]
}

/// Λ0 (two summands), Λ1 (six) and Λ2 (two) of the induced count.
fn induced_terms(s: &DegreeStats, im: &InducedMoments, dev3: f64) -> [(&'static str, f64); 10] {
    let (lam, nf, rr) = (s.lambda, s.nf(), s.spread);
    let r = im.r as f64;
    let [w1, w2, w3] = im.omega;
    let q = lam * (1.0 - lam);
    [
        ("lambda0_omega2", -w2 / (2.0 * q * nf)),
        ("lambda0_R_omega2", rr * w2 / (2.0 * q * q * nf * nf)),
        ("lambda1_r_squared", r * r / (2.0 * nf)),
        ("lambda1_omega1", (1.0 - 2.0 * lam) * w1 / (2.0 * q * nf)),
        ("lambda1_omega1_squared", -w1 * w1 / (4.0 * q * nf * nf)),
        ("lambda1_R_r_squared", -r * r * rr / (2.0 * q * nf * nf)),
        ("lambda1_r_omega2", -r * w2 / (2.0 * q * nf * nf)),
        ("lambda1_omega3", -(1.0 - 2.0 * lam) * w3 / (6.0 * q * q * nf * nf)),
        ("lambda2_R_omega1", -(1.0 - 2.0 * lam) * rr * w1 / (2.0 * q * q * nf * nf)),
        ("lambda2_r_omega1_d3", -r * w1 * dev3 / (2.0 * q * q * nf.powi(4))),
    ]
}

pub(crate) fn induced_log_prefactor(n: usize, r: usize, m: usize, ln_aut: f64, lam: f64) -> f64 {
    ln_factorial(r as u64) - ln_aut
        + ln_binomial(n as u64, r as u64)
        + m as f64 * lam.ln()
        + (c2(r) - m as f64) * (1.0 - lam).ln()
}

impl Config {
    pub fn expected_subgraph_count(&self, d: &DegreeSequence, h: &Graph) -> Result<ExponentReport> {
        require_spanning(d, h)?;
        let s = proper_stats(d)?;
        let pm = pattern_moments(h);
        let lp = ln_factorial(s.n as u64) - self.ln_aut(h)? + pm.m as f64 * s.lambda.ln();
        Ok(ExponentReport::new("subgraph_count", lp, subgraph_terms(&s, &pm).to_vec())
            .diag("assumption", subgraph_assumption_value(&s, &h.degrees()))
            .diag("error_envelope", self.envelope(s.n)))
    }

    pub fn expected_subgraph_count_simplified(&self, d: &DegreeSequence, h: &Graph) -> Result<ExponentReport> {
        require_spanning(d, h)?;
        let s = proper_stats(d)?;
        let pm = pattern_moments(h);
        let lp = ln_factorial(s.n as u64) - self.ln_aut(h)? + pm.m as f64 * s.lambda.ln();
        let terms = subgraph_terms(&s, &pm)[..2].to_vec();
        Ok(ExponentReport::new("subgraph_count_simplified", lp, terms)
            .diag("mu3_ratio", pm.mu[2] / (s.lambda * s.lambda * s.nf()))
            .diag("assumption", subgraph_assumption_value(&s, &h.degrees()))
            .diag("error_envelope", self.envelope(s.n)))
    }

    pub fn expected_regular_factor(&self, d: &DegreeSequence, h: &Graph, deg: usize) -> Result<ExponentReport> {
        require_spanning(d, h)?;
        if !h.is_regular_of_degree(deg) {
            return Err(Error::pre(format!("pattern is not {deg}-regular")));
        }
        let s = proper_stats(d)?;
        let m = h.edge_count();
        let lp = ln_factorial(s.n as u64) - self.ln_aut(h)? + m as f64 * s.lambda.ln();
        Ok(ExponentReport::new("regular_factor", lp, regular_terms(&s, deg).to_vec())
            .diag("error_envelope", self.envelope(s.n)))
    }

    pub fn expected_total_regular_factors(&self, d: &DegreeSequence, deg: usize) -> Result<ExponentReport> {
        let s = proper_stats(d)?;
        if deg == 0 {
            return Err(Error::pre("regular factors need h >= 1"));
        }
        if (s.n * deg) % 2 == 1 {
            return Err(Error::pre(format!("n h = {} is odd", s.n * deg)));
        }
        let m = (s.n * deg / 2) as f64;
        let lp = 0.5 * std::f64::consts::LN_2 - s.nf() * ln_factorial(deg as u64)
            + m * ((2.0 * s.lambda * m).ln() - 1.0);
        let h = deg as f64;
        let [a, b] = regular_terms(&s, deg);
        Ok(ExponentReport::new("total_regular_factors", lp, vec![("regular_count_correction", -(h * h - 1.0) / 4.0), a, b])
            .diag("error_envelope", self.envelope(s.n)))
    }

    pub fn expected_induced_count(&self, d: &DegreeSequence, hr: &Graph) -> Result<ExponentReport> {
        require_prefix(d, hr)?;
        let s = proper_stats(d)?;
        let im = induced_moments(hr, s.lambda)?;
        let dev3 = csum(deviations(d, s.mean_degree).iter().map(|x| x.powi(3)));
        let lp = induced_log_prefactor(s.n, im.r, im.m, self.ln_aut(hr)?, s.lambda);
        Ok(ExponentReport::new("induced_count", lp, induced_terms(&s, &im, dev3).to_vec())
            .diag("induced_assumption", induced_assumption_value(&s, &hr.degrees()))
            .diag("error_envelope", self.envelope(s.n)))
    }

    pub fn expected_induced_simplified(&self, d: &DegreeSequence, hr: &Graph) -> Result<ExponentReport> {
        require_prefix(d, hr)?;
        let s = proper_stats(d)?;
        let im = induced_moments(hr, s.lambda)?;
        let lp = induced_log_prefactor(s.n, im.r, im.m, self.ln_aut(hr)?, s.lambda);
        let terms = induced_terms(&s, &im, 0.0)[..2].to_vec();
        let (r, q, nf) = (im.r as f64, s.lambda * (1.0 - s.lambda), s.nf());
        Ok(ExponentReport::new("induced_count_simplified", lp, terms)
            .diag("simplified_ratio", r * r * (1.0 + s.max_dev * s.max_dev / nf) / (q * q * nf))
            .diag("binomial_log_value", lp)
            .diag("induced_assumption", induced_assumption_value(&s, &hr.degrees()))
            .diag("error_envelope", self.envelope(s.n)))
    }

    pub fn expected_clique_count(&self, d: &DegreeSequence, r: usize, independent: bool) -> Result<ExponentReport> {
        if r == 0 || r > d.len() {
            return Err(Error::range(format!("clique order {r} must lie in 1..={}", d.len())));
        }
        // Independent sets of d are cliques of the complement sequence, whose
        // density is 1 - lambda and whose spread is unchanged.
        let s = if independent { proper_stats(&d.complement())? } else { proper_stats(d)? };
        let (lam, nf, rr, rf) = (s.lambda, s.nf(), s.spread, r as f64);
        let lp = ln_binomial(s.n as u64, r as u64) + c2(r) * lam.ln();
        let terms = vec![
            ("clique_r3", -(1.0 - lam) * rf * rf * (rf - 3.0) / (2.0 * lam * nf)),
            ("clique_R", rr * rf.powi(3) / (2.0 * lam * lam * nf * nf)),
            ("clique_r4", -(1.0 - lam) * (2.0 + 5.0 * lam) * rf.powi(4) / (12.0 * lam * lam * nf * nf)),
        ];
        let name = if independent { "independent_set_count" } else { "clique_count" };
        Ok(ExponentReport::new(name, lp, terms)
            .diag("clique_assumption", s.max_dev.powi(3) * rf.powi(4) / (lam.powi(3) * nf.powi(3)))
            .diag("error_envelope", self.envelope(s.n)))
    }

    pub fn binomial_baseline(&self, n: usize, lambda: f64, pattern: &Graph, induced: bool) -> Result<ExponentReport> {
        if !(lambda > 0.0 && lambda < 1.0) {
            return Err(Error::range(format!("lambda = {lambda} must lie strictly between 0 and 1")));
        }
        let m = pattern.edge_count();
        let ln_aut = self.ln_aut(pattern)?;
        if induced {
            if pattern.vertex_count() > n {
                return Err(Error::SizeMismatch(format!("pattern has {} vertices, n = {n}", pattern.vertex_count())));
            }
            let lp = induced_log_prefactor(n, pattern.vertex_count(), m, ln_aut, lambda);
            Ok(ExponentReport::new("binomial_induced", lp, vec![]))
        } else {
            if pattern.vertex_count() != n {
                return Err(Error::SizeMismatch(format!("pattern has {} vertices, n = {n}", pattern.vertex_count())));
            }
            let lp = ln_factorial(n as u64) - ln_aut + m as f64 * lambda.ln();
            Ok(ExponentReport::new("binomial_subgraph", lp, vec![]))
        }
    }
}

fn regular_terms(s: &DegreeStats, deg: usize) -> [(&'static str, f64); 2] {
    let (lam, h) = (s.lambda, deg as f64);
    [
        ("regular_degree", -(1.0 - lam) / (4.0 * lam) * h * (h - 2.0)),
        ("R_term", -s.spread * h / (2.0 * lam * lam * s.nf())),
    ]
}

/// Expected number of spanning trees. `lambda = 1` is allowed and gives
/// Cayley's count.
pub fn expected_spanning_trees(d: &DegreeSequence) -> Result<ExponentReport> {
    let s = d.stats()?;
    if !(s.lambda > 0.0 && s.lambda <= 1.0) {
        return Err(Error::range("spanning-tree formula needs 0 < lambda <= 1"));
    }
    let (lam, nf) = (s.lambda, s.nf());
    let lp = (nf - 2.0) * nf.ln() + (nf - 1.0) * lam.ln();
    let terms = vec![("tree_const", -(1.0 - lam) / (2.0 * lam)), ("R_term", -s.spread / (2.0 * lam * lam * nf))];
    Ok(ExponentReport::new("spanning_trees", lp, terms).diag("error_envelope", Config::default().envelope(s.n)))
}

/// `(2 - eps) log n / log(1/lambda_min)`; infinite when `lambda_min` is 1.
pub fn concentration_threshold(d: &DegreeSequence, eps: f64) -> Result<f64> {
    if !(eps > 0.0 && eps <= 2.0) {
        return Err(Error::range(format!("eps = {eps} must lie in (0, 2]")));
    }
    let s = proper_stats(d)?;
    let lmin = s.lambda.min(1.0 - s.lambda);
    let denom = (1.0 / lmin).ln();
    if denom <= 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok((2.0 - eps) * s.nf().ln() / denom)
}

pub fn expected_subgraph_count(d: &DegreeSequence, h: &Graph) -> Result<ExponentReport> {
    Config::default().expected_subgraph_count(d, h)
}

pub fn expected_subgraph_count_simplified(d: &DegreeSequence, h: &Graph) -> Result<ExponentReport> {
    Config::default().expected_subgraph_count_simplified(d, h)
}

pub fn expected_regular_factor(d: &DegreeSequence, h: &Graph, deg: usize) -> Result<ExponentReport> {
    Config::default().expected_regular_factor(d, h, deg)
}

pub fn expected_total_regular_factors(d: &DegreeSequence, deg: usize) -> Result<ExponentReport> {
    Config::default().expected_total_regular_factors(d, deg)
}

pub fn expected_induced_count(d: &DegreeSequence, hr: &Graph) -> Result<ExponentReport> {
    Config::default().expected_induced_count(d, hr)
}

pub fn expected_induced_simplified(d: &DegreeSequence, hr: &Graph) -> Result<ExponentReport> {
    Config::default().expected_induced_simplified(d, hr)
}

pub fn expected_clique_count(d: &DegreeSequence, r: usize, independent: bool) -> Result<ExponentReport> {
    Config::default().expected_clique_count(d, r, independent)
}

pub fn binomial_baseline(n: usize, lambda: f64, pattern: &Graph, induced: bool) -> Result<ExponentReport> {
    Config::default().binomial_baseline(n, lambda, pattern, induced)
}
