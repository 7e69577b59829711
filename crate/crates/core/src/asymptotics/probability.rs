use crate::error::Result;
use crate::graph_model::{DegreeSequence, Graph};
use crate::numeric::csum;
use crate::pattern_stats::{mixed_from_parts, pattern_moments, MixedMoments};

use super::{deviations, proper_stats, require_prefix, require_spanning, Config, ExponentReport};

/// Exponent summands `f` (five) and `g` (one) of the probability that a
/// spanning pattern with degrees `h` and edge list `edges` is present, when
/// vertex `j` has degree deviation `dev[j]`. Passing a permuted `dev` gives
/// the permuted exponent used when averaging over placements.
pub fn subgraph_exponent_terms(
    lambda: f64,
    dev: &[f64],
    h: &[usize],
    edges: &[(usize, usize)],
) -> [(&'static str, f64); 6] {
    let nf = dev.len() as f64;
    let lam = lambda;
    let hf: Vec<f64> = h.iter().map(|&x| x as f64).collect();
    let mu = |t: i32| csum(hf.iter().map(|x| x.powi(t))) / nf;
    let (mu1, mu2, mu3) = (mu(1), mu(2), mu(3));
    let s11 = csum(dev.iter().zip(&hf).map(|(d, h)| d * h));
    let s12 = csum(dev.iter().zip(&hf).map(|(d, h)| d * h * h));
    let s21 = csum(dev.iter().zip(&hf).map(|(d, h)| d * d * h));
    let shifted = |j: usize| dev[j] - (1.0 - lam) * hf[j];
    let edge_sum = csum(edges.iter().map(|&(j, k)| shifted(j) * shifted(k)));
    [
        ("f_density", (1.0 - lam) / (4.0 * lam) * (mu1 * mu1 + 2.0 * mu1 - 2.0 * mu2)),
        ("f_mu3", -(1.0 - lam * lam) / (6.0 * lam * lam * nf) * mu3),
        ("f_dev_h", s11 / (lam * nf)),
        ("f_dev_h2", s12 / (2.0 * lam * lam * nf * nf)),
        ("f_dev2_h", -s21 / (2.0 * lam * lam * nf * nf)),
        ("g_edges", -edge_sum / (lam * (1.0 - lam) * nf * nf)),
    ]
}

/// The specialised exponent for patterns of small maximum degree (used for
/// trees): four `f` summands and the deviation-only edge sum `g`.
pub fn tree_exponent_terms(
    lambda: f64,
    dev: &[f64],
    h: &[usize],
    edges: &[(usize, usize)],
) -> [(&'static str, f64); 5] {
    let nf = dev.len() as f64;
    let lam = lambda;
    let m = edges.len() as f64;
    let hf: Vec<f64> = h.iter().map(|&x| x as f64).collect();
    let s21 = csum(dev.iter().zip(&hf).map(|(d, h)| d * d * h));
    let s11 = csum(dev.iter().zip(&hf).map(|(d, h)| d * h));
    let s02 = csum(hf.iter().map(|h| h * h));
    let g = csum(edges.iter().map(|&(j, k)| dev[j] * dev[k]));
    [
        ("f_tree_edges", (1.0 - lam) * m * (nf + m) / (lam * nf * nf)),
        ("f_dev2_h", -s21 / (2.0 * lam * lam * nf * nf)),
        ("f_dev_h", s11 / (lam * nf)),
        ("f_h2", -(1.0 - lam) / (2.0 * lam * nf) * s02),
        ("g_edges", -g / (lam * (1.0 - lam) * nf * nf)),
    ]
}

/// The six exponent summands of the induced-pattern probability, from the
/// mixed moments of the placement.
pub fn induced_exponent_terms(mm: &MixedMoments, r: usize, n: usize, lambda: f64) -> [(&'static str, f64); 6] {
    let w = |s: usize, t: usize| mm.get(s, t);
    let (rf, nf, lam) = (r as f64, n as f64, lambda);
    let q = lam * (1.0 - lam);
    [
        ("omega11_omega02", (2.0 * w(1, 1) - w(0, 2)) / (2.0 * q * nf)),
        ("r_squared", rf * rf / (2.0 * nf)),
        ("omega01", (1.0 - 2.0 * lam) * w(0, 1) / (2.0 * q * nf)),
        (
            "omega10_omega01",
            (4.0 * w(1, 0) * w(0, 1) - w(0, 1) * w(0, 1) - 2.0 * w(1, 0) * w(1, 0)) / (4.0 * q * nf * nf),
        ),
        ("r_omega", rf * (2.0 * w(1, 1) - w(2, 0) - w(0, 2)) / (2.0 * q * nf * nf)),
        (
            "omega_cubic",
            -(1.0 - 2.0 * lam) * (w(0, 3) + 3.0 * w(2, 1) - 3.0 * w(1, 2)) / (6.0 * q * q * nf * nf),
        ),
    ]
}

impl Config {
    /// Probability that the spanning pattern `h` (at its own labels) is a
    /// subgraph of a uniform realization of `d`.
    pub fn subgraph_probability(&self, d: &DegreeSequence, h: &Graph) -> Result<ExponentReport> {
        require_spanning(d, h)?;
        let s = proper_stats(d)?;
        let dev = deviations(d, s.mean_degree);
        let terms = subgraph_exponent_terms(s.lambda, &dev, &h.degrees(), h.edges());
        let lp = h.edge_count() as f64 * s.lambda.ln();
        Ok(ExponentReport::new("subgraph_probability", lp, terms.to_vec()).diag("error_envelope", self.envelope(s.n)))
    }

    /// The small-degree specialisation; reports but does not reject patterns
    /// whose maximum degree exceeds `n^{3 eps}`.
    pub fn tree_probability(&self, d: &DegreeSequence, t: &Graph) -> Result<ExponentReport> {
        require_spanning(d, t)?;
        let s = proper_stats(d)?;
        let dev = deviations(d, s.mean_degree);
        let terms = tree_exponent_terms(s.lambda, &dev, &t.degrees(), t.edges());
        let lp = t.edge_count() as f64 * s.lambda.ln();
        let threshold = s.nf().powf(3.0 * self.eps);
        let over = t.max_degree() as f64 > threshold;
        Ok(ExponentReport::new("tree_probability", lp, terms.to_vec())
            .diag("degree_threshold", threshold)
            .diag("threshold_violated", if over { 1.0 } else { 0.0 })
            .diag("error_envelope", self.envelope(s.n)))
    }

    /// Probability that `hr` is induced on vertices `0..r` of a uniform
    /// realization of `d`.
    pub fn induced_probability(&self, d: &DegreeSequence, hr: &Graph) -> Result<ExponentReport> {
        require_prefix(d, hr)?;
        let s = proper_stats(d)?;
        let r = hr.vertex_count();
        let dev = deviations(d, s.mean_degree);
        let mm = mixed_from_parts(&hr.degrees(), &dev[..r], s.lambda);
        let m = hr.edge_count() as f64;
        let pairs = (r * r.saturating_sub(1) / 2) as f64;
        let lp = m * s.lambda.ln() + (pairs - m) * (1.0 - s.lambda).ln();
        let terms = induced_exponent_terms(&mm, r, s.n, s.lambda);
        Ok(ExponentReport::new("induced_probability", lp, terms.to_vec()).diag("error_envelope", self.envelope(s.n)))
    }
}

pub fn subgraph_probability(d: &DegreeSequence, h: &Graph) -> Result<ExponentReport> {
    Config::default().subgraph_probability(d, h)
}

pub fn tree_probability(d: &DegreeSequence, t: &Graph) -> Result<ExponentReport> {
    Config::default().tree_probability(d, t)
}

pub fn induced_probability(d: &DegreeSequence, hr: &Graph) -> Result<ExponentReport> {
    Config::default().induced_probability(d, hr)
}

/// Difference between the general and the small-degree exponents, written
/// as the four summands the specialisation drops. Used to check that the two
/// agree up to exactly these terms.
pub fn tree_vs_subgraph_gap(d: &DegreeSequence, t: &Graph) -> Result<f64> {
    let s = proper_stats(d)?;
    let (lam, nf) = (s.lambda, s.nf());
    let dev = deviations(d, s.mean_degree);
    let h = t.degrees();
    let hf: Vec<f64> = h.iter().map(|&x| x as f64).collect();
    let mu3 = pattern_moments(t).mu[2];
    let s12 = csum(dev.iter().zip(&hf).map(|(d, h)| d * h * h));
    let cross = csum(t.edges().iter().map(|&(j, k)| dev[j] * hf[k] + dev[k] * hf[j]));
    let hh = csum(t.edges().iter().map(|&(j, k)| hf[j] * hf[k]));
    Ok(-(1.0 - lam * lam) / (6.0 * lam * lam * nf) * mu3 + s12 / (2.0 * lam * lam * nf * nf)
        + cross / (lam * nf * nf)
        - (1.0 - lam) * hh / (lam * nf * nf))
}
