//! Functions on permutations: tabulation, difference statistics, exact
//! moments and the Doob martingale over prefixes.

use num_complex::Complex64;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{perm_rank, small_factorial, LexPermutations};

/// Largest `n` for exhaustive work on `S_n`.
pub const MAX_EXHAUSTIVE_N: usize = 8;
/// Largest `n` for the Doob-martingale checks.
pub const MAX_DOOB_N: usize = 6;

/// A complex function on permutations of `0..n`. A permutation is passed in
/// one-line form: `w[i]` is the image of position `i`.
pub struct PermutationFunction<'a> {
    n: usize,
    eval: Box<dyn Fn(&[usize]) -> Complex64 + 'a>,
}

impl<'a> PermutationFunction<'a> {
    pub fn new(n: usize, f: impl Fn(&[usize]) -> Complex64 + 'a) -> Self {
        Self { n, eval: Box::new(f) }
    }

    pub fn real(n: usize, f: impl Fn(&[usize]) -> f64 + 'a) -> Self {
        Self::new(n, move |w| Complex64::new(f(w), 0.0))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn evaluate(&self, w: &[usize]) -> Complex64 {
        (self.eval)(w)
    }

    /// Values on all of `S_n` in lexicographic order.
    pub fn tabulate(&self) -> Result<PermTable> {
        if self.n > MAX_EXHAUSTIVE_N {
            return Err(Error::BudgetExceeded(format!(
                "exhaustive tabulation needs n <= {MAX_EXHAUSTIVE_N}, got {}",
                self.n
            )));
        }
        let values = LexPermutations::new(self.n).map(|w| self.evaluate(&w)).collect();
        Ok(PermTable::new(self.n, values))
    }
}

/// A function on `S_n` stored by lexicographic rank, with the rank of
/// `w ∘ (j a)` (positions `j` and `a` swapped) precomputed.
#[derive(Debug, Clone)]
pub struct PermTable {
    n: usize,
    values: Vec<Complex64>,
    swap: Vec<u32>,
}

impl PermTable {
    pub fn new(n: usize, values: Vec<Complex64>) -> Self {
        assert_eq!(values.len(), small_factorial(n));
        let mut swap = vec![0u32; values.len() * n * n];
        for (r, mut w) in LexPermutations::new(n).enumerate() {
            for j in 0..n {
                for a in 0..n {
                    w.swap(j, a);
                    swap[(r * n + j) * n + a] = perm_rank(&w) as u32;
                    w.swap(j, a);
                }
            }
        }
        Self { n, values, swap }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    /// Rank of `w ∘ (j a)` where `w` has rank `r`.
    pub fn swapped(&self, r: usize, j: usize, a: usize) -> usize {
        self.swap[(r * self.n + j) * self.n + a] as usize
    }

    pub fn is_real(&self) -> bool {
        self.values.iter().all(|z| z.im == 0.0)
    }

    /// Pointwise sum, for subadditivity checks.
    pub fn add(&self, other: &PermTable) -> PermTable {
        assert_eq!(self.n, other.n);
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        PermTable { n: self.n, values, swap: self.swap.clone() }
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> PermTable {
        PermTable { n: self.n, values: self.values.iter().map(|&z| f(z)).collect(), swap: self.swap.clone() }
    }
}

/// `alpha[j-1] = α_j` for `1 <= j <= n-1`, and `delta[j-1][k-1] = Δ_jk`
/// for `j != k` (the diagonal is unused and zero).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlphaDeltaSummary {
    pub n: usize,
    pub alpha: Vec<f64>,
    pub delta: Vec<Vec<f64>>,
    /// True when every maximum was taken over all of `S_n`.
    pub exact: bool,
}

impl AlphaDeltaSummary {
    /// `β_j = Σ_{k>j} α_k Δ_jk`, indexed like `alpha`.
    pub fn beta(&self) -> Vec<f64> {
        let m = self.alpha.len();
        (0..m).map(|j| (j + 1..m).map(|k| self.alpha[k] * self.delta[j][k]).sum()).collect()
    }

    pub fn alpha_sq_sum(&self) -> f64 {
        self.alpha.iter().map(|a| a * a).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exhaustive,
    /// Maxima over this many random permutations (lower bounds).
    Sampled { samples: usize, seed: u64 },
}

fn fold(n: usize, norms_a: &[Vec<f64>], norms_ab: &dyn Fn(usize, usize, usize, usize) -> f64, exact: bool) -> AlphaDeltaSummary {
    let m = n.saturating_sub(1);
    let alpha = (0..m).map(|j| norms_a[j][j + 1..].iter().sum::<f64>() / (n - j - 1) as f64).collect();
    let mut delta = vec![vec![0.0; m]; m];
    for j in 0..m {
        for k in 0..m {
            if j == k {
                continue;
            }
            let mut s = 0.0;
            for a in j + 1..n {
                for b in k + 1..n {
                    s += norms_ab(j, a, k, b);
                }
            }
            delta[j][k] = s / ((n - j - 1) * (n - k - 1)) as f64;
        }
    }
    AlphaDeltaSummary { n, alpha, delta, exact }
}

/// Exact `α_j` and `Δ_jk` from a full table.
pub fn table_alpha_delta(t: &PermTable) -> AlphaDeltaSummary {
    let n = t.n;
    let f = &t.values;
    let mut na = vec![vec![0.0f64; n]; n];
    for j in 0..n {
        for a in j + 1..n {
            na[j][a] = (0..f.len()).map(|r| (f[r] - f[t.swapped(r, j, a)]).norm()).fold(0.0, f64::max);
        }
    }
    let second = |j: usize, a: usize, k: usize, b: usize| {
        (0..f.len())
            .map(|r| {
                let rk = t.swapped(r, k, b);
                (f[r] - f[t.swapped(r, j, a)] - f[rk] + f[t.swapped(rk, j, a)]).norm()
            })
            .fold(0.0, f64::max)
    };
    fold(n, &na, &second, true)
}

/// `α_j` and `Δ_jk` for `f`, exhaustively (`n <= 8`) or as lower bounds
/// from sampled permutations.
pub fn perm_alpha_delta(f: &PermutationFunction, mode: Mode) -> Result<AlphaDeltaSummary> {
    match mode {
        Mode::Exhaustive => Ok(table_alpha_delta(&f.tabulate()?)),
        Mode::Sampled { samples, seed } => {
            if samples == 0 {
                return Err(Error::pre("sampled mode needs at least one sample"));
            }
            let n = f.n;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut w: Vec<usize> = (0..n).collect();
            let mut na = vec![vec![0.0f64; n]; n];
            let mut nab = vec![0.0f64; n * n * n * n];
            let idx = |j: usize, a: usize, k: usize, b: usize| ((j * n + a) * n + k) * n + b;
            for _ in 0..samples {
                w.shuffle(&mut rng);
                let f0 = f.evaluate(&w);
                for j in 0..n {
                    for a in j + 1..n {
                        let mut wa = w.clone();
                        wa.swap(j, a);
                        let fa = f.evaluate(&wa);
                        na[j][a] = na[j][a].max((f0 - fa).norm());
                        // One random second transposition per first one keeps
                        // the cost at O(n^2) evaluations per sample.
                        let k = rng.gen_range(0..n - 1);
                        let b = rng.gen_range(k + 1..n);
                        let mut wb = w.clone();
                        wb.swap(k, b);
                        let mut wba = wb.clone();
                        wba.swap(j, a);
                        let v = (f0 - fa - f.evaluate(&wb) + f.evaluate(&wba)).norm();
                        let e = &mut nab[idx(j, a, k, b)];
                        *e = e.max(v);
                    }
                }
            }
            Ok(fold(n, &na, &|j, a, k, b| nab[idx(j, a, k, b)], false))
        }
    }
}

/// Exact mean, pseudovariance `E(f − Ef)^2`, and `Var Im f` under the
/// uniform law, plus the target `E e^f` itself.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Moments {
    pub mean: Complex64,
    pub pseudo_var: Complex64,
    pub var_im: f64,
}

/// Moments of a finitely supported law given as `(probability, value)`.
pub fn weighted_moments(points: &[(f64, Complex64)]) -> Moments {
    let mean: Complex64 = points.iter().map(|&(p, z)| z * p).sum();
    let pseudo_var: Complex64 = points.iter().map(|&(p, z)| (z - mean) * (z - mean) * p).sum();
    let var_im = points.iter().map(|&(p, z)| p * (z.im - mean.im).powi(2)).sum();
    Moments { mean, pseudo_var, var_im }
}

pub fn weighted_exp_mean(points: &[(f64, Complex64)]) -> Complex64 {
    points.iter().map(|&(p, z)| z.exp() * p).sum()
}

fn uniform_points(t: &PermTable) -> Vec<(f64, Complex64)> {
    let p = 1.0 / t.values.len() as f64;
    t.values.iter().map(|&z| (p, z)).collect()
}

pub fn perm_moments(t: &PermTable) -> Moments {
    weighted_moments(&uniform_points(t))
}

/// `E e^{f(X)}` by direct summation over `S_n`.
pub fn perm_exp_mean(t: &PermTable) -> Complex64 {
    weighted_exp_mean(&uniform_points(t))
}

/// The Doob martingale `Z_k = E(f | first k positions)`, stored per `k` as
/// one value per lexicographic rank.
pub(crate) fn doob(t: &PermTable) -> Vec<Vec<Complex64>> {
    let n = t.n;
    (0..=n).map(|k| block_means(&t.values, small_factorial(n - k))).collect()
}

/// Replaces each contiguous block of `size` entries by its mean.
pub(crate) fn block_means(v: &[Complex64], size: usize) -> Vec<Complex64> {
    v.chunks(size)
        .flat_map(|c| {
            let m = c.iter().sum::<Complex64>() / c.len() as f64;
            std::iter::repeat(m).take(c.len())
        })
        .collect()
}

/// Conditional diameter over contiguous blocks of `size` entries: the
/// largest per-block diameter. Real inputs use max − min; complex inputs
/// take the supremum over 360 equally spaced angles, a lower bound on the
/// continuous supremum.
pub(crate) fn block_diameter(v: &[Complex64], size: usize) -> f64 {
    let real = v.iter().all(|z| z.im == 0.0);
    v.chunks(size).map(|c| if real { real_range(c.iter().map(|z| z.re)) } else { complex_diameter(c) }).fold(0.0, f64::max)
}

fn real_range(it: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
    if lo.is_finite() {
        hi - lo
    } else {
        0.0
    }
}

/// Number of angles in the discretized complex diameter.
pub const DIAMETER_ANGLES: usize = 360;

pub fn complex_diameter(c: &[Complex64]) -> f64 {
    (0..DIAMETER_ANGLES)
        .map(|i| {
            let theta = -std::f64::consts::PI + 2.0 * std::f64::consts::PI * (i + 1) as f64 / DIAMETER_ANGLES as f64;
            let rot = Complex64::from_polar(1.0, -theta);
            real_range(c.iter().map(|z| (rot * z).re))
        })
        .fold(0.0, f64::max)
}

/// Both sides of the telescoping identity
/// `E_j (Z_n − Z_j)^2 = Σ_{k>j} E_j (Z_k − Z_{k−1})^2`, one pair per
/// prefix of length `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TelescopeReport {
    pub j: usize,
    pub lhs: Vec<Complex64>,
    pub rhs: Vec<Complex64>,
    pub max_abs_diff: f64,
}

pub fn telescope_check(t: &PermTable, j: usize) -> Result<TelescopeReport> {
    let n = t.n;
    if n > MAX_DOOB_N {
        return Err(Error::pre(format!("telescope check needs n <= {MAX_DOOB_N}")));
    }
    if j > n {
        return Err(Error::range(format!("j = {j} exceeds n = {n}")));
    }
    let z = doob(t);
    let size = small_factorial(n - j);
    let sq = |a: &[Complex64], b: &[Complex64]| -> Vec<Complex64> { a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).collect() };
    let pick = |v: Vec<Complex64>| -> Vec<Complex64> { block_means(&v, size).into_iter().step_by(size).collect() };
    let lhs = pick(sq(&z[n], &z[j]));
    let mut rhs = vec![Complex64::new(0.0, 0.0); lhs.len()];
    for k in j + 1..=n {
        for (r, v) in rhs.iter_mut().zip(pick(sq(&z[k], &z[k - 1]))) {
            *r += v;
        }
    }
    let max_abs_diff = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
    Ok(TelescopeReport { j, lhs, rhs, max_abs_diff })
}

/// One instance of a martingale-difference inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiameterCheck {
    pub j: usize,
    /// Zero for the first-order inequality.
    pub k: usize,
    pub diameter: f64,
    pub bound: f64,
}

impl DiameterCheck {
    pub fn slack(&self) -> f64 {
        self.bound - self.diameter
    }
}

/// Exact conditional diameters of the Doob martingale against their bounds:
/// `diam_{j−1} Z_j ≤ α_j` and `diam_{j−1} E_j (Z_k − Z_{k−1})^2 ≤ 2 α_k Δ_jk`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaPermReport {
    pub n: usize,
    pub first: Vec<DiameterCheck>,
    pub second: Vec<DiameterCheck>,
    /// False when `f` is complex and diameters come from the angle grid.
    pub diameters_exact: bool,
    pub violations: usize,
    pub min_slack: f64,
}

/// Relative tolerance for float comparisons of a diameter against a bound.
const CHECK_TOL: f64 = 1e-10;

pub fn lemma_perm_check(t: &PermTable) -> Result<LemmaPermReport> {
    let n = t.n;
    if n > MAX_DOOB_N {
        return Err(Error::pre(format!("exhaustive diameters need n <= {MAX_DOOB_N}")));
    }
    let s = table_alpha_delta(t);
    let z = doob(t);
    let mut first = Vec::new();
    let mut second = Vec::new();
    for j in 1..n {
        let outer = small_factorial(n - j + 1);
        first.push(DiameterCheck { j, k: 0, diameter: block_diameter(&z[j], outer), bound: s.alpha[j - 1] });
        for k in j + 1..n {
            let w: Vec<Complex64> = z[k].iter().zip(&z[k - 1]).map(|(a, b)| (a - b) * (a - b)).collect();
            let ej = block_means(&w, small_factorial(n - j));
            let bound = 2.0 * s.alpha[k - 1] * s.delta[j - 1][k - 1];
            second.push(DiameterCheck { j, k, diameter: block_diameter(&ej, outer), bound });
        }
    }
    let all = first.iter().chain(&second);
    let violations = all.clone().filter(|c| c.diameter > c.bound + CHECK_TOL * (1.0 + c.bound)).count();
    let min_slack = all.map(DiameterCheck::slack).fold(f64::INFINITY, f64::min);
    Ok(LemmaPermReport { n, first, second, diameters_exact: t.is_real(), violations, min_slack })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn linear(n: usize, u: Vec<f64>, v: Vec<f64>) -> PermTable {
        PermutationFunction::real(n, move |w| (0..n).map(|j| u[j] * v[w[j]]).sum()).tabulate().unwrap()
    }

    #[test]
    fn constant_function_has_zero_statistics() {
        let t = PermutationFunction::real(4, |_| 2.5).tabulate().unwrap();
        let s = table_alpha_delta(&t);
        assert!(s.alpha.iter().all(|&a| a == 0.0));
        assert!(s.delta.iter().flatten().all(|&d| d == 0.0));
        let rep = lemma_perm_check(&t).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.first.iter().all(|c| c.diameter == 0.0));
    }

    #[test]
    fn linear_identity_on_three() {
        let t = linear(3, vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]);
        let s = table_alpha_delta(&t);
        // ‖D^{(1 2)} f‖ = max |(u1 − u2)(v_{w1} − v_{w2})| = 2 and
        // ‖D^{(1 3)} f‖ = 4, so α_1 = (2 + 4)/2; α_2 = ‖D^{(2 3)} f‖ = 2.
        assert_eq!(s.alpha, vec![3.0, 2.0]);
        assert!(s.exact);
    }

    #[test]
    fn sampled_mode_is_a_lower_bound() {
        let f = PermutationFunction::real(6, |w| (w[0] * w[1] + w[2]) as f64 * 0.1);
        let exact = perm_alpha_delta(&f, Mode::Exhaustive).unwrap();
        let sampled = perm_alpha_delta(&f, Mode::Sampled { samples: 50, seed: 4 }).unwrap();
        assert!(!sampled.exact);
        for (s, e) in sampled.alpha.iter().zip(&exact.alpha) {
            assert!(s <= &(e + 1e-12));
        }
        for (rs, re) in sampled.delta.iter().zip(&exact.delta) {
            for (s, e) in rs.iter().zip(re) {
                assert!(s <= &(e + 1e-12));
            }
        }
    }

    #[test]
    fn telescope_identity() {
        let t = linear(4, vec![0.3, -1.0, 2.0, 0.5], vec![1.0, 0.0, -2.0, 0.7]);
        let rep = telescope_check(&t, 1).unwrap();
        assert!(rep.max_abs_diff < 1e-12);
        let last = telescope_check(&t, 3).unwrap();
        assert!(last.lhs.iter().chain(&last.rhs).all(|z| z.norm() < 1e-12));
        let nonlinear = PermutationFunction::new(5, |w| Complex64::new((w[0] * w[3]) as f64, w[4] as f64 * 0.5)).tabulate().unwrap();
        for j in 0..=5 {
            assert!(telescope_check(&nonlinear, j).unwrap().max_abs_diff < 1e-10);
        }
    }

    #[test]
    fn indicator_of_a_permutation_satisfies_diameter_bounds() {
        let t = PermutationFunction::real(4, |w| if w == [2, 0, 3, 1] { 1.0 } else { 0.0 }).tabulate().unwrap();
        let rep = lemma_perm_check(&t).unwrap();
        assert_eq!(rep.violations, 0);
        assert!(rep.diameters_exact);
    }

    #[test]
    fn complex_diameter_of_a_circle() {
        let pts: Vec<Complex64> = (0..8).map(|i| Complex64::from_polar(1.0, i as f64 * std::f64::consts::PI / 4.0)).collect();
        assert!((complex_diameter(&pts) - 2.0).abs() < 1e-9);
    }
}
