//! Moments of functions of a uniform random permutation `X` of `0..n`.
//!
//! Closed forms for the linear statistic `Ψ(X) = Σ_j u_j v_{X_j}` and the
//! pair products `E_jk(X) = (u_j + v_{X_j})(u_k + v_{X_k})`, a brute-force
//! oracle over all of `S_n`, and the leading moment expressions of the
//! permuted probability exponents with exact companions.

use std::thread;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::asymptotics::{
    induced_exponent_terms, proper_stats, require_prefix, require_spanning, subgraph_exponent_terms,
};
use crate::error::{Error, Result};
use crate::graph_model::{DegreeSequence, Graph};
use crate::martingale::{PermutationFunction, MAX_EXHAUSTIVE_N};
use crate::numeric::{csum, small_factorial, LexPermutations};
use crate::pattern_stats::{induced_moments, mixed_from_parts};

/// Weights `u`, `v` on `0..n` defining `Ψ` and `E_jk`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightPair {
    u: Vec<f64>,
    v: Vec<f64>,
}

impl WeightPair {
    pub fn new(u: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if u.len() != v.len() {
            return Err(Error::SizeMismatch(format!("|u| = {} but |v| = {}", u.len(), v.len())));
        }
        if u.is_empty() {
            return Err(Error::pre("weights must be nonempty"));
        }
        if u.iter().chain(&v).any(|x| !x.is_finite()) {
            return Err(Error::range("weights must be finite"));
        }
        Ok(Self { u, v })
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    pub fn v(&self) -> &[f64] {
        &self.v
    }

    pub fn u_bar(&self) -> f64 {
        csum(self.u.iter().copied()) / self.n() as f64
    }

    pub fn v_bar(&self) -> f64 {
        csum(self.v.iter().copied()) / self.n() as f64
    }

    /// `(max u − min u)(max v − min v)`.
    pub fn alpha(&self) -> f64 {
        range(&self.u) * range(&self.v)
    }

    /// `‖u‖ + ‖v‖` in the sup norm.
    pub fn norm(&self) -> f64 {
        sup(&self.u) + sup(&self.v)
    }

    pub fn psi(&self, sigma: &[usize]) -> f64 {
        csum(self.u.iter().zip(sigma).map(|(&a, &s)| a * self.v[s]))
    }

    pub fn ejk(&self, sigma: &[usize], j: usize, k: usize) -> f64 {
        (self.u[j] + self.v[sigma[j]]) * (self.u[k] + self.v[sigma[k]])
    }
}

fn range(x: &[f64]) -> f64 {
    let hi = x.iter().fold(f64::NEG_INFINITY, |m, &a| m.max(a));
    let lo = x.iter().fold(f64::INFINITY, |m, &a| m.min(a));
    hi - lo
}

fn sup(x: &[f64]) -> f64 {
    x.iter().fold(0.0f64, |m, &a| m.max(a.abs()))
}

fn same_n(w: &WeightPair, w2: &WeightPair) -> Result<()> {
    if w.n() != w2.n() {
        return Err(Error::SizeMismatch(format!("weight pairs have n = {} and {}", w.n(), w2.n())));
    }
    Ok(())
}

fn need_two(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::pre(format!("need n >= 2, got {n}")));
    }
    Ok(())
}

/// `Σ (x − x̄)(y − ȳ)`.
fn centered_dot(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (xb, yb) = (csum(x.iter().copied()) / n, csum(y.iter().copied()) / n);
    csum(x.iter().zip(y).map(|(a, b)| (a - xb) * (b - yb)))
}

/// `(E Ψ, Var Ψ) = (n ū v̄, Σ(u−ū)² Σ(v−v̄)² / (n−1))`.
pub fn psi_mean_var(w: &WeightPair) -> Result<(f64, f64)> {
    need_two(w.n())?;
    let nf = w.n() as f64;
    let mean = nf * w.u_bar() * w.v_bar();
    let var = centered_dot(&w.u, &w.u) * centered_dot(&w.v, &w.v) / (nf - 1.0);
    Ok((mean, var))
}

/// The same closed forms in exact rational arithmetic on the binary values
/// of the weights.
pub fn psi_mean_var_exact(w: &WeightPair) -> Result<(BigRational, BigRational)> {
    need_two(w.n())?;
    let u = rats(&w.u);
    let v = rats(&w.v);
    let n = int(w.n());
    let su: BigRational = u.iter().sum();
    let sv: BigRational = v.iter().sum();
    let mean = &su * &sv / &n;
    let var = rat_centered_sq(&u) * rat_centered_sq(&v) / (n - int(1));
    Ok((mean, var))
}

/// `Cov(Ψ, Ψ') = Σ(u−ū)(u'−ū') Σ(v−v̄)(v'−v̄') / (n−1)`.
pub fn psi_cov(w: &WeightPair, w2: &WeightPair) -> Result<f64> {
    same_n(w, w2)?;
    need_two(w.n())?;
    Ok(centered_dot(&w.u, &w2.u) * centered_dot(&w.v, &w2.v) / (w.n() as f64 - 1.0))
}

pub fn psi_cov_exact(w: &WeightPair, w2: &WeightPair) -> Result<BigRational> {
    same_n(w, w2)?;
    need_two(w.n())?;
    let dot = |x: &[f64], y: &[f64]| {
        let (x, y) = (rats(x), rats(y));
        let n = int(x.len());
        let xb = x.iter().sum::<BigRational>() / &n;
        let yb = y.iter().sum::<BigRational>() / &n;
        x.iter().zip(&y).map(|(a, b)| (a - &xb) * (b - &yb)).sum::<BigRational>()
    };
    Ok(dot(&w.u, &w2.u) * dot(&w.v, &w2.v) / (int(w.n()) - int(1)))
}

fn check_pair(n: usize, j: usize, k: usize) -> Result<()> {
    if j == k {
        return Err(Error::pre(format!("indices must differ, got j = k = {j}")));
    }
    if j >= n || k >= n {
        return Err(Error::range(format!("indices ({j}, {k}) must lie in 0..{n}")));
    }
    Ok(())
}

/// `E E_jk = (u_j + v̄)(u_k + v̄) − Σ(v−v̄)² / (n(n−1))`, indices 0-based.
pub fn ejk_mean(w: &WeightPair, j: usize, k: usize) -> Result<f64> {
    check_pair(w.n(), j, k)?;
    let nf = w.n() as f64;
    let vb = w.v_bar();
    Ok((w.u[j] + vb) * (w.u[k] + vb) - centered_dot(&w.v, &w.v) / (nf * (nf - 1.0)))
}

pub fn ejk_mean_exact(w: &WeightPair, j: usize, k: usize) -> Result<BigRational> {
    check_pair(w.n(), j, k)?;
    let u = rats(&w.u);
    let v = rats(&w.v);
    let n = int(w.n());
    let vb: BigRational = v.iter().sum::<BigRational>() / &n;
    let head = (&u[j] + &vb) * (&u[k] + &vb);
    Ok(head - rat_centered_sq(&v) / (&n * (&n - int(1))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairClass {
    Overlapping,
    Disjoint,
}

/// `Cov(E_jk, E_lm)` by brute force, with the size it is expected to have:
/// `(‖u‖+‖v‖)⁴ / n` for disjoint pairs and `(‖u‖+‖v‖)⁴` otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EjkCov {
    pub covariance: f64,
    pub class: PairClass,
    pub scale: f64,
    /// `covariance / scale`, which should stay bounded as `n` grows.
    pub scaled: f64,
}

pub fn ejk_cov_bounds(w: &WeightPair, j: usize, k: usize, l: usize, m: usize) -> Result<EjkCov> {
    check_pair(w.n(), j, k)?;
    check_pair(w.n(), l, m)?;
    let a = PermutationFunction::real(w.n(), |s| w.ejk(s, j, k));
    let b = PermutationFunction::real(w.n(), |s| w.ejk(s, l, m));
    let covariance = brute_force_moments(&a, Some(&b))?.cov.expect("second function given");
    let disjoint = j != l && j != m && k != l && k != m;
    let class = if disjoint { PairClass::Disjoint } else { PairClass::Overlapping };
    let base = w.norm().powi(4);
    let scale = if disjoint { base / w.n() as f64 } else { base };
    let scaled = if scale > 0.0 { covariance / scale } else { 0.0 };
    Ok(EjkCov { covariance, class, scale, scaled })
}

/// Leading term of `Cov(E_jk, Ψ')`:
/// `((u'_j−ū')(u_k+v̄) + (u'_k−ū')(u_j+v̄)) Σ(v−v̄)(v'−v̄') / n`.
pub fn ejk_psi_cov(w: &WeightPair, j: usize, k: usize, w2: &WeightPair) -> Result<f64> {
    same_n(w, w2)?;
    check_pair(w.n(), j, k)?;
    let nf = w.n() as f64;
    let (vb, ub2) = (w.v_bar(), w2.u_bar());
    let head = (w2.u[j] - ub2) * (w.u[k] + vb) + (w2.u[k] - ub2) * (w.u[j] + vb);
    Ok(head * centered_dot(&w.v, &w2.v) / nf)
}

/// The exact `Cov(E_jk, Ψ')` over all of `S_n`.
pub fn ejk_psi_cov_exact(w: &WeightPair, j: usize, k: usize, w2: &WeightPair) -> Result<f64> {
    same_n(w, w2)?;
    check_pair(w.n(), j, k)?;
    let a = PermutationFunction::real(w.n(), |s| w.ejk(s, j, k));
    let b = PermutationFunction::real(w.n(), |s| w2.psi(s));
    Ok(brute_force_moments(&a, Some(&b))?.cov.expect("second function given"))
}

/// `L = ln E e^Ψ − (EΨ + VarΨ/2)` against `1.5 n α³ + 11 n α⁴`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PsiMgfCheck {
    pub log_exp_mean: f64,
    pub l: f64,
    pub bound: f64,
}

impl PsiMgfCheck {
    pub fn holds(&self) -> bool {
        self.l.abs() <= self.bound * (1.0 + 1e-9) + 1e-12
    }
}

pub fn psi_mgf_check(w: &WeightPair) -> Result<PsiMgfCheck> {
    let (mean, var) = psi_mean_var(w)?;
    let f = PermutationFunction::real(w.n(), |s| w.psi(s));
    let log_exp_mean = brute_force_moments(&f, None)?.log_exp_mean;
    let nf = w.n() as f64;
    let a = w.alpha();
    Ok(PsiMgfCheck { log_exp_mean, l: log_exp_mean - mean - var / 2.0, bound: 1.5 * nf * a.powi(3) + 11.0 * nf * a.powi(4) })
}

/// Exact rational moments over `S_n` of the binary values of `f` (and `g`).
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMoments {
    pub mean: BigRational,
    pub var: BigRational,
    pub cov: Option<BigRational>,
}

/// Brute-force moments over all of `S_n`: floats rounded from the exact
/// rational values, and `E e^f` by a compensated log-sum-exp.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BruteMoments {
    pub n: usize,
    pub mean: f64,
    pub var: f64,
    pub cov: Option<f64>,
    pub exp_mean: f64,
    pub log_exp_mean: f64,
    #[serde(skip)]
    pub exact: ExactMoments,
}

/// `E f`, `Var f`, `Cov(f, g)` and `E e^f` for `X` uniform on `S_n`, `n <= 8`.
///
/// Sums run in exact rational arithmetic, split over the `n` blocks of
/// permutations sharing a first entry and reduced in a fixed order.
pub fn brute_force_moments(f: &PermutationFunction, g: Option<&PermutationFunction>) -> Result<BruteMoments> {
    let n = f.n();
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::BudgetExceeded(format!("brute force over S_n needs n <= {MAX_EXHAUSTIVE_N}, got {n}")));
    }
    if let Some(g) = g {
        if g.n() != n {
            return Err(Error::SizeMismatch(format!("functions on S_{n} and S_{}", g.n())));
        }
    }
    let real = |z: num_complex::Complex64| {
        if z.im != 0.0 || !z.re.is_finite() {
            Err(Error::pre("brute-force moments need finite real values"))
        } else {
            Ok(z.re)
        }
    };
    let mut fv = Vec::with_capacity(small_factorial(n));
    let mut gv = Vec::with_capacity(if g.is_some() { fv.capacity() } else { 0 });
    for w in LexPermutations::new(n) {
        fv.push(real(f.evaluate(&w))?);
        if let Some(g) = g {
            gv.push(real(g.evaluate(&w))?);
        }
    }
    let total = fv.len();
    let exact = exact_moments(n, &fv, if gv.is_empty() { None } else { Some(&gv) });

    let top = fv.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x));
    let scaled = csum(fv.iter().map(|&x| (x - top).exp())) / total as f64;
    let log_exp_mean = top + scaled.ln();
    Ok(BruteMoments {
        n,
        mean: to_f64(&exact.mean),
        var: to_f64(&exact.var),
        cov: exact.cov.as_ref().map(to_f64),
        exp_mean: log_exp_mean.exp(),
        log_exp_mean,
        exact,
    })
}

/// Per-block sums `(Σf, Σf², Σg, Σfg)`.
type Sums = [BigRational; 4];

fn exact_moments(n: usize, fv: &[f64], gv: Option<&[f64]>) -> ExactMoments {
    let total = fv.len();
    // Lexicographic order puts each first-entry class in one contiguous block.
    let blocks = n.max(1);
    let size = total / blocks;
    let partial: Vec<Sums> = thread::scope(|s| {
        let handles: Vec<_> = (0..blocks)
            .map(|b| {
                let lo = (b * size).min(total);
                let hi = ((b + 1) * size).min(total);
                s.spawn(move || block_sums(&fv[lo..hi], gv.map(|g| &g[lo..hi])))
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("moment worker panicked")).collect()
    });
    let mut acc: Sums = std::array::from_fn(|_| BigRational::zero());
    for p in partial {
        for (a, x) in acc.iter_mut().zip(p) {
            *a += x;
        }
    }
    let nt = int(total);
    let [sf, sff, sg, sfg] = acc.map(|x| x / &nt);
    let var = &sff - &sf * &sf;
    let cov = gv.map(|_| &sfg - &sf * &sg);
    ExactMoments { mean: sf, var, cov }
}

fn block_sums(f: &[f64], g: Option<&[f64]>) -> Sums {
    let mut acc: Sums = std::array::from_fn(|_| BigRational::zero());
    for (i, &x) in f.iter().enumerate() {
        let a = rat(x);
        acc[1] += &a * &a;
        if let Some(g) = g {
            let b = rat(g[i]);
            acc[3] += &a * &b;
            acc[2] += b;
        }
        acc[0] += a;
    }
    acc
}

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite value")
}

fn rats(x: &[f64]) -> Vec<BigRational> {
    x.iter().map(|&a| rat(a)).collect()
}

fn int(n: usize) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rat_centered_sq(x: &[BigRational]) -> BigRational {
    let n = int(x.len());
    let mean: BigRational = x.iter().sum::<BigRational>() / &n;
    x.iter().map(|a| (a - &mean) * (a - &mean)).sum()
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Leading expressions for the permuted subgraph exponent `f_h + g_H`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SubgraphExponentMoments {
    /// `(1−λ)/(4λ)(μ₁²+2μ₁−2μ₂) − (1−λ²)μ₃/(6λ²n) − Rμ₁/(2λ²n)`, exact.
    pub ef: f64,
    /// `−(1−λ)/(λn²) Σ_{jk∈H} h_j h_k`.
    pub eg: f64,
    /// `R(μ₂−μ₁²)/(λ²n)`.
    pub var: f64,
    /// `eg + mR/(λ(1−λ)n²(n−1))`, the exact value of `E g`.
    pub eg_closed_form: f64,
}

pub fn subgraph_exponent_moments(d: &DegreeSequence, h: &Graph) -> Result<SubgraphExponentMoments> {
    require_spanning(d, h)?;
    let s = proper_stats(d)?;
    let (nf, lam, r) = (s.nf(), s.lambda, s.spread);
    let hd: Vec<f64> = h.degrees().iter().map(|&x| x as f64).collect();
    let mu = |t: i32| csum(hd.iter().map(|x| x.powi(t))) / nf;
    let (mu1, mu2, mu3) = (mu(1), mu(2), mu(3));
    let hh = csum(h.edges().iter().map(|&(j, k)| hd[j] * hd[k]));
    let ef = (1.0 - lam) / (4.0 * lam) * (mu1 * mu1 + 2.0 * mu1 - 2.0 * mu2)
        - (1.0 - lam * lam) / (6.0 * lam * lam * nf) * mu3
        - r * mu1 / (2.0 * lam * lam * nf);
    let eg = -(1.0 - lam) / (lam * nf * nf) * hh;
    let var = r / (lam * lam * nf) * (mu2 - mu1 * mu1);
    let m = h.edge_count() as f64;
    let eg_closed_form = eg + m * r / (lam * (1.0 - lam) * nf * nf * (nf - 1.0));
    Ok(SubgraphExponentMoments { ef, eg, var, eg_closed_form })
}

/// Leading expressions for the permuted induced exponent `f_ind`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InducedExponentMoments {
    pub ef: f64,
    pub var: f64,
}

pub fn induced_exponent_moments(d: &DegreeSequence, hr: &Graph) -> Result<InducedExponentMoments> {
    require_prefix(d, hr)?;
    let s = proper_stats(d)?;
    let (nf, lam, big_r) = (s.nf(), s.lambda, s.spread);
    let q = lam * (1.0 - lam);
    let om = induced_moments(hr, lam)?;
    let rf = om.r as f64;
    let (w1, w2, w3) = (om.omega(1), om.omega(2), om.omega(3));
    let c = 1.0 - 2.0 * lam;
    let n2 = nf * nf;
    let ef = -w2 / (2.0 * q * nf) + rf * rf / (2.0 * nf) + c * w1 / (2.0 * q * nf)
        - w1 * w1 / (4.0 * q * n2)
        - rf * rf * big_r / (2.0 * q * n2)
        - rf * w2 / (2.0 * q * n2)
        - c * w3 / (6.0 * q * q * n2)
        - c * big_r * w1 / (2.0 * q * q * n2);
    let dev3 = csum(d.degrees().iter().map(|&x| (x as f64 - s.mean_degree).powi(3)));
    let var = big_r * w2 / (q * q * n2) - rf * w1 * dev3 / (q * q * n2 * n2);
    Ok(InducedExponentMoments { ef, var })
}

/// One leading expression against its exact value. `dropped` is the summed
/// magnitude of the contributions the leading expression leaves out,
/// evaluated at this `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentCheck {
    pub name: String,
    pub leading: f64,
    pub exact: f64,
    pub residual: f64,
    pub dropped: f64,
}

impl MomentCheck {
    fn new(name: &str, leading: f64, exact: f64, dropped: f64) -> Self {
        Self { name: name.into(), leading, exact, residual: exact - leading, dropped }
    }

    pub fn within(&self) -> bool {
        self.residual.abs() <= self.dropped * (1.0 + 1e-9) + 1e-11 * (1.0 + self.exact.abs() + self.leading.abs())
    }
}

/// Exact means and covariance matrix of several functions on `S_n`, and the
/// exact moments of a separately computed total.
struct PieceMoments {
    means: Vec<f64>,
    cov: Vec<Vec<f64>>,
    total: BruteMoments,
}

fn piece_moments(n: usize, k: usize, pieces: impl Fn(&[usize], &mut [f64]), total: impl Fn(&[usize]) -> f64) -> Result<PieceMoments> {
    if n > MAX_EXHAUSTIVE_N {
        return Err(Error::BudgetExceeded(format!("brute force over S_n needs n <= {MAX_EXHAUSTIVE_N}, got {n}")));
    }
    let mut rows = Vec::with_capacity(small_factorial(n));
    let mut buf = vec![0.0; k];
    for w in LexPermutations::new(n) {
        pieces(&w, &mut buf);
        rows.push(buf.clone());
    }
    let nt = rows.len() as f64;
    let means: Vec<f64> = (0..k).map(|i| csum(rows.iter().map(|r| r[i])) / nt).collect();
    let cov = (0..k)
        .map(|i| (0..k).map(|l| csum(rows.iter().map(|r| (r[i] - means[i]) * (r[l] - means[l]))) / nt).collect())
        .collect();
    let total = brute_force_moments(&PermutationFunction::real(n, total), None)?;
    Ok(PieceMoments { means, cov, total })
}

/// Sum of `|C_il|` over all pairs except those listed as kept.
fn off_kept(cov: &[Vec<f64>], kept: &[(usize, usize)]) -> f64 {
    let mut s = Vec::new();
    for (i, row) in cov.iter().enumerate() {
        for (l, &c) in row.iter().enumerate() {
            if !kept.contains(&(i, l)) {
                s.push(c.abs());
            }
        }
    }
    csum(s)
}

/// Leading `E f`, `E g`, `Var(f+g)` against brute force over `S_n`.
///
/// `f + g` splits as a constant plus four random pieces: `Σ dev h/(λn)`,
/// `Σ dev h²/(2λ²n²)`, `−Σ dev² h/(2λ²n²)` and `g`. The variance keeps only
/// the first piece's variance, so everything else is counted as dropped.
pub fn subgraph_exponent_check(d: &DegreeSequence, h: &Graph) -> Result<Vec<MomentCheck>> {
    let lead = subgraph_exponent_moments(d, h)?;
    let s = proper_stats(d)?;
    let n = d.len();
    let (nf, lam) = (s.nf(), s.lambda);
    let hd = h.degrees();
    let hf: Vec<f64> = hd.iter().map(|&x| x as f64).collect();
    let edges = h.edges().to_vec();
    let dev = |w: &[usize]| -> Vec<f64> { w.iter().map(|&v| d.degrees()[v] as f64 - s.mean_degree).collect() };
    let pm = piece_moments(
        n,
        4,
        |w, out| {
            let t = subgraph_exponent_terms(lam, &dev(w), &hd, &edges);
            for (o, (_, x)) in out.iter_mut().zip(&t[2..]) {
                *o = *x;
            }
        },
        |w| csum(subgraph_exponent_terms(lam, &dev(w), &hd, &edges).iter().map(|t| t.1)),
    )?;
    let constant = {
        let t = subgraph_exponent_terms(lam, &vec![0.0; n], &hd, &edges);
        t[0].1 + t[1].1
    };
    let ef_exact = constant + pm.means[0] + pm.means[1] + pm.means[2];
    let eg_exact = pm.means[3];
    let m = edges.len() as f64;
    let eg_dropped = m * s.spread / (lam * (1.0 - lam) * nf * nf * (nf - 1.0));
    let var_p1 = s.spread * (csum(hf.iter().map(|x| x * x)) - csum(hf.iter().copied()).powi(2) / nf)
        / (lam * lam * nf * (nf - 1.0));
    let var_dropped = (var_p1 - lead.var).abs() + off_kept(&pm.cov, &[(0, 0)]);
    Ok(vec![
        MomentCheck::new("E f", lead.ef, ef_exact, 0.0),
        MomentCheck::new("E g", lead.eg, eg_exact, eg_dropped),
        MomentCheck::new("Var(f+g)", lead.var, pm.total.var, var_dropped),
    ])
}

/// Leading `E f_ind` and `Var f_ind` against brute force over `S_n`.
///
/// The random part of `f_ind` splits into the monomials
/// `ω₁₁/(qn)`, `ω₁₀ω₀₁/(qn²)`, `−ω₁₀²/(2qn²)`, `rω₁₁/(qn²)`, `−rω₂₀/(2qn²)`,
/// `−(1−2λ)ω₂₁/(2q²n²)` and `(1−2λ)ω₁₂/(2q²n²)` with `q = λ(1−λ)`. The
/// mean drops `E(−ω₁₀²)/(2qn²)`; the variance keeps the first monomial's
/// variance and its covariance with the fifth.
pub fn induced_exponent_check(d: &DegreeSequence, hr: &Graph) -> Result<Vec<MomentCheck>> {
    let lead = induced_exponent_moments(d, hr)?;
    let s = proper_stats(d)?;
    let n = d.len();
    let r = hr.vertex_count();
    let (nf, lam, rf) = (s.nf(), s.lambda, r as f64);
    let q = lam * (1.0 - lam);
    let c = 1.0 - 2.0 * lam;
    let hd = hr.degrees();
    let dev = |w: &[usize]| -> Vec<f64> { w[..r].iter().map(|&v| d.degrees()[v] as f64 - s.mean_degree).collect() };
    let pm = piece_moments(
        n,
        7,
        |w, out| {
            let mm = mixed_from_parts(&hd, &dev(w), lam);
            let o = |a: usize, b: usize| mm.get(a, b);
            out.copy_from_slice(&[
                o(1, 1) / (q * nf),
                o(1, 0) * o(0, 1) / (q * nf * nf),
                -o(1, 0) * o(1, 0) / (2.0 * q * nf * nf),
                rf * o(1, 1) / (q * nf * nf),
                -rf * o(2, 0) / (2.0 * q * nf * nf),
                -c * o(2, 1) / (2.0 * q * q * nf * nf),
                c * o(1, 2) / (2.0 * q * q * nf * nf),
            ]);
        },
        |w| csum(induced_exponent_terms(&mixed_from_parts(&hd, &dev(w), lam), r, n, lam).iter().map(|t| t.1)),
    )?;
    let ef_dropped = rf * (nf - rf) * s.spread / ((nf - 1.0) * 2.0 * q * nf * nf);
    let kept = pm.cov[0][0] + pm.cov[0][4] + pm.cov[4][0];
    let var_dropped = (kept - lead.var).abs() + off_kept(&pm.cov, &[(0, 0), (0, 4), (4, 0)]);
    Ok(vec![
        MomentCheck::new("E f_ind", lead.ef, pm.total.mean, ef_dropped),
        MomentCheck::new("Var f_ind", lead.var, pm.total.var, var_dropped),
    ])
}
