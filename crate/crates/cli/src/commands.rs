//! One handler per subcommand. Each returns a JSON body that `run` prefixes
//! with the command path and the seed.

use std::path::Path;
use std::str::FromStr;

use num_complex::Complex64;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use degseq_core::asymptotics::{self, Config, ExponentReport};
use degseq_core::graph_model::{check_assumptions, is_graphical, read_degrees, read_graph};
use degseq_core::martingale::{discrete_check, lemma_perm_check, perm_check, PermutationFunction, Support};
use degseq_core::moments::{self, to_f64, WeightPair};
use degseq_core::numeric::{perm_rank, LexPermutations};
use degseq_core::oracle::{self, Method, OracleConfig, MAX_COUNT_N};
use degseq_core::tree_tools::{self, TreeDegreeSequence};
use degseq_core::{DegreeSequence, Error, Graph, Result};

use crate::{Cli, Command, CompareArgs, ExpectCmd, Family, MartingaleCmd, MethodArg, MomentsArgs, MomentsCmd, OracleCmd, ProbCmd, TreesCmd};

pub struct Outcome {
    pub report: Value,
    /// False when a verification suite found a violation.
    pub ok: bool,
}

fn value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("core reports serialize to JSON")
}

fn load_d(p: &Path) -> Result<DegreeSequence> {
    read_degrees(p)
}

fn load_g(p: &Path) -> Result<Graph> {
    read_graph(p)
}

fn parse_list<T: FromStr>(s: &str) -> Result<Vec<T>> {
    s.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|_| Error::Parse(format!("`{t}` in `{s}`"))))
        .collect()
}

fn rational(x: &BigRational) -> Value {
    json!({ "numerator": x.numer().to_string(), "denominator": x.denom().to_string(), "value": to_f64(x) })
}

fn exponent(r: &ExponentReport) -> Value {
    let mut v = value(r);
    v.as_object_mut().expect("struct").insert("value".into(), json!(r.value()));
    v
}

fn method(m: MethodArg) -> Method {
    match m {
        MethodArg::Auto => Method::Auto,
        MethodArg::Enumeration => Method::Enumeration,
        MethodArg::Counting => Method::Counting,
    }
}

struct Ctx {
    cfg: Config,
    budget: u128,
    seed: u64,
    a: f64,
    eps: f64,
}

fn validate(cli: &Cli) -> Result<Ctx> {
    if !(cli.a.is_finite() && cli.a > 0.0) {
        return Err(Error::OutOfRange(format!("--a must be positive, got {}", cli.a)));
    }
    if !(cli.b.is_finite() && cli.b > 0.0) {
        return Err(Error::OutOfRange(format!("--b must be positive, got {}", cli.b)));
    }
    if !(cli.eps > 0.0 && cli.eps < 0.5) {
        return Err(Error::OutOfRange(format!("--eps must lie in (0, 1/2), got {}", cli.eps)));
    }
    let budget = cli.budget.unwrap_or(oracle::DEFAULT_BUDGET);
    if budget == 0 {
        return Err(Error::OutOfRange("--budget must be at least 1".into()));
    }
    let cfg = Config { b: cli.b, eps: cli.eps, ..Config::default() };
    Ok(Ctx { cfg, budget, seed: cli.seed, a: cli.a, eps: cli.eps })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    let ctx = validate(cli)?;
    let (name, body, ok) = match &cli.command {
        Command::Stats(s) => ("stats", stats(&ctx, s)?, true),
        Command::Expect(c) => expect(&ctx, c)?,
        Command::Prob(c) => prob(&ctx, c)?,
        Command::Oracle(c) => oracle_cmd(&ctx, c)?,
        Command::Martingale(MartingaleCmd::Verify { trials, max_n }) => {
            let (b, ok) = martingale_verify(&ctx, *trials, *max_n)?;
            ("martingale verify", b, ok)
        }
        Command::Moments(MomentsCmd::Verify(m)) => {
            let (b, ok) = moments_verify(m)?;
            ("moments verify", b, ok)
        }
        Command::Trees(c) => trees(&ctx, c)?,
        Command::Compare(c) => ("compare", compare(&ctx, c)?, true),
    };
    let mut m = Map::new();
    m.insert("command".into(), json!(name));
    m.insert("seed".into(), json!(ctx.seed));
    match body {
        Value::Object(b) => m.extend(b),
        other => {
            m.insert("result".into(), other);
        }
    }
    Ok(Outcome { report: Value::Object(m), ok })
}

fn stats(ctx: &Ctx, s: &crate::StatsArgs) -> Result<Value> {
    let d = load_d(&s.d.degrees)?;
    let st = d.stats()?;
    let mut a = check_assumptions(&d, ctx.a, ctx.eps)?;
    if let Some(p) = &s.subgraph_pattern {
        a = a.with_subgraph_pattern(&st, &load_g(p)?.degrees());
    }
    if let Some(p) = &s.induced_pattern {
        a = a.with_induced_pattern(&st, &load_g(p)?.degrees());
    }
    Ok(json!({
        "n": st.n,
        "degree_sum": d.sum(),
        "graphical": is_graphical(&d),
        "regular": d.is_regular(),
        "stats": value(&st),
        "assumptions": value(&a),
    }))
}

type Named = (&'static str, Value, bool);

fn expect(ctx: &Ctx, c: &ExpectCmd) -> Result<Named> {
    let cfg = &ctx.cfg;
    let (name, r) = match c {
        ExpectCmd::Subgraph { p, simplified } => {
            let (d, h) = (load_d(&p.d.degrees)?, load_g(&p.pattern)?);
            let r = if *simplified { cfg.expected_subgraph_count_simplified(&d, &h)? } else { cfg.expected_subgraph_count(&d, &h)? };
            ("expect subgraph", r)
        }
        ExpectCmd::Induced { p, simplified } => {
            let (d, h) = (load_d(&p.d.degrees)?, load_g(&p.pattern)?);
            let r = if *simplified { cfg.expected_induced_simplified(&d, &h)? } else { cfg.expected_induced_count(&d, &h)? };
            ("expect induced", r)
        }
        ExpectCmd::Trees(a) => ("expect trees", asymptotics::expected_spanning_trees(&load_d(&a.degrees)?)?),
        ExpectCmd::Clique { d, r, independent } => {
            ("expect clique", cfg.expected_clique_count(&load_d(&d.degrees)?, *r, *independent)?)
        }
        ExpectCmd::Factor { d, h, pattern } => {
            let d = load_d(&d.degrees)?;
            let r = match pattern {
                Some(p) => cfg.expected_regular_factor(&d, &load_g(p)?, *h)?,
                None => cfg.expected_total_regular_factors(&d, *h)?,
            };
            ("expect factor", r)
        }
    };
    Ok((name, exponent(&r), true))
}

fn prob(ctx: &Ctx, c: &ProbCmd) -> Result<Named> {
    let cfg = &ctx.cfg;
    let (name, p) = match c {
        ProbCmd::Subgraph(p) => ("prob subgraph", p),
        ProbCmd::Induced(p) => ("prob induced", p),
        ProbCmd::Tree(p) => ("prob tree", p),
    };
    let (d, h) = (load_d(&p.d.degrees)?, load_g(&p.pattern)?);
    let r = match c {
        ProbCmd::Subgraph(_) => cfg.subgraph_probability(&d, &h)?,
        ProbCmd::Induced(_) => cfg.induced_probability(&d, &h)?,
        ProbCmd::Tree(_) => cfg.tree_probability(&d, &h)?,
    };
    Ok((name, exponent(&r), true))
}

fn default_steps(d: &DegreeSequence) -> u64 {
    20 * (d.sum() as u64 / 2).max(1)
}

fn oracle_cmd(ctx: &Ctx, c: &OracleCmd) -> Result<Named> {
    let body = match c {
        OracleCmd::Enumerate { d, count_only } => {
            let d = load_d(&d.degrees)?;
            if *count_only {
                let count = oracle::count_realizations(d.degrees())?;
                return Ok(("oracle enumerate", json!({ "realization_count": count.to_string() }), true));
            }
            let graphs = oracle::enumerate_realizations(&d, ctx.budget)?;
            let listed: Vec<Vec<[usize; 2]>> =
                graphs.iter().map(|g| g.edges().iter().map(|&(u, v)| [u + 1, v + 1]).collect()).collect();
            return Ok(("oracle enumerate", json!({ "realization_count": graphs.len().to_string(), "graphs": listed }), true));
        }
        OracleCmd::Expect { d, pattern, induced, trees, method: m } => {
            let d = load_d(&d.degrees)?;
            let oc = OracleConfig { budget: ctx.budget, method: method(*m) };
            let r = match (trees, pattern) {
                (true, _) => oc.expected_spanning_trees(&d)?,
                (false, Some(p)) => oc.expected_copies(&d, &load_g(p)?, *induced)?,
                (false, None) => return Err(Error::Precondition("oracle expect needs --pattern or --trees".into())),
            };
            ("oracle expect", value(&r))
        }
        OracleCmd::Prob { p, induced, method: m } => {
            let (d, h) = (load_d(&p.d.degrees)?, load_g(&p.pattern)?);
            let oc = OracleConfig { budget: ctx.budget, method: method(*m) };
            ("oracle prob", value(&oc.pattern_probability(&d, &h, *induced)?))
        }
        OracleCmd::Mcmc { p, induced, samples, steps } => {
            let (d, h) = (load_d(&p.d.degrees)?, load_g(&p.pattern)?);
            let steps = steps.unwrap_or_else(|| default_steps(&d));
            ("oracle mcmc", value(&oracle::mc_expected_copies(&d, &h, *induced, *samples, steps, ctx.seed)?))
        }
    };
    Ok((body.0, body.1, true))
}

fn hashed(seed: u64, x: &[usize]) -> f64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for &v in x {
        h = (h ^ v as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h ^= h >> 31;
    }
    (h >> 11) as f64 / (1u64 << 52) as f64 - 1.0
}

/// Linear, quadratic-assignment or unstructured values on `S_n`, scaled.
fn random_values(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let scale = rng.gen_range(0.02..1.2);
    let kind = rng.gen_range(0..3);
    let a: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let b: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let c: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let seed = rng.gen();
    LexPermutations::new(n)
        .map(|w| {
            let lin: f64 = (0..n).map(|j| a[j] * b[w[j]]).sum();
            let v = match kind {
                0 => lin,
                1 => {
                    lin + (0..n)
                        .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
                        .map(|(j, k)| c[w[j] * n + w[k]] * a[j] * a[k])
                        .sum::<f64>()
                }
                _ => hashed(seed, &w),
            };
            scale * v
        })
        .collect()
}

fn martingale_verify(ctx: &Ctx, trials: usize, max_n: usize) -> Result<(Value, bool)> {
    if !(3..=6).contains(&max_n) {
        return Err(Error::OutOfRange(format!("--max-n must lie in 3..=6, got {max_n}")));
    }
    if trials == 0 {
        return Err(Error::OutOfRange("--trials must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    let table = |vals: Vec<f64>, n: usize| PermutationFunction::real(n, move |w| vals[perm_rank(w)]).tabulate();

    let mut perm_bad = 0;
    for i in 0..trials {
        let n = 3 + i % (max_n - 2);
        if !perm_check(&table(random_values(&mut rng, n), n)?).sound() {
            perm_bad += 1;
        }
    }

    let supports = [
        Support::Subset { n: 8, m: 3 },
        Support::Subset { n: 10, m: 4 },
        Support::Hypergeometric { sizes: vec![3, 4, 5], m: 4 },
        Support::Multinomial { probs: vec![0.2, 0.3, 0.5], m: 6 },
    ];
    let mut disc_bad = 0;
    for i in 0..trials {
        let s = &supports[i % supports.len()];
        let scale = rng.gen_range(0.02..1.0);
        let lin: Vec<f64> = (0..12).map(|_| rng.gen_range(-0.5..0.5)).collect();
        let fseed: u64 = rng.gen();
        let mix = rng.gen_range(0.0..1.0);
        let f = move |x: &[usize]| {
            let l: f64 = x.iter().zip(&lin).map(|(&a, w)| a as f64 * w).sum();
            Complex64::new(scale * ((1.0 - mix) * l + mix * hashed(fseed, x)), 0.0)
        };
        if !discrete_check(s, &f)?.sound() {
            disc_bad += 1;
        }
    }

    let doob_trials = trials.div_ceil(4);
    let (mut doob_bad, mut min_slack) = (0, f64::INFINITY);
    for i in 0..doob_trials {
        let n = 3 + i % 3;
        let r = lemma_perm_check(&table(random_values(&mut rng, n), n)?)?;
        doob_bad += r.violations;
        min_slack = min_slack.min(r.min_slack);
    }

    let mut mgf_bad = 0;
    for i in 0..trials {
        let n = 2 + i % 6;
        let s = rng.gen_range(0.05..1.0);
        let u: Vec<f64> = (0..n).map(|_| s * rng.gen_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..n).map(|_| s * rng.gen_range(-1.0..1.0)).collect();
        if !moments::psi_mgf_check(&WeightPair::new(u, v)?)?.holds() {
            mgf_bad += 1;
        }
    }

    let ok = perm_bad + disc_bad + doob_bad + mgf_bad == 0;
    let body = json!({
        "permutations": { "functions": trials, "max_n": max_n, "violations": perm_bad },
        "discrete": { "functions": trials, "violations": disc_bad },
        "doob": { "functions": doob_trials, "violations": doob_bad, "min_slack": min_slack },
        "linear_statistic": { "trials": trials, "violations": mgf_bad },
        "sound": ok,
    });
    Ok((body, ok))
}

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs()))
}

fn identity_row(name: &str, closed: f64, exact: &BigRational) -> (Value, bool) {
    let ok = close(closed, to_f64(exact));
    (json!({ "name": name, "closed_form": closed, "exact": rational(exact), "agrees": ok }), ok)
}

fn weights(u: &str, v: &str) -> Result<WeightPair> {
    WeightPair::new(parse_list(u)?, parse_list(v)?)
}

fn moments_verify(m: &MomentsArgs) -> Result<(Value, bool)> {
    if let (Some(dp), Some(hp)) = (&m.degrees, &m.pattern) {
        let (d, h) = (load_d(dp)?, load_g(hp)?);
        let checks = if m.induced { moments::induced_exponent_check(&d, &h)? } else { moments::subgraph_exponent_check(&d, &h)? };
        let ok = checks.iter().all(|c| c.within());
        let rows: Vec<Value> = checks
            .iter()
            .map(|c| {
                let mut v = value(c);
                v.as_object_mut().expect("struct").insert("within".into(), json!(c.within()));
                v
            })
            .collect();
        return Ok((json!({ "exponent": if m.induced { "induced" } else { "subgraph" }, "rows": rows, "all_within": ok }), ok));
    }
    let (Some(u), Some(v)) = (&m.u, &m.v) else {
        return Err(Error::Precondition("moments verify needs --u/--v or --degrees/--pattern".into()));
    };
    let w = weights(u, v)?;
    let mut rows = Vec::new();
    let mut ok = true;
    let mut push = |(row, good): (Value, bool)| {
        ok &= good;
        rows.push(row);
    };
    let (mean, var) = moments::psi_mean_var(&w)?;
    let (emean, evar) = moments::psi_mean_var_exact(&w)?;
    push(identity_row("E psi", mean, &emean));
    push(identity_row("Var psi", var, &evar));
    let w2 = match (&m.u2, &m.v2) {
        (Some(u2), Some(v2)) => Some(weights(u2, v2)?),
        _ => None,
    };
    if let Some(w2) = &w2 {
        push(identity_row("Cov(psi, psi2)", moments::psi_cov(&w, w2)?, &moments::psi_cov_exact(&w, w2)?));
    }
    let mut body = Map::new();
    if let Some(pair) = &m.pair {
        let jk: Vec<usize> = parse_list(pair)?;
        let [j, k] = jk[..] else {
            return Err(Error::Parse(format!("--pair expects `j,k`, got `{pair}`")));
        };
        if j == 0 || k == 0 {
            return Err(Error::OutOfRange("--pair positions are 1-based".into()));
        }
        let (j, k) = (j - 1, k - 1);
        push(identity_row("E e_jk", moments::ejk_mean(&w, j, k)?, &moments::ejk_mean_exact(&w, j, k)?));
        if let Some(w2) = &w2 {
            let lead = moments::ejk_psi_cov(&w, j, k, w2)?;
            let exact = moments::ejk_psi_cov_exact(&w, j, k, w2)?;
            body.insert("ejk_psi_cov".into(), json!({ "leading": lead, "exact": exact, "residual": exact - lead }));
        }
    }
    let mgf = moments::psi_mgf_check(&w)?;
    ok &= mgf.holds();
    let mut mv = value(&mgf);
    mv.as_object_mut().expect("struct").insert("holds".into(), json!(mgf.holds()));
    let mut out = Map::new();
    out.insert("n".into(), json!(w.n()));
    out.insert("rows".into(), Value::Array(rows));
    out.extend(body);
    out.insert("mgf".into(), mv);
    out.insert("all_agree".into(), json!(ok));
    Ok((Value::Object(out), ok))
}

fn trees(ctx: &Ctx, c: &TreesCmd) -> Result<Named> {
    Ok(match c {
        TreesCmd::Count { x } => {
            let x = TreeDegreeSequence::new(parse_list(x)?)?;
            let count = tree_tools::count_trees_with_degrees(&x);
            ("trees count", json!({ "x": x.degrees(), "tree_count": count.to_string() }), true)
        }
        TreesCmd::Average { x, phi, degrees } => {
            let x = TreeDegreeSequence::new(parse_list(x)?)?;
            let phi = match (phi, degrees) {
                (Some(p), _) => parse_list(p)?,
                (None, Some(d)) => tree_tools::phi_weights(&load_d(d)?)?,
                (None, None) => return Err(Error::Precondition("trees average needs --phi or --degrees".into())),
            };
            let avg = tree_tools::tree_edge_average(&x, &phi)?;
            let bound = tree_tools::tree_exp_average_bound(&x, &phi)?;
            ("trees average", json!({ "x": x.degrees(), "phi": phi, "edge_average": avg, "exp_estimate": value(&bound) }), true)
        }
        TreesCmd::Moments { n, trunc_exponent, samples } => {
            if !(*trunc_exponent > 0.0 && *trunc_exponent < 1.0) {
                return Err(Error::OutOfRange(format!("--trunc-exponent must lie in (0, 1), got {trunc_exponent}")));
            }
            let m = match samples {
                Some(s) => tree_tools::tree_degree_moments_sampled(*n, *trunc_exponent, *s, ctx.seed)?,
                None => tree_tools::tree_degree_moments(*n, *trunc_exponent)?,
            };
            let mut v = value(&m);
            v.as_object_mut().expect("struct").insert("deviations".into(), json!(m.deviations()));
            ("trees moments", v, true)
        }
    })
}

/// A reference value for a comparison: exact when it can be, sampled otherwise.
struct Reference {
    kind: &'static str,
    value: f64,
    stderr: Option<f64>,
    exact: Option<Value>,
}

impl Reference {
    fn to_json(&self) -> Value {
        json!({ "kind": self.kind, "value": self.value, "stderr": self.stderr, "exact": self.exact })
    }
}

enum Target {
    Pattern(Graph, bool),
    Trees,
}

fn formula(ctx: &Ctx, d: &DegreeSequence, t: &Target) -> Result<ExponentReport> {
    match t {
        Target::Pattern(h, false) => ctx.cfg.expected_subgraph_count(d, h),
        Target::Pattern(h, true) => ctx.cfg.expected_induced_count(d, h),
        Target::Trees => asymptotics::expected_spanning_trees(d),
    }
}

fn reference(ctx: &Ctx, d: &DegreeSequence, t: &Target, a: &CompareArgs) -> Result<Reference> {
    if a.mcmc || d.len() > MAX_COUNT_N {
        let Target::Pattern(h, induced) = t else {
            return Err(Error::Precondition("sampled references are available for patterns only".into()));
        };
        let steps = a.steps.unwrap_or_else(|| default_steps(d));
        let e = oracle::mc_expected_copies(d, h, *induced, a.samples, steps, ctx.seed)?;
        return Ok(Reference { kind: "mcmc", value: e.estimate, stderr: Some(e.stderr), exact: None });
    }
    let oc = OracleConfig { budget: ctx.budget, method: Method::Auto };
    let r = match t {
        Target::Pattern(h, induced) => oc.expected_copies(d, h, *induced)?,
        Target::Trees => oc.expected_spanning_trees(d)?,
    };
    Ok(Reference { kind: "exact", value: r.value(), stderr: None, exact: Some(rational(&r.expectation)) })
}

fn family_target(f: Family, n: usize) -> Result<Target> {
    Ok(match f {
        Family::Cycle => Target::Pattern(Graph::cycle(n)?, false),
        Family::Matching => Target::Pattern(Graph::perfect_matching(n)?, false),
        Family::Triangle => Target::Pattern(Graph::complete(3), true),
        Family::Trees => Target::Trees,
    })
}

fn compare_cell(ctx: &Ctx, a: &CompareArgs, n: usize, k: usize, f: Family) -> Result<Value> {
    let d = DegreeSequence::regular(n, k)?;
    let t = family_target(f, n)?;
    let fr = formula(ctx, &d, &t)?;
    let r = reference(ctx, &d, &t, a)?;
    Ok(json!({
        "n": n,
        "k": k,
        "lambda": k as f64 / (n - 1) as f64,
        "formula_log": fr.log_value,
        "formula_value": fr.value(),
        "reference_kind": r.kind,
        "reference_value": r.value,
        "stderr": r.stderr,
        "log_ratio": fr.log_value - r.value.ln(),
    }))
}

fn parse_grid(s: &str) -> Result<Vec<(usize, usize)>> {
    s.split(',')
        .filter(|c| !c.trim().is_empty())
        .map(|c| {
            let (n, k) = c.trim().split_once(':').ok_or_else(|| Error::Parse(format!("grid cell `{c}` is not `n:k`")))?;
            let p = |t: &str| t.parse::<usize>().map_err(|_| Error::Parse(format!("grid cell `{c}`")));
            Ok((p(n)?, p(k)?))
        })
        .collect()
}

fn compare(ctx: &Ctx, a: &CompareArgs) -> Result<Value> {
    if let Some(grid) = &a.grid {
        let family = a.family.ok_or_else(|| Error::Precondition("--grid needs --family".into()))?;
        let cells = parse_grid(grid)?;
        let rows: Vec<Result<Value>> = std::thread::scope(|s| {
            let handles: Vec<_> =
                cells.iter().map(|&(n, k)| s.spawn(move || compare_cell(ctx, a, n, k, family))).collect();
            handles.into_iter().map(|h| h.join().expect("grid cell panicked")).collect()
        });
        let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
        let fam = format!("{family:?}").to_lowercase();
        return Ok(json!({ "family": fam, "rows": rows }));
    }
    let dp = a.degrees.as_ref().ok_or_else(|| Error::Precondition("compare needs --degrees or --grid".into()))?;
    let d = load_d(dp)?;
    let t = match (&a.pattern, a.trees) {
        (_, true) => Target::Trees,
        (Some(p), false) => Target::Pattern(load_g(p)?, a.induced),
        (None, false) => return Err(Error::Precondition("compare needs --pattern or --trees".into())),
    };
    let fr = formula(ctx, &d, &t)?;
    let r = reference(ctx, &d, &t, a)?;
    Ok(json!({
        "formula": exponent(&fr),
        "reference": r.to_json(),
        "log_ratio": fr.log_value - r.value.ln(),
        "relative_error": fr.value() / r.value - 1.0,
    }))
}
