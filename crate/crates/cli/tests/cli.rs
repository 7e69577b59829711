//! End-to-end runs of the `degseq` binary: worked examples, exit codes,
//! schema golden files and rerun determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).display().to_string()
}

fn degseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_degseq"))
        .args(args)
        .env_remove("DEGSEQ_BUDGET")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let mut full = vec!["--format", "json"];
    full.extend_from_slice(args);
    let out = degseq(&full);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn key_paths(v: &Value, prefix: &str, out: &mut Vec<String>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let p = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                out.push(p.clone());
                key_paths(x, &p, out);
            }
        }
        Value::Array(xs) => {
            if let Some(x) = xs.first() {
                key_paths(x, &format!("{prefix}[]"), out);
            }
        }
        _ => {}
    }
}

fn assert_schema(golden: &str, v: &Value) {
    let mut keys = Vec::new();
    key_paths(v, "", &mut keys);
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(golden);
    let want = std::fs::read_to_string(&path).expect("golden file");
    assert_eq!(keys.join("\n") + "\n", want, "schema drift against {}", path.display());
}

#[test]
fn spanning_tree_worked_example() {
    let v = json(&["expect", "trees", "--degrees", &data("reg_4_2.deg")]);
    let lam = 2.0 / 3.0;
    assert!((v["terms"]["tree_const"].as_f64().unwrap() + (1.0 - lam) / (2.0 * lam)).abs() < 1e-12);
    assert_eq!(v["terms"]["R_term"].as_f64(), Some(0.0));
    let want = 16.0 * lam.powi(3) * (-0.25f64).exp();
    assert!((v["value"].as_f64().unwrap() - want).abs() < 1e-9);
    assert!((want - 3.69).abs() < 0.005);
    assert_eq!(v["seed"].as_u64(), Some(0));
}

#[test]
fn count_only_enumeration() {
    let v = json(&["oracle", "enumerate", "--degrees", &data("d2222.deg"), "--count-only"]);
    assert_eq!(v["realization_count"], "3");
    let listed = json(&["oracle", "enumerate", "--degrees", &data("d2222.deg")]);
    assert_eq!(listed["graphs"].as_array().unwrap().len(), 3);
}

#[test]
fn regular_stats_render_zero_deviation() {
    let out = degseq(&["stats", "--degrees", &data("reg_6_3.deg")]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("stats.max_dev: 0.0\n"), "{text}");
    assert!(text.contains("stats.spread: 0.0\n"), "{text}");
}

#[test]
fn exit_codes() {
    let missing = degseq(&["expect", "trees", "--degrees", "/nonexistent/x.deg"]);
    assert_eq!(missing.status.code(), Some(1));
    let dir = std::env::temp_dir().join(format!("degseq-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let bad = dir.join("bad.deg");
    std::fs::write(&bad, "2 two 2\n").unwrap();
    assert_eq!(degseq(&["stats", "--degrees", bad.to_str().unwrap()]).status.code(), Some(1));
    let nongraphical = dir.join("nongraphical.deg");
    std::fs::write(&nongraphical, "3 3 1 1\n").unwrap();
    assert_eq!(degseq(&["oracle", "expect", "--degrees", nongraphical.to_str().unwrap(), "--trees"]).status.code(), Some(2));
    assert_eq!(degseq(&["expect", "clique", "--degrees", &data("reg_4_2.deg"), "--r", "9"]).status.code(), Some(2));
    assert_eq!(degseq(&["stats", "--degrees", &data("reg_4_2.deg"), "--no-such-flag"]).status.code(), Some(2));
    assert_eq!(degseq(&["--eps", "0.7", "stats", "--degrees", &data("reg_4_2.deg")]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn budget_from_environment() {
    let args = ["oracle", "expect", "--degrees", &data("mixed_7.deg"), "--trees"];
    let capped = Command::new(env!("CARGO_BIN_EXE_degseq")).args(args).env("DEGSEQ_BUDGET", "3").output().unwrap();
    assert_eq!(capped.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("budget"));
    assert!(degseq(&args).status.success());
}

#[test]
fn json_schema_is_pinned() {
    assert_schema("expect_trees.keys", &json(&["expect", "trees", "--degrees", &data("reg_4_2.deg")]));
    assert_schema(
        "expect_subgraph.keys",
        &json(&["expect", "subgraph", "--degrees", &data("reg_6_3.deg"), "--pattern", &data("cycle_6.g")]),
    );
    assert_schema(
        "oracle_expect.keys",
        &json(&["oracle", "expect", "--degrees", &data("mixed_7.deg"), "--pattern", &data("triangle.g"), "--induced"]),
    );
    assert_schema(
        "compare.keys",
        &json(&["compare", "--degrees", &data("reg_6_3.deg"), "--pattern", &data("cycle_6.g")]),
    );
    assert_schema("stats.keys", &json(&["stats", "--degrees", &data("mixed_7.deg")]));
}

#[test]
fn reruns_are_byte_identical() {
    let runs: [&[&str]; 3] = [
        &["oracle", "mcmc", "--degrees", &data("reg_6_3.deg"), "--pattern", &data("cycle_6.g"), "--samples", "20", "--seed", "7"],
        &["compare", "--grid", "6:3,7:2,8:3", "--family", "cycle"],
        &["martingale", "verify", "--trials", "12", "--max-n", "4", "--seed", "3"],
    ];
    for args in runs {
        let mut full = vec!["--format", "json"];
        full.extend_from_slice(args);
        let (a, b) = (degseq(&full), degseq(&full));
        assert!(a.status.success(), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
    let seeded = json(&["oracle", "mcmc", "--degrees", &data("reg_6_3.deg"), "--pattern", &data("cycle_6.g"), "--samples", "20", "--seed", "7"]);
    assert_eq!(seeded["seed"].as_u64(), Some(7));
}

#[test]
fn grid_sweep_emits_csv_rows_in_order() {
    let out = degseq(&["--format", "csv", "compare", "--grid", "8:3,6:3,7:2", "--family", "cycle"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("n,k,lambda,formula_log"));
    let ns: Vec<&str> = lines[1..].iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(ns, ["8", "6", "7"]);
}

#[test]
fn verification_suites_pass() {
    let m = json(&["martingale", "verify", "--trials", "24"]);
    assert_eq!(m["sound"], true);
    let w = json(&["moments", "verify", "--u", "0.3,-0.2,0.5,0.1", "--v", "0.1,0.4,-0.3,0.2", "--pair", "1,3"]);
    assert_eq!(w["all_agree"], true);
    let e = json(&["moments", "verify", "--degrees", &data("mixed_7.deg"), "--pattern", &data("triangle.g"), "--induced"]);
    assert_eq!(e["all_within"], true);
}

#[test]
fn tree_commands() {
    assert_eq!(json(&["trees", "count", "--x", "2,2,1,1"])["tree_count"], "2");
    let m = json(&["trees", "moments", "--n", "5"]);
    assert_eq!(m["exact"], true);
    assert!((m["mean"].as_f64().unwrap() - 1.0).abs() < 1e-9);
}
