//! Scaling of the pair-product covariances and of the linear-statistic
//! covariance residual on smooth weight families.

use std::f64::consts::PI;

use degseq_core::moments::{ejk_cov_bounds, ejk_psi_cov, ejk_psi_cov_exact, PairClass, WeightPair};

fn family(n: usize, shift: f64) -> WeightPair {
    let x = |j: usize| j as f64 / n as f64;
    WeightPair::new(
        (0..n).map(|j| (2.0 * PI * x(j) + shift).cos() + 0.3).collect(),
        (0..n).map(|j| x(j) * x(j) - 0.2).collect(),
    )
    .unwrap()
}

/// Like `family`, but the weights at positions 0 and 1 do not move with `n`.
fn pinned(n: usize, shift: f64) -> WeightPair {
    let w = family(n, shift);
    let mut u = w.u().to_vec();
    u[0] = 0.8 + shift;
    u[1] = -0.5;
    WeightPair::new(u, w.v().to_vec()).unwrap()
}

fn slope(ns: &[usize], ys: &[f64]) -> f64 {
    let x: Vec<f64> = ns.iter().map(|&n| (n as f64).ln()).collect();
    let y: Vec<f64> = ys.iter().map(|v| v.abs().ln()).collect();
    let k = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / k, y.iter().sum::<f64>() / k);
    x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / x.iter().map(|a| (a - mx).powi(2)).sum::<f64>()
}

const NS: [usize; 4] = [5, 6, 7, 8];

#[test]
fn disjoint_pair_covariance_decays() {
    let covs: Vec<f64> = NS
        .iter()
        .map(|&n| {
            let c = ejk_cov_bounds(&family(n, 0.4), 0, 1, 2, 3).unwrap();
            assert_eq!(c.class, PairClass::Disjoint);
            c.covariance
        })
        .collect();
    assert!(slope(&NS, &covs) <= -0.5, "{covs:?}");
}

#[test]
fn overlapping_pair_covariance_stays_bounded() {
    for n in NS {
        let c = ejk_cov_bounds(&family(n, 0.4), 0, 1, 1, 2).unwrap();
        assert_eq!(c.class, PairClass::Overlapping);
        assert!(c.scaled.abs() <= 1.0);
    }
}

#[test]
fn psi_covariance_residual_decays() {
    let res: Vec<f64> = NS
        .iter()
        .map(|&n| {
            let (w, w2) = (pinned(n, 0.4), pinned(n, 1.7));
            ejk_psi_cov_exact(&w, 0, 1, &w2).unwrap() - ejk_psi_cov(&w, 0, 1, &w2).unwrap()
        })
        .collect();
    assert!(slope(&NS, &res) <= -0.5, "{res:?}");
}
