//! Empirical sharpness, subadditivity and diameter semantics of the
//! difference statistics on `S_n`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use degseq_core::martingale::{
    perm_expectation_bound, perm_moments, table_alpha_delta, Order, PermutationFunction,
};

#[test]
fn second_order_is_tighter_for_small_fluctuations() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let trials = 60;
    let mut tighter = 0;
    for i in 0..trials {
        let n = 4 + i % 3;
        let t: f64 = rng.gen_range(0.01..0.1);
        let u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let tab = PermutationFunction::real(n, |w| t * (0..n).map(|j| u[j] * v[w[j]]).sum::<f64>()).tabulate().unwrap();
        let s = table_alpha_delta(&tab);
        let m = perm_moments(&tab);
        let first = perm_expectation_bound(&s, Order::First, &m);
        let second = perm_expectation_bound(&s, Order::Second, &m);
        if second.envelope < first.envelope {
            tighter += 1;
        }
    }
    assert!(tighter * 10 >= trials * 9, "second order tighter in {tighter} of {trials}");
}

#[test]
fn statistics_are_subadditive() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for _ in 0..20 {
        let n = rng.gen_range(3..=5);
        let a: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let b: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let f = PermutationFunction::real(n, |w| (0..n).map(|j| a[j * n + w[j]]).sum::<f64>().powi(2)).tabulate().unwrap();
        let g = PermutationFunction::real(n, |w| (0..n).map(|j| b[j * n + w[j]] * a[w[j]]).sum()).tabulate().unwrap();
        let (sf, sg, ss) = (table_alpha_delta(&f), table_alpha_delta(&g), table_alpha_delta(&f.add(&g)));
        for j in 0..n - 1 {
            assert!(ss.alpha[j] <= sf.alpha[j] + sg.alpha[j] + 1e-12);
            for k in 0..n - 1 {
                assert!(ss.delta[j][k] <= sf.delta[j][k] + sg.delta[j][k] + 1e-12);
            }
        }
    }
}

#[test]
fn real_diameter_is_range() {
    use num_complex::Complex64;
    let xs = [0.5, -1.25, 3.0, 2.0];
    let c: Vec<Complex64> = xs.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    assert!((degseq_core::martingale::complex_diameter(&c) - 4.25).abs() < 1e-12);
}
