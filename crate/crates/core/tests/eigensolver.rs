use approx::assert_relative_eq;
use balanced_spectra::seed::{derive_seed, rng_from_seed};
use balanced_spectra::spectra::{symmetric_eigenvalues, DEFAULT_TOL};
use balanced_spectra::{build_matrix, eigenvalues_symmetric, generate_sequence, Dist, Ensemble};
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::Rng;

fn random_symmetric(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = rng_from_seed(seed);
    let mut a = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            let x: f64 = rng.random_range(-1.0..1.0);
            a[i * n + j] = x;
            a[j * n + i] = x;
        }
    }
    a
}

fn reference(a: &[f64], n: usize) -> Vec<f64> {
    let m = DMatrix::from_row_slice(n, n, a);
    let mut ev: Vec<f64> = m.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

#[test]
fn matches_nalgebra_on_random_matrices() {
    for (r, n) in [1usize, 2, 3, 7, 30, 64].into_iter().enumerate() {
        let a = random_symmetric(n, derive_seed(11, r as u64));
        let ours = symmetric_eigenvalues(&a, n, DEFAULT_TOL).unwrap();
        for (x, y) in ours.iter().zip(reference(&a, n)) {
            assert_relative_eq!(*x, y, epsilon = 1e-10);
        }
    }
}

#[test]
fn matches_nalgebra_on_every_ensemble() {
    let n = 120;
    let seq = generate_sequence(Dist::StandardNormal, 2 * n - 1, 3).unwrap();
    for kind in Ensemble::ALL {
        let m = build_matrix(kind, &seq, n).unwrap();
        let ours = eigenvalues_symmetric(&m, DEFAULT_TOL).unwrap();
        for (x, y) in ours.eigenvalues.iter().zip(reference(m.as_slice(), n)) {
            assert_relative_eq!(*x, y, epsilon = 1e-9);
        }
    }
}

#[test]
fn degenerate_spectra() {
    // repeated eigenvalues: rank-one plus identity
    let n = 25;
    let a: Vec<f64> = (0..n * n).map(|p| if p / n == p % n { 2.0 } else { 1.0 }).collect();
    let ev = symmetric_eigenvalues(&a, n, DEFAULT_TOL).unwrap();
    for x in &ev[..n - 1] {
        assert_relative_eq!(*x, 1.0, epsilon = 1e-12);
    }
    assert_relative_eq!(ev[n - 1], (n + 1) as f64, epsilon = 1e-11);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn shift_scale_covariance_and_traces(seed in any::<u64>(), shift in -3.0f64..3.0, scale in 0.1f64..4.0) {
        let n = 30;
        let a = random_symmetric(n, seed);
        let ev = symmetric_eigenvalues(&a, n, DEFAULT_TOL).unwrap();
        let b: Vec<f64> = (0..n * n)
            .map(|p| scale * a[p] + if p / n == p % n { shift } else { 0.0 })
            .collect();
        let evb = symmetric_eigenvalues(&b, n, DEFAULT_TOL).unwrap();
        for (x, y) in ev.iter().zip(&evb) {
            prop_assert!((scale * x + shift - y).abs() < 1e-10 * (1.0 + y.abs()));
        }
        let tr: f64 = (0..n).map(|i| a[i * n + i]).sum();
        let fro: f64 = a.iter().map(|x| x * x).sum();
        prop_assert!((ev.iter().sum::<f64>() - tr).abs() < 1e-10);
        prop_assert!((ev.iter().map(|x| x * x).sum::<f64>() - fro).abs() < 1e-9);
        prop_assert!(ev.windows(2).all(|w| w[0] <= w[1]));
    }
}
