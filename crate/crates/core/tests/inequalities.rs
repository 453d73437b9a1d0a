use balanced_spectra::seed::{derive_seed, rng_from_seed};
use balanced_spectra::spectra::{symmetric_eigenvalues, DEFAULT_TOL};
use balanced_spectra::{
    build_matrix, eigenvalues_symmetric, generate_sequence, hoffman_wielandt_gap, levy_distance,
    principal_submatrix, Dist, EmpiricalDistribution, Ensemble,
};
use rand::seq::index::sample;
use rand::Rng;

const SLACK: f64 = 1e-9;

#[test]
fn hoffman_wielandt_on_random_pairs() {
    let mut rng = rng_from_seed(101);
    for r in 0..100u64 {
        let n = rng.random_range(2..60);
        let kind = Ensemble::ALL[(r % 4) as usize];
        let dist = [Dist::StandardNormal, Dist::Rademacher, Dist::BoundedUniform][(r % 3) as usize];
        let a = generate_sequence(dist, kind.required_len(n), derive_seed(7, 2 * r)).unwrap();
        let b = generate_sequence(dist, kind.required_len(n), derive_seed(7, 2 * r + 1)).unwrap();
        let (lhs, rhs) =
            hoffman_wielandt_gap(&build_matrix(kind, &a, n).unwrap(), &build_matrix(kind, &b, n).unwrap()).unwrap();
        assert!(lhs <= rhs + SLACK, "pair {r}: {lhs} > {rhs}");
    }
}

#[test]
fn principal_submatrix_levy_bound() {
    let mut rng = rng_from_seed(202);
    for r in 0..50u64 {
        let n = rng.random_range(2..80);
        let m = rng.random_range(1..=n);
        let kind = Ensemble::ALL[(r % 4) as usize];
        let seq = generate_sequence(Dist::StandardNormal, kind.required_len(n), derive_seed(9, r)).unwrap();
        let a = build_matrix(kind, &seq, n).unwrap();
        let mut keep = sample(&mut rng, n, m).into_vec();
        keep.sort_unstable();
        let sub: Vec<f64> = keep.iter().flat_map(|&i| keep.iter().map(move |&j| (i, j))).map(|(i, j)| a.get(i, j)).collect();
        let fa = eigenvalues_symmetric(&a, DEFAULT_TOL).unwrap().esd();
        let fb = EmpiricalDistribution::new(symmetric_eigenvalues(&sub, m, DEFAULT_TOL).unwrap());
        let rho = levy_distance(&fa, &fb);
        let bound = (n as f64 / m as f64 - 1.0).min(1.0);
        assert!(rho <= bound + SLACK, "draw {r}: n={n} m={m} rho={rho} bound={bound}");
    }
}

#[test]
fn truncation_levy_bound_for_balanced_toeplitz() {
    let n = 400;
    let seq = generate_sequence(Dist::StandardNormal, n, 404).unwrap();
    let full = build_matrix(Ensemble::BT, &seq, n).unwrap();
    let f = eigenvalues_symmetric(&full, DEFAULT_TOL).unwrap().esd();
    for eps in [0.05, 0.1, 0.2] {
        let sub = principal_submatrix(&full, eps).unwrap();
        let g = eigenvalues_symmetric(&sub, DEFAULT_TOL).unwrap().esd();
        let rho = levy_distance(&f, &g);
        assert!(rho <= eps + SLACK, "eps={eps}: rho={rho}");
    }
}
