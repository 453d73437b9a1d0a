//! Empirical ESD moments from simulation, set against the limits.

use super::{limit_moment_of_order, Evaluator};
use crate::error::{Error, Result};
use crate::inputs::{generate_sequence, Dist};
use crate::matgen::{build_matrix, principal_submatrix, Ensemble};
use crate::seed::derive_seed;
use crate::spectra::{eigenvalues_symmetric, moment, DEFAULT_TOL};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Relative tolerance on `β_2`, absolute bound on odd moments, relative
/// tolerance on higher even moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub second_rel: f64,
    pub odd_abs: f64,
    pub higher_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { second_rel: 0.02, odd_abs: 0.1, higher_rel: 0.15 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonConfig {
    pub kind: Ensemble,
    pub n: usize,
    pub reps: usize,
    pub k_max: usize,
    pub seed: u64,
    pub dist: Dist,
    pub evaluator: Evaluator,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub h: usize,
    pub empirical: f64,
    pub empirical_std_error: f64,
    pub limit: f64,
    pub limit_std_error: f64,
    /// Allowed absolute deviation.
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonReport {
    pub kind: Ensemble,
    pub n: usize,
    pub reps: usize,
    pub seed: u64,
    pub dist: Dist,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonReport {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }
}

/// `moments[r][h - 1]` is `β_h` of realization `r`; realization `r` uses
/// `derive_seed(seed, r)` for its input sequence.
pub fn empirical_moments(kind: Ensemble, n: usize, reps: usize, seed: u64, dist: Dist, h_max: usize) -> Result<Vec<Vec<f64>>> {
    (0..reps)
        .into_par_iter()
        .map(|r| {
            let seq = generate_sequence(dist, kind.required_len(n), derive_seed(seed, r as u64))?;
            let spec = eigenvalues_symmetric(&build_matrix(kind, &seq, n)?, DEFAULT_TOL)?;
            Ok((1..=h_max).map(|h| moment(&spec, h as u32)).collect())
        })
        .collect()
}

/// `(1/n) Tr (A_n^ε)^h` per realization, normalized by the parent order.
pub fn truncated_trace_moments(kind: Ensemble, n: usize, eps: f64, h: u32, reps: usize, seed: u64, dist: Dist) -> Result<Vec<f64>> {
    (0..reps)
        .into_par_iter()
        .map(|r| {
            let seq = generate_sequence(dist, kind.required_len(n), derive_seed(seed, r as u64))?;
            let sub = principal_submatrix(&build_matrix(kind, &seq, n)?, eps)?;
            let spec = eigenvalues_symmetric(&sub, DEFAULT_TOL)?;
            let exp = i32::try_from(h).unwrap_or(i32::MAX);
            Ok(spec.eigenvalues.iter().map(|l| l.powi(exp)).sum::<f64>() / n as f64)
        })
        .collect()
}

fn mean_and_se(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Averaged ESD moments `β_1 .. β_{2 k_max}` against the limits, with a
/// pass flag per order.
pub fn compare_empirical_limit(cfg: &ComparisonConfig) -> Result<ComparisonReport> {
    if !cfg.kind.is_balanced() {
        return Err(Error::invalid(format!("limits are computed for balanced ensembles, got {}", cfg.kind)));
    }
    if cfg.n == 0 || cfg.reps == 0 || cfg.k_max == 0 {
        return Err(Error::invalid("n, reps and k_max must be positive"));
    }
    let h_max = 2 * cfg.k_max;
    let samples = empirical_moments(cfg.kind, cfg.n, cfg.reps, cfg.seed, cfg.dist, h_max)?;
    let tol = cfg.tolerances;
    let rows = (1..=h_max)
        .map(|h| {
            let column: Vec<f64> = samples.iter().map(|s| s[h - 1]).collect();
            let (empirical, empirical_std_error) = mean_and_se(&column);
            let lim = limit_moment_of_order(h, cfg.kind.link(), &cfg.evaluator)?;
            let tolerance = match h {
                _ if h % 2 == 1 => tol.odd_abs,
                2 => tol.second_rel * lim.value,
                _ => tol.higher_rel * lim.value,
            };
            let pass = (empirical - lim.value).abs() <= tolerance;
            Ok(ComparisonRow {
                h,
                empirical,
                empirical_std_error,
                limit: lim.value,
                limit_std_error: lim.std_error,
                tolerance,
                pass,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ComparisonReport { kind: cfg.kind, n: cfg.n, reps: cfg.reps, seed: cfg.seed, dist: cfg.dist, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rademacher_second_moment_row_is_exact() {
        let cfg = ComparisonConfig {
            kind: Ensemble::BT,
            n: 100,
            reps: 3,
            k_max: 1,
            seed: 5,
            dist: Dist::Rademacher,
            evaluator: Evaluator::quadrature(),
            tolerances: Tolerances::default(),
        };
        let report = compare_empirical_limit(&cfg).unwrap();
        let row = &report.rows[1];
        assert!((row.empirical - 1.99).abs() < 1e-10, "{}", row.empirical);
        assert!(row.empirical_std_error < 1e-10);
        assert!(row.pass);
    }

    #[test]
    fn rejects_unbalanced() {
        let cfg = ComparisonConfig {
            kind: Ensemble::T,
            n: 10,
            reps: 1,
            k_max: 1,
            seed: 0,
            dist: Dist::StandardNormal,
            evaluator: Evaluator::quadrature(),
            tolerances: Tolerances::default(),
        };
        assert!(compare_empirical_limit(&cfg).is_err());
    }
}
