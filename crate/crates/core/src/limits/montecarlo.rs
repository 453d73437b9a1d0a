//! Plain Monte Carlo over a truncated box, where the integrand is bounded.

use super::integrand::WordIntegrand;
use crate::seed::{derive_seed, rng_from_seed};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloConfig {
    /// Total samples per estimate.
    pub samples: usize,
    /// Batches for the median-of-means estimator.
    pub batches: usize,
}

impl Default for MonteCarloConfig {
    fn default() -> Self {
        MonteCarloConfig { samples: 2_000_000, batches: 16 }
    }
}

/// Asymptotic ratio of the standard deviation of a sample median to that of
/// the sample mean for normal data, `sqrt(π/2)`.
const MEDIAN_EFFICIENCY: f64 = 1.253_314_137_315_500_3;

/// Median-of-means estimate of the integral over `[lo, hi]^{k+1}` and its
/// standard error. Batch `b` draws from `derive_seed(seed, b)`.
pub fn integrate(f: &WordIntegrand, lo: f64, hi: f64, cfg: &MonteCarloConfig, seed: u64) -> (f64, f64) {
    let batches = cfg.batches.max(1);
    let per_batch = (cfg.samples / batches).max(1);
    let span = hi - lo;
    let volume = span.powi(f.dim() as i32);
    let mut means: Vec<f64> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = rng_from_seed(derive_seed(seed, b as u64));
            let mut xs = vec![0.0; f.dim()];
            let mut v = vec![0.0; f.vertices()];
            let mut acc = 0.0;
            for _ in 0..per_batch {
                for x in xs.iter_mut() {
                    *x = lo + span * rng.random::<f64>();
                }
                acc += f.eval(&xs, lo, hi, &mut v);
            }
            volume * acc / per_batch as f64
        })
        .collect();
    if batches == 1 {
        return (means[0], 0.0);
    }
    let b = batches as f64;
    let mean = means.iter().sum::<f64>() / b;
    let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (b - 1.0);
    means.sort_by(f64::total_cmp);
    let median = if batches % 2 == 1 {
        means[batches / 2]
    } else {
        0.5 * (means[batches / 2 - 1] + means[batches / 2])
    };
    (median, MEDIAN_EFFICIENCY * (var / b).sqrt())
}
