//! Tensor Gauss–Legendre rules on meshes graded toward both ends of each
//! coordinate, where the occupancy densities vanish.

use super::integrand::WordIntegrand;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    /// Nodes per coordinate.
    pub points_per_dim: usize,
    /// Ratio of consecutive cell widths approaching an end point.
    pub grading: f64,
    /// Gauss points per cell.
    pub order: usize,
    /// Largest cell width as a multiple of the uniform width.
    pub max_cell_factor: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig { points_per_dim: 64, grading: 0.7, order: 2, max_cell_factor: 2.0 }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` by Newton iteration.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let m = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (m + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..order {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = m * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -z;
        nodes[order - 1 - i] = z;
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

/// Cell widths on `[0, 1/2]`, smallest first: geometric with ratio
/// `1 / grading` and capped at `max_cell_factor` uniform widths.
fn half_cells(cells: usize, grading: f64, factor: f64) -> Vec<f64> {
    let cap = factor * 0.5 / cells as f64;
    let growth = 1.0 / grading;
    let widths = |h0: f64| -> Vec<f64> {
        (0..cells).map(|j| (h0 * growth.powi(j as i32)).min(cap)).collect()
    };
    let total = |h0: f64| widths(h0).iter().sum::<f64>();
    let (mut lo, mut hi) = (1e-300f64, cap);
    if total(hi) <= 0.5 {
        // cap too small to reach 1/2: uniform cells
        return vec![0.5 / cells as f64; cells];
    }
    for _ in 0..200 {
        let mid = (lo * hi).sqrt();
        if total(mid) > 0.5 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let mut w = widths(lo);
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x *= 0.5 / s);
    w
}

/// One-dimensional composite rule on `[0, 1]`, symmetric about `1/2`.
pub fn graded_rule(cfg: &QuadratureConfig) -> (Vec<f64>, Vec<f64>) {
    let order = cfg.order.max(1);
    let cells = (cfg.points_per_dim / (2 * order)).max(1);
    let (gx, gw) = gauss_legendre(order);
    let mut nodes = Vec::with_capacity(2 * cells * order);
    let mut weights = Vec::with_capacity(2 * cells * order);
    let mut left = 0.0;
    for h in half_cells(cells, cfg.grading, cfg.max_cell_factor) {
        for (x, w) in gx.iter().zip(&gw) {
            nodes.push(left + 0.5 * h * (1.0 + x));
            weights.push(0.5 * h * w);
        }
        left += h;
    }
    let half = nodes.len();
    for i in (0..half).rev() {
        nodes.push(1.0 - nodes[i]);
        weights.push(weights[i]);
    }
    (nodes, weights)
}

/// Tensor-product integral of the word integrand over `[lo, hi]^{k+1}`.
pub fn integrate(f: &WordIntegrand, lo: f64, hi: f64, cfg: &QuadratureConfig) -> f64 {
    let (unit_nodes, unit_weights) = graded_rule(cfg);
    let span = hi - lo;
    let nodes: Vec<f64> = unit_nodes.iter().map(|x| lo + span * x).collect();
    let weights: Vec<f64> = unit_weights.iter().map(|w| span * w).collect();
    let p = nodes.len();
    let dim = f.dim();
    let partials: Vec<f64> = (0..p)
        .into_par_iter()
        .map(|first| {
            let mut xs = vec![0.0; dim];
            let mut v = vec![0.0; f.vertices()];
            let mut idx = vec![0usize; dim];
            idx[0] = first;
            let mut acc = 0.0;
            loop {
                let mut w = 1.0;
                for d in 0..dim {
                    xs[d] = nodes[idx[d]];
                    w *= weights[idx[d]];
                }
                acc += w * f.eval(&xs, lo, hi, &mut v);
                // odometer over the trailing coordinates
                let mut d = dim;
                loop {
                    if d == 1 {
                        return acc;
                    }
                    d -= 1;
                    idx[d] += 1;
                    if idx[d] < p {
                        break;
                    }
                    idx[d] = 0;
                }
            }
        })
        .collect();
    partials.iter().sum()
}
