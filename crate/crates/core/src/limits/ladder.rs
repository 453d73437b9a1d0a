//! Extrapolation of truncated estimates to ε = 0.
//!
//! The model is `v(ε) = c_0 + Σ_{j=1}^{J} c_j ε ln^j ε + c_{J+1} ε`, fit by
//! weighted least squares, with `J = min(k, rungs - 2)`. At `k = 1` this is
//! the exact shape `2(1 - ε + ε ln ε)` of the single-word integral; higher
//! `k` acquire higher powers of the logarithm from nested singular faces.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

pub const DEFAULT_RUNGS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];

/// Raw rungs plus the extrapolated intercept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderTable {
    pub eps: Vec<f64>,
    pub values: Vec<f64>,
    pub std_errors: Vec<f64>,
    /// Number of `ε ln^j ε` terms in the fit.
    pub log_powers: usize,
    pub extrapolated: f64,
    pub extrapolated_std_error: f64,
}

impl LadderTable {
    /// Value at the smallest ε, reported next to the extrapolation.
    pub fn smallest_rung(&self) -> f64 {
        self.eps
            .iter()
            .zip(&self.values)
            .min_by(|a, b| a.0.total_cmp(b.0))
            .map(|(_, v)| *v)
            .unwrap_or(f64::NAN)
    }
}

pub fn log_powers_for(k: usize, rungs: usize) -> usize {
    k.min(rungs.saturating_sub(2)).max(1)
}

fn basis(eps: f64, log_powers: usize) -> Vec<f64> {
    let l = eps.ln();
    let mut row = Vec::with_capacity(log_powers + 2);
    row.push(1.0);
    for j in 1..=log_powers {
        row.push(eps * l.powi(j as i32));
    }
    row.push(eps);
    row
}

/// Linear functional `c` with `intercept = c · values`, from unweighted least
/// squares (the rung errors are similar in size and weighting would couple
/// the estimate to noisy error bars).
fn intercept_functional(eps: &[f64], log_powers: usize) -> Result<Vec<f64>> {
    let p = log_powers + 2;
    if eps.len() < p {
        return Err(Error::invalid(format!(
            "ladder needs at least {p} rungs for {log_powers} log terms, got {}",
            eps.len()
        )));
    }
    let rows: Vec<Vec<f64>> = eps.iter().map(|&e| basis(e, log_powers)).collect();
    // normal equations A^T A y = e_0, then c = A y
    let mut g = vec![vec![0.0; p + 1]; p];
    for (r, gr) in g.iter_mut().enumerate() {
        for c in 0..p {
            gr[c] = rows.iter().map(|row| row[r] * row[c]).sum();
        }
        gr[p] = if r == 0 { 1.0 } else { 0.0 };
    }
    for col in 0..p {
        let pivot = (col..p).max_by(|&a, &b| g[a][col].abs().total_cmp(&g[b][col].abs())).unwrap();
        g.swap(col, pivot);
        let d = g[col][col];
        if d.abs() < 1e-300 {
            return Err(Error::invalid("ladder rungs are degenerate"));
        }
        for r in 0..p {
            if r != col {
                let f = g[r][col] / d;
                for c in col..=p {
                    g[r][c] -= f * g[col][c];
                }
            }
        }
    }
    let y: Vec<f64> = (0..p).map(|r| g[r][p] / g[r][r]).collect();
    Ok(rows.iter().map(|row| row.iter().zip(&y).map(|(a, b)| a * b).sum()).collect())
}

pub fn extrapolate(eps: &[f64], values: &[f64], std_errors: &[f64], k: usize) -> Result<LadderTable> {
    if eps.len() != values.len() || eps.len() != std_errors.len() {
        return Err(Error::invalid("ladder arrays differ in length"));
    }
    if eps.iter().any(|e| !(*e > 0.0 && *e < 1.0)) {
        return Err(Error::invalid("ladder rungs must lie in (0, 1)"));
    }
    let log_powers = log_powers_for(k, eps.len());
    let c = intercept_functional(eps, log_powers)?;
    let extrapolated = c.iter().zip(values).map(|(c, v)| c * v).sum();
    let var: f64 = c.iter().zip(std_errors).map(|(c, s)| (c * s).powi(2)).sum();
    Ok(LadderTable {
        eps: eps.to_vec(),
        values: values.to_vec(),
        std_errors: std_errors.to_vec(),
        log_powers,
        extrapolated,
        extrapolated_std_error: var.sqrt(),
    })
}
