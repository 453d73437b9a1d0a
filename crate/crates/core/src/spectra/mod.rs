//! Spectra of patterned matrices and the statistics built on them.

mod eigen;
mod histogram;
mod levy;

pub use eigen::{symmetric_eigenvalues, tridiagonal_ql, tridiagonalize, DEFAULT_TOL, MAX_ITERATIONS};
pub use histogram::{pooled_histogram, HistogramData, DEFAULT_BINS, DEFAULT_RANGE};
pub use levy::{levy_distance, levy_feasible, EmpiricalDistribution};

use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::matgen::{Ensemble, PatternedMatrix};
use serde::{Deserialize, Serialize};
use std::io::Write;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSource {
    pub kind: Ensemble,
    /// Dimension that fixed the scaling.
    pub parent_n: usize,
    pub seed: u64,
    pub eps: Option<f64>,
}

/// Sorted eigenvalues of one realization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub n: usize,
    pub source: SpectrumSource,
}

impl Spectrum {
    /// Wrap raw eigenvalues (sorted here).
    pub fn from_values(mut eigenvalues: Vec<f64>, kind: Ensemble) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        let n = eigenvalues.len();
        Spectrum {
            eigenvalues,
            n,
            source: SpectrumSource { kind, parent_n: n, seed: 0, eps: None },
        }
    }

    pub fn esd(&self) -> EmpiricalDistribution {
        EmpiricalDistribution::from_sorted(self.eigenvalues.clone())
    }
}

pub fn eigenvalues_symmetric(mat: &PatternedMatrix, tol: f64) -> Result<Spectrum> {
    let eigenvalues = symmetric_eigenvalues(mat.as_slice(), mat.n, tol)?;
    Ok(Spectrum {
        eigenvalues,
        n: mat.n,
        source: SpectrumSource {
            kind: mat.kind,
            parent_n: mat.parent_n,
            seed: mat.source_seed,
            eps: mat.eps,
        },
    })
}

/// `h`-th moment of the ESD, `(1/n) Σ λ_i^h`.
pub fn moment(spec: &Spectrum, h: u32) -> f64 {
    if spec.n == 0 {
        return 0.0;
    }
    let exp = i32::try_from(h).unwrap_or(i32::MAX);
    spec.eigenvalues.iter().map(|l| l.powi(exp)).sum::<f64>() / spec.n as f64
}

/// Both sides of `(1/n) Σ (λ_i(A) - λ_i(B))^2 <= (1/n) Tr (A - B)^2`, with
/// both spectra in ascending order.
pub fn hoffman_wielandt_gap(a: &PatternedMatrix, b: &PatternedMatrix) -> Result<(f64, f64)> {
    if a.n != b.n {
        return Err(Error::invalid(format!("dimension mismatch: {} vs {}", a.n, b.n)));
    }
    let la = eigenvalues_symmetric(a, DEFAULT_TOL)?;
    let lb = eigenvalues_symmetric(b, DEFAULT_TOL)?;
    let n = a.n as f64;
    let lhs = la
        .eigenvalues
        .iter()
        .zip(&lb.eigenvalues)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        / n;
    let rhs = a
        .as_slice()
        .iter()
        .zip(b.as_slice())
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        / n;
    Ok((lhs, rhs))
}

/// `realization,index,eigenvalue` rows; indices are 0-based.
pub fn write_eigenvalues_csv<W: Write>(spectra: &[Spectrum], mut w: W) -> std::io::Result<()> {
    writeln!(w, "realization,index,eigenvalue")?;
    for (r, s) in spectra.iter().enumerate() {
        for (i, l) in s.eigenvalues.iter().enumerate() {
            writeln!(w, "{r},{i},{}", fmt_f64(*l))?;
        }
    }
    Ok(())
}
