//! The four patterned ensembles and their ε-truncated principal submatrices.
//!
//! Index conventions follow the usual displays: Toeplitz inputs are indexed
//! from 0 (`x_{|i-j|}`), Hankel inputs from 1 (`x_{i+j-1}` with 1-based
//! `i, j`). For a Hankel ensemble `values[v - 1]` holds `x_v`.

use crate::error::{Error, Result};
use crate::inputs::InputSequence;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

/// Link function family: `|i - j|` (Toeplitz) or `i + j - 1` (Hankel).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum LinkKind {
    T,
    H,
}

impl LinkKind {
    pub fn name(self) -> &'static str {
        match self {
            LinkKind::T => "T",
            LinkKind::H => "H",
        }
    }
}

impl fmt::Display for LinkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LinkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t" | "bt" | "toeplitz" => Ok(LinkKind::T),
            "h" | "bh" | "hankel" => Ok(LinkKind::H),
            other => Err(Error::invalid(format!("unknown link kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ensemble {
    /// Toeplitz scaled by `n^{-1/2}`.
    T,
    /// Hankel scaled by `n^{-1/2}`.
    H,
    /// Balanced Toeplitz.
    BT,
    /// Balanced Hankel.
    BH,
}

impl Ensemble {
    pub const ALL: [Ensemble; 4] = [Ensemble::T, Ensemble::BT, Ensemble::H, Ensemble::BH];

    pub fn link(self) -> LinkKind {
        match self {
            Ensemble::T | Ensemble::BT => LinkKind::T,
            Ensemble::H | Ensemble::BH => LinkKind::H,
        }
    }

    pub fn is_balanced(self) -> bool {
        matches!(self, Ensemble::BT | Ensemble::BH)
    }

    pub fn name(self) -> &'static str {
        match self {
            Ensemble::T => "t",
            Ensemble::H => "h",
            Ensemble::BT => "bt",
            Ensemble::BH => "bh",
        }
    }

    /// Input length needed for an `n x n` matrix.
    pub fn required_len(self, n: usize) -> usize {
        match self.link() {
            LinkKind::T => n,
            LinkKind::H => 2 * n - 1,
        }
    }
}

impl fmt::Display for Ensemble {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Ensemble {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "t" | "toeplitz" => Ok(Ensemble::T),
            "h" | "hankel" => Ok(Ensemble::H),
            "bt" | "balanced-toeplitz" => Ok(Ensemble::BT),
            "bh" | "balanced-hankel" => Ok(Ensemble::BH),
            other => Err(Error::invalid(format!("unknown ensemble '{other}'"))),
        }
    }
}

/// Number of times the variable at 1-based position `(i, j)` occurs in an
/// `n x n` matrix of the given link kind.
pub fn phi(kind: LinkKind, n: usize, i: usize, j: usize) -> Result<usize> {
    if i == 0 || j == 0 || i > n || j > n {
        return Err(Error::invalid(format!("index ({i}, {j}) outside 1..={n}")));
    }
    Ok(phi_unchecked(kind, n, i, j))
}

#[inline]
pub(crate) fn phi_unchecked(kind: LinkKind, n: usize, i: usize, j: usize) -> usize {
    match kind {
        LinkKind::T => n - i.abs_diff(j),
        LinkKind::H => (i + j - 1).min(2 * n + 1 - i - j),
    }
}

/// Dense symmetric matrix with ensemble metadata.
///
/// `parent_n` is the dimension that fixed the scaling; it differs from `n`
/// only for principal submatrices, whose first retained parent row is
/// `offset` (0-based).
#[derive(Debug, Clone, PartialEq)]
pub struct PatternedMatrix {
    pub kind: Ensemble,
    pub n: usize,
    pub parent_n: usize,
    pub offset: usize,
    /// Truncation level when this is an ε-truncated submatrix.
    pub eps: Option<f64>,
    pub source_seed: u64,
    entries: Vec<f64>,
}

impl PatternedMatrix {
    /// Wrap an arbitrary symmetric matrix given row-major.
    pub fn from_rows(kind: Ensemble, rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid("matrix must be square and non-empty"));
        }
        for i in 0..n {
            for j in 0..i {
                if rows[i][j] != rows[j][i] {
                    return Err(Error::invalid(format!("entry ({i}, {j}) breaks symmetry")));
                }
            }
        }
        Ok(PatternedMatrix {
            kind,
            n,
            parent_n: n,
            offset: 0,
            eps: None,
            source_seed: 0,
            entries: rows.iter().flatten().copied().collect(),
        })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    /// Row-major entries.
    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    pub fn trace(&self) -> f64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// `Tr(M^2)`, i.e. the squared Frobenius norm of a symmetric matrix.
    pub fn trace_of_square(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.entries.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Write `(i, j, value)` rows with 1-based indices.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "i,j,value")?;
        for i in 0..self.n {
            for j in 0..self.n {
                writeln!(w, "{},{},{}", i + 1, j + 1, crate::io::fmt_f64(self.get(i, j)))?;
            }
        }
        Ok(())
    }
}

pub fn build_matrix(kind: Ensemble, seq: &InputSequence, n: usize) -> Result<PatternedMatrix> {
    if n == 0 {
        return Err(Error::invalid("matrix dimension must be at least 1"));
    }
    let need = kind.required_len(n);
    if seq.len() < need {
        return Err(Error::invalid(format!(
            "{kind} of order {n} needs {need} input values, got {}",
            seq.len()
        )));
    }
    let x = &seq.values;
    let uniform = 1.0 / (n as f64).sqrt();
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in i..n {
            // 1-based position (i + 1, j + 1)
            let v = match kind {
                Ensemble::T => x[j - i] * uniform,
                Ensemble::H => x[i + j] * uniform,
                Ensemble::BT => x[j - i] / (phi_unchecked(LinkKind::T, n, i + 1, j + 1) as f64).sqrt(),
                Ensemble::BH => x[i + j] / (phi_unchecked(LinkKind::H, n, i + 1, j + 1) as f64).sqrt(),
            };
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
    }
    Ok(PatternedMatrix { kind, n, parent_n: n, offset: 0, eps: None, source_seed: seq.seed, entries })
}

/// Retained 0-based index range `[start, start + m)` for the ε-truncation.
pub fn truncation_range(kind: Ensemble, n: usize, eps: f64) -> Result<(usize, usize)> {
    if !(0.0..1.0).contains(&eps) {
        return Err(Error::invalid(format!("eps must lie in [0, 1), got {eps}")));
    }
    // guard against n * (1 - eps) landing a hair above an integer
    let slack = 1e-9;
    let (start, m) = match kind {
        Ensemble::BT => (0, ((n as f64) * (1.0 - eps) - slack).ceil().max(0.0) as usize),
        Ensemble::BH => {
            let trim = ((n as f64) * eps / 2.0 + slack).floor() as usize;
            (trim, n.saturating_sub(2 * trim))
        }
        other => {
            return Err(Error::invalid(format!(
                "ε-truncation is defined for balanced ensembles, got {other}"
            )))
        }
    };
    if m < 1 {
        return Err(Error::invalid(format!("eps = {eps} leaves an empty submatrix of order {n}")));
    }
    Ok((start, m))
}

/// Top-left `⌈n(1-ε)⌉` block for BT; symmetric trim of `⌊nε/2⌋` on each side
/// for BH. Entries are copied, never rescaled.
pub fn principal_submatrix(mat: &PatternedMatrix, eps: f64) -> Result<PatternedMatrix> {
    let (start, m) = truncation_range(mat.kind, mat.n, eps)?;
    if start == 0 && m == mat.n {
        return Ok(mat.clone());
    }
    let mut entries = Vec::with_capacity(m * m);
    for i in start..start + m {
        entries.extend_from_slice(&mat.row(i)[start..start + m]);
    }
    Ok(PatternedMatrix {
        kind: mat.kind,
        n: m,
        parent_n: mat.parent_n,
        offset: mat.offset + start,
        eps: (eps > 0.0).then_some(eps).or(mat.eps),
        source_seed: mat.source_seed,
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inputs::{generate_sequence, Dist};

    fn seq(values: Vec<f64>) -> InputSequence {
        InputSequence { values, dist: Dist::StandardNormal, seed: 0 }
    }

    #[test]
    fn phi_corner_values() {
        assert_eq!(phi(LinkKind::T, 5, 1, 5).unwrap(), 1);
        assert_eq!(phi(LinkKind::H, 7, 7, 7).unwrap(), 1);
        assert_eq!(phi(LinkKind::T, 5, 3, 3).unwrap(), 5);
        assert_eq!(phi(LinkKind::H, 5, 1, 5).unwrap(), 5);
        assert!(phi(LinkKind::T, 5, 0, 1).is_err());
        assert!(phi(LinkKind::H, 5, 6, 1).is_err());
    }

    #[test]
    fn phi_reciprocal_sum_is_two_n_minus_one() {
        for n in [1usize, 2, 3, 10, 37] {
            for kind in [LinkKind::T, LinkKind::H] {
                let mut s = 0.0;
                for i in 1..=n {
                    for j in 1..=n {
                        let p = phi(kind, n, i, j).unwrap();
                        assert!((1..=n).contains(&p));
                        assert_eq!(p, phi(kind, n, j, i).unwrap());
                        s += 1.0 / p as f64;
                    }
                }
                assert!((s - (2 * n - 1) as f64).abs() < 1e-9 * n as f64, "{kind} n={n}: {s}");
            }
        }
    }

    #[test]
    fn balanced_toeplitz_two_by_two() {
        let m = build_matrix(Ensemble::BT, &seq(vec![3.0, 5.0]), 2).unwrap();
        let r2 = 2f64.sqrt();
        assert_eq!(m.get(0, 0), 3.0 / r2);
        assert_eq!(m.get(1, 1), 3.0 / r2);
        assert_eq!(m.get(0, 1), 5.0);
        assert_eq!(m.get(1, 0), 5.0);
    }

    #[test]
    fn balanced_hankel_two_by_two() {
        let m = build_matrix(Ensemble::BH, &seq(vec![2.0, 3.0, 4.0]), 2).unwrap();
        let r2 = 2f64.sqrt();
        assert_eq!(m.get(0, 0), 2.0);
        assert_eq!(m.get(0, 1), 3.0 / r2);
        assert_eq!(m.get(1, 0), 3.0 / r2);
        assert_eq!(m.get(1, 1), 4.0);
    }

    #[test]
    fn unbalanced_uniform_scaling() {
        let m = build_matrix(Ensemble::T, &seq(vec![1.0; 3]), 3).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!(m.as_slice().iter().all(|&v| v == s));
    }

    #[test]
    fn short_sequence_is_rejected() {
        assert!(build_matrix(Ensemble::BH, &seq(vec![1.0; 4]), 3).is_err());
        assert!(build_matrix(Ensemble::BT, &seq(vec![1.0; 2]), 3).is_err());
        assert!(build_matrix(Ensemble::BH, &seq(vec![1.0; 5]), 3).is_ok());
    }

    #[test]
    fn entry_invariants_hold() {
        let n = 23;
        let s = generate_sequence(Dist::StandardNormal, 2 * n - 1, 4).unwrap();
        let bt = build_matrix(Ensemble::BT, &s, n).unwrap();
        let bh = build_matrix(Ensemble::BH, &s, n).unwrap();
        for i in 1..=n {
            for j in 1..=n {
                assert_eq!(bt.get(i - 1, j - 1), bt.get(j - 1, i - 1));
                let d = i.abs_diff(j);
                assert_eq!(bt.get(i - 1, j - 1), s.values[d] / ((n - d) as f64).sqrt());
                let v = i + j - 1;
                let w = v.min(2 * n - i - j + 1) as f64;
                assert_eq!(bh.get(i - 1, j - 1), s.values[v - 1] / w.sqrt());
            }
        }
    }

    #[test]
    fn rademacher_second_moment_identity() {
        for n in [5usize, 50, 128] {
            let s = generate_sequence(Dist::Rademacher, 2 * n - 1, 13).unwrap();
            for kind in [Ensemble::BT, Ensemble::BH] {
                let m = build_matrix(kind, &s, n).unwrap();
                let beta2 = m.trace_of_square() / n as f64;
                let exact = (2 * n - 1) as f64 / n as f64;
                assert!((beta2 - exact).abs() < 1e-12, "{kind} n={n}: {beta2}");
            }
        }
    }

    #[test]
    fn submatrix_dimensions() {
        let s = generate_sequence(Dist::StandardNormal, 799, 1).unwrap();
        let bt = build_matrix(Ensemble::BT, &s, 400).unwrap();
        let bh = build_matrix(Ensemble::BH, &s, 400).unwrap();
        let sub = principal_submatrix(&bt, 0.1).unwrap();
        assert_eq!((sub.n, sub.parent_n, sub.offset), (360, 400, 0));
        let sub = principal_submatrix(&bh, 0.1).unwrap();
        assert_eq!((sub.n, sub.parent_n, sub.offset), (360, 400, 20));
        // 1-based rows 21..=380
        assert_eq!(sub.get(0, 0), bh.get(20, 20));
        assert_eq!(sub.get(359, 359), bh.get(379, 379));
        // odd n * eps: trims floor(n eps / 2) from each side
        let bh = build_matrix(Ensemble::BH, &s, 101).unwrap();
        assert_eq!(principal_submatrix(&bh, 0.05).unwrap().n, 101 - 4);
    }

    #[test]
    fn zero_eps_is_identity() {
        let s = generate_sequence(Dist::StandardNormal, 39, 2).unwrap();
        for kind in [Ensemble::BT, Ensemble::BH] {
            let m = build_matrix(kind, &s, 20).unwrap();
            assert_eq!(principal_submatrix(&m, 0.0).unwrap(), m);
        }
    }

    #[test]
    fn submatrix_scaling_is_bounded() {
        let n = 400;
        let eps = 0.1;
        let s = InputSequence { values: vec![1.0; n], dist: Dist::Rademacher, seed: 0 };
        let bt = build_matrix(Ensemble::BT, &s, n).unwrap();
        let sub = principal_submatrix(&bt, eps).unwrap();
        let bound = 1.0 / ((n as f64) * eps - 1.0).sqrt();
        assert!(sub.max_abs_entry() <= bound);
        for i in 0..sub.n {
            for j in 0..sub.n {
                assert_eq!(sub.get(i, j), bt.get(i, j));
            }
        }
    }

    #[test]
    fn submatrix_errors() {
        let s = generate_sequence(Dist::StandardNormal, 10, 2).unwrap();
        let t = build_matrix(Ensemble::T, &s, 10).unwrap();
        assert!(principal_submatrix(&t, 0.1).is_err());
        let bt = build_matrix(Ensemble::BT, &s, 10).unwrap();
        assert!(principal_submatrix(&bt, 1.0).is_err());
        assert!(principal_submatrix(&bt, -0.1).is_err());
        // the symmetric trim always leaves at least one row
        let bh = build_matrix(Ensemble::BH, &generate_sequence(Dist::StandardNormal, 3, 2).unwrap(), 2).unwrap();
        assert_eq!(principal_submatrix(&bh, 0.99).unwrap().n, 2);
        let one = build_matrix(Ensemble::BT, &s, 1).unwrap();
        assert!(principal_submatrix(&one, 1.0 - 1e-12).is_err());
    }
}
