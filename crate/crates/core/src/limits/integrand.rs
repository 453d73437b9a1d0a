//! Per-word integrands shared by the quadrature, Monte Carlo and finite-n
//! evaluators.
//!
//! Vertex values are propagated along the word with the same recurrences as
//! [`crate::words::linear_forms`]; one occupancy factor is charged per
//! generating position, evaluated at `(L_{i-1}, x_i)`.

use crate::matgen::{phi_unchecked, LinkKind};
use crate::words::{Step, Word};

/// Continuum occupancy density on the unit square.
#[inline]
pub fn phi_limit(kind: LinkKind, x: f64, y: f64) -> f64 {
    match kind {
        LinkKind::T => 1.0 - (x - y).abs(),
        LinkKind::H => (x + y).min(2.0 - x - y),
    }
}

#[derive(Debug, Clone)]
pub struct WordIntegrand {
    steps: Vec<Step>,
    kind: LinkKind,
    dim: usize,
}

impl WordIntegrand {
    pub fn new(word: &Word, kind: LinkKind) -> Self {
        WordIntegrand { steps: word.steps(), kind, dim: word.k() + 1 }
    }

    /// Number of generating coordinates, `k + 1`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Scratch buffer length for [`Self::eval`].
    pub fn vertices(&self) -> usize {
        self.steps.len() + 1
    }

    /// Integrand at generating coordinates `xs`, with every dependent vertex
    /// except the last required to lie in `[lo, hi]`.
    #[inline]
    pub fn eval(&self, xs: &[f64], lo: f64, hi: f64, v: &mut [f64]) -> f64 {
        let last = self.steps.len();
        v[0] = xs[0];
        let mut denom = 1.0;
        for (idx, step) in self.steps.iter().enumerate() {
            let i = idx + 1;
            match *step {
                Step::Open { slot } => {
                    let x = xs[slot];
                    denom *= phi_limit(self.kind, v[i - 1], x);
                    v[i] = x;
                }
                Step::Close { partner: j } => {
                    let x = match self.kind {
                        LinkKind::T => v[i - 1] + v[j - 1] - v[j],
                        LinkKind::H => v[j - 1] + v[j] - v[i - 1],
                    };
                    if i != last && !(lo <= x && x <= hi) {
                        return 0.0;
                    }
                    v[i] = x;
                }
            }
        }
        if denom > 0.0 {
            1.0 / denom
        } else {
            0.0
        }
    }

    /// Exact sum over integer generating coordinates in `lo..=hi` at matrix
    /// order `n`, of `Π n / φ(L_{i-1}, x_i)` over admissible circuits
    /// (dependent vertices in range, `L_{2k} = x_0`). Not normalized.
    pub fn discrete_sum_from(&self, n: usize, lo: i64, hi: i64, x0: i64) -> f64 {
        let mut v = vec![0i64; self.vertices()];
        v[0] = x0;
        self.dfs(n, lo, hi, 1, 1.0, &mut v)
    }

    fn dfs(&self, n: usize, lo: i64, hi: i64, i: usize, weight: f64, v: &mut [i64]) -> f64 {
        if i > self.steps.len() {
            return weight;
        }
        let nf = n as f64;
        match self.steps[i - 1] {
            Step::Open { .. } => {
                let mut acc = 0.0;
                for x in lo..=hi {
                    v[i] = x;
                    let p = phi_unchecked(self.kind, n, v[i - 1] as usize, x as usize) as f64;
                    acc += self.dfs(n, lo, hi, i + 1, weight * nf / p, v);
                }
                acc
            }
            Step::Close { partner: j } => {
                let x = match self.kind {
                    LinkKind::T => v[i - 1] + v[j - 1] - v[j],
                    LinkKind::H => v[j - 1] + v[j] - v[i - 1],
                };
                if i == self.steps.len() {
                    if x != v[0] {
                        return 0.0;
                    }
                } else if x < lo || x > hi {
                    return 0.0;
                }
                v[i] = x;
                self.dfs(n, lo, hi, i + 1, weight, v)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::linear_forms;

    #[test]
    fn propagation_matches_symbolic_forms() {
        for k in 1..=4 {
            for w in crate::words::enumerate_pair_matched_words(k).unwrap() {
                for kind in [LinkKind::T, LinkKind::H] {
                    let f = WordIntegrand::new(&w, kind);
                    let forms = linear_forms(&w, kind);
                    let xs: Vec<f64> = (0..=k).map(|s| 0.1 + 0.13 * s as f64).collect();
                    let mut v = vec![0.0; f.vertices()];
                    // wide range so no vertex is rejected
                    f.eval(&xs, -1e9, 1e9, &mut v);
                    for (i, form) in forms.forms.iter().enumerate() {
                        assert!((v[i] - form.evaluate(&xs)).abs() < 1e-12, "{w} {kind} vertex {i}");
                    }
                }
            }
        }
    }

    #[test]
    fn aa_integrand() {
        let w: Word = "aa".parse().unwrap();
        let f = WordIntegrand::new(&w, LinkKind::T);
        let mut v = vec![0.0; 3];
        assert!((f.eval(&[0.2, 0.7], 0.0, 1.0, &mut v) - 1.0 / 0.5).abs() < 1e-15);
        let f = WordIntegrand::new(&w, LinkKind::H);
        assert!((f.eval(&[0.2, 0.7], 0.0, 1.0, &mut v) - 1.0 / 0.9).abs() < 1e-15);
    }
}
