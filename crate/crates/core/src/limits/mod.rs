//! Limiting, ε-truncated and exact finite-n moments of the balanced
//! ensembles, word by word.
//!
//! Each pair-matched word `w` of length `2k` contributes
//! `E[ I(dependent L_i ∈ (0,1)) / Π_{i ∈ S \ {0}} φ^∞(L_{i-1}, U_i) ]` with
//! `U_S` uniform on the unit cube. The integrand is singular on the faces
//! where `φ^∞` vanishes and has infinite variance, so the limit is reached
//! either by graded tensor quadrature (`k <= 3`) or by Monte Carlo on the
//! bounded ε-truncated domain followed by extrapolation to ε = 0.

mod compare;
mod integrand;
mod ladder;
mod montecarlo;
mod quadrature;

pub use compare::{
    compare_empirical_limit, empirical_moments, truncated_trace_moments, ComparisonConfig,
    ComparisonReport, ComparisonRow, Tolerances,
};
pub use integrand::{phi_limit, WordIntegrand};
pub use ladder::{extrapolate, LadderTable, DEFAULT_RUNGS};
pub use montecarlo::MonteCarloConfig;
pub use quadrature::{gauss_legendre, graded_rule, QuadratureConfig};

use crate::error::{Error, Result};
use crate::matgen::{truncation_range, Ensemble, LinkKind};
use crate::seed::derive_path;
use crate::words::{enumerate_pair_matched_words, is_symmetric, Word};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Largest `k` handled by tensor quadrature.
pub const MAX_QUADRATURE_K: usize = 3;
/// Largest number of leaves the finite-n enumeration will visit.
pub const FINITE_N_BUDGET: f64 = 1e9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    FiniteN,
    Quadrature,
    #[serde(rename = "mc-ladder")]
    MCLadder,
    /// Plain Monte Carlo on a truncated domain.
    MonteCarlo,
    Analytic,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::FiniteN => "finite-n",
            Method::Quadrature => "quadrature",
            Method::MCLadder => "mc-ladder",
            Method::MonteCarlo => "monte-carlo",
            Method::Analytic => "analytic",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters an estimate was produced with. Absent fields do not apply.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct MomentParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub batches: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_ladder: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentEstimate {
    pub value: f64,
    /// Zero for exact methods.
    pub std_error: f64,
    pub method: Method,
    pub params: MomentParams,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub word: Option<Word>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ladder: Option<LadderTable>,
}

impl MomentEstimate {
    fn exact(value: f64, method: Method, params: MomentParams, word: Option<Word>) -> Self {
        MomentEstimate { value, std_error: 0.0, method, params, word, ladder: None }
    }
}

/// How a limiting or truncated integral is evaluated.
#[derive(Debug, Clone, PartialEq)]
pub enum Evaluator {
    Quadrature(QuadratureConfig),
    /// Monte Carlo; limits go through the ε ladder `rungs`.
    MonteCarlo { mc: MonteCarloConfig, rungs: Vec<f64>, seed: u64 },
}

impl Evaluator {
    pub fn quadrature() -> Self {
        Evaluator::Quadrature(QuadratureConfig::default())
    }

    pub fn mc_ladder(seed: u64) -> Self {
        Evaluator::MonteCarlo { mc: MonteCarloConfig::default(), rungs: DEFAULT_RUNGS.to_vec(), seed }
    }

    /// Defaults for a method tag (`quadrature`, `mc-ladder`).
    pub fn from_tag(tag: &str, seed: u64) -> Result<Self> {
        match tag.parse::<MethodTag>()? {
            MethodTag::Quadrature => Ok(Self::quadrature()),
            MethodTag::MCLadder => Ok(Self::mc_ladder(seed)),
        }
    }

    fn limit_method(&self) -> Method {
        match self {
            Evaluator::Quadrature(_) => Method::Quadrature,
            Evaluator::MonteCarlo { .. } => Method::MCLadder,
        }
    }

    fn params(&self) -> MomentParams {
        match self {
            Evaluator::Quadrature(cfg) => MomentParams { grid: Some(cfg.points_per_dim), ..Default::default() },
            Evaluator::MonteCarlo { mc, rungs, seed } => MomentParams {
                samples: Some(mc.samples),
                batches: Some(mc.batches),
                eps_ladder: Some(rungs.clone()),
                seed: Some(*seed),
                ..Default::default()
            },
        }
    }
}

/// User-facing method names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MethodTag {
    Quadrature,
    MCLadder,
}

impl FromStr for MethodTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "quadrature" | "quad" => Ok(MethodTag::Quadrature),
            "mc-ladder" | "mc_ladder" | "mcladder" | "ladder" => Ok(MethodTag::MCLadder),
            other => Err(Error::UnknownMethod(other.to_string())),
        }
    }
}

/// Stable per-word seed so a word's estimate does not depend on which
/// other words are evaluated alongside it.
fn word_seed(master: u64, w: &Word) -> u64 {
    let path: Vec<u64> = w.letters().iter().map(|&l| u64::from(l) + 1).collect();
    derive_path(master, &path)
}

/// Domain `[lo, hi]` of each coordinate after ε-truncation.
pub fn truncated_domain(kind: LinkKind, eps: f64) -> (f64, f64) {
    match kind {
        LinkKind::T => (0.0, 1.0 - eps),
        LinkKind::H => (eps / 2.0, 1.0 - eps / 2.0),
    }
}

fn check_finite_budget(range: usize, k: usize) -> Result<()> {
    let leaves = (range as f64).powi(k as i32 + 1);
    if leaves > FINITE_N_BUDGET {
        return Err(Error::ResourceLimit(format!(
            "finite-n enumeration needs {range}^{} = {leaves:.3e} leaves, above {FINITE_N_BUDGET:.0e}",
            k + 1
        )));
    }
    Ok(())
}

fn finite_n_sum(w: &Word, kind: LinkKind, n: usize, lo: usize, hi: usize) -> f64 {
    let f = WordIntegrand::new(w, kind);
    let partial: Vec<f64> = (lo..=hi)
        .into_par_iter()
        .map(|x0| f.discrete_sum_from(n, lo as i64, hi as i64, x0 as i64))
        .collect();
    partial.iter().sum::<f64>() / (n as f64).powi(w.k() as i32 + 1)
}

/// Exact expectation of the word integrand at resolution `n`: generating
/// indices uniform on `{1..n}`, occupancy `φ(kind, n, ·, ·) / n`, and the
/// closure `L_{2k} = x_0` enforced.
pub fn finite_n_word_moment(w: &Word, kind: LinkKind, n: usize) -> Result<MomentEstimate> {
    if n == 0 {
        return Err(Error::invalid("n must be at least 1"));
    }
    check_finite_budget(n, w.k())?;
    let value = finite_n_sum(w, kind, n, 1, n);
    let params = MomentParams { n: Some(n), ..Default::default() };
    Ok(MomentEstimate::exact(value, Method::FiniteN, params, Some(w.clone())))
}

/// The finite-n oracle restricted to the index range kept by the
/// ε-truncated principal submatrix, still normalized by `n`.
pub fn finite_n_truncated_word_moment(w: &Word, kind: LinkKind, n: usize, eps: f64) -> Result<MomentEstimate> {
    let ensemble = match kind {
        LinkKind::T => Ensemble::BT,
        LinkKind::H => Ensemble::BH,
    };
    let (start, m) = truncation_range(ensemble, n, eps)?;
    check_finite_budget(m, w.k())?;
    let value = finite_n_sum(w, kind, n, start + 1, start + m);
    let params = MomentParams { n: Some(n), eps: Some(eps), ..Default::default() };
    Ok(MomentEstimate::exact(value, Method::FiniteN, params, Some(w.clone())))
}

/// Sum of the finite-n oracle over all words of length `2k`.
pub fn finite_n_moment(k: usize, kind: LinkKind, n: usize) -> Result<f64> {
    enumerate_pair_matched_words(k)?
        .iter()
        .map(|w| finite_n_word_moment(w, kind, n).map(|e| e.value))
        .sum()
}

fn check_quadrature_k(k: usize) -> Result<()> {
    if k > MAX_QUADRATURE_K {
        return Err(Error::ResourceLimit(format!(
            "quadrature is limited to k <= {MAX_QUADRATURE_K}, got k = {k}"
        )));
    }
    Ok(())
}

fn hankel_vanishes(w: &Word, kind: LinkKind) -> bool {
    kind == LinkKind::H && !is_symmetric(w)
}

/// ε-truncated integral of the word over `[0, 1-ε]^{k+1}` (Toeplitz) or
/// `[ε/2, 1-ε/2]^{k+1}` (Hankel). Non-symmetric Hankel words are exact 0.
pub fn truncated_word_moment(w: &Word, kind: LinkKind, eps: f64, eval: &Evaluator) -> Result<MomentEstimate> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::invalid(format!("eps must lie in (0, 1), got {eps}")));
    }
    let mut params = eval.params();
    params.eps = Some(eps);
    params.eps_ladder = None;
    if hankel_vanishes(w, kind) {
        return Ok(MomentEstimate::exact(0.0, Method::Analytic, params, Some(w.clone())));
    }
    let f = WordIntegrand::new(w, kind);
    let (lo, hi) = truncated_domain(kind, eps);
    match eval {
        Evaluator::Quadrature(cfg) => {
            check_quadrature_k(w.k())?;
            let value = quadrature::integrate(&f, lo, hi, cfg);
            Ok(MomentEstimate::exact(value, Method::Quadrature, params, Some(w.clone())))
        }
        Evaluator::MonteCarlo { mc, seed, .. } => {
            let s = derive_path(word_seed(*seed, w), &[eps.to_bits()]);
            let (value, std_error) = montecarlo::integrate(&f, lo, hi, mc, s);
            Ok(MomentEstimate {
                value,
                std_error,
                method: Method::MonteCarlo,
                params,
                word: Some(w.clone()),
                ladder: None,
            })
        }
    }
}

/// Sum of [`truncated_word_moment`] over words of length `2k`.
pub fn truncated_moment(k: usize, kind: LinkKind, eps: f64, eval: &Evaluator) -> Result<(f64, f64)> {
    let mut value = 0.0;
    let mut var = 0.0;
    for w in enumerate_pair_matched_words(k)? {
        let e = truncated_word_moment(&w, kind, eps, eval)?;
        value += e.value;
        var += e.std_error * e.std_error;
    }
    Ok((value, var.sqrt()))
}

/// Limiting contribution of one word.
pub fn limit_word_moment(w: &Word, kind: LinkKind, eval: &Evaluator) -> Result<MomentEstimate> {
    let params = eval.params();
    if hankel_vanishes(w, kind) {
        return Ok(MomentEstimate::exact(0.0, Method::Analytic, params, Some(w.clone())));
    }
    let f = WordIntegrand::new(w, kind);
    match eval {
        Evaluator::Quadrature(cfg) => {
            check_quadrature_k(w.k())?;
            let value = quadrature::integrate(&f, 0.0, 1.0, cfg);
            Ok(MomentEstimate::exact(value, Method::Quadrature, params, Some(w.clone())))
        }
        Evaluator::MonteCarlo { mc, rungs, seed } => {
            let base = word_seed(*seed, w);
            let mut values = Vec::with_capacity(rungs.len());
            let mut errors = Vec::with_capacity(rungs.len());
            for (i, &eps) in rungs.iter().enumerate() {
                if !(eps > 0.0 && eps < 1.0) {
                    return Err(Error::invalid(format!("ladder rung {eps} outside (0, 1)")));
                }
                let (lo, hi) = truncated_domain(kind, eps);
                let (v, s) = montecarlo::integrate(&f, lo, hi, mc, derive_path(base, &[i as u64]));
                values.push(v);
                errors.push(s);
            }
            let table = extrapolate(rungs, &values, &errors, w.k())?;
            Ok(MomentEstimate {
                value: table.extrapolated,
                std_error: table.extrapolated_std_error,
                method: Method::MCLadder,
                params,
                word: Some(w.clone()),
                ladder: Some(table),
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordContribution {
    pub word: Word,
    pub symmetric: bool,
    pub value: f64,
    pub std_error: f64,
}

/// A limiting moment with its per-word breakdown.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitMoment {
    pub kind: LinkKind,
    /// Moment order `h`; `k = h / 2`.
    pub order: usize,
    pub k: usize,
    pub method: Method,
    pub value: f64,
    pub std_error: f64,
    pub per_word: Vec<WordContribution>,
    /// Rung-wise sums over words, for the ladder method.
    pub ladder: Option<LadderTable>,
    pub params: MomentParams,
}

/// `m_{2k}` as the sum of the word contributions; errors add in quadrature.
pub fn limit_moment(k: usize, kind: LinkKind, eval: &Evaluator) -> Result<LimitMoment> {
    if k == 0 {
        return Err(Error::invalid("k must be positive"));
    }
    let words = enumerate_pair_matched_words(k)?;
    let estimates = words
        .iter()
        .map(|w| limit_word_moment(w, kind, eval))
        .collect::<Result<Vec<_>>>()?;
    let value = estimates.iter().map(|e| e.value).sum();
    let std_error = estimates.iter().map(|e| e.std_error.powi(2)).sum::<f64>().sqrt();
    let per_word = words
        .iter()
        .zip(&estimates)
        .map(|(w, e)| WordContribution {
            word: w.clone(),
            symmetric: is_symmetric(w),
            value: e.value,
            std_error: e.std_error,
        })
        .collect();
    let ladder = match eval {
        Evaluator::MonteCarlo { rungs, .. } => {
            let mut values = vec![0.0; rungs.len()];
            let mut var = vec![0.0; rungs.len()];
            for t in estimates.iter().filter_map(|e| e.ladder.as_ref()) {
                for i in 0..rungs.len() {
                    values[i] += t.values[i];
                    var[i] += t.std_errors[i].powi(2);
                }
            }
            let errors: Vec<f64> = var.iter().map(|v| v.sqrt()).collect();
            let mut table = extrapolate(rungs, &values, &errors, k)?;
            // the per-word sum is authoritative; it equals the fit of the
            // summed rungs up to rounding since the model is linear
            table.extrapolated = value;
            table.extrapolated_std_error = std_error;
            Some(table)
        }
        Evaluator::Quadrature(_) => None,
    };
    Ok(LimitMoment { kind, order: 2 * k, k, method: eval.limit_method(), value, std_error, per_word, ladder, params: eval.params() })
}

/// Limiting moment of any order `h`; odd orders are exact 0.
pub fn limit_moment_of_order(h: usize, kind: LinkKind, eval: &Evaluator) -> Result<LimitMoment> {
    if h == 0 {
        return Err(Error::invalid("moment order must be positive"));
    }
    if h % 2 == 1 {
        return Ok(LimitMoment {
            kind,
            order: h,
            k: h / 2,
            method: Method::Analytic,
            value: 0.0,
            std_error: 0.0,
            per_word: Vec::new(),
            ladder: None,
            params: MomentParams::default(),
        });
    }
    limit_moment(h / 2, kind, eval)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn small_mc(seed: u64) -> Evaluator {
        Evaluator::MonteCarlo {
            mc: MonteCarloConfig { samples: 200_000, batches: 16 },
            rungs: DEFAULT_RUNGS.to_vec(),
            seed,
        }
    }

    #[test]
    fn aa_finite_n_is_exact() {
        for n in [1usize, 2, 10, 37, 200] {
            let want = (2 * n - 1) as f64 / n as f64;
            for kind in [LinkKind::T, LinkKind::H] {
                let got = finite_n_word_moment(&word("aa"), kind, n).unwrap();
                assert!((got.value - want).abs() < 1e-13, "{kind} n={n}: {}", got.value);
                assert_eq!(got.std_error, 0.0);
                assert_eq!(got.method, Method::FiniteN);
            }
        }
    }

    #[test]
    fn finite_n_budget_guard() {
        let w = word("abcabc");
        assert!(matches!(finite_n_word_moment(&w, LinkKind::T, 200), Err(Error::ResourceLimit(_))));
        assert!(finite_n_word_moment(&w, LinkKind::T, 0).is_err());
    }

    #[test]
    fn abab_hankel_oracle_decays() {
        let v: Vec<f64> = [10, 20, 40]
            .iter()
            .map(|&n| finite_n_word_moment(&word("abab"), LinkKind::H, n).unwrap().value)
            .collect();
        assert!(v[0] > v[1] && v[1] > v[2], "{v:?}");
    }

    #[test]
    fn truncated_aa_closed_form() {
        let eps = 0.1f64;
        let want = 2.0 * (1.0 - eps + eps * eps.ln());
        let q = truncated_word_moment(&word("aa"), LinkKind::T, eps, &Evaluator::quadrature()).unwrap();
        assert!((q.value - want).abs() < 1e-3, "{}", q.value);
        let m = truncated_word_moment(&word("aa"), LinkKind::T, eps, &small_mc(3)).unwrap();
        assert!((m.value - want).abs() < 5.0 * m.std_error + 1e-3, "{} ± {}", m.value, m.std_error);
        assert_eq!(m.method, Method::MonteCarlo);
    }

    #[test]
    fn hankel_nonsymmetric_is_analytic_zero() {
        let e = limit_word_moment(&word("abab"), LinkKind::H, &Evaluator::quadrature()).unwrap();
        assert_eq!(e.value, 0.0);
        assert_eq!(e.method, Method::Analytic);
        let e = truncated_word_moment(&word("abab"), LinkKind::H, 0.1, &small_mc(1)).unwrap();
        assert_eq!(e.value, 0.0);
    }

    #[test]
    fn quadrature_limits_for_k1() {
        for kind in [LinkKind::T, LinkKind::H] {
            let m = limit_moment(1, kind, &Evaluator::quadrature()).unwrap();
            assert!((m.value - 2.0).abs() < 1e-3, "{kind}: {}", m.value);
            assert_eq!(m.per_word.len(), 1);
        }
    }

    #[test]
    fn quadrature_rejects_large_k() {
        let w = word("abcdabcd");
        assert!(matches!(
            limit_word_moment(&w, LinkKind::T, &Evaluator::quadrature()),
            Err(Error::ResourceLimit(_))
        ));
    }

    #[test]
    fn unknown_method_tag() {
        assert!(matches!(Evaluator::from_tag("simpson", 0), Err(Error::UnknownMethod(_))));
        assert!(Evaluator::from_tag("mc-ladder", 0).is_ok());
    }

    #[test]
    fn odd_orders_are_zero() {
        let m = limit_moment_of_order(3, LinkKind::T, &Evaluator::quadrature()).unwrap();
        assert_eq!(m.value, 0.0);
        assert_eq!(m.method, Method::Analytic);
    }

    #[test]
    fn truncated_values_increase_as_eps_shrinks() {
        let eval = Evaluator::quadrature();
        for kind in [LinkKind::T, LinkKind::H] {
            let mut prev = 0.0;
            for eps in [0.4, 0.2, 0.1, 0.05] {
                let (v, _) = truncated_moment(2, kind, eps, &eval).unwrap();
                assert!(v > prev, "{kind} eps={eps}");
                prev = v;
            }
        }
    }

    #[test]
    fn truncated_bound() {
        let eval = Evaluator::quadrature();
        for k in 1..=3usize {
            let pairings: f64 = (1..=k).map(|j| (2 * j - 1) as f64).product();
            for eps in [0.1, 0.2] {
                let (v, _) = truncated_moment(k, LinkKind::T, eps, &eval).unwrap();
                assert!(v <= pairings * eps.powi(-(k as i32)), "k={k} eps={eps}: {v}");
            }
        }
    }

    #[test]
    fn word_seeds_are_independent_of_context() {
        let eval = small_mc(9);
        let alone = limit_word_moment(&word("abab"), LinkKind::T, &eval).unwrap();
        let all = limit_moment(2, LinkKind::T, &eval).unwrap();
        let inside = all.per_word.iter().find(|c| c.word == word("abab")).unwrap();
        assert_eq!(alone.value, inside.value);
    }
}
