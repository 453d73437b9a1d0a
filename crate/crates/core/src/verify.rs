//! Fast invariant suites, one per module, for smoke-testing an install.

use crate::error::{Error, Result};
use crate::inputs::{generate_sequence, truncate_standardize, Dist};
use crate::limits::{finite_n_word_moment, limit_moment, truncated_word_moment, Evaluator};
use crate::matgen::{build_matrix, principal_submatrix, Ensemble, LinkKind};
use crate::seed::derive_seed;
use crate::spectra::{
    eigenvalues_symmetric, hoffman_wielandt_gap, levy_distance, pooled_histogram, DEFAULT_BINS,
    DEFAULT_RANGE, DEFAULT_TOL,
};
use crate::words::{enumerate_pair_matched_words, is_symmetric, linear_forms, Word};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Inputs,
    Matgen,
    Spectra,
    Words,
    Limits,
    All,
}

impl Suite {
    const EACH: [Suite; 5] = [Suite::Inputs, Suite::Matgen, Suite::Spectra, Suite::Words, Suite::Limits];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Inputs => "inputs",
            Suite::Matgen => "matgen",
            Suite::Spectra => "spectra",
            Suite::Words => "words",
            Suite::Limits => "limits",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::EACH
            .into_iter()
            .chain([Suite::All])
            .find(|x| x.name() == s.to_ascii_lowercase())
            .ok_or_else(|| Error::invalid(format!("unknown suite '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub suite: String,
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

struct Checks {
    suite: Suite,
    out: Vec<CheckResult>,
}

impl Checks {
    fn record(&mut self, name: &str, pass: bool, detail: String) {
        self.out.push(CheckResult { suite: self.suite.to_string(), name: name.to_string(), pass, detail });
    }
}

/// Run a suite (or all of them). Checks that fail are reported, not
/// raised; errors only come from the machinery itself.
pub fn run_suite(suite: Suite, seed: u64) -> Result<Vec<CheckResult>> {
    if suite == Suite::All {
        let mut out = Vec::new();
        for s in Suite::EACH {
            out.extend(run_suite(s, seed)?);
        }
        return Ok(out);
    }
    let mut c = Checks { suite, out: Vec::new() };
    match suite {
        Suite::Inputs => inputs(&mut c, seed)?,
        Suite::Matgen => matgen(&mut c, seed)?,
        Suite::Spectra => spectra(&mut c, seed)?,
        Suite::Words => words(&mut c)?,
        Suite::Limits => limits(&mut c, seed)?,
        Suite::All => unreachable!(),
    }
    Ok(c.out)
}

fn inputs(c: &mut Checks, seed: u64) -> Result<()> {
    let n = 100_000;
    for dist in [Dist::StandardNormal, Dist::Rademacher, Dist::BoundedUniform] {
        let a = generate_sequence(dist, n, seed)?;
        let b = generate_sequence(dist, n, seed)?;
        c.record(&format!("{dist} reproducible"), a.values == b.values, String::new());
        let mean = a.values.iter().sum::<f64>() / n as f64;
        let var = a.values.iter().map(|x| x * x).sum::<f64>() / n as f64 - mean * mean;
        let tol = 5.0 / (n as f64).sqrt();
        c.record(
            &format!("{dist} moments"),
            mean.abs() < tol && (var - 1.0).abs() < 2.0 * tol,
            format!("mean {mean:.5}, variance {var:.5}"),
        );
    }
    let seq = generate_sequence(Dist::StandardNormal, n, seed)?;
    let t = truncate_standardize(&seq, 2.0)?;
    let bounded = t.values.iter().all(|x| x.is_finite());
    let mean = t.values.iter().sum::<f64>() / n as f64;
    let var = t.values.iter().map(|x| x * x).sum::<f64>() / n as f64 - mean * mean;
    c.record(
        "truncation standardizes",
        bounded && mean.abs() < 0.05 && (var - 1.0).abs() < 0.05,
        format!("mean {mean:.5}, variance {var:.5}"),
    );
    Ok(())
}

fn matgen(c: &mut Checks, seed: u64) -> Result<()> {
    for kind in [Ensemble::BT, Ensemble::BH] {
        for n in [50usize, 400] {
            let seq = generate_sequence(Dist::Rademacher, kind.required_len(n), seed)?;
            let m = build_matrix(kind, &seq, n)?;
            let got = m.trace_of_square() / n as f64;
            let want = (2 * n - 1) as f64 / n as f64;
            c.record(
                &format!("{kind} second-moment identity n={n}"),
                (got - want).abs() < 1e-12,
                format!("{got:.15} vs {want:.15}"),
            );
        }
    }
    let seq = generate_sequence(Dist::StandardNormal, Ensemble::BH.required_len(400), seed)?;
    let bt = principal_submatrix(&build_matrix(Ensemble::BT, &seq, 400)?, 0.1)?;
    let bh = principal_submatrix(&build_matrix(Ensemble::BH, &seq, 400)?, 0.1)?;
    c.record(
        "truncated dimensions",
        bt.n == 360 && bt.offset == 0 && bh.n == 360 && bh.offset == 20,
        format!("bt {} @ {}, bh {} @ {}", bt.n, bt.offset, bh.n, bh.offset),
    );
    Ok(())
}

fn spectra(c: &mut Checks, seed: u64) -> Result<()> {
    let n = 30;
    let seq = generate_sequence(Dist::StandardNormal, Ensemble::BH.required_len(n), seed)?;
    for kind in Ensemble::ALL {
        let m = build_matrix(kind, &seq, n)?;
        let spec = eigenvalues_symmetric(&m, DEFAULT_TOL)?;
        let tr: f64 = spec.eigenvalues.iter().sum();
        let tr2: f64 = spec.eigenvalues.iter().map(|l| l * l).sum();
        let scale = m.trace_of_square().max(1.0);
        c.record(
            &format!("{kind} trace identities"),
            (tr - m.trace()).abs() < 1e-10 * scale && (tr2 - m.trace_of_square()).abs() < 1e-10 * scale,
            format!("Σλ {tr:.6}, Σλ² {tr2:.6}"),
        );
    }
    let mut worst = f64::NEG_INFINITY;
    for r in 0..10u64 {
        let a = generate_sequence(Dist::StandardNormal, n, derive_seed(seed, 2 * r))?;
        let b = generate_sequence(Dist::StandardNormal, n, derive_seed(seed, 2 * r + 1))?;
        let (lhs, rhs) =
            hoffman_wielandt_gap(&build_matrix(Ensemble::BT, &a, n)?, &build_matrix(Ensemble::BT, &b, n)?)?;
        worst = worst.max(lhs - rhs);
    }
    c.record("Hoffman-Wielandt", worst <= 1e-9, format!("max lhs - rhs {worst:.3e}"));
    let m = build_matrix(Ensemble::BT, &seq, n)?;
    let spec = eigenvalues_symmetric(&m, DEFAULT_TOL)?;
    let d = levy_distance(&spec.esd(), &spec.esd());
    c.record("Lévy self-distance", d < 1e-9, format!("{d:.3e}"));
    let hist = pooled_histogram(&[spec], DEFAULT_BINS, DEFAULT_RANGE)?;
    let err = hist.normalization_error();
    c.record("histogram normalization", err < 1e-9, format!("{err:.3e}"));
    Ok(())
}

fn words(c: &mut Checks) -> Result<()> {
    for k in 1..=5usize {
        let words = enumerate_pair_matched_words(k)?;
        let pairings: usize = (1..=k).map(|j| 2 * j - 1).product();
        let factorial: usize = (1..=k).product();
        let sym = words.iter().filter(|w| is_symmetric(w)).count();
        c.record(
            &format!("counts k={k}"),
            words.len() == pairings && sym == factorial,
            format!("{} words, {sym} symmetric", words.len()),
        );
        let toeplitz = words.iter().all(|w| linear_forms(w, LinkKind::T).closure);
        let hankel = words.iter().all(|w| linear_forms(w, LinkKind::H).closure == is_symmetric(w));
        c.record(&format!("closure k={k}"), toeplitz && hankel, String::new());
    }
    Ok(())
}

fn limits(c: &mut Checks, seed: u64) -> Result<()> {
    let aa: Word = "aa".parse()?;
    for kind in [LinkKind::T, LinkKind::H] {
        let got = finite_n_word_moment(&aa, kind, 10)?.value;
        c.record(&format!("finite-n aa {kind}"), (got - 1.9).abs() < 1e-13, format!("{got:.15}"));
        let q = limit_moment(1, kind, &Evaluator::quadrature())?.value;
        c.record(&format!("quadrature m2 {kind}"), (q - 2.0).abs() < 1e-3, format!("{q:.6}"));
    }
    let eps = 0.1f64;
    let want = 2.0 * (1.0 - eps + eps * eps.ln());
    let t = truncated_word_moment(&aa, LinkKind::T, eps, &Evaluator::mc_ladder(seed))?;
    c.record(
        "truncated aa closed form",
        (t.value - want).abs() < 0.01,
        format!("{:.5} ± {:.5} vs {want:.5}", t.value, t.std_error),
    );
    let abab: Word = "abab".parse()?;
    let v10 = finite_n_word_moment(&abab, LinkKind::H, 10)?.value;
    let v20 = finite_n_word_moment(&abab, LinkKind::H, 20)?.value;
    c.record("Hankel non-symmetric decay", v20 < v10, format!("{v10:.5} -> {v20:.5}"));
    Ok(())
}
