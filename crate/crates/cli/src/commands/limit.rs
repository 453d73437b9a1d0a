use super::{emit_json, DEFAULT_SEED};
use crate::config::{check_eps, positive, usage, ExperimentConfig};
use balanced_spectra::limits::{
    finite_n_word_moment, limit_moment_of_order, MomentParams, MonteCarloConfig, WordContribution,
    DEFAULT_RUNGS,
};
use balanced_spectra::{
    enumerate_pair_matched_words, is_symmetric, limit_word_moment, truncated_word_moment, Evaluator,
    LimitMoment, LinkKind, Method, MomentEstimate, Word,
};
use std::process::ExitCode;

pub struct Options {
    pub order: Option<usize>,
    pub truncated: bool,
    pub finite_n: Option<usize>,
    pub word: Option<String>,
}

fn evaluator(cfg: &ExperimentConfig, truncated: bool) -> anyhow::Result<Evaluator> {
    let seed = cfg.seed.unwrap_or(DEFAULT_SEED);
    let mut eval = Evaluator::from_tag(cfg.method.as_deref().unwrap_or("mc-ladder"), seed)?;
    if let Evaluator::MonteCarlo { mc, rungs, .. } = &mut eval {
        let defaults = MonteCarloConfig::default();
        *mc = MonteCarloConfig {
            samples: positive(cfg.samples.unwrap_or(defaults.samples), "samples")?,
            batches: positive(cfg.batches.unwrap_or(defaults.batches), "batches")?,
        };
        if !truncated {
            *rungs = cfg.eps.clone().unwrap_or_else(|| DEFAULT_RUNGS.to_vec());
            check_eps(rungs)?;
            if rungs.len() < 3 {
                return Err(usage("the ladder needs at least three eps rungs"));
            }
        }
    }
    Ok(eval)
}

/// Per-word sum for evaluations without a dedicated aggregate.
fn aggregate(kind: LinkKind, k: usize, method: Method, params: MomentParams, parts: Vec<MomentEstimate>) -> LimitMoment {
    let value = parts.iter().map(|e| e.value).sum();
    let std_error = parts.iter().map(|e| e.std_error.powi(2)).sum::<f64>().sqrt();
    let per_word = parts
        .into_iter()
        .filter_map(|e| {
            let w = e.word?;
            Some(WordContribution { symmetric: is_symmetric(&w), word: w, value: e.value, std_error: e.std_error })
        })
        .collect();
    LimitMoment { kind, order: 2 * k, k, method, value, std_error, per_word, ladder: None, params }
}

pub fn run(cfg: ExperimentConfig, opts: Options) -> anyhow::Result<ExitCode> {
    let kind: LinkKind = cfg.kind.as_deref().unwrap_or("bt").parse()?;
    let word: Option<Word> = opts.word.as_deref().map(str::parse).transpose()?;
    let order = match (opts.order, cfg.k, &word) {
        (Some(h), _, _) => positive(h, "order")?,
        (None, Some(k), _) => 2 * positive(k, "k")?,
        (None, None, Some(w)) => w.len(),
        (None, None, None) => 2,
    };
    if let Some(w) = &word {
        if w.len() != order {
            return Err(usage(format!("word {w} has length {}, not the requested order {order}", w.len())));
        }
    }
    let out = cfg.out.as_deref();

    if let Some(n) = opts.finite_n {
        let n = positive(n, "finite-n")?;
        if order % 2 == 1 {
            return Err(usage("the finite-n oracle is defined for even orders"));
        }
        let words = match word {
            Some(w) => vec![w],
            None => enumerate_pair_matched_words(order / 2)?,
        };
        let parts = words.iter().map(|w| finite_n_word_moment(w, kind, n)).collect::<Result<Vec<_>, _>>()?;
        if parts.len() == 1 && opts.word.is_some() {
            emit_json(&parts[0], out)?;
        } else {
            let params = MomentParams { n: Some(n), ..Default::default() };
            emit_json(&aggregate(kind, order / 2, Method::FiniteN, params, parts), out)?;
        }
        return Ok(ExitCode::SUCCESS);
    }

    let eval = evaluator(&cfg, opts.truncated)?;
    if opts.truncated {
        let eps = match cfg.eps.as_deref() {
            Some([e]) => *e,
            _ => return Err(usage("--truncated needs exactly one --eps value")),
        };
        check_eps(&[eps])?;
        if order % 2 == 1 {
            return Err(usage("truncated moments are computed for even orders"));
        }
        let words = match word {
            Some(w) => vec![w],
            None => enumerate_pair_matched_words(order / 2)?,
        };
        let parts = words.iter().map(|w| truncated_word_moment(w, kind, eps, &eval)).collect::<Result<Vec<_>, _>>()?;
        if opts.word.is_some() {
            emit_json(&parts[0], out)?;
        } else {
            let method = parts.iter().map(|p| p.method).find(|m| *m != Method::Analytic).unwrap_or(Method::Analytic);
            let params = MomentParams { eps: Some(eps), ..parts[0].params.clone() };
            emit_json(&aggregate(kind, order / 2, method, params, parts), out)?;
        }
        return Ok(ExitCode::SUCCESS);
    }

    match word {
        Some(w) => emit_json(&limit_word_moment(&w, kind, &eval)?, out)?,
        None => emit_json(&limit_moment_of_order(order, kind, &eval)?, out)?,
    }
    Ok(ExitCode::SUCCESS)
}
