use super::emit_json;
use crate::config::{positive, ExperimentConfig};
use balanced_spectra::words::MAX_WORD_K;
use balanced_spectra::{enumerate_pair_matched_words, is_symmetric, linear_forms, LinkKind, Word};
use serde::Serialize;
use std::process::ExitCode;

#[derive(Serialize)]
struct WordReport {
    word: Word,
    symmetric: bool,
    #[serde(rename = "S")]
    support: Vec<usize>,
    forms: Vec<Vec<i64>>,
    closure: bool,
}

pub fn run(cfg: ExperimentConfig) -> anyhow::Result<ExitCode> {
    let k = positive(cfg.k.unwrap_or(2), "k")?;
    if k > MAX_WORD_K {
        return Err(balanced_spectra::Error::ResourceLimit(format!("k = {k} exceeds the cap of {MAX_WORD_K}")).into());
    }
    let kind: LinkKind = cfg.kind.as_deref().unwrap_or("t").parse()?;
    let report: Vec<WordReport> = enumerate_pair_matched_words(k)?
        .into_iter()
        .map(|w| {
            let f = linear_forms(&w, kind);
            WordReport {
                symmetric: is_symmetric(&w),
                support: f.support,
                forms: f.forms.into_iter().map(|l| l.coeffs).collect(),
                closure: f.closure,
                word: w,
            }
        })
        .collect();
    emit_json(&report, cfg.out.as_deref())?;
    Ok(ExitCode::SUCCESS)
}
