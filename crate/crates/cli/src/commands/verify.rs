use super::DEFAULT_SEED;
use crate::config::ExperimentConfig;
use balanced_spectra::verify::{run_suite, Suite};
use std::process::ExitCode;

pub fn run(cfg: ExperimentConfig) -> anyhow::Result<ExitCode> {
    let suite: Suite = cfg.suite.as_deref().unwrap_or("all").parse()?;
    let results = run_suite(suite, cfg.seed.unwrap_or(DEFAULT_SEED))?;
    let failed = results.iter().filter(|r| !r.pass).count();
    for r in &results {
        let status = if r.pass { "PASS" } else { "FAIL" };
        if r.detail.is_empty() {
            println!("{status} {}::{}", r.suite, r.name);
        } else {
            println!("{status} {}::{} ({})", r.suite, r.name, r.detail);
        }
    }
    println!("{} checks, {failed} failed", results.len());
    Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
