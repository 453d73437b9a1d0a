use super::DEFAULT_SEED;
use crate::config::{check_eps, parse_list, positive, usage, ExperimentConfig};
use anyhow::Context;
use balanced_spectra::io::{fmt_f64, write_atomic};
use balanced_spectra::seed::derive_seed;
use balanced_spectra::spectra::{write_eigenvalues_csv, DEFAULT_BINS, DEFAULT_RANGE, DEFAULT_TOL};
use balanced_spectra::{
    build_matrix, eigenvalues_symmetric, generate_sequence, levy_distance, moment, pooled_histogram,
    principal_submatrix, Dist, Ensemble, Spectrum,
};
use rayon::prelude::*;
use serde::Serialize;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

struct Plan {
    kinds: Vec<Ensemble>,
    dists: Vec<Dist>,
    n: usize,
    reps: usize,
    seed: u64,
    bins: usize,
    range: (f64, f64),
    eps: Vec<f64>,
    out: PathBuf,
    dump_matrix: bool,
}

fn resolve(cfg: &ExperimentConfig) -> anyhow::Result<Plan> {
    let kinds = parse_list(cfg.kind.as_deref().unwrap_or("bt"), "kind")?;
    let dists = parse_list(cfg.dist.as_deref().unwrap_or("normal"), "dist")?;
    let n = positive(cfg.n.unwrap_or(400), "n")?;
    let reps = positive(cfg.reps.unwrap_or(15), "reps")?;
    let bins = positive(cfg.bins.unwrap_or(DEFAULT_BINS), "bins")?;
    let [lo, hi] = cfg.range.unwrap_or([DEFAULT_RANGE.0, DEFAULT_RANGE.1]);
    if !(lo < hi && lo.is_finite() && hi.is_finite()) {
        return Err(usage(format!("range must satisfy lo < hi, got [{lo}, {hi}]")));
    }
    let eps = cfg.eps.clone().unwrap_or_default();
    check_eps(&eps)?;
    let out = cfg.out.clone().ok_or_else(|| usage("simulate needs --out"))?;
    Ok(Plan {
        kinds,
        dists,
        n,
        reps,
        seed: cfg.seed.unwrap_or(DEFAULT_SEED),
        bins,
        range: (lo, hi),
        eps,
        out,
        dump_matrix: cfg.dump_matrix.unwrap_or(false),
    })
}

impl Plan {
    /// Fully populated config, so a replay does not depend on defaults.
    fn config(&self) -> ExperimentConfig {
        let join = |v: Vec<&str>| v.join(",");
        ExperimentConfig {
            subcommand: Some("simulate".into()),
            kind: Some(join(self.kinds.iter().map(|k| k.name()).collect())),
            dist: Some(join(self.dists.iter().map(|d| d.name()).collect())),
            n: Some(self.n),
            reps: Some(self.reps),
            seed: Some(self.seed),
            bins: Some(self.bins),
            range: Some([self.range.0, self.range.1]),
            eps: (!self.eps.is_empty()).then(|| self.eps.clone()),
            out: Some(self.out.clone()),
            dump_matrix: Some(self.dump_matrix),
            ..Default::default()
        }
    }
}

#[derive(Serialize)]
struct HistogramAudit {
    total: u64,
    underflow: u64,
    overflow: u64,
    mass: f64,
    out_of_range_fraction: f64,
    normalization_error: f64,
}

#[derive(Serialize)]
struct RunRecord {
    kind: Ensemble,
    dist: Dist,
    dir: String,
    seeds: Vec<u64>,
    files: Vec<String>,
    mean_beta2: f64,
    mean_beta4: f64,
    histogram: HistogramAudit,
    wall_seconds: f64,
}

#[derive(Serialize)]
struct Manifest {
    tool: &'static str,
    version: &'static str,
    config: ExperimentConfig,
    runs: Vec<RunRecord>,
    wall_seconds: f64,
}

struct Realization {
    spectrum: Spectrum,
    levy: Vec<f64>,
}

fn write(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    write_atomic(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn simulate_one(plan: &Plan, kind: Ensemble, dist: Dist, dir: &Path) -> anyhow::Result<RunRecord> {
    let start = Instant::now();
    let seeds: Vec<u64> = (0..plan.reps as u64).map(|r| derive_seed(plan.seed, r)).collect();
    let eps: &[f64] = if kind.is_balanced() { &plan.eps } else { &[] };
    let runs = seeds
        .par_iter()
        .map(|&s| {
            let seq = generate_sequence(dist, kind.required_len(plan.n), s)?;
            let mat = build_matrix(kind, &seq, plan.n)?;
            let spectrum = eigenvalues_symmetric(&mat, DEFAULT_TOL)?;
            let full = spectrum.esd();
            let levy = eps
                .iter()
                .map(|&e| {
                    let sub = eigenvalues_symmetric(&principal_submatrix(&mat, e)?, DEFAULT_TOL)?;
                    Ok(levy_distance(&full, &sub.esd()))
                })
                .collect::<balanced_spectra::Result<Vec<f64>>>()?;
            Ok(Realization { spectrum, levy })
        })
        .collect::<balanced_spectra::Result<Vec<_>>>()?;
    let spectra: Vec<Spectrum> = runs.iter().map(|r| r.spectrum.clone()).collect();
    let hist = pooled_histogram(&spectra, plan.bins, plan.range)?;
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;

    let mut files = vec!["eigenvalues.csv".to_string(), "histogram.csv".to_string(), "histogram.svg".to_string()];
    let mut buf = Vec::new();
    write_eigenvalues_csv(&spectra, &mut buf)?;
    write(&dir.join("eigenvalues.csv"), &buf)?;
    buf.clear();
    hist.write_csv(&mut buf)?;
    write(&dir.join("histogram.csv"), &buf)?;
    let title = format!("{kind}, {dist} input, n = {}, {} realizations", plan.n, plan.reps);
    write(&dir.join("histogram.svg"), hist.to_svg(&title).as_bytes())?;
    if !eps.is_empty() {
        let mut csv = String::from("realization,eps,levy_distance\n");
        for (r, run) in runs.iter().enumerate() {
            for (e, d) in eps.iter().zip(&run.levy) {
                csv.push_str(&format!("{r},{},{}\n", fmt_f64(*e), fmt_f64(*d)));
            }
        }
        write(&dir.join("levy.csv"), csv.as_bytes())?;
        files.push("levy.csv".into());
    }
    if plan.dump_matrix {
        let seq = generate_sequence(dist, kind.required_len(plan.n), seeds[0])?;
        buf.clear();
        build_matrix(kind, &seq, plan.n)?.write_csv(&mut buf)?;
        write(&dir.join("matrix.csv"), &buf)?;
        files.push("matrix.csv".into());
    }
    let mean = |h: u32| spectra.iter().map(|s| moment(s, h)).sum::<f64>() / spectra.len() as f64;
    Ok(RunRecord {
        kind,
        dist,
        dir: String::new(),
        seeds,
        files,
        mean_beta2: mean(2),
        mean_beta4: mean(4),
        histogram: HistogramAudit {
            total: hist.total,
            underflow: hist.underflow,
            overflow: hist.overflow,
            mass: hist.mass(),
            out_of_range_fraction: hist.out_of_range_fraction(),
            normalization_error: hist.normalization_error(),
        },
        wall_seconds: start.elapsed().as_secs_f64(),
    })
}

pub fn run(cfg: ExperimentConfig) -> anyhow::Result<ExitCode> {
    let plan = resolve(&cfg)?;
    let start = Instant::now();
    let multi = plan.kinds.len() * plan.dists.len() > 1;
    let mut runs = Vec::new();
    for &kind in &plan.kinds {
        for &dist in &plan.dists {
            let sub = if multi { format!("{kind}_{dist}") } else { String::new() };
            let dir = if multi { plan.out.join(&sub) } else { plan.out.clone() };
            let mut rec = simulate_one(&plan, kind, dist, &dir)?;
            rec.dir = sub;
            println!(
                "{kind} {dist}: n = {}, {} realizations, mean beta2 = {:.6}, mean beta4 = {:.6} -> {}",
                plan.n,
                plan.reps,
                rec.mean_beta2,
                rec.mean_beta4,
                dir.display()
            );
            runs.push(rec);
        }
    }
    let manifest = Manifest {
        tool: "balanced-spectra",
        version: env!("CARGO_PKG_VERSION"),
        config: plan.config(),
        runs,
        wall_seconds: start.elapsed().as_secs_f64(),
    };
    let mut text = serde_json::to_string_pretty(&manifest)?;
    text.push('\n');
    write(&plan.out.join("manifest.json"), text.as_bytes())?;
    Ok(ExitCode::SUCCESS)
}
