//! Experiment configuration shared by every subcommand.
//!
//! A JSON file supplies defaults and command-line flags override it. The
//! file may be a bare config object or a run manifest, whose `config` key is
//! used, so replaying a manifest equals replaying its config.

use anyhow::Context;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::path::{Path, PathBuf};

/// Invalid configuration or flag combination; maps to exit status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Every field is optional so that files and flags can be layered.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subcommand: Option<String>,
    /// Ensemble kind, or a comma separated list for `simulate`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reps: Option<usize>,
    /// Input distribution, or a comma separated list for `simulate`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dist: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bins: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub range: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub batches: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dump_matrix: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<String>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let mut value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| usage(format!("config {} is not JSON: {e}", path.display())))?;
        if let Some(inner) = value.get_mut("config") {
            value = inner.take();
        }
        serde_json::from_value(value).map_err(|e| usage(format!("config {}: {e}", path.display())))
    }

    pub fn load_optional(path: Option<&Path>) -> anyhow::Result<Self> {
        path.map_or_else(|| Ok(Self::default()), Self::load)
    }

    /// `self` with every field that `flags` sets replaced.
    pub fn overlay(self, flags: ExperimentConfig) -> Self {
        macro_rules! pick {
            ($($f:ident),*) => { ExperimentConfig { $($f: flags.$f.or(self.$f)),* } };
        }
        pick!(subcommand, kind, n, reps, dist, seed, k, k_max, eps, method, bins, range, out, samples, batches, dump_matrix, suite)
    }
}

pub fn parse_list<T>(s: &str, what: &str) -> anyhow::Result<Vec<T>>
where
    T: std::str::FromStr,
    T::Err: fmt::Display,
{
    let items = s
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| p.parse::<T>().map_err(|e| usage(format!("{what} '{p}': {e}"))))
        .collect::<anyhow::Result<Vec<T>>>()?;
    if items.is_empty() {
        return Err(usage(format!("empty {what} list")));
    }
    Ok(items)
}

pub fn positive(value: usize, what: &str) -> anyhow::Result<usize> {
    if value == 0 {
        return Err(usage(format!("{what} must be positive")));
    }
    Ok(value)
}

pub fn check_eps(eps: &[f64]) -> anyhow::Result<()> {
    match eps.iter().find(|e| !(**e > 0.0 && **e < 1.0)) {
        Some(e) => Err(usage(format!("eps values must lie in (0, 1), got {e}"))),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_win() {
        let file = ExperimentConfig { n: Some(10), seed: Some(1), ..Default::default() };
        let flags = ExperimentConfig { n: Some(20), ..Default::default() };
        let merged = file.overlay(flags);
        assert_eq!(merged.n, Some(20));
        assert_eq!(merged.seed, Some(1));
    }

    #[test]
    fn manifest_config_key_is_used() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("m.json");
        std::fs::write(&p, r#"{"tool": "x", "config": {"n": 7, "kind": "bt"}}"#).unwrap();
        let cfg = ExperimentConfig::load(&p).unwrap();
        assert_eq!(cfg.n, Some(7));
        assert_eq!(cfg.kind.as_deref(), Some("bt"));
    }

    #[test]
    fn unknown_keys_are_usage_errors() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.json");
        std::fs::write(&p, r#"{"nn": 7}"#).unwrap();
        assert!(ExperimentConfig::load(&p).unwrap_err().is::<UsageError>());
    }

    #[test]
    fn lists() {
        let v: Vec<u32> = parse_list("1, 2,3", "x").unwrap();
        assert_eq!(v, vec![1, 2, 3]);
        assert!(parse_list::<u32>("", "x").is_err());
        assert!(check_eps(&[0.1, 1.0]).is_err());
    }
}
