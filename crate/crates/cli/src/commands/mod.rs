pub mod limit;
pub mod moments;
pub mod simulate;
pub mod verify;
pub mod words;

use anyhow::Context;
use balanced_spectra::io::write_atomic;
use serde::Serialize;
use std::io::Write;
use std::path::Path;

pub const DEFAULT_SEED: u64 = 0;

/// Pretty JSON to `out` (atomically) or to stdout.
pub fn emit_json<T: Serialize>(value: &T, out: Option<&Path>) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(path) => write_atomic(path, text.as_bytes()).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().lock().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}
