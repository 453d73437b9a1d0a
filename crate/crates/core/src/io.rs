//! Output helpers: round-trip number formatting and atomic file writes.

use std::io::Write;
use std::path::Path;

/// 17 significant digits, `.` decimal separator, round-trip safe.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 {
        // avoid "-0" vs "0" churn between otherwise identical runs
        return "0.0000000000000000e0".to_string();
    }
    format!("{x:.16e}")
}

/// Write via a temporary file in the target directory followed by a rename.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir)?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}
