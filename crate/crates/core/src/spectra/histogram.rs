use super::Spectrum;
use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::matgen::Ensemble;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::io::Write;

pub const DEFAULT_BINS: usize = 61;
pub const DEFAULT_RANGE: (f64, f64) = (-3.5, 3.5);

/// Density histogram of pooled eigenvalues.
///
/// Densities are normalized by the total pooled count, so
/// `mass() + out_of_range_fraction() == 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramData {
    pub edges: Vec<f64>,
    pub densities: Vec<f64>,
    pub counts: Vec<u64>,
    pub total: u64,
    pub underflow: u64,
    pub overflow: u64,
    pub realizations: usize,
    pub kind: Option<Ensemble>,
    pub n: Option<usize>,
}

impl HistogramData {
    pub fn bins(&self) -> usize {
        self.densities.len()
    }

    /// `Σ density · width`.
    pub fn mass(&self) -> f64 {
        self.densities
            .iter()
            .zip(self.edges.windows(2))
            .map(|(d, e)| d * (e[1] - e[0]))
            .sum()
    }

    pub fn out_of_range_fraction(&self) -> f64 {
        (self.underflow + self.overflow) as f64 / self.total as f64
    }

    /// `|mass + out-of-range fraction - 1|`.
    pub fn normalization_error(&self) -> f64 {
        (self.mass() + self.out_of_range_fraction() - 1.0).abs()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "bin_left,bin_right,density")?;
        for (d, e) in self.densities.iter().zip(self.edges.windows(2)) {
            writeln!(w, "{},{},{}", fmt_f64(e[0]), fmt_f64(e[1]), fmt_f64(*d))?;
        }
        Ok(())
    }

    /// Self-contained SVG bar chart.
    pub fn to_svg(&self, title: &str) -> String {
        const W: f64 = 640.0;
        const H: f64 = 320.0;
        const PAD: f64 = 40.0;
        let lo = self.edges[0];
        let hi = self.edges[self.edges.len() - 1];
        let top = self.densities.iter().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
        let sx = |x: f64| PAD + (x - lo) / (hi - lo) * (W - 2.0 * PAD);
        let sy = |y: f64| H - PAD - y / top * (H - 2.0 * PAD);
        let mut s = String::new();
        let _ = writeln!(
            s,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
        );
        let _ = writeln!(s, r##"<rect width="{W}" height="{H}" fill="#ffffff"/>"##);
        let _ = writeln!(
            s,
            r##"<text x="{}" y="20" font-family="sans-serif" font-size="13" text-anchor="middle" fill="#222222">{}</text>"##,
            W / 2.0,
            xml_escape(title)
        );
        for (d, e) in self.densities.iter().zip(self.edges.windows(2)) {
            if *d <= 0.0 {
                continue;
            }
            let (x0, x1) = (sx(e[0]), sx(e[1]));
            let y = sy(*d);
            let _ = writeln!(
                s,
                r##"<rect x="{x0:.3}" y="{y:.3}" width="{:.3}" height="{:.3}" fill="#4c72b0" stroke="#2b4a7a" stroke-width="0.5"/>"##,
                x1 - x0,
                H - PAD - y
            );
        }
        let _ = writeln!(
            s,
            r##"<line x1="{PAD}" y1="{0}" x2="{1}" y2="{0}" stroke="#222222"/>"##,
            H - PAD,
            W - PAD
        );
        for (x, label) in [(lo, lo), (0.5 * (lo + hi), 0.5 * (lo + hi)), (hi, hi)] {
            let _ = writeln!(
                s,
                r##"<text x="{:.3}" y="{}" font-family="sans-serif" font-size="11" text-anchor="middle" fill="#222222">{label}</text>"##,
                sx(x),
                H - PAD + 15.0
            );
        }
        s.push_str("</svg>\n");
        s
    }
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

pub fn pooled_histogram(spectra: &[Spectrum], bins: usize, range: (f64, f64)) -> Result<HistogramData> {
    if spectra.is_empty() {
        return Err(Error::invalid("histogram needs at least one spectrum"));
    }
    if bins == 0 {
        return Err(Error::invalid("histogram needs at least one bin"));
    }
    let (lo, hi) = range;
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::invalid(format!("invalid histogram range [{lo}, {hi}]")));
    }
    let width = (hi - lo) / bins as f64;
    let edges: Vec<f64> = (0..=bins)
        .map(|b| if b == bins { hi } else { lo + width * b as f64 })
        .collect();
    let mut counts = vec![0u64; bins];
    let (mut under, mut over, mut total) = (0u64, 0u64, 0u64);
    for s in spectra {
        for &x in &s.eigenvalues {
            total += 1;
            if x < lo {
                under += 1;
            } else if x > hi {
                over += 1;
            } else {
                let b = (((x - lo) / width) as usize).min(bins - 1);
                counts[b] += 1;
            }
        }
    }
    if total == 0 {
        return Err(Error::invalid("histogram input has no eigenvalues"));
    }
    let densities = counts
        .iter()
        .zip(edges.windows(2))
        .map(|(&c, e)| c as f64 / (total as f64 * (e[1] - e[0])))
        .collect();
    let kind = spectra[0].source.kind;
    let n = spectra[0].n;
    let homogeneous = spectra.iter().all(|s| s.source.kind == kind && s.n == n);
    Ok(HistogramData {
        edges,
        densities,
        counts,
        total,
        underflow: under,
        overflow: over,
        realizations: spectra.len(),
        kind: homogeneous.then_some(kind),
        n: homogeneous.then_some(n),
    })
}
