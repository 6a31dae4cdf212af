//! Point series for log-log distribution plots. Zero values cannot be placed
//! on a log axis and are dropped before any transform.

use std::io::{self, Write};

use crate::io::report::fmt_g6;
use crate::metrics::DegreeHistogram;

#[derive(Debug, Clone, Default, PartialEq)]
pub struct LogLogSeries {
    /// `(value, frequency)` or `(bin center, density)` points.
    pub points: Vec<(f64, f64)>,
    pub dropped_zeros: usize,
    pub warning: Option<String>,
}

/// Raw `(degree, count)` points for every non-zero degree with `bins = None`;
/// otherwise log-binned densities.
pub fn loglog_from_histogram(hist: &DegreeHistogram, bins: Option<usize>) -> LogLogSeries {
    let weighted: Vec<(f64, f64)> = hist.counts.iter().map(|(&d, &c)| (d as f64, c as f64)).collect();
    series(&weighted, bins)
}

/// Same as [`loglog_from_histogram`] for a per-node array such as a
/// centrality vector; raw mode emits the count of each distinct value.
pub fn loglog_from_values(values: &[f64], bins: Option<usize>) -> LogLogSeries {
    let mut sorted: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    sorted.sort_by(f64::total_cmp);
    let mut weighted: Vec<(f64, f64)> = Vec::new();
    for v in sorted {
        match weighted.last_mut() {
            Some(last) if last.0 == v => last.1 += 1.0,
            _ => weighted.push((v, 1.0)),
        }
    }
    series(&weighted, bins)
}

fn series(weighted: &[(f64, f64)], bins: Option<usize>) -> LogLogSeries {
    let dropped_zeros = weighted.iter().filter(|(v, _)| *v <= 0.0).map(|(_, c)| *c as usize).sum();
    let positive: Vec<(f64, f64)> = weighted.iter().copied().filter(|(v, c)| *v > 0.0 && *c > 0.0).collect();
    if positive.is_empty() {
        let warning = (!weighted.is_empty()).then(|| "no positive values to plot".to_string());
        return LogLogSeries {
            points: Vec::new(),
            dropped_zeros,
            warning,
        };
    }
    let points = match bins {
        None => positive,
        Some(b) => log_bins(&positive, b.max(1)),
    };
    LogLogSeries {
        points,
        dropped_zeros,
        warning: None,
    }
}

/// `bins` logarithmic bins spanning `[min, max]`; each point is the bin's
/// geometric center and `count / (total * width)`. Empty bins are skipped.
fn log_bins(positive: &[(f64, f64)], bins: usize) -> Vec<(f64, f64)> {
    let lo = positive.first().unwrap().0.ln();
    let hi = positive.last().unwrap().0.ln();
    let total: f64 = positive.iter().map(|p| p.1).sum();
    if hi - lo < 1e-12 {
        return vec![(positive[0].0, 1.0)];
    }
    let step = (hi - lo) / bins as f64;
    let mut counts = vec![0.0; bins];
    for &(v, c) in positive {
        let i = (((v.ln() - lo) / step) as usize).min(bins - 1);
        counts[i] += c;
    }
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0.0)
        .map(|(i, &c)| {
            let a = (lo + step * i as f64).exp();
            let b = (lo + step * (i + 1) as f64).exp();
            ((a * b).sqrt(), c / (total * (b - a)))
        })
        .collect()
}

pub fn write_series_csv<W: Write>(s: &LogLogSeries, header: (&str, &str), mut out: W) -> io::Result<()> {
    writeln!(out, "{},{}", header.0, header.1)?;
    for (x, y) in &s.points {
        writeln!(out, "{},{}", fmt_g6(*x), fmt_g6(*y))?;
    }
    Ok(())
}
