//! CSV and JSON emission of summaries and degree histograms.

use std::collections::BTreeMap;
use std::io::Write;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::IoError;
use crate::metrics::{DegreeHistogram, NetworkSummary};

/// Written in place of an undefined value.
pub const NA: &str = "NA";

pub const SUMMARY_COLUMNS: [&str; 9] = [
    "Nodes",
    "Edges",
    "Density",
    "AvgDegree",
    "Assortativity",
    "Triangles",
    "AvgTrianglesPerNode",
    "AvgCC",
    "CliqueNumber",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format {other:?} (expected csv or json)")),
        }
    }
}

pub enum Report<'a> {
    Summary(&'a NetworkSummary),
    Histogram(&'a DegreeHistogram),
}

/// `{:?}` formatting keeps a decimal point on whole numbers and is the
/// shortest representation that round-trips.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| NA.to_string(), fmt_f64)
}

pub fn summary_csv_row(s: &NetworkSummary) -> String {
    [
        s.nodes.to_string(),
        s.edges.to_string(),
        fmt_f64(s.density),
        fmt_f64(s.avg_degree),
        fmt_opt(s.assortativity),
        s.triangles.to_string(),
        fmt_f64(s.avg_triangles_per_node),
        fmt_f64(s.avg_clustering),
        s.clique_number.to_string(),
    ]
    .join(",")
}

pub fn write_report<W: Write + ?Sized>(report: Report<'_>, format: Format, sink: &mut W) -> Result<(), IoError> {
    match (report, format) {
        (Report::Summary(s), Format::Csv) => {
            writeln!(sink, "{}", SUMMARY_COLUMNS.join(","))?;
            writeln!(sink, "{}", summary_csv_row(s))?;
        }
        (Report::Summary(s), Format::Json) => {
            serde_json::to_writer_pretty(&mut *sink, s)?;
            writeln!(sink)?;
        }
        (Report::Histogram(h), _) if h.is_empty() => return Err(IoError::EmptyHistogram),
        (Report::Histogram(h), Format::Csv) => write_histogram_csv(h, sink)?,
        (Report::Histogram(h), Format::Json) => {
            serde_json::to_writer_pretty(&mut *sink, h)?;
            writeln!(sink)?;
        }
    }
    Ok(())
}

pub fn write_histogram_csv<W: Write + ?Sized>(h: &DegreeHistogram, sink: &mut W) -> std::io::Result<()> {
    writeln!(sink, "degree,count")?;
    for (d, c) in &h.counts {
        writeln!(sink, "{d},{c}")?;
    }
    Ok(())
}

/// One bin of a log-binned degree distribution.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogBin {
    /// Inclusive lower edge.
    pub low: f64,
    /// Exclusive upper edge.
    pub high: f64,
    /// Geometric mean of the edges.
    pub center: f64,
    pub count: usize,
    /// `count / (total * (high - low))`: a probability density over degree.
    pub density: f64,
}

/// Smooths a histogram into `bins` bins of equal width in log-degree between
/// the smallest positive degree and the largest degree plus one. Degree 0 is
/// left out and empty bins are dropped; densities are normalised by the
/// number of nodes with positive degree.
pub fn log_binned(h: &DegreeHistogram, bins: usize) -> Vec<LogBin> {
    let positive: Vec<(usize, usize)> = h
        .counts
        .iter()
        .filter(|(&d, &c)| d > 0 && c > 0)
        .map(|(&d, &c)| (d, c))
        .collect();
    if bins == 0 || positive.is_empty() {
        return Vec::new();
    }
    let total: usize = positive.iter().map(|p| p.1).sum();
    let lo = (positive[0].0 as f64).ln();
    let hi = ((positive[positive.len() - 1].0 + 1) as f64).ln();
    let width = (hi - lo) / bins as f64;
    let edge = |k: usize| (lo + k as f64 * width).exp();
    let mut counts = vec![0usize; bins];
    for &(d, c) in &positive {
        let k = (((d as f64).ln() - lo) / width).floor() as usize;
        counts[k.min(bins - 1)] += c;
    }
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(k, &c)| {
            let (low, high) = (edge(k), edge(k + 1));
            LogBin {
                low,
                high,
                center: (low * high).sqrt(),
                count: c,
                density: c as f64 / (total as f64 * (high - low)),
            }
        })
        .collect()
}

pub fn write_log_binned_csv<W: Write + ?Sized>(bins: &[LogBin], sink: &mut W) -> std::io::Result<()> {
    writeln!(sink, "bin_low,bin_high,center,count,density")?;
    for b in bins {
        writeln!(
            sink,
            "{},{},{},{},{}",
            fmt_f64(b.low),
            fmt_f64(b.high),
            fmt_f64(b.center),
            b.count,
            fmt_f64(b.density)
        )?;
    }
    Ok(())
}

/// Least-squares slope of `ln(density)` against `ln(center)`. `None` with
/// fewer than two bins.
pub fn log_log_slope(bins: &[LogBin]) -> Option<f64> {
    if bins.len() < 2 {
        return None;
    }
    let pts: Vec<(f64, f64)> = bins.iter().map(|b| (b.center.ln(), b.density.ln())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    Some(sxy / sxx)
}

/// Reads a histogram table: `degree,count` CSV (header optional) or
/// whitespace-separated pairs, or the JSON form written by [`write_report`].
pub fn read_histogram(bytes: &[u8]) -> Result<DegreeHistogram, IoError> {
    let text = std::str::from_utf8(bytes).map_err(|e| IoError::Parse {
        line: 0,
        message: format!("input is not valid UTF-8 (byte {})", e.valid_up_to()),
    })?;
    if text.trim_start().starts_with('{') {
        let h: DegreeHistogram = serde_json::from_str(text).map_err(|e| IoError::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        if h.is_empty() {
            return Err(IoError::EmptyHistogram);
        }
        return Ok(h);
    }
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fields: Vec<&str> = content
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|f| !f.is_empty())
            .collect();
        if fields.len() != 2 {
            return Err(IoError::Parse {
                line,
                message: format!("expected `degree,count`, found {content:?}"),
            });
        }
        let (d, c) = match (fields[0].parse::<usize>(), fields[1].parse::<usize>()) {
            (Ok(d), Ok(c)) => (d, c),
            _ if counts.is_empty() && fields[0].eq_ignore_ascii_case("degree") => continue,
            _ => {
                return Err(IoError::Parse {
                    line,
                    message: format!("expected two non-negative integers, found {content:?}"),
                })
            }
        };
        if counts.insert(d, c).is_some() {
            return Err(IoError::Parse {
                line,
                message: format!("degree {d} listed twice"),
            });
        }
    }
    let h = DegreeHistogram::from_counts(counts);
    if h.is_empty() {
        return Err(IoError::EmptyHistogram);
    }
    Ok(h)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embed::from_homogeneous;
    use crate::metrics::{degree_distribution, network_summary, DegreeSplit, MetricScope};

    #[test]
    fn triangle_csv_row() {
        let g = from_homogeneous(3, &[(0, 1), (1, 2), (0, 2)], false).unwrap();
        let s = network_summary(&g, &MetricScope::full(&g)).unwrap();
        let mut out = Vec::new();
        write_report(Report::Summary(&s), Format::Csv, &mut out).unwrap();
        let text = String::from_utf8(out).unwrap();
        assert_eq!(
            text,
            "Nodes,Edges,Density,AvgDegree,Assortativity,Triangles,AvgTrianglesPerNode,AvgCC,CliqueNumber\n3,3,1.0,2.0,NA,1,1.0,1.0,3\n"
        );
    }

    #[test]
    fn json_round_trips() {
        let g = from_homogeneous(4, &[(0, 1), (0, 2), (0, 3), (1, 2)], false).unwrap();
        let s = network_summary(&g, &MetricScope::full(&g)).unwrap();
        let mut out = Vec::new();
        write_report(Report::Summary(&s), Format::Json, &mut out).unwrap();
        let back: NetworkSummary = serde_json::from_slice(&out).unwrap();
        assert_eq!(back, s);

        let tri = from_homogeneous(3, &[(0, 1), (1, 2), (0, 2)], false).unwrap();
        let s = network_summary(&tri, &MetricScope::full(&tri)).unwrap();
        let mut out = Vec::new();
        write_report(Report::Summary(&s), Format::Json, &mut out).unwrap();
        assert!(String::from_utf8_lossy(&out).contains("\"assortativity\": null"));
        assert_eq!(serde_json::from_slice::<NetworkSummary>(&out).unwrap(), s);

        let h = degree_distribution(&g, &MetricScope::full(&g), DegreeSplit::All).unwrap();
        let mut out = Vec::new();
        write_report(Report::Histogram(&h), Format::Json, &mut out).unwrap();
        assert_eq!(read_histogram(&out).unwrap(), h);
    }

    #[test]
    fn histogram_csv_round_trip() {
        let h = DegreeHistogram::from_counts([(1, 3), (3, 1)].into());
        let mut out = Vec::new();
        write_report(Report::Histogram(&h), Format::Csv, &mut out).unwrap();
        assert_eq!(String::from_utf8(out.clone()).unwrap(), "degree,count\n1,3\n3,1\n");
        assert_eq!(read_histogram(&out).unwrap(), h);
        assert_eq!(read_histogram(b"1 3\n3 1\n").unwrap(), h);
    }

    #[test]
    fn empty_histograms_rejected() {
        let h = DegreeHistogram::from_counts(BTreeMap::new());
        let mut out = Vec::new();
        assert!(matches!(
            write_report(Report::Histogram(&h), Format::Csv, &mut out),
            Err(IoError::EmptyHistogram)
        ));
        assert!(matches!(read_histogram(b"degree,count\n"), Err(IoError::EmptyHistogram)));
        assert!(matches!(
            read_histogram(b"degree,count\n1,x\n"),
            Err(IoError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn log_bins_cover_every_positive_degree() {
        let h = DegreeHistogram::from_counts([(0, 4), (1, 10), (2, 5), (3, 3), (10, 1), (50, 1)].into());
        let bins = log_binned(&h, 5);
        assert_eq!(bins.iter().map(|b| b.count).sum::<usize>(), 20);
        for w in bins.windows(2) {
            assert!(w[0].high <= w[1].low + 1e-9);
        }
        let mass: f64 = bins.iter().map(|b| b.density * (b.high - b.low)).sum();
        assert!((mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn slope_of_exact_power_law() {
        let counts: BTreeMap<usize, usize> = (1..=1000usize)
            .map(|d| (d, (1e9 * (d as f64).powf(-2.5)).round() as usize))
            .filter(|&(_, c)| c > 0)
            .collect();
        let bins = log_binned(&DegreeHistogram::from_counts(counts), 10);
        let slope = log_log_slope(&bins).unwrap();
        assert!((slope + 2.5).abs() < 0.15, "{slope}");
    }
}
