use std::path::PathBuf;

use clap::Args;
use hmn::io::report::{fmt_f64, summary_csv_row, SUMMARY_COLUMNS};
use hmn::io::{log_binned, write_log_binned_csv, write_report, Format, Report};
use hmn::metrics::{
    degree_distribution, network_summary, per_layer_report, scope_averages, DegreeSplit, LayerRow,
};
use hmn::{Hmn, MetricScope};

use crate::{with_output, CmdResult, Failure, Input};

#[derive(Args, Debug)]
pub struct ScopeArgs {
    /// Comma-separated layer names; all layers when omitted.
    #[arg(long, value_delimiter = ',')]
    layers: Option<Vec<String>>,
    /// Comma-separated node type names; all types when omitted.
    #[arg(long, value_delimiter = ',')]
    types: Option<Vec<String>>,
}

impl ScopeArgs {
    fn types(&self, g: &Hmn) -> Result<Vec<hmn::NodeTypeId>, Failure> {
        match &self.types {
            None => Ok(g.node_type_ids().collect()),
            Some(names) => names
                .iter()
                .map(|n| {
                    g.node_type_by_name(n)
                        .ok_or_else(|| Failure::Data(format!("no node type named {n:?}")))
                })
                .collect(),
        }
    }

    fn resolve(&self, g: &Hmn) -> Result<MetricScope, Failure> {
        let layers = match &self.layers {
            None => g.layer_ids().collect(),
            Some(names) => names
                .iter()
                .map(|n| {
                    g.layer_by_name(n)
                        .ok_or_else(|| Failure::Data(format!("no layer named {n:?}")))
                })
                .collect::<Result<Vec<_>, _>>()?,
        };
        MetricScope::new(g, &layers, &self.types(g)?).map_err(|e| Failure::Data(e.to_string()))
    }
}

#[derive(Args, Debug)]
pub struct StatsArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    scope: ScopeArgs,
    #[arg(long, default_value = "csv")]
    format: Format,
    /// One row per layer plus their mean.
    #[arg(long, conflicts_with = "layers")]
    per_layer: bool,
    /// Count nodes without scoped neighbours in the centrality averages.
    #[arg(long)]
    keep_isolated: bool,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

const AVERAGE_COLUMNS: [&str; 5] = [
    "ScopedNodes",
    "DegreeCentrality",
    "Betweenness",
    "Closeness",
    "Clustering",
];

const LAYER_COLUMNS: [&str; 9] = [
    "Layer",
    "Nodes",
    "Edges",
    "DegreeCentrality",
    "Betweenness",
    "Closeness",
    "AvgCC",
    "Triangles",
    "AvgTrianglesPerNode",
];

fn layer_csv_row(r: &LayerRow) -> String {
    [
        r.name.clone(),
        fmt_f64(r.nodes),
        fmt_f64(r.edges),
        fmt_f64(r.degree),
        fmt_f64(r.betweenness),
        fmt_f64(r.closeness),
        fmt_f64(r.clustering),
        fmt_f64(r.triangles),
        fmt_f64(r.avg_triangles_per_node),
    ]
    .join(",")
}

fn data<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Data(e.to_string())
}

pub fn stats(args: &StatsArgs) -> CmdResult {
    let g = args.input.load()?;
    let drop_isolated = !args.keep_isolated;
    if args.per_layer {
        let report = per_layer_report(&g, &args.scope.types(&g)?, drop_isolated).map_err(data)?;
        return with_output(args.out.as_deref(), |w| match args.format {
            Format::Csv => {
                writeln!(w, "{}", LAYER_COLUMNS.join(","))?;
                for r in report.layers.iter().chain(std::iter::once(&report.mean)) {
                    writeln!(w, "{}", layer_csv_row(r))?;
                }
                Ok(())
            }
            Format::Json => {
                serde_json::to_writer_pretty(&mut *w, &report)?;
                writeln!(w)
            }
        });
    }
    let scope = args.scope.resolve(&g)?;
    let summary = network_summary(&g, &scope).map_err(data)?;
    let avg = scope_averages(&g, &scope, drop_isolated).map_err(data)?;
    with_output(args.out.as_deref(), |w| match args.format {
        Format::Csv => {
            writeln!(w, "{},{}", SUMMARY_COLUMNS.join(","), AVERAGE_COLUMNS.join(","))?;
            writeln!(
                w,
                "{},{},{},{},{},{}",
                summary_csv_row(&summary),
                avg.nodes,
                fmt_f64(avg.degree),
                fmt_f64(avg.betweenness),
                fmt_f64(avg.closeness),
                fmt_f64(avg.clustering)
            )
        }
        Format::Json => {
            let doc = serde_json::json!({ "summary": summary, "averages": avg });
            serde_json::to_writer_pretty(&mut *w, &doc)?;
            writeln!(w)
        }
    })
}

#[derive(Args, Debug)]
pub struct DistArgs {
    #[command(flatten)]
    input: Input,
    #[command(flatten)]
    scope: ScopeArgs,
    #[arg(long, default_value = "all")]
    split: DegreeSplit,
    /// Log-bin the histogram into N bins of equal log width.
    #[arg(long, value_name = "N")]
    smooth: Option<usize>,
    #[arg(long, default_value = "csv")]
    format: Format,
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

pub fn dist(args: &DistArgs) -> CmdResult {
    let g = args.input.load()?;
    let scope = args.scope.resolve(&g)?;
    let hist = degree_distribution(&g, &scope, args.split).map_err(data)?;
    match args.smooth {
        None => {
            let mut buf = Vec::new();
            write_report(Report::Histogram(&hist), args.format, &mut buf).map_err(data)?;
            with_output(args.out.as_deref(), |w| w.write_all(&buf))
        }
        Some(0) => Err(Failure::Usage("--smooth needs at least one bin".into())),
        Some(n) => {
            let bins = log_binned(&hist, n);
            with_output(args.out.as_deref(), |w| match args.format {
                Format::Csv => write_log_binned_csv(&bins, w),
                Format::Json => {
                    serde_json::to_writer_pretty(&mut *w, &bins)?;
                    writeln!(w)
                }
            })
        }
    }
}
