use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use hmn::generate::{
    generate_baseline, generate_with_report, parse_matrix, Baseline, GenParams, GenReport,
    LayerChoice, TypeChoice, STREAM_INTER_BASE, STREAM_INTRA, STREAM_LAYER, STREAM_M, STREAM_TYPE,
};
use hmn::io::config::{GenConfig, MValue, TypesSpec};
use hmn::io::write_hmnf;
use hmn::Hmn;

use crate::{read_input, with_output, CmdResult, Failure};

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Preset {
    /// One layer, one node type.
    Homogeneous,
    /// One layer, several node types (3 unless --types-per-layer is given).
    Heterogeneous,
    /// Several layers (3 unless --layers is given), one node type.
    Multilayer,
    /// Several layers and several node types (3 and 3 by default).
    Hmn,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum BaselineKind {
    Ba,
    Er,
    Gnm,
}

#[derive(Args, Debug)]
pub struct GenerateArgs {
    /// TOML generator configuration; flags given alongside override it.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    preset: Option<Preset>,
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long)]
    layers: Option<usize>,
    /// Node types per layer.
    #[arg(long)]
    types_per_layer: Option<usize>,
    /// Minimum connections: `const K`, `normal MEAN,STD`, `file PATH` or `K`.
    #[arg(long, num_args = 1..=2, value_names = ["FORM", "VALUE"])]
    m: Option<Vec<String>>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Allow alpha = beta = 0 (uniform target choice).
    #[arg(long)]
    uniform_attachment: bool,
    /// Comma-separated layer weights instead of a uniform layer choice.
    #[arg(long, value_delimiter = ',')]
    layer_weights: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    /// Generate a classic single-layer model instead.
    #[arg(long, value_enum, conflicts_with_all = ["preset", "config", "layers", "types_per_layer", "alpha", "beta"])]
    baseline: Option<BaselineKind>,
    /// Edge probability for `--baseline er`.
    #[arg(long)]
    p: Option<f64>,
    /// Edge count for `--baseline gnm`.
    #[arg(long)]
    edges: Option<u64>,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Manifest path; defaults to `<out>.manifest` when --out is given.
    #[arg(long, value_name = "FILE")]
    manifest: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn m_value(words: &[String]) -> Result<MValue, Failure> {
    let joined = words.join(" ");
    if let Some(path) = joined.strip_prefix("file ") {
        let bytes = read_input(Path::new(path.trim()))?;
        let text = String::from_utf8(bytes).map_err(|_| Failure::Data(format!("{path}: not UTF-8")))?;
        let rows = parse_matrix(&text).map_err(|e| Failure::Data(format!("{path}: {e}")))?;
        return Ok(MValue::Matrix(rows));
    }
    Ok(MValue::Spec(joined))
}

fn apply_preset(cfg: &mut GenConfig, preset: Preset, args: &GenerateArgs) -> Result<(), Failure> {
    let (multi_layer, multi_type) = match preset {
        Preset::Homogeneous => (false, false),
        Preset::Heterogeneous => (false, true),
        Preset::Multilayer => (true, false),
        Preset::Hmn => (true, true),
    };
    let layers = args.layers.unwrap_or(if multi_layer { 3 } else { 1 });
    let types = args.types_per_layer.unwrap_or(if multi_type { 3 } else { 1 });
    if !multi_layer && layers != 1 {
        return Err(usage(format!("preset {preset:?} has exactly one layer")));
    }
    if !multi_type && types != 1 {
        return Err(usage(format!("preset {preset:?} has exactly one node type")));
    }
    cfg.layers = layers;
    cfg.types_per_layer = TypesSpec::Count(types);
    Ok(())
}

fn build_params(args: &GenerateArgs) -> Result<GenParams, Failure> {
    let mut cfg = match &args.config {
        Some(path) => {
            let bytes = read_input(path)?;
            let text = String::from_utf8(bytes)
                .map_err(|_| Failure::Data(format!("{}: not UTF-8", path.display())))?;
            GenConfig::parse(&text).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?
        }
        None => {
            let nodes = args.nodes.ok_or_else(|| usage("--nodes is required without --config"))?;
            GenConfig::parse(&format!("nodes = {nodes}")).expect("minimal document parses")
        }
    };
    if let Some(n) = args.nodes {
        cfg.nodes = n;
    }
    if let Some(preset) = args.preset {
        apply_preset(&mut cfg, preset, args)?;
    } else {
        if let Some(l) = args.layers {
            cfg.layers = l;
        }
        if let Some(k) = args.types_per_layer {
            cfg.types_per_layer = TypesSpec::Count(k);
        }
    }
    if let Some(words) = &args.m {
        cfg.m = m_value(words)?;
    }
    if let Some(a) = args.alpha {
        cfg.alpha = a;
    }
    if let Some(b) = args.beta {
        cfg.beta = b;
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if args.uniform_attachment {
        cfg.uniform_attachment = true;
    }
    if let Some(w) = &args.layer_weights {
        cfg.layer_choice = Some(hmn::io::config::ChoiceValue::Weights(w.clone()));
    }
    cfg.to_params().map_err(|e| usage(e.to_string()))
}

fn build_baseline(kind: BaselineKind, args: &GenerateArgs) -> Result<Baseline, Failure> {
    let n = args.nodes.ok_or_else(|| usage("--nodes is required"))?;
    let n = u32::try_from(n).map_err(|_| usage("--nodes is too large for a baseline"))?;
    Ok(match kind {
        BaselineKind::Ba => {
            let m = match args.m.as_deref().map(|w| w.join(" ")) {
                None => 2,
                Some(s) => {
                    let s = s.strip_prefix("const ").unwrap_or(&s).trim().to_string();
                    s.parse().map_err(|_| usage(format!("--baseline ba needs `--m const K`, got {s:?}")))?
                }
            };
            Baseline::BarabasiAlbert { n, m }
        }
        BaselineKind::Er => Baseline::ErdosRenyi {
            n,
            p: args.p.ok_or_else(|| usage("--baseline er needs --p"))?,
        },
        BaselineKind::Gnm => Baseline::Gnm {
            n,
            m: args.edges.ok_or_else(|| usage("--baseline gnm needs --edges"))?,
        },
    })
}

fn join_f64(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",")
}

fn manifest_text(p: &GenParams, report: &GenReport, g: &Hmn, out: Option<&Path>) -> String {
    let mut s = String::new();
    let mut kv = |k: &str, v: String| {
        let _ = writeln!(s, "{k}={v}");
    };
    kv("tool", format!("hmn {}", env!("CARGO_PKG_VERSION")));
    kv("output", out.map_or_else(|| "-".into(), |o| o.display().to_string()));
    kv("nodes", p.nodes.to_string());
    kv("layers", p.layers.to_string());
    kv(
        "types_per_layer",
        p.types_per_layer.iter().map(|t| t.join(",")).collect::<Vec<_>>().join("; "),
    );
    kv(
        "m",
        p.m.iter()
            .map(|r| r.iter().map(u32::to_string).collect::<Vec<_>>().join(" "))
            .collect::<Vec<_>>()
            .join("; "),
    );
    kv("alpha", format!("{:?}", p.alpha));
    kv("beta", format!("{:?}", p.beta));
    kv("uniform_attachment", p.uniform_attachment.to_string());
    kv(
        "layer_choice",
        match &p.layer_choice {
            LayerChoice::Uniform => "uniform".into(),
            LayerChoice::Weighted(w) => join_f64(w),
        },
    );
    kv(
        "type_choice",
        match &p.type_choice {
            TypeChoice::Uniform => "uniform".into(),
            TypeChoice::Weighted(w) => w.iter().map(|r| join_f64(r)).collect::<Vec<_>>().join("; "),
        },
    );
    kv("seed", p.seed.to_string());
    kv("rng", "ChaCha8, one stream per purpose".into());
    kv("stream.layer", STREAM_LAYER.to_string());
    kv("stream.type", STREAM_TYPE.to_string());
    kv("stream.intra", STREAM_INTRA.to_string());
    kv("stream.m", STREAM_M.to_string());
    for j in 0..p.layers {
        kv(&format!("stream.inter.{}", j + 1), (STREAM_INTER_BASE + j as u64).to_string());
    }
    kv(
        "layer_sizes",
        report.layer_sizes.iter().map(usize::to_string).collect::<Vec<_>>().join(","),
    );
    kv("edges", g.edge_count().to_string());
    kv("pending_remaining", report.pending_remaining.to_string());
    s
}

fn write_manifest(path: &Path, text: &str) -> CmdResult {
    fs::write(path, text).map_err(|e| Failure::Data(format!("writing {}: {e}", path.display())))
}

pub fn run(args: &GenerateArgs) -> CmdResult {
    let manifest_path = args
        .manifest
        .clone()
        .or_else(|| args.out.as_ref().map(|o| PathBuf::from(format!("{}.manifest", o.display()))));
    if let Some(kind) = args.baseline {
        let spec = build_baseline(kind, args)?;
        let seed = args.seed.unwrap_or(0);
        let g = generate_baseline(spec, seed).map_err(|e| usage(e.to_string()))?;
        with_output(args.out.as_deref(), |w| write_hmnf(&g, w))?;
        if let Some(path) = manifest_path {
            let text = format!(
                "tool=hmn {}\nbaseline={spec:?}\nseed={seed}\nrng=ChaCha8, stream 0\nedges={}\n",
                env!("CARGO_PKG_VERSION"),
                g.edge_count()
            );
            write_manifest(&path, &text)?;
        }
        return Ok(());
    }
    let params = build_params(args)?;
    for w in params.warnings() {
        eprintln!("warning: {w}");
    }
    let (g, report) = generate_with_report(&params).map_err(|e| usage(e.to_string()))?;
    with_output(args.out.as_deref(), |w| write_hmnf(&g, w))?;
    if let Some(path) = manifest_path {
        write_manifest(&path, &manifest_text(&params, &report, &g, args.out.as_deref()))?;
    }
    Ok(())
}
