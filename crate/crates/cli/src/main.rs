//! `hmn`: generate, inspect and convert heterogeneous multi-layered networks.

mod analyze;
mod generate;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hmn::io::{read_edgelist, read_hmnf, read_multiplex, write_hmnf};
use hmn::Hmn;

/// Exit status of a run.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags or an invalid parameter combination (exit 1).
    Usage(String),
    /// Unreadable, malformed or unsuitable input data (exit 2).
    Data(String),
    /// `compare` distance above the threshold (exit 3).
    Threshold,
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Data(_) => 2,
            Failure::Threshold => 3,
        }
    }
}

pub type CmdResult = Result<(), Failure>;

#[derive(Parser, Debug)]
#[command(name = "hmn", version, about = "Heterogeneous multi-layered network tools")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a synthetic network and write it as HMNF.
    Generate(generate::GenerateArgs),
    /// Summary statistics and averaged centralities.
    Stats(analyze::StatsArgs),
    /// Degree histogram, optionally log-binned.
    Dist(analyze::DistArgs),
    /// Kolmogorov-Smirnov distance between two degree histograms.
    Compare(CompareArgs),
    /// Convert a multiplex or plain edge list (or HMNF) to canonical HMNF.
    Convert(ConvertArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum InputFormat {
    Hmnf,
    Multiplex,
    Edgelist,
}

/// Where a network comes from.
#[derive(Args, Debug, Clone)]
pub struct Input {
    /// Input file, `-` for stdin.
    #[arg(long = "in", value_name = "FILE")]
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = InputFormat::Hmnf)]
    pub from: InputFormat,
    /// Treat a plain edge list as directed.
    #[arg(long)]
    pub directed: bool,
}

impl Input {
    pub fn load(&self) -> Result<Hmn, Failure> {
        let bytes = read_input(&self.input)?;
        let what = self.input.display();
        match self.from {
            InputFormat::Hmnf => read_hmnf(&bytes).map_err(|e| Failure::Data(format!("{what}: {e}"))),
            InputFormat::Multiplex => {
                read_multiplex(&bytes).map_err(|e| Failure::Data(format!("{what}: {e}")))
            }
            InputFormat::Edgelist => read_edgelist(&bytes, self.directed)
                .map_err(|e| Failure::Data(format!("{what}: {e}"))),
        }
    }
}

#[derive(Args, Debug)]
struct CompareArgs {
    /// First histogram (`degree,count` CSV or JSON).
    #[arg(long, value_name = "FILE")]
    a: PathBuf,
    #[arg(long, value_name = "FILE")]
    b: PathBuf,
    /// Exit with status 3 when the distance exceeds this.
    #[arg(long)]
    threshold: Option<f64>,
}

#[derive(Args, Debug)]
struct ConvertArgs {
    #[command(flatten)]
    input: Input,
    /// Output file; stdout when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

pub fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    let mut bytes = Vec::new();
    let res = if path.as_os_str() == "-" {
        io::stdin().read_to_end(&mut bytes).map(|_| ())
    } else {
        fs::read(path).map(|b| bytes = b)
    };
    res.map_err(|e| Failure::Data(format!("{}: {e}", path.display())))?;
    Ok(bytes)
}

/// Runs `f` against the output file, or stdout when `path` is `None`.
pub fn with_output(
    path: Option<&Path>,
    f: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> CmdResult {
    let res = match path {
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            f(&mut lock).and_then(|_| lock.flush())
        }
        Some(p) => fs::File::create(p).and_then(|file| {
            let mut w = io::BufWriter::new(file);
            f(&mut w)?;
            w.flush()
        }),
    };
    match res {
        Err(e) if path.is_none() && e.kind() == io::ErrorKind::BrokenPipe => return Ok(()),
        _ => {}
    }
    res.map_err(|e| {
        let target = path.map_or_else(|| "stdout".to_string(), |p| p.display().to_string());
        Failure::Data(format!("writing {target}: {e}"))
    })
}

fn compare(args: &CompareArgs) -> CmdResult {
    let load = |p: &Path| {
        hmn::io::read_histogram(&read_input(p)?)
            .map_err(|e| Failure::Data(format!("{}: {e}", p.display())))
    };
    let a = load(&args.a)?;
    let b = load(&args.b)?;
    let d = hmn::metrics::ks_distance(&a, &b).map_err(|e| Failure::Data(e.to_string()))?;
    println!("{d:?}");
    if let Some(t) = args.threshold {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Failure::Usage(format!("threshold must be a non-negative number, got {t}")));
        }
        if d > t {
            println!("fail: {d:?} > {t:?}");
            return Err(Failure::Threshold);
        }
        println!("pass: {d:?} <= {t:?}");
    }
    Ok(())
}

fn convert(args: &ConvertArgs) -> CmdResult {
    let g = args.input.load()?;
    with_output(args.out.as_deref(), |w| write_hmnf(&g, w))
}

fn run(cli: Cli) -> CmdResult {
    match cli.command {
        Command::Generate(a) => generate::run(&a),
        Command::Stats(a) => analyze::stats(&a),
        Command::Dist(a) => analyze::dist(&a),
        Command::Compare(a) => compare(&a),
        Command::Convert(a) => convert(&a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Usage(m) => eprintln!("error: {m}"),
                Failure::Data(m) => eprintln!("error: {m}"),
                Failure::Threshold => {}
            }
            ExitCode::from(f.code())
        }
    }
}
