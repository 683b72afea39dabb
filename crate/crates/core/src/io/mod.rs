//! Reading and writing networks, generator configurations and reports.

pub mod config;
pub mod hmnf;
pub mod report;
pub mod text;

use thiserror::Error;

pub use config::{ConfigError, GenConfig};
pub use hmnf::{parse_hmnf, read_hmnf, to_hmnf_string, write_hmnf, HmnfError, HMNF_VERSION};
pub use report::{
    log_binned, log_log_slope, read_histogram, write_histogram_csv, write_log_binned_csv,
    write_report, Format, LogBin, Report,
};
pub use text::{read_edgelist, read_multiplex, TextError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Hmnf(#[from] HmnfError),
    #[error(transparent)]
    Text(#[from] TextError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("histogram is empty")]
    EmptyHistogram,
}
