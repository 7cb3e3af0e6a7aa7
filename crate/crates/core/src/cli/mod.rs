//! Command-line front end: target catalog, series and operator jobs, JSON output and caching.

mod cache;
mod commands;
pub mod goldens;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::homobundle::{lookup, CatalogRow, Pipeline, TargetSpec};

pub use cache::{cache_key, Cache};
pub use commands::{
    catalog_rows, compute_series, pf_report, run, select_pipeline, Job, PfReport, QconnReport, DEFAULT_MAX_QDEGREE,
    DEFAULT_ORDER, THETA_ORDER,
};

#[derive(Debug, Parser)]
#[command(name = "cycalc", version, about = "Exact I-function series and Picard-Fuchs operators")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the target table with invariants and the pipeline used for each row.
    Catalog(CatalogArgs),
    /// Compute the scalar I-series I0, I1red, I2red, I3red.
    Ifun(IfunArgs),
    /// Find the Picard-Fuchs operator annihilating I0.
    Pf(PfArgs),
    /// Solve the twisted quantum product and print the connection matrix and its differential operator.
    Qconn(QconnArgs),
    /// Compute (H^3, c2.H, c3) and compare with the table.
    Invariants(InvariantsArgs),
}

#[derive(Debug, Clone, Args)]
pub struct TargetArg {
    /// Row label (`no7`, `7`), inline JSON spec, or path to a JSON spec.
    #[arg(value_name = "TARGET")]
    pub positional: Option<String>,
    /// Same as the positional TARGET.
    #[arg(long = "target", value_name = "TARGET", conflicts_with = "positional")]
    pub flag: Option<String>,
}

impl TargetArg {
    pub fn get(&self) -> Option<&str> {
        self.flag.as_deref().or(self.positional.as_deref())
    }
}

#[derive(Debug, Clone, Args)]
pub struct CatalogArgs {
    /// Keep rows on G(k,n), given as `k,n`.
    #[arg(long, value_name = "K,N")]
    pub grassmann: Option<String>,
    /// Write the JSON result to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct IfunArgs {
    #[command(flatten)]
    pub target: TargetArg,
    /// abelianization, pdelta or qconn; chosen from the target when omitted.
    #[arg(long)]
    pub pipeline: Option<Pipeline>,
    /// Highest power of q.
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub order: usize,
    /// Cache directory; overrides CYCALC_CACHE.
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    /// Write the JSON result to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct PfArgs {
    #[command(flatten)]
    pub target: TargetArg,
    /// abelianization, pdelta or qconn; chosen from the target when omitted.
    #[arg(long)]
    pub pipeline: Option<Pipeline>,
    /// Use a fixed series of this order instead of growing it with the q-degree.
    #[arg(long)]
    pub order: Option<usize>,
    /// Highest q-degree tried in the operator search.
    #[arg(long, default_value_t = DEFAULT_MAX_QDEGREE)]
    pub max_qdegree: usize,
    /// Cache directory; overrides CYCALC_CACHE.
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    /// Write the JSON result to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Compare with the reference operator shipped in the crate.
    #[arg(long)]
    pub golden: bool,
}

#[derive(Debug, Clone, Args)]
pub struct QconnArgs {
    #[command(flatten)]
    pub target: TargetArg,
    /// Order of the I-series written with the report.
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub order: usize,
    /// Cache directory; overrides CYCALC_CACHE.
    #[arg(long)]
    pub cache_dir: Option<PathBuf>,
    /// Write the JSON result to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct InvariantsArgs {
    /// A row or inline spec; all rows when omitted.
    #[command(flatten)]
    pub target: TargetArg,
    /// Write the JSON result to this file.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure with a stable exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    PipelineMismatch(String),
    #[error("{0}")]
    Underdetermined(String),
    #[error("{0}")]
    InvariantMismatch(String),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Internal(_) => 1,
            CliError::PipelineMismatch(_) => 2,
            CliError::Underdetermined(_) => 3,
            CliError::InvariantMismatch(_) => 4,
        }
    }
}

fn internal(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

/// A catalog row or a user-supplied spec.
#[derive(Debug, Clone)]
pub enum Target {
    Row(Box<CatalogRow>),
    Inline(TargetSpec),
}

impl Target {
    pub fn spec(&self) -> &TargetSpec {
        match self {
            Target::Row(r) => &r.spec,
            Target::Inline(s) => s,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Target::Row(r) => r.label().to_string(),
            Target::Inline(s) if s.label.is_empty() => "inline".into(),
            Target::Inline(s) => s.label.clone(),
        }
    }

    pub fn row(&self) -> Option<&CatalogRow> {
        match self {
            Target::Row(r) => Some(r),
            Target::Inline(_) => None,
        }
    }
}

/// Resolve a label, inline JSON or JSON file path.
pub fn resolve_target(s: &str) -> Result<Target, CliError> {
    let t = s.trim();
    let parse = |text: &str| -> Result<Target, CliError> {
        let spec: TargetSpec =
            serde_json::from_str(text).map_err(|e| CliError::Internal(format!("bad target spec: {e}")))?;
        spec.validate().map_err(internal)?;
        Ok(Target::Inline(spec))
    };
    if t.starts_with('{') {
        return parse(t);
    }
    if t.ends_with(".json") {
        let text = std::fs::read_to_string(t).map_err(|e| CliError::Internal(format!("{t}: {e}")))?;
        return parse(&text);
    }
    lookup(t).map(|r| Target::Row(Box::new(r))).map_err(internal)
}
