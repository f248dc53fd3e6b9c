use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{RegretTrace, RunSummary};
use crate::error::{Error, Result};

pub const TRACE_CSV_HEADER: [&str; 6] = ["n", "cost_dot_action", "cum_regret", "cum_pseudo_regret", "eps_n", "snapped"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExportFormat {
    Csv,
    Json,
}

impl FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ExportFormat::Csv),
            "json" => Ok(ExportFormat::Json),
            _ => Err(Error::Config(format!("unknown format `{s}` (expected csv or json)"))),
        }
    }
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::io(path, e))
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_err(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Config(format!("{}: {other:?}", path.display())),
    }
}

fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| Error::io(path, e.into()))?;
    w.write_all(b"\n").and_then(|_| w.flush()).map_err(|e| Error::io(path, e))
}

/// One row per round; empty fields where a column does not apply.
pub fn export_trace(trace: &RegretTrace, format: ExportFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    match format {
        ExportFormat::Json => write_json(trace, path),
        ExportFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(create(path)?);
            w.write_record(TRACE_CSV_HEADER).map_err(|e| csv_err(path, e))?;
            for r in &trace.rounds {
                w.write_record([
                    r.n.to_string(),
                    r.cost_dot_action.to_string(),
                    r.cum_regret.to_string(),
                    opt(r.cum_pseudo_regret),
                    opt(r.eps_n),
                    r.snapped.map(|s| (s as u8).to_string()).unwrap_or_default(),
                ])
                .map_err(|e| csv_err(path, e))?;
            }
            w.flush().map_err(|e| Error::io(path, e))
        }
    }
}

pub fn export_summaries(summaries: &[RunSummary], format: ExportFormat, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    match format {
        ExportFormat::Json => write_json(&summaries, path),
        ExportFormat::Csv => {
            let mut w = csv::WriterBuilder::new()
                .terminator(csv::Terminator::Any(b'\n'))
                .from_writer(create(path)?);
            w.write_record([
                "config_index",
                "seed",
                "horizon",
                "eta",
                "final_regret",
                "final_pseudo_regret",
                "plateau_increment",
                "mean_eps",
                "max_eps",
                "error",
            ])
            .map_err(|e| csv_err(path, e))?;
            for s in summaries {
                w.write_record([
                    s.config_index.to_string(),
                    s.seed.map(|v| v.to_string()).unwrap_or_default(),
                    s.horizon.to_string(),
                    opt(s.eta),
                    opt(s.final_regret),
                    opt(s.final_pseudo_regret),
                    opt(s.plateau_increment),
                    opt(s.mean_eps),
                    opt(s.max_eps),
                    s.error.clone().unwrap_or_default(),
                ])
                .map_err(|e| csv_err(path, e))?;
            }
            w.flush().map_err(|e| Error::io(path, e))
        }
    }
}

pub fn load_summaries_json(path: impl AsRef<Path>) -> Result<Vec<RunSummary>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Cost vectors one per row, readable by [`crate::streams::load_costs_csv`].
pub fn export_costs(costs: &[Vec<f64>], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(create(path)?);
    for c in costs {
        w.write_record(c.iter().map(|v| v.to_string())).map_err(|e| csv_err(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}
