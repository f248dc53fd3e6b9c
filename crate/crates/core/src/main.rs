use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;

use polyregret::analysis::{bound, geometry_report, BoundConstants, BoundKind, WIDTH_RESTARTS};
use polyregret::domains::project;
use polyregret::harness::{export_summaries, export_trace, run_experiment, sweep, ExperimentConfig, ExportFormat};
use polyregret::{Domain, Error, Result};

#[derive(Parser)]
#[command(name = "polyregret", version, about = "Online linear optimization over structured domains")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum DataFormat {
    Csv,
    Json,
}

impl From<DataFormat> for ExportFormat {
    fn from(f: DataFormat) -> Self {
        match f {
            DataFormat::Csv => ExportFormat::Csv,
            DataFormat::Json => ExportFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportFormat {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its regret trace.
    Run {
        /// Experiment config (JSON file).
        #[arg(long)]
        config: PathBuf,
        /// Trace destination; defaults to the config's output_path, else a summary on stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: DataFormat,
    },
    /// Run every (config, seed) pair of a grid.
    Sweep {
        /// JSON array of experiment configs.
        #[arg(long)]
        grid: PathBuf,
        /// Summary destination; stdout (JSON) when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "json")]
        format: DataFormat,
    },
    /// Diameter, width, hull and gaps of a domain.
    Geometry {
        /// Domain as inline JSON or a path to a JSON file.
        #[arg(long)]
        domain: String,
        /// Mean cost for the gap report, comma separated.
        #[arg(long)]
        cost: Option<String>,
        #[arg(long)]
        base_point: Option<String>,
        #[arg(long, default_value_t = WIDTH_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Evaluate closed-form regret bounds.
    Bounds {
        /// Bound name, or `all`.
        #[arg(long, default_value = "all")]
        kind: String,
        /// Constants as inline JSON or a path to a JSON file.
        #[arg(long)]
        constants: String,
        #[arg(long, value_enum, default_value = "text")]
        format: ReportFormat,
    },
    /// Euclidean projection of a point onto a domain.
    Project {
        #[arg(long)]
        domain: String,
        /// Comma separated coordinates.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cmd: Command) -> Result<()> {
    match cmd {
        Command::Run { config, out, format } => cmd_run(&config, out, format.into()),
        Command::Sweep { grid, out, format } => cmd_sweep(&grid, out, format.into()),
        Command::Geometry {
            domain,
            cost,
            base_point,
            restarts,
            seed,
            format,
        } => {
            let domain: Domain = inline_or_file(&domain)?;
            let cost = cost.as_deref().map(parse_list).transpose()?;
            let y1 = base_point.as_deref().map(parse_list).transpose()?;
            let report = geometry_report(&domain, cost.as_deref(), y1.as_deref(), restarts, seed)?;
            match format {
                ReportFormat::Text => print!("{}", report.to_text()),
                ReportFormat::Json => print_json(&report)?,
            }
            Ok(())
        }
        Command::Bounds { kind, constants, format } => cmd_bounds(&kind, &constants, format),
        Command::Project { domain, point } => {
            let domain: Domain = inline_or_file(&domain)?;
            let y = parse_list(&point)?;
            print_json(&project(&domain, &y)?)
        }
    }
}

fn cmd_run(path: &Path, out: Option<PathBuf>, format: ExportFormat) -> Result<()> {
    let config: ExperimentConfig = read_json(path)?;
    let trace = run_experiment(&config)?;
    match out.or_else(|| config.output_path.as_ref().map(PathBuf::from)) {
        Some(p) => export_trace(&trace, format, p),
        None => {
            println!("rounds {}", trace.rounds.len());
            if let Some(eta) = trace.eta {
                println!("eta {eta}");
            }
            println!("final_regret {}", trace.final_regret());
            if let Some(p) = trace.final_pseudo_regret() {
                println!("final_pseudo_regret {p}");
            }
            Ok(())
        }
    }
}

fn cmd_sweep(path: &Path, out: Option<PathBuf>, format: ExportFormat) -> Result<()> {
    let grid: Vec<ExperimentConfig> = read_json(path)?;
    let summaries = sweep(&grid)?;
    match out {
        Some(p) => export_summaries(&summaries, format, p),
        None => print_json(&summaries),
    }
}

#[derive(Serialize)]
struct BoundRow {
    kind: &'static str,
    certified: bool,
    value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

fn cmd_bounds(kind: &str, constants: &str, format: ReportFormat) -> Result<()> {
    let c: BoundConstants = inline_or_file(constants)?;
    let rows: Vec<BoundRow> = if kind.eq_ignore_ascii_case("all") {
        BoundKind::ALL
            .iter()
            .map(|&k| match bound(k, &c) {
                Ok(v) => BoundRow {
                    kind: k.name(),
                    certified: k.is_certified(),
                    value: Some(v),
                    error: None,
                },
                Err(e) => BoundRow {
                    kind: k.name(),
                    certified: k.is_certified(),
                    value: None,
                    error: Some(e.to_string()),
                },
            })
            .collect()
    } else {
        let k: BoundKind = kind.parse()?;
        vec![BoundRow {
            kind: k.name(),
            certified: k.is_certified(),
            value: Some(bound(k, &c)?),
            error: None,
        }]
    };
    match format {
        ReportFormat::Json => print_json(&rows),
        ReportFormat::Text => {
            let width = rows.iter().map(|r| r.kind.len()).max().unwrap_or(0);
            let mut s = String::new();
            for r in &rows {
                let value = match (r.value, &r.error) {
                    (Some(v), _) => format!("{v:.12}"),
                    (None, Some(e)) => format!("n/a ({e})"),
                    (None, None) => "n/a".into(),
                };
                let tag = if r.certified { "" } else { "  [order bound]" };
                let _ = writeln!(s, "{:<width$}  {value}{tag}", r.kind);
            }
            print!("{s}");
            Ok(())
        }
    }
}

fn parse_list(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::Config(format!("bad number `{}`: {e}", t.trim())))
        })
        .collect()
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

/// Inline JSON when the argument looks like an object or array, otherwise a file path.
fn inline_or_file<T: DeserializeOwned>(arg: &str) -> Result<T> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        serde_json::from_str(t).map_err(|e| Error::Config(format!("inline JSON: {e}")))
    } else {
        read_json(Path::new(arg))
    }
}

fn print_json<T: Serialize>(v: &T) -> Result<()> {
    let s = serde_json::to_string_pretty(v).map_err(|e| Error::Config(e.to_string()))?;
    println!("{s}");
    Ok(())
}
