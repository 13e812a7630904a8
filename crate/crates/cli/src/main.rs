use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use parallelo_core::delone::SlicingConfig;
use parallelo_core::report::{
    analysis_dot, analysis_json, analysis_markdown, classes_markdown, crosscheck_manifest, d4_manifest,
    zonotope_sweep, RunManifest,
};
use parallelo_core::venkov::analyze;
use parallelo_core::ZonotopeGraph;

const JOBS_VAR: &str = "PARALLELO_JOBS";

#[derive(Parser)]
#[command(name = "parallelo", version)]
#[command(about = "Gain-cycle checks for four-dimensional parallelohedra")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyze the zonotope of one graph
    Analyze {
        /// Graph as `n=5; edges=1-2,2-3`, as JSON, or a path to a file holding either
        #[arg(long)]
        graph: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check every connected five-vertex graph and the K3,3 zonotope
    Sweep {
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        format: TableFormat,
    },
    /// Check sliced Delone tilings of D4
    D4 {
        /// JSON file {"F1":[..],"F2":[..],"F3":[..]} of direction indices
        #[arg(long, conflicts_with = "all")]
        config: Option<PathBuf>,
        /// Every admissible configuration
        #[arg(long)]
        all: bool,
    },
    /// Compare the graph calculus with the generator oracle on every graph
    OracleCrosscheck,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
    Md,
}

#[derive(Clone, Copy, ValueEnum)]
enum TableFormat {
    Json,
    Md,
}

struct UsageError(String);

fn read_utf8(path: &Path) -> Result<String, UsageError> {
    fs::read_to_string(path).map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))
}

fn configure_jobs() -> Result<(), UsageError> {
    let Ok(value) = std::env::var(JOBS_VAR) else {
        return Ok(());
    };
    let jobs: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&j| j > 0)
        .ok_or_else(|| UsageError(format!("{JOBS_VAR} must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build_global()
        .map_err(|e| UsageError(format!("cannot start thread pool: {e}")))
}

fn graph_input(spec: &str) -> Result<String, UsageError> {
    let path = Path::new(spec);
    if !spec.contains('=') && !spec.trim_start().starts_with('{') && path.is_file() {
        read_utf8(path)
    } else {
        Ok(spec.to_string())
    }
}

fn emit_manifest(m: &RunManifest) -> ExitCode {
    print!("{}", m.to_json());
    verdict_code(m.pass())
}

fn verdict_code(pass: bool) -> ExitCode {
    if pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn run(cli: Cli) -> Result<ExitCode, UsageError> {
    configure_jobs()?;
    match cli.command {
        Command::Analyze { graph, format } => {
            let text = graph_input(&graph)?;
            let g: ZonotopeGraph = text.parse().map_err(|e| UsageError(format!("invalid graph: {e}")))?;
            let a = analyze(&g);
            match format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&analysis_json(&a)).expect("report serializes");
                    s.push('\n');
                    print!("{s}");
                }
                Format::Dot => print!("{}", analysis_dot(&a)),
                Format::Md => print!("{}", analysis_markdown(&a)),
            }
            Ok(verdict_code(a.report.pass))
        }
        Command::Sweep { format } => {
            let sweep = zonotope_sweep().map_err(|e| UsageError(e.to_string()))?;
            match format {
                TableFormat::Json => Ok(emit_manifest(&sweep.manifest)),
                TableFormat::Md => {
                    print!("{}", classes_markdown(&sweep.classes));
                    Ok(verdict_code(sweep.manifest.pass()))
                }
            }
        }
        Command::D4 { config, all } => {
            let (configs, input) = if all {
                (SlicingConfig::all(), b"d4 --all".to_vec())
            } else if let Some(path) = config {
                let text = read_utf8(&path)?;
                let cfg: SlicingConfig = serde_json::from_str(&text)
                    .map_err(|e| UsageError(format!("invalid config {}: {e}", path.display())))?;
                cfg.validate().map_err(|e| UsageError(e.to_string()))?;
                (vec![cfg], text.into_bytes())
            } else {
                (vec![SlicingConfig::default()], b"d4".to_vec())
            };
            let m = d4_manifest(&configs, &input).map_err(|e| UsageError(e.to_string()))?;
            Ok(emit_manifest(&m))
        }
        Command::OracleCrosscheck => {
            let m = crosscheck_manifest().map_err(|e| UsageError(e.to_string()))?;
            Ok(emit_manifest(&m))
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(UsageError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
