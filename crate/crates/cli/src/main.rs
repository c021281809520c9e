use anyhow::{Context as _, Result};
use aqft::smatrix::BUILTIN_NAMES;
use aqft_cli::config::RunConfig;
use aqft_cli::report::{export, Format, Report};
use aqft_cli::suites::Suite;
use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "aqft",
    version,
    about = "Run verification suites for factorizing S-matrix models"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suites selected by a TOML config.
    Run {
        config: PathBuf,
        /// Output directory (default: config `out_dir`, then $AQFT_OUT, then ./aqft-out).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Restrict to these suites (repeatable).
        #[arg(long = "suite")]
        suites: Vec<String>,
    },
    /// List built-in S-matrix models.
    ListModels,
    /// List verification suites in dependency order.
    ListSuites,
    /// Re-export a saved report as JSON or CSV.
    Export {
        report: PathBuf,
        #[arg(long, value_enum, default_value = "csv")]
        format: ExportFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ExportFormat {
    Json,
    Csv,
}

/// Exit statuses: 0 pass, 1 mandatory failure, 2 configuration or I/O error.
fn main() -> ExitCode {
    match real_main() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn out_dir(flag: Option<PathBuf>, cfg: Option<&RunConfig>) -> PathBuf {
    flag.or_else(|| cfg.and_then(|c| c.out_dir.clone()).map(PathBuf::from))
        .or_else(|| std::env::var_os("AQFT_OUT").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("aqft-out"))
}

fn real_main() -> Result<bool> {
    let cli = Cli::parse();
    match cli.command {
        Command::Run {
            config,
            out,
            suites,
        } => {
            let mut cfg = RunConfig::load(&config)?;
            if !suites.is_empty() {
                cfg.suites = suites
                    .iter()
                    .map(|s| {
                        Suite::from_name(s)
                            .with_context(|| format!("unknown suite '{s}' (see list-suites)"))
                    })
                    .collect::<Result<_>>()?;
            }
            let dir = out_dir(out, Some(&cfg));
            let report = aqft_cli::run(&cfg)?;
            export(&report, Format::Json, &dir)?;
            export(&report, Format::Csv, &dir)?;
            for s in &report.suites {
                let extra = s
                    .reason
                    .as_deref()
                    .map(|r| format!(" ({r})"))
                    .unwrap_or_default();
                println!("{:<15} {:?}{extra}", s.suite, s.status);
            }
            for r in report.records.iter().filter(|r| !r.pass) {
                let kind = if r.mandatory { "FAIL" } else { "info" };
                println!(
                    "  {kind} {}.{}: residual {:?} tolerance {:?}",
                    r.suite, r.check, r.residual, r.tolerance
                );
            }
            println!("report written to {}", dir.display());
            Ok(report.pass)
        }
        Command::ListModels => {
            for name in BUILTIN_NAMES {
                println!("{name}");
            }
            Ok(true)
        }
        Command::ListSuites => {
            for (name, desc) in aqft_cli::suite_list() {
                println!("{name:<15} {desc}");
            }
            Ok(true)
        }
        Command::Export {
            report,
            format,
            out,
        } => {
            let text = std::fs::read_to_string(&report)
                .with_context(|| format!("cannot read {}", report.display()))?;
            let rep = Report::from_json(&text)?;
            let fmt = match format {
                ExportFormat::Json => Format::Json,
                ExportFormat::Csv => Format::Csv,
            };
            for p in export(&rep, fmt, &out_dir(out, None))? {
                println!("{}", p.display());
            }
            Ok(true)
        }
    }
}
