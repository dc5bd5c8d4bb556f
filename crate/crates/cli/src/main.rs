use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use fairdist_cli::commands::{self, AppError};
use fairdist_cli::config::{resolve, CommonFlags};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "fairdist",
    version,
    about = "Fairness audits for binary classifiers: density-distance metrics, ABROCA, and visual analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Load and preprocess the data; write per-course datasets and stats
    Ingest {
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Mutual information between the sensitive features and the others
    Mi {
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Run the full audit: split, train, measure, plot, report
    Audit {
        #[command(flatten)]
        flags: CommonFlags,
    },
    /// Re-render the SVG plots from a saved audit bundle
    Plot {
        /// Path to a bundle.json produced by `audit`
        #[arg(long, value_name = "FILE")]
        bundle: PathBuf,
        /// Output directory (default: next to the bundle)
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
    /// Re-render the Markdown reports from a saved audit bundle
    Report {
        /// Path to a bundle.json produced by `audit`
        #[arg(long, value_name = "FILE")]
        bundle: PathBuf,
        /// Output directory (default: next to the bundle)
        #[arg(long, value_name = "DIR")]
        out: Option<PathBuf>,
    },
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Ingest { flags } => {
            let config = resolve(&flags)?;
            let report = commands::cmd_ingest(&config)?;
            println!(
                "ingested {} courses, {} rows after filters -> {}",
                report.courses.len(),
                report.total_rows_out,
                config.out_dir.display()
            );
        }
        Command::Mi { flags } => {
            let config = resolve(&flags)?;
            let scores = commands::cmd_mi(&config)?;
            println!(
                "computed {} MI scores across {} courses -> {}",
                scores.entries.len(),
                scores.courses().len(),
                config.out_dir.display()
            );
        }
        Command::Audit { flags } => {
            let config = resolve(&flags)?;
            let bundle = commands::cmd_audit(&config)?;
            let cells: usize = bundle.courses.iter().map(|c| c.cells.len()).sum();
            println!(
                "audited {} courses ({} cells) -> {}",
                bundle.courses.len(),
                cells,
                config.out_dir.display()
            );
            for course in &bundle.courses {
                println!(
                    "  {}: fairest by MADD {}, most sensitive feature {}",
                    course.course_id,
                    course.summary.fairest_model_madd,
                    course.summary.most_sensitive_feature_madd
                );
            }
        }
        Command::Plot { bundle, out } => {
            let written = commands::cmd_plot(&bundle, out.as_deref())?;
            println!("rendered {} plots", written.len());
        }
        Command::Report { bundle, out } => {
            let written = commands::cmd_report(&bundle, out.as_deref())?;
            println!("rendered {} reports", written.len());
        }
    }
    Ok(())
}

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run(cli) {
        eprintln!("error: {err}");
        let mut source = std::error::Error::source(&err);
        while let Some(cause) = source {
            eprintln!("  caused by: {cause}");
            source = cause.source();
        }
        std::process::exit(err.exit_code());
    }
}
