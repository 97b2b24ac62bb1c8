//! Command-line front end: exact divisor-cone computations over JSON input
//! documents. Exit codes: 0 success, 2 validation error, 3 mathematical
//! refusal.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::Value;

use conedec::document::{self, InputDocument};
use conedec::{gallery, svg, Error};

#[derive(Parser)]
#[command(name = "conedec", version, about = "Exact divisor-cone geometry engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Zariski decomposition of a divisor expression on a surface document.
    Zariski { document: PathBuf, divisor: String },
    /// MMP with scaling for a boundary given by comma-separated coefficients.
    Mmp { document: PathBuf, coefficients: String },
    /// Canonical and minimal chamber decompositions of the boundary polytope.
    Chambers { document: PathBuf },
    /// Chambers of an infinite family meeting a region (`box x0 x1 y0 y1`).
    Walk { document: PathBuf, region: String },
    /// Built-in fixtures.
    Gallery {
        #[command(subcommand)]
        action: GalleryAction,
    },
    /// Render a chamber decomposition JSON to SVG.
    Plot {
        decomposition: PathBuf,
        /// Output path; defaults to the input with an .svg extension.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum GalleryAction {
    List,
    Run { name: String },
    Export { name: String },
}

fn read_document(path: &PathBuf) -> Result<(String, InputDocument), Error> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        Error::Validation(vec![conedec::Issue {
            path: path.display().to_string(),
            message: format!("cannot read file: {e}"),
        }])
    })?;
    let doc = document::parse_document(&text)?;
    Ok((text, doc))
}

fn run() -> Result<(), Error> {
    let cli = Cli::parse();
    let start = Instant::now();
    let report = match &cli.command {
        Command::Zariski { document, divisor } => {
            let (text, doc) = read_document(document)?;
            let result = document::cmd_zariski(&doc, divisor)?;
            document::make_report(
                "zariski",
                &[divisor],
                Some(&text),
                result,
                Vec::new(),
                start.elapsed().as_millis(),
            )
        }
        Command::Mmp {
            document,
            coefficients,
        } => {
            let (text, doc) = read_document(document)?;
            let result = document::cmd_mmp(&doc, coefficients)?;
            document::make_report(
                "mmp",
                &[coefficients],
                Some(&text),
                result,
                Vec::new(),
                start.elapsed().as_millis(),
            )
        }
        Command::Chambers { document } => {
            let (text, doc) = read_document(document)?;
            let (result, warnings) = document::cmd_chambers(&doc)?;
            document::make_report(
                "chambers",
                &[],
                Some(&text),
                result,
                warnings,
                start.elapsed().as_millis(),
            )
        }
        Command::Walk { document, region } => {
            let (text, doc) = read_document(document)?;
            let result = document::cmd_walk(&doc, region)?;
            document::make_report(
                "walk",
                &[region],
                Some(&text),
                result,
                Vec::new(),
                start.elapsed().as_millis(),
            )
        }
        Command::Gallery { action } => match action {
            GalleryAction::List => document::make_report(
                "gallery list",
                &[],
                None,
                gallery::list(),
                Vec::new(),
                start.elapsed().as_millis(),
            ),
            GalleryAction::Run { name } => {
                let result = gallery::run(name)?;
                document::make_report(
                    "gallery run",
                    &[name],
                    None,
                    result,
                    Vec::new(),
                    start.elapsed().as_millis(),
                )
            }
            GalleryAction::Export { name } => {
                // Prints the bare document so it can be edited and fed back in.
                let result = document::export_fixture(name)?;
                println!(
                    "{}",
                    serde_json::to_string_pretty(&result).expect("serializable")
                );
                return Ok(());
            }
        },
        Command::Plot { decomposition, out } => {
            let text = std::fs::read_to_string(decomposition).map_err(|e| {
                Error::Validation(vec![conedec::Issue {
                    path: decomposition.display().to_string(),
                    message: format!("cannot read file: {e}"),
                }])
            })?;
            let value: Value = serde_json::from_str(&text).map_err(|e| {
                Error::Validation(vec![conedec::Issue {
                    path: decomposition.display().to_string(),
                    message: format!("malformed JSON: {e}"),
                }])
            })?;
            let rendered = svg::render_decomposition(&value)?;
            let out_path = out
                .clone()
                .unwrap_or_else(|| decomposition.with_extension("svg"));
            std::fs::write(&out_path, rendered).map_err(|e| {
                Error::Validation(vec![conedec::Issue {
                    path: out_path.display().to_string(),
                    message: format!("cannot write file: {e}"),
                }])
            })?;
            document::make_report(
                "plot",
                &[&out_path.display().to_string()],
                Some(&text),
                serde_json::json!({"svg": out_path.display().to_string()}),
                Vec::new(),
                start.elapsed().as_millis(),
            )
        }
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&report).expect("serializable")
    );
    Ok(())
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
