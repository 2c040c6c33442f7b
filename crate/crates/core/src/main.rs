use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use g20_links::report::{catalog, run_checks, Status};

#[derive(Parser)]
#[command(
    name = "g20-verify",
    version,
    about = "Exact certificates for the G20 links between the Clebsch cubic and S5"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the check catalog.
    List,
    /// Run checks by id, or `all`.
    Verify {
        #[arg(required = true)]
        ids: Vec<String>,
        #[arg(long, value_enum, default_value_t = Format::Markdown)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u16).range(1..))]
        jobs: u16,
        /// Include per-check wall time (breaks byte determinism).
        #[arg(long)]
        timings: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Markdown,
}

fn emit(text: &str, output: Option<&PathBuf>) -> std::io::Result<()> {
    match output {
        Some(path) => fs::write(path, text),
        None => std::io::stdout().lock().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            let mut text = String::new();
            for c in catalog() {
                text.push_str(&format!("{}\t{}\n", c.id, c.statement));
            }
            if let Err(e) = emit(&text, None) {
                eprintln!("error: {e}");
                return ExitCode::from(2);
            }
            ExitCode::SUCCESS
        }
        Command::Verify {
            ids,
            format,
            output,
            jobs,
            timings,
        } => {
            let report = match run_checks(&ids, jobs as usize, timings) {
                Ok(r) => r,
                // unknown ids and setup failures are usage-level errors
                Err(e) => {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            };
            let text = match format {
                Format::Json => report.to_json(),
                Format::Markdown => report.to_markdown(),
            };
            if let Err(e) = emit(&text, output.as_ref()) {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(2);
            }
            if report.overall == Status::Pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
    }
}
