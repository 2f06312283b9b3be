use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use qdiff::workbench::{self, run_verification_suite, SuiteOptions, Workbench};
use qdiff::Error;

/// Exact computations in q-Weyl algebras and their reductions.
#[derive(Parser)]
#[command(name = "qdiff", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the canonical form of an expression.
    Eval {
        expr: String,
        #[arg(long)]
        config: PathBuf,
    },
    /// Run the verification suite and report pass/fail per check.
    Verify {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated check ids or prefixes, e.g. `rep,root.center`.
        #[arg(long, value_delimiter = ',')]
        only: Option<Vec<String>>,
        #[arg(long)]
        verbose: bool,
        /// Write the JSON report here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Representation matrices.
    Rep {
        #[command(subcommand)]
        command: RepCommand,
    },
    /// Reduce an expression modulo the moment ideal.
    Reduce {
        expr: String,
        #[arg(long)]
        config: PathBuf,
    },
}

#[derive(Subcommand)]
enum RepCommand {
    /// Build every configured representation and dump its matrices as JSON.
    Build {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn load(path: &Path) -> Result<Workbench, Error> {
    Workbench::from_file(path)
}

fn write(path: &Path, contents: &str) -> Result<(), Error> {
    std::fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    match cli.command {
        Command::Eval { expr, config } => {
            println!("{}", workbench::eval(&load(&config)?, &expr)?);
        }
        Command::Reduce { expr, config } => {
            println!("{}", workbench::reduce(&load(&config)?, &expr)?);
        }
        Command::Rep {
            command: RepCommand::Build { config, out },
        } => {
            let dump = workbench::rep_dump(&load(&config)?)?;
            write(&out, &serde_json::to_string_pretty(&dump).expect("dump serializes"))?;
        }
        Command::Verify {
            config,
            only,
            verbose,
            out,
        } => {
            let wb = load(&config)?;
            let report = run_verification_suite(&wb, &SuiteOptions { only, verbose });
            for c in &report.checks {
                let tag = match c.status {
                    workbench::Status::Pass => "pass",
                    workbench::Status::Fail => "FAIL",
                    workbench::Status::Skipped => "skip",
                };
                println!("{tag:4} {:28} {}", c.check_id, c.detail);
                for s in &c.subchecks {
                    println!("       {s}");
                }
            }
            let s = report.summary;
            println!("{} passed, {} failed, {} skipped", s.passed, s.failed, s.skipped);
            if let Some(path) = out {
                write(&path, &report.to_json())?;
            }
            return Ok(ExitCode::from(report.exit_code() as u8));
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Error::Config(list)) => {
            eprintln!("invalid configuration:");
            for e in list {
                eprintln!("  {e}");
            }
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
