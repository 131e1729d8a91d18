use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use serde_json::Value;

use mukai_cli::{exit, render, run_batch, Command};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Human,
    Machine,
}

/// Exact lattice computations for K3 surfaces and their moduli spaces.
///
/// Input is one JSON document or an array of them; see the schemas directory
/// for the document formats. Exit status: 0 all checks pass, 1 bad input,
/// 2 invariant violation, 3 I/O failure.
#[derive(Debug, Parser)]
#[command(name = "mukai", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Input file (default: standard input).
    #[arg(long, short)]
    input: Option<PathBuf>,
    /// Output file (default: standard output).
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "machine")]
    report: ReportFormat,
    /// Add wall-clock milliseconds to each report (makes output nondeterministic).
    #[arg(long)]
    timing: bool,
}

fn read_input(path: &Option<PathBuf>) -> io::Result<String> {
    match path {
        Some(p) => fs::read_to_string(p),
        None => {
            let mut s = String::new();
            io::stdin().read_to_string(&mut s)?;
            Ok(s)
        }
    }
}

fn write_output(path: &Option<PathBuf>, text: &str) -> io::Result<()> {
    match path {
        Some(p) => fs::write(p, text),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

fn code(c: i32) -> ExitCode {
    ExitCode::from(c as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match read_input(&cli.input) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("mukai: cannot read input: {e}");
            return code(exit::IO);
        }
    };
    let doc: Value = match serde_json::from_str(&text) {
        Ok(d) => d,
        Err(e) => {
            eprintln!("mukai: input is not valid JSON: {e}");
            return code(exit::BAD_INPUT);
        }
    };
    let (report, status) = run_batch(cli.command, &doc, cli.timing);
    let rendered = match cli.report {
        ReportFormat::Machine => {
            let mut s = serde_json::to_string_pretty(&report).expect("reports serialize");
            s.push('\n');
            s
        }
        ReportFormat::Human => render::human(&report),
    };
    if let Err(e) = write_output(&cli.output, &rendered) {
        eprintln!("mukai: cannot write output: {e}");
        return code(exit::IO);
    }
    code(status)
}
