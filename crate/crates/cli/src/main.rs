use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use mbqc_cli::{execute, Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo = std::env::args().skip(1).collect::<Vec<_>>().join(" ");
    let out = match execute(&cli, &echo) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    let report = serde_json::to_string_pretty(&out.report).expect("report serializes");
    let written = match (&cli.command, cli.out_path()) {
        (Command::Build { .. }, path) => {
            let artifact = serde_json::to_string(out.artifact.as_ref().expect("build artifact")).expect("json");
            match path {
                Some(p) => std::fs::write(p, artifact).and_then(|_| emit(&report)),
                None => {
                    eprintln!("{report}");
                    emit(&artifact)
                }
            }
        }
        (_, Some(p)) => std::fs::write(p, report),
        (_, None) => emit(&report),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return ExitCode::from(2);
    }
    if out.report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn emit(text: &str) -> std::io::Result<()> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}")?;
    out.flush()
}
