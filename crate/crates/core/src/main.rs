use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use toric_okounkov::bary::DEFAULT_PRECISION;
use toric_okounkov::io::{corpus_table, run, run_corpus, Command, JobOptions, JobSpec};
use toric_okounkov::Error;

#[derive(Parser, Debug)]
#[command(name = "toric-okounkov", version, about = "Exact Okounkov bodies and stability thresholds on toric varieties")]
struct Cli {
    /// Job to run.
    #[arg(value_enum, required_unless_present = "corpus")]
    command: Option<Command>,
    /// JSON input file; stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Bits of precision for interval-valued bounds.
    #[arg(long, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    /// Extra candidate vector for threshold jobs, e.g. `--candidate 1,-1`.
    #[arg(long = "candidate", action = clap::ArgAction::Append, allow_hyphen_values = true)]
    candidates: Vec<String>,
    /// Run the bundled examples and print a pass/fail table.
    #[arg(long)]
    corpus: bool,
}

fn parse_candidates(raw: &[String]) -> Result<Vec<Vec<i64>>, Error> {
    raw.iter()
        .map(|s| {
            s.split(|c: char| c == ',' || c.is_whitespace())
                .filter(|t| !t.is_empty())
                .map(|t| t.parse::<i64>().map_err(|e| Error::Parse(format!("candidate {s:?}: {e}"))))
                .collect()
        })
        .collect()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts_base = JobOptions { precision: cli.precision, candidates: Vec::new() };
    if cli.corpus {
        let rows = run_corpus(&opts_base);
        print!("{}", corpus_table(&rows));
        return if rows.iter().all(|r| r.pass) { ExitCode::SUCCESS } else { ExitCode::from(1) };
    }
    let command = cli.command.expect("required by clap");
    let outcome = match parse_candidates(&cli.candidates) {
        Ok(candidates) => run(&JobSpec {
            command,
            input_path: cli.input.clone(),
            output_path: cli.output.clone(),
            options: JobOptions { candidates, ..opts_base },
        }),
        Err(e) => toric_okounkov::io::error_report(Some(command), &e),
    };
    let written = match &cli.output {
        Some(p) => std::fs::write(p, &outcome.report),
        None => std::io::stdout().write_all(outcome.report.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("cannot write report: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(outcome.exit_code as u8)
}
