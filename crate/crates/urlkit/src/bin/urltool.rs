use std::fs::File;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use urlkit::cli::{
    run_bench, run_conformance, run_normalize, BenchOptions, ConformanceOptions, NormalizeOptions,
};

#[derive(Parser)]
#[command(name = "urltool", about = "URL corpus normalization, conformance, and benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize one URL per line from FILE or stdin.
    Normalize {
        /// Emit one JSON record per line instead of plain hrefs.
        #[arg(long)]
        json: bool,
        /// Base URL for resolving relative inputs.
        #[arg(long)]
        base: Option<String>,
        /// Exit non-zero when any line fails to parse.
        #[arg(long)]
        strict: bool,
        file: Option<PathBuf>,
    },
    /// Run a conformance file in the web-platform-tests urltestdata layout.
    Conformance {
        /// Count cases needing full UTS #46 IDNA as skipped instead of
        /// running them.
        #[arg(long = "skip-idna")]
        skip_idna: bool,
        /// Maximum number of diffs to print.
        #[arg(long, default_value_t = 20)]
        max_diffs: usize,
        file: PathBuf,
    },
    /// Benchmark parsing throughput over a line-delimited URL file.
    Bench {
        #[arg(long, default_value_t = 5)]
        iterations: usize,
        #[arg(long, default_value_t = 1)]
        warmup: usize,
        #[arg(long, default_value_t = 1)]
        threads: usize,
        file: PathBuf,
    },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("urltool: {err}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> io::Result<ExitCode> {
    match cli.command {
        Command::Normalize {
            json,
            base,
            strict,
            file,
        } => {
            let opts = NormalizeOptions { json, base, strict };
            let mut reader: Box<dyn BufRead> = match file {
                Some(path) => Box::new(BufReader::new(File::open(path)?)),
                None => Box::new(BufReader::new(io::stdin())),
            };
            let stdout = io::stdout();
            let mut out = io::BufWriter::new(stdout.lock());
            let report = run_normalize(&mut reader, &mut out, &opts)?;
            out.flush()?;
            eprintln!("{}", report.summary_line());
            if opts.strict && report.invalid > 0 {
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Conformance {
            skip_idna,
            max_diffs,
            file,
        } => {
            let mut text = String::new();
            File::open(file)?.read_to_string(&mut text)?;
            let opts = ConformanceOptions {
                skip_idna,
                max_diffs,
            };
            let report = run_conformance(&text, &opts)
                .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
            println!(
                "pass={} fail={} skipped={}",
                report.passed, report.failed, report.skipped
            );
            for diff in &report.diffs {
                println!("diff: {diff}");
            }
            if report.failed > 0 {
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            iterations,
            warmup,
            threads,
            file,
        } => {
            let reader = BufReader::new(File::open(file)?);
            let lines: Vec<String> = reader
                .lines()
                .collect::<io::Result<Vec<_>>>()?
                .into_iter()
                .filter(|l| !l.is_empty())
                .collect();
            let report = run_bench(
                &lines,
                &BenchOptions {
                    iterations,
                    warmup,
                    threads,
                },
            );
            println!("{}", report.summary());
            Ok(ExitCode::SUCCESS)
        }
    }
}
