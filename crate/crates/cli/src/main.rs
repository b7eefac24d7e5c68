//! `isogauge`: certify the inequality chains on configured or random inputs.
//!
//! Exit status: 0 when every assertion passes, 1 on input errors, 2 when any
//! certification fails (diagnostics on stderr).

mod config;
mod converge;
mod error;
mod output;
mod run;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use crate::error::CliError;
use crate::output::{write_json, Table};
use crate::run::{Outcome, Params};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "isogauge",
    version,
    about = "Numerical certification of isoperimetric-type inequality chains"
)]
struct Args {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Directory for report files; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Sample count (circle, curve) or colatitude count (sphere).
    #[arg(long)]
    resolution: Option<usize>,
    #[arg(long)]
    tolerance: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, env = "ISOGAUGE_JOBS", default_value_t = 0)]
    jobs: usize,
}

fn io_err(path: &std::path::Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.display().to_string(),
        source,
    }
}

fn emit(args: &Args, command: &str, outcome: &Outcome) -> Result<(), CliError> {
    let status = if outcome.failures.is_empty() {
        "pass"
    } else {
        "fail"
    };
    match &args.out {
        Some(dir) => {
            std::fs::create_dir_all(dir).map_err(io_err(dir))?;
            match args.format {
                Format::Csv => {
                    for t in &outcome.tables {
                        let path = dir.join(format!("{}.csv", t.name));
                        t.write_csv(BufWriter::new(File::create(&path).map_err(io_err(&path))?))?;
                    }
                }
                Format::Json => {
                    let path = dir.join(format!("{command}.json"));
                    let mut w = BufWriter::new(File::create(&path).map_err(io_err(&path))?);
                    write_json(&mut w, command, status, &outcome.tables)?;
                    w.flush().map_err(io_err(&path))?;
                }
            }
        }
        None => {
            let mut w = io::stdout().lock();
            match args.format {
                Format::Csv => write_tables(&mut w, &outcome.tables)?,
                Format::Json => write_json(&mut w, command, status, &outcome.tables)?,
            }
        }
    }
    Ok(())
}

/// Tables on one stream, separated by a blank line.
fn write_tables<W: Write>(w: &mut W, tables: &[Table]) -> Result<(), CliError> {
    for (i, t) in tables.iter().enumerate() {
        if i > 0 {
            writeln!(w).map_err(io_err("<stdout>".as_ref()))?;
        }
        t.write_csv(&mut *w)?;
    }
    Ok(())
}

fn execute(args: &Args) -> Result<Outcome, CliError> {
    let config = config::load(&args.config)?;
    let settings = config.settings();
    let params = Params {
        resolution: args.resolution.or(settings.resolution),
        tolerance: args
            .tolerance
            .or(settings.tolerance)
            .unwrap_or(isogauge::DEFAULT_TOLERANCE),
        seed: args.seed.or(settings.seed).unwrap_or(0),
    };
    if !(params.tolerance.is_finite() && params.tolerance > 0.0) {
        return Err(CliError::Usage(format!(
            "tolerance must be positive, got {}",
            params.tolerance
        )));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs)
        .build()
        .map_err(|e| CliError::Usage(format!("thread pool: {e}")))?;
    let outcome = pool.install(|| run::run(&config, params))?;
    emit(args, config.name(), &outcome)?;
    Ok(outcome)
}

fn main() -> ExitCode {
    // flag errors are input errors (1); 2 is reserved for failed certification
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = execute(&args);
    if let Ok(outcome) = &result {
        for w in &outcome.warnings {
            eprintln!("WARN {w}");
        }
    }
    match result {
        Ok(outcome) if outcome.failures.is_empty() => ExitCode::SUCCESS,
        Ok(outcome) => {
            for f in &outcome.failures {
                eprintln!("FAIL {f}");
            }
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
