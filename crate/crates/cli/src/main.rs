use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use fracbem_cli::{emit_field, emit_table, parse_real, run, CliError, Method, RunConfig};

/// Runs the BEM or DRBEM solver on one of the test problems and writes the
/// RMS error table as CSV.
#[derive(Debug, Parser)]
#[command(name = "fracbem", version)]
struct Args {
    /// JSON file with RunConfig fields; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[arg(long)]
    problem: Option<u8>,
    #[arg(long, value_parser = parse_real)]
    alpha: Option<f64>,
    /// Time step, e.g. 0.125 or 1/8.
    #[arg(long, value_parser = parse_real)]
    tau: Option<f64>,
    #[arg(long)]
    n_elements: Option<usize>,
    #[arg(long)]
    interior_res: Option<usize>,
    #[arg(long, value_parser = parse_real)]
    final_time: Option<f64>,
    /// Table CSV path (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Field CSV path for the final time of the last run.
    #[arg(long)]
    field_out: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', value_parser = parse_real)]
    sweep_tau: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    sweep_n: Option<Vec<usize>>,
    #[arg(long, value_delimiter = ',', value_parser = parse_real)]
    sweep_alpha: Option<Vec<f64>>,
}

fn load(args: &Args) -> Result<RunConfig, CliError> {
    let mut c = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
            RunConfig::from_json(&text)?
        }
        None => RunConfig::default(),
    };
    if let Some(v) = args.method {
        c.method = v;
    }
    if let Some(v) = args.problem {
        c.problem = v;
    }
    if let Some(v) = args.alpha {
        c.alpha = v;
    }
    if let Some(v) = args.tau {
        c.tau = v;
    }
    if let Some(v) = args.n_elements {
        c.n_elements = v;
    }
    if args.interior_res.is_some() {
        c.interior_res = args.interior_res;
    }
    if let Some(v) = args.final_time {
        c.final_time = v;
    }
    if args.out.is_some() {
        c.output = args.out.clone();
    }
    if args.field_out.is_some() {
        c.field_output = args.field_out.clone();
    }
    if args.sweep_tau.is_some() {
        c.sweep_tau = args.sweep_tau.clone();
    }
    if args.sweep_n.is_some() {
        c.sweep_n = args.sweep_n.clone();
    }
    if args.sweep_alpha.is_some() {
        c.sweep_alpha = args.sweep_alpha.clone();
    }
    Ok(c)
}

fn write(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

fn execute(args: &Args) -> Result<(), CliError> {
    let config = load(args)?;
    let results = run(&config)?;
    let records: Vec<_> = results.iter().map(|r| r.record.clone()).collect();
    let table = emit_table(&records)?;
    match &config.output {
        Some(path) => write(path, &table)?,
        None => print!("{table}"),
    }
    if let (Some(path), Some(last)) = (&config.field_output, results.last()) {
        write(path, &emit_field(last))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
