//! Experiment runner: configuration, the solve pipeline and CSV output.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use fracbem::bem::bem_time_march;
use fracbem::drbem::{assemble_drbem, drbem_time_march};
use fracbem::geometry::{default_interior_resolution, discretize_boundary, interior_cells, Domain, Point};
use fracbem::problems::{by_number, rms_error};
use fracbem::timefrac::{steps_to, FractionalScheme};
use serde::{Deserialize, Serialize};

/// Failures of the runner, each mapped to a process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Solver(#[from] fracbem::Error),

    #[error("solution is not finite at t = {0}")]
    Diverged(f64),

    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    /// 2 for bad input, 3 for numerical failure, 4 for output failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Solver(e) if e.is_numerical() => 3,
            CliError::Solver(_) => 2,
            CliError::Diverged(_) => 3,
            CliError::Write { .. } => 4,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Bem,
    Drbem,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Bem => "bem",
            Method::Drbem => "drbem",
        }
    }
}

/// One experiment, or a sweep when any of the `sweep_*` lists is set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub method: Method,
    pub problem: u8,
    pub alpha: f64,
    pub tau: f64,
    pub final_time: f64,
    pub n_elements: usize,
    /// Cell resolution `m`; derived from `n_elements` when absent.
    pub interior_res: Option<usize>,
    /// Table CSV destination; stdout when absent.
    pub output: Option<PathBuf>,
    /// Field CSV destination for the last run of the sweep.
    pub field_output: Option<PathBuf>,
    /// Counterclockwise vertices replacing the default region of problem 3.
    pub polygon: Option<Vec<[f64; 2]>>,
    pub sweep_tau: Option<Vec<f64>>,
    pub sweep_n: Option<Vec<usize>>,
    pub sweep_alpha: Option<Vec<f64>>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            method: Method::Bem,
            problem: 1,
            alpha: 1.5,
            tau: 0.1,
            final_time: 1.0,
            n_elements: 80,
            interior_res: None,
            output: None,
            field_output: None,
            polygon: None,
            sweep_tau: None,
            sweep_n: None,
            sweep_alpha: None,
        }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Single-run configurations in sweep order: α outermost, then `N`, then `τ`.
    pub fn expand(&self) -> Vec<RunConfig> {
        let alphas = self.sweep_alpha.clone().unwrap_or_else(|| vec![self.alpha]);
        let ns = self.sweep_n.clone().unwrap_or_else(|| vec![self.n_elements]);
        let taus = self.sweep_tau.clone().unwrap_or_else(|| vec![self.tau]);
        let mut out = Vec::new();
        for &alpha in &alphas {
            for &n in &ns {
                for &tau in &taus {
                    out.push(RunConfig {
                        alpha,
                        n_elements: n,
                        tau,
                        sweep_alpha: None,
                        sweep_n: None,
                        sweep_tau: None,
                        ..self.clone()
                    });
                }
            }
        }
        out
    }

    fn domain(&self) -> Result<Option<Domain>> {
        match (&self.polygon, self.problem) {
            (None, _) => Ok(None),
            (Some(v), 3) => {
                let vertices = v.iter().map(|&[x, y]| Point::new(x, y)).collect();
                Ok(Some(Domain::polygon(vertices)?))
            }
            (Some(_), p) => Err(CliError::Config(format!("a custom polygon applies only to problem 3, not {p}"))),
        }
    }

    /// Checks ranges that the solver would otherwise report less clearly.
    pub fn validate(&self) -> Result<()> {
        for run in self.expand() {
            if !(run.alpha > 1.0 && run.alpha < 2.0) {
                return Err(CliError::Config(format!("alpha must lie in (1, 2), got {}", run.alpha)));
            }
            if !(run.tau > 0.0) || !(run.final_time > 0.0) {
                return Err(CliError::Config("tau and final_time must be positive".into()));
            }
            steps_to(run.tau, run.final_time)?;
            if !(1..=3).contains(&run.problem) {
                return Err(CliError::Config(format!("problem must be 1, 2 or 3, got {}", run.problem)));
            }
            if run.n_elements == 0 {
                return Err(CliError::Config("n_elements must be positive".into()));
            }
            if matches!(run.interior_res, Some(m) if m < 2) {
                return Err(CliError::Config("interior_res must be at least 2".into()));
            }
        }
        self.domain()?;
        Ok(())
    }
}

/// One row of the results table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord {
    pub method: Method,
    pub problem: u8,
    pub alpha: f64,
    pub n_elements: usize,
    pub n_interior: usize,
    pub tau: f64,
    pub final_time: f64,
    pub rms_error: f64,
    pub wall_time_seconds: f64,
}

/// A record plus the final-time field at the interior points.
#[derive(Debug, Clone, PartialEq)]
pub struct RunResult {
    pub record: RunRecord,
    pub points: Vec<Point>,
    pub numeric: Vec<f64>,
    pub exact: Vec<f64>,
}

/// Runs one configuration (sweep lists are ignored).
pub fn run_single(config: &RunConfig) -> Result<RunResult> {
    let problem = by_number(config.problem, config.alpha, config.domain()?)?;
    let domain = problem.domain.clone();
    let mesh = discretize_boundary(&domain, config.n_elements)?;
    let m = config
        .interior_res
        .unwrap_or_else(|| default_interior_resolution(&domain, config.n_elements));
    let cells = interior_cells(&domain, m)?;
    let scheme = FractionalScheme::for_final_time(config.alpha, config.tau, problem.kappa, config.final_time)?;

    let start = Instant::now();
    let history = match config.method {
        Method::Bem => bem_time_march(&scheme, &problem, &mesh, &cells)?,
        Method::Drbem => {
            let system = assemble_drbem(&mesh, &cells.points, problem.kappa)?;
            drbem_time_march(&system, &scheme, &problem)?
        }
    };
    let wall_time_seconds = start.elapsed().as_secs_f64();

    let numeric = history.latest()[mesh.len()..].to_vec();
    let t_end = scheme.time(scheme.n_steps);
    let exact: Vec<f64> = cells.points.iter().map(|&p| problem.exact(p, t_end)).collect();
    let rms = rms_error(&numeric, &exact)?;
    if !rms.is_finite() {
        return Err(CliError::Diverged(t_end));
    }
    Ok(RunResult {
        record: RunRecord {
            method: config.method,
            problem: config.problem,
            alpha: config.alpha,
            n_elements: config.n_elements,
            n_interior: cells.len(),
            tau: config.tau,
            final_time: config.final_time,
            rms_error: rms,
            wall_time_seconds,
        },
        points: cells.points,
        numeric,
        exact,
    })
}

/// Validates and runs every entry of the sweep in order.
pub fn run(config: &RunConfig) -> Result<Vec<RunResult>> {
    config.validate()?;
    config.expand().iter().map(run_single).collect()
}

pub const TABLE_HEADER: &str = "method,problem,alpha,N,L,tau,T,rms_error,wall_time_s";
pub const FIELD_HEADER: &str = "x,y,u_numeric,u_exact,abs_error";

/// Results table; values use the shortest representation that round-trips.
pub fn emit_table(records: &[RunRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(CliError::Config("no records to write".into()));
    }
    let mut out = String::from(TABLE_HEADER);
    out.push('\n');
    for r in records {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            r.method.as_str(),
            r.problem,
            r.alpha,
            r.n_elements,
            r.n_interior,
            r.tau,
            r.final_time,
            r.rms_error,
            r.wall_time_seconds
        )
        .expect("writing to a string");
    }
    Ok(out)
}

/// Final-time field at the interior points of one run.
pub fn emit_field(result: &RunResult) -> String {
    let mut out = String::from(FIELD_HEADER);
    out.push('\n');
    for ((p, u), e) in result.points.iter().zip(&result.numeric).zip(&result.exact) {
        writeln!(out, "{},{},{},{},{}", p.x, p.y, u, e, (u - e).abs()).expect("writing to a string");
    }
    out
}

/// Parses `0.125` or `1/8`.
pub fn parse_real(text: &str) -> std::result::Result<f64, String> {
    let text = text.trim();
    let value = match text.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| format!("not a number: {text}"))?;
            let b: f64 = b.trim().parse().map_err(|_| format!("not a number: {text}"))?;
            a / b
        }
        None => text.parse().map_err(|_| format!("not a number: {text}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("not a finite number: {text}"))
    }
}
