//! Command-line front end: argument definitions, table rendering and the
//! subcommand drivers. `main.rs` only wires these to the process.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use priorent::entropy::kl_divergence;
use priorent::equilibrium::{
    equilibrium_entropy_prior, equilibrium_entropy_uniform, generalized_distribution,
    gibbs_entropy, solve_beta, EquilibriumSolution,
};
use priorent::oracle::{run_default_suite, OracleReport, Scale};
use priorent::oscillators::{
    mean_energy_closed, mean_energy_series, Dimensionality, OscillatorModel,
};
use priorent::{Error as CoreError, SystemSpec};
use serde_json::{Map, Value};
use thiserror::Error;

pub mod format;
pub use format::{fmt_num, Cell, Table};

/// Slack added to the tail bound before the oscillator command flags a row.
pub const OSCILLATOR_SLACK: f64 = 1e-12;

/// Tolerance under which a prior counts as uniform for entropy selection.
pub const UNIFORM_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Parser)]
#[command(
    name = "priorent",
    version,
    about = "Prior-weighted Boltzmann statistics"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Spacing {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum SweepVariable {
    #[default]
    Beta,
    Temperature,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScaleArg {
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DimArg {
    #[value(name = "1d")]
    OneD,
    #[value(name = "2d")]
    TwoD,
}

#[derive(Debug, Clone, clap::Args)]
pub struct GridArgs {
    #[arg(long = "from", allow_negative_numbers = true)]
    pub from: Option<f64>,
    #[arg(long = "to", allow_negative_numbers = true)]
    pub to: Option<f64>,
    #[arg(long, default_value_t = 2)]
    pub points: usize,
    #[arg(long, value_enum, default_value_t = Spacing::Linear)]
    pub spacing: Spacing,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prior-weighted Boltzmann distribution at one beta.
    Distribution {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        beta: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Thermodynamic quantities over a grid of beta or temperature values.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum, default_value_t = SweepVariable::Beta)]
        variable: SweepVariable,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Inverse temperature that reproduces a target mean energy.
    Solve {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long = "target-energy", allow_negative_numbers = true)]
        target_energy: f64,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Run the built-in brute-force oracle suite.
    Verify {
        #[arg(long, value_enum, default_value_t = ScaleArg::Quick)]
        scale: ScaleArg,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
    /// Oscillator mean energies: closed form against truncated series.
    Oscillator {
        #[arg(long, value_enum)]
        dim: DimArg,
        #[arg(long = "h-nu", default_value_t = 1.0)]
        h_nu: f64,
        #[arg(long, default_value_t = 200)]
        levels: usize,
        #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["from", "to"])]
        beta: Option<f64>,
        #[command(flatten)]
        grid: GridArgs,
        #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
        format: OutputFormat,
    },
}

/// Failure of a subcommand, carrying its exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("verification failed: {failed} of {total} checks")]
    Verification { failed: usize, total: usize },
    #[error("output error: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification { .. } => 1,
            CliError::Input(_) => 2,
            CliError::Output(_) => 3,
            CliError::Core(e) => match e {
                CoreError::TargetOutOfRange { .. } | CoreError::NoVariation { .. } => 4,
                CoreError::DegeneratePrior
                | CoreError::BracketFailure
                | CoreError::TruncationInsufficient { .. }
                | CoreError::SupportViolation { .. }
                | CoreError::ZeroPriorEntry { .. }
                | CoreError::KMismatch(..)
                | CoreError::ExceedsReference { .. }
                | CoreError::MeanSumMismatch { .. }
                | CoreError::InvalidMean { .. } => 3,
                _ => 2,
            },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

/// A validated grid of sweep points.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRequest {
    pub variable: SweepVariable,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl SweepRequest {
    pub fn new(
        variable: SweepVariable,
        start: f64,
        stop: f64,
        points: usize,
        spacing: Spacing,
    ) -> Result<Self, CliError> {
        if !(start.is_finite() && stop.is_finite()) {
            return Err(CliError::Input("sweep bounds must be finite".into()));
        }
        if start >= stop {
            return Err(CliError::Input(format!(
                "sweep start {start} must be below stop {stop}"
            )));
        }
        if points < 2 {
            return Err(CliError::Input("a sweep needs at least 2 points".into()));
        }
        if spacing == Spacing::Log && start <= 0.0 {
            return Err(CliError::Input(
                "log spacing requires a positive start".into(),
            ));
        }
        if variable == SweepVariable::Temperature && start <= 0.0 {
            return Err(CliError::Input("temperatures must be positive".into()));
        }
        Ok(Self {
            variable,
            start,
            stop,
            points,
            spacing,
        })
    }

    /// Grid values in increasing order; both endpoints are hit exactly.
    pub fn grid(&self) -> Vec<f64> {
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                if i == 0 {
                    return self.start;
                }
                if i == self.points - 1 {
                    return self.stop;
                }
                let t = i as f64 / last;
                let x = match self.spacing {
                    Spacing::Linear => self.start * (1.0 - t) + self.stop * t,
                    Spacing::Log => {
                        (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp()
                    }
                };
                x.clamp(self.start, self.stop)
            })
            .collect()
    }

    /// Grid converted to beta values.
    pub fn betas(&self, k: f64) -> Vec<f64> {
        match self.variable {
            SweepVariable::Beta => self.grid(),
            SweepVariable::Temperature => self.grid().into_iter().map(|t| 1.0 / (k * t)).collect(),
        }
    }
}

fn grid_request(variable: SweepVariable, grid: &GridArgs) -> Result<SweepRequest, CliError> {
    let start = grid
        .from
        .ok_or_else(|| CliError::Input("--from is required".into()))?;
    let stop = grid
        .to
        .ok_or_else(|| CliError::Input("--to is required".into()))?;
    SweepRequest::new(variable, start, stop, grid.points, grid.spacing)
}

pub fn load_spec(path: &Path) -> Result<SystemSpec, CliError> {
    let bytes =
        std::fs::read(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(SystemSpec::from_json_bytes(&bytes)?)
}

fn temperature_cell(beta: f64, k: f64) -> Cell {
    if beta == 0.0 {
        Cell::Empty
    } else {
        Cell::Num(1.0 / (k * beta))
    }
}

/// Closed-form equilibrium entropy: the equal-prior form for a uniform prior,
/// the unequal-prior form otherwise. Empty when the prior has zero entries.
fn closed_form_entropy(spec: &SystemSpec, beta: f64) -> Result<Cell, CliError> {
    let (n, k) = (spec.particles, spec.boltzmann_k);
    if spec.prior.is_uniform(UNIFORM_TOLERANCE) {
        return Ok(Cell::Num(equilibrium_entropy_uniform(
            &spec.spectrum,
            beta,
            n,
            k,
        )?));
    }
    match equilibrium_entropy_prior(&spec.spectrum, &spec.prior, beta, n, k) {
        Ok(s) => Ok(Cell::Num(s)),
        Err(CoreError::ZeroPriorEntry { .. }) => Ok(Cell::Empty),
        Err(e) => Err(e.into()),
    }
}

fn level_table(spec: &SystemSpec, sol: &EquilibriumSolution) -> Table {
    let mut t = Table::new(&["level", "energy", "prior", "probability"]);
    for (i, ((e, p0), p)) in spec
        .spectrum
        .levels()
        .iter()
        .zip(spec.prior.entries())
        .zip(sol.distribution.entries())
        .enumerate()
    {
        t.push(vec![
            Cell::Int(i as i64 + 1),
            Cell::Num(*e),
            Cell::Num(*p0),
            Cell::Num(*p),
        ]);
    }
    t
}

pub fn cmd_distribution(
    spec: &SystemSpec,
    beta: f64,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let sol = generalized_distribution(&spec.spectrum, &spec.prior, beta)?;
    let k = spec.boltzmann_k;
    let mut summary = Table::new(&[
        "beta",
        "temperature",
        "log_partition",
        "mean_energy",
        "gibbs_entropy",
    ]);
    summary.push(vec![
        Cell::Num(beta),
        temperature_cell(beta, k),
        Cell::Num(sol.log_partition),
        Cell::Num(sol.mean_energy),
        Cell::Num(gibbs_entropy(&sol.distribution, spec.particles, k)),
    ]);
    level_table(spec, &sol).render(format, out)?;
    if format == OutputFormat::Csv {
        writeln!(out)?;
    }
    summary.render(format, out)?;
    Ok(())
}

pub const SWEEP_COLUMNS: [&str; 7] = [
    "beta",
    "temperature",
    "log_partition",
    "mean_energy",
    "gibbs_entropy",
    "closed_form_entropy",
    "kl_to_prior",
];

pub fn sweep_table(spec: &SystemSpec, request: &SweepRequest) -> Result<Table, CliError> {
    let k = spec.boltzmann_k;
    let mut table = Table::new(&SWEEP_COLUMNS);
    for beta in request.betas(k) {
        let sol = generalized_distribution(&spec.spectrum, &spec.prior, beta)?;
        table.push(vec![
            Cell::Num(beta),
            temperature_cell(beta, k),
            Cell::Num(sol.log_partition),
            Cell::Num(sol.mean_energy),
            Cell::Num(gibbs_entropy(&sol.distribution, spec.particles, k)),
            closed_form_entropy(spec, beta)?,
            Cell::Num(kl_divergence(&sol.distribution, &spec.prior)?),
        ]);
    }
    Ok(table)
}

pub fn cmd_sweep(
    spec: &SystemSpec,
    request: &SweepRequest,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    sweep_table(spec, request)?.render(format, out)?;
    Ok(())
}

pub fn cmd_solve(
    spec: &SystemSpec,
    target: f64,
    format: OutputFormat,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let sol = solve_beta(&spec.spectrum, &spec.prior, target)?;
    let k = spec.boltzmann_k;
    let mut summary = Table::new(&[
        "beta",
        "temperature",
        "target_energy",
        "mean_energy",
        "log_partition",
    ]);
    summary.push(vec![
        Cell::Num(sol.beta),
        temperature_cell(sol.beta, k),
        Cell::Num(target),
        Cell::Num(sol.mean_energy),
        Cell::Num(sol.log_partition),
    ]);
    summary.render(format, out)?;
    if format == OutputFormat::Csv {
        writeln!(out)?;
    }
    level_table(spec, &sol).render(format, out)?;
    Ok(())
}

fn report_table(reports: &[OracleReport]) -> Table {
    let mut t = Table::new(&[
        "check_name",
        "instance",
        "exact_value",
        "approx_value",
        "abs_error",
        "rel_error",
        "passed",
        "tolerance",
    ]);
    for r in reports {
        t.push(vec![
            Cell::Text(r.check_name.clone()),
            Cell::Text(r.instance.clone()),
            Cell::Text(r.exact_value.clone()),
            Cell::Num(r.approx_value),
            Cell::Num(r.abs_error),
            Cell::Num(r.rel_error),
            Cell::Bool(r.passed),
            Cell::Num(r.tolerance),
        ]);
    }
    t
}

/// Runs the oracle suite; the summary goes to `diag`.
pub fn cmd_verify(
    scale: ScaleArg,
    format: OutputFormat,
    out: &mut dyn Write,
    diag: &mut dyn Write,
) -> Result<(), CliError> {
    let scale = match scale {
        ScaleArg::Quick => Scale::Quick,
        ScaleArg::Full => Scale::Full,
    };
    let reports = run_default_suite(scale)?;
    match format {
        OutputFormat::Csv => report_table(&reports).render(format, out)?,
        OutputFormat::Json => {
            for r in &reports {
                let line = serde_json::to_string(r).map_err(|e| CliError::Output(e.to_string()))?;
                writeln!(out, "{line}")?;
            }
        }
    }
    let failed = reports.iter().filter(|r| !r.passed).count();
    writeln!(
        diag,
        "{} checks, {} passed, {} failed",
        reports.len(),
        reports.len() - failed,
        failed
    )?;
    if failed > 0 {
        return Err(CliError::Verification {
            failed,
            total: reports.len(),
        });
    }
    Ok(())
}

pub fn oscillator_table(model: &OscillatorModel, betas: &[f64]) -> Result<Table, CliError> {
    if let Some(&b) = betas.iter().find(|b| !(**b > 0.0 && b.is_finite())) {
        return Err(CoreError::NonPositiveBeta(b).into());
    }
    let mut t = Table::new(&[
        "beta",
        "closed_form_energy",
        "series_energy",
        "tail_bound",
        "difference",
        "within_bound",
    ]);
    for &beta in betas {
        let closed = mean_energy_closed(model, beta)?;
        let series = mean_energy_series(model, beta)?;
        let diff = (series.value - closed).abs();
        t.push(vec![
            Cell::Num(beta),
            Cell::Num(closed),
            Cell::Num(series.value),
            Cell::Num(series.tail_bound),
            Cell::Num(diff),
            Cell::Bool(diff <= series.tail_bound + OSCILLATOR_SLACK),
        ]);
    }
    Ok(t)
}

/// Dispatches a parsed command line. Data goes to `out`, diagnostics to `diag`.
pub fn run(cli: Cli, out: &mut dyn Write, diag: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Distribution { spec, beta, format } => {
            if !beta.is_finite() {
                return Err(CoreError::NonFiniteBeta(beta).into());
            }
            cmd_distribution(&load_spec(&spec)?, beta, format, out)
        }
        Command::Sweep {
            spec,
            variable,
            grid,
            format,
        } => {
            let request = grid_request(variable, &grid)?;
            cmd_sweep(&load_spec(&spec)?, &request, format, out)
        }
        Command::Solve {
            spec,
            target_energy,
            format,
        } => cmd_solve(&load_spec(&spec)?, target_energy, format, out),
        Command::Verify { scale, format } => cmd_verify(scale, format, out, diag),
        Command::Oscillator {
            dim,
            h_nu,
            levels,
            beta,
            grid,
            format,
        } => {
            let dimensionality = match dim {
                DimArg::OneD => Dimensionality::Linear1D,
                DimArg::TwoD => Dimensionality::Planar2D,
            };
            let model = OscillatorModel::new(h_nu, dimensionality, levels)?;
            let betas = match beta {
                Some(b) => vec![b],
                None => {
                    let (from, to) = (grid.from, grid.to);
                    if let Some(b) = from.into_iter().chain(to).find(|b| *b <= 0.0) {
                        return Err(CoreError::NonPositiveBeta(b).into());
                    }
                    grid_request(SweepVariable::Beta, &grid)?.grid()
                }
            };
            oscillator_table(&model, &betas)?.render(format, out)?;
            Ok(())
        }
    }
}

/// JSON object for one table row, keys in column order.
pub(crate) fn row_object(columns: &[String], row: &[Cell]) -> Value {
    let mut map = Map::new();
    for (name, cell) in columns.iter().zip(row) {
        map.insert(name.clone(), cell.to_json());
    }
    Value::Object(map)
}
