//! `perfeval`: stationary solves, exact oracle runs, simulations, method
//! comparisons, parameter sweeps and published-study reproductions for the
//! cluster performability model.
//!
//! Exit codes: 0 success, 1 validation error, 2 solver non-convergence,
//! 3 instance over the exact-solve cap.

mod config;
mod output;

use clap::{Args, Parser, Subcommand};
use config::{ConfigError, KeyGroup, OutputFormat, RunConfig};
use performability::experiment::{
    compare, evaluate_point, run_sweep, Method, Preset, SweepRow, SweepSpec,
};
use std::path::PathBuf;
use std::process::ExitCode;

const EXIT_OK: u8 = 0;
const EXIT_VALIDATION: u8 = 1;
const EXIT_NO_CONVERGENCE: u8 = 2;
const EXIT_CAP: u8 = 3;

#[derive(Parser)]
#[command(
    name = "perfeval",
    version,
    about = "Performability evaluation of head-node/computing-node clusters"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Args)]
struct Flags {
    /// TOML config file; flags override file values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Task arrival rate.
    #[arg(long, global = true)]
    lambda: Option<f64>,
    /// Service rate per node (also sets mu_h).
    #[arg(long, global = true)]
    mu: Option<f64>,
    /// Computing-node failure rate.
    #[arg(long, global = true)]
    xi: Option<f64>,
    /// Head-node failure rate.
    #[arg(long = "xi-h", global = true)]
    xi_h: Option<f64>,
    /// Computing-node repair rate.
    #[arg(long, global = true)]
    eta: Option<f64>,
    /// Head-node repair rate.
    #[arg(long = "eta-h", global = true)]
    eta_h: Option<f64>,
    /// Serving nodes including the head.
    #[arg(long, global = true)]
    s: Option<usize>,
    /// System capacity in tasks.
    #[arg(long, global = true)]
    l: Option<usize>,
    /// Solver convergence threshold on the MQL delta.
    #[arg(long, global = true)]
    delta: Option<f64>,
    /// Solver iteration cap.
    #[arg(long = "max-iter", global = true)]
    max_iter: Option<usize>,
    /// paper-literal | per-computing-node.
    #[arg(long, global = true)]
    semantics: Option<String>,
    /// Master simulation seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Simulation replications.
    #[arg(long, global = true)]
    replications: Option<usize>,
    /// Measured simulated time per replication.
    #[arg(long, global = true)]
    horizon: Option<f64>,
    /// Discarded simulated time (default: horizon/10).
    #[arg(long, global = true)]
    warmup: Option<f64>,
    /// Comma-separated methods: iterative,exact,des.
    #[arg(long, global = true, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv | json.
    #[arg(long, global = true)]
    format: Option<String>,
    /// Sweep axis: lambda|mu|xi|xi_h|eta|eta_h|s|l.
    #[arg(long, global = true)]
    axis: Option<String>,
    /// Comma-separated sweep values.
    #[arg(long, global = true, value_delimiter = ',')]
    values: Option<Vec<f64>>,
    /// Relative discrepancy threshold for compare.
    #[arg(long, global = true)]
    threshold: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Iterative stationary solve; emits one result row.
    Solve,
    /// Exact oracle solve (small instances); emits one result row.
    Exact,
    /// Discrete-event simulation; emits one result row with intervals.
    Simulate,
    /// Run several methods on one instance and report discrepancies.
    Compare,
    /// Evaluate methods along one parameter axis; emits row CSV/JSON.
    Sweep,
    /// Re-run a published study preset: fig8..fig14 or tables.
    Repro {
        /// Preset name.
        preset: String,
        /// Also run DES in large presets (hours at published scale).
        #[arg(long)]
        des: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_VALIDATION)
        }
    }
}

fn run(cli: &Cli) -> Result<u8, ConfigError> {
    let file = match &cli.flags.config {
        Some(path) => config::load_file(path)?,
        None => config::FileConfig::default(),
    };
    let flags = to_overrides(&cli.flags);
    let cfg = config::resolve(&file, &flags)?;

    let used: &[KeyGroup] = match cli.command {
        Command::Solve => &[KeyGroup::Solver],
        Command::Exact => &[],
        Command::Simulate => &[KeyGroup::Sim],
        Command::Compare => &[KeyGroup::Solver, KeyGroup::Sim, KeyGroup::Compare],
        Command::Sweep => &[KeyGroup::Solver, KeyGroup::Sim, KeyGroup::Sweep, KeyGroup::Compare],
        Command::Repro { .. } => &[KeyGroup::Solver, KeyGroup::Sim],
    };
    let unused = config::unused_keys(&file, used);
    if !unused.is_empty() {
        eprintln!("warning: config keys ignored by this subcommand: {}", unused.join(", "));
    }

    match &cli.command {
        Command::Solve => {
            let row = evaluate_point(
                &cfg.params,
                Method::Iterative,
                &cfg.solver,
                &cfg.sim,
                cfg.oracle_cap,
            );
            let exit = if row.converged == Some(false) { EXIT_NO_CONVERGENCE } else { EXIT_OK };
            emit_rows(&[row], &cfg)?;
            Ok(exit)
        }
        Command::Exact => {
            let row =
                evaluate_point(&cfg.params, Method::Exact, &cfg.solver, &cfg.sim, cfg.oracle_cap);
            let exit = exit_for_row(&row);
            emit_rows(&[row], &cfg)?;
            Ok(exit)
        }
        Command::Simulate => {
            let row =
                evaluate_point(&cfg.params, Method::Des, &cfg.solver, &cfg.sim, cfg.oracle_cap);
            emit_rows(&[row], &cfg)?;
            Ok(EXIT_OK)
        }
        Command::Compare => {
            let report = compare(
                &cfg.params,
                &cfg.methods,
                &cfg.solver,
                &cfg.sim,
                cfg.oracle_cap,
                cfg.threshold,
            );
            let exit = report.rows.iter().map(exit_for_row).max().unwrap_or(EXIT_OK);
            emit_compare(&report, &cfg)?;
            Ok(exit)
        }
        Command::Sweep => {
            let axis = cfg
                .axis
                .ok_or_else(|| ConfigError("config key 'axis': required for sweep".into()))?;
            let values = cfg
                .values
                .clone()
                .filter(|v| !v.is_empty())
                .ok_or_else(|| ConfigError("config key 'values': required for sweep".into()))?;
            let mut spec = SweepSpec::new(cfg.params.clone(), axis, values, cfg.methods.clone());
            spec.solver = cfg.solver.clone();
            spec.sim = cfg.sim.clone();
            spec.oracle_cap = cfg.oracle_cap;
            let rows = run_sweep(&spec);
            emit_rows(&rows, &cfg)?;
            Ok(EXIT_OK)
        }
        Command::Repro { preset, des } => {
            let preset: Preset =
                preset.parse().map_err(|e: String| ConfigError(format!("preset: {e}")))?;
            let rows = preset.run(*des, cfg.solver.clone(), cfg.sim.clone());
            emit_rows(&rows, &cfg)?;
            Ok(EXIT_OK)
        }
    }
}

fn exit_for_row(row: &SweepRow) -> u8 {
    match &row.error {
        Some(e) if e.contains("too large") => EXIT_CAP,
        Some(e) if e.contains("not converged") => EXIT_NO_CONVERGENCE,
        Some(_) => EXIT_VALIDATION,
        None => EXIT_OK,
    }
}

fn to_overrides(f: &Flags) -> config::Overrides {
    config::Overrides {
        lambda: f.lambda,
        mu: f.mu,
        xi: f.xi,
        xi_h: f.xi_h,
        eta: f.eta,
        eta_h: f.eta_h,
        s: f.s,
        l: f.l,
        delta: f.delta,
        max_iter: f.max_iter,
        semantics: f.semantics.clone(),
        seed: f.seed,
        replications: f.replications,
        horizon: f.horizon,
        warmup: f.warmup,
        methods: f.methods.clone(),
        out: f.out.clone(),
        format: f.format.clone(),
        axis: f.axis.clone(),
        values: f.values.clone(),
        threshold: f.threshold,
    }
}

fn emit_rows(rows: &[SweepRow], cfg: &RunConfig) -> Result<(), ConfigError> {
    with_output(cfg, |out| match cfg.format {
        OutputFormat::Csv => output::write_rows_csv(rows, out),
        OutputFormat::Json => output::write_rows_json(rows, out),
    })
}

fn emit_compare(
    report: &performability::experiment::CompareReport,
    cfg: &RunConfig,
) -> Result<(), ConfigError> {
    with_output(cfg, |out| match cfg.format {
        OutputFormat::Csv => output::write_compare_csv(report, out),
        OutputFormat::Json => output::write_compare_json(report, out),
    })
}

fn with_output<F>(cfg: &RunConfig, write: F) -> Result<(), ConfigError>
where
    F: FnOnce(&mut dyn std::io::Write) -> std::io::Result<()>,
{
    let result = match &cfg.out {
        Some(path) => {
            let mut file = std::fs::File::create(path)
                .map_err(|e| ConfigError(format!("cannot create {}: {e}", path.display())))?;
            write(&mut file)
        }
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)
        }
    };
    result.map_err(|e| ConfigError(format!("output failed: {e}")))
}
