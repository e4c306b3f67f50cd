//! Config file schema and flag merging.
//!
//! One flat TOML schema serves every subcommand; keys a subcommand does not
//! use are ignored with a warning. Flags override file values, which
//! override the built-in defaults (the published S=500, L=1000 operating
//! point). Unknown keys are rejected.

use performability::experiment::{Axis, Method};
use performability::oracle::DEFAULT_STATE_CAP;
use performability::params::{Semantics, SystemParams};
use performability::sim::SimConfig;
use performability::solver::SolverConfig;
use serde::Deserialize;
use std::path::PathBuf;

/// Raw key-value config file. Every key optional; unknown keys rejected.
#[derive(Debug, Default, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    // model
    pub s: Option<usize>,
    pub l: Option<usize>,
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub mu_h: Option<f64>,
    pub xi: Option<f64>,
    pub xi_h: Option<f64>,
    pub eta: Option<f64>,
    pub eta_h: Option<f64>,
    pub semantics: Option<String>,
    // solver
    pub delta: Option<f64>,
    pub max_iterations: Option<usize>,
    pub residual_target: Option<f64>,
    // simulation
    pub seed: Option<u64>,
    pub replications: Option<usize>,
    pub horizon: Option<f64>,
    pub warmup: Option<f64>,
    pub confidence: Option<f64>,
    pub tag_sojourns: Option<bool>,
    // sweep / compare
    pub methods: Option<Vec<String>>,
    pub axis: Option<String>,
    pub values: Option<Vec<f64>>,
    pub threshold: Option<f64>,
    pub oracle_cap: Option<usize>,
    // output
    pub format: Option<String>,
    pub out: Option<String>,
}

/// Flag-level overrides; mirrors the file schema where flags exist.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub lambda: Option<f64>,
    pub mu: Option<f64>,
    pub xi: Option<f64>,
    pub xi_h: Option<f64>,
    pub eta: Option<f64>,
    pub eta_h: Option<f64>,
    pub s: Option<usize>,
    pub l: Option<usize>,
    pub delta: Option<f64>,
    pub max_iter: Option<usize>,
    pub semantics: Option<String>,
    pub seed: Option<u64>,
    pub replications: Option<usize>,
    pub horizon: Option<f64>,
    pub warmup: Option<f64>,
    pub methods: Option<Vec<String>>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub axis: Option<String>,
    pub values: Option<Vec<f64>>,
    pub threshold: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Fully resolved and validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub params: SystemParams,
    pub solver: SolverConfig,
    pub sim: SimConfig,
    pub methods: Vec<Method>,
    pub axis: Option<Axis>,
    pub values: Option<Vec<f64>>,
    pub threshold: f64,
    pub oracle_cap: usize,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

/// A config problem; always names the offending key.
#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err(key: &str, what: impl std::fmt::Display) -> ConfigError {
    ConfigError(format!("config key '{key}': {what}"))
}

pub fn load_file(path: &std::path::Path) -> Result<FileConfig, ConfigError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ConfigError(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| ConfigError(format!("invalid config: {e}")))
}

pub fn resolve(file: &FileConfig, flags: &Overrides) -> Result<RunConfig, ConfigError> {
    // Built-in defaults: the published headline operating point.
    let mut params = SystemParams::new(500, 1000, 70.0, 0.25, 0.001, 0.001, 0.5, 0.5);

    if let Some(v) = file.s { params.s = v }
    if let Some(v) = file.l { params.l = v }
    if let Some(v) = file.lambda { params.lambda = v }
    if let Some(v) = file.mu {
        params.mu = v;
        params.mu_h = v;
    }
    if let Some(v) = file.xi { params.xi = v }
    if let Some(v) = file.xi_h { params.xi_h = v }
    if let Some(v) = file.eta { params.eta = v }
    if let Some(v) = file.eta_h { params.eta_h = v }

    if let Some(v) = flags.s { params.s = v }
    if let Some(v) = flags.l { params.l = v }
    if let Some(v) = flags.lambda { params.lambda = v }
    if let Some(v) = flags.mu {
        params.mu = v;
        params.mu_h = v;
    }
    if let Some(v) = flags.xi { params.xi = v }
    if let Some(v) = flags.xi_h { params.xi_h = v }
    if let Some(v) = flags.eta { params.eta = v }
    if let Some(v) = flags.eta_h { params.eta_h = v }

    // mu_h has no flag; a file value overrides the mu default.
    if let Some(v) = file.mu_h { params.mu_h = v }

    let semantics_src = flags.semantics.as_deref().or(file.semantics.as_deref());
    if let Some(text) = semantics_src {
        params.semantics = text.parse::<Semantics>().map_err(|e| err("semantics", e))?;
    }
    params.validate().map_err(|e| {
        let key = match &e {
            performability::params::ParamError::TooFewNodes(_) => "s",
            performability::params::ParamError::CapacityBelowNodes { .. } => "l",
            performability::params::ParamError::BadRate { name, .. } => name,
            performability::params::ParamError::NonPositiveRate { name, .. } => name,
            performability::params::ParamError::HeadServiceMismatch { .. } => "mu_h",
        };
        err(key, e)
    })?;

    let mut solver = SolverConfig::default();
    if let Some(v) = file.delta { solver.delta = v }
    if let Some(v) = flags.delta { solver.delta = v }
    if let Some(v) = file.max_iterations { solver.max_iterations = v }
    if let Some(v) = flags.max_iter { solver.max_iterations = v }
    if let Some(v) = file.residual_target { solver.residual_target = Some(v) }
    solver.validate().map_err(|e| err("delta", e))?;

    let mut sim = SimConfig::default();
    if let Some(v) = file.horizon.or(flags.horizon) {
        sim = sim.with_horizon(v); // sets the conventional 10% warmup
    }
    if let Some(v) = flags.horizon { sim.horizon = v }
    if let Some(v) = file.warmup { sim.warmup = v }
    if let Some(v) = flags.warmup { sim.warmup = v }
    if let Some(v) = file.seed { sim.seed = v }
    if let Some(v) = flags.seed { sim.seed = v }
    if let Some(v) = file.replications { sim.replications = v }
    if let Some(v) = flags.replications { sim.replications = v }
    if let Some(v) = file.confidence { sim.confidence = v }
    if let Some(v) = file.tag_sojourns { sim.tag_sojourns = v }
    sim.validate().map_err(|e| err("replications", e))?;

    let method_names = flags.methods.clone().or_else(|| file.methods.clone());
    let methods = match method_names {
        Some(names) => names
            .iter()
            .map(|n| n.parse::<Method>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| err("methods", e))?,
        None => vec![Method::Iterative],
    };
    if methods.is_empty() {
        return Err(err("methods", "at least one method required"));
    }

    let axis = match flags.axis.as_deref().or(file.axis.as_deref()) {
        Some(text) => Some(parse_axis(text)?),
        None => None,
    };
    let values = flags.values.clone().or_else(|| file.values.clone());

    let threshold = flags.threshold.or(file.threshold).unwrap_or(0.05);
    if !(threshold > 0.0) {
        return Err(err("threshold", "must be positive"));
    }

    let format = match flags.format.as_deref().or(file.format.as_deref()) {
        None | Some("csv") => OutputFormat::Csv,
        Some("json") => OutputFormat::Json,
        Some(other) => return Err(err("format", format!("unknown format '{other}' (csv|json)"))),
    };

    let out = flags.out.clone().or_else(|| file.out.as_ref().map(PathBuf::from));

    Ok(RunConfig {
        params,
        solver,
        sim,
        methods,
        axis,
        values,
        threshold,
        oracle_cap: file.oracle_cap.unwrap_or(DEFAULT_STATE_CAP),
        format,
        out,
    })
}

fn parse_axis(text: &str) -> Result<Axis, ConfigError> {
    match text {
        "lambda" => Ok(Axis::Lambda),
        "mu" => Ok(Axis::Mu),
        "xi" => Ok(Axis::Xi),
        "xi_h" | "xi-h" => Ok(Axis::XiH),
        "eta" => Ok(Axis::Eta),
        "eta_h" | "eta-h" => Ok(Axis::EtaH),
        "s" => Ok(Axis::S),
        "l" => Ok(Axis::L),
        other => Err(err("axis", format!("unknown axis '{other}'"))),
    }
}

/// Names of file keys that are set but unused by the given subcommand.
pub fn unused_keys(file: &FileConfig, used_groups: &[KeyGroup]) -> Vec<&'static str> {
    let mut unused = Vec::new();
    let has = |g: KeyGroup| used_groups.contains(&g);
    if !has(KeyGroup::Solver) {
        if file.delta.is_some() { unused.push("delta") }
        if file.max_iterations.is_some() { unused.push("max_iterations") }
        if file.residual_target.is_some() { unused.push("residual_target") }
    }
    if !has(KeyGroup::Sim) {
        if file.seed.is_some() { unused.push("seed") }
        if file.replications.is_some() { unused.push("replications") }
        if file.horizon.is_some() { unused.push("horizon") }
        if file.warmup.is_some() { unused.push("warmup") }
        if file.confidence.is_some() { unused.push("confidence") }
        if file.tag_sojourns.is_some() { unused.push("tag_sojourns") }
    }
    if !has(KeyGroup::Sweep) {
        if file.axis.is_some() { unused.push("axis") }
        if file.values.is_some() { unused.push("values") }
    }
    if !has(KeyGroup::Compare) {
        if file.methods.is_some() { unused.push("methods") }
        if file.threshold.is_some() { unused.push("threshold") }
    }
    unused
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KeyGroup {
    Solver,
    Sim,
    Sweep,
    Compare,
}
