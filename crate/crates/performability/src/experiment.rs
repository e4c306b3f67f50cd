//! Parameter sweeps, method comparison and the named study presets.
//!
//! A sweep fixes a base parameter set, varies one axis over an ordered value
//! list, and evaluates each point with any subset of the three methods
//! (iterative solver, exact oracle, discrete-event simulation). Rows come
//! back in axis order, one per `(value, method)` pair, and are deterministic
//! given the solver and simulation configs. Per-point failures (a
//! non-converged solve, an instance over the oracle cap) are recorded in the
//! row instead of aborting the sweep.

use crate::metrics::Metrics;
use crate::oracle;
use crate::params::SystemParams;
use crate::sim::{simulate, SimConfig, SimResult};
use crate::solver::{BalanceSolver, SolverConfig};
use serde::{Deserialize, Serialize};
use std::time::{Duration, Instant};

/// Evaluation methods a sweep can run at every axis point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Balance-sweep solver, any scale.
    Iterative,
    /// GTH oracle, small instances only.
    Exact,
    /// Discrete-event simulation with confidence intervals.
    Des,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Iterative => "iterative",
            Method::Exact => "exact",
            Method::Des => "des",
        }
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "iterative" => Ok(Method::Iterative),
            "exact" => Ok(Method::Exact),
            "des" => Ok(Method::Des),
            other => Err(format!("unknown method '{other}' (iterative|exact|des)")),
        }
    }
}

/// The model parameter a sweep varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axis {
    Lambda,
    Mu,
    Xi,
    XiH,
    Eta,
    EtaH,
    S,
    L,
}

impl Axis {
    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Lambda => "lambda",
            Axis::Mu => "mu",
            Axis::Xi => "xi",
            Axis::XiH => "xi_h",
            Axis::Eta => "eta",
            Axis::EtaH => "eta_h",
            Axis::S => "s",
            Axis::L => "l",
        }
    }

    /// Applies one axis value to a parameter set. Size axes round to the
    /// nearest integer.
    pub fn apply(self, p: &mut SystemParams, value: f64) {
        match self {
            Axis::Lambda => p.lambda = value,
            Axis::Mu => {
                p.mu = value;
                p.mu_h = value;
            }
            Axis::Xi => p.xi = value,
            Axis::XiH => p.xi_h = value,
            Axis::Eta => p.eta = value,
            Axis::EtaH => p.eta_h = value,
            Axis::S => p.s = value.round() as usize,
            Axis::L => p.l = value.round() as usize,
        }
    }
}

/// One sweep: base parameters, an axis with its values, and the methods to
/// run at every point.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepSpec {
    pub base: SystemParams,
    pub axis: Axis,
    pub values: Vec<f64>,
    pub methods: Vec<Method>,
    pub solver: SolverConfig,
    pub sim: SimConfig,
    /// Cap forwarded to the exact oracle.
    pub oracle_cap: usize,
}

impl SweepSpec {
    pub fn new(base: SystemParams, axis: Axis, values: Vec<f64>, methods: Vec<Method>) -> Self {
        Self {
            base,
            axis,
            values,
            methods,
            solver: SolverConfig::default(),
            sim: SimConfig::default(),
            oracle_cap: oracle::DEFAULT_STATE_CAP,
        }
    }
}

/// Confidence half-widths attached to DES rows.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CiHalfWidths {
    pub mql: f64,
    pub thrp: f64,
    pub mrt: Option<f64>,
}

/// One `(axis value, method)` evaluation.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub method: Method,
    /// Effective parameters at this point.
    pub params: SystemParams,
    pub metrics: Option<Metrics>,
    /// Iterative rows only.
    pub iterations: Option<usize>,
    pub converged: Option<bool>,
    /// Balance residual (iterative) or generator residual (exact).
    pub residual: Option<f64>,
    /// DES rows only.
    pub ci: Option<CiHalfWidths>,
    /// Why metrics are missing, when they are.
    pub error: Option<String>,
    pub wall: Duration,
}

/// Evaluates one parameter point with one method.
pub fn evaluate_point(
    params: &SystemParams,
    method: Method,
    solver_cfg: &SolverConfig,
    sim_cfg: &SimConfig,
    oracle_cap: usize,
) -> SweepRow {
    let started = Instant::now();
    let mut row = SweepRow {
        method,
        params: params.clone(),
        metrics: None,
        iterations: None,
        converged: None,
        residual: None,
        ci: None,
        error: None,
        wall: Duration::ZERO,
    };
    if let Err(e) = params.validate() {
        row.error = Some(e.to_string());
        row.wall = started.elapsed();
        return row;
    }
    match method {
        Method::Iterative => match BalanceSolver::new(params).solve(solver_cfg) {
            Ok(sol) => {
                row.metrics = Some(sol.metrics);
                row.iterations = Some(sol.report.iterations);
                row.converged = Some(sol.report.converged);
                row.residual = Some(sol.report.final_residual);
                if !sol.report.converged {
                    row.error = Some(format!(
                        "not converged after {} iterations (mql delta {:.3e})",
                        sol.report.iterations, sol.report.final_mql_delta
                    ));
                }
            }
            Err(e) => row.error = Some(e.to_string()),
        },
        Method::Exact => match oracle::build_generator_with_cap(params, oracle_cap) {
            Ok(generator) => match oracle::stationary(&generator) {
                Ok(field) => {
                    row.residual = Some(generator.residual_inf_norm(&field));
                    row.metrics = Some(crate::metrics::metrics_from(&field, params));
                }
                Err(e) => row.error = Some(e.to_string()),
            },
            Err(e) => row.error = Some(e.to_string()),
        },
        Method::Des => match simulate(params, sim_cfg) {
            Ok(result) => {
                row.ci = Some(CiHalfWidths {
                    mql: result.mql.half_width,
                    thrp: result.thrp.half_width,
                    mrt: result.mrt.map(|e| e.half_width),
                });
                row.metrics = Some(sim_metrics(&result));
            }
            Err(e) => row.error = Some(e.to_string()),
        },
    }
    row.wall = started.elapsed();
    row
}

fn sim_metrics(r: &SimResult) -> Metrics {
    Metrics {
        mql: r.mql.mean,
        thrp: r.thrp.mean,
        mrt: r.mrt.map(|e| e.mean),
        availability: r.availability.mean,
        p_block: r.p_block.mean,
    }
}

/// Runs the sweep; rows come back value-major in axis order, then in the
/// spec's method order.
pub fn run_sweep(spec: &SweepSpec) -> Vec<SweepRow> {
    let mut rows = Vec::with_capacity(spec.values.len() * spec.methods.len());
    for &value in &spec.values {
        let mut params = spec.base.clone();
        spec.axis.apply(&mut params, value);
        for &method in &spec.methods {
            rows.push(evaluate_point(&params, method, &spec.solver, &spec.sim, spec.oracle_cap));
        }
    }
    rows
}

/// Relative discrepancy of one metric between two methods.
#[derive(Debug, Clone, PartialEq)]
pub struct Discrepancy {
    pub metric: &'static str,
    pub a: Method,
    /// Reference method the relative error is taken against.
    pub b: Method,
    pub a_value: f64,
    pub b_value: f64,
    /// |a - b| / |b|.
    pub rel: f64,
    pub pass: bool,
}

/// Method-pair discrepancy report for one instance.
#[derive(Debug, Clone)]
pub struct CompareReport {
    pub rows: Vec<SweepRow>,
    pub discrepancies: Vec<Discrepancy>,
    /// Relative threshold every pair must meet.
    pub threshold: f64,
    pub all_pass: bool,
}

/// Evaluates one instance with every requested method and reports pairwise
/// relative discrepancies for MQL, THRP and MRT against `threshold`.
pub fn compare(
    params: &SystemParams,
    methods: &[Method],
    solver_cfg: &SolverConfig,
    sim_cfg: &SimConfig,
    oracle_cap: usize,
    threshold: f64,
) -> CompareReport {
    let rows: Vec<SweepRow> = methods
        .iter()
        .map(|&m| evaluate_point(params, m, solver_cfg, sim_cfg, oracle_cap))
        .collect();
    let mut discrepancies = Vec::new();
    for (ia, &a) in methods.iter().enumerate() {
        for &b in &methods[ia + 1..] {
            let (Some(ma), Some(mb)) = (
                rows.iter().find(|r| r.method == a).and_then(|r| r.metrics),
                rows.iter().find(|r| r.method == b).and_then(|r| r.metrics),
            ) else {
                continue;
            };
            let pairs: [(&'static str, f64, f64); 3] = [
                ("mql", ma.mql, mb.mql),
                ("thrp", ma.thrp, mb.thrp),
                ("mrt", ma.mrt.unwrap_or(f64::NAN), mb.mrt.unwrap_or(f64::NAN)),
            ];
            for (metric, va, vb) in pairs {
                if va.is_nan() || vb.is_nan() {
                    continue;
                }
                let rel = if va == vb { 0.0 } else { (va - vb).abs() / vb.abs() };
                discrepancies.push(Discrepancy {
                    metric,
                    a,
                    b,
                    a_value: va,
                    b_value: vb,
                    rel,
                    pass: rel <= threshold,
                });
            }
        }
    }
    let all_pass = !discrepancies.is_empty() && discrepancies.iter().all(|d| d.pass);
    CompareReport { rows, discrepancies, threshold, all_pass }
}

/// Named studies reproducing the published figures and tables as data.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// MQL vs λ at S=500, L=1000 for ξ in {0.001, 0.002, 0.004}.
    Fig8,
    /// THRP vs λ, same sweep as Fig8.
    Fig9,
    /// MRT vs λ, same sweep as Fig8.
    Fig10,
    /// THRP vs λ for head failure rates ξh in {0.001, 0.005, 0.01}.
    Fig11,
    /// MQL vs λ for head repair rates ηh in {0.5, 0.05, 0.005}.
    Fig12,
    /// MQL vs λ for node counts S in {32, 64, 128, 256, 372}.
    Fig13,
    /// MQL vs λ for queue capacities L in {600, 800, 1000, 1200}.
    Fig14,
    /// Solver/oracle/DES comparison at S=50, L=100, λ in {5, 10, 12}.
    Tables,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::Fig8,
        Preset::Fig9,
        Preset::Fig10,
        Preset::Fig11,
        Preset::Fig12,
        Preset::Fig13,
        Preset::Fig14,
        Preset::Tables,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Preset::Fig8 => "fig8",
            Preset::Fig9 => "fig9",
            Preset::Fig10 => "fig10",
            Preset::Fig11 => "fig11",
            Preset::Fig12 => "fig12",
            Preset::Fig13 => "fig13",
            Preset::Fig14 => "fig14",
            Preset::Tables => "tables",
        }
    }

    /// Base parameter set shared by the published studies: S=500, L=1000,
    /// μ=0.25, ξ=ξh=0.001, η=ηh=0.5, rates taken verbatim as dimensionless.
    pub fn base_params() -> SystemParams {
        SystemParams::new(500, 1000, 10.0, 0.25, 0.001, 0.001, 0.5, 0.5)
    }

    fn lambda_axis() -> Vec<f64> {
        (1..=10).map(|k| 10.0 * k as f64).collect()
    }

    /// The sweeps behind this preset. DES is expensive at published scale,
    /// so it only joins when `include_des` is set; the `tables` preset runs
    /// it always (that comparison is its whole point).
    pub fn sweeps(self, include_des: bool, solver: SolverConfig, sim: SimConfig) -> Vec<SweepSpec> {
        let mut methods = vec![Method::Iterative];
        if include_des {
            methods.push(Method::Des);
        }
        let with_cfg = |mut spec: SweepSpec| {
            spec.solver = solver.clone();
            spec.sim = sim.clone();
            spec
        };
        match self {
            Preset::Fig8 | Preset::Fig9 | Preset::Fig10 => [0.001, 0.002, 0.004]
                .into_iter()
                .map(|xi| {
                    let mut base = Self::base_params();
                    base.xi = xi;
                    with_cfg(SweepSpec::new(base, Axis::Lambda, Self::lambda_axis(), methods.clone()))
                })
                .collect(),
            Preset::Fig11 => [0.001, 0.005, 0.01]
                .into_iter()
                .map(|xi_h| {
                    let mut base = Self::base_params();
                    base.xi_h = xi_h;
                    with_cfg(SweepSpec::new(base, Axis::Lambda, Self::lambda_axis(), methods.clone()))
                })
                .collect(),
            Preset::Fig12 => [0.5, 0.05, 0.005]
                .into_iter()
                .map(|eta_h| {
                    let mut base = Self::base_params();
                    base.eta_h = eta_h;
                    with_cfg(SweepSpec::new(base, Axis::Lambda, Self::lambda_axis(), methods.clone()))
                })
                .collect(),
            Preset::Fig13 => {
                let values = [32.0, 64.0, 128.0, 256.0, 372.0];
                [10.0, 40.0, 70.0, 100.0]
                    .into_iter()
                    .map(|lambda| {
                        let mut base = Self::base_params();
                        base.lambda = lambda;
                        with_cfg(SweepSpec::new(base, Axis::S, values.to_vec(), methods.clone()))
                    })
                    .collect()
            }
            Preset::Fig14 => {
                let values = [600.0, 800.0, 1000.0, 1200.0];
                [10.0, 40.0, 70.0, 100.0]
                    .into_iter()
                    .map(|lambda| {
                        let mut base = Self::base_params();
                        base.lambda = lambda;
                        with_cfg(SweepSpec::new(base, Axis::L, values.to_vec(), methods.clone()))
                    })
                    .collect()
            }
            Preset::Tables => {
                let base = SystemParams::new(50, 100, 5.0, 0.25, 0.001, 0.001, 0.5, 0.5);
                let mut spec = SweepSpec::new(
                    base,
                    Axis::Lambda,
                    vec![5.0, 10.0, 12.0],
                    vec![Method::Iterative, Method::Exact, Method::Des],
                );
                spec.solver = solver;
                spec.sim = sim;
                vec![spec]
            }
        }
    }

    /// Runs every sweep of the preset and concatenates the rows.
    pub fn run(self, include_des: bool, solver: SolverConfig, sim: SimConfig) -> Vec<SweepRow> {
        self.sweeps(include_des, solver, sim).iter().flat_map(run_sweep).collect()
    }
}

impl std::str::FromStr for Preset {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| format!("unknown preset '{s}' (fig8..fig14 or tables)"))
    }
}
