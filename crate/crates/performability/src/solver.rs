//! Iterative stationary solver: Gauss-Seidel balance sweeps over both planes.
//!
//! Each sweep rewrites every state's probability as (probability inflow) /
//! (total outflow rate), visiting plane 1 first with `i` and `j` ascending,
//! then plane 0, and reading already-updated neighbours in place. The exact
//! stationary distribution is a fixed point of sweep-plus-normalize, and for
//! this irreducible finite chain the iteration contracts towards it from any
//! positive start. Convergence is declared on the paper's criterion: the
//! change in mean queue length between iterations falls below `delta`, with
//! an optional additional bound on the worst balance residual.
//!
//! Inflow arcs are obtained by inverting the canonical outgoing-transition
//! rules once, stored as a compact CSR adjacency; a whole sweep is then one
//! linear pass over that array. A solve is strictly single-threaded and
//! deterministic: same inputs, bit-identical outputs.

use crate::decomposition::initial_field;
use crate::metrics::{metrics_from, Metrics};
use crate::params::SystemParams;
use crate::state::{FieldError, ProbabilityField, StateIndex};
use crate::transitions::visit_transitions;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Stopping rules for the balance iteration.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SolverConfig {
    /// Convergence threshold on |MQL_new - MQL_old| per iteration.
    pub delta: f64,
    /// Hard cap on sweep count.
    pub max_iterations: usize,
    /// Optional additional requirement: max balance residual at most this.
    /// Guards against stopping on an MQL plateau short of convergence.
    pub residual_target: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { delta: 1e-3, max_iterations: 1 << 18, residual_target: None }
    }
}

impl SolverConfig {
    pub fn with_delta(mut self, delta: f64) -> Self {
        self.delta = delta;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn with_residual_target(mut self, target: f64) -> Self {
        self.residual_target = Some(target);
        self
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.delta > 0.0) {
            return Err(SolverError::BadConfig("delta must be positive"));
        }
        if self.max_iterations < 1 {
            return Err(SolverError::BadConfig("max_iterations must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("invalid solver config: {0}")]
    BadConfig(&'static str),
    #[error("probability mass degenerated during iteration: {0}")]
    Degenerate(#[from] FieldError),
}

/// What happened during a solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub iterations: usize,
    /// True if the stopping rules were met before the iteration cap.
    pub converged: bool,
    pub final_mql_delta: f64,
    /// Max balance residual of the returned field.
    pub final_residual: f64,
    pub wall_time: Duration,
}

/// A converged (or best-so-far) field with its metrics and run report.
#[derive(Debug, Clone)]
pub struct Solution {
    pub field: ProbabilityField,
    pub metrics: Metrics,
    pub report: SolveReport,
}

/// Precomputed inflow adjacency and outflow rates for one parameter set.
pub struct BalanceSolver {
    params: SystemParams,
    /// CSR offsets into `src`/`rate`; inflow arcs of state `s` occupy
    /// `offsets[s]..offsets[s+1]`.
    offsets: Vec<usize>,
    src: Vec<u32>,
    rate: Vec<f64>,
    inv_outflow: Vec<f64>,
    outflow: Vec<f64>,
}

impl BalanceSolver {
    pub fn new(params: &SystemParams) -> Self {
        let n = params.state_count();
        assert!(n <= u32::MAX as usize, "state space too large for 32-bit arc indices");

        let mut indegree = vec![0usize; n];
        let mut outflow = vec![0.0f64; n];
        for state in StateIndex::all(params) {
            let from = state.flat(params);
            visit_transitions(state, params, |to, r| {
                indegree[to.flat(params)] += 1;
                outflow[from] += r;
            });
        }

        let mut offsets = vec![0usize; n + 1];
        for s in 0..n {
            offsets[s + 1] = offsets[s] + indegree[s];
        }
        let nnz = offsets[n];
        let mut src = vec![0u32; nnz];
        let mut rate = vec![0.0f64; nnz];
        let mut cursor = offsets.clone();
        for state in StateIndex::all(params) {
            let from = state.flat(params);
            visit_transitions(state, params, |to, r| {
                let slot = cursor[to.flat(params)];
                src[slot] = from as u32;
                rate[slot] = r;
                cursor[to.flat(params)] += 1;
            });
        }

        let inv_outflow = outflow.iter().map(|&o| 1.0 / o).collect();
        Self { params: params.clone(), offsets, src, rate, inv_outflow, outflow }
    }

    pub fn params(&self) -> &SystemParams {
        &self.params
    }

    /// One full in-place Gauss-Seidel pass in deterministic state order.
    pub fn sweep(&self, field: &mut ProbabilityField) {
        let data = field.as_mut_slice();
        for s in 0..data.len() {
            let mut acc = 0.0;
            for k in self.offsets[s]..self.offsets[s + 1] {
                acc += self.rate[k] * data[self.src[k] as usize];
            }
            data[s] = acc * self.inv_outflow[s];
        }
    }

    /// Max over states of |probability inflow - outflow·P(state)|.
    pub fn residual(&self, field: &ProbabilityField) -> f64 {
        let data = field.as_slice();
        let mut worst = 0.0f64;
        for s in 0..data.len() {
            let mut inflow = 0.0;
            for k in self.offsets[s]..self.offsets[s + 1] {
                inflow += self.rate[k] * data[self.src[k] as usize];
            }
            worst = worst.max((inflow - self.outflow[s] * data[s]).abs());
        }
        worst
    }

    /// Runs the iteration from the decomposition warm start.
    pub fn solve(&self, cfg: &SolverConfig) -> Result<Solution, SolverError> {
        self.solve_from(cfg, initial_field(&self.params))
    }

    /// Runs the iteration from a caller-provided start field.
    pub fn solve_from(
        &self,
        cfg: &SolverConfig,
        mut field: ProbabilityField,
    ) -> Result<Solution, SolverError> {
        cfg.validate()?;
        let started = Instant::now();
        field.normalize()?;
        let mut mql_old = mql_of(&field);
        let mut iterations = 0;
        let mut converged = false;
        let mut mql_delta = f64::INFINITY;
        while iterations < cfg.max_iterations {
            self.sweep(&mut field);
            field.normalize()?;
            iterations += 1;
            let mql_new = mql_of(&field);
            mql_delta = (mql_new - mql_old).abs();
            mql_old = mql_new;
            if mql_delta <= cfg.delta {
                // The residual test only matters once the MQL has settled,
                // so it is evaluated lazily here rather than every sweep.
                match cfg.residual_target {
                    Some(target) if self.residual(&field) > target => {}
                    _ => {
                        converged = true;
                        break;
                    }
                }
            }
        }
        let final_residual = self.residual(&field);
        let metrics = metrics_from(&field, &self.params);
        let report = SolveReport {
            iterations,
            converged,
            final_mql_delta: mql_delta,
            final_residual,
            wall_time: started.elapsed(),
        };
        Ok(Solution { field, metrics, report })
    }
}

fn mql_of(field: &ProbabilityField) -> f64 {
    let cols = field.l() + 1;
    field
        .as_slice()
        .iter()
        .enumerate()
        .map(|(idx, &p)| (idx % cols) as f64 * p)
        .sum()
}

/// Convenience: build the adjacency and solve from the warm start.
pub fn solve(p: &SystemParams, cfg: &SolverConfig) -> Result<Solution, SolverError> {
    BalanceSolver::new(p).solve(cfg)
}

/// One sweep without a prebuilt solver; costs an adjacency build per call.
pub fn sweep(field: &mut ProbabilityField, p: &SystemParams) {
    BalanceSolver::new(p).sweep(field);
}

/// Balance residual without a prebuilt solver.
pub fn residual(field: &ProbabilityField, p: &SystemParams) -> f64 {
    BalanceSolver::new(p).residual(field)
}
