//! Performability evaluation of head-node/computing-node clusters.
//!
//! A cluster with one head node and `s - 1` identical computing nodes behind
//! a bounded queue is modelled as a finite two-plane Markov chain: plane 1
//! while the head is operative, plane 0 while it is broken and nothing is
//! served. The crate provides four ways to work with that chain:
//!
//! - [`solver`]: large-scale stationary solves by Gauss-Seidel balance
//!   sweeps, warm-started from the closed-form [`decomposition`];
//! - [`oracle`]: exact stationary distributions for small instances by GTH
//!   elimination, the ground truth the solver is validated against;
//! - [`sim`]: a discrete-event simulator of the physical cluster with
//!   replication-based confidence intervals;
//! - [`experiment`]: parameter sweeps, method comparisons and the named
//!   presets behind the `perfeval repro` command.
//!
//! ```
//! use performability::params::SystemParams;
//! use performability::solver::{solve, SolverConfig};
//!
//! let params = SystemParams::new(3, 6, 1.0, 0.5, 0.01, 0.01, 0.5, 0.5)
//!     .validated()
//!     .unwrap();
//! let solution = solve(&params, &SolverConfig::default()).unwrap();
//! assert!(solution.report.converged);
//! assert!(solution.metrics.mql > 0.0);
//! ```

pub mod decomposition;
pub mod experiment;
pub mod metrics;
pub mod oracle;
pub mod params;
pub mod sim;
pub mod solver;
pub mod state;
pub mod transitions;

pub use metrics::{metrics_from, Metrics};
pub use params::{ParamError, Semantics, SystemParams};
pub use solver::{solve, SolveReport, Solution, SolverConfig};
pub use state::{Plane, ProbabilityField, StateIndex, Transition};
pub use transitions::{total_outflow, transitions_from};
