//! Performability measures computed from a stationary distribution.

use crate::params::SystemParams;
use crate::state::{Plane, ProbabilityField};

/// Mean queue length, throughput, mean response time, availability and
/// blocking probability of a (normalized) probability field.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Metrics {
    /// Expected tasks in the system, `Σ j·P[n][i][j]` over both planes.
    pub mql: f64,
    /// Long-run completion rate, `Σ min(i,j)·μ·P[1][i][j]` (plane 1 only:
    /// no service happens while the head is down).
    pub thrp: f64,
    /// Mean response time `mql / thrp`; `None` when the throughput is zero.
    pub mrt: Option<f64>,
    /// Total plane-1 mass.
    pub availability: f64,
    /// Total mass of states with `j = l`, where arrivals are lost.
    pub p_block: f64,
}

/// Evaluates all measures of a normalized field.
pub fn metrics_from(field: &ProbabilityField, p: &SystemParams) -> Metrics {
    let mut mql = 0.0;
    let mut thrp = 0.0;
    let mut p_block = 0.0;
    for (state, prob) in field.iter() {
        mql += state.j() as f64 * prob;
        if state.plane() == Plane::HeadUp {
            thrp += state.i().min(state.j()) as f64 * p.mu * prob;
        }
        if state.j() == p.l {
            p_block += prob;
        }
    }
    let mrt = if thrp > 0.0 { Some(mql / thrp) } else { None };
    Metrics { mql, thrp, mrt, availability: field.plane_mass(Plane::HeadUp), p_block }
}
