//! Closed-form approximate decomposition used to warm-start the solver.
//!
//! The head node alternates between operative and broken independently of
//! everything else, which fixes the two plane masses exactly. Within the
//! operative plane, the operative-node count follows a failure/repair
//! birth–death chain, and each count gets a truncated multi-server queue
//! profile over the task axis. The product of the three pieces is not the
//! stationary distribution (it ignores cross-plane coupling), but it is
//! close enough to cut the solver's sweep count substantially.
//!
//! Weights are built by multiplicative recursion in log space, so no
//! factorial or power is ever evaluated directly and columns stay finite
//! for thousands of nodes and queue slots.

use crate::params::{Semantics, SystemParams};
use crate::state::{Plane, ProbabilityField, StateIndex};

/// The three factors of the warm start.
#[derive(Debug, Clone)]
pub struct Decomposition {
    /// Plane-0 mass `ξh/(ηh+ξh)`.
    pub m0: f64,
    /// Plane-1 mass `ηh/(ηh+ξh)`.
    pub m1: f64,
    /// Plane-1 column masses over `i = 1..=s`; sums to `m1`.
    pub marginal: Vec<f64>,
    /// Per-column conditional task distributions; each row sums to 1.
    pub conditionals: Vec<Vec<f64>>,
    /// Traffic intensity λ/μ.
    pub rho: f64,
}

/// Exact plane masses `(m0, m1)`: the head chain is a two-state flip
/// independent of the rest, so `m1 = ηh/(ηh+ξh)`.
pub fn plane_masses(p: &SystemParams) -> (f64, f64) {
    let denom = p.eta_h + p.xi_h;
    (p.xi_h / denom, p.eta_h / denom)
}

/// Plane-1 operative-count marginal from failure/repair detailed balance,
/// normalized to total `m1`. Index `k` holds the mass of `i = k + 1`.
///
/// With `ξ = 0` the chain drifts to full capacity and all mass sits at
/// `i = s`.
pub fn operative_marginal(p: &SystemParams) -> Vec<f64> {
    let (_, m1) = plane_masses(p);
    let s = p.s;
    if p.xi == 0.0 {
        let mut w = vec![0.0; s];
        w[s - 1] = m1;
        return w;
    }
    // Detailed balance between i and i+1: η·P(i) = f(i+1)·ξ·P(i+1).
    let mut log_w = vec![0.0_f64; s];
    for k in 1..s {
        let downward = match p.semantics {
            Semantics::PaperLiteral => (k + 1) as f64,
            Semantics::PerComputingNode => k as f64,
        };
        log_w[k] = log_w[k - 1] + (p.eta / (downward * p.xi)).ln();
    }
    normalize_log_weights(&log_w, m1)
}

/// Conditional task distribution for a column with `i` pooled servers:
/// `weight(j+1) = weight(j)·ρ/min(j+1, i)`, normalized over `j = 0..=l` by
/// direct summation. Direct summation keeps `ρ = i` unremarkable, unlike
/// the closed-form normalizer with its pole there.
pub fn column_conditional(i: usize, p: &SystemParams) -> Vec<f64> {
    assert!((1..=p.s).contains(&i), "column {i} outside 1..={}", p.s);
    let rho = p.rho();
    let mut log_w = vec![0.0_f64; p.l + 1];
    for j in 0..p.l {
        log_w[j + 1] = log_w[j] + rho.ln() - ((j + 1).min(i) as f64).ln();
    }
    normalize_log_weights(&log_w, 1.0)
}

fn normalize_log_weights(log_w: &[f64], target: f64) -> Vec<f64> {
    let max = log_w.iter().fold(f64::NEG_INFINITY, |m, &v| m.max(v));
    let mut w: Vec<f64> = log_w.iter().map(|&v| (v - max).exp()).collect();
    let sum: f64 = w.iter().sum();
    let scale = target / sum;
    for v in &mut w {
        *v *= scale;
    }
    w
}

/// Assembles all decomposition factors.
pub fn decompose(p: &SystemParams) -> Decomposition {
    let (m0, m1) = plane_masses(p);
    let marginal = operative_marginal(p);
    let conditionals = (1..=p.s)
        .map(|i| {
            if marginal[i - 1] > 0.0 {
                column_conditional(i, p)
            } else {
                vec![0.0; p.l + 1]
            }
        })
        .collect();
    Decomposition { m0, m1, marginal, conditionals, rho: p.rho() }
}

/// Warm-start field: plane 1 is the marginal/conditional product, plane 0
/// (which has no closed form — nothing is served there) is spread uniformly.
pub fn initial_field(p: &SystemParams) -> ProbabilityField {
    let d = decompose(p);
    let mut field = ProbabilityField::zeros(p);
    for i in 1..=p.s {
        let col_mass = d.marginal[i - 1];
        if col_mass == 0.0 {
            continue;
        }
        let cond = &d.conditionals[i - 1];
        for j in 0..=p.l {
            field.set(StateIndex::new_unchecked(Plane::HeadUp, i, j), col_mass * cond[j]);
        }
    }
    let plane0_each = d.m0 / (p.s * (p.l + 1)) as f64;
    for i in 0..p.s {
        for j in 0..=p.l {
            field.set(StateIndex::new_unchecked(Plane::HeadDown, i, j), plane0_each);
        }
    }
    field
}
