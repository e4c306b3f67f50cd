//! Exact stationary distributions for small instances.
//!
//! The full generator is assembled from the canonical transition rules and
//! solved by Grassmann–Taksar–Heyman state elimination. GTH never subtracts
//! like-signed quantities, so it stays accurate on stiff rate ratios (say
//! λ = 70 against ξ = 0.001) where naive elimination loses digits.
//!
//! States are ordered level-major (task count `j` outermost, the 2·s phases
//! of a level contiguous). Transitions only connect adjacent levels, so the
//! generator is banded with halfwidth below `4·s`, elimination fill stays
//! inside the band, and the solve costs `O(dim · s²)` instead of `O(dim³)`.

use crate::metrics::{metrics_from, Metrics};
use crate::params::SystemParams;
use crate::state::{Plane, ProbabilityField, StateIndex};
use crate::transitions::visit_transitions;
use thiserror::Error;

/// Default bound on `2·s·(l+1)` above which exact solves are refused.
pub const DEFAULT_STATE_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("instance too large for exact solve: {states} states exceeds cap {cap}")]
    CapExceeded { states: usize, cap: usize },
    #[error(
        "chain is reducible: the subset reachable from state (n={n}, i={i}, j={j}) \
         is absorbing and does not cover the state space"
    )]
    Reducible { n: usize, i: usize, j: usize },
}

/// Sparse generator matrix of the chain in level-major order.
///
/// Rows hold the off-diagonal rates; the diagonal is the negated row sum.
#[derive(Debug, Clone)]
pub struct SparseGenerator {
    s: usize,
    l: usize,
    dim: usize,
    rows: Vec<Vec<(usize, f64)>>,
    diag: Vec<f64>,
}

impl SparseGenerator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Off-diagonal `(column, rate)` entries of one row.
    pub fn row(&self, r: usize) -> &[(usize, f64)] {
        &self.rows[r]
    }

    /// Diagonal entry (negative total outflow) of one row.
    pub fn diagonal(&self, r: usize) -> f64 {
        self.diag[r]
    }

    fn state_of(&self, idx: usize) -> StateIndex {
        state_of_level_major(idx, self.s)
    }

    /// `‖π·G‖∞` for a probability field; zero at stationarity.
    pub fn residual_inf_norm(&self, field: &ProbabilityField) -> f64 {
        let mut acc = vec![0.0_f64; self.dim];
        for r in 0..self.dim {
            let pr = field.get(self.state_of(r));
            acc[r] += pr * self.diag[r];
            for &(c, rate) in &self.rows[r] {
                acc[c] += pr * rate;
            }
        }
        acc.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

fn level_major_index(state: StateIndex, s: usize) -> usize {
    let phase = match state.plane() {
        Plane::HeadUp => state.i() - 1,
        Plane::HeadDown => s + state.i(),
    };
    state.j() * 2 * s + phase
}

fn state_of_level_major(idx: usize, s: usize) -> StateIndex {
    let j = idx / (2 * s);
    let phase = idx % (2 * s);
    if phase < s {
        StateIndex::new_unchecked(Plane::HeadUp, phase + 1, j)
    } else {
        StateIndex::new_unchecked(Plane::HeadDown, phase - s, j)
    }
}

/// Assembles the generator, refusing instances above the default cap.
pub fn build_generator(p: &SystemParams) -> Result<SparseGenerator, OracleError> {
    build_generator_with_cap(p, DEFAULT_STATE_CAP)
}

pub fn build_generator_with_cap(
    p: &SystemParams,
    cap: usize,
) -> Result<SparseGenerator, OracleError> {
    let dim = p.state_count();
    if dim > cap {
        return Err(OracleError::CapExceeded { states: dim, cap });
    }
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::with_capacity(5); dim];
    let mut diag = vec![0.0; dim];
    for state in StateIndex::all(p) {
        let r = level_major_index(state, p.s);
        visit_transitions(state, p, |to, rate| {
            rows[r].push((level_major_index(to, p.s), rate));
            diag[r] -= rate;
        });
    }
    Ok(SparseGenerator { s: p.s, l: p.l, dim, rows, diag })
}

/// Banded working storage for the elimination. Entry `(r, c)` lives at
/// `band[r·width + (c - r + half)]`; anything outside the band is zero.
struct Banded {
    half: usize,
    width: usize,
    data: Vec<f64>,
}

impl Banded {
    fn new(dim: usize, half: usize) -> Self {
        let width = 2 * half + 1;
        Self { half, width, data: vec![0.0; dim * width] }
    }

    #[inline]
    fn get(&self, r: usize, c: usize) -> f64 {
        self.data[r * self.width + c + self.half - r]
    }

    #[inline]
    fn add(&mut self, r: usize, c: usize, v: f64) {
        self.data[r * self.width + c + self.half - r] += v;
    }
}

/// Stationary distribution of the generator by GTH elimination.
///
/// Errors if the chain is reducible (a zero pivot while eliminating).
pub fn stationary(g: &SparseGenerator) -> Result<ProbabilityField, OracleError> {
    let dim = g.dim;
    // Band halfwidth observed in the data; elimination fill never leaves it.
    let mut half = 1usize;
    for (r, row) in g.rows.iter().enumerate() {
        for &(c, _) in row {
            half = half.max(r.abs_diff(c));
        }
    }
    half = half.min(dim.saturating_sub(1));

    let mut band = Banded::new(dim, half);
    for (r, row) in g.rows.iter().enumerate() {
        for &(c, rate) in row {
            band.add(r, c, rate);
        }
    }

    // Eliminate states from the top down, redistributing each state's
    // probability flux onto its lower-indexed neighbours.
    let mut pivot = vec![0.0; dim];
    for n in (1..dim).rev() {
        let lo = n.saturating_sub(half);
        let mut s_n = 0.0;
        for c in lo..n {
            s_n += band.get(n, c);
        }
        if !(s_n > 0.0) {
            let st = g.state_of(n);
            return Err(OracleError::Reducible { n: st.plane().n(), i: st.i(), j: st.j() });
        }
        pivot[n] = s_n;
        let inv = 1.0 / s_n;
        for r in lo..n {
            let into_n = band.get(r, n);
            if into_n == 0.0 {
                continue;
            }
            let w = into_n * inv;
            for c in lo..n {
                if c == r {
                    continue;
                }
                let out_c = band.get(n, c);
                if out_c != 0.0 {
                    band.add(r, c, w * out_c);
                }
            }
        }
    }

    // Back substitution: unnormalized mass relative to state 0.
    let mut pi = vec![0.0; dim];
    pi[0] = 1.0;
    let mut total = 1.0;
    for n in 1..dim {
        let lo = n.saturating_sub(half);
        let mut inflow = 0.0;
        for r in lo..n {
            let rate = band.get(r, n);
            if rate != 0.0 {
                inflow += pi[r] * rate;
            }
        }
        pi[n] = inflow / pivot[n];
        total += pi[n];
    }

    let params_like = field_dims(g);
    let mut field = ProbabilityField::zeros(&params_like);
    let inv_total = 1.0 / total;
    for (idx, &mass) in pi.iter().enumerate() {
        field.set(g.state_of(idx), mass * inv_total);
    }
    Ok(field)
}

// ProbabilityField sizing needs only s and l; rates are irrelevant here.
fn field_dims(g: &SparseGenerator) -> SystemParams {
    SystemParams::new(g.s, g.l, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0)
}

/// Builds and solves in one step, returning the field and its metrics.
pub fn exact_stationary(p: &SystemParams) -> Result<(ProbabilityField, Metrics), OracleError> {
    exact_stationary_with_cap(p, DEFAULT_STATE_CAP)
}

pub fn exact_stationary_with_cap(
    p: &SystemParams,
    cap: usize,
) -> Result<(ProbabilityField, Metrics), OracleError> {
    let g = build_generator_with_cap(p, cap)?;
    let field = stationary(&g)?;
    let metrics = metrics_from(&field, p);
    Ok((field, metrics))
}
