//! Canonical transition rules of the two-plane chain.
//!
//! Every other component (iterative solver, exact oracle, simulator checks)
//! derives its rates from [`transitions_from`], so the rules live in exactly
//! one place.
//!
//! Plane 1, state `(i, j, 1)` with `1 ≤ i ≤ s`:
//!   - arrival `λ` to `(i, j+1, 1)` while `j < l`;
//!   - pooled service `min(i, j)·μ` to `(i, j-1, 1)` while `j > 0`;
//!   - within-plane failure `f(i)·ξ` to `(i-1, j, 1)` while `i > 1`, where
//!     `f` is set by [`Semantics`](crate::params::Semantics);
//!   - head failure `ξh` to `(i-1, j, 0)`; tasks stay in the queue;
//!   - computing repair `η` to `(i+1, j, 1)` while `i < s`.
//!
//! Plane 0, state `(i, j, 0)` with `0 ≤ i ≤ s-1`:
//!   - arrival `λ` to `(i, j+1, 0)` while `j < l`;
//!   - computing failure `i·ξ` to `(i-1, j, 0)` while `i > 0`;
//!   - head repair `ηh` to `(i+1, j, 1)` (repair priority to the head);
//!   - no service and no computing repairs.
//!
//! Arcs whose rate is zero (only possible with `ξ = 0`) are omitted.

use crate::params::SystemParams;
use crate::state::{Plane, StateIndex, Transition};

/// Calls `emit(to, rate)` for every outgoing arc of `state`. Hot-path form
/// used by the solver and oracle to avoid building vectors per state.
#[inline]
pub(crate) fn visit_transitions<F: FnMut(StateIndex, f64)>(
    state: StateIndex,
    p: &SystemParams,
    mut emit: F,
) {
    let (i, j) = (state.i(), state.j());
    match state.plane() {
        Plane::HeadUp => {
            if j < p.l {
                emit(StateIndex::new_unchecked(Plane::HeadUp, i, j + 1), p.lambda);
            }
            let busy = i.min(j);
            if busy > 0 {
                emit(StateIndex::new_unchecked(Plane::HeadUp, i, j - 1), busy as f64 * p.mu);
            }
            if i > 1 {
                let rate = p.semantics.failing_nodes(i) as f64 * p.xi;
                if rate > 0.0 {
                    emit(StateIndex::new_unchecked(Plane::HeadUp, i - 1, j), rate);
                }
            }
            emit(StateIndex::new_unchecked(Plane::HeadDown, i - 1, j), p.xi_h);
            if i < p.s {
                emit(StateIndex::new_unchecked(Plane::HeadUp, i + 1, j), p.eta);
            }
        }
        Plane::HeadDown => {
            if j < p.l {
                emit(StateIndex::new_unchecked(Plane::HeadDown, i, j + 1), p.lambda);
            }
            if i > 0 {
                let rate = i as f64 * p.xi;
                if rate > 0.0 {
                    emit(StateIndex::new_unchecked(Plane::HeadDown, i - 1, j), rate);
                }
            }
            emit(StateIndex::new_unchecked(Plane::HeadUp, i + 1, j), p.eta_h);
        }
    }
}

/// All outgoing arcs of `state` under the canonical rules.
pub fn transitions_from(state: StateIndex, p: &SystemParams) -> Vec<Transition> {
    let mut out = Vec::with_capacity(5);
    visit_transitions(state, p, |to, rate| out.push(Transition { from: state, to, rate }));
    out
}

/// Sum of all outgoing rates of `state`; the balance-equation denominator.
pub fn total_outflow(state: StateIndex, p: &SystemParams) -> f64 {
    let mut sum = 0.0;
    visit_transitions(state, p, |_, rate| sum += rate);
    sum
}

/// Every arc of the chain, in sweep order of the source state.
pub fn all_transitions(p: &SystemParams) -> impl Iterator<Item = Transition> + '_ {
    StateIndex::all(p).flat_map(move |s| transitions_from(s, p))
}
