//! State space layout and the dense probability array over it.
//!
//! The chain lives on two planes distinguished by the head node's status.
//! In plane 1 (head operative) the operative serving count `i` runs over
//! `1..=s`; in plane 0 (head broken) it runs over `0..=s-1` computing nodes.
//! The task count `j` runs over `0..=l` in both planes, giving `2·s·(l+1)`
//! states in total.

use crate::params::SystemParams;
use thiserror::Error;

/// Head-node status selecting one of the two planes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Plane {
    /// Plane 0: head broken, no service anywhere, no computing repairs.
    HeadDown,
    /// Plane 1: head operative, pooled service and computing repairs run.
    HeadUp,
}

impl Plane {
    /// The paper-style plane number `n`: 0 for head down, 1 for head up.
    pub fn n(self) -> usize {
        match self {
            Plane::HeadDown => 0,
            Plane::HeadUp => 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StateError {
    #[error("operative count {i} out of range {lo}..={hi} for plane {n}")]
    OperativeOutOfRange { i: usize, lo: usize, hi: usize, n: usize },
    #[error("task count {j} exceeds capacity {l}")]
    TaskOutOfRange { j: usize, l: usize },
}

/// A `(plane, operative count, task count)` coordinate.
///
/// Constructed through [`StateIndex::new`], which enforces the
/// plane-dependent ranges, so every value of this type is a valid state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StateIndex {
    plane: Plane,
    i: usize,
    j: usize,
}

impl StateIndex {
    /// Builds a state, rejecting out-of-range coordinates.
    pub fn new(plane: Plane, i: usize, j: usize, p: &SystemParams) -> Result<Self, StateError> {
        let (lo, hi) = match plane {
            Plane::HeadUp => (1, p.s),
            Plane::HeadDown => (0, p.s - 1),
        };
        if i < lo || i > hi {
            return Err(StateError::OperativeOutOfRange { i, lo, hi, n: plane.n() });
        }
        if j > p.l {
            return Err(StateError::TaskOutOfRange { j, l: p.l });
        }
        Ok(Self { plane, i, j })
    }

    /// Range-checked only in debug builds; for internal enumeration.
    pub(crate) fn new_unchecked(plane: Plane, i: usize, j: usize) -> Self {
        Self { plane, i, j }
    }

    pub fn plane(&self) -> Plane {
        self.plane
    }

    /// Operative serving count (plane 1 includes the head).
    pub fn i(&self) -> usize {
        self.i
    }

    /// Tasks in the system.
    pub fn j(&self) -> usize {
        self.j
    }

    /// Position in the dense sweep-order layout: the plane-1 block first
    /// (`i` ascending, `j` ascending), then the plane-0 block.
    pub fn flat(&self, p: &SystemParams) -> usize {
        let cols = p.l + 1;
        match self.plane {
            Plane::HeadUp => (self.i - 1) * cols + self.j,
            Plane::HeadDown => p.s * cols + self.i * cols + self.j,
        }
    }

    /// Inverse of [`flat`](Self::flat).
    pub fn from_flat(idx: usize, p: &SystemParams) -> Self {
        let cols = p.l + 1;
        let plane1_len = p.s * cols;
        if idx < plane1_len {
            Self { plane: Plane::HeadUp, i: idx / cols + 1, j: idx % cols }
        } else {
            let r = idx - plane1_len;
            Self { plane: Plane::HeadDown, i: r / cols, j: r % cols }
        }
    }

    /// All states in deterministic sweep order.
    pub fn all(p: &SystemParams) -> impl Iterator<Item = StateIndex> + '_ {
        (0..p.state_count()).map(move |idx| Self::from_flat(idx, p))
    }
}

/// One directed arc of the transition diagram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transition {
    pub from: StateIndex,
    pub to: StateIndex,
    pub rate: f64,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FieldError {
    #[error("cannot normalize: total probability mass is {0}")]
    DegenerateMass(f64),
}

/// Dense array of `P[n][i][j]` over exactly the valid state ranges.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityField {
    s: usize,
    l: usize,
    data: Vec<f64>,
}

impl ProbabilityField {
    pub fn zeros(p: &SystemParams) -> Self {
        Self { s: p.s, l: p.l, data: vec![0.0; p.state_count()] }
    }

    /// Uniform distribution over all states.
    pub fn uniform(p: &SystemParams) -> Self {
        let n = p.state_count();
        Self { s: p.s, l: p.l, data: vec![1.0 / n as f64; n] }
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn l(&self) -> usize {
        self.l
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, state: StateIndex) -> f64 {
        self.data[self.flat_of(state)]
    }

    pub fn set(&mut self, state: StateIndex, value: f64) {
        let idx = self.flat_of(state);
        self.data[idx] = value;
    }

    pub fn get_flat(&self, idx: usize) -> f64 {
        self.data[idx]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    fn flat_of(&self, state: StateIndex) -> usize {
        let cols = self.l + 1;
        match state.plane() {
            Plane::HeadUp => (state.i() - 1) * cols + state.j(),
            Plane::HeadDown => self.s * cols + state.i() * cols + state.j(),
        }
    }

    pub fn total(&self) -> f64 {
        self.data.iter().sum()
    }

    /// Scales the field so the grand total is 1.
    ///
    /// Fails on zero, negative, or non-finite total mass.
    pub fn normalize(&mut self) -> Result<(), FieldError> {
        let total = self.total();
        if !total.is_finite() || total <= 0.0 {
            return Err(FieldError::DegenerateMass(total));
        }
        let inv = 1.0 / total;
        for v in &mut self.data {
            *v *= inv;
        }
        Ok(())
    }

    /// Total mass of one plane.
    pub fn plane_mass(&self, plane: Plane) -> f64 {
        let half = self.s * (self.l + 1);
        match plane {
            Plane::HeadUp => self.data[..half].iter().sum(),
            Plane::HeadDown => self.data[half..].iter().sum(),
        }
    }

    /// Iterates `(state, probability)` pairs in sweep order.
    pub fn iter(&self) -> impl Iterator<Item = (StateIndex, f64)> + '_ {
        let cols = self.l + 1;
        let plane1_len = self.s * cols;
        self.data.iter().enumerate().map(move |(idx, &v)| {
            let state = if idx < plane1_len {
                StateIndex::new_unchecked(Plane::HeadUp, idx / cols + 1, idx % cols)
            } else {
                let r = idx - plane1_len;
                StateIndex::new_unchecked(Plane::HeadDown, r / cols, r % cols)
            };
            (state, v)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> SystemParams {
        SystemParams::new(3, 4, 1.0, 0.5, 0.01, 0.01, 0.5, 0.5)
    }

    #[test]
    fn plane_ranges_are_enforced() {
        let p = small();
        assert!(StateIndex::new(Plane::HeadUp, 0, 0, &p).is_err());
        assert!(StateIndex::new(Plane::HeadUp, 3, 4, &p).is_ok());
        assert!(StateIndex::new(Plane::HeadUp, 4, 0, &p).is_err());
        assert!(StateIndex::new(Plane::HeadDown, 0, 0, &p).is_ok());
        assert!(StateIndex::new(Plane::HeadDown, 3, 0, &p).is_err());
        assert!(StateIndex::new(Plane::HeadDown, 1, 5, &p).is_err());
    }

    #[test]
    fn flat_round_trips_over_all_states() {
        let p = small();
        for idx in 0..p.state_count() {
            let s = StateIndex::from_flat(idx, &p);
            assert_eq!(s.flat(&p), idx);
            assert!(StateIndex::new(s.plane(), s.i(), s.j(), &p).is_ok());
        }
    }

    #[test]
    fn sweep_order_is_plane1_first() {
        let p = small();
        let states: Vec<_> = StateIndex::all(&p).collect();
        assert_eq!(states.len(), p.state_count());
        assert_eq!(states[0], StateIndex::new(Plane::HeadUp, 1, 0, &p).unwrap());
        let first_down = states.iter().position(|s| s.plane() == Plane::HeadDown).unwrap();
        assert_eq!(first_down, p.s * (p.l + 1));
        assert!(states[..first_down].iter().all(|s| s.plane() == Plane::HeadUp));
    }

    #[test]
    fn normalize_scales_to_one() {
        let p = small();
        let mut f = ProbabilityField::zeros(&p);
        let n = p.state_count() as f64;
        for idx in 0..p.state_count() {
            f.as_mut_slice()[idx] = 2.0 / n;
        }
        f.normalize().unwrap();
        assert!((f.total() - 1.0).abs() < 1e-12);
        assert!((f.get_flat(0) - 1.0 / n).abs() < 1e-15);
    }

    #[test]
    fn normalize_rejects_zero_field() {
        let p = small();
        let mut f = ProbabilityField::zeros(&p);
        assert_eq!(f.normalize().unwrap_err(), FieldError::DegenerateMass(0.0));
    }

    #[test]
    fn plane_masses_sum_to_total() {
        let p = small();
        let mut f = ProbabilityField::uniform(&p);
        f.normalize().unwrap();
        let m = f.plane_mass(Plane::HeadUp) + f.plane_mass(Plane::HeadDown);
        assert!((m - 1.0).abs() < 1e-12);
    }
}
