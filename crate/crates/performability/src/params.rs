//! Model parameters and their validation rules.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Convention for the downward failure rate inside the head-operative plane.
///
/// A head-operative state with `i` serving nodes contains the head plus
/// `i - 1` computing nodes. The state diagrams and balance equations this
/// model reproduces treat the whole group of `i` nodes as failing at rate
/// `i·ξ`; physically only the `i - 1` computing nodes fail at rate `ξ` each
/// (the head has its own rate `ξh`). Both conventions are supported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Semantics {
    /// Plane-1 state `i` fails downward at rate `i·ξ`.
    #[default]
    PaperLiteral,
    /// Plane-1 state `i` fails downward at rate `(i-1)·ξ`.
    PerComputingNode,
}

impl Semantics {
    /// Number of plane-1 nodes contributing rate `ξ` in a state with `i`
    /// operative serving nodes.
    pub fn failing_nodes(self, i: usize) -> usize {
        match self {
            Semantics::PaperLiteral => i,
            Semantics::PerComputingNode => i.saturating_sub(1),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Semantics::PaperLiteral => "paper-literal",
            Semantics::PerComputingNode => "per-computing-node",
        }
    }
}

impl std::str::FromStr for Semantics {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper-literal" | "paper_literal" | "paperliteral" => Ok(Semantics::PaperLiteral),
            "per-computing-node" | "per_computing_node" | "percomputingnode" => {
                Ok(Semantics::PerComputingNode)
            }
            other => Err(format!(
                "unknown semantics '{other}' (expected 'paper-literal' or 'per-computing-node')"
            )),
        }
    }
}

/// All rates and sizes of the cluster model.
///
/// The system has one head node and `s - 1` identical computing nodes behind
/// a common bounded queue of capacity `l` (tasks in service included). All
/// rates must share one time unit; only ratios matter.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    /// Total serving nodes, head included. `s ≥ 1`.
    pub s: usize,
    /// System capacity in tasks (queued + in service). `l ≥ s`.
    pub l: usize,
    /// Task arrival rate λ.
    pub lambda: f64,
    /// Computing-node service rate μ.
    pub mu: f64,
    /// Head-node service rate μh. The model assumes μh = μ.
    pub mu_h: f64,
    /// Computing-node failure rate ξ. May be zero (failure-free nodes).
    pub xi: f64,
    /// Head-node failure rate ξh.
    pub xi_h: f64,
    /// Computing-node repair rate η.
    pub eta: f64,
    /// Head-node repair rate ηh.
    pub eta_h: f64,
    /// Plane-1 failure-rate convention.
    #[serde(default)]
    pub semantics: Semantics,
}

/// A violated parameter constraint; reports the first violation found.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("s must be at least 1 (got {0})")]
    TooFewNodes(usize),
    #[error("L >= S violated: capacity l = {l} is below s = {s}")]
    CapacityBelowNodes { s: usize, l: usize },
    #[error("{name} must be finite and non-negative (got {value})")]
    BadRate { name: &'static str, value: f64 },
    #[error("{name} must be strictly positive (got {value})")]
    NonPositiveRate { name: &'static str, value: f64 },
    #[error("mu_h must equal mu (got mu = {mu}, mu_h = {mu_h})")]
    HeadServiceMismatch { mu: f64, mu_h: f64 },
}

impl SystemParams {
    /// Convenience constructor with μh = μ and default semantics.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        s: usize,
        l: usize,
        lambda: f64,
        mu: f64,
        xi: f64,
        xi_h: f64,
        eta: f64,
        eta_h: f64,
    ) -> Self {
        Self {
            s,
            l,
            lambda,
            mu,
            mu_h: mu,
            xi,
            xi_h,
            eta,
            eta_h,
            semantics: Semantics::default(),
        }
    }

    pub fn with_semantics(mut self, semantics: Semantics) -> Self {
        self.semantics = semantics;
        self
    }

    /// Checks every model constraint, reporting the first violation.
    pub fn validate(&self) -> Result<&Self, ParamError> {
        if self.s < 1 {
            return Err(ParamError::TooFewNodes(self.s));
        }
        if self.l < self.s {
            return Err(ParamError::CapacityBelowNodes { s: self.s, l: self.l });
        }
        let non_negative = [
            ("lambda", self.lambda),
            ("mu", self.mu),
            ("mu_h", self.mu_h),
            ("xi", self.xi),
            ("xi_h", self.xi_h),
            ("eta", self.eta),
            ("eta_h", self.eta_h),
        ];
        for (name, value) in non_negative {
            if !value.is_finite() || value < 0.0 {
                return Err(ParamError::BadRate { name, value });
            }
        }
        let strictly_positive = [
            ("lambda", self.lambda),
            ("mu", self.mu),
            ("xi_h", self.xi_h),
            ("eta", self.eta),
            ("eta_h", self.eta_h),
        ];
        for (name, value) in strictly_positive {
            if value <= 0.0 {
                return Err(ParamError::NonPositiveRate { name, value });
            }
        }
        if self.mu_h != self.mu {
            return Err(ParamError::HeadServiceMismatch { mu: self.mu, mu_h: self.mu_h });
        }
        Ok(self)
    }

    /// Consuming variant of [`validate`](Self::validate).
    pub fn validated(self) -> Result<Self, ParamError> {
        self.validate()?;
        Ok(self)
    }

    /// Total number of states across both planes: `2·s·(l+1)`.
    pub fn state_count(&self) -> usize {
        2 * self.s * (self.l + 1)
    }

    /// Traffic intensity ρ = λ/μ.
    pub fn rho(&self) -> f64 {
        self.lambda / self.mu
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_scale() -> SystemParams {
        SystemParams::new(500, 1000, 70.0, 0.25, 0.001, 0.001, 0.5, 0.5)
    }

    #[test]
    fn accepts_paper_scale_parameters() {
        assert!(paper_scale().validate().is_ok());
    }

    #[test]
    fn rejects_capacity_below_node_count() {
        let p = SystemParams::new(2, 1, 1.0, 1.0, 0.1, 0.1, 0.5, 0.5);
        assert_eq!(
            p.validate().unwrap_err(),
            ParamError::CapacityBelowNodes { s: 2, l: 1 }
        );
    }

    #[test]
    fn rejects_head_service_rate_mismatch() {
        let mut p = paper_scale();
        p.mu_h = 0.3;
        assert_eq!(
            p.validate().unwrap_err(),
            ParamError::HeadServiceMismatch { mu: 0.25, mu_h: 0.3 }
        );
    }

    #[test]
    fn rejects_non_positive_required_rates() {
        for field in ["lambda", "mu", "xi_h", "eta", "eta_h"] {
            let mut p = paper_scale();
            match field {
                "lambda" => p.lambda = 0.0,
                "mu" => {
                    p.mu = 0.0;
                    p.mu_h = 0.0;
                }
                "xi_h" => p.xi_h = 0.0,
                "eta" => p.eta = 0.0,
                "eta_h" => p.eta_h = 0.0,
                _ => unreachable!(),
            }
            assert!(
                matches!(p.validate(), Err(ParamError::NonPositiveRate { name, .. }) if name == field),
                "expected NonPositiveRate for {field}"
            );
        }
    }

    #[test]
    fn zero_computing_failure_rate_is_allowed() {
        let mut p = paper_scale();
        p.xi = 0.0;
        assert!(p.validate().is_ok());
    }

    #[test]
    fn rejects_non_finite_rates() {
        let mut p = paper_scale();
        p.xi = f64::NAN;
        assert!(matches!(p.validate(), Err(ParamError::BadRate { name: "xi", .. })));
    }

    #[test]
    fn state_count_matches_two_planes() {
        assert_eq!(SystemParams::new(2, 2, 1.0, 1.0, 0.1, 0.1, 0.5, 0.5).state_count(), 12);
        assert_eq!(paper_scale().state_count(), 2 * 500 * 1001);
    }

    #[test]
    fn semantics_parse_round_trip() {
        for s in [Semantics::PaperLiteral, Semantics::PerComputingNode] {
            assert_eq!(s.as_str().parse::<Semantics>().unwrap(), s);
        }
        assert!("bogus".parse::<Semantics>().is_err());
    }
}
