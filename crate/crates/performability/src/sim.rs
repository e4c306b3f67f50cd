//! Discrete-event simulation of the physical cluster.
//!
//! The simulator plays the actual scenario rather than the balance
//! equations: Poisson arrivals into a bounded FCFS queue, a pool of
//! operative nodes serving the head of the queue, node failures and repairs
//! with preemptive head-priority repair, and total service outage while the
//! head is down. With exponential clocks everywhere the event timing reduces
//! to drawing the next event from the current aggregate rates, so both
//! failure-rate conventions are simulable and the simulated process is a
//! true sample path of the modelled chain. Interrupted services are re-drawn
//! on resume, which for exponential service is statistically identical to
//! resuming.
//!
//! Each replication owns a counter-based RNG stream derived from the master
//! seed, so `(seed, replication index)` fully determines the trace and
//! replications may run in any order.

use crate::params::SystemParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, StudentsT};
use std::collections::VecDeque;
use std::time::{Duration, Instant};
use thiserror::Error;

/// Replication layout and output-analysis settings.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SimConfig {
    /// Master seed; replication `r` uses stream `r` of this seed.
    pub seed: u64,
    /// Simulated time discarded at the start of every replication.
    pub warmup: f64,
    /// Simulated time measured per replication (after warmup).
    pub horizon: f64,
    /// Independent replications; at least 2 for a confidence interval.
    pub replications: usize,
    /// Two-sided confidence level for the Student-t half-widths.
    pub confidence: f64,
    /// Also tag each task's sojourn time and average those directly.
    pub tag_sojourns: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            warmup: 1e4,
            horizon: 1e5,
            replications: 10,
            confidence: 0.95,
            tag_sojourns: false,
        }
    }
}

impl SimConfig {
    /// Sets the horizon and the conventional 10% warmup.
    pub fn with_horizon(mut self, horizon: f64) -> Self {
        self.horizon = horizon;
        self.warmup = horizon / 10.0;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_replications(mut self, replications: usize) -> Self {
        self.replications = replications;
        self
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.replications < 2 {
            return Err(SimError::BadConfig("replications must be at least 2"));
        }
        if !(self.horizon > 0.0) {
            return Err(SimError::BadConfig("horizon must be positive"));
        }
        if !(self.warmup >= 0.0 && self.warmup.is_finite()) {
            return Err(SimError::BadConfig("warmup must be non-negative and finite"));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(SimError::BadConfig("confidence must lie in (0, 1)"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("invalid simulation config: {0}")]
    BadConfig(&'static str),
}

/// Point estimate with its confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub half_width: f64,
}

/// Raw per-replication measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationSample {
    /// Time-averaged tasks in system over the measurement window.
    pub mql: f64,
    /// Departures per unit time over the measurement window.
    pub thrp: f64,
    /// Little's-law response time; `None` if no task departed.
    pub mrt: Option<f64>,
    /// Fraction of window time with the head operative.
    pub availability: f64,
    /// Fraction of window time with the queue full.
    pub p_block: f64,
    /// Mean tagged sojourn of departures in the window (tagged mode only).
    pub mean_sojourn: Option<f64>,
    /// Events processed over the whole replication, warmup included.
    pub events: u64,
    pub arrivals_accepted: u64,
    pub arrivals_blocked: u64,
    pub departures: u64,
    /// Tasks still in the system when the replication stopped.
    pub in_system_at_end: u64,
}

/// Aggregated estimates over all replications.
#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub mql: Estimate,
    pub thrp: Estimate,
    /// `None` when fewer than two replications saw a departure.
    pub mrt: Option<Estimate>,
    pub availability: Estimate,
    pub p_block: Estimate,
    /// Direct sojourn average (tagged mode only).
    pub mrt_tagged: Option<Estimate>,
    pub total_events: u64,
    /// Replications that recorded no departure in the window.
    pub zero_departure_replications: usize,
    pub wall_time: Duration,
}

/// Cluster state as the simulator tracks it: head status, operative count
/// and the task queue (a plain count unless sojourns are tagged).
struct Cluster {
    head_up: bool,
    /// Operative serving nodes; includes the head while it is up.
    operative: usize,
    tasks: usize,
    /// Arrival stamps in FCFS order, tagged mode only. The first
    /// `min(operative, tasks)` entries are in service; a preempted task
    /// simply stays at its position, i.e. returns to the head of the queue.
    stamps: Option<VecDeque<f64>>,
}

/// Runs one replication and returns its raw sample.
pub fn run_replication(p: &SystemParams, cfg: &SimConfig, rep_index: usize) -> ReplicationSample {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(rep_index as u64);

    let mut cluster = Cluster {
        head_up: true,
        operative: p.s,
        tasks: 0,
        stamps: cfg.tag_sojourns.then(VecDeque::new),
    };

    let end = cfg.warmup + cfg.horizon;
    let mut now = 0.0_f64;
    let mut events = 0u64;
    let mut arrivals_accepted = 0u64;
    let mut arrivals_blocked = 0u64;
    let mut departures = 0u64;
    let mut departures_in_window = 0u64;
    let mut area_tasks = 0.0_f64;
    let mut time_head_up = 0.0_f64;
    let mut time_blocked = 0.0_f64;
    let mut sojourn_sum = 0.0_f64;
    let mut sojourn_count = 0u64;

    loop {
        // Aggregate event rates in the current state; mirrors the canonical
        // transition rules plus lost arrivals while the queue is full.
        let service = if cluster.head_up {
            cluster.operative.min(cluster.tasks) as f64 * p.mu
        } else {
            0.0
        };
        let computing_failure = if cluster.head_up {
            if cluster.operative > 1 {
                p.semantics.failing_nodes(cluster.operative) as f64 * p.xi
            } else {
                0.0
            }
        } else {
            cluster.operative as f64 * p.xi
        };
        let head_failure = if cluster.head_up { p.xi_h } else { 0.0 };
        let computing_repair = if cluster.head_up && cluster.operative < p.s { p.eta } else { 0.0 };
        let head_repair = if cluster.head_up { 0.0 } else { p.eta_h };
        let total = p.lambda + service + computing_failure + head_failure + computing_repair + head_repair;

        let u: f64 = rng.random();
        let dt = -(1.0 - u).ln() / total;
        let event_time = now + dt;

        // Accumulate time-weighted statistics over the measurement window.
        let lo = now.max(cfg.warmup);
        let hi = event_time.min(end);
        if hi > lo {
            let span = hi - lo;
            area_tasks += cluster.tasks as f64 * span;
            if cluster.head_up {
                time_head_up += span;
            }
            if cluster.tasks == p.l {
                time_blocked += span;
            }
        }
        if event_time >= end {
            break;
        }
        now = event_time;
        events += 1;
        let in_window = now >= cfg.warmup;

        let mut pick = rng.random::<f64>() * total;
        if pick < p.lambda {
            if cluster.tasks < p.l {
                cluster.tasks += 1;
                arrivals_accepted += 1;
                if let Some(stamps) = &mut cluster.stamps {
                    stamps.push_back(now);
                }
            } else {
                arrivals_blocked += 1;
            }
            continue;
        }
        pick -= p.lambda;
        if pick < service {
            // Any of the pooled in-service tasks may finish; they are the
            // first min(operative, tasks) queue positions.
            if let Some(stamps) = &mut cluster.stamps {
                let in_service = cluster.operative.min(cluster.tasks);
                let victim = rng.random_range(0..in_service);
                let stamp = stamps.remove(victim).expect("stamped task");
                if in_window {
                    sojourn_sum += now - stamp;
                    sojourn_count += 1;
                }
            }
            cluster.tasks -= 1;
            departures += 1;
            if in_window {
                departures_in_window += 1;
            }
            continue;
        }
        pick -= service;
        if pick < computing_failure {
            cluster.operative -= 1;
            continue;
        }
        pick -= computing_failure;
        if pick < head_failure {
            // Head goes down: service halts, tasks stay queued, the
            // operative count now counts computing nodes only.
            cluster.head_up = false;
            cluster.operative -= 1;
            continue;
        }
        pick -= head_failure;
        if pick < computing_repair {
            cluster.operative += 1;
            continue;
        }
        // Head repair: the single repair facility always serves the head
        // first, so this is the only repair while the head is down.
        cluster.head_up = true;
        cluster.operative += 1;
    }

    let mql = area_tasks / cfg.horizon;
    let thrp = departures_in_window as f64 / cfg.horizon;
    ReplicationSample {
        mql,
        thrp,
        mrt: (thrp > 0.0).then(|| mql / thrp),
        availability: time_head_up / cfg.horizon,
        p_block: time_blocked / cfg.horizon,
        mean_sojourn: (sojourn_count > 0).then(|| sojourn_sum / sojourn_count as f64),
        events,
        arrivals_accepted,
        arrivals_blocked,
        departures,
        in_system_at_end: cluster.tasks as u64,
    }
}

/// Runs all replications and aggregates Student-t interval estimates.
pub fn simulate(p: &SystemParams, cfg: &SimConfig) -> Result<SimResult, SimError> {
    cfg.validate()?;
    let started = Instant::now();
    let samples: Vec<ReplicationSample> =
        (0..cfg.replications).map(|r| run_replication(p, cfg, r)).collect();
    Ok(aggregate(&samples, cfg, started.elapsed()))
}

/// Aggregation of per-replication samples; order-independent by summing in
/// replication order regardless of how the samples were produced.
pub fn aggregate(samples: &[ReplicationSample], cfg: &SimConfig, wall_time: Duration) -> SimResult {
    let est = |values: &[f64]| estimate(values, cfg.confidence);
    let mqls: Vec<f64> = samples.iter().map(|s| s.mql).collect();
    let thrps: Vec<f64> = samples.iter().map(|s| s.thrp).collect();
    let avails: Vec<f64> = samples.iter().map(|s| s.availability).collect();
    let blocks: Vec<f64> = samples.iter().map(|s| s.p_block).collect();
    let mrts: Vec<f64> = samples.iter().filter_map(|s| s.mrt).collect();
    let sojourns: Vec<f64> = samples.iter().filter_map(|s| s.mean_sojourn).collect();

    SimResult {
        mql: est(&mqls),
        thrp: est(&thrps),
        mrt: (mrts.len() >= 2).then(|| est(&mrts)),
        availability: est(&avails),
        p_block: est(&blocks),
        mrt_tagged: (sojourns.len() >= 2).then(|| est(&sojourns)),
        total_events: samples.iter().map(|s| s.events).sum(),
        zero_departure_replications: samples.iter().filter(|s| s.mrt.is_none()).count(),
        wall_time,
    }
}

fn estimate(values: &[f64], confidence: f64) -> Estimate {
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    if n < 2 {
        return Estimate { mean, half_width: f64::INFINITY };
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let t = StudentsT::new(0.0, 1.0, (n - 1) as f64)
        .expect("valid t distribution")
        .inverse_cdf(0.5 + confidence / 2.0);
    Estimate { mean, half_width: t * (var / n as f64).sqrt() }
}
