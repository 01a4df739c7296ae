//! Real contact traces: parsing, discretization into snapshots, link
//! statistics, and the delivery-ratio replay experiment.

mod parse;
mod replay;
mod stats;

pub use parse::{parse_contacts, Contact, ContactTrace, ParseWarning, ParsedTrace, TraceFormat};
pub use replay::{
    max_alpha_for_target, replay_experiment, replay_runs, write_replay_csv, DeliveryReport,
    ReplaySchedule, ScheduleConfig, ScheduledStart, StartOutcome, REPLAY_CSV_HEADER,
};
pub use stats::{estimate_model, link_stats, LinkStats, ModelEstimate};

use crate::simulate::TemporalGraph;
use crate::{Error, Result};

/// Default share of a step window a contact must cover to count as an edge.
pub const DEFAULT_COVERAGE: f64 = 0.5;

/// [`discretize_with`] at the default half-window coverage.
pub fn discretize(trace: &ContactTrace, tau: f64) -> Result<TemporalGraph> {
    discretize_with(trace, tau, DEFAULT_COVERAGE)
}

/// Cuts the trace into `ceil(duration / tau)` steps, step `k` covering
/// `[k tau, (k + 1) tau)`. A pair is linked at step `k` when its contact
/// covers at least `coverage * tau` of that window.
pub fn discretize_with(trace: &ContactTrace, tau: f64, coverage: f64) -> Result<TemporalGraph> {
    if !tau.is_finite() || tau <= 0.0 {
        return Err(Error::domain("tau", format!("tau must be > 0, got {tau}")));
    }
    if !(coverage > 0.0 && coverage <= 1.0) {
        return Err(Error::domain(
            "coverage",
            format!("must lie in (0, 1], got {coverage}"),
        ));
    }
    let steps = ((trace.duration() / tau).ceil() as usize).max(1);
    let threshold = coverage * tau * (1.0 - 1e-9);
    let mut snapshots = vec![Vec::new(); steps];
    for c in trace.contacts() {
        let first = (c.start / tau).floor() as usize;
        let last = ((c.end / tau).ceil() as usize).min(steps);
        for (k, edges) in snapshots.iter_mut().enumerate().take(last).skip(first) {
            let lo = k as f64 * tau;
            let overlap = c.end.min(lo + tau) - c.start.max(lo);
            if overlap >= threshold {
                edges.push((c.u, c.v));
            }
        }
    }
    TemporalGraph::new(trace.node_count().max(2), tau, snapshots)
}
