use std::collections::BTreeMap;

use super::ContactTrace;
use crate::{Error, Result};

/// Contact and inter-contact statistics of a trace.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkStats {
    /// Mean contact duration, seconds.
    pub mean_contact: f64,
    /// Mean gap between consecutive contacts of the same pair, seconds.
    /// `None` when no pair meets twice.
    pub mean_intercontact: Option<f64>,
    /// Contact counts keyed by whole seconds of duration (1 s buckets).
    pub lifetime_histogram: BTreeMap<u64, usize>,
    durations: Vec<f64>,
}

impl LinkStats {
    pub fn contact_count(&self) -> usize {
        self.durations.len()
    }

    /// Fraction of contacts lasting strictly less than `seconds`.
    pub fn fraction_shorter_than(&self, seconds: f64) -> f64 {
        let shorter = self.durations.partition_point(|&d| d < seconds);
        shorter as f64 / self.durations.len() as f64
    }
}

pub fn link_stats(trace: &ContactTrace) -> Result<LinkStats> {
    if trace.is_empty() {
        return Err(Error::EmptyTrace);
    }
    let mut durations: Vec<f64> = trace.contacts().iter().map(|c| c.duration()).collect();
    let mut lifetime_histogram = BTreeMap::new();
    for &d in &durations {
        *lifetime_histogram.entry(d.floor() as u64).or_insert(0) += 1;
    }
    let mean_contact = durations.iter().sum::<f64>() / durations.len() as f64;
    durations.sort_by(f64::total_cmp);

    // contacts are sorted by pair then start
    let gaps: Vec<f64> = trace
        .contacts()
        .windows(2)
        .filter(|w| (w[0].u, w[0].v) == (w[1].u, w[1].v))
        .map(|w| w[1].start - w[0].end)
        .collect();
    let mean_intercontact =
        (!gaps.is_empty()).then(|| gaps.iter().sum::<f64>() / gaps.len() as f64);

    Ok(LinkStats {
        mean_contact,
        mean_intercontact,
        lifetime_histogram,
        durations,
    })
}

/// Link-model parameters recovered from trace statistics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelEstimate {
    pub r: f64,
    pub lambda: f64,
    /// `mean_contact / tau` was below 1 and was raised to 1.
    pub r_clamped: bool,
    /// The inter-contact/contact ratio was below `1 / r` and was raised.
    pub lambda_clamped: bool,
}

/// Inverts the mean durations `(r tau, lambda r tau)`.
pub fn estimate_model(stats: &LinkStats, tau: f64) -> Result<ModelEstimate> {
    if !tau.is_finite() || tau <= 0.0 {
        return Err(Error::domain("tau", format!("tau must be > 0, got {tau}")));
    }
    let intercontact = stats
        .mean_intercontact
        .ok_or(Error::UndefinedMean("inter-contact time"))?;
    if !stats.mean_contact.is_finite() || stats.mean_contact <= 0.0 {
        return Err(Error::UndefinedMean("contact time"));
    }
    let raw_r = stats.mean_contact / tau;
    let r = raw_r.max(1.0);
    let raw_lambda = intercontact / stats.mean_contact;
    let lambda = raw_lambda.max(1.0 / r);
    Ok(ModelEstimate {
        r,
        lambda,
        r_clamped: raw_r < 1.0,
        lambda_clamped: raw_lambda < 1.0 / r,
    })
}
