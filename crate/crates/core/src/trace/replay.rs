use std::io::{self, Write};

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::simulate::{epidemic_run_from, EpidemicRun, McEstimate, TemporalGraph};
use crate::{Error, Result};

pub const REPLAY_CSV_HEADER: &str = "start_step,alpha,d,attempts,successes,ratio";

/// How replay start times and source/destination pairs are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScheduleConfig {
    /// Start times are drawn from `[0, start_window)` seconds.
    pub start_window: f64,
    /// Seconds between consecutive start times.
    pub spacing: f64,
    pub pairs_per_start: usize,
    pub seed: u64,
}

impl Default for ScheduleConfig {
    /// Rollernet replay: 60 pairs every 15 s during the first 2000 s.
    fn default() -> Self {
        ScheduleConfig {
            start_window: 2000.0,
            spacing: 15.0,
            pairs_per_start: 60,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScheduledStart {
    pub step: usize,
    /// Ordered `(source, destination)` pairs, all distinct.
    pub pairs: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReplaySchedule {
    starts: Vec<ScheduledStart>,
    pairs_per_start: usize,
    rng_seed: u64,
}

impl ReplaySchedule {
    /// Draws a schedule for delay budget `d` on `graph`.
    ///
    /// Start steps whose window `[step, step + d)` would run past the end of
    /// the graph are dropped. Pairs are drawn uniformly without replacement
    /// among ordered pairs of nodes having at least one contact, using
    /// generator stream `k` of `seed` for the `k`-th start.
    pub fn sample(graph: &TemporalGraph, d: usize, config: &ScheduleConfig) -> Result<Self> {
        if !config.spacing.is_finite() || config.spacing <= 0.0 {
            return Err(Error::domain("spacing", "start spacing must be > 0"));
        }
        if config.pairs_per_start == 0 {
            return Err(Error::domain(
                "pairs",
                "at least one pair per start is required",
            ));
        }
        let nodes = graph.active_nodes();
        if nodes.len() < 2 {
            return Err(Error::domain("trace", "fewer than two nodes ever meet"));
        }
        let m = nodes.len();
        let ordered = m * (m - 1);
        let amount = config.pairs_per_start.min(ordered);

        let mut steps = Vec::new();
        let mut k = 0u32;
        loop {
            let t = f64::from(k) * config.spacing;
            if t >= config.start_window {
                break;
            }
            let step = (t / graph.tau()).round() as usize;
            if step + d > graph.steps() {
                break;
            }
            if steps.last() != Some(&step) {
                steps.push(step);
            }
            k += 1;
        }

        let starts = steps
            .into_iter()
            .enumerate()
            .map(|(idx, step)| {
                let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
                rng.set_stream(idx as u64);
                let pairs = index::sample(&mut rng, ordered, amount)
                    .into_iter()
                    .map(|p| {
                        let (src, rest) = (p / (m - 1), p % (m - 1));
                        let dst = if rest >= src { rest + 1 } else { rest };
                        (nodes[src], nodes[dst])
                    })
                    .collect();
                ScheduledStart { step, pairs }
            })
            .collect();
        Ok(ReplaySchedule {
            starts,
            pairs_per_start: config.pairs_per_start,
            rng_seed: config.seed,
        })
    }

    /// A schedule with given starts and pairs.
    pub fn explicit(starts: Vec<ScheduledStart>) -> Self {
        let pairs_per_start = starts.iter().map(|s| s.pairs.len()).max().unwrap_or(0);
        ReplaySchedule {
            starts,
            pairs_per_start,
            rng_seed: 0,
        }
    }

    pub fn starts(&self) -> &[ScheduledStart] {
        &self.starts
    }

    pub fn start_times(&self) -> Vec<usize> {
        self.starts.iter().map(|s| s.step).collect()
    }

    pub fn pairs_per_start(&self) -> usize {
        self.pairs_per_start
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    fn check(&self, graph: &TemporalGraph, d: usize) -> Result<()> {
        if let Some(s) = self.starts.iter().find(|s| s.step + d > graph.steps()) {
            return Err(Error::ScheduleOutOfRange {
                start: s.step,
                d,
                steps: graph.steps(),
            });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StartOutcome {
    pub start_step: usize,
    pub attempts: u64,
    pub successes: u64,
}

impl StartOutcome {
    pub fn ratio(&self) -> f64 {
        ratio(self.successes, self.attempts)
    }
}

/// Delivery ratio of a replay, overall and per start time.
#[derive(Debug, Clone, PartialEq)]
pub struct DeliveryReport {
    pub alpha: f64,
    pub d: usize,
    pub per_start: Vec<StartOutcome>,
    pub attempts: u64,
    pub successes: u64,
}

impl DeliveryReport {
    pub fn ratio(&self) -> f64 {
        ratio(self.successes, self.attempts)
    }

    /// Binomial confidence summary. Runs sharing a trace are correlated, so
    /// the half-width understates the true uncertainty.
    pub fn estimate(&self) -> Option<McEstimate> {
        (self.attempts > 0).then(|| McEstimate::from_counts(self.attempts, self.successes))
    }
}

fn ratio(successes: u64, attempts: u64) -> f64 {
    if attempts == 0 {
        0.0
    } else {
        successes as f64 / attempts as f64
    }
}

/// Every scheduled run, in schedule order.
pub fn replay_runs(
    graph: &TemporalGraph,
    schedule: &ReplaySchedule,
    alpha: f64,
    d: usize,
) -> Result<Vec<Vec<EpidemicRun>>> {
    schedule.check(graph, d)?;
    schedule
        .starts
        .par_iter()
        .map(|s| {
            s.pairs
                .iter()
                .map(|&(src, dst)| epidemic_run_from(graph, s.step, src, dst, alpha, d))
                .collect()
        })
        .collect()
}

/// Runs epidemic routing for every scheduled start and pair.
pub fn replay_experiment(
    graph: &TemporalGraph,
    schedule: &ReplaySchedule,
    alpha: f64,
    d: usize,
) -> Result<DeliveryReport> {
    let runs = replay_runs(graph, schedule, alpha, d)?;
    let per_start: Vec<StartOutcome> = schedule
        .starts
        .iter()
        .zip(&runs)
        .map(|(s, runs)| StartOutcome {
            start_step: s.step,
            attempts: runs.len() as u64,
            successes: runs.iter().filter(|r| r.delivered).count() as u64,
        })
        .collect();
    Ok(DeliveryReport {
        alpha,
        d,
        attempts: per_start.iter().map(|s| s.attempts).sum(),
        successes: per_start.iter().map(|s| s.successes).sum(),
        per_start,
    })
}

/// Largest packet size of `alpha_grid` (ascending) whose replay ratio
/// reaches `target_ratio`.
pub fn max_alpha_for_target(
    graph: &TemporalGraph,
    schedule: &ReplaySchedule,
    target_ratio: f64,
    d: usize,
    alpha_grid: &[f64],
) -> Result<Option<f64>> {
    if alpha_grid.is_empty() {
        return Err(Error::domain("alpha", "packet size grid is empty"));
    }
    if alpha_grid.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::domain("alpha", "packet size grid must be ascending"));
    }
    let mut best = None;
    for &alpha in alpha_grid {
        if replay_experiment(graph, schedule, alpha, d)?.ratio() >= target_ratio {
            best = Some(alpha);
        }
    }
    Ok(best)
}

/// Per-start rows followed by one `all` row per report.
pub fn write_replay_csv<W: Write>(reports: &[DeliveryReport], mut out: W) -> io::Result<()> {
    writeln!(out, "{REPLAY_CSV_HEADER}")?;
    for rep in reports {
        for s in &rep.per_start {
            writeln!(
                out,
                "{},{},{},{},{},{}",
                s.start_step,
                rep.alpha,
                rep.d,
                s.attempts,
                s.successes,
                s.ratio()
            )?;
        }
        writeln!(
            out,
            "all,{},{},{},{},{}",
            rep.alpha,
            rep.d,
            rep.attempts,
            rep.successes,
            rep.ratio()
        )?;
    }
    Ok(())
}
