//! Seeded Markovian temporal graphs and epidemic spreading over them.
//!
//! This is the Monte Carlo counterpart of [`crate::analytic`]: it tracks
//! actual node identities and link histories instead of infection counts.

mod epidemic;
mod graph;

pub use epidemic::{epidemic_run, epidemic_run_from, EpidemicRun};
pub use graph::{generate_graph, Edge, TemporalGraph};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::{Error, LinkModel, Result, ScenarioParams};

/// Delivery ratio measured over independent trials.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub trials: u64,
    pub successes: u64,
    pub ratio: f64,
    /// Normal-approximation 95% half-width, `1.96 sqrt(p (1 - p) / trials)`.
    pub half_width_95: f64,
}

impl McEstimate {
    pub fn from_counts(trials: u64, successes: u64) -> Self {
        assert!(trials > 0 && successes <= trials);
        let ratio = successes as f64 / trials as f64;
        McEstimate {
            trials,
            successes,
            ratio,
            half_width_95: 1.96 * (ratio * (1.0 - ratio) / trials as f64).sqrt(),
        }
    }

    /// Whether `value` lies within `k` half-widths of the ratio.
    pub fn agrees_with(&self, value: f64, k: f64) -> bool {
        (self.ratio - value).abs() <= k * self.half_width_95
    }
}

/// One Monte Carlo trial: a fresh graph of `d` steps drawn from generator
/// stream `trial` of `seed`, then a run from node 0 to node 1.
///
/// Trial 0 sees the same graph as `generate_graph(n, model, d, tau, seed)`.
pub fn mc_trial(
    n: usize,
    model: &LinkModel,
    alpha: f64,
    d: usize,
    seed: u64,
    trial: u64,
) -> Result<EpidemicRun> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let graph = graph::generate_graph_with(n, model, d, 1.0, &mut rng)?;
    epidemic_run(&graph, 0, 1, alpha, d)
}

/// Fraction of `trials` independent runs delivering within `d` steps.
///
/// Links being i.i.d., the source/destination pair is fixed to `(0, 1)`.
/// Each trial owns generator stream `trial` of `seed`, so the result does not
/// depend on how trials are scheduled across threads.
pub fn mc_delivery_ratio(
    n: usize,
    model: &LinkModel,
    alpha: f64,
    d: usize,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if trials == 0 {
        return Err(Error::domain("trials", "at least one trial is required"));
    }
    ScenarioParams::new(n, 1.0, alpha, d)?;
    let successes = (0..trials)
        .into_par_iter()
        .map(|t| mc_trial(n, model, alpha, d, seed, t).map(|run| u64::from(run.delivered)))
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(McEstimate::from_counts(trials, successes))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn half_width_formula() {
        let e = McEstimate::from_counts(100, 25);
        assert_eq!(e.ratio, 0.25);
        assert_relative_eq!(e.half_width_95, 1.96 * (0.25f64 * 0.75 / 100.0).sqrt());
        assert_eq!(McEstimate::from_counts(10, 10).half_width_95, 0.0);
        assert!(e.agrees_with(0.3, 3.0));
        assert!(!e.agrees_with(0.6, 3.0));
    }

    #[test]
    fn first_trial_uses_the_seeded_graph() {
        let m = LinkModel::new(2.0, 4.0).unwrap();
        for seed in 0..20 {
            let g = generate_graph(8, &m, 6, 1.0, seed).unwrap();
            let direct = epidemic_run(&g, 0, 1, 1.0, 6).unwrap();
            assert_eq!(mc_trial(8, &m, 1.0, 6, seed, 0).unwrap(), direct);
        }
    }

    #[test]
    fn estimate_is_deterministic() {
        let m = LinkModel::new(2.0, 10.0).unwrap();
        let a = mc_delivery_ratio(10, &m, 0.5, 4, 2000, 9).unwrap();
        let b = mc_delivery_ratio(10, &m, 0.5, 4, 2000, 9).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn two_node_ratio_matches_closed_form() {
        let m = LinkModel::new(2.0, 10.0).unwrap();
        let est = mc_delivery_ratio(2, &m, 1.0, 5, 200_000, 1).unwrap();
        let exact = 1.0 - m.pi_down() * m.q_i().powi(4);
        assert!(est.agrees_with(exact, 3.0), "{est:?} vs {exact}");
    }

    #[test]
    fn rejects_zero_trials() {
        let m = LinkModel::new(2.0, 10.0).unwrap();
        assert!(mc_delivery_ratio(5, &m, 1.0, 3, 0, 1).is_err());
        assert!(mc_delivery_ratio(1, &m, 1.0, 3, 10, 1).is_err());
    }
}
