//! Contamination and success probabilities for one step of the chain.

use statrs::function::factorial::ln_binomial;

use crate::{Error, LinkModel, Result};

/// Binomial pmf of `k` successes in `trials` trials with success
/// probability `p`, evaluated in log space.
pub(crate) fn binomial_pmf(k: usize, p: f64, trials: usize) -> f64 {
    if k > trials {
        return 0.0;
    }
    if p <= 0.0 {
        return if k == 0 { 1.0 } else { 0.0 };
    }
    if p >= 1.0 {
        return if k == trials { 1.0 } else { 0.0 };
    }
    let ln = ln_binomial(trials as u64, k as u64)
        + k as f64 * p.ln()
        + (trials - k) as f64 * (-p).ln_1p();
    ln.exp()
}

/// Probability that `m` of `w` susceptible nodes are contaminated when each
/// of `u` infectious nodes reaches each of them independently with
/// probability `p`.
pub(crate) fn contamination(m: usize, p: f64, u: usize, w: usize) -> f64 {
    let per_node = 1.0 - (1.0 - p).powi(u as i32);
    binomial_pmf(m, per_node, w)
}

/// Checked form of the contamination probability.
///
/// Negative counts are unrepresentable; `p` must lie in `[0, 1]`.
pub fn p_cont(m: usize, p: f64, u: usize, w: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(
            "p",
            format!("probability must lie in [0, 1], got {p}"),
        ));
    }
    Ok(contamination(m, p, u, w))
}

/// Probability that the destination is infected at the next step from
/// state `(i, j)`: `1 - pi_down^j q_i^i`.
pub fn p_succ(i: usize, j: usize, model: &LinkModel) -> Result<f64> {
    if i + j == 0 {
        return Err(Error::domain("i + j", "at least one node must be infected"));
    }
    Ok(1.0 - model.pi_down().powi(j as i32) * model.q_i().powi(i as i32))
}
