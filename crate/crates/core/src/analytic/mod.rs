//! Absorbing Markov chain of epidemic spreading over infection counts.
//!
//! The delivery probability within `d` steps is the mass absorbed in
//! [`EpidemicState::Success`] after iterating the chain from the initial
//! state. Packets of size `alpha <= 1` make `h = floor(1/alpha)` hops per
//! step, modeled as one dynamic step followed by `h - 1` static hops.
//! Packets with `alpha > 1` only get bounds, from chains over disjoint
//! intervals of `ceil(alpha)` steps.

mod matrix;
mod primitives;
mod states;
mod sweep;

pub use matrix::{
    build_bound_matrices, build_dynamic_matrix, build_static_matrix, ContactProbs, MatrixKind,
    TransitionMatrix,
};
pub use primitives::{p_cont, p_succ};
pub use states::{EpidemicState, EpidemicStateSpace};
pub use sweep::{sweep, write_sweep_csv, SweepGrid, SweepRow, SWEEP_CSV_HEADER};

use crate::{LinkModel, PacketRegime, Result, ScenarioParams};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Delivery {
    Exact(f64),
    Interval { lower: f64, upper: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeliveryResult {
    pub delivery: Delivery,
    /// Number of chain iterations applied. For interval results this is the
    /// number of whole intervals that fit in the delay budget.
    pub steps_used: usize,
}

impl DeliveryResult {
    pub fn value(&self) -> Option<f64> {
        match self.delivery {
            Delivery::Exact(v) => Some(v),
            Delivery::Interval { .. } => None,
        }
    }

    /// Lower end; equal to the value for exact results.
    pub fn lower(&self) -> f64 {
        match self.delivery {
            Delivery::Exact(v) => v,
            Delivery::Interval { lower, .. } => lower,
        }
    }

    pub fn upper(&self) -> f64 {
        match self.delivery {
            Delivery::Exact(v) => v,
            Delivery::Interval { upper, .. } => upper,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.delivery, Delivery::Exact(_))
    }
}

/// The matrices needed for one `(n, model, alpha)` combination, reusable
/// across delay budgets.
#[derive(Debug, Clone)]
pub enum DeliveryChain {
    Hops {
        dynamic: TransitionMatrix,
        static_hop: Option<TransitionMatrix>,
        hops: usize,
    },
    Spans {
        lower: TransitionMatrix,
        upper: TransitionMatrix,
        span: usize,
    },
}

impl DeliveryChain {
    pub fn new(n: usize, model: &LinkModel, alpha: f64) -> Result<Self> {
        if n < 2 {
            return Err(crate::Error::domain(
                "n",
                format!("n must be >= 2, got {n}"),
            ));
        }
        Ok(match PacketRegime::from_alpha(alpha)? {
            PacketRegime::Hops(hops) => DeliveryChain::Hops {
                dynamic: build_dynamic_matrix(n, model),
                static_hop: (hops > 1).then(|| build_static_matrix(n, model)),
                hops,
            },
            PacketRegime::Spans(span) => {
                let (lower, upper) = matrix::bound_matrices_for_span(n, model, span);
                DeliveryChain::Spans { lower, upper, span }
            }
        })
    }

    /// Delivery results for every delay budget `1..=d_max`.
    pub fn curve(&self, d_max: usize) -> Vec<DeliveryResult> {
        match self {
            DeliveryChain::Hops {
                dynamic,
                static_hop,
                hops,
            } => {
                let mut dist = initial(dynamic.space());
                (1..=d_max)
                    .map(|d| {
                        dist = dynamic.step(&dist);
                        if let Some(r) = static_hop {
                            for _ in 1..*hops {
                                dist = r.step(&dist);
                            }
                        }
                        DeliveryResult {
                            delivery: Delivery::Exact(absorbed(&dist)),
                            steps_used: d,
                        }
                    })
                    .collect()
            }
            DeliveryChain::Spans { lower, upper, span } => {
                let intervals = d_max / span;
                let lo = absorption_curve(lower, intervals);
                let hi = absorption_curve(upper, intervals);
                (1..=d_max)
                    .map(|d| {
                        let k = d / span;
                        DeliveryResult {
                            delivery: Delivery::Interval {
                                lower: lo[k],
                                upper: hi[k],
                            },
                            steps_used: k,
                        }
                    })
                    .collect()
            }
        }
    }

    pub fn at(&self, d: usize) -> DeliveryResult {
        assert!(d >= 1, "delay budget must be at least one step");
        *self.curve(d).last().expect("non-empty curve")
    }
}

/// Delivery probability (exact for `alpha <= 1`, bounds otherwise) within
/// `params.d` steps.
///
/// For `alpha > 1`, only the `floor(d / ceil(alpha))` whole intervals are
/// counted; when none fits the result is the interval `(0, 0)`.
pub fn delivery_probability(params: &ScenarioParams, model: &LinkModel) -> Result<DeliveryResult> {
    params.validate()?;
    Ok(DeliveryChain::new(params.n, model, params.alpha)?.at(params.d))
}

fn initial(space: &EpidemicStateSpace) -> Vec<f64> {
    let mut dist = vec![0.0; space.len()];
    dist[space.init_row()] = 1.0;
    dist
}

fn absorbed(dist: &[f64]) -> f64 {
    dist[EpidemicStateSpace::SUCCESS_ROW].clamp(0.0, 1.0)
}

/// Absorbed mass after `0..=steps` iterations.
fn absorption_curve(matrix: &TransitionMatrix, steps: usize) -> Vec<f64> {
    let mut dist = initial(matrix.space());
    let mut out = Vec::with_capacity(steps + 1);
    out.push(absorbed(&dist));
    for _ in 0..steps {
        dist = matrix.step(&dist);
        out.push(absorbed(&dist));
    }
    out
}
