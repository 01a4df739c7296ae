use rayon::prelude::*;

use super::primitives::contamination;
use super::states::{EpidemicState, EpidemicStateSpace};
use crate::{Error, LinkModel, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    /// One step on a freshly transitioned topology.
    Dynamic,
    /// One extra hop on the same snapshot.
    Static,
    /// Lower bound for one interval of `ceil(alpha)` steps.
    LowerBound,
    /// Upper bound for one interval of `ceil(alpha)` steps.
    UpperBound,
}

/// Per-pair infection probabilities used to fill a matrix row.
///
/// `fresh` applies between a just-infected node and a susceptible one,
/// `stale` between a node infected for two steps or more and a susceptible
/// one (their link was down at the previous step).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ContactProbs {
    pub fresh: f64,
    pub stale: f64,
}

impl ContactProbs {
    pub fn dynamic(model: &LinkModel) -> Self {
        ContactProbs {
            fresh: model.pi_up(),
            stale: 1.0 - model.q_i(),
        }
    }

    /// On an unchanged snapshot no link appears, so only just-infected
    /// nodes can spread.
    pub fn static_hop(model: &LinkModel) -> Self {
        ContactProbs {
            fresh: model.pi_up(),
            stale: 0.0,
        }
    }

    /// Only links that are up at the start of an interval of `span` steps
    /// and stay up through it.
    pub fn lower_bound(model: &LinkModel, span: usize) -> Self {
        let persist = model.q_c().powi(span as i32 - 1);
        ContactProbs {
            fresh: model.pi_up() * persist,
            stale: (1.0 - model.q_i()) * persist,
        }
    }

    /// Any link that comes up during an interval of `span` steps and then
    /// lasts `span` steps counts as usable within that interval.
    pub fn upper_bound(model: &LinkModel, span: usize) -> Self {
        let persist = model.q_c().powi(span as i32 - 1);
        let appears_late = 1.0 - model.q_i().powi(span as i32 - 1);
        ContactProbs {
            fresh: (model.pi_up() + model.pi_down() * appears_late) * persist,
            stale: (1.0 - model.q_i().powi(span as i32)) * persist,
        }
    }
}

/// Sparse row-stochastic matrix over an [`EpidemicStateSpace`].
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    space: EpidemicStateSpace,
    kind: MatrixKind,
    rows: Vec<Vec<(usize, f64)>>,
}

impl TransitionMatrix {
    /// Fills every row from the pair probabilities `probs`.
    ///
    /// From `(i, j)` with `s = n - 1 - i - j` susceptible nodes, the
    /// destination is reached with `1 - (1 - fresh)^j (1 - stale)^i`;
    /// otherwise the chain moves to `(i + j, j')`, splitting the `j'` new
    /// infections into those caused by the `j` fresh nodes and those caused
    /// by the `i` stale ones among the remaining susceptibles.
    pub fn build(n: usize, kind: MatrixKind, probs: ContactProbs) -> Self {
        let space = EpidemicStateSpace::new(n);
        let rows = (0..space.len())
            .into_par_iter()
            .map(|row| match space.state(row) {
                EpidemicState::Success => vec![(EpidemicStateSpace::SUCCESS_ROW, 1.0)],
                EpidemicState::Spread { i, j } => spread_row(&space, i, j, probs),
            })
            .collect();
        TransitionMatrix { space, kind, rows }
    }

    pub fn space(&self) -> &EpidemicStateSpace {
        &self.space
    }

    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    /// Nonzero entries of `row` as `(column, probability)`.
    pub fn row(&self, row: usize) -> &[(usize, f64)] {
        &self.rows[row]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[(usize, f64)]> {
        self.rows.iter().map(Vec::as_slice)
    }

    /// Probability of moving from `from` to `to` in one step.
    pub fn get(&self, from: EpidemicState, to: EpidemicState) -> f64 {
        let (Some(r), Some(c)) = (self.space.index(from), self.space.index(to)) else {
            return 0.0;
        };
        self.rows[r]
            .iter()
            .find(|&&(col, _)| col == c)
            .map_or(0.0, |&(_, p)| p)
    }

    /// Row-vector product `dist * self`.
    pub fn step(&self, dist: &[f64]) -> Vec<f64> {
        debug_assert_eq!(dist.len(), self.rows.len());
        let mut out = vec![0.0; dist.len()];
        for (row, &mass) in self.rows.iter().zip(dist) {
            if mass == 0.0 {
                continue;
            }
            for &(col, p) in row {
                out[col] += mass * p;
            }
        }
        out
    }

    /// Largest deviation of a row sum from 1.
    pub fn max_row_defect(&self) -> f64 {
        self.rows
            .iter()
            .map(|row| (row.iter().map(|&(_, p)| p).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

fn spread_row(
    space: &EpidemicStateSpace,
    i: usize,
    j: usize,
    probs: ContactProbs,
) -> Vec<(usize, f64)> {
    let n = space.n();
    let susceptible = n - 1 - i - j;
    let miss = (1.0 - probs.fresh).powi(j as i32) * (1.0 - probs.stale).powi(i as i32);
    let mut row = Vec::with_capacity(susceptible + 2);
    if miss < 1.0 {
        row.push((EpidemicStateSpace::SUCCESS_ROW, 1.0 - miss));
    }
    let fresh: Vec<f64> = (0..=susceptible)
        .map(|m| contamination(m, probs.fresh, j, susceptible))
        .collect();
    for new in 0..=susceptible {
        let spread: f64 = (0..=new)
            .map(|m| fresh[m] * contamination(new - m, probs.stale, i, susceptible - m))
            .sum();
        let p = miss * spread;
        if p > 0.0 {
            let col = space
                .index(EpidemicState::Spread { i: i + j, j: new })
                .expect("target state lies in the space");
            row.push((col, p));
        }
    }
    row
}

pub fn build_dynamic_matrix(n: usize, model: &LinkModel) -> TransitionMatrix {
    TransitionMatrix::build(n, MatrixKind::Dynamic, ContactProbs::dynamic(model))
}

pub fn build_static_matrix(n: usize, model: &LinkModel) -> TransitionMatrix {
    TransitionMatrix::build(n, MatrixKind::Static, ContactProbs::static_hop(model))
}

/// `(lower, upper)` bound matrices for packets of size `alpha > 1`, each
/// covering one interval of `ceil(alpha)` steps.
pub fn build_bound_matrices(
    n: usize,
    model: &LinkModel,
    alpha: f64,
) -> Result<(TransitionMatrix, TransitionMatrix)> {
    match crate::PacketRegime::from_alpha(alpha)? {
        crate::PacketRegime::Spans(span) => Ok(bound_matrices_for_span(n, model, span)),
        crate::PacketRegime::Hops(_) => Err(Error::domain(
            "alpha",
            format!("bound matrices need alpha > 1, got {alpha}"),
        )),
    }
}

pub(crate) fn bound_matrices_for_span(
    n: usize,
    model: &LinkModel,
    span: usize,
) -> (TransitionMatrix, TransitionMatrix) {
    (
        TransitionMatrix::build(
            n,
            MatrixKind::LowerBound,
            ContactProbs::lower_bound(model, span),
        ),
        TransitionMatrix::build(
            n,
            MatrixKind::UpperBound,
            ContactProbs::upper_bound(model, span),
        ),
    )
}
