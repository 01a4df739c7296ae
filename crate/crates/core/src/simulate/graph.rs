use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, LinkModel, Result};

/// Undirected edge stored with the smaller endpoint first.
pub type Edge = (usize, usize);

/// Sequence of connectivity snapshots over `n` nodes, one per step of `tau`
/// seconds. The topology changes only at step boundaries.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalGraph {
    n: usize,
    tau: f64,
    snapshots: Vec<Vec<Edge>>,
}

impl TemporalGraph {
    /// Edges are canonicalized (`u < v`), sorted and deduplicated per step.
    pub fn new(n: usize, tau: f64, snapshots: Vec<Vec<Edge>>) -> Result<Self> {
        if snapshots.is_empty() {
            return Err(Error::domain(
                "steps",
                "a temporal graph needs at least one step",
            ));
        }
        if !tau.is_finite() || tau <= 0.0 {
            return Err(Error::domain("tau", format!("tau must be > 0, got {tau}")));
        }
        let mut snapshots = snapshots;
        for edges in &mut snapshots {
            for e in edges.iter_mut() {
                let (u, v) = *e;
                if u == v || u >= n || v >= n {
                    return Err(Error::domain(
                        "edge",
                        format!("invalid edge ({u}, {v}) for n = {n}"),
                    ));
                }
                *e = (u.min(v), u.max(v));
            }
            edges.sort_unstable();
            edges.dedup();
        }
        Ok(TemporalGraph { n, tau, snapshots })
    }

    /// The same edge set at every one of `steps` steps.
    pub fn constant(n: usize, tau: f64, edges: Vec<Edge>, steps: usize) -> Result<Self> {
        Self::new(n, tau, vec![edges; steps])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn steps(&self) -> usize {
        self.snapshots.len()
    }

    pub fn edges(&self, step: usize) -> &[Edge] {
        &self.snapshots[step]
    }

    pub(crate) fn snapshots(&self) -> &[Vec<Edge>] {
        &self.snapshots
    }

    /// Nodes that have at least one edge at some step, in increasing order.
    pub fn active_nodes(&self) -> Vec<usize> {
        let mut seen = vec![false; self.n];
        for &(u, v) in self.snapshots.iter().flatten() {
            seen[u] = true;
            seen[v] = true;
        }
        (0..self.n).filter(|&u| seen[u]).collect()
    }

    /// Writes the graph as an event trace (`t,a,b,up|down`), node `k` being
    /// labelled `k`. Every contact still open after the last step is closed
    /// at `steps * tau`.
    pub fn write_event_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let empty = Vec::new();
        let mut prev: &Vec<Edge> = &empty;
        for (k, edges) in self.snapshots.iter().enumerate() {
            let t = k as f64 * self.tau;
            write_changes(&mut out, t, prev, edges)?;
            prev = edges;
        }
        write_changes(&mut out, self.steps() as f64 * self.tau, prev, &empty)
    }
}

/// Emits `down` for edges of `prev` missing from `next`, then `up` for the
/// new ones. Both slices are sorted.
fn write_changes<W: Write>(out: &mut W, t: f64, prev: &[Edge], next: &[Edge]) -> io::Result<()> {
    for e in prev.iter().filter(|e| next.binary_search(e).is_err()) {
        writeln!(out, "{t},{},{},down", e.0, e.1)?;
    }
    for e in next.iter().filter(|e| prev.binary_search(e).is_err()) {
        writeln!(out, "{t},{},{},up", e.0, e.1)?;
    }
    Ok(())
}

/// Samples a Markovian temporal graph: each of the `n (n - 1) / 2` links
/// starts in its stationary state and then evolves independently.
pub fn generate_graph(
    n: usize,
    model: &LinkModel,
    steps: usize,
    tau: f64,
    seed: u64,
) -> Result<TemporalGraph> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    generate_graph_with(n, model, steps, tau, &mut rng)
}

pub(crate) fn generate_graph_with<R: Rng>(
    n: usize,
    model: &LinkModel,
    steps: usize,
    tau: f64,
    rng: &mut R,
) -> Result<TemporalGraph> {
    if n < 2 {
        return Err(Error::domain("n", format!("n must be >= 2, got {n}")));
    }
    if steps < 1 {
        return Err(Error::domain("steps", "at least one step is required"));
    }
    if !tau.is_finite() || tau <= 0.0 {
        return Err(Error::domain("tau", format!("tau must be > 0, got {tau}")));
    }
    let pairs: Vec<Edge> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect();
    let mut up: Vec<bool> = pairs
        .iter()
        .map(|_| rng.random_bool(model.pi_up()))
        .collect();
    let mut snapshots = Vec::with_capacity(steps);
    for k in 0..steps {
        if k > 0 {
            for state in &mut up {
                let stay = if *state { model.q_c() } else { model.q_i() };
                if !rng.random_bool(stay) {
                    *state = !*state;
                }
            }
        }
        snapshots.push(
            pairs
                .iter()
                .zip(&up)
                .filter_map(|(&e, &is_up)| is_up.then_some(e))
                .collect(),
        );
    }
    Ok(TemporalGraph { n, tau, snapshots })
}
