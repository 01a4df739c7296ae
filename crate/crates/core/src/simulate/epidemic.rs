use super::graph::{Edge, TemporalGraph};
use crate::{Error, PacketRegime, Result};

/// Outcome of one epidemic dissemination from `source` towards
/// `destination`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpidemicRun {
    pub source: usize,
    pub destination: usize,
    pub delivered: bool,
    /// Step (1-based) at which the destination received its copy.
    pub delivery_step: Option<usize>,
    /// First-infection step per node; `Some(0)` for the source. The run stops
    /// at the step the destination is reached.
    pub infected_at: Vec<Option<usize>>,
}

/// Runs epidemic routing over the first `d` snapshots of `graph`.
pub fn epidemic_run(
    graph: &TemporalGraph,
    source: usize,
    destination: usize,
    alpha: f64,
    d: usize,
) -> Result<EpidemicRun> {
    epidemic_run_from(graph, 0, source, destination, alpha, d)
}

/// Runs epidemic routing over snapshots `start..start + d`.
///
/// Step `k` (1-based) uses snapshot `start + k - 1`. Nodes infected before
/// step `k` are the ones that forward during it:
///
/// - `alpha <= 1`: the infected set grows by `floor(1/alpha)` hops of
///   breadth-first reachability in the snapshot, every reached node becoming
///   a relay for the following hops;
/// - `alpha > 1`: a transfer from an infected node to a susceptible
///   neighbor completes once their link has been up for `ceil(alpha)`
///   consecutive steps. Progress is lost when the link goes down.
pub fn epidemic_run_from(
    graph: &TemporalGraph,
    start: usize,
    source: usize,
    destination: usize,
    alpha: f64,
    d: usize,
) -> Result<EpidemicRun> {
    let n = graph.n();
    if source >= n || destination >= n {
        return Err(Error::domain(
            "node",
            format!("node id out of range for n = {n}"),
        ));
    }
    if source == destination {
        return Err(Error::domain(
            "destination",
            "source and destination must differ",
        ));
    }
    if start + d > graph.steps() {
        return Err(Error::ScheduleOutOfRange {
            start,
            d,
            steps: graph.steps(),
        });
    }
    let regime = PacketRegime::from_alpha(alpha)?;
    let snapshots = &graph.snapshots()[start..start + d];
    let mut spread = Spread::new(n, source, destination);
    match regime {
        PacketRegime::Hops(hops) => spread.run_hops(snapshots, hops),
        PacketRegime::Spans(span) => spread.run_spans(snapshots, span),
    }
    Ok(spread.finish())
}

struct Spread {
    n: usize,
    source: usize,
    destination: usize,
    infected_at: Vec<Option<usize>>,
}

impl Spread {
    fn new(n: usize, source: usize, destination: usize) -> Self {
        let mut infected_at = vec![None; n];
        infected_at[source] = Some(0);
        Spread {
            n,
            source,
            destination,
            infected_at,
        }
    }

    fn delivered(&self) -> bool {
        self.infected_at[self.destination].is_some()
    }

    fn run_hops(&mut self, snapshots: &[Vec<Edge>], hops: usize) {
        let mut adjacency = vec![Vec::new(); self.n];
        for (k, edges) in (1..).zip(snapshots) {
            adjacency.iter_mut().for_each(Vec::clear);
            for &(u, v) in edges {
                adjacency[u].push(v);
                adjacency[v].push(u);
            }
            let mut frontier: Vec<usize> = (0..self.n)
                .filter(|&u| self.infected_at[u].is_some())
                .collect();
            for _ in 0..hops {
                let mut next = Vec::new();
                for &u in &frontier {
                    for &v in &adjacency[u] {
                        if self.infected_at[v].is_none() {
                            self.infected_at[v] = Some(k);
                            next.push(v);
                        }
                    }
                }
                if next.is_empty() || self.delivered() {
                    break;
                }
                frontier = next;
            }
            if self.delivered() {
                return;
            }
        }
    }

    fn run_spans(&mut self, snapshots: &[Vec<Edge>], span: usize) {
        let n = self.n;
        let mut up = vec![false; n * n];
        // consecutive up steps of a link between a forwarding node and a
        // susceptible one, indexed by the ordered pair (min, max)
        let mut progress = vec![0usize; n * n];
        for (k, edges) in (1..).zip(snapshots) {
            for &(u, v) in edges {
                up[u * n + v] = true;
            }
            let mut newly = Vec::new();
            for u in 0..n {
                if !matches!(self.infected_at[u], Some(t) if t < k) {
                    continue;
                }
                for v in 0..n {
                    if self.infected_at[v].is_some() {
                        continue;
                    }
                    let idx = u.min(v) * n + u.max(v);
                    if up[idx] {
                        progress[idx] += 1;
                        if progress[idx] >= span {
                            newly.push(v);
                        }
                    } else {
                        progress[idx] = 0;
                    }
                }
            }
            for v in newly {
                self.infected_at[v] = Some(k);
            }
            for &(u, v) in edges {
                up[u * n + v] = false;
            }
            if self.delivered() {
                return;
            }
        }
    }

    fn finish(self) -> EpidemicRun {
        let delivery_step = self.infected_at[self.destination];
        EpidemicRun {
            source: self.source,
            destination: self.destination,
            delivered: delivery_step.is_some(),
            delivery_step,
            infected_at: self.infected_at,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::generate_graph;
    use crate::LinkModel;
    use proptest::prelude::*;

    fn complete(n: usize) -> Vec<Edge> {
        (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect()
    }

    #[test]
    fn complete_graph_delivers_at_once() {
        let g = TemporalGraph::constant(6, 1.0, complete(6), 4).unwrap();
        let run = epidemic_run(&g, 0, 1, 1.0, 4).unwrap();
        assert!(run.delivered);
        assert_eq!(run.delivery_step, Some(1));
        assert_eq!(run.infected_at[0], Some(0));
    }

    #[test]
    fn empty_graph_never_delivers() {
        let g = TemporalGraph::constant(5, 1.0, vec![], 10).unwrap();
        for alpha in [0.25, 1.0, 3.0] {
            for d in 1..=10 {
                assert!(!epidemic_run(&g, 0, 1, alpha, d).unwrap().delivered);
            }
        }
    }

    #[test]
    fn two_hops_per_step_on_a_path() {
        // 0 - 2 - 1
        let g = TemporalGraph::constant(3, 1.0, vec![(0, 2), (1, 2)], 3).unwrap();
        let run = epidemic_run(&g, 0, 1, 0.5, 1).unwrap();
        assert_eq!(run.delivery_step, Some(1));
        assert_eq!(run.infected_at[2], Some(1));
        let unit = epidemic_run(&g, 0, 1, 1.0, 3).unwrap();
        assert_eq!(unit.delivery_step, Some(2));
        assert!(!epidemic_run(&g, 0, 1, 1.0, 1).unwrap().delivered);
    }

    #[test]
    fn large_packets_need_long_contacts() {
        // link up for two steps, down, then up for three
        let snaps = vec![
            vec![(0, 1)],
            vec![(0, 1)],
            vec![],
            vec![(0, 1)],
            vec![(0, 1)],
            vec![(0, 1)],
        ];
        let g = TemporalGraph::new(2, 1.0, snaps).unwrap();
        assert_eq!(
            epidemic_run(&g, 0, 1, 2.0, 6).unwrap().delivery_step,
            Some(2)
        );
        // progress is lost at step 3; the second contact completes at step 6
        assert_eq!(
            epidemic_run(&g, 0, 1, 3.0, 6).unwrap().delivery_step,
            Some(6)
        );
        assert!(!epidemic_run(&g, 0, 1, 3.0, 5).unwrap().delivered);
        assert!(!epidemic_run(&g, 0, 1, 4.0, 6).unwrap().delivered);
    }

    #[test]
    fn relays_forward_from_the_next_step() {
        // 0 - 2 - 1 during steps 1 and 2; relay 2 gets the packet at step 2
        // and only starts its own transfer at step 3
        let snaps = vec![vec![(0, 2), (1, 2)]; 5];
        let g = TemporalGraph::new(3, 1.0, snaps).unwrap();
        let run = epidemic_run(&g, 0, 1, 2.0, 5).unwrap();
        assert_eq!(run.infected_at[2], Some(2));
        assert_eq!(run.delivery_step, Some(4));
    }

    #[test]
    fn windowed_run() {
        let snaps = vec![vec![], vec![], vec![(0, 1)]];
        let g = TemporalGraph::new(2, 1.0, snaps).unwrap();
        assert!(!epidemic_run(&g, 0, 1, 1.0, 2).unwrap().delivered);
        assert_eq!(
            epidemic_run_from(&g, 1, 0, 1, 1.0, 2)
                .unwrap()
                .delivery_step,
            Some(2)
        );
        assert!(matches!(
            epidemic_run_from(&g, 2, 0, 1, 1.0, 2),
            Err(Error::ScheduleOutOfRange { .. })
        ));
    }

    #[test]
    fn rejects_bad_endpoints() {
        let g = TemporalGraph::constant(3, 1.0, vec![], 2).unwrap();
        assert!(epidemic_run(&g, 0, 0, 1.0, 1).is_err());
        assert!(epidemic_run(&g, 0, 3, 1.0, 1).is_err());
        assert!(epidemic_run(&g, 0, 1, 0.0, 1).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn run_invariants(seed in any::<u64>(), n in 2usize..12, r in 1.0f64..4.0, k in 1.0f64..30.0,
                          alpha in prop::sample::select(vec![0.25, 0.5, 1.0, 1.5, 2.0, 3.0])) {
            let m = LinkModel::new(r, k / r).unwrap();
            let d = 12;
            let g = generate_graph(n, &m, d, 1.0, seed).unwrap();
            let run = epidemic_run(&g, 0, 1, alpha, d).unwrap();
            prop_assert_eq!(run.infected_at[0], Some(0));
            prop_assert_eq!(run.delivered, run.delivery_step.is_some());
            prop_assert_eq!(&run, &epidemic_run(&g, 0, 1, alpha, d).unwrap());
            // infections never exceed the horizon, and delivery is monotone in d
            prop_assert!(run.infected_at.iter().flatten().all(|&t| t <= d));
            let mut delivered = false;
            for dd in 1..=d {
                let now = epidemic_run(&g, 0, 1, alpha, dd).unwrap();
                prop_assert!(!delivered || now.delivered);
                delivered = now.delivered;
                // a shorter horizon sees a prefix of the same epidemic
                for (a, b) in now.infected_at.iter().zip(&run.infected_at) {
                    if let Some(t) = a {
                        prop_assert_eq!(Some(*t), *b);
                    }
                }
            }
            prop_assert_eq!(delivered, run.delivered);
        }

        #[test]
        fn unit_packet_is_single_hop(seed in any::<u64>(), n in 2usize..10) {
            let m = LinkModel::new(2.0, 3.0).unwrap();
            let g = generate_graph(n, &m, 10, 1.0, seed).unwrap();
            let a = epidemic_run(&g, 0, 1, 1.0, 10).unwrap();
            let b = epidemic_run(&g, 0, 1, 0.9, 10).unwrap();
            prop_assert_eq!(a, b);
        }
    }
}
