use std::fmt;

/// A state of the epidemic chain.
///
/// `Spread { i, j }` counts the non-destination nodes infected for at least
/// two steps (`i`) and those infected at the last step (`j`). Node identities
/// are not tracked. The initial state, where only the source holds the
/// packet, is `Spread { i: 0, j: 1 }`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EpidemicState {
    /// The destination holds a copy. Absorbing.
    Success,
    Spread {
        i: usize,
        j: usize,
    },
}

impl EpidemicState {
    pub const INIT: EpidemicState = EpidemicState::Spread { i: 0, j: 1 };
}

impl fmt::Display for EpidemicState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EpidemicState::Success => f.write_str("Succ"),
            EpidemicState::Spread { i, j } => write!(f, "({i},{j})"),
        }
    }
}

/// Ordered enumeration of the states for `n` nodes.
///
/// Row 0 is `Success`; rows `1..` are the pairs `(i, j)` with
/// `1 <= i + j <= n - 1`, ordered by `i` then `j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EpidemicStateSpace {
    n: usize,
    states: Vec<EpidemicState>,
    /// `lookup[i * n + j]` is the row of `(i, j)`, or `usize::MAX` when the
    /// pair is not a state.
    lookup: Vec<usize>,
}

impl EpidemicStateSpace {
    pub const SUCCESS_ROW: usize = 0;

    /// Panics if `n < 2`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 2, "epidemic state space needs at least two nodes");
        let mut states = vec![EpidemicState::Success];
        let mut lookup = vec![usize::MAX; n * n];
        for i in 0..n {
            for j in 0..n - i {
                if i + j == 0 {
                    continue;
                }
                lookup[i * n + j] = states.len();
                states.push(EpidemicState::Spread { i, j });
            }
        }
        EpidemicStateSpace { n, states, lookup }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[EpidemicState] {
        &self.states
    }

    pub fn state(&self, row: usize) -> EpidemicState {
        self.states[row]
    }

    pub fn index(&self, state: EpidemicState) -> Option<usize> {
        match state {
            EpidemicState::Success => Some(Self::SUCCESS_ROW),
            EpidemicState::Spread { i, j } => {
                if i >= self.n || j >= self.n {
                    return None;
                }
                let row = self.lookup[i * self.n + j];
                (row != usize::MAX).then_some(row)
            }
        }
    }

    pub fn init_row(&self) -> usize {
        self.lookup[1]
    }
}
