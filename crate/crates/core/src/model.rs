//! Per-link two-state Markov chain and scenario parameters.
//!
//! Every link between two of the `n` nodes is independently either up or
//! down, and at each step it keeps its state with probability `q_c` (up) or
//! `q_i` (down). The chain is parameterized by the mean lifetime `r` of a
//! contact, in steps, and by `lambda`, the ratio of mean down-time to mean
//! up-time:
//!
//! ```text
//! r = 1 / (1 - q_c)        lambda = (1 - q_c) / (1 - q_i)
//! pi_up = 1 / (1 + lambda) pi_down = lambda / (1 + lambda)
//! ```

use crate::{Error, Result};

/// Slack used when comparing `lambda * r` against 1 and when mapping packet
/// sizes to hop counts, so that e.g. `alpha = 1/3` yields three hops.
const EPS: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkModel {
    r: f64,
    lambda: f64,
    q_c: f64,
    q_i: f64,
    pi_up: f64,
    pi_down: f64,
}

impl LinkModel {
    /// Builds the chain from its mean contact length `r` (steps) and the
    /// down/up time ratio `lambda`.
    ///
    /// Requires `r >= 1` and `lambda >= 1/r`; a link cannot stay in a state
    /// for less than one step.
    pub fn new(r: f64, lambda: f64) -> Result<Self> {
        if !r.is_finite() || r < 1.0 {
            return Err(Error::domain(
                "r",
                format!("r must satisfy r >= 1, got {r}"),
            ));
        }
        if !lambda.is_finite() || lambda * r < 1.0 - EPS {
            return Err(Error::domain(
                "lambda",
                format!(
                    "lambda must satisfy lambda >= 1/r = {}, got {lambda}",
                    1.0 / r
                ),
            ));
        }
        let q_c = 1.0 - 1.0 / r;
        let q_i = (1.0 - 1.0 / (lambda * r)).max(0.0);
        Ok(LinkModel {
            r,
            lambda,
            q_c,
            q_i,
            pi_up: 1.0 / (1.0 + lambda),
            pi_down: lambda / (1.0 + lambda),
        })
    }

    /// Builds the chain from its persistence probabilities.
    pub fn from_persistence(q_c: f64, q_i: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&q_c) {
            return Err(Error::domain(
                "q_c",
                format!("must lie in [0, 1), got {q_c}"),
            ));
        }
        if !(0.0..1.0).contains(&q_i) {
            return Err(Error::domain(
                "q_i",
                format!("must lie in [0, 1), got {q_i}"),
            ));
        }
        Self::new(1.0 / (1.0 - q_c), (1.0 - q_c) / (1.0 - q_i))
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Probability that an up link is still up at the next step.
    pub fn q_c(&self) -> f64 {
        self.q_c
    }

    /// Probability that a down link is still down at the next step.
    pub fn q_i(&self) -> f64 {
        self.q_i
    }

    pub fn pi_up(&self) -> f64 {
        self.pi_up
    }

    pub fn pi_down(&self) -> f64 {
        self.pi_down
    }

    /// True when a state is left at every step (`q_c == 0` or `q_i == 0`).
    /// The chain is then periodic in that state; absorption probabilities
    /// stay well defined but the chain is no longer ergodic.
    pub fn is_degenerate(&self) -> bool {
        self.q_c == 0.0 || self.q_i == 0.0
    }

    /// Mean contact and inter-contact durations in seconds, `(r tau, lambda r tau)`.
    pub fn expected_durations(&self, tau: f64) -> (f64, f64) {
        (self.r * tau, self.lambda * self.r * tau)
    }

    /// Mean node degree in a network of `n` nodes.
    pub fn mean_degree(&self, n: usize) -> f64 {
        (n as f64 - 1.0) / (1.0 + self.lambda)
    }
}

/// How a packet of size `alpha` (in link capacities) uses the links.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PacketRegime {
    /// `alpha <= 1`: up to `hops = floor(1/alpha)` hops per step. `hops == 1`
    /// is the unit packet.
    Hops(usize),
    /// `alpha > 1`: a transfer needs the link up for `steps = ceil(alpha)`
    /// consecutive steps.
    Spans(usize),
}

impl PacketRegime {
    pub fn from_alpha(alpha: f64) -> Result<Self> {
        if !alpha.is_finite() || alpha <= 0.0 {
            return Err(Error::domain(
                "alpha",
                format!("alpha must be > 0, got {alpha}"),
            ));
        }
        if alpha <= 1.0 + EPS {
            Ok(PacketRegime::Hops((1.0 / alpha + EPS).floor() as usize))
        } else {
            Ok(PacketRegime::Spans((alpha - EPS).ceil() as usize))
        }
    }
}

/// Network size, step duration, packet size and delay budget of a scenario.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScenarioParams {
    pub n: usize,
    /// Step duration in seconds.
    pub tau: f64,
    /// Packet size as a multiple of the link capacity.
    pub alpha: f64,
    /// Maximum delay in steps.
    pub d: usize,
}

impl ScenarioParams {
    pub fn new(n: usize, tau: f64, alpha: f64, d: usize) -> Result<Self> {
        let params = ScenarioParams { n, tau, alpha, d };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::domain(
                "n",
                format!("n must be >= 2, got {}", self.n),
            ));
        }
        if !self.tau.is_finite() || self.tau <= 0.0 {
            return Err(Error::domain(
                "tau",
                format!("tau must be > 0, got {}", self.tau),
            ));
        }
        if self.d < 1 {
            return Err(Error::domain("d", "d must be >= 1"));
        }
        PacketRegime::from_alpha(self.alpha).map(|_| ())
    }

    pub fn regime(&self) -> Result<PacketRegime> {
        PacketRegime::from_alpha(self.alpha)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn figure_two_operating_point() {
        let m = LinkModel::new(2.0, 10.0).unwrap();
        assert_relative_eq!(m.q_c(), 0.5);
        assert_relative_eq!(m.q_i(), 0.95, epsilon = 1e-15);
        assert_relative_eq!(m.pi_up(), 1.0 / 11.0);
        assert_relative_eq!(m.pi_down(), 10.0 / 11.0);
        assert!(!m.is_degenerate());
    }

    #[test]
    fn alternating_link_is_degenerate() {
        let m = LinkModel::new(1.0, 1.0).unwrap();
        assert_eq!(m.q_c(), 0.0);
        assert_eq!(m.q_i(), 0.0);
        assert_eq!(m.pi_up(), 0.5);
        assert!(m.is_degenerate());
    }

    #[test]
    fn rejects_out_of_domain() {
        assert!(matches!(
            LinkModel::new(2.0, 0.4),
            Err(Error::Domain { name: "lambda", .. })
        ));
        assert!(matches!(
            LinkModel::new(0.5, 10.0),
            Err(Error::Domain { name: "r", .. })
        ));
        assert!(LinkModel::new(f64::NAN, 1.0).is_err());
        // lambda = 1/r is the floor, accepted with q_i = 0
        let m = LinkModel::new(2.0, 0.5).unwrap();
        assert_eq!(m.q_i(), 0.0);
        assert!(m.is_degenerate());
    }

    #[test]
    fn durations_and_degree() {
        let m = LinkModel::new(2.0, 10.0).unwrap();
        let (c, i) = m.expected_durations(15.0);
        assert_relative_eq!(c, 30.0);
        assert_relative_eq!(i, 300.0);
        assert_eq!(
            LinkModel::new(1.0, 1.0).unwrap().expected_durations(1.0),
            (1.0, 1.0)
        );
        // the mean lifetime reported for the rollerblading trace, 26.2 s at
        // tau = 15 s, corresponds to r = 1.747 steps
        let (c, _) = LinkModel::new(1.747, 10.0)
            .unwrap()
            .expected_durations(15.0);
        assert_relative_eq!(c, 26.2, epsilon = 0.01);

        assert_relative_eq!(m.mean_degree(20), 19.0 / 11.0);
        assert_relative_eq!(LinkModel::new(1.0, 1.0).unwrap().mean_degree(2), 0.5);
        assert_relative_eq!(LinkModel::new(2.0, 19.0).unwrap().mean_degree(20), 0.95);
    }

    #[test]
    fn packet_regimes() {
        assert_eq!(
            PacketRegime::from_alpha(1.0).unwrap(),
            PacketRegime::Hops(1)
        );
        assert_eq!(
            PacketRegime::from_alpha(0.5).unwrap(),
            PacketRegime::Hops(2)
        );
        assert_eq!(
            PacketRegime::from_alpha(1.0 / 3.0).unwrap(),
            PacketRegime::Hops(3)
        );
        assert_eq!(
            PacketRegime::from_alpha(0.4).unwrap(),
            PacketRegime::Hops(2)
        );
        assert_eq!(
            PacketRegime::from_alpha(0.125).unwrap(),
            PacketRegime::Hops(8)
        );
        assert_eq!(
            PacketRegime::from_alpha(2.0).unwrap(),
            PacketRegime::Spans(2)
        );
        assert_eq!(
            PacketRegime::from_alpha(1.5).unwrap(),
            PacketRegime::Spans(2)
        );
        assert_eq!(
            PacketRegime::from_alpha(3.0).unwrap(),
            PacketRegime::Spans(3)
        );
        assert!(PacketRegime::from_alpha(0.0).is_err());
        assert!(PacketRegime::from_alpha(-1.0).is_err());
    }

    #[test]
    fn scenario_validation() {
        assert!(ScenarioParams::new(20, 15.0, 1.0, 5).is_ok());
        assert!(ScenarioParams::new(1, 15.0, 1.0, 5).is_err());
        assert!(ScenarioParams::new(20, 0.0, 1.0, 5).is_err());
        assert!(ScenarioParams::new(20, 15.0, 0.0, 5).is_err());
        assert!(ScenarioParams::new(20, 15.0, 1.0, 0).is_err());
    }

    proptest! {
        #[test]
        fn parameters_round_trip(r in 1.0f64..50.0, k in 1.0f64..100.0) {
            let lambda = k / r;
            let m = LinkModel::new(r, lambda).unwrap();
            prop_assume!(m.q_i() > 0.0);
            let r_back = 1.0 / (1.0 - m.q_c());
            let lambda_back = (1.0 - m.q_c()) / (1.0 - m.q_i());
            prop_assert!(((r_back - r) / r).abs() < 1e-12);
            prop_assert!(((lambda_back - lambda) / lambda).abs() < 1e-12);
        }

        #[test]
        fn stationary_balance(r in 1.0f64..50.0, k in 1.0f64..100.0) {
            let m = LinkModel::new(r, k / r).unwrap();
            prop_assert!((m.pi_up() + m.pi_down() - 1.0).abs() < 1e-12);
            let flow_out = m.pi_up() * (1.0 - m.q_c());
            let flow_in = m.pi_down() * (1.0 - m.q_i());
            prop_assert!((flow_out - flow_in).abs() < 1e-12);
        }
    }
}
