//! Delivery ratio of epidemic routing in intermittently connected mobile
//! networks, as a function of packet size and maximum tolerated delay.
//!
//! Links follow independent two-state Markov chains ([`model::LinkModel`]).
//! On top of that model the crate offers:
//!
//! - [`analytic`]: the absorbing epidemic chain over infection counts, giving
//!   exact delivery probabilities for packets no larger than the link
//!   capacity and lower/upper bounds for larger packets;
//! - [`simulate`]: a seeded generator of Markovian temporal graphs and an
//!   epidemic simulator, used as an independent Monte Carlo oracle;
//! - [`trace`]: ingestion, discretization and statistics of real contact
//!   traces, plus the trace-replay delivery experiment.
//!
//! Units: time is counted in steps of `tau` seconds, and one link carries
//! exactly one packet-unit per step. A packet of size `alpha` therefore needs
//! `ceil(alpha)` consecutive steps of a link when `alpha > 1`, and may make
//! `floor(1 / alpha)` hops per step when `alpha <= 1`.

pub mod analytic;
mod error;
pub mod model;
pub mod simulate;
pub mod trace;

pub use error::{Error, Result};
pub use model::{LinkModel, PacketRegime, ScenarioParams};
