mod common;

use common::exact_delivery;
use icmn_core::analytic::{delivery_probability, DeliveryChain};
use icmn_core::{LinkModel, PacketRegime, ScenarioParams};

fn analytic(n: usize, m: &LinkModel, alpha: f64, d: usize) -> f64 {
    let p = ScenarioParams::new(n, 1.0, alpha, d).unwrap();
    delivery_probability(&p, m).unwrap().value().unwrap()
}

#[test]
fn chain_matches_joint_enumeration() {
    for &(r, l) in &[(2.0, 4.0), (2.0, 10.0), (1.0, 1.0), (3.5, 0.5), (1.2, 7.0)] {
        let m = LinkModel::new(r, l).unwrap();
        for n in 2..=4 {
            for hops in 1..=3 {
                for d in 1..=6 {
                    let exact = exact_delivery(n, &m, PacketRegime::Hops(hops), d);
                    let chain = analytic(n, &m, 1.0 / hops as f64, d);
                    assert!(
                        (exact - chain).abs() < 1e-9,
                        "n={n} r={r} lambda={l} hops={hops} d={d}: {exact} vs {chain}"
                    );
                }
            }
        }
    }
}

#[test]
fn two_node_closed_form() {
    for &(r, l) in &[
        (1.0, 1.0),
        (1.0, 4.0),
        (2.0, 1.0),
        (2.0, 10.0),
        (5.0, 4.0),
        (7.5, 0.2),
    ] {
        let m = LinkModel::new(r, l).unwrap();
        let curve = DeliveryChain::new(2, &m, 1.0).unwrap().curve(100);
        for (k, res) in curve.iter().enumerate() {
            let closed = 1.0 - m.pi_down() * m.q_i().powi(k as i32);
            assert!((res.value().unwrap() - closed).abs() < 1e-12);
        }
    }
}

/// The interval bounds are not proven to contain the true large-packet
/// process (transfers may straddle interval boundaries); on tiny networks
/// the exact process can be checked against them.
#[test]
fn large_packet_bounds_against_enumeration() {
    let mut violations = Vec::new();
    for &(r, l) in &[(2.0, 4.0), (2.0, 10.0), (4.0, 2.0), (1.5, 3.0)] {
        let m = LinkModel::new(r, l).unwrap();
        for n in [3, 4] {
            for span in [2usize, 3] {
                let chain = DeliveryChain::new(n, &m, span as f64).unwrap();
                for d in (span..=8).step_by(span) {
                    let exact = exact_delivery(n, &m, PacketRegime::Spans(span), d);
                    let b = chain.at(d);
                    if exact < b.lower() - 1e-12 || exact > b.upper() + 1e-12 {
                        violations.push(format!(
                            "n={n} r={r} lambda={l} a={span} d={d}: exact {exact:.6} bounds [{:.6}, {:.6}]",
                            b.lower(),
                            b.upper()
                        ));
                    }
                }
            }
        }
    }
    assert!(violations.is_empty(), "{violations:#?}");
}
