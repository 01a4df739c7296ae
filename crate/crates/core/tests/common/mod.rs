//! Independent oracles shared by the integration suites.
//!
//! `exact_delivery` enumerates the full joint process: every link
//! configuration of a small network together with the set of infected
//! nodes (and, for large packets, per-link transfer progress). It shares no
//! code with the crate's chain or simulator.

#![allow(dead_code)]

use std::collections::HashMap;

use icmn_core::{LinkModel, PacketRegime};

fn links(n: usize) -> Vec<(usize, usize)> {
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .collect()
}

/// Probability that node 1 receives a packet from node 0 within `d` steps.
///
/// Step 1 sees a stationary link configuration; every following step
/// applies one transition of each link chain. Node 1 is absorbing.
pub fn exact_delivery(n: usize, model: &LinkModel, regime: PacketRegime, d: usize) -> f64 {
    assert!(
        (2..=5).contains(&n),
        "enumeration is only tractable for tiny networks"
    );
    let links = links(n);
    let configs = 1u32 << links.len();
    let (p_up, q_c, q_i) = (model.pi_up(), model.q_c(), model.q_i());

    let stationary: Vec<f64> = (0..configs)
        .map(|c| {
            (0..links.len())
                .map(|l| if c >> l & 1 == 1 { p_up } else { 1.0 - p_up })
                .product()
        })
        .collect();
    let transition = |from: u32, to: u32| -> f64 {
        (0..links.len())
            .map(|l| match (from >> l & 1, to >> l & 1) {
                (1, 1) => q_c,
                (1, 0) => 1.0 - q_c,
                (0, 0) => q_i,
                _ => 1.0 - q_i,
            })
            .product()
    };
    let adjacent = |c: u32, u: usize, v: usize| -> bool {
        let l = links
            .iter()
            .position(|&e| e == (u.min(v), u.max(v)))
            .unwrap();
        c >> l & 1 == 1
    };

    // one step of spreading on configuration `c`
    let spread = |c: u32, infected: u32, progress: &[u8]| -> (u32, Vec<u8>) {
        match regime {
            PacketRegime::Hops(h) => {
                let mut inf = infected;
                let mut frontier = infected;
                for _ in 0..h {
                    let mut new = 0u32;
                    for u in 0..n {
                        if frontier >> u & 1 == 0 {
                            continue;
                        }
                        for v in 0..n {
                            if u != v && inf >> v & 1 == 0 && adjacent(c, u, v) {
                                new |= 1 << v;
                            }
                        }
                    }
                    inf |= new;
                    frontier = new;
                }
                (inf, Vec::new())
            }
            PacketRegime::Spans(a) => {
                let mut next = vec![0u8; links.len()];
                let mut new = 0u32;
                for (l, &(u, v)) in links.iter().enumerate() {
                    let (iu, iv) = (infected >> u & 1, infected >> v & 1);
                    if iu == iv {
                        continue;
                    }
                    if c >> l & 1 == 1 {
                        next[l] = progress[l] + 1;
                        if next[l] as usize >= a {
                            new |= 1 << if iu == 1 { v } else { u };
                        }
                    }
                }
                let inf = infected | new;
                // progress only matters for infected/susceptible pairs
                for (l, &(u, v)) in links.iter().enumerate() {
                    if (inf >> u & 1) == (inf >> v & 1) {
                        next[l] = 0;
                    }
                }
                (inf, next)
            }
        }
    };

    let empty = match regime {
        PacketRegime::Hops(_) => Vec::new(),
        PacketRegime::Spans(_) => vec![0u8; links.len()],
    };
    let mut success = 0.0;
    let mut dist: HashMap<(u32, u32, Vec<u8>), f64> = HashMap::new();
    for c in 0..configs {
        let (inf, prog) = spread(c, 1, &empty);
        if inf & 2 != 0 {
            success += stationary[c as usize];
        } else {
            *dist.entry((c, inf, prog)).or_default() += stationary[c as usize];
        }
    }
    for _ in 1..d {
        let mut next: HashMap<(u32, u32, Vec<u8>), f64> = HashMap::new();
        for ((c, inf, prog), mass) in dist {
            for c2 in 0..configs {
                let p = mass * transition(c, c2);
                if p == 0.0 {
                    continue;
                }
                let (inf2, prog2) = spread(c2, inf, &prog);
                if inf2 & 2 != 0 {
                    success += p;
                } else {
                    *next.entry((c2, inf2, prog2)).or_default() += p;
                }
            }
        }
        dist = next;
    }
    success
}
