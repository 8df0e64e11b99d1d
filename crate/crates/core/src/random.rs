//! Seeded random instances for property suites and reproducible experiments.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::net::{validate_network, Network, NodeId, RawEdge};
use crate::online::{Request, Trace};
use crate::paths::enumerate_paths;
use crate::plan::Contract;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NetworkShape {
    pub max_nodes: usize,
    pub max_edges: usize,
    pub max_capacity: u64,
}

/// Between 2 and `max_nodes` nodes named `n0..`, and between 1 and
/// `max_edges` distinct directed edges.
pub fn random_network<R: Rng>(rng: &mut R, shape: NetworkShape) -> Network {
    let n = rng.gen_range(2..=shape.max_nodes.max(2));
    let names: Vec<String> = (0..n).map(|i| format!("n{i}")).collect();
    let mut pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b)))
        .collect();
    pairs.shuffle(rng);
    let m = rng.gen_range(1..=shape.max_edges.clamp(1, pairs.len()));
    let edges: Vec<RawEdge> = pairs[..m]
        .iter()
        .map(|&(a, b)| RawEdge {
            src: names[a].clone(),
            dst: names[b].clone(),
            capacity: rng.gen_range(1..=shape.max_capacity.max(1)) as i64,
        })
        .collect();
    validate_network(&names, &edges).expect("generated network is valid")
}

/// Node pairs joined by at least one path of at most `max_hops` edges.
pub fn routable_pairs(net: &Network, max_hops: usize) -> Vec<(NodeId, NodeId)> {
    let mut out = Vec::new();
    for s in net.nodes() {
        for d in net.nodes() {
            if s != d && !enumerate_paths(net, s, d, max_hops).map_or(true, |ps| ps.is_empty()) {
                out.push((s.clone(), d.clone()));
            }
        }
    }
    out
}

/// Up to `max_contracts` routable contracts; empty if nothing is routable.
pub fn random_contracts<R: Rng>(
    rng: &mut R,
    net: &Network,
    max_contracts: usize,
    max_bandwidth: u64,
    max_priority: u64,
    max_hops: usize,
) -> Vec<Contract> {
    let pairs = routable_pairs(net, max_hops);
    if pairs.is_empty() {
        return Vec::new();
    }
    let count = rng.gen_range(1..=max_contracts.max(1));
    (0..count)
        .map(|_| {
            let (s, d) = pairs.choose(rng).expect("non-empty");
            Contract {
                source: s.clone(),
                dest: d.clone(),
                bandwidth: rng.gen_range(1..=max_bandwidth.max(1)),
                priority: rng.gen_range(1..=max_priority.max(1)),
            }
        })
        .collect()
}

/// Up to `max_requests` requests between arbitrary distinct nodes.
pub fn random_trace<R: Rng>(rng: &mut R, net: &Network, max_requests: usize, mu: u64) -> Trace {
    let nodes: Vec<&NodeId> = net.nodes().iter().collect();
    let count = rng.gen_range(0..=max_requests);
    let requests = (0..count)
        .map(|_| {
            let s = rng.gen_range(0..nodes.len());
            let mut d = rng.gen_range(0..nodes.len() - 1);
            if d >= s {
                d += 1;
            }
            Request {
                source: nodes[s].clone(),
                dest: nodes[d].clone(),
                bits: rng.gen_range(1..=mu),
            }
        })
        .collect();
    Trace { mu, requests }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_instance() {
        let shape = NetworkShape {
            max_nodes: 5,
            max_edges: 8,
            max_capacity: 6,
        };
        let a = random_network(&mut rng(7), shape);
        let b = random_network(&mut rng(7), shape);
        assert_eq!(a, b);
        assert!(a.edge_count() <= 8 && a.nodes().len() <= 5);
    }
}
