//! Directed network with integer per-edge key capacities, paths and path predicates.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Node identifier. Ordering is lexicographic by name.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(name: impl Into<String>) -> Self {
        NodeId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        NodeId(s.to_string())
    }
}

/// Directed edge. Ordered pair-wise, source first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub src: NodeId,
    pub dst: NodeId,
}

impl Edge {
    pub fn new(src: impl Into<NodeId>, dst: impl Into<NodeId>) -> Self {
        Edge {
            src: src.into(),
            dst: dst.into(),
        }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.src, self.dst)
    }
}

/// One entry of an unvalidated edge list.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawEdge {
    pub src: String,
    pub dst: String,
    pub capacity: i64,
}

/// A single invariant violation found while validating a network.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetworkViolation {
    #[error("empty node name")]
    EmptyNodeName,
    #[error("duplicate node {0}")]
    DuplicateNode(String),
    #[error("dangling endpoint {node} on edge ({src},{dst})")]
    DanglingEndpoint { src: String, dst: String, node: String },
    #[error("self-loop on {0}")]
    SelfLoop(String),
    #[error("duplicate edge ({src},{dst})")]
    DuplicateEdge { src: String, dst: String },
    #[error("non-positive capacity {capacity} on ({src},{dst})")]
    NonPositiveCapacity { src: String, dst: String, capacity: i64 },
}

/// Every violation found by [`validate_network`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid network: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
pub struct NetworkErrors(pub Vec<NetworkViolation>);

/// Validated network `N = (V, E, k)`. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    nodes: BTreeSet<NodeId>,
    capacity: BTreeMap<Edge, u64>,
    out: BTreeMap<NodeId, Vec<Edge>>,
}

/// Checks a raw node/edge list and builds a [`Network`], or returns every violation.
pub fn validate_network<S: AsRef<str>>(
    nodes: &[S],
    edges: &[RawEdge],
) -> Result<Network, NetworkErrors> {
    let mut violations = Vec::new();
    let mut node_set = BTreeSet::new();
    for n in nodes {
        let n = n.as_ref();
        if n.is_empty() {
            violations.push(NetworkViolation::EmptyNodeName);
        } else if !node_set.insert(NodeId::new(n)) {
            violations.push(NetworkViolation::DuplicateNode(n.to_string()));
        }
    }

    let mut capacity = BTreeMap::new();
    for e in edges {
        let mut ok = true;
        for endpoint in [&e.src, &e.dst] {
            if !node_set.contains(&NodeId::new(endpoint.as_str())) {
                violations.push(NetworkViolation::DanglingEndpoint {
                    src: e.src.clone(),
                    dst: e.dst.clone(),
                    node: endpoint.clone(),
                });
                ok = false;
            }
        }
        if e.src == e.dst {
            violations.push(NetworkViolation::SelfLoop(e.src.clone()));
            ok = false;
        }
        if e.capacity <= 0 {
            violations.push(NetworkViolation::NonPositiveCapacity {
                src: e.src.clone(),
                dst: e.dst.clone(),
                capacity: e.capacity,
            });
            ok = false;
        }
        let edge = Edge::new(e.src.as_str(), e.dst.as_str());
        if capacity.contains_key(&edge) {
            violations.push(NetworkViolation::DuplicateEdge {
                src: e.src.clone(),
                dst: e.dst.clone(),
            });
            continue;
        }
        if ok {
            capacity.insert(edge, e.capacity as u64);
        } else {
            // Reserve the pair so a later duplicate is still reported.
            capacity.insert(edge, 0);
        }
    }

    if !violations.is_empty() {
        return Err(NetworkErrors(violations));
    }
    Ok(Network::from_parts(node_set, capacity))
}

impl Network {
    fn from_parts(nodes: BTreeSet<NodeId>, capacity: BTreeMap<Edge, u64>) -> Self {
        let mut out: BTreeMap<NodeId, Vec<Edge>> =
            nodes.iter().map(|n| (n.clone(), Vec::new())).collect();
        // BTreeMap iteration keeps each adjacency list sorted by destination.
        for e in capacity.keys() {
            out.get_mut(&e.src).expect("validated endpoint").push(e.clone());
        }
        Network {
            nodes,
            capacity,
            out,
        }
    }

    pub fn nodes(&self) -> &BTreeSet<NodeId> {
        &self.nodes
    }

    pub fn contains_node(&self, n: &NodeId) -> bool {
        self.nodes.contains(n)
    }

    /// Edges in pair-wise lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> {
        self.capacity.keys()
    }

    pub fn edge_count(&self) -> usize {
        self.capacity.len()
    }

    pub fn capacity(&self, e: &Edge) -> Option<u64> {
        self.capacity.get(e).copied()
    }

    pub fn capacities(&self) -> &BTreeMap<Edge, u64> {
        &self.capacity
    }

    pub fn has_edge(&self, e: &Edge) -> bool {
        self.capacity.contains_key(e)
    }

    /// Outgoing edges of `n`, sorted by destination name.
    pub fn out_edges(&self, n: &NodeId) -> &[Edge] {
        self.out.get(n).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Raw form, suitable for re-validation or serialization.
    pub fn to_raw(&self) -> (Vec<String>, Vec<RawEdge>) {
        let nodes = self.nodes.iter().map(|n| n.as_str().to_string()).collect();
        let edges = self
            .capacity
            .iter()
            .map(|(e, &c)| RawEdge {
                src: e.src.as_str().to_string(),
                dst: e.dst.as_str().to_string(),
                capacity: c as i64,
            })
            .collect();
        (nodes, edges)
    }
}

/// Sequence of edges. The empty path stands for rejection.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Path(pub Vec<Edge>);

impl Path {
    pub fn empty() -> Self {
        Path(Vec::new())
    }

    pub fn edges(&self) -> &[Edge] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, e: &Edge) -> bool {
        self.0.contains(e)
    }

    pub fn source(&self) -> Option<&NodeId> {
        self.0.first().map(|e| &e.src)
    }

    pub fn dest(&self) -> Option<&NodeId> {
        self.0.last().map(|e| &e.dst)
    }

    /// Node sequence visited by the path, endpoints included.
    pub fn nodes(&self) -> Vec<&NodeId> {
        let mut v: Vec<&NodeId> = self.0.iter().map(|e| &e.src).collect();
        if let Some(last) = self.0.last() {
            v.push(&last.dst);
        }
        v
    }
}

/// Canonical order: shorter first, then lexicographic by edge sequence.
impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        write!(f, "{}", self.0[0].src)?;
        for e in &self.0 {
            write!(f, "->{}", e.dst)?;
        }
        Ok(())
    }
}

/// True iff every edge exists in `net` and consecutive edges connect.
pub fn is_valid_path(net: &Network, p: &Path) -> bool {
    p.0.iter().all(|e| net.has_edge(e)) && p.0.windows(2).all(|w| w[0].dst == w[1].src)
}

/// True iff no node repeats along `p`, endpoints included.
pub fn is_simple_path(p: &Path) -> bool {
    let nodes = p.nodes();
    let set: BTreeSet<&NodeId> = nodes.iter().copied().collect();
    set.len() == nodes.len()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BottleneckError {
    #[error("bottleneck of the empty path")]
    EmptyPath,
    #[error("edge {0} has no capacity entry")]
    MissingEdge(Edge),
}

/// Minimum of `cap` over the edges of `p`.
pub fn bottleneck(cap: &BTreeMap<Edge, u64>, p: &Path) -> Result<u64, BottleneckError> {
    let mut min: Option<u64> = None;
    for e in &p.0 {
        let c = *cap
            .get(e)
            .ok_or_else(|| BottleneckError::MissingEdge(e.clone()))?;
        min = Some(min.map_or(c, |m| m.min(c)));
    }
    min.ok_or(BottleneckError::EmptyPath)
}

/// The three-node topology used throughout the examples and tests.
pub fn example_topology() -> Network {
    let edges = [
        ("Q1", "Q2", 2),
        ("Q1", "Q3", 2),
        ("Q2", "Q1", 1),
        ("Q2", "Q3", 3),
        ("Q3", "Q1", 3),
        ("Q3", "Q2", 2),
    ]
    .map(|(s, d, c)| RawEdge {
        src: s.into(),
        dst: d.into(),
        capacity: c,
    });
    validate_network(&["Q1", "Q2", "Q3"], &edges).expect("example topology is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(edges: &[(&str, &str)]) -> Path {
        Path(edges.iter().map(|&(s, d)| Edge::new(s, d)).collect())
    }

    fn raw(s: &str, d: &str, c: i64) -> RawEdge {
        RawEdge {
            src: s.into(),
            dst: d.into(),
            capacity: c,
        }
    }

    #[test]
    fn example_topology_capacities() {
        let net = example_topology();
        assert_eq!(net.edge_count(), 6);
        let caps: Vec<u64> = net.capacities().values().copied().collect();
        assert_eq!(caps, vec![2, 2, 1, 3, 3, 2]);
        assert_eq!(net.capacity(&Edge::new("Q3", "Q1")), Some(3));
    }

    #[test]
    fn self_loop_rejected() {
        let err = validate_network(&["Q1", "Q2"], &[raw("Q1", "Q1", 1)]).unwrap_err();
        assert_eq!(err.0, vec![NetworkViolation::SelfLoop("Q1".into())]);
        assert!(err.to_string().contains("self-loop"));
    }

    #[test]
    fn zero_capacity_rejected() {
        let err = validate_network(&["Q1", "Q2"], &[raw("Q1", "Q2", 0)]).unwrap_err();
        assert!(err.to_string().contains("non-positive capacity"));
    }

    #[test]
    fn all_violations_reported() {
        let err = validate_network(
            &["a", "b", "a"],
            &[
                raw("a", "c", 1),
                raw("a", "b", -2),
                raw("a", "b", 1),
                raw("b", "b", 3),
            ],
        )
        .unwrap_err();
        assert_eq!(
            err.0,
            vec![
                NetworkViolation::DuplicateNode("a".into()),
                NetworkViolation::DanglingEndpoint {
                    src: "a".into(),
                    dst: "c".into(),
                    node: "c".into()
                },
                NetworkViolation::NonPositiveCapacity {
                    src: "a".into(),
                    dst: "b".into(),
                    capacity: -2
                },
                NetworkViolation::DuplicateEdge {
                    src: "a".into(),
                    dst: "b".into()
                },
                NetworkViolation::SelfLoop("b".into()),
            ]
        );
    }

    #[test]
    fn path_validity() {
        let net = example_topology();
        assert!(is_valid_path(&net, &p(&[("Q2", "Q3"), ("Q3", "Q1")])));
        assert!(is_valid_path(&net, &Path::empty()));
        assert!(!is_valid_path(&net, &p(&[("Q1", "Q2"), ("Q3", "Q1")])));
        assert!(!is_valid_path(&net, &p(&[("Q1", "Q4")])));
    }

    #[test]
    fn path_simplicity() {
        assert!(is_simple_path(&p(&[("Q1", "Q2"), ("Q2", "Q3")])));
        assert!(!is_simple_path(&p(&[("Q1", "Q2"), ("Q2", "Q1")])));
        assert!(is_simple_path(&p(&[("Q2", "Q3"), ("Q3", "Q1")])));
        assert!(is_simple_path(&Path::empty()));
    }

    #[test]
    fn bottleneck_values() {
        let net = example_topology();
        let caps = net.capacities();
        assert_eq!(bottleneck(caps, &p(&[("Q2", "Q3"), ("Q3", "Q1")])), Ok(3));
        assert_eq!(bottleneck(caps, &p(&[("Q2", "Q1")])), Ok(1));
        let mut drained = caps.clone();
        drained.insert(Edge::new("Q3", "Q1"), 0);
        assert_eq!(bottleneck(&drained, &p(&[("Q2", "Q3"), ("Q3", "Q1")])), Ok(0));
        assert_eq!(bottleneck(caps, &Path::empty()), Err(BottleneckError::EmptyPath));
        assert!(matches!(
            bottleneck(caps, &p(&[("Q1", "Q9")])),
            Err(BottleneckError::MissingEdge(_))
        ));
    }

    #[test]
    fn canonical_path_order() {
        let short = p(&[("Q2", "Q1")]);
        let long = p(&[("Q2", "Q3"), ("Q3", "Q1")]);
        assert!(short < long);
        assert!(p(&[("Q1", "Q2")]) < p(&[("Q1", "Q3")]));
    }
}
