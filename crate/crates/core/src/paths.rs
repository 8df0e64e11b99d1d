//! Enumeration of simple paths between a node pair under a hop bound.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::net::{Edge, Network, NodeId, Path};

/// Hop bound used when none is configured.
pub const DEFAULT_MAX_HOPS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error("source and destination are both {0}")]
    SameEndpoints(NodeId),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("max_hops must be at least 1")]
    ZeroHops,
    #[error("path index {index} out of range ({len} paths)")]
    IndexOutOfRange { index: usize, len: usize },
}

/// All simple `source -> dest` paths of at most `max_hops` edges, in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSet {
    pub source: NodeId,
    pub dest: NodeId,
    pub max_hops: usize,
    pub paths: Vec<Path>,
}

impl PathSet {
    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn get(&self, m: usize) -> Option<&Path> {
        self.paths.get(m)
    }
}

/// Depth-first enumeration with on-path node marking.
pub fn enumerate_paths(
    net: &Network,
    s: &NodeId,
    d: &NodeId,
    max_hops: usize,
) -> Result<PathSet, PathError> {
    for n in [s, d] {
        if !net.contains_node(n) {
            return Err(PathError::UnknownNode(n.clone()));
        }
    }
    if s == d {
        return Err(PathError::SameEndpoints(s.clone()));
    }
    if max_hops == 0 {
        return Err(PathError::ZeroHops);
    }

    let mut found = Vec::new();
    let mut on_path = BTreeSet::new();
    on_path.insert(s.clone());
    let mut stack: Vec<Edge> = Vec::new();
    dfs(net, s, d, max_hops, &mut on_path, &mut stack, &mut found);
    found.sort();

    Ok(PathSet {
        source: s.clone(),
        dest: d.clone(),
        max_hops,
        paths: found,
    })
}

fn dfs(
    net: &Network,
    at: &NodeId,
    d: &NodeId,
    hops_left: usize,
    on_path: &mut BTreeSet<NodeId>,
    stack: &mut Vec<Edge>,
    found: &mut Vec<Path>,
) {
    if hops_left == 0 {
        return;
    }
    for e in net.out_edges(at) {
        if on_path.contains(&e.dst) {
            continue;
        }
        stack.push(e.clone());
        if &e.dst == d {
            found.push(Path(stack.clone()));
        } else {
            on_path.insert(e.dst.clone());
            dfs(net, &e.dst, d, hops_left - 1, on_path, stack, found);
            on_path.remove(&e.dst);
        }
        stack.pop();
    }
}

/// 1 iff `e` lies on the `m`-th path of `ps`.
pub fn edge_indicator(ps: &PathSet, m: usize, e: &Edge) -> Result<u8, PathError> {
    let p = ps.paths.get(m).ok_or(PathError::IndexOutOfRange {
        index: m,
        len: ps.paths.len(),
    })?;
    Ok(u8::from(p.contains(e)))
}
