//! Online routing of single key requests against per-edge key buffers.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::net::{Edge, Network, NodeId, Path};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Request {
    pub source: NodeId,
    pub dest: NodeId,
    pub bits: u64,
}

impl Request {
    pub fn new(source: &str, dest: &str, bits: u64) -> Self {
        Request {
            source: source.into(),
            dest: dest.into(),
            bits,
        }
    }
}

impl fmt::Display for Request {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.source, self.dest, self.bits)
    }
}

/// Request sequence with its maximum request size `mu`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub mu: u64,
    pub requests: Vec<Request>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("mu must be positive")]
    ZeroMu,
    #[error("request {index} {request}: unknown node {node}")]
    UnknownNode { index: usize, request: Request, node: NodeId },
    #[error("request {index} {request}: source equals destination")]
    SameEndpoints { index: usize, request: Request },
    #[error("request {index} {request}: bits must be in 1..={mu}")]
    BadSize { index: usize, request: Request, mu: u64 },
    #[error("refresh period must be positive")]
    ZeroRefreshPeriod,
    #[error("refresh rate given for unknown edge {0}")]
    UnknownRefreshEdge(Edge),
}

impl Trace {
    pub fn validate(&self, net: &Network) -> Result<(), TraceError> {
        if self.mu == 0 {
            return Err(TraceError::ZeroMu);
        }
        for (index, r) in self.requests.iter().enumerate() {
            for n in [&r.source, &r.dest] {
                if !net.contains_node(n) {
                    return Err(TraceError::UnknownNode {
                        index,
                        request: r.clone(),
                        node: n.clone(),
                    });
                }
            }
            if r.source == r.dest {
                return Err(TraceError::SameEndpoints {
                    index,
                    request: r.clone(),
                });
            }
            if r.bits == 0 || r.bits > self.mu {
                return Err(TraceError::BadSize {
                    index,
                    request: r.clone(),
                    mu: self.mu,
                });
            }
        }
        Ok(())
    }
}

/// Residual key bits per edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BufferState {
    pub residual: BTreeMap<Edge, u64>,
}

impl BufferState {
    /// Every buffer at its nominal capacity.
    pub fn nominal(net: &Network) -> Self {
        BufferState {
            residual: net.capacities().clone(),
        }
    }

    pub fn residual(&self, e: &Edge) -> u64 {
        self.residual.get(e).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Strategy {
    /// Shortest available path.
    Sap,
    /// Widest path, fewest hops among the widest.
    Wsp,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::Sap => "SAP",
            Strategy::Wsp => "WSP",
        })
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "SAP" => Ok(Strategy::Sap),
            "WSP" => Ok(Strategy::Wsp),
            _ => Err(format!("unknown strategy {s:?} (expected SAP or WSP)")),
        }
    }
}

impl Strategy {
    pub fn route(self, net: &Network, state: &BufferState, r: &Request) -> Path {
        match self {
            Strategy::Sap => sap_route(net, state, r),
            Strategy::Wsp => wsp_route(net, state, r),
        }
    }
}

/// Minimum-hop `s -> d` path over admitted edges, lexicographically smallest
/// among those of minimum length.
fn canonical_shortest(
    net: &Network,
    s: &NodeId,
    d: &NodeId,
    admit: impl Fn(&Edge) -> bool,
) -> Option<Path> {
    let mut incoming: BTreeMap<&NodeId, Vec<&Edge>> = BTreeMap::new();
    for e in net.edges().filter(|e| admit(e)) {
        incoming.entry(&e.dst).or_default().push(e);
    }
    let mut dist: BTreeMap<&NodeId, usize> = BTreeMap::new();
    dist.insert(d, 0);
    let mut queue = VecDeque::from([d]);
    while let Some(v) = queue.pop_front() {
        if v == s {
            break;
        }
        let dv = dist[v];
        for e in incoming.get(v).into_iter().flatten() {
            if !dist.contains_key(&e.src) {
                dist.insert(&e.src, dv + 1);
                queue.push_back(&e.src);
            }
        }
    }
    let mut remaining = *dist.get(s)?;
    let mut at = s;
    let mut edges = Vec::with_capacity(remaining);
    while remaining > 0 {
        // Out-edges are sorted by destination, so the first fit is the smallest.
        let next = net
            .out_edges(at)
            .iter()
            .find(|e| admit(e) && dist.get(&e.dst) == Some(&(remaining - 1)))
            .expect("distance labels are consistent");
        edges.push(next.clone());
        at = &next.dst;
        remaining -= 1;
    }
    Some(Path(edges))
}

/// Fewest-hop path whose every edge holds at least `r.bits`; empty if none.
pub fn sap_route(net: &Network, state: &BufferState, r: &Request) -> Path {
    canonical_shortest(net, &r.source, &r.dest, |e| state.residual(e) >= r.bits)
        .unwrap_or_default()
}

/// Path of maximum bottleneck residual (at least `r.bits`), fewest hops among
/// those, then canonical order; empty if none.
pub fn wsp_route(net: &Network, state: &BufferState, r: &Request) -> Path {
    let mut widths: Vec<u64> = state
        .residual
        .values()
        .copied()
        .filter(|&w| w >= r.bits)
        .collect();
    widths.sort_unstable();
    widths.dedup();

    let reachable = |w: u64| canonical_shortest(net, &r.source, &r.dest, |e| state.residual(e) >= w);
    // Reachability is monotone in the threshold. Successful probes only move
    // upward, so the last one found is for the largest admitted width.
    let (mut lo, mut hi) = (0usize, widths.len());
    let mut best = None;
    while lo < hi {
        let mid = (lo + hi) / 2;
        match reachable(widths[mid]) {
            Some(p) => {
                best = Some(p);
                lo = mid + 1;
            }
            None => hi = mid,
        }
    }
    best.unwrap_or_default()
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ServeError {
    #[error("cannot serve a request on the empty path")]
    EmptyPath,
    #[error("path {path} does not connect {request}")]
    Disconnected { path: Path, request: Request },
    #[error("edge {edge} holds {residual} bits, request needs {bits}")]
    Insufficient { edge: Edge, residual: u64, bits: u64 },
    #[error("edge {0} not present in buffer state")]
    UnknownEdge(Edge),
}

/// Consumes `r.bits` from every edge of `p`.
pub fn serve(state: &BufferState, r: &Request, p: &Path) -> Result<BufferState, ServeError> {
    if p.is_empty() {
        return Err(ServeError::EmptyPath);
    }
    let connected = p.edges().windows(2).all(|w| w[0].dst == w[1].src)
        && p.source() == Some(&r.source)
        && p.dest() == Some(&r.dest);
    if !connected {
        return Err(ServeError::Disconnected {
            path: p.clone(),
            request: r.clone(),
        });
    }
    let mut next = state.clone();
    for e in p.edges() {
        let slot = next
            .residual
            .get_mut(e)
            .ok_or_else(|| ServeError::UnknownEdge(e.clone()))?;
        if *slot < r.bits {
            return Err(ServeError::Insufficient {
                edge: e.clone(),
                residual: *slot,
                bits: r.bits,
            });
        }
        *slot -= r.bits;
    }
    Ok(next)
}

/// `residual[e] := min(k(e), residual[e] + rates[e])`.
pub fn refresh(state: &BufferState, net: &Network, rates: &BTreeMap<Edge, u64>) -> BufferState {
    let residual = net
        .capacities()
        .iter()
        .map(|(e, &k)| {
            let cur = state.residual(e);
            let rate = rates.get(e).copied().unwrap_or(0);
            (e.clone(), cur.saturating_add(rate).min(k))
        })
        .collect();
    BufferState { residual }
}

/// Key regeneration applied after every `period` requests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefreshConfig {
    pub rates: BTreeMap<Edge, u64>,
    pub period: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimulationResult {
    pub strategy: Strategy,
    /// Path per request; empty for a rejection.
    pub decisions: Vec<Path>,
    pub served_count: usize,
    pub rejected_count: usize,
    pub final_state: BufferState,
}

impl SimulationResult {
    pub fn served_bits_through(&self, trace: &Trace, e: &Edge) -> u64 {
        self.decisions
            .iter()
            .zip(&trace.requests)
            .filter(|(p, _)| p.contains(e))
            .map(|(_, r)| r.bits)
            .sum()
    }
}

/// Routes and serves each request in order. Refresh is off when `refresh` is `None`.
pub fn simulate(
    net: &Network,
    trace: &Trace,
    strategy: Strategy,
    refresh_cfg: Option<&RefreshConfig>,
) -> Result<SimulationResult, TraceError> {
    trace.validate(net)?;
    if let Some(cfg) = refresh_cfg {
        if cfg.period == 0 {
            return Err(TraceError::ZeroRefreshPeriod);
        }
        if let Some(e) = cfg.rates.keys().find(|e| !net.has_edge(e)) {
            return Err(TraceError::UnknownRefreshEdge(e.clone()));
        }
    }

    let mut state = BufferState::nominal(net);
    let mut decisions = Vec::with_capacity(trace.requests.len());
    let mut served_count = 0;
    for (i, r) in trace.requests.iter().enumerate() {
        let p = strategy.route(net, &state, r);
        if !p.is_empty() {
            state = serve(&state, r, &p).expect("strategies only return feasible paths");
            served_count += 1;
        }
        decisions.push(p);
        if let Some(cfg) = refresh_cfg {
            if (i + 1) % cfg.period == 0 {
                state = refresh(&state, net, &cfg.rates);
            }
        }
    }
    Ok(SimulationResult {
        strategy,
        rejected_count: decisions.len() - served_count,
        served_count,
        decisions,
        final_state: state,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{validate_network, RawEdge};

    fn net(edges: &[(&str, &str, i64)]) -> Network {
        let mut nodes: Vec<&str> = edges.iter().flat_map(|&(s, d, _)| [s, d]).collect();
        nodes.sort();
        nodes.dedup();
        let raw: Vec<RawEdge> = edges
            .iter()
            .map(|&(s, d, c)| RawEdge {
                src: s.into(),
                dst: d.into(),
                capacity: c,
            })
            .collect();
        validate_network(&nodes, &raw).unwrap()
    }

    fn p(edges: &[(&str, &str)]) -> Path {
        Path(edges.iter().map(|&(s, d)| Edge::new(s, d)).collect())
    }

    #[test]
    fn sap_prefers_direct_edge() {
        let n = net(&[("a", "b", 4), ("a", "c", 9), ("c", "b", 9)]);
        let st = BufferState::nominal(&n);
        assert_eq!(sap_route(&n, &st, &Request::new("a", "b", 4)), p(&[("a", "b")]));
        assert_eq!(
            sap_route(&n, &st, &Request::new("a", "b", 5)),
            p(&[("a", "c"), ("c", "b")])
        );
        assert_eq!(sap_route(&n, &st, &Request::new("a", "b", 10)), Path::empty());
    }

    #[test]
    fn sap_ties_follow_canonical_order() {
        let n = net(&[("s", "x", 1), ("s", "y", 1), ("x", "d", 1), ("y", "d", 1)]);
        let st = BufferState::nominal(&n);
        assert_eq!(
            sap_route(&n, &st, &Request::new("s", "d", 1)),
            p(&[("s", "x"), ("x", "d")])
        );
    }

    #[test]
    fn wsp_width_dominates_hops() {
        let n = net(&[("s", "d", 4), ("s", "b1", 8), ("b1", "b2", 8), ("b2", "d", 8)]);
        let st = BufferState::nominal(&n);
        assert_eq!(
            wsp_route(&n, &st, &Request::new("s", "d", 2)),
            p(&[("s", "b1"), ("b1", "b2"), ("b2", "d")])
        );
    }

    #[test]
    fn wsp_equal_width_takes_shorter() {
        let n = net(&[("s", "d", 5), ("s", "x", 5), ("x", "d", 5)]);
        let st = BufferState::nominal(&n);
        assert_eq!(wsp_route(&n, &st, &Request::new("s", "d", 1)), p(&[("s", "d")]));
    }

    #[test]
    fn wsp_rejects_when_nothing_fits() {
        let n = net(&[("s", "d", 1), ("s", "x", 2), ("x", "d", 1)]);
        let st = BufferState::nominal(&n);
        assert_eq!(wsp_route(&n, &st, &Request::new("s", "d", 2)), Path::empty());
    }

    #[test]
    fn serve_arithmetic() {
        let n = net(&[("a", "b", 4), ("b", "c", 4)]);
        let r = Request::new("a", "c", 2);
        let path = p(&[("a", "b"), ("b", "c")]);
        let st = serve(&BufferState::nominal(&n), &r, &path).unwrap();
        assert_eq!(st.residual(&Edge::new("a", "b")), 2);
        assert_eq!(st.residual(&Edge::new("b", "c")), 2);
        let st = serve(&st, &r, &path).unwrap();
        assert_eq!(st.residual(&Edge::new("a", "b")), 0);
        assert_eq!(
            serve(&st, &r, &path),
            Err(ServeError::Insufficient {
                edge: Edge::new("a", "b"),
                residual: 0,
                bits: 2
            })
        );
        assert_eq!(serve(&st, &r, &Path::empty()), Err(ServeError::EmptyPath));
        assert!(matches!(
            serve(&st, &r, &p(&[("a", "b")])),
            Err(ServeError::Disconnected { .. })
        ));
    }

    #[test]
    fn refresh_clamps() {
        let n = net(&[("a", "b", 4), ("b", "c", 4)]);
        let mut st = BufferState::nominal(&n);
        st.residual.insert(Edge::new("a", "b"), 0);
        let rates: BTreeMap<Edge, u64> = [(Edge::new("a", "b"), 4), (Edge::new("b", "c"), 7)].into();
        let refreshed = refresh(&st, &n, &rates);
        assert_eq!(refreshed, BufferState::nominal(&n));
        assert_eq!(refresh(&st, &n, &BTreeMap::new()), st);
    }

    #[test]
    fn simulate_with_refresh() {
        let n = net(&[("a", "b", 2)]);
        let trace = Trace {
            mu: 2,
            requests: vec![Request::new("a", "b", 2); 4],
        };
        let plain = simulate(&n, &trace, Strategy::Sap, None).unwrap();
        assert_eq!(plain.served_count, 1);
        let cfg = RefreshConfig {
            rates: [(Edge::new("a", "b"), 2)].into(),
            period: 2,
        };
        let refreshed = simulate(&n, &trace, Strategy::Sap, Some(&cfg)).unwrap();
        // Refill after the second request lets the third through.
        assert_eq!(refreshed.served_count, 2);
        assert_eq!(refreshed.decisions[2], p(&[("a", "b")]));
    }

    #[test]
    fn empty_trace() {
        let n = net(&[("a", "b", 2)]);
        let trace = Trace {
            mu: 2,
            requests: vec![],
        };
        let res = simulate(&n, &trace, Strategy::Wsp, None).unwrap();
        assert_eq!((res.served_count, res.rejected_count), (0, 0));
        assert_eq!(res.final_state, BufferState::nominal(&n));
    }

    #[test]
    fn trace_validation() {
        let n = net(&[("a", "b", 2)]);
        let bad = Trace {
            mu: 2,
            requests: vec![Request::new("a", "b", 3)],
        };
        assert!(matches!(
            simulate(&n, &bad, Strategy::Sap, None),
            Err(TraceError::BadSize { index: 0, .. })
        ));
        let bad = Trace {
            mu: 2,
            requests: vec![Request::new("a", "z", 1)],
        };
        assert!(matches!(bad.validate(&n), Err(TraceError::UnknownNode { .. })));
    }
}
