//! Offline optimum for request traces and exact competitive ratios.
//!
//! The optimum is the largest subset of requests that can be served together,
//! each on a freely chosen simple path, without exceeding any edge buffer.
//! Without key refresh only aggregate edge loads matter, so the request order
//! is irrelevant and memoizing on `(request index, residual vector)` is exact.

use std::collections::{BTreeMap, HashMap};

use thiserror::Error;

use crate::net::{Edge, Network, NodeId, Path};
use crate::online::{serve, simulate, BufferState, ServeError, Strategy, Trace, TraceError};
use crate::paths::enumerate_paths;
use crate::rational::{from_int, ratio, Rational};

pub const DEFAULT_STATE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("offline search exceeded {budget} states")]
    BudgetExceeded { budget: u64 },
    #[error("assignment length {got} does not match trace length {expected}")]
    AssignmentLength { expected: usize, got: usize },
    #[error("assignment infeasible at request {index}: {source}")]
    Infeasible { index: usize, source: ServeError },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OptResult {
    pub count: usize,
    /// Path per request; empty where the optimum drops the request.
    pub assignment: Vec<Path>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatioReport {
    pub strategy: Strategy,
    pub algorithm_served: usize,
    pub opt_served: usize,
    /// `algorithm_served / opt_served`, or 1 when the optimum serves nothing.
    pub ratio: Rational,
    pub opt_assignment: Vec<Path>,
}

pub fn optimal_served(net: &Network, trace: &Trace) -> Result<OptResult, OracleError> {
    optimal_served_with(net, trace, DEFAULT_STATE_BUDGET)
}

pub fn optimal_served_with(net: &Network, trace: &Trace, budget: u64) -> Result<OptResult, OracleError> {
    trace.validate(net)?;
    let index: BTreeMap<&Edge, usize> = net.edges().enumerate().map(|(i, e)| (e, i)).collect();
    let hops = net.nodes().len().saturating_sub(1).max(1);

    let mut by_pair: BTreeMap<(&NodeId, &NodeId), usize> = BTreeMap::new();
    let mut route_sets: Vec<Vec<(Path, Vec<usize>)>> = Vec::new();
    let mut candidates = Vec::with_capacity(trace.requests.len());
    for r in &trace.requests {
        let slot = *by_pair.entry((&r.source, &r.dest)).or_insert_with(|| {
            let ps = enumerate_paths(net, &r.source, &r.dest, hops).expect("trace validated");
            route_sets.push(
                ps.paths
                    .into_iter()
                    .map(|p| {
                        let idx = p.edges().iter().map(|e| index[e]).collect();
                        (p, idx)
                    })
                    .collect(),
            );
            route_sets.len() - 1
        });
        candidates.push(slot);
    }

    let mut search = Search {
        bits: trace.requests.iter().map(|r| r.bits).collect(),
        routes: candidates.iter().map(|&s| &route_sets[s]).collect(),
        memo: HashMap::new(),
        explored: 0,
        budget,
    };
    let start: Vec<u64> = net.capacities().values().copied().collect();
    let count = search.best(0, &start)?;

    let mut assignment = Vec::with_capacity(trace.requests.len());
    let mut residual = start;
    for i in 0..trace.requests.len() {
        let choice = search.memo[&(i, residual.clone())].1;
        match choice {
            Some(m) => {
                let (path, idx) = &search.routes[i][m];
                for &e in idx {
                    residual[e] -= search.bits[i];
                }
                assignment.push(path.clone());
            }
            None => assignment.push(Path::empty()),
        }
    }
    Ok(OptResult { count, assignment })
}

type Memo = HashMap<(usize, Vec<u64>), (usize, Option<usize>)>;

struct Search<'a> {
    bits: Vec<u64>,
    routes: Vec<&'a Vec<(Path, Vec<usize>)>>,
    memo: Memo,
    explored: u64,
    budget: u64,
}

impl Search<'_> {
    fn best(&mut self, i: usize, residual: &[u64]) -> Result<usize, OracleError> {
        if i == self.bits.len() {
            return Ok(0);
        }
        let key = (i, residual.to_vec());
        if let Some(&(v, _)) = self.memo.get(&key) {
            return Ok(v);
        }
        self.explored += 1;
        if self.explored > self.budget {
            return Err(OracleError::BudgetExceeded { budget: self.budget });
        }
        let ceiling = self.bits.len() - i;
        let bits = self.bits[i];
        let mut best = (0usize, None);
        let routes = self.routes[i];
        for (m, (_, idx)) in routes.iter().enumerate() {
            if idx.iter().any(|&e| residual[e] < bits) {
                continue;
            }
            let mut next = residual.to_vec();
            for &e in idx {
                next[e] -= bits;
            }
            let v = 1 + self.best(i + 1, &next)?;
            if v > best.0 {
                best = (v, Some(m));
            }
            if best.0 == ceiling {
                break;
            }
        }
        if best.0 < ceiling {
            let v = self.best(i + 1, residual)?;
            if v > best.0 {
                best = (v, None);
            }
        }
        self.memo.insert(key, best);
        Ok(best.0)
    }
}

/// Replays an assignment through `serve`; returns the number of served requests.
pub fn replay_assignment(net: &Network, trace: &Trace, assignment: &[Path]) -> Result<usize, OracleError> {
    if assignment.len() != trace.requests.len() {
        return Err(OracleError::AssignmentLength {
            expected: trace.requests.len(),
            got: assignment.len(),
        });
    }
    let mut state = BufferState::nominal(net);
    let mut served = 0;
    for (index, (r, p)) in trace.requests.iter().zip(assignment).enumerate() {
        if p.is_empty() {
            continue;
        }
        state = serve(&state, r, p).map_err(|source| OracleError::Infeasible { index, source })?;
        served += 1;
    }
    Ok(served)
}

pub fn competitive_ratio(net: &Network, trace: &Trace, strategy: Strategy) -> Result<RatioReport, OracleError> {
    let opt = optimal_served(net, trace)?;
    ratio_report(net, trace, strategy, opt)
}

/// Builds the report from an already computed optimum.
pub fn ratio_report(
    net: &Network,
    trace: &Trace,
    strategy: Strategy,
    opt: OptResult,
) -> Result<RatioReport, OracleError> {
    let sim = simulate(net, trace, strategy, None)?;
    let r = if opt.count == 0 {
        from_int(1)
    } else {
        ratio(sim.served_count as u64, opt.count as u64)
    };
    Ok(RatioReport {
        strategy,
        algorithm_served: sim.served_count,
        opt_served: opt.count,
        ratio: r,
        opt_assignment: opt.assignment,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{validate_network, RawEdge};
    use crate::online::Request;

    fn diamond() -> Network {
        let raw: Vec<RawEdge> = [("s", "a", 2), ("a", "d", 2), ("s", "b", 2), ("b", "d", 2)]
            .iter()
            .map(|&(s, d, c)| RawEdge {
                src: s.into(),
                dst: d.into(),
                capacity: c,
            })
            .collect();
        validate_network(&["a", "b", "d", "s"], &raw).unwrap()
    }

    #[test]
    fn empty_trace_is_zero() {
        let t = Trace {
            mu: 1,
            requests: vec![],
        };
        let opt = optimal_served(&diamond(), &t).unwrap();
        assert_eq!(opt.count, 0);
        let rep = competitive_ratio(&diamond(), &t, Strategy::Sap).unwrap();
        assert_eq!(rep.ratio, from_int(1));
    }

    #[test]
    fn uses_both_routes() {
        let t = Trace {
            mu: 2,
            requests: vec![Request::new("s", "d", 2), Request::new("s", "d", 2), Request::new("s", "a", 1)],
        };
        let opt = optimal_served(&diamond(), &t).unwrap();
        assert_eq!(opt.count, 2);
        assert_eq!(replay_assignment(&diamond(), &t, &opt.assignment), Ok(2));
    }

    #[test]
    fn drops_the_blocking_request() {
        // (s,a,2) and a single (s,d,2) fit; the third request cannot.
        let t = Trace {
            mu: 2,
            requests: vec![Request::new("s", "a", 2), Request::new("s", "d", 2), Request::new("s", "d", 2)],
        };
        let opt = optimal_served(&diamond(), &t).unwrap();
        assert_eq!(opt.count, 2);
        let rep = competitive_ratio(&diamond(), &t, Strategy::Sap).unwrap();
        assert_eq!(rep.algorithm_served, 2);
        assert_eq!(rep.ratio, from_int(1));
    }

    #[test]
    fn budget_reported() {
        let t = Trace {
            mu: 1,
            requests: vec![Request::new("s", "d", 1); 4],
        };
        assert_eq!(
            optimal_served_with(&diamond(), &t, 1),
            Err(OracleError::BudgetExceeded { budget: 1 })
        );
    }

    #[test]
    fn replay_rejects_overuse() {
        let t = Trace {
            mu: 2,
            requests: vec![Request::new("s", "a", 2), Request::new("s", "a", 2)],
        };
        let p = Path(vec![Edge::new("s", "a")]);
        assert!(matches!(
            replay_assignment(&diamond(), &t, &[p.clone(), p]),
            Err(OracleError::Infeasible { index: 1, .. })
        ));
    }
}
