//! Worst-case topologies and request sequences for the SAP and WSP strategies,
//! with their closed-form competitive ratios.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::net::{validate_network, Edge, Network, NetworkErrors, Path, RawEdge};
use crate::online::{Request, Trace};
use crate::oracle::{replay_assignment, OptResult, OracleError};
use crate::rational::{ratio, Rational};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Construction {
    #[serde(rename = "SAP_WORST")]
    SapWorst,
    #[serde(rename = "WSP_WORST")]
    WspWorst,
}

impl fmt::Display for Construction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Construction::SapWorst => "SAP_WORST",
            Construction::WspWorst => "WSP_WORST",
        })
    }
}

impl FromStr for Construction {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().replace('-', "_").as_str() {
            "SAP_WORST" | "SAP" => Ok(Construction::SapWorst),
            "WSP_WORST" | "WSP" => Ok(Construction::WspWorst),
            _ => Err(format!("unknown construction {s:?} (expected SAP_WORST or WSP_WORST)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AdversaryParams {
    pub edge_count: u64,
    pub beta: u64,
    pub mu: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdversaryError {
    #[error("mu must be at least 1")]
    ZeroMu,
    #[error("beta ({beta}) must be at least mu ({mu})")]
    BetaBelowMu { beta: u64, mu: u64 },
    #[error("beta ({beta}) must be a multiple of mu ({mu})")]
    BetaNotMultiple { beta: u64, mu: u64 },
    #[error("SAP_WORST needs an odd edge count of at least 3, got {0}")]
    SapEdgeCount(u64),
    #[error("WSP_WORST needs at least 2 edges, got {0}")]
    WspEdgeCount(u64),
    #[error("construction yields an invalid network: {0}")]
    Network(#[from] NetworkErrors),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdversarialInstance {
    pub construction: Construction,
    pub params: AdversaryParams,
    pub net: Network,
    pub trace: Trace,
    pub predicted_ratio: Rational,
    /// Serves every request; the assignment an offline optimum uses.
    pub constructive_assignment: Vec<Path>,
}

fn check_sizes(beta: u64, mu: u64) -> Result<(), AdversaryError> {
    if mu == 0 {
        return Err(AdversaryError::ZeroMu);
    }
    if beta < mu {
        return Err(AdversaryError::BetaBelowMu { beta, mu });
    }
    if !beta.is_multiple_of(mu) {
        return Err(AdversaryError::BetaNotMultiple { beta, mu });
    }
    Ok(())
}

/// Chain `s -> {prefix}1 -> ... -> {prefix}(len-1) -> d`.
fn chain(prefix: &str, len: u64) -> Vec<(String, String)> {
    let name = |i: u64| match i {
        0 => "s".to_string(),
        i if i == len => "d".to_string(),
        i => format!("{prefix}{i}"),
    };
    (0..len).map(|i| (name(i), name(i + 1))).collect()
}

fn build_network(edges: &[(String, String, u64)]) -> Result<Network, NetworkErrors> {
    let mut nodes: Vec<&str> = edges
        .iter()
        .flat_map(|(s, d, _)| [s.as_str(), d.as_str()])
        .collect();
    nodes.sort_unstable();
    nodes.dedup();
    let raw: Vec<RawEdge> = edges
        .iter()
        .map(|(s, d, c)| RawEdge {
            src: s.clone(),
            dst: d.clone(),
            capacity: *c as i64,
        })
        .collect();
    validate_network(&nodes, &raw)
}

fn to_path(links: &[(String, String)]) -> Path {
    Path(links.iter().map(|(s, d)| Edge::new(s.as_str(), d.as_str())).collect())
}

/// Two disjoint `s -> d` chains of `floor(E/2)` (top) and `floor(E/2)+1`
/// (bottom) edges, all of capacity `beta`. The trace issues `beta/mu`
/// requests `(s,d,mu)` followed by `beta` single-bit requests per top edge.
pub fn gen_sap_worst(edge_count: u64, beta: u64, mu: u64) -> Result<AdversarialInstance, AdversaryError> {
    check_sizes(beta, mu)?;
    if edge_count < 3 || edge_count.is_multiple_of(2) {
        return Err(AdversaryError::SapEdgeCount(edge_count));
    }
    let half = edge_count / 2;
    let top = chain("t", half);
    let bottom = chain("b", half + 1);
    let edges: Vec<(String, String, u64)> = top
        .iter()
        .chain(&bottom)
        .map(|(s, d)| (s.clone(), d.clone(), beta))
        .collect();
    let net = build_network(&edges)?;

    let big = beta / mu;
    let mut requests = vec![Request::new("s", "d", mu); big as usize];
    let mut assignment = vec![to_path(&bottom); big as usize];
    for (u, v) in &top {
        for _ in 0..beta {
            requests.push(Request::new(u, v, 1));
            assignment.push(to_path(&[(u.clone(), v.clone())]));
        }
    }

    Ok(AdversarialInstance {
        construction: Construction::SapWorst,
        params: AdversaryParams { edge_count, beta, mu },
        net,
        trace: Trace { mu, requests },
        predicted_ratio: predicted_sap_ratio(edge_count, mu),
        constructive_assignment: assignment,
    })
}

/// Direct edge `s -> d` of capacity `beta` plus an `s -> d` chain of `E-1`
/// edges of capacity `2*beta`. The trace issues `beta/mu` requests `(s,d,mu)`
/// followed by `2*beta` single-bit requests per chain edge.
pub fn gen_wsp_worst(edge_count: u64, beta: u64, mu: u64) -> Result<AdversarialInstance, AdversaryError> {
    check_sizes(beta, mu)?;
    if edge_count < 2 {
        return Err(AdversaryError::WspEdgeCount(edge_count));
    }
    let direct = vec![("s".to_string(), "d".to_string())];
    let ring = chain("b", edge_count - 1);
    let mut edges = vec![("s".to_string(), "d".to_string(), beta)];
    edges.extend(ring.iter().map(|(s, d)| (s.clone(), d.clone(), 2 * beta)));
    // A one-edge chain coincides with the direct edge and is rejected here.
    let net = build_network(&edges)?;

    let big = beta / mu;
    let mut requests = vec![Request::new("s", "d", mu); big as usize];
    let mut assignment = vec![to_path(&direct); big as usize];
    for (u, v) in &ring {
        for _ in 0..2 * beta {
            requests.push(Request::new(u, v, 1));
            assignment.push(to_path(&[(u.clone(), v.clone())]));
        }
    }

    Ok(AdversarialInstance {
        construction: Construction::WspWorst,
        params: AdversaryParams { edge_count, beta, mu },
        net,
        trace: Trace { mu, requests },
        predicted_ratio: predicted_wsp_ratio(edge_count, mu),
        constructive_assignment: assignment,
    })
}

pub fn generate(construction: Construction, params: AdversaryParams) -> Result<AdversarialInstance, AdversaryError> {
    match construction {
        Construction::SapWorst => gen_sap_worst(params.edge_count, params.beta, params.mu),
        Construction::WspWorst => gen_wsp_worst(params.edge_count, params.beta, params.mu),
    }
}

/// `1 / (1 + mu * floor(E/2))`
pub fn predicted_sap_ratio(edge_count: u64, mu: u64) -> Rational {
    ratio(1u64, 1 + u128::from(mu) * u128::from(edge_count / 2))
}

/// `1/2 + 1 / (2 + 4 * mu * (E-1))`
pub fn predicted_wsp_ratio(edge_count: u64, mu: u64) -> Rational {
    let tail = 2 + 4 * u128::from(mu) * u128::from(edge_count.saturating_sub(1));
    ratio(1, 2) + ratio(1, tail)
}

impl AdversarialInstance {
    /// Offline optimum taken from the construction, checked by replaying it.
    pub fn constructive_opt(&self) -> Result<OptResult, OracleError> {
        let count = replay_assignment(&self.net, &self.trace, &self.constructive_assignment)?;
        Ok(OptResult {
            count,
            assignment: self.constructive_assignment.clone(),
        })
    }
}
