//! JSON documents exchanged with the command line: networks, contracts,
//! traces, reports, manifests and run configuration.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path as FsPath;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adversary::{AdversarialInstance, Construction};
use crate::net::{validate_network, Edge, Network, NetworkErrors, Path, RawEdge};
use crate::online::{BufferState, RefreshConfig, Request, SimulationResult, Strategy, Trace};
use crate::oracle::{DEFAULT_STATE_BUDGET, RatioReport};
use crate::paths::DEFAULT_MAX_HOPS;
use crate::plan::{
    check_solution, Contract, ObjectiveKind, PlanError, PlanProblem, PlanSolution,
};
use crate::rational::{parse_fraction, to_decimal_string, to_fraction_string, Rational};

/// Digits used for presentation decimals next to exact fractions.
pub const DECIMAL_PLACES: usize = 6;

#[derive(Debug, Error)]
pub enum DocError {
    #[error("{file}: {source}")]
    Json {
        file: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{file}: {source}")]
    Read {
        file: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Network(#[from] NetworkErrors),
    #[error("{0}")]
    Invalid(String),
}

pub fn read_json<T: DeserializeOwned>(path: &FsPath) -> Result<T, DocError> {
    let file = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| DocError::Read {
        file: file.clone(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| DocError::Json { file, source })
}

/// Pretty JSON with a trailing newline. Output is byte-stable for equal input.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeDoc {
    pub src: String,
    pub dst: String,
    pub capacity: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetworkDoc {
    pub nodes: Vec<String>,
    pub edges: Vec<EdgeDoc>,
}

impl NetworkDoc {
    pub fn from_network(net: &Network) -> Self {
        let (nodes, edges) = net.to_raw();
        NetworkDoc {
            nodes,
            edges: edges
                .into_iter()
                .map(|e| EdgeDoc {
                    src: e.src,
                    dst: e.dst,
                    capacity: e.capacity,
                })
                .collect(),
        }
    }

    pub fn to_network(&self) -> Result<Network, NetworkErrors> {
        let raw: Vec<RawEdge> = self
            .edges
            .iter()
            .map(|e| RawEdge {
                src: e.src.clone(),
                dst: e.dst.clone(),
                capacity: e.capacity,
            })
            .collect();
        validate_network(&self.nodes, &raw)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractDoc {
    pub src: String,
    pub dst: String,
    pub bandwidth: u64,
    pub priority: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractsDoc {
    pub contracts: Vec<ContractDoc>,
}

impl ContractsDoc {
    pub fn from_contracts(cs: &[Contract]) -> Self {
        ContractsDoc {
            contracts: cs
                .iter()
                .map(|c| ContractDoc {
                    src: c.source.to_string(),
                    dst: c.dest.to_string(),
                    bandwidth: c.bandwidth,
                    priority: c.priority,
                })
                .collect(),
        }
    }

    pub fn to_contracts(&self) -> Vec<Contract> {
        self.contracts
            .iter()
            .map(|c| Contract::new(&c.src, &c.dst, c.bandwidth, c.priority))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RequestDoc {
    pub src: String,
    pub dst: String,
    pub bits: u64,
}

impl From<&Request> for RequestDoc {
    fn from(r: &Request) -> Self {
        RequestDoc {
            src: r.source.to_string(),
            dst: r.dest.to_string(),
            bits: r.bits,
        }
    }
}

impl From<&RequestDoc> for Request {
    fn from(r: &RequestDoc) -> Self {
        Request::new(&r.src, &r.dst, r.bits)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceDoc {
    pub mu: u64,
    pub requests: Vec<RequestDoc>,
}

impl TraceDoc {
    pub fn from_trace(t: &Trace) -> Self {
        TraceDoc {
            mu: t.mu,
            requests: t.requests.iter().map(RequestDoc::from).collect(),
        }
    }

    pub fn to_trace(&self) -> Trace {
        Trace {
            mu: self.mu,
            requests: self.requests.iter().map(Request::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LinkDoc {
    pub src: String,
    pub dst: String,
}

pub fn path_to_doc(p: &Path) -> Vec<LinkDoc> {
    p.edges()
        .iter()
        .map(|e| LinkDoc {
            src: e.src.to_string(),
            dst: e.dst.to_string(),
        })
        .collect()
}

pub fn path_from_doc(links: &[LinkDoc]) -> Path {
    Path(links.iter().map(|l| Edge::new(l.src.as_str(), l.dst.as_str())).collect())
}

fn optional_path(p: &Path) -> Option<Vec<LinkDoc>> {
    (!p.is_empty()).then(|| path_to_doc(p))
}

fn parse_rational(s: &str) -> Result<Rational, DocError> {
    parse_fraction(s).ok_or_else(|| DocError::Invalid(format!("not a num/den fraction: {s:?}")))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContractReport {
    pub src: String,
    pub dst: String,
    pub demand: u64,
    pub priority: u64,
    pub path_index: usize,
    pub path: Vec<LinkDoc>,
    pub grant: u64,
    pub suggested_rejection: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolutionReport {
    pub objective: ObjectiveKind,
    pub objective_value: String,
    pub objective_decimal: String,
    pub all_granted: bool,
    pub constraints_ok: bool,
    pub contracts: Vec<ContractReport>,
}

impl SolutionReport {
    /// Report for a solver output. Every contract must have exactly one selected path.
    pub fn new(problem: &PlanProblem, sol: &PlanSolution) -> Self {
        let check = check_solution(problem, sol);
        let contracts = problem
            .contracts
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let m = sol.chosen_path(i).expect("solver selects exactly one path");
                ContractReport {
                    src: c.source.to_string(),
                    dst: c.dest.to_string(),
                    demand: c.bandwidth,
                    priority: c.priority,
                    path_index: m,
                    path: path_to_doc(&problem.path_sets[i].paths[m]),
                    grant: sol.grant[i],
                    suggested_rejection: sol.is_suggested_rejection(i),
                }
            })
            .collect();
        SolutionReport {
            objective: problem.objective,
            objective_value: to_fraction_string(&sol.objective_value),
            objective_decimal: to_decimal_string(&sol.objective_value, DECIMAL_PLACES),
            all_granted: sol.fully_granted(problem),
            constraints_ok: check.all_passed(),
            contracts,
        }
    }

    /// Rebuilds the full solution against the problem it was produced for.
    pub fn to_solution(&self, problem: &PlanProblem) -> Result<PlanSolution, DocError> {
        if self.contracts.len() != problem.contracts.len() {
            return Err(DocError::Invalid(format!(
                "report has {} contracts, problem has {}",
                self.contracts.len(),
                problem.contracts.len()
            )));
        }
        let chosen: Vec<usize> = self.contracts.iter().map(|c| c.path_index).collect();
        let grants: Vec<u64> = self.contracts.iter().map(|c| c.grant).collect();
        let problem = problem.with_objective(self.objective);
        let sol = problem
            .solution_from_choice(&chosen, &grants)
            .map_err(|e: PlanError| DocError::Invalid(e.to_string()))?;
        if sol.objective_value != parse_rational(&self.objective_value)? {
            return Err(DocError::Invalid("objective value does not match grants".into()));
        }
        Ok(sol)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DecisionDoc {
    pub request: RequestDoc,
    /// `null` for a rejected request.
    pub path: Option<Vec<LinkDoc>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResidualDoc {
    pub src: String,
    pub dst: String,
    pub residual: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RatioDoc {
    pub strategy: Strategy,
    pub algorithm_served: usize,
    pub opt_served: usize,
    pub ratio: String,
    pub ratio_decimal: String,
    pub opt_assignment: Vec<Option<Vec<LinkDoc>>>,
}

impl RatioDoc {
    pub fn from_report(r: &RatioReport) -> Self {
        RatioDoc {
            strategy: r.strategy,
            algorithm_served: r.algorithm_served,
            opt_served: r.opt_served,
            ratio: to_fraction_string(&r.ratio),
            ratio_decimal: to_decimal_string(&r.ratio, DECIMAL_PLACES),
            opt_assignment: r.opt_assignment.iter().map(optional_path).collect(),
        }
    }

    pub fn to_report(&self) -> Result<RatioReport, DocError> {
        Ok(RatioReport {
            strategy: self.strategy,
            algorithm_served: self.algorithm_served,
            opt_served: self.opt_served,
            ratio: parse_rational(&self.ratio)?,
            opt_assignment: self
                .opt_assignment
                .iter()
                .map(|p| p.as_deref().map(path_from_doc).unwrap_or_default())
                .collect(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulationReport {
    pub strategy: Strategy,
    pub decisions: Vec<DecisionDoc>,
    pub served: usize,
    pub rejected: usize,
    pub final_residual: Vec<ResidualDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub competitive: Option<RatioDoc>,
}

impl SimulationReport {
    pub fn new(trace: &Trace, res: &SimulationResult) -> Self {
        SimulationReport {
            strategy: res.strategy,
            decisions: trace
                .requests
                .iter()
                .zip(&res.decisions)
                .map(|(r, p)| DecisionDoc {
                    request: r.into(),
                    path: optional_path(p),
                })
                .collect(),
            served: res.served_count,
            rejected: res.rejected_count,
            final_residual: res
                .final_state
                .residual
                .iter()
                .map(|(e, &r)| ResidualDoc {
                    src: e.src.to_string(),
                    dst: e.dst.to_string(),
                    residual: r,
                })
                .collect(),
            competitive: None,
        }
    }

    pub fn to_result(&self) -> SimulationResult {
        SimulationResult {
            strategy: self.strategy,
            decisions: self
                .decisions
                .iter()
                .map(|d| d.path.as_deref().map(path_from_doc).unwrap_or_default())
                .collect(),
            served_count: self.served,
            rejected_count: self.rejected,
            final_state: BufferState {
                residual: self
                    .final_residual
                    .iter()
                    .map(|r| (Edge::new(r.src.as_str(), r.dst.as_str()), r.residual))
                    .collect(),
            },
        }
    }
}

pub const NETWORK_FILE: &str = "network.json";
pub const TRACE_FILE: &str = "trace.json";
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestDoc {
    pub construction: Construction,
    pub edge_count: u64,
    pub beta: u64,
    pub mu: u64,
    pub trace_length: usize,
    pub predicted_ratio: String,
    pub predicted_ratio_decimal: String,
    pub network: String,
    pub trace: String,
}

impl ManifestDoc {
    pub fn new(inst: &AdversarialInstance) -> Self {
        ManifestDoc {
            construction: inst.construction,
            edge_count: inst.params.edge_count,
            beta: inst.params.beta,
            mu: inst.params.mu,
            trace_length: inst.trace.requests.len(),
            predicted_ratio: to_fraction_string(&inst.predicted_ratio),
            predicted_ratio_decimal: to_decimal_string(&inst.predicted_ratio, DECIMAL_PLACES),
            network: NETWORK_FILE.to_string(),
            trace: TRACE_FILE.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RateDoc {
    pub src: String,
    pub dst: String,
    pub rate: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefreshDoc {
    pub period: usize,
    pub rates: Vec<RateDoc>,
}

impl RefreshDoc {
    pub fn to_config(&self) -> RefreshConfig {
        RefreshConfig {
            period: self.period,
            rates: self
                .rates
                .iter()
                .map(|r| (Edge::new(r.src.as_str(), r.dst.as_str()), r.rate))
                .collect::<BTreeMap<_, _>>(),
        }
    }
}

/// Run configuration. Missing keys take their defaults; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub max_hops: usize,
    pub objective: ObjectiveKind,
    pub strategy: Strategy,
    pub refresh: Option<RefreshDoc>,
    pub search_budget: u64,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            max_hops: DEFAULT_MAX_HOPS,
            objective: ObjectiveKind::Pescf,
            strategy: Strategy::Sap,
            refresh: None,
            search_budget: DEFAULT_STATE_BUDGET,
            seed: 0,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), DocError> {
        if self.max_hops == 0 {
            return Err(DocError::Invalid("max_hops must be positive".into()));
        }
        if self.search_budget == 0 {
            return Err(DocError::Invalid("search_budget must be positive".into()));
        }
        if let Some(r) = &self.refresh {
            if r.period == 0 {
                return Err(DocError::Invalid("refresh.period must be positive".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::example_topology;

    #[test]
    fn network_doc_shape() {
        let doc = NetworkDoc::from_network(&example_topology());
        let json = serde_json::to_value(&doc).unwrap();
        assert_eq!(json["nodes"][0], "Q1");
        assert_eq!(json["edges"][2]["src"], "Q2");
        assert_eq!(json["edges"][2]["capacity"], 1);
        assert_eq!(doc.to_network().unwrap(), example_topology());
    }

    #[test]
    fn config_defaults_and_unknown_keys() {
        let cfg: RunConfig = serde_json::from_str("{}").unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.max_hops, 3);
        assert_eq!(cfg.objective, ObjectiveKind::Pescf);
        let cfg: RunConfig = serde_json::from_str(r#"{"objective":"EDGR","strategy":"WSP"}"#).unwrap();
        assert_eq!(cfg.objective, ObjectiveKind::Edgr);
        assert_eq!(cfg.strategy, Strategy::Wsp);
        assert!(serde_json::from_str::<RunConfig>(r#"{"max_hop":2}"#).is_err());
    }

    #[test]
    fn malformed_json_reports_position() {
        let err = serde_json::from_str::<TraceDoc>("{\"mu\": 2,\n \"requests\": [ {\"src\": 1} ]}").unwrap_err();
        assert!(err.to_string().contains("line 2"));
    }

    #[test]
    fn manifest_construction_names() {
        let v = serde_json::to_value(Construction::SapWorst).unwrap();
        assert_eq!(v, "SAP_WORST");
    }
}
