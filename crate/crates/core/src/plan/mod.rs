//! Route planning with fair suggestions for infeasible demand.
//!
//! Each contract gets exactly one path and an integer grant no larger than its
//! demand; per-edge grant sums respect capacities. The planner minimizes one of
//! three fairness objectives exactly.

mod brute;
mod check;
mod objective;
mod solver;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::net::{Edge, Network, NodeId};
use crate::paths::{enumerate_paths, PathError, PathSet};
use crate::rational::Rational;

pub use brute::{brute_force_solve, brute_force_solve_with, DEFAULT_ORACLE_BOUND};
pub use check::{check_solution, ConstraintCheck, ConstraintFamily, ConstraintReport};
pub use objective::{objective_edgr, objective_escf, objective_pescf, objective_value};
pub use solver::{solve, solve_with, SolveOptions, DEFAULT_NODE_BUDGET};

/// Planned demand `(source, dest, bandwidth, priority)`. Ordered field by field.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Contract {
    pub source: NodeId,
    pub dest: NodeId,
    pub bandwidth: u64,
    pub priority: u64,
}

impl Contract {
    pub fn new(source: &str, dest: &str, bandwidth: u64, priority: u64) -> Self {
        Contract {
            source: source.into(),
            dest: dest.into(),
            bandwidth,
            priority,
        }
    }
}

impl fmt::Display for Contract {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({},{},{},{})",
            self.source, self.dest, self.bandwidth, self.priority
        )
    }
}

/// Fairness objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ObjectiveKind {
    /// Priority-weighted sum of squared shortfalls.
    Pescf,
    /// Unweighted sum of squared shortfalls.
    Escf,
    /// Pairwise squared differences of granted ratios minus total grant.
    Edgr,
}

impl ObjectiveKind {
    pub const ALL: [ObjectiveKind; 3] = [ObjectiveKind::Pescf, ObjectiveKind::Escf, ObjectiveKind::Edgr];
}

impl fmt::Display for ObjectiveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObjectiveKind::Pescf => "PESCF",
            ObjectiveKind::Escf => "ESCF",
            ObjectiveKind::Edgr => "EDGR",
        })
    }
}

impl FromStr for ObjectiveKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "PESCF" => Ok(ObjectiveKind::Pescf),
            "ESCF" => Ok(ObjectiveKind::Escf),
            "EDGR" => Ok(ObjectiveKind::Edgr),
            _ => Err(format!("unknown objective {s:?} (expected PESCF, ESCF or EDGR)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error("contract list is empty")]
    NoContracts,
    #[error("contract {contract} is malformed: {reason}")]
    InvalidContract { contract: Contract, reason: String },
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("no route exists for {}", .0.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", "))]
    NoRoute(Vec<Contract>),
    #[error("expected {expected} grants, got {got}")]
    GrantCount { expected: usize, got: usize },
    #[error("grant {grant} for contract {index} outside 0..={demand}")]
    GrantOutOfRange { index: usize, grant: u64, demand: u64 },
    #[error("search budget of {budget} nodes exhausted")]
    BudgetExceeded { budget: u64 },
    #[error("oracle search space {size} exceeds bound {bound}")]
    OracleBoundExceeded { size: u128, bound: u128 },
}

/// Fully built planning instance. Contracts are sorted; each has at least one path.
#[derive(Debug, Clone)]
pub struct PlanProblem {
    pub net: Network,
    pub contracts: Vec<Contract>,
    pub path_sets: Vec<PathSet>,
    pub objective: ObjectiveKind,
}

pub fn build_problem(
    net: &Network,
    contracts: &[Contract],
    max_hops: usize,
    objective: ObjectiveKind,
) -> Result<PlanProblem, PlanError> {
    if contracts.is_empty() {
        return Err(PlanError::NoContracts);
    }
    let mut contracts = contracts.to_vec();
    contracts.sort();

    for c in &contracts {
        let reason = if c.bandwidth == 0 {
            Some("bandwidth must be positive")
        } else if c.priority == 0 {
            Some("priority must be positive")
        } else {
            None
        };
        if let Some(reason) = reason {
            return Err(PlanError::InvalidContract {
                contract: c.clone(),
                reason: reason.to_string(),
            });
        }
    }

    let mut path_sets = Vec::with_capacity(contracts.len());
    let mut unroutable = Vec::new();
    for c in &contracts {
        let ps = enumerate_paths(net, &c.source, &c.dest, max_hops)?;
        if ps.is_empty() {
            unroutable.push(c.clone());
        }
        path_sets.push(ps);
    }
    if !unroutable.is_empty() {
        return Err(PlanError::NoRoute(unroutable));
    }

    Ok(PlanProblem {
        net: net.clone(),
        contracts,
        path_sets,
        objective,
    })
}

impl PlanProblem {
    pub fn with_objective(&self, objective: ObjectiveKind) -> PlanProblem {
        PlanProblem {
            objective,
            ..self.clone()
        }
    }

    /// Builds the full decision-variable view for one path choice per contract.
    pub fn solution_from_choice(
        &self,
        chosen: &[usize],
        grants: &[u64],
    ) -> Result<PlanSolution, PlanError> {
        let value = objective_value(self, self.objective, grants)?;
        let mut selection = Vec::with_capacity(self.contracts.len());
        let mut per_path_grant = Vec::with_capacity(self.contracts.len());
        let mut edge_grant = Vec::with_capacity(self.contracts.len());
        for (i, ps) in self.path_sets.iter().enumerate() {
            let m = chosen[i];
            if m >= ps.len() {
                return Err(PathError::IndexOutOfRange {
                    index: m,
                    len: ps.len(),
                }
                .into());
            }
            selection.push((0..ps.len()).map(|j| j == m).collect());
            per_path_grant.push((0..ps.len()).map(|j| if j == m { grants[i] } else { 0 }).collect());
            let path = &ps.paths[m];
            edge_grant.push(
                self.net
                    .edges()
                    .map(|e| (e.clone(), if path.contains(e) { grants[i] } else { 0 }))
                    .collect(),
            );
        }
        Ok(PlanSolution {
            selection,
            grant: grants.to_vec(),
            per_path_grant,
            edge_grant,
            objective_value: value,
        })
    }
}

/// Assignment of paths and grants for every contract of a [`PlanProblem`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanSolution {
    /// `selection[i][m]` is set iff contract `i` is routed on its `m`-th path.
    pub selection: Vec<Vec<bool>>,
    pub grant: Vec<u64>,
    pub per_path_grant: Vec<Vec<u64>>,
    pub edge_grant: Vec<BTreeMap<Edge, u64>>,
    pub objective_value: Rational,
}

impl PlanSolution {
    /// The selected path index of contract `i`, if exactly one is selected.
    pub fn chosen_path(&self, i: usize) -> Option<usize> {
        let sel = self.selection.get(i)?;
        let mut it = sel.iter().enumerate().filter(|(_, &s)| s).map(|(m, _)| m);
        match (it.next(), it.next()) {
            (Some(m), None) => Some(m),
            _ => None,
        }
    }

    pub fn chosen_paths(&self) -> Vec<Option<usize>> {
        (0..self.selection.len()).map(|i| self.chosen_path(i)).collect()
    }

    /// Zero-grant contracts keep their path but are reported as suggested rejections.
    pub fn is_suggested_rejection(&self, i: usize) -> bool {
        self.grant.get(i) == Some(&0)
    }

    pub fn fully_granted(&self, problem: &PlanProblem) -> bool {
        self.grant
            .iter()
            .zip(&problem.contracts)
            .all(|(&g, c)| g == c.bandwidth)
    }
}

/// Contracts from the three-node example with the typo in the second tuple normalized.
pub fn example_contracts() -> Vec<Contract> {
    vec![
        Contract::new("Q1", "Q2", 2, 1),
        Contract::new("Q2", "Q1", 3, 10),
        Contract::new("Q2", "Q3", 2, 100),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{example_topology, validate_network, RawEdge};

    #[test]
    fn example_problem_shape() {
        let net = example_topology();
        let pb = build_problem(&net, &example_contracts(), 2, ObjectiveKind::Pescf).unwrap();
        assert_eq!(pb.contracts.len(), 3);
        let sizes: Vec<usize> = pb.path_sets.iter().map(PathSet::len).collect();
        assert_eq!(sizes, vec![2, 2, 2]);
    }

    #[test]
    fn contracts_sorted_lexicographically() {
        let net = example_topology();
        let mut cs = example_contracts();
        cs.reverse();
        let pb = build_problem(&net, &cs, 3, ObjectiveKind::Escf).unwrap();
        assert_eq!(pb.contracts, example_contracts());
    }

    #[test]
    fn unroutable_contract_named() {
        let net = validate_network(
            &["a", "b", "c"],
            &[RawEdge {
                src: "a".into(),
                dst: "b".into(),
                capacity: 1,
            }],
        )
        .unwrap();
        let err = build_problem(&net, &[Contract::new("b", "c", 1, 1)], 3, ObjectiveKind::Pescf)
            .unwrap_err();
        assert_eq!(err, PlanError::NoRoute(vec![Contract::new("b", "c", 1, 1)]));
    }

    #[test]
    fn empty_contracts_rejected() {
        let net = example_topology();
        assert_eq!(
            build_problem(&net, &[], 3, ObjectiveKind::Pescf).unwrap_err(),
            PlanError::NoContracts
        );
    }

    #[test]
    fn zero_bandwidth_rejected() {
        let net = example_topology();
        let err = build_problem(&net, &[Contract::new("Q1", "Q2", 0, 1)], 3, ObjectiveKind::Pescf)
            .unwrap_err();
        assert!(matches!(err, PlanError::InvalidContract { .. }));
    }

    #[test]
    fn unknown_node_rejected() {
        let net = example_topology();
        let err = build_problem(&net, &[Contract::new("Q1", "Q9", 1, 1)], 3, ObjectiveKind::Pescf)
            .unwrap_err();
        assert_eq!(err, PlanError::Path(PathError::UnknownNode("Q9".into())));
    }

    #[test]
    fn objective_kind_parsing() {
        assert_eq!("edgr".parse::<ObjectiveKind>(), Ok(ObjectiveKind::Edgr));
        assert!("fair".parse::<ObjectiveKind>().is_err());
    }
}
