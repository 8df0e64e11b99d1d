//! Exact solver: path assignments are enumerated in lexicographic order; for a
//! fixed assignment the integer grants are found by best-first search over
//! grant prefixes with an admissible lower bound.
//!
//! Scores are integers: the objective multiplied by `scale^2`, where `scale` is
//! the lcm of all demands for EDGR and 1 otherwise.

use std::cmp::{Ordering, Reverse};
use std::collections::{BTreeMap, BinaryHeap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{ObjectiveKind, PlanError, PlanProblem, PlanSolution};
use crate::net::Edge;

pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    /// Maximum number of search nodes expanded across all path assignments.
    pub node_budget: u64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

pub fn solve(problem: &PlanProblem) -> Result<PlanSolution, PlanError> {
    solve_with(problem, SolveOptions::default())
}

pub fn solve_with(problem: &PlanProblem, opts: SolveOptions) -> Result<PlanSolution, PlanError> {
    let ctx = Context::new(problem);
    let sizes: Vec<usize> = problem.path_sets.iter().map(|ps| ps.len()).collect();
    let mut expanded = 0u64;
    let mut best: Option<(BigInt, Vec<usize>, Vec<u64>)> = None;

    let mut choice = vec![0usize; sizes.len()];
    loop {
        let routes: Vec<&[usize]> = choice
            .iter()
            .enumerate()
            .map(|(i, &m)| ctx.paths[i][m].as_slice())
            .collect();
        let cutoff = best.as_ref().map(|b| &b.0);
        if let Some((score, grants)) = ctx.best_grants(&routes, cutoff, &mut expanded, opts.node_budget)? {
            // Assignments are visited in increasing order, so only a strictly
            // better score may replace the incumbent.
            if best.as_ref().is_none_or(|b| score < b.0) {
                best = Some((score, choice.clone(), grants));
            }
        }
        if !advance(&mut choice, &sizes) {
            break;
        }
    }

    let (_, chosen, grants) = best.expect("zero grants are always feasible");
    problem.solution_from_choice(&chosen, &grants)
}

/// Odometer increment, last position fastest. Returns false after the final vector.
fn advance(v: &mut [usize], sizes: &[usize]) -> bool {
    for i in (0..v.len()).rev() {
        v[i] += 1;
        if v[i] < sizes[i] {
            return true;
        }
        v[i] = 0;
    }
    false
}

struct Context {
    kind: ObjectiveKind,
    demand: Vec<u64>,
    priority: Vec<u64>,
    /// `scale / b_i` for EDGR.
    unit: Vec<BigInt>,
    scale_sq: BigInt,
    capacity: Vec<u64>,
    /// Per contract, per path: edge indices.
    paths: Vec<Vec<Vec<usize>>>,
}

#[derive(PartialEq, Eq)]
struct Node {
    bound: BigInt,
    grants: Vec<u64>,
    loads: Vec<u64>,
}

impl Ord for Node {
    fn cmp(&self, other: &Self) -> Ordering {
        self.bound
            .cmp(&other.bound)
            .then_with(|| self.grants.cmp(&other.grants))
    }
}

impl PartialOrd for Node {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Context {
    fn new(problem: &PlanProblem) -> Self {
        let index: BTreeMap<&Edge, usize> =
            problem.net.edges().enumerate().map(|(i, e)| (e, i)).collect();
        let capacity = problem.net.capacities().values().copied().collect();
        let paths = problem
            .path_sets
            .iter()
            .map(|ps| {
                ps.paths
                    .iter()
                    .map(|p| p.edges().iter().map(|e| index[e]).collect())
                    .collect()
            })
            .collect();
        let demand: Vec<u64> = problem.contracts.iter().map(|c| c.bandwidth).collect();
        let priority = problem.contracts.iter().map(|c| c.priority).collect();

        let scale = match problem.objective {
            ObjectiveKind::Edgr => demand
                .iter()
                .fold(BigInt::one(), |acc, &b| acc.lcm(&BigInt::from(b))),
            _ => BigInt::one(),
        };
        let unit = demand.iter().map(|&b| &scale / BigInt::from(b)).collect();
        Context {
            kind: problem.objective,
            demand,
            priority,
            unit,
            scale_sq: &scale * &scale,
            capacity,
            paths,
        }
    }

    fn residual_bottleneck(&self, route: &[usize], loads: &[u64]) -> u64 {
        route
            .iter()
            .map(|&e| self.capacity[e] - loads[e])
            .min()
            .unwrap_or(0)
    }

    /// Lower bound on the scaled score of any completion of `grants`.
    fn bound(&self, routes: &[&[usize]], grants: &[u64], loads: &[u64]) -> BigInt {
        let k = grants.len();
        let reachable = |j: usize| self.demand[j].min(self.residual_bottleneck(routes[j], loads));
        match self.kind {
            ObjectiveKind::Pescf | ObjectiveKind::Escf => {
                let weight = |i: usize| match self.kind {
                    ObjectiveKind::Pescf => BigInt::from(self.priority[i]),
                    _ => BigInt::one(),
                };
                let mut total = BigInt::zero();
                for i in 0..self.demand.len() {
                    let g = if i < k { grants[i] } else { reachable(i) };
                    let short = BigInt::from(self.demand[i] - g);
                    total += weight(i) * &short * &short;
                }
                total
            }
            ObjectiveKind::Edgr => {
                let scaled: Vec<BigInt> = grants
                    .iter()
                    .enumerate()
                    .map(|(i, &g)| BigInt::from(g) * &self.unit[i])
                    .collect();
                let mut total = BigInt::zero();
                for i in 0..k {
                    for j in i + 1..k {
                        let d = &scaled[i] - &scaled[j];
                        total += &d * &d;
                    }
                }
                let granted: u128 = grants.iter().map(|&g| g as u128).sum::<u128>()
                    + (k..self.demand.len()).map(|j| reachable(j) as u128).sum::<u128>();
                total - BigInt::from(granted) * &self.scale_sq
            }
        }
    }

    /// Best-first search over grant prefixes for a fixed route per contract.
    /// Nodes whose bound reaches `cutoff` are discarded.
    fn best_grants(
        &self,
        routes: &[&[usize]],
        cutoff: Option<&BigInt>,
        expanded: &mut u64,
        budget: u64,
    ) -> Result<Option<(BigInt, Vec<u64>)>, PlanError> {
        let n = self.demand.len();
        let loads = vec![0u64; self.capacity.len()];
        let root = Node {
            bound: self.bound(routes, &[], &loads),
            grants: Vec::new(),
            loads,
        };
        if cutoff.is_some_and(|c| root.bound >= *c) {
            return Ok(None);
        }
        let mut heap = BinaryHeap::new();
        heap.push(Reverse(root));

        while let Some(Reverse(node)) = heap.pop() {
            let k = node.grants.len();
            if k == n {
                return Ok(Some((node.bound, node.grants)));
            }
            *expanded += 1;
            if *expanded > budget {
                return Err(PlanError::BudgetExceeded { budget });
            }
            let route = routes[k];
            let upper = self.demand[k].min(self.residual_bottleneck(route, &node.loads));
            for g in 0..=upper {
                let mut grants = node.grants.clone();
                grants.push(g);
                let mut loads = node.loads.clone();
                for &e in route {
                    loads[e] += g;
                }
                let bound = self.bound(routes, &grants, &loads);
                if cutoff.is_some_and(|c| bound >= *c) {
                    continue;
                }
                heap.push(Reverse(Node {
                    bound,
                    grants,
                    loads,
                }));
            }
        }
        Ok(None)
    }
}
